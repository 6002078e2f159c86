#pragma once

#include <Eigen/Dense>

namespace curvatura {

struct SymEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // orthonormal columns, matched to values
};

/// Deterministic symmetric eigendecomposition for the 1x1 / 2x2 / 3x3 matrices
/// used throughout: closed form up to 2x2, cyclic Jacobi for 3x3 (off-diagonal
/// norm driven below 1e-13 * scale). Eigenvalues are sorted ascending and each
/// eigenvector's sign is fixed by making its largest-magnitude entry positive.
SymEigen sym_eigen(const Eigen::MatrixXd& m);

}  // namespace curvatura

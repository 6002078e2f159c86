#pragma once

#include <string>

#include "curvatura/jet.hpp"
#include "curvatura/quadric.hpp"

namespace curvatura {

struct OracleReport {
  std::string name;
  double max_residual = 0.0;
  int samples = 0;
  double threshold = 0.0;
  bool passed = false;
  std::string details;  // worst offender
};

/// Finite-difference check of the focal set: evaluates det Hess F^q of the
/// squared-distance family on a grid of normal-frame points q (central
/// differences with step h, no root polishing) and matches its zero crossings
/// against the algebraic caustic polynomial. The reported residual is the
/// first-order distance from each interpolated crossing to the algebraic zero
/// set; the threshold is c*h^2 plus one grid spacing.
OracleReport focal_set_oracle(const SurfaceSpec& spec, double s0, double t0,
                              double q_min, double q_max, int grid_n,
                              double h);

/// Central second difference of the normal section alpha(r) = gamma(p + r L u)
/// projected on the normal frame, against the algebraic curvature vector.
OracleReport curvature_vector_oracle(const SurfaceSpec& spec, double s0,
                                     double t0, double theta, double h);

/// Characteristic-polynomial coefficients recomputed independently by cofactor
/// expansion and evaluated at each reported eigenvalue; eigenvector
/// orthonormality is verified alongside.
OracleReport eigen_oracle(const GaussForm& gf);

}  // namespace curvatura

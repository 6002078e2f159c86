#pragma once

#include <Eigen/Dense>
#include <optional>

#include "curvatura/common.hpp"
#include "curvatura/quadform.hpp"
#include "curvatura/smalleig.hpp"

namespace curvatura {

/// The quadratic part of a surface at a point, expressed in an adapted
/// orthonormal frame: phi(s,t) = 1/2 (s^2 A + 2st B + t^2 C) with A,B,C in the
/// normal space R^codim. Components are the binary quadratic forms
/// Q_i = 1/2 (a_i s^2 + 2 b_i st + c_i t^2).
struct LocalQuadraticMap {
  int codim = 2;  // 1, 2 or 3
  Eigen::VectorXd A, B, C;

  QuadForm2 component(int i) const { return {A[i], B[i], C[i]}; }

  Eigen::VectorXd phi(double s, double t) const {
    return 0.5 * (s * s * A + 2.0 * s * t * B + t * t * C);
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (int i = 0; i < codim; ++i)
      m = std::max({m, std::abs(A[i]), std::abs(B[i]), std::abs(C[i])});
    return m;
  }
};

LocalQuadraticMap make_lqm(const Eigen::VectorXd& A, const Eigen::VectorXd& B,
                           const Eigen::VectorXd& C);

/// Symmetric matrix of the Gauss quadratic form: the psi-Gram matrix of the
/// components Q_i, with its deterministic eigendecomposition.
struct GaussForm {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd eigenvalues;   // ascending (the principal focal curvatures)
  Eigen::MatrixXd eigenvectors;  // principal basis, columns

  /// G_p(q) = 1/2 q^T [G_p] q; 2 G_p(n) is the directional Gauss curvature.
  double quad(const Eigen::VectorXd& q) const {
    return 0.5 * q.dot(matrix * q);
  }
};

GaussForm gauss_form(const LocalQuadraticMap& lqm);

/// Scalar invariants at a point. N and tau are signed relative to the chosen
/// frame orientation; for codim 3 with tau = 0 but (A-C)x B nonzero the sign
/// of N is not determined and n_sign_known is false.
struct Invariants {
  int codim = 2;
  double K = 0.0;      // trace of [G_p]
  double Delta = 0.0;  // det of [G_p]
  std::optional<double> N;     // codim >= 2
  bool n_sign_known = true;
  std::optional<double> Acal;  // codim 3
  std::optional<double> tau;   // codim 3
  Eigen::VectorXd H;           // mean curvature vector (A+C)/2
  Eigen::VectorXd focal;       // principal focal curvatures, ascending
};

Invariants invariants_of(const LocalQuadraticMap& lqm);

/// Parametrized indicatrix ellipse E(theta) = center + cos(2 theta) u_axis
/// + sin(2 theta) v_axis, the set of curvature vectors of normal sections.
struct EllipseParam {
  Eigen::VectorXd center;  // H
  Eigen::VectorXd u_axis;  // (A - C)/2
  Eigen::VectorXd v_axis;  // B

  Eigen::VectorXd at(double theta) const {
    return center + std::cos(2.0 * theta) * u_axis +
           std::sin(2.0 * theta) * v_axis;
  }
};

EllipseParam indicatrix(const LocalQuadraticMap& lqm);

/// [[<A,n>, <B,n>], [<B,n>, <C,n>]]: the tangent block of the Gauss-map
/// differential at unit normal n; det equals 2 G_p(n). Throws on non-unit n.
Eigen::Matrix2d dGamma_perp(const LocalQuadraticMap& lqm,
                            const Eigen::VectorXd& n);

/// Curvature vector of the normal section in direction (cos theta, sin theta):
/// u1^2 A + 2 u1 u2 B + u2^2 C, which equals E(theta).
Eigen::VectorXd normal_section_curvature(const LocalQuadraticMap& lqm,
                                         double theta);

}  // namespace curvatura

#include "curvatura/invariants.hpp"

#include <stdexcept>

namespace curvatura {
namespace {

Eigen::Vector3d cross3(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return Eigen::Vector3d(x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2],
                         x[0] * y[1] - x[1] * y[0]);
}

}  // namespace

LocalQuadraticMap make_lqm(const Eigen::VectorXd& A, const Eigen::VectorXd& B,
                           const Eigen::VectorXd& C) {
  const int l = static_cast<int>(A.size());
  if (l < 1 || l > 3 || B.size() != l || C.size() != l)
    throw std::invalid_argument("make_lqm: codimension must be 1..3");
  return LocalQuadraticMap{l, A, B, C};
}

GaussForm gauss_form(const LocalQuadraticMap& lqm) {
  const int l = lqm.codim;
  GaussForm g;
  g.matrix.resize(l, l);
  for (int i = 0; i < l; ++i)
    for (int j = i; j < l; ++j) {
      const double kij = psi_inner(lqm.component(i), lqm.component(j));
      g.matrix(i, j) = kij;
      g.matrix(j, i) = kij;
    }
  SymEigen e = sym_eigen(g.matrix);
  g.eigenvalues = e.values;
  g.eigenvectors = e.vectors;
  return g;
}

Invariants invariants_of(const LocalQuadraticMap& lqm) {
  const int l = lqm.codim;
  const GaussForm g = gauss_form(lqm);

  Invariants inv;
  inv.codim = l;
  inv.K = g.matrix.trace();
  inv.Delta = g.matrix.determinant();
  inv.H = 0.5 * (lqm.A + lqm.C);
  inv.focal = g.eigenvalues;

  const double scale = std::max(1.0, lqm.max_abs_coeff());

  if (l == 2) {
    const double n_direct = (lqm.A[0] - lqm.C[0]) * lqm.B[1] -
                            (lqm.A[1] - lqm.C[1]) * lqm.B[0];
    const double n_bracket =
        trace_form(poisson_bracket(lqm.component(0), lqm.component(1)));
    if (rel_err(n_direct, n_bracket, scale * scale) > 1e-10)
      throw std::logic_error("invariants_of: N cross-check failed");
    inv.N = n_direct;
  } else if (l == 3) {
    const Eigen::Vector3d half_u = 0.5 * (lqm.A - lqm.C);
    const Eigen::Vector3d nvec = cross3(2.0 * half_u, lqm.B);  // (A-C) x B
    const double tau = cross3(half_u, lqm.B).dot(inv.H);
    const double tau_bracket = psi_inner(
        lqm.component(0), poisson_bracket(lqm.component(1), lqm.component(2)));
    if (rel_err(tau, tau_bracket, scale * scale * scale) > 1e-10)
      throw std::logic_error("invariants_of: tau cross-check failed");
    inv.tau = tau;

    double acal = 0.0;
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3;
      acal += g.matrix(i, i) * g.matrix(j, j) - g.matrix(i, j) * g.matrix(i, j);
    }
    inv.Acal = acal;

    const double mag = nvec.norm();
    const double tau_floor = kDefaultTol * scale * scale * scale;
    if (std::abs(tau) > tau_floor) {
      inv.N = (tau >= 0.0 ? mag : -mag);
    } else {
      inv.N = mag;  // sign undetermined at tau = 0
      inv.n_sign_known = mag <= tau_floor;
    }
  }
  return inv;
}

EllipseParam indicatrix(const LocalQuadraticMap& lqm) {
  return EllipseParam{0.5 * (lqm.A + lqm.C), 0.5 * (lqm.A - lqm.C), lqm.B};
}

Eigen::Matrix2d dGamma_perp(const LocalQuadraticMap& lqm,
                            const Eigen::VectorXd& n) {
  if (n.size() != lqm.codim)
    throw std::invalid_argument("dGamma_perp: dimension mismatch");
  if (std::abs(n.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("dGamma_perp: n must be a unit vector");
  Eigen::Matrix2d m;
  const double an = lqm.A.dot(n), bn = lqm.B.dot(n), cn = lqm.C.dot(n);
  m << an, bn, bn, cn;
  return m;
}

Eigen::VectorXd normal_section_curvature(const LocalQuadraticMap& lqm,
                                         double theta) {
  const double u1 = std::cos(theta), u2 = std::sin(theta);
  return u1 * u1 * lqm.A + 2.0 * u1 * u2 * lqm.B + u2 * u2 * lqm.C;
}

}  // namespace curvatura

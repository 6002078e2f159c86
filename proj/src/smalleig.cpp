#include "curvatura/smalleig.hpp"

#include <cmath>
#include <stdexcept>

namespace curvatura {
namespace {

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  int imax = 0;
  for (int i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  if (v[imax] < 0.0) v = -v;
}

SymEigen eigen_1x1(const Eigen::MatrixXd& m) {
  SymEigen e;
  e.values = Eigen::VectorXd::Constant(1, m(0, 0));
  e.vectors = Eigen::MatrixXd::Identity(1, 1);
  return e;
}

SymEigen eigen_2x2(const Eigen::MatrixXd& m) {
  const double a = m(0, 0), b = m(0, 1), c = m(1, 1);
  SymEigen e;
  e.values.resize(2);
  e.vectors.resize(2, 2);
  const double mean = 0.5 * (a + c);
  const double r = std::hypot(0.5 * (a - c), b);
  e.values[0] = mean - r;
  e.values[1] = mean + r;
  Eigen::Vector2d v0;
  if (r == 0.0) {
    v0 << 1.0, 0.0;
  } else {
    // Pick the better-conditioned of the two expressions for the eigenvector.
    Eigen::Vector2d cand1(b, e.values[0] - a);
    Eigen::Vector2d cand2(e.values[0] - c, b);
    v0 = (cand1.norm() >= cand2.norm()) ? cand1 : cand2;
    if (v0.norm() == 0.0) v0 << 1.0, 0.0;
    v0.normalize();
  }
  Eigen::Vector2d v1(-v0[1], v0[0]);
  e.vectors.col(0) = v0;
  e.vectors.col(1) = v1;
  fix_sign(e.vectors.col(0));
  fix_sign(e.vectors.col(1));
  return e;
}

SymEigen eigen_3x3_jacobi(const Eigen::MatrixXd& m) {
  Eigen::Matrix3d a = m;
  Eigen::Matrix3d v = Eigen::Matrix3d::Identity();
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  const double off_target = 1e-13 * scale;

  auto off_norm = [&a]() {
    return std::sqrt(a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) +
                     a(1, 2) * a(1, 2));
  };

  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int sweep = 0; sweep < 64 && off_norm() > off_target; ++sweep) {
    for (const auto& pq : pairs) {
      const int p = pq[0], q = pq[1];
      if (std::abs(a(p, q)) <= off_target / 8.0) continue;
      const double theta = 0.5 * (a(q, q) - a(p, p)) / a(p, q);
      const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                       (std::abs(theta) + std::sqrt(theta * theta + 1.0));
      const double cs = 1.0 / std::sqrt(t * t + 1.0);
      const double sn = t * cs;
      Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
      rot(p, p) = cs;
      rot(q, q) = cs;
      rot(p, q) = sn;
      rot(q, p) = -sn;
      a = rot.transpose() * a * rot;
      a(p, q) = a(q, p) = 0.0;  // rotation zeroes this entry by construction
      v = v * rot;
    }
  }

  SymEigen e;
  e.values.resize(3);
  e.vectors.resize(3, 3);
  int order[3] = {0, 1, 2};
  std::sort(order, order + 3,
            [&a](int i, int j) { return a(i, i) < a(j, j); });
  for (int k = 0; k < 3; ++k) {
    e.values[k] = a(order[k], order[k]);
    e.vectors.col(k) = v.col(order[k]);
    fix_sign(e.vectors.col(k));
  }
  return e;
}

}  // namespace

SymEigen sym_eigen(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("sym_eigen: not square");
  switch (m.rows()) {
    case 1:
      return eigen_1x1(m);
    case 2:
      return eigen_2x2(m);
    case 3:
      return eigen_3x3_jacobi(m);
    default:
      throw std::invalid_argument("sym_eigen: only sizes 1..3 supported");
  }
}

}  // namespace curvatura

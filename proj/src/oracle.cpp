#include "curvatura/oracle.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace curvatura {
namespace {

std::string vec_to_string(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ")";
  return os.str();
}

Eigen::VectorXd eval_point(const SurfaceSpec& spec, double s, double t) {
  Eigen::VectorXd p(spec.ambient_dim);
  for (int i = 0; i < spec.ambient_dim; ++i)
    p[i] = eval_expr(spec.components[i], s, t);
  return p;
}

// Multi-index iteration over an l-dimensional grid.
bool advance(std::vector<int>& idx, int n) {
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (++idx[k] < n) return true;
    idx[k] = 0;
  }
  return false;
}

}  // namespace

OracleReport focal_set_oracle(const SurfaceSpec& spec, double s0, double t0,
                              double q_min, double q_max, int grid_n,
                              double h) {
  if (h <= 0.0) throw std::invalid_argument("focal_set_oracle: h must be > 0");
  if (grid_n < 3)
    throw std::invalid_argument("focal_set_oracle: grid_n must be >= 3");

  const Jet2 jet = eval_jet2(spec, s0, t0);
  const AdaptedFrame frame = adapted_frame(jet);
  const Eigen::Matrix2d l_map = metric_normalizer(jet);
  const LocalQuadraticMap lqm = local_quadratic_map_at(spec, s0, t0);
  const Quadric caustic = caustic_quadric(lqm);
  const int l = lqm.codim;

  // gamma on the 3x3 stencil around (s0,t0); the distance field reuses these
  // for every grid point q.
  Eigen::VectorXd stencil[3][3];
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j)
      stencil[i + 1][j + 1] = eval_point(spec, s0 + i * h, t0 + j * h);

  const double spacing = (q_max - q_min) / (grid_n - 1);
  auto node_q = [&](const std::vector<int>& idx) {
    Eigen::VectorXd q(l);
    for (int k = 0; k < l; ++k) q[k] = q_min + spacing * idx[k];
    return q;
  };
  auto fd_field = [&](const Eigen::VectorXd& q) {
    const Eigen::VectorXd amb = frame.base_point + frame.normals * q;
    auto f = [&](int i, int j) {
      return 0.5 * (amb - stencil[i + 1][j + 1]).squaredNorm();
    };
    const double fss = (f(1, 0) - 2.0 * f(0, 0) + f(-1, 0)) / (h * h);
    const double ftt = (f(0, 1) - 2.0 * f(0, 0) + f(0, -1)) / (h * h);
    const double fst =
        (f(1, 1) - f(1, -1) - f(-1, 1) + f(-1, -1)) / (4.0 * h * h);
    return fss * ftt - fst * fst;
  };

  OracleReport rep;
  rep.name = "focal_set_oracle";

  // step sanity: at q = 0 the field reproduces det g = 1/det(L)^2, and at
  // probe points away from the zero set the finite differences must agree
  // with the polynomial (cancellation blows the agreement up as eps/h^2)
  const double det_l = l_map.determinant();
  const double at_origin = fd_field(Eigen::VectorXd::Zero(l));
  if (std::abs(at_origin * det_l * det_l - 1.0) > 0.05)
    throw std::invalid_argument(
        "focal_set_oracle: step too small or too large (cancellation "
        "detected)");
  {
    std::vector<Eigen::VectorXd> probes;
    probes.push_back(Eigen::VectorXd::Constant(l, q_max));
    probes.push_back(Eigen::VectorXd::Constant(l, q_min));
    probes.push_back(Eigen::VectorXd::Constant(l, 0.5 * q_max));
    for (const auto& q : probes) {
      const double target = caustic.eval(q);
      const double scale = caustic.eval_scale(q);
      if (std::abs(target) < 0.2 * scale) continue;  // too close to the zero set
      const double fd = fd_field(q) * det_l * det_l;
      if (std::abs(fd - target) > 0.3 * scale)
        throw std::invalid_argument(
            "focal_set_oracle: step too small or too large (cancellation "
            "detected)");
    }
  }

  // node fields
  std::vector<double> fd_values, alg_values;
  const std::size_t total = [&] {
    std::size_t n = 1;
    for (int k = 0; k < l; ++k) n *= grid_n;
    return n;
  }();
  fd_values.reserve(total);
  alg_values.reserve(total);
  std::vector<int> idx(l, 0);
  std::vector<std::vector<int>> nodes;
  nodes.reserve(total);
  do {
    const Eigen::VectorXd q = node_q(idx);
    fd_values.push_back(fd_field(q));
    alg_values.push_back(caustic.eval(q));
    nodes.push_back(idx);
  } while (advance(idx, grid_n));

  auto flat = [&](const std::vector<int>& id) {
    std::size_t f = 0;
    for (int k = l - 1; k >= 0; --k) f = f * grid_n + id[k];
    return f;
  };

  rep.threshold = 50.0 * h * h + spacing * std::sqrt(static_cast<double>(l));
  double worst = 0.0;
  std::string worst_at;
  int crossings = 0;

  // distance from q to the zero set of the quadric, estimated from the value
  // and gradient with the quadratic term as a safeguard (the plain |f|/|grad|
  // estimate diverges at cone vertices where the gradient vanishes)
  const double m_norm =
      std::max(caustic.M.cwiseAbs().maxCoeff() * l, 1e-300);
  auto alg_distance = [&](const Eigen::VectorXd& q) {
    const double f = std::abs(caustic.eval(q));
    const double g = (2.0 * (caustic.M * q + caustic.b)).norm();
    return (std::sqrt(g * g + 4.0 * m_norm * f) - g) / (2.0 * m_norm);
  };

  std::vector<int> id(l, 0);
  do {
    const std::size_t base = flat(id);
    for (int axis = 0; axis < l; ++axis) {
      if (id[axis] + 1 >= grid_n) continue;
      std::vector<int> id2 = id;
      ++id2[axis];
      const std::size_t nb = flat(id2);
      const double a = fd_values[base], b = fd_values[nb];
      if (!(a == 0.0) && !(b == 0.0) && ((a < 0.0) == (b < 0.0))) continue;
      ++crossings;
      // interpolated crossing of the finite-difference field
      const double frac = a == b ? 0.5 : a / (a - b);
      Eigen::VectorXd q = node_q(id);
      q[axis] += frac * spacing;
      const double dist = alg_distance(q);
      if (dist > worst) {
        worst = dist;
        worst_at = vec_to_string(q);
      }
    }
  } while (advance(id, grid_n));

  // each algebraic crossing must see a finite-difference sign change within
  // one cell: both signs of the FD field must occur among the nodes of the
  // one-cell neighborhood of the crossing edge
  std::fill(id.begin(), id.end(), 0);
  do {
    const std::size_t base = flat(id);
    for (int axis = 0; axis < l; ++axis) {
      if (id[axis] + 1 >= grid_n) continue;
      std::vector<int> id2 = id;
      ++id2[axis];
      const std::size_t nb = flat(id2);
      const double a = alg_values[base], b = alg_values[nb];
      if ((a < 0.0) == (b < 0.0)) continue;
      bool has_nonneg = false, has_nonpos = false;
      std::vector<int> lo(l), hi(l);
      for (int k = 0; k < l; ++k) {
        lo[k] = std::max(0, id[k] - 1);
        hi[k] = std::min(grid_n - 1, id[k] + (k == axis ? 2 : 1));
      }
      std::vector<int> cur = lo;
      for (;;) {
        const double v = fd_values[flat(cur)];
        if (v >= 0.0) has_nonneg = true;
        if (v <= 0.0) has_nonpos = true;
        if (has_nonneg && has_nonpos) break;
        int k = 0;
        for (; k < l; ++k) {
          if (++cur[k] <= hi[k]) break;
          cur[k] = lo[k];
        }
        if (k == l) break;
      }
      if (!(has_nonneg && has_nonpos)) {
        worst = std::max(worst, 2.0 * rep.threshold);
        worst_at =
            "unmatched algebraic crossing near " + vec_to_string(node_q(id));
      }
    }
  } while (advance(id, grid_n));

  rep.samples = crossings;
  rep.max_residual = worst;
  rep.passed = worst <= rep.threshold;
  rep.details = worst_at;
  return rep;
}

OracleReport curvature_vector_oracle(const SurfaceSpec& spec, double s0,
                                     double t0, double theta, double h) {
  // below ~1e-8 the second difference of O(1) data retains no significant
  // digits at double precision
  if (h < 1e-8 || h > 0.5)
    throw std::invalid_argument(
        "curvature_vector_oracle: step outside [1e-8, 0.5]");
  const Jet2 jet = eval_jet2(spec, s0, t0);
  const AdaptedFrame frame = adapted_frame(jet);
  const Eigen::Matrix2d l_map = metric_normalizer(jet);
  const LocalQuadraticMap lqm = local_quadratic_map_at(spec, s0, t0);

  const Eigen::Vector2d dir =
      l_map * Eigen::Vector2d(std::cos(theta), std::sin(theta));
  const int l = lqm.codim;
  auto fd_at = [&](double step) {
    auto alpha = [&](double r) {
      return eval_point(spec, s0 + r * dir[0], t0 + r * dir[1]);
    };
    const Eigen::VectorXd second =
        (alpha(step) - 2.0 * alpha(0.0) + alpha(-step)) / (step * step);
    Eigen::VectorXd projected(l);
    for (int i = 0; i < l; ++i)
      projected[i] = frame.normals.col(i).dot(second);
    return projected;
  };
  const Eigen::VectorXd fd = fd_at(h);
  const Eigen::VectorXd exact = normal_section_curvature(lqm, theta);

  OracleReport rep;
  rep.name = "curvature_vector_oracle";
  rep.samples = 1;
  const double scale = std::max(1.0, exact.cwiseAbs().maxCoeff());
  rep.max_residual = (fd - exact).cwiseAbs().maxCoeff() / scale;
  rep.threshold = 100.0 * h * h + 1e-10;
  rep.passed = rep.max_residual <= rep.threshold;
  rep.details = "theta=" + std::to_string(theta);
  if (!rep.passed) {
    // Richardson-style probe: a halved step should shrink the residual; if
    // it grows instead the step is in the cancellation regime
    const double half =
        (fd_at(0.5 * h) - exact).cwiseAbs().maxCoeff() / scale;
    if (half > rep.max_residual)
      rep.details += " (residual grows as h shrinks: step too small)";
  }
  return rep;
}

OracleReport eigen_oracle(const GaussForm& gf) {
  const int l = static_cast<int>(gf.matrix.rows());
  OracleReport rep;
  rep.name = "eigen_oracle";
  rep.samples = l;
  rep.threshold = 1e-9;

  // characteristic polynomial coefficients by cofactor expansion
  const Eigen::MatrixXd& m = gf.matrix;
  double worst = 0.0;
  for (int k = 0; k < l; ++k) {
    const double lam = gf.eigenvalues[k];
    double value = 0.0, scale = 0.0;
    if (l == 1) {
      value = lam - m(0, 0);
      scale = std::abs(lam) + std::abs(m(0, 0));
    } else if (l == 2) {
      const double tr = m(0, 0) + m(1, 1);
      const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
      value = lam * lam - tr * lam + det;
      scale = lam * lam + std::abs(tr * lam) + std::abs(det);
    } else {
      const double tr = m(0, 0) + m(1, 1) + m(2, 2);
      double minors = 0.0;
      for (int i = 0; i < 3; ++i) {
        const int a = (i + 1) % 3, b = (i + 2) % 3;
        minors += m(a, a) * m(b, b) - m(a, b) * m(b, a);
      }
      const double det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
      value = -lam * lam * lam + tr * lam * lam - minors * lam + det;
      scale = std::abs(lam * lam * lam) + std::abs(tr * lam * lam) +
              std::abs(minors * lam) + std::abs(det);
    }
    worst = std::max(worst, std::abs(value) / std::max(1.0, scale));
  }

  // eigenvector orthonormality and the eigen relation itself
  const Eigen::MatrixXd vtv =
      gf.eigenvectors.transpose() * gf.eigenvectors -
      Eigen::MatrixXd::Identity(l, l);
  worst = std::max(worst, vtv.cwiseAbs().maxCoeff());
  const double mscale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (int k = 0; k < l; ++k) {
    const Eigen::VectorXd r =
        m * gf.eigenvectors.col(k) - gf.eigenvalues[k] * gf.eigenvectors.col(k);
    worst = std::max(worst, r.cwiseAbs().maxCoeff() / mscale);
  }

  rep.max_residual = worst;
  rep.passed = worst <= rep.threshold;
  return rep;
}

}  // namespace curvatura

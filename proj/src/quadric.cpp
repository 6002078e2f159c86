#include "curvatura/quadric.hpp"

#include <Eigen/LU>
#include <cmath>
#include <stdexcept>

namespace curvatura {
namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Vector2d rot90(const Eigen::Vector2d& v) {
  return Eigen::Vector2d(-v[1], v[0]);
}

Eigen::Vector3d cross3(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return Eigen::Vector3d(x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2],
                         x[0] * y[1] - x[1] * y[0]);
}

// Two orthonormal vectors completing dir/|dir| to a basis, built from standard
// basis vectors in index order.
std::pair<Eigen::VectorXd, Eigen::VectorXd> orthonormal_complement3(
    const Eigen::VectorXd& dir) {
  const Eigen::VectorXd d = dir.normalized();
  std::vector<Eigen::VectorXd> found;
  for (int k = 0; k < 3 && found.size() < 2; ++k) {
    Eigen::VectorXd cand = Eigen::VectorXd::Zero(3);
    cand[k] = 1.0;
    cand -= cand.dot(d) * d;
    for (const auto& f : found) cand -= cand.dot(f) * f;
    const double nrm = cand.norm();
    if (nrm <= 1e-8) continue;
    found.push_back(cand / nrm);
  }
  return {found[0], found[1]};
}

int rank_with_threshold(const Eigen::MatrixXd& m, double tol) {
  if (m.cwiseAbs().maxCoeff() == 0.0) return 0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(tol);
  return static_cast<int>(lu.rank());
}

// Distance from (u,v) >= 0 to the axis-aligned ellipse x^2/a^2 + y^2/b^2 = 1,
// a >= b > 0: root of the quartic stationarity equation of the squared
// distance, isolated on its monotone branch.
double dist_point_axis_ellipse(double a, double b, double u, double v) {
  if (v == 0.0) {
    const double crit = (a * a - b * b) / a;
    if (u < crit) {
      const double x = a * a * u / (a * a - b * b);
      const double y = b * std::sqrt(std::max(0.0, 1.0 - (x / a) * (x / a)));
      return std::hypot(x - u, y);
    }
    return std::abs(u - a);
  }
  if (u == 0.0) return std::abs(v - b);

  auto F = [&](double t) {
    const double fx = a * u / (t + a * a);
    const double fy = b * v / (t + b * b);
    return fx * fx + fy * fy - 1.0;
  };
  double tlo = -b * b + b * v;  // F(tlo) >= 0
  double thi = std::max(tlo, 0.0) + std::max(a * u, b * v) + a * a;
  while (F(thi) > 0.0) thi = 2.0 * thi + a * a;
  for (int it = 0; it < 200; ++it) {
    const double tm = 0.5 * (tlo + thi);
    if (tm == tlo || tm == thi) break;
    if (F(tm) > 0.0)
      tlo = tm;
    else
      thi = tm;
  }
  const double t = 0.5 * (tlo + thi);
  const double x = a * a * u / (t + a * a);
  const double y = b * b * v / (t + b * b);
  return std::hypot(x - u, y - v);
}

}  // namespace

// Modified Gram-Schmidt column rank with a relative pivot threshold. Unlike
// ranks derived from Gram-matrix eigenvalues this keeps full precision for
// exactly dependent columns (no sqrt(eps) noise).
int column_rank(const Eigen::MatrixXd& cols, double tol) {
  double scale = 0.0;
  for (int j = 0; j < cols.cols(); ++j)
    scale = std::max(scale, cols.col(j).norm());
  if (scale == 0.0) return 0;
  std::vector<Eigen::VectorXd> basis;
  for (int j = 0; j < cols.cols(); ++j) {
    Eigen::VectorXd r = cols.col(j);
    for (const auto& b : basis) r -= r.dot(b) * b;
    if (r.norm() > tol * scale) basis.push_back(r.normalized());
  }
  return static_cast<int>(basis.size());
}

ProjPoint ProjPoint::infinite(Eigen::VectorXd dir) {
  const double nrm = dir.norm();
  if (nrm == 0.0)
    throw std::invalid_argument("ProjPoint: zero direction at infinity");
  dir /= nrm;
  for (int i = 0; i < dir.size(); ++i) {
    if (dir[i] != 0.0) {
      if (dir[i] < 0.0) dir = -dir;
      break;
    }
  }
  return ProjPoint{std::move(dir), true};
}

double Quadric::eval_scale(const Eigen::VectorXd& q) const {
  double s = std::abs(c);
  for (int i = 0; i < q.size(); ++i) {
    s += 2.0 * std::abs(b[i] * q[i]);
    for (int j = 0; j < q.size(); ++j) s += std::abs(M(i, j) * q[i] * q[j]);
  }
  return std::max(1.0, s);
}

Eigen::MatrixXd Quadric::homogeneous() const {
  const int l = dim();
  Eigen::MatrixXd h(l + 1, l + 1);
  h.topLeftCorner(l, l) = M;
  h.topRightCorner(l, 1) = b;
  h.bottomLeftCorner(1, l) = b.transpose();
  h(l, l) = c;
  return h;
}

const char* to_string(QuadricLabel label) {
  switch (label) {
    case QuadricLabel::Ellipse: return "Ellipse";
    case QuadricLabel::Circle: return "Circle";
    case QuadricLabel::Hyperbola: return "Hyperbola";
    case QuadricLabel::Parabola: return "Parabola";
    case QuadricLabel::TwoIntersectingLines: return "TwoIntersectingLines";
    case QuadricLabel::TwoParallelLines: return "TwoParallelLines";
    case QuadricLabel::DoubleLine: return "DoubleLine";
    case QuadricLabel::LineAtInfinity: return "LineAtInfinity";
    case QuadricLabel::DoubleLineAtInfinity: return "DoubleLineAtInfinity";
    case QuadricLabel::Cone: return "Cone";
    case QuadricLabel::EllipticCylinder: return "EllipticCylinder";
    case QuadricLabel::HyperbolicCylinder: return "HyperbolicCylinder";
    case QuadricLabel::ParabolicCylinder: return "ParabolicCylinder";
    case QuadricLabel::TwoPlanes: return "TwoPlanes";
    case QuadricLabel::TwoParallelPlanes: return "TwoParallelPlanes";
    case QuadricLabel::DoublePlane: return "DoublePlane";
    case QuadricLabel::PlaneAtInfinity: return "PlaneAtInfinity";
    case QuadricLabel::DoublePlaneAtInfinity: return "DoublePlaneAtInfinity";
    case QuadricLabel::Nondegenerate: return "Nondegenerate";
  }
  return "?";
}

QuadricClass classify_quadric(const Quadric& q, double tol) {
  const int l = q.dim();
  if (l != 2 && l != 3)
    throw std::invalid_argument("classify_quadric: dimension must be 2 or 3");

  const Eigen::MatrixXd hom = q.homogeneous();
  const double scale = hom.cwiseAbs().maxCoeff();
  if (scale == 0.0)
    return {l == 2 ? QuadricLabel::DoubleLineAtInfinity
                   : QuadricLabel::DoublePlaneAtInfinity,
            std::nullopt};

  const int rank_h = rank_with_threshold(hom, tol);
  const SymEigen em = sym_eigen(q.M);
  const double thr = tol * scale;
  int n_pos = 0, n_neg = 0;
  std::vector<int> zero_idx;
  for (int i = 0; i < l; ++i) {
    if (em.values[i] > thr)
      ++n_pos;
    else if (em.values[i] < -thr)
      ++n_neg;
    else
      zero_idx.push_back(i);
  }
  const int rank_m = n_pos + n_neg;

  auto affine_center = [&]() -> std::optional<ProjPoint> {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(q.M);
    return ProjPoint::affine(lu.solve(-q.b));
  };
  auto kernel_dir = [&]() -> std::optional<ProjPoint> {
    if (zero_idx.size() != 1) return std::nullopt;
    return ProjPoint::infinite(em.vectors.col(zero_idx.front()));
  };

  if (l == 2) {
    if (rank_h == 3) {
      if (rank_m == 2) {
        if (n_pos == 2 || n_neg == 2) {
          const bool circle =
              std::abs(em.values[0] - em.values[1]) <= tol * scale;
          return {circle ? QuadricLabel::Circle : QuadricLabel::Ellipse,
                  affine_center()};
        }
        return {QuadricLabel::Hyperbola, affine_center()};
      }
      return {QuadricLabel::Parabola, kernel_dir()};
    }
    if (rank_h == 2) {
      if (rank_m == 2) return {QuadricLabel::TwoIntersectingLines, affine_center()};
      if (rank_m == 1) return {QuadricLabel::TwoParallelLines, kernel_dir()};
      // affine line plus the ideal line
      Eigen::Vector2d dir = rot90(Eigen::Vector2d(q.b[0], q.b[1]));
      return {QuadricLabel::LineAtInfinity, ProjPoint::infinite(dir)};
    }
    if (rank_h == 1) {
      if (rank_m == 1) return {QuadricLabel::DoubleLine, kernel_dir()};
      return {QuadricLabel::DoubleLineAtInfinity, std::nullopt};
    }
    return {QuadricLabel::DoubleLineAtInfinity, std::nullopt};
  }

  // l == 3
  if (rank_h == 4) {
    std::optional<ProjPoint> center =
        rank_m == 3 ? affine_center() : kernel_dir();
    return {QuadricLabel::Nondegenerate, center};
  }
  if (rank_h == 3) {
    if (rank_m == 3) return {QuadricLabel::Cone, affine_center()};
    if (rank_m == 2) {
      const bool same_sign = (n_pos == 2 || n_neg == 2);
      return {same_sign ? QuadricLabel::EllipticCylinder
                        : QuadricLabel::HyperbolicCylinder,
              kernel_dir()};
    }
    if (rank_m == 1) {
      // ruling direction of the parabolic cylinder: the 1-dim kernel of the
      // homogeneous matrix
      Eigen::FullPivLU<Eigen::MatrixXd> lu(hom);
      lu.setThreshold(tol);
      const Eigen::MatrixXd ker = lu.kernel();
      std::optional<ProjPoint> center;
      if (ker.cols() >= 1) {
        Eigen::VectorXd k = ker.col(0);
        if (std::abs(k[3]) <= tol * k.norm())
          center = ProjPoint::infinite(k.head(3));
      }
      return {QuadricLabel::ParabolicCylinder, center};
    }
    return {QuadricLabel::PlaneAtInfinity, std::nullopt};
  }
  if (rank_h == 2) {
    if (rank_m == 2) {
      // a point on the intersection line of the two planes
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(q.M);
      cod.setThreshold(tol);
      return {QuadricLabel::TwoPlanes,
              ProjPoint::affine(cod.solve(Eigen::VectorXd(-q.b)))};
    }
    if (rank_m == 1) return {QuadricLabel::TwoParallelPlanes, std::nullopt};
    return {QuadricLabel::PlaneAtInfinity, std::nullopt};
  }
  if (rank_h == 1) {
    if (rank_m == 1) return {QuadricLabel::DoublePlane, std::nullopt};
    return {QuadricLabel::DoublePlaneAtInfinity, std::nullopt};
  }
  return {QuadricLabel::DoublePlaneAtInfinity, std::nullopt};
}

Quadric caustic_quadric(const LocalQuadraticMap& lqm) {
  const GaussForm g = gauss_form(lqm);
  Quadric q;
  q.M = g.matrix;
  q.b = -0.5 * (lqm.A + lqm.C);
  q.c = 1.0;
  return q;
}

CausticCenter caustic_center(const LocalQuadraticMap& lqm, double tol) {
  const GaussForm g = gauss_form(lqm);
  const Eigen::VectorXd h = 0.5 * (lqm.A + lqm.C);
  const double scale = g.eigenvalues.cwiseAbs().maxCoeff();
  if (scale == 0.0) return {CausticCenter::Kind::NoUnique, {}};

  std::vector<int> zero_idx;
  for (int i = 0; i < lqm.codim; ++i)
    if (std::abs(g.eigenvalues[i]) <= tol * scale) zero_idx.push_back(i);

  if (zero_idx.empty()) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(g.matrix);
    Eigen::VectorXd r = lu.solve(h);
    if (lqm.codim == 3) {
      const double cs = lqm.max_abs_coeff();
      const Eigen::Vector3d nvec = cross3(lqm.A - lqm.C, lqm.B);
      const double tau = 0.5 * nvec.dot(h);
      if (std::abs(tau) > 1e-6 * cs * cs * cs) {
        const Eigen::Vector3d r_closed = nvec / (2.0 * tau);
        if ((r - r_closed).norm() > 1e-6 * (1.0 + r.norm()))
          throw std::logic_error("caustic_center: closed form disagrees");
      }
    }
    return {CausticCenter::Kind::Affine, std::move(r)};
  }
  if (zero_idx.size() == 1) {
    ProjPoint p = ProjPoint::infinite(g.eigenvectors.col(zero_idx.front()));
    return {CausticCenter::Kind::AtInfinity, std::move(p.v)};
  }
  return {CausticCenter::Kind::NoUnique, {}};
}

double caustic_level_residual(const LocalQuadraticMap& lqm,
                              const Eigen::VectorXd& q) {
  const GaussForm g = gauss_form(lqm);
  const double scale = g.eigenvalues.cwiseAbs().maxCoeff();
  if (scale == 0.0 ||
      g.eigenvalues.cwiseAbs().minCoeff() <= kClassifyTol * scale)
    throw SingularError("caustic_level_residual: Delta = 0");
  const Eigen::VectorXd h = 0.5 * (lqm.A + lqm.C);
  const Eigen::VectorXd r = g.matrix.partialPivLu().solve(h);
  const Eigen::VectorXd v = q - r;
  if (lqm.codim == 3) return g.quad(v);
  if (lqm.codim == 2) {
    const Invariants inv = invariants_of(lqm);
    return 2.0 * g.quad(v) + inv.N.value() * inv.N.value() / (4.0 * inv.Delta);
  }
  return 2.0 * g.quad(v) + 1.0 - r.dot(h);
}

ProjPoint polar_point_of_hyperplane(const Eigen::VectorXd& normal,
                                    double offset) {
  const double nrm = normal.norm();
  if (nrm == 0.0)
    throw std::invalid_argument("polar_point_of_hyperplane: zero normal");
  if (std::abs(offset) <= 1e-13 * nrm) return ProjPoint::infinite(normal);
  return ProjPoint::affine(normal / offset);
}

DualSamples dual_of_indicatrix(const LocalQuadraticMap& lqm, int samples) {
  if (samples < 8)
    throw std::invalid_argument("dual_of_indicatrix: samples must be >= 8");
  DualSamples out;
  const EllipseParam ep = indicatrix(lqm);
  const EllipseGeometry geom = ellipse_geometry(ep);
  if (lqm.codim < 2 || !geom.nondegenerate()) {
    out.degenerate_ellipse = true;
    return out;
  }

  for (int k = 0; k < samples; ++k) {
    const double theta = kPi * k / samples;
    const Eigen::VectorXd p = ep.at(theta);
    const Eigen::VectorXd d = -2.0 * std::sin(2.0 * theta) * ep.u_axis +
                              2.0 * std::cos(2.0 * theta) * ep.v_axis;
    if (lqm.codim == 2) {
      const Eigen::Vector2d n = rot90(Eigen::Vector2d(d[0], d[1]));
      out.poles.push_back(polar_point_of_hyperplane(n, n.dot(p)));
    } else {
      const auto [n1, n2] = orthonormal_complement3(d);
      for (int j = 0; j < 8; ++j) {
        const double phi = kPi * j / 8.0;
        const Eigen::VectorXd n = std::cos(phi) * n1 + std::sin(phi) * n2;
        out.poles.push_back(polar_point_of_hyperplane(n, n.dot(p)));
      }
    }
  }
  return out;
}

NormalLineFoci normal_line_foci(const LocalQuadraticMap& lqm,
                                const Eigen::VectorXd& n) {
  const Eigen::Matrix2d m = dGamma_perp(lqm, n);
  const SymEigen e = sym_eigen(m);
  NormalLineFoci f;
  f.mu1 = e.values[0];
  f.mu2 = e.values[1];
  f.dir1 = e.vectors.col(0);
  f.dir2 = e.vectors.col(1);
  const double thr = kDefaultTol * std::max(1.0, m.cwiseAbs().maxCoeff());
  f.focus1 = std::abs(f.mu1) <= thr ? ProjPoint::infinite(n)
                                    : ProjPoint::affine(n / f.mu1);
  f.focus2 = std::abs(f.mu2) <= thr ? ProjPoint::infinite(n)
                                    : ProjPoint::affine(n / f.mu2);
  return f;
}

std::pair<Quadric, Quadric> sigma_cones(const LocalQuadraticMap& lqm) {
  const GaussForm g = gauss_form(lqm);
  const int l = lqm.codim;
  Quadric sigma{g.matrix, Eigen::VectorXd::Zero(l), 0.0};
  const double scale = g.eigenvalues.cwiseAbs().maxCoeff();
  if (scale == 0.0 ||
      g.eigenvalues.cwiseAbs().minCoeff() <= kClassifyTol * scale)
    throw SingularError("sigma_cones: Delta = 0, starred cone undefined");
  Eigen::MatrixXd ginv =
      g.matrix.partialPivLu().solve(Eigen::MatrixXd::Identity(l, l));
  ginv = 0.5 * (ginv + ginv.transpose()).eval();
  Quadric sigma_star{ginv, Eigen::VectorXd::Zero(l), 0.0};
  return {sigma, sigma_star};
}

std::pair<Quadric, Quadric> hr_loci(const LocalQuadraticMap& lqm) {
  if (lqm.codim < 2)
    throw std::invalid_argument("hr_loci: codimension must be 2 or 3");
  const GaussForm g = gauss_form(lqm);
  const double scale = g.eigenvalues.cwiseAbs().maxCoeff();
  if (scale == 0.0 ||
      g.eigenvalues.cwiseAbs().minCoeff() <= kClassifyTol * scale)
    throw SingularError("hr_loci: Delta = 0");
  const Invariants inv = invariants_of(lqm);
  const double alpha =
      lqm.codim == 2
          ? 1.0 - inv.N.value() * inv.N.value() / (4.0 * inv.Delta)
          : 1.0;
  const int l = lqm.codim;
  Eigen::MatrixXd ginv =
      g.matrix.partialPivLu().solve(Eigen::MatrixXd::Identity(l, l));
  ginv = 0.5 * (ginv + ginv.transpose()).eval();
  Quadric h_locus{ginv, Eigen::VectorXd::Zero(l), -alpha};
  Quadric r_locus{g.matrix, Eigen::VectorXd::Zero(l), -alpha};
  return {h_locus, r_locus};
}

AsymptoticDirections asymptotic_directions_r4(const LocalQuadraticMap& lqm,
                                              double tol) {
  if (lqm.codim != 2)
    throw std::invalid_argument("asymptotic_directions_r4: codim must be 2");
  AsymptoticDirections out;
  const QuadForm2 p = poisson_bracket(lqm.component(0), lqm.component(1));
  const double cs = lqm.max_abs_coeff();
  const double pscale = p.max_abs_coeff();
  if (pscale <= tol * std::max(1e-300, cs * cs)) {
    out.all_directions = true;
    return out;
  }

  const EllipseParam ep = indicatrix(lqm);
  auto push_root = [&](double s, double t, bool dbl) {
    double theta = std::atan2(t, s);
    if (theta < 0.0) theta += kPi;
    if (theta >= kPi) theta -= kPi;
    AsymptoticDirections::Root root;
    root.theta = theta;
    root.u = Eigen::Vector2d(std::cos(theta), std::sin(theta));
    root.double_root = dbl;
    root.ep_point = ep.at(theta);
    Eigen::Vector2d line_dir(root.ep_point[0], root.ep_point[1]);
    if (line_dir.norm() <= 1e-12 * std::max(1.0, cs)) {
      const Eigen::VectorXd d = -2.0 * std::sin(2.0 * theta) * ep.u_axis +
                                2.0 * std::cos(2.0 * theta) * ep.v_axis;
      line_dir = Eigen::Vector2d(d[0], d[1]);
    }
    root.ideal_point = ProjPoint::infinite(rot90(line_dir));
    out.roots.push_back(std::move(root));
  };

  const double a = p.a, b = p.b, c = p.c;
  const double disc = b * b - a * c;
  const double dscale = b * b + std::abs(a * c);
  if (disc < -tol * std::max(1e-300, dscale)) return out;  // definite: no roots

  if (std::abs(disc) <= tol * std::max(1e-300, dscale)) {
    if (std::abs(a) >= std::abs(c))
      push_root(-b, a, true);
    else
      push_root(c, -b, true);
    return out;
  }

  const double r = std::sqrt(disc);
  if (std::abs(a) >= std::abs(c)) {
    // roots of a x^2 + 2 b x + c in x = s/t
    const double qq = -(b + std::copysign(r, b == 0.0 ? 1.0 : b));
    push_root(qq / a, 1.0, false);
    if (qq != 0.0)
      push_root(c / qq, 1.0, false);
    else
      push_root(-qq / a, 1.0, false);  // b == 0, c == 0: symmetric roots
  } else {
    const double qq = -(b + std::copysign(r, b == 0.0 ? 1.0 : b));
    push_root(1.0, qq / c, false);
    if (qq != 0.0)
      push_root(1.0, a / qq, false);
    else
      push_root(1.0, -qq / c, false);
  }
  return out;
}

EllipseGeometry ellipse_geometry(const EllipseParam& e, double tol) {
  const int l = static_cast<int>(e.center.size());
  EllipseGeometry g;
  g.center = e.center;
  g.w1 = Eigen::VectorXd::Zero(l);
  g.w2 = Eigen::VectorXd::Zero(l);

  Eigen::MatrixXd s(l, 2);
  s.col(0) = e.u_axis;
  s.col(1) = e.v_axis;

  // rank decision by pivoted orthogonalization (a Gram eigenvalue would add
  // sqrt(eps) noise on exactly collinear axes), sized against the problem
  const double axis_scale = std::max(e.u_axis.norm(), e.v_axis.norm());
  const double scale = std::max({axis_scale, e.center.norm(), 1e-300});
  if (axis_scale <= tol * scale) {
    g.rank = 0;
    return g;
  }
  g.rank = column_rank(s, tol * scale / std::max(axis_scale, 1e-300));

  Eigen::Matrix2d gram = s.transpose() * s;
  const SymEigen eg = sym_eigen(gram);
  const double sig1 = std::sqrt(std::max(0.0, eg.values[1]));
  g.r1 = sig1;
  g.w1 = (s * eg.vectors.col(1)).normalized();
  if (g.rank < 2) return g;
  const double sig2 = std::sqrt(std::max(0.0, eg.values[0]));
  g.r2 = sig2;
  g.w2 = (s * eg.vectors.col(0)) / sig2;
  return g;
}

EllipseContainment ellipse_containment(const EllipseGeometry& g,
                                       const Eigen::VectorXd& p) {
  if (g.rank != 2)
    throw std::invalid_argument("ellipse_containment: degenerate ellipse");
  const Eigen::VectorXd d = p - g.center;
  const double xi = d.dot(g.w1) / g.r1;
  const double eta = d.dot(g.w2) / g.r2;
  EllipseContainment c;
  c.ratio = std::hypot(xi, eta);
  c.off_plane = (d - d.dot(g.w1) * g.w1 - d.dot(g.w2) * g.w2).norm();
  return c;
}

double ellipse_distance(const EllipseGeometry& g, const Eigen::VectorXd& p) {
  const Eigen::VectorXd d = p - g.center;
  if (g.rank == 0) return d.norm();
  if (g.rank == 1) {
    // segment from center - r1 w1 to center + r1 w1
    const double along = d.dot(g.w1);
    const double clamped = std::clamp(along, -g.r1, g.r1);
    return std::sqrt(std::max(0.0, d.squaredNorm() - along * along +
                                       (along - clamped) * (along - clamped)));
  }
  const double p1 = std::abs(d.dot(g.w1));
  const double p2 = std::abs(d.dot(g.w2));
  const double off = (d - d.dot(g.w1) * g.w1 - d.dot(g.w2) * g.w2).squaredNorm();
  const double in_plane = dist_point_axis_ellipse(g.r1, g.r2, p1, p2);
  return std::sqrt(in_plane * in_plane + off);
}

std::vector<Eigen::VectorXd> sample_central_quadric(const Eigen::MatrixXd& M,
                                                    const Eigen::VectorXd& center,
                                                    double c0, int count) {
  std::vector<Eigen::VectorXd> pts;
  const int l = static_cast<int>(M.rows());
  const SymEigen e = sym_eigen(M);
  const double scale = e.values.cwiseAbs().maxCoeff();
  if (scale == 0.0) return pts;
  const double thr = kClassifyTol * scale;

  if (l == 1) {
    const double ratio = c0 / M(0, 0);
    if (ratio < 0.0) return pts;
    const double r = std::sqrt(ratio);
    pts.push_back(center + Eigen::VectorXd::Constant(1, r));
    pts.push_back(center - Eigen::VectorXd::Constant(1, r));
    return pts;
  }

  if (l == 2) {
    const double l1 = e.values[0], l2 = e.values[1];
    const Eigen::VectorXd v1 = e.vectors.col(0), v2 = e.vectors.col(1);
    const bool c0_zero = std::abs(c0) <= 1e-12 * scale;
    if (c0_zero) {
      if (l1 * l2 < 0.0) {
        // two lines through the center
        const double slope = std::sqrt(-l1 / l2);
        for (int sgn = -1; sgn <= 1; sgn += 2) {
          const Eigen::VectorXd dir = (v1 + sgn * slope * v2).normalized();
          for (int k = 1; k <= std::max(2, count / 4); ++k) {
            const double t = 0.5 * k;
            pts.push_back(center + t * dir);
            pts.push_back(center - t * dir);
          }
        }
      } else {
        pts.push_back(center);
      }
      return pts;
    }
    if (std::abs(l1) <= thr || std::abs(l2) <= thr) {
      // parallel lines lam x^2 = c0
      const double lam = std::abs(l1) > thr ? l1 : l2;
      const Eigen::VectorXd va = std::abs(l1) > thr ? v1 : v2;
      const Eigen::VectorXd vb = std::abs(l1) > thr ? v2 : v1;
      const double ratio = c0 / lam;
      if (ratio < 0.0) return pts;
      const double x = std::sqrt(ratio);
      for (int k = 0; k < count; ++k) {
        const double t = -2.0 + 4.0 * k / std::max(1, count - 1);
        pts.push_back(center + x * va + t * vb);
        pts.push_back(center - x * va + t * vb);
      }
      return pts;
    }
    if (l1 * l2 > 0.0) {
      if (c0 / l1 < 0.0) return pts;  // empty level set
      const double r1 = std::sqrt(c0 / l1), r2 = std::sqrt(c0 / l2);
      for (int k = 0; k < count; ++k) {
        const double phi = 2.0 * kPi * k / count;
        pts.push_back(center + r1 * std::cos(phi) * v1 +
                      r2 * std::sin(phi) * v2);
      }
      return pts;
    }
    // hyperbola: the branch axis is the eigendirection whose eigenvalue has
    // the sign of c0 (l1 < 0 < l2 here)
    const double lp = l2, ln = l1;
    const Eigen::VectorXd vp = v2, vn = v1;
    const int half = std::max(2, count / 2);
    if (c0 > 0.0) {
      const double ra = std::sqrt(c0 / lp), rb = std::sqrt(-c0 / ln);
      for (int k = 0; k < half; ++k) {
        const double u = -1.5 + 3.0 * k / std::max(1, half - 1);
        for (int sgn = -1; sgn <= 1; sgn += 2)
          pts.push_back(center + sgn * ra * std::cosh(u) * vp +
                        rb * std::sinh(u) * vn);
      }
    } else {
      const double ra = std::sqrt(c0 / ln), rb = std::sqrt(-c0 / lp);
      for (int k = 0; k < half; ++k) {
        const double u = -1.5 + 3.0 * k / std::max(1, half - 1);
        for (int sgn = -1; sgn <= 1; sgn += 2)
          pts.push_back(center + sgn * ra * std::cosh(u) * vn +
                        rb * std::sinh(u) * vp);
      }
    }
    return pts;
  }

  // l == 3. Only the signatures arising here are supported: (2 neg, 1 pos)
  // or its negation, plus rank-2 cylinders through c0 = 0.
  std::vector<int> pos, neg;
  for (int i = 0; i < 3; ++i) {
    if (e.values[i] > thr)
      pos.push_back(i);
    else if (e.values[i] < -thr)
      neg.push_back(i);
  }
  const bool c0_zero = std::abs(c0) <= 1e-12 * scale;
  if (c0_zero && pos.size() + neg.size() == 3 &&
      (pos.size() == 1 || neg.size() == 1)) {
    const int apex = pos.size() == 1 ? pos[0] : neg[0];
    const int o1 = (apex + 1) % 3, o2 = (apex + 2) % 3;
    const double la = std::abs(e.values[apex]);
    const int rings = std::max(4, (count + 3) / 4);
    for (int k = 0; k < rings; ++k) {
      const double phi = 2.0 * kPi * k / rings;
      Eigen::VectorXd dir =
          std::sqrt(1.0 / std::abs(e.values[o1])) * std::cos(phi) *
              e.vectors.col(o1) +
          std::sqrt(1.0 / std::abs(e.values[o2])) * std::sin(phi) *
              e.vectors.col(o2) +
          std::sqrt(1.0 / la) * e.vectors.col(apex);
      for (double t : {-1.3, -0.7, 0.7, 1.3}) pts.push_back(center + t * dir);
    }
    return pts;
  }
  if (pos.size() + neg.size() == 3 && !c0_zero) {
    // hyperboloid with signature (1,2) or (2,1)
    const int apex = pos.size() == 1 ? pos[0] : neg[0];
    const int o1 = (apex + 1) % 3, o2 = (apex + 2) % 3;
    const double la = e.values[apex], lo1 = e.values[o1], lo2 = e.values[o2];
    const int rings = std::max(4, count / 8);
    if (c0 / la > 0.0) {
      // two sheets along the apex axis
      const double rz = std::sqrt(c0 / la);
      for (int k = 0; k < rings; ++k) {
        const double phi = 2.0 * kPi * k / rings;
        for (double u : {-1.0, -0.5, 0.5, 1.0}) {
          Eigen::VectorXd q =
              rz * std::cosh(u) * e.vectors.col(apex) +
              std::sqrt(std::abs(c0 / lo1)) * std::sinh(u) * std::cos(phi) *
                  e.vectors.col(o1) +
              std::sqrt(std::abs(c0 / lo2)) * std::sinh(u) * std::sin(phi) *
                  e.vectors.col(o2);
          pts.push_back(center + q);
          pts.push_back(center - q);
        }
      }
    } else {
      // one sheet around the apex axis
      for (int k = 0; k < rings; ++k) {
        const double phi = 2.0 * kPi * k / rings;
        for (double u : {-1.0, -0.3, 0.3, 1.0}) {
          Eigen::VectorXd q =
              std::sqrt(std::abs(c0 / lo1)) * std::cosh(u) * std::cos(phi) *
                  e.vectors.col(o1) +
              std::sqrt(std::abs(c0 / lo2)) * std::cosh(u) * std::sin(phi) *
                  e.vectors.col(o2) +
              std::sqrt(std::abs(c0 / la)) * std::sinh(u) *
                  e.vectors.col(apex);
          pts.push_back(center + q);
        }
      }
    }
    return pts;
  }
  return pts;
}

std::vector<Eigen::VectorXd> sample_caustic_points(const LocalQuadraticMap& lqm,
                                                   int count) {
  const GaussForm g = gauss_form(lqm);
  const double scale = g.eigenvalues.cwiseAbs().maxCoeff();
  if (scale == 0.0 ||
      g.eigenvalues.cwiseAbs().minCoeff() <= kClassifyTol * scale)
    throw SingularError("sample_caustic_points: Delta = 0");

  if (lqm.codim == 1) {
    // roots of k q^2 - 2 h q + 1 = 0
    const double k = g.matrix(0, 0), h = 0.5 * (lqm.A[0] + lqm.C[0]);
    const double disc = h * h - k;
    std::vector<Eigen::VectorXd> pts;
    if (disc < 0.0) return pts;
    const double r = std::sqrt(disc);
    pts.push_back(Eigen::VectorXd::Constant(1, (h + r) / k));
    pts.push_back(Eigen::VectorXd::Constant(1, (h - r) / k));
    return pts;
  }

  const Eigen::VectorXd h = 0.5 * (lqm.A + lqm.C);
  const Eigen::VectorXd r = g.matrix.partialPivLu().solve(h);
  double c0 = 0.0;
  if (lqm.codim == 2) {
    const Invariants inv = invariants_of(lqm);
    c0 = -inv.N.value() * inv.N.value() / (4.0 * inv.Delta);
  }
  return sample_central_quadric(g.matrix, r, c0, count);
}

}  // namespace curvatura

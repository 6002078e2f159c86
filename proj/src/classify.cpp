#include "curvatura/classify.hpp"

#include <Eigen/LU>
#include <cmath>

namespace curvatura {
namespace {

struct SegmentPosition {
  enum class Kind { Semiumbilic, Real, Imaginary, Flat } kind;
  bool warning;
  double decisive;
};

// Position of the origin against a segment indicatrix: off-line distance
// decides Semiumbilic, otherwise the offset along the segment against its
// half-length splits the inflection types.
SegmentPosition segment_position(const EllipseGeometry& geom, double tol) {
  const Eigen::VectorXd& h = geom.center;
  const Eigen::VectorXd& d = geom.w1;
  const double along = -h.dot(d);
  const Eigen::VectorXd off_vec = -h - along * d;
  const double off = off_vec.norm();
  const double dist_scale = std::max({geom.r1, h.norm(), 1e-300});
  if (off > 10.0 * tol * dist_scale)
    return {SegmentPosition::Kind::Semiumbilic, false, off};

  const double diff = std::abs(along) - geom.r1;
  const double thr = tol * std::max(geom.r1, std::abs(along));
  SegmentPosition out{SegmentPosition::Kind::Flat, std::abs(diff) <= 10.0 * thr,
                      diff};
  if (diff < -thr)
    out.kind = SegmentPosition::Kind::Real;
  else if (diff > thr)
    out.kind = SegmentPosition::Kind::Imaginary;
  return out;
}

}  // namespace

const char* to_string(Label4 label) {
  switch (label) {
    case Label4::Elliptic: return "Elliptic";
    case Label4::Hyperbolic: return "Hyperbolic";
    case Label4::Parabolic: return "Parabolic";
    case Label4::Semiumbilic: return "Semiumbilic";
    case Label4::InflectionReal: return "InflectionReal";
    case Label4::InflectionImaginary: return "InflectionImaginary";
    case Label4::InflectionFlat: return "InflectionFlat";
    case Label4::Umbilic: return "Umbilic";
    case Label4::FlatUmbilic: return "FlatUmbilic";
  }
  return "?";
}

const char* to_string(Label5 label) {
  switch (label) {
    case Label5::PseudoElliptic: return "PseudoElliptic";
    case Label5::PseudoHyperbolic: return "PseudoHyperbolic";
    case Label5::PseudoParabolic: return "PseudoParabolic";
    case Label5::FlatElliptic: return "FlatElliptic";
    case Label5::FlatHyperbolic: return "FlatHyperbolic";
    case Label5::FlatParabolic: return "FlatParabolic";
    case Label5::Semiumbilic: return "Semiumbilic";
    case Label5::InflectionReal: return "InflectionReal";
    case Label5::InflectionImaginary: return "InflectionImaginary";
    case Label5::InflectionFlat: return "InflectionFlat";
    case Label5::Umbilic: return "Umbilic";
    case Label5::FlatUmbilic: return "FlatUmbilic";
  }
  return "?";
}

PointClass4 classify_r4(const LocalQuadraticMap& lqm, double tol) {
  if (lqm.codim != 2)
    throw std::invalid_argument("classify_r4: codim must be 2");
  const Invariants inv = invariants_of(lqm);
  const EllipseGeometry geom = ellipse_geometry(indicatrix(lqm), tol);
  const double scale = std::max(lqm.max_abs_coeff(), 1e-300);

  PointClass4 out{Label4::FlatUmbilic};
  out.centered = inv.H.norm() <= tol * scale;
  const double fscale = inv.focal.cwiseAbs().maxCoeff();
  out.circle_caustic =
      fscale > 0.0 && std::abs(inv.focal[1] - inv.focal[0]) <= tol * fscale;

  if (geom.rank == 2) {
    const double thr = tol * scale * scale * scale * scale;
    out.decisive = inv.Delta;
    out.boundary_warning = std::abs(inv.Delta) <= 10.0 * thr;
    if (inv.Delta > thr)
      out.label = Label4::Elliptic;
    else if (inv.Delta < -thr)
      out.label = Label4::Hyperbolic;
    else
      out.label = Label4::Parabolic;
    return out;
  }
  if (geom.rank == 1) {
    const SegmentPosition pos = segment_position(geom, tol);
    out.decisive = pos.decisive;
    out.boundary_warning = pos.warning;
    switch (pos.kind) {
      case SegmentPosition::Kind::Semiumbilic:
        out.label = Label4::Semiumbilic;
        break;
      case SegmentPosition::Kind::Real:
        out.label = Label4::InflectionReal;
        break;
      case SegmentPosition::Kind::Imaginary:
        out.label = Label4::InflectionImaginary;
        break;
      case SegmentPosition::Kind::Flat:
        out.label = Label4::InflectionFlat;
        break;
    }
    return out;
  }
  out.decisive = inv.H.norm();
  out.label = out.centered ? Label4::FlatUmbilic : Label4::Umbilic;
  return out;
}

PointClass5 classify_r5(const LocalQuadraticMap& lqm, double tol) {
  if (lqm.codim != 3)
    throw std::invalid_argument("classify_r5: codim must be 3");
  const Invariants inv = invariants_of(lqm);
  const EllipseGeometry geom = ellipse_geometry(indicatrix(lqm), tol);
  const double scale = std::max(lqm.max_abs_coeff(), 1e-300);

  PointClass5 out{Label5::FlatUmbilic};
  const double tau = inv.tau.value();
  const double tau_thr = tol * scale * scale * scale;
  out.tau_sign = std::abs(tau) <= tau_thr ? 0 : (tau > 0.0 ? 1 : -1);

  {
    // rank of [(A-C)/2 | B | H]
    Eigen::MatrixXd m(3, 3);
    m.col(0) = 0.5 * (lqm.A - lqm.C);
    m.col(1) = lqm.B;
    m.col(2) = 0.5 * (lqm.A + lqm.C);
    out.m_stratum = column_rank(m, tol);
  }

  if (geom.rank == 2) {
    if (out.tau_sign != 0) {
      const GaussForm g = gauss_form(lqm);
      const Eigen::VectorXd h = 0.5 * (lqm.A + lqm.C);
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(g.matrix);
      const Eigen::VectorXd r = lu.solve(h);
      const Eigen::VectorXd x = lu.solve(r);
      const double val = r.dot(x);  // 2 G_p^*(R)
      const double vscale = std::max(r.cwiseAbs().dot(x.cwiseAbs()), 1e-300);
      out.decisive = val;
      out.boundary_warning = std::abs(val) <= 10.0 * tol * vscale;
      if (val > tol * vscale)
        out.label = Label5::PseudoElliptic;
      else if (val < -tol * vscale)
        out.label = Label5::PseudoHyperbolic;
      else
        out.label = Label5::PseudoParabolic;
      return out;
    }
    // flat branch: position of the origin against E_p inside its plane
    const EllipseContainment c =
        ellipse_containment(geom, Eigen::VectorXd::Zero(3));
    out.decisive = c.ratio - 1.0;
    out.boundary_warning = std::abs(c.ratio - 1.0) <= 10.0 * tol;
    if (c.ratio < 1.0 - tol)
      out.label = Label5::FlatElliptic;
    else if (c.ratio > 1.0 + tol)
      out.label = Label5::FlatHyperbolic;
    else
      out.label = Label5::FlatParabolic;
    return out;
  }
  if (geom.rank == 1) {
    const SegmentPosition pos = segment_position(geom, tol);
    out.decisive = pos.decisive;
    out.boundary_warning = pos.warning;
    switch (pos.kind) {
      case SegmentPosition::Kind::Semiumbilic:
        out.label = Label5::Semiumbilic;
        break;
      case SegmentPosition::Kind::Real:
        out.label = Label5::InflectionReal;
        break;
      case SegmentPosition::Kind::Imaginary:
        out.label = Label5::InflectionImaginary;
        break;
      case SegmentPosition::Kind::Flat:
        out.label = Label5::InflectionFlat;
        break;
    }
    return out;
  }
  out.decisive = inv.H.norm();
  out.label = inv.H.norm() <= tol * scale ? Label5::FlatUmbilic : Label5::Umbilic;
  return out;
}

InequalityReport inequality_report(const LocalQuadraticMap& lqm, double tol) {
  InequalityReport rep;
  auto push = [&](const std::string& name, double lhs, double rhs) {
    InequalityEntry e;
    e.name = name;
    e.lhs = lhs;
    e.rhs = rhs;
    e.slack = lhs - rhs;
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    e.holds = e.slack >= -tol * scale;
    rep.entries.push_back(e);
    rep.all_hold = rep.all_hold && e.holds;
  };

  const Invariants inv = invariants_of(lqm);
  const double scale = std::max(lqm.max_abs_coeff(), 1e-300);
  const double h2 = inv.H.squaredNorm();

  if (lqm.codim == 2) {
    const double n = inv.N.value();
    push("N2_ge_4Delta", n * n, 4.0 * inv.Delta);
    push("K2_ge_4Delta", inv.K * inv.K, 4.0 * inv.Delta);
    const double delta_thr = tol * scale * scale * scale * scale;
    if (inv.Delta > delta_thr) push("Delta_pos_implies_K_negative", -inv.K, 0.0);
    push("wintgen_H2_ge_K_plus_absN", h2, inv.K + std::abs(n));

    if (std::abs(inv.Delta) > delta_thr) {
      const Eigen::VectorXd r =
          gauss_form(lqm).matrix.partialPivLu().solve(inv.H);
      const double r2 = r.squaredNorm();
      push("paired_wintgen_R2_ge_KoverD_plus_absNoverD", r2,
           inv.K / inv.Delta + std::abs(n / inv.Delta));
      const double alpha = 1.0 - n * n / (4.0 * inv.Delta);
      const double k1 = inv.focal[0], k2 = inv.focal[1];
      if (inv.Delta > delta_thr) {
        // elliptic: k1 <= k2 < 0, alpha <= 0
        push("H2_ge_alpha_K2", h2, alpha * k2);
        push("H2_le_alpha_K1", alpha * k1, h2);
        push("R2_ge_alpha_over_K1", r2, alpha / k1);
        push("R2_le_alpha_over_K2", alpha / k2, r2);
      } else {
        // hyperbolic: k1 < 0 < k2, the positive eigenvalue bounds from below
        push("H2_ge_alpha_K2", h2, alpha * k2);
        push("R2_ge_alpha_over_K2", r2, alpha / k2);
      }
    }
  } else if (lqm.codim == 3) {
    const double acal = inv.Acal.value();
    push("K2_ge_3A", inv.K * inv.K, 3.0 * acal);
    push("A2_ge_3KDelta", acal * acal, 3.0 * inv.K * inv.Delta);
    push("wintgen_H2_ge_K_plus_absN", h2, inv.K + std::abs(inv.N.value()));

    const double delta_thr = tol * std::pow(scale, 6.0);
    if (std::abs(inv.Delta) > delta_thr) {
      const Eigen::VectorXd r =
          gauss_form(lqm).matrix.partialPivLu().solve(inv.H);
      const double r2 = r.squaredNorm();
      const double k3 = inv.focal[2];
      push("H2_ge_K3", h2, k3);
      push("R2_ge_1_over_K3", r2, 1.0 / k3);
      const double tau = inv.tau.value();
      if (std::abs(tau) > tol * scale * scale * scale)
        push("paired_wintgen_R2_ge_AoverD_plus_2H_over_absTau", r2,
             acal / inv.Delta + 2.0 * inv.H.norm() / std::abs(tau));
      const bool signature_ok =
          inv.focal[0] < 0.0 && inv.focal[1] < 0.0 && inv.focal[2] > 0.0;
      push("focal_two_negative_one_positive", signature_ok ? 1.0 : -1.0, 0.0);
    }
  }
  return rep;
}

std::vector<GridCell> grid_classify(const SurfaceSpec& spec, double s0,
                                    double s1, double t0, double t1,
                                    int resolution, double tol) {
  if (resolution < 2)
    throw std::invalid_argument("grid_classify: resolution must be >= 2");
  std::vector<GridCell> cells;
  cells.reserve(static_cast<std::size_t>(resolution) * resolution);
  for (int i = 0; i < resolution; ++i) {
    const double s = s0 + (s1 - s0) * i / (resolution - 1);
    for (int j = 0; j < resolution; ++j) {
      const double t = t0 + (t1 - t0) * j / (resolution - 1);
      GridCell cell;
      cell.i = i;
      cell.j = j;
      cell.s = s;
      cell.t = t;
      try {
        const LocalQuadraticMap lqm = local_quadratic_map_at(spec, s, t);
        cell.inv = invariants_of(lqm);
        if (lqm.codim == 2) {
          const PointClass4 pc = classify_r4(lqm, tol);
          cell.label = to_string(pc.label);
          cell.boundary_warning = pc.boundary_warning;
        } else if (lqm.codim == 3) {
          const PointClass5 pc = classify_r5(lqm, tol);
          cell.label = to_string(pc.label);
          cell.boundary_warning = pc.boundary_warning;
          cell.tau_sign = pc.tau_sign;
        } else {
          cell.label = "NA";
        }
        cell.ok = true;
      } catch (const std::exception& ex) {
        cell.ok = false;
        cell.error = ex.what();
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

}  // namespace curvatura

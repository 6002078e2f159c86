#include "curvatura/paired.hpp"

#include <Eigen/LU>
#include <cmath>
#include <stdexcept>

namespace curvatura {
namespace {

constexpr double kPi = 3.14159265358979323846;

double psi_pair_scale(const QuadForm2& x, const QuadForm2& y) {
  return 0.5 * (std::abs(x.a * y.c) + std::abs(y.a * x.c)) +
         std::abs(x.b * y.b);
}

double max_coeff(const QuadForm2& q) { return q.max_abs_coeff(); }

}  // namespace

double IdentityReport::max_residual() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.residual);
  return m;
}

PairedBundle paired_map(const LocalQuadraticMap& lqm) {
  const GaussForm g = gauss_form(lqm);
  const double emax = g.eigenvalues.cwiseAbs().maxCoeff();
  const double emin = g.eigenvalues.cwiseAbs().minCoeff();
  if (emax == 0.0 || emin <= 1e-14 * emax)
    throw SingularError("paired_map: Delta = 0, paired map undefined");

  PairedBundle bundle;
  bundle.original = lqm;
  bundle.condition = emax / emin;
  bundle.reliable = bundle.condition <= 1e12;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(g.matrix);
  bundle.paired = make_lqm(lu.solve(lqm.A), lu.solve(lqm.B), lu.solve(lqm.C));
  bundle.inv = invariants_of(lqm);
  bundle.inv_star = invariants_of(bundle.paired);

  if (bundle.reliable) {
    // spectral-invariant cross-checks; a formula bug shows up as an O(1)
    // violation, conditioning only as ~eps * condition
    const double canary = std::max(1e-8, 1e-13 * bundle.condition);
    const Invariants& a = bundle.inv;
    const Invariants& b = bundle.inv_star;
    auto need = [&](double lhs, double rhs, const char* what) {
      if (rel_err(lhs, rhs) > canary)
        throw std::logic_error(std::string("paired_map cross-check: ") + what);
    };
    need(b.Delta, 1.0 / a.Delta, "Delta* = 1/Delta");
    if (lqm.codim == 2) {
      need(b.K, a.K / a.Delta, "K* = K/Delta");
      need(b.N.value(), a.N.value() / a.Delta, "N* = N/Delta");
    } else if (lqm.codim == 3) {
      need(b.K, a.Acal.value() / a.Delta, "K* = Acal/Delta");
      need(b.Acal.value(), a.K / a.Delta, "Acal* = K/Delta");
      need(b.tau.value(), 1.0 / a.tau.value(), "tau* = 1/tau");
    }
    Eigen::VectorXd inv_focal(a.focal.size());
    for (int i = 0; i < a.focal.size(); ++i) inv_focal[i] = 1.0 / a.focal[i];
    std::sort(inv_focal.data(), inv_focal.data() + inv_focal.size());
    for (int i = 0; i < a.focal.size(); ++i)
      need(b.focal[i], inv_focal[i], "focal* = 1/focal");
  }
  return bundle;
}

double paired_caustic_image_check(const PairedBundle& bundle, int samples) {
  const GaussForm g = gauss_form(bundle.original);
  const Quadric paired_caustic = caustic_quadric(bundle.paired);
  const auto pts = sample_caustic_points(bundle.original, samples);
  double worst = 0.0;
  for (const auto& q : pts) {
    const Eigen::VectorXd y = g.matrix * q;
    worst = std::max(worst, std::abs(paired_caustic.eval(y)) /
                                paired_caustic.eval_scale(y));
  }
  return worst;
}

Bitangency bitangency_points(const PairedBundle& bundle) {
  if (bundle.original.codim != 2)
    throw std::invalid_argument("bitangency_points: codim must be 2");
  const CausticCenter cc = caustic_center(bundle.original);
  if (!cc.affine())
    throw SingularError("bitangency_points: caustic centre not affine");
  const Eigen::Vector2d r(cc.v[0], cc.v[1]);
  const Eigen::Vector2d h(bundle.inv.H[0], bundle.inv.H[1]);
  const double rho = r.dot(h);
  const double scale = std::max(1.0, std::abs(rho));

  Bitangency out;
  if (std::abs(rho) <= kDefaultTol * scale * 1e-3 ||
      std::abs(rho) <= 1e-12) {
    out.kind = Bitangency::Kind::Degenerate;
    return out;
  }
  const double disc = rho * (rho - 1.0);
  const double dscale = rho * rho + std::abs(rho);
  if (disc < -kClassifyTol * dscale) {
    out.kind = Bitangency::Kind::NoRealTangency;
    return out;
  }
  if (disc <= kClassifyTol * dscale) {
    out.kind = Bitangency::Kind::DoublePoint;
    out.lambda1 = out.lambda2 = 1.0;
    out.points[0] = out.points[1] = r;
    return out;
  }
  const double sq = std::sqrt(disc);
  out.kind = Bitangency::Kind::TwoPoints;
  out.lambda1 = 1.0 - sq / std::abs(rho);
  out.lambda2 = 1.0 + sq / std::abs(rho);
  out.points[0] = out.lambda1 * r;
  out.points[1] = out.lambda2 * r;
  return out;
}

IdentityReport component_identities_check(const PairedBundle& bundle,
                                          int samples) {
  const LocalQuadraticMap& o = bundle.original;
  const LocalQuadraticMap& p = bundle.paired;
  const int l = o.codim;
  IdentityReport rep;

  // <Q_i, Q_j*> = delta_ij
  double worst = 0.0;
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) {
      const QuadForm2 qi = o.component(i);
      const QuadForm2 qj = p.component(j);
      const double want = i == j ? 1.0 : 0.0;
      worst = std::max(worst, rel_err(psi_inner(qi, qj), want,
                                      psi_pair_scale(qi, qj)));
    }
  rep.entries.push_back({"psi_biorthogonality", worst});

  if (l == 3) {
    const double tau = bundle.inv.tau.value();
    if (std::abs(tau) > 0.0) {
      worst = 0.0;
      for (int i = 0; i < 3; ++i) {
        const QuadForm2 lhs = p.component(i);
        const QuadForm2 br =
            poisson_bracket(o.component((i + 1) % 3), o.component((i + 2) % 3));
        const QuadForm2 rhs = (1.0 / tau) * br;
        const double scale =
            std::max({max_coeff(lhs), max_coeff(rhs), 1e-300});
        const QuadForm2 d = lhs - rhs;
        worst = std::max(worst, max_coeff(d) / std::max(1.0, scale));
      }
      rep.entries.push_back({"paired_components_from_brackets", worst});
    }
  }

  // <phi, phi*>(u) pointwise
  worst = 0.0;
  const QuadForm2 bracket01 = poisson_bracket(o.component(0), o.component(1));
  for (int k = 0; k < samples; ++k) {
    const double theta = kPi * k / samples;
    const double u1 = std::cos(theta), u2 = std::sin(theta);
    double lhs = 0.0, scale = 0.0;
    for (int i = 0; i < l; ++i) {
      const double term = o.component(i).eval(u1, u2) * p.component(i).eval(u1, u2);
      lhs += term;
      scale += std::abs(term);
    }
    double rhs = 0.0;
    if (l == 2) {
      const double be = bracket01.eval(u1, u2);
      rhs = -be * be / bundle.inv.Delta;
    }
    worst = std::max(worst, rel_err(lhs, rhs, scale));
  }
  rep.entries.push_back({"phi_phistar_pointwise", worst});

  // sum of brackets {Q_i, Q_i*} vanishes (for codim 2 this is the
  // antisymmetry {Q1,Q1*} = -{Q2,Q2*})
  QuadForm2 sum{0, 0, 0};
  double scale_sum = 0.0;
  for (int i = 0; i < l; ++i) {
    const QuadForm2 br = poisson_bracket(o.component(i), p.component(i));
    sum = sum + br;
    scale_sum += max_coeff(br);
  }
  rep.entries.push_back(
      {"sum_bracket_Qi_Qistar_zero",
       max_coeff(sum) / std::max(1.0, scale_sum)});
  return rep;
}

IdentityReport asymptotic_equivalences_check(const PairedBundle& bundle) {
  if (bundle.original.codim != 2)
    throw std::invalid_argument(
        "asymptotic_equivalences_check: codim must be 2");
  IdentityReport rep;
  const LocalQuadraticMap& lqm = bundle.original;
  const GaussForm g = gauss_form(lqm);
  const QuadForm2 br = poisson_bracket(lqm.component(0), lqm.component(1));
  const double brs = std::max(br.max_abs_coeff(), 1e-300);

  auto six_values = [&](double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    const Eigen::VectorXd e = 2.0 * lqm.phi(c, s);
    const Eigen::VectorXd es = 2.0 * bundle.paired.phi(c, s);
    // tangent directions of the two ellipses at the parameter
    const EllipseParam ep = indicatrix(lqm);
    const EllipseParam eps = indicatrix(bundle.paired);
    const Eigen::VectorXd de = -2.0 * std::sin(2.0 * theta) * ep.u_axis +
                               2.0 * std::cos(2.0 * theta) * ep.v_axis;
    const Eigen::VectorXd des = -2.0 * std::sin(2.0 * theta) * eps.u_axis +
                                2.0 * std::cos(2.0 * theta) * eps.v_axis;
    const double e_scale = std::max(1e-300, e.norm() * de.norm());
    const double es_scale = std::max(1e-300, es.norm() * des.norm());
    const double g_norm = g.matrix.cwiseAbs().maxCoeff() * 2.0;
    std::array<double, 5> vals;
    vals[0] = br.eval(c, s) / brs;                                // bracket
    vals[1] = (e[0] * de[1] - e[1] * de[0]) / e_scale;            // E tangent
    vals[2] = (es[0] * des[1] - es[1] * des[0]) / es_scale;       // E* tangent
    vals[3] = es.dot(g.matrix * es) /
              std::max(1e-300, g_norm * es.squaredNorm());        // binormal
    vals[4] = e.dot(es) / std::max(1e-300, e.norm() * es.norm()); // orthogonal
    return vals;
  };

  const AsymptoticDirections ad = asymptotic_directions_r4(lqm);
  double worst_zero = 0.0;
  for (const auto& root : ad.roots) {
    const auto vals = six_values(root.theta);
    for (const double v : vals) worst_zero = std::max(worst_zero, std::abs(v));
  }
  rep.entries.push_back({"all_vanish_at_asymptotic_directions", worst_zero});

  // the five signed quantities must change sign at the same angles: collect
  // each one's crossings over a fine theta grid and compare the locations
  constexpr int kGrid = 256;
  std::array<std::vector<double>, 5> crossings;
  std::array<double, 5> prev = six_values(0.0);
  for (int k = 1; k <= kGrid; ++k) {
    const double theta = 3.14159265358979323846 * k / kGrid;
    const auto vals = six_values(theta);
    for (int i = 0; i < 5; ++i) {
      if ((prev[i] < 0.0) != (vals[i] < 0.0)) {
        const double frac = prev[i] / (prev[i] - vals[i]);
        crossings[i].push_back(
            3.14159265358979323846 * (k - 1 + frac) / kGrid);
      }
      prev[i] = vals[i];
    }
  }
  double worst_locus = 0.0;
  const double cell = 3.14159265358979323846 / kGrid;
  for (int i = 1; i < 5; ++i) {
    if (crossings[i].size() != crossings[0].size()) {
      worst_locus = 1.0;
      continue;
    }
    for (std::size_t j = 0; j < crossings[i].size(); ++j)
      worst_locus =
          std::max(worst_locus,
                   std::abs(crossings[i][j] - crossings[0][j]) / (2.0 * cell));
  }
  rep.entries.push_back({"vanishing_locus_agrees", worst_locus});
  return rep;
}

IdentityReport sigma_star_geometry_check(const PairedBundle& bundle) {
  if (bundle.original.codim != 3)
    throw std::invalid_argument("sigma_star_geometry_check: codim must be 3");
  IdentityReport rep;
  const GaussForm g = gauss_form(bundle.original);
  const Eigen::MatrixXd ginv =
      g.matrix.partialPivLu().solve(Eigen::MatrixXd::Identity(3, 3));
  const double k_inv = bundle.inv.K;
  const double acal = bundle.inv.Acal.value();
  const double tau = bundle.inv.tau.value();

  // 2 G_p at the unit principal diagonal vectors equals K; 2 G_p^* at the
  // tau-scaled diagonals equals Acal
  double worst_k = 0.0, worst_a = 0.0;
  const double scale_k = g.eigenvalues.cwiseAbs().sum();
  for (int s1 = -1; s1 <= 1; s1 += 2)
    for (int s2 = -1; s2 <= 1; s2 += 2) {
      Eigen::Vector3d eps(static_cast<double>(s1), static_cast<double>(s2),
                          1.0);
      const Eigen::VectorXd q = g.eigenvectors * eps;
      worst_k = std::max(worst_k, rel_err(q.dot(g.matrix * q), k_inv, scale_k));
      const Eigen::VectorXd qt = tau * q;
      double scale_a = 0.0;
      for (int i = 0; i < 3; ++i)
        scale_a += std::abs(tau * tau / g.eigenvalues[i]);
      worst_a =
          std::max(worst_a, rel_err(qt.dot(ginv * qt), acal, scale_a));
    }
  rep.entries.push_back({"diagonal_eval_K", worst_k});
  rep.entries.push_back({"diagonal_eval_Acal", worst_a});

  // cone rulings phi(u) and phi*(u) are orthogonal
  double worst_orth = 0.0;
  for (int k = 0; k < 16; ++k) {
    const double theta = kPi * k / 16.0;
    const Eigen::VectorXd x = bundle.original.phi(std::cos(theta), std::sin(theta));
    const Eigen::VectorXd y = bundle.paired.phi(std::cos(theta), std::sin(theta));
    const double scale = x.cwiseAbs().dot(y.cwiseAbs());
    worst_orth = std::max(worst_orth, rel_err(x.dot(y), 0.0, scale));
  }
  rep.entries.push_back({"ruling_orthogonality", worst_orth});

  // in the principal basis the q3 = 1 sections of the two cones are polar
  // dual ellipses with respect to the unit circle
  const double k1 = g.eigenvalues[0], k2 = g.eigenvalues[1],
               k3 = g.eigenvalues[2];
  double worst_dual = 1.0;
  if (k1 < 0.0 && k2 < 0.0 && k3 > 0.0) {
    worst_dual = 0.0;
    const double a1 = -k1 / k3, a2 = -k2 / k3;
    for (int k = 0; k < 16; ++k) {
      const double phi = 2.0 * kPi * k / 16.0;
      const double p1 = std::cos(phi) / std::sqrt(a1);
      const double p2 = std::sin(phi) / std::sqrt(a2);
      const double q1 = a1 * p1, q2 = a2 * p2;  // pole of the tangent at P
      const double val = (-k3 / k1) * q1 * q1 + (-k3 / k2) * q2 * q2;
      worst_dual = std::max(worst_dual, rel_err(val, 1.0));
    }
  }
  rep.entries.push_back({"section_polar_duality", worst_dual});

  rep.entries.push_back(
      {"min_K_Acal_negative", std::min(k_inv, acal) < 0.0 ? 0.0 : 1.0});
  return rep;
}

}  // namespace curvatura

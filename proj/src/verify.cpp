#include "curvatura/verify.hpp"

#include <Eigen/LU>
#include <cmath>

#include "curvatura/oracle.hpp"

namespace curvatura::verify {
namespace {

constexpr double kPi = 3.14159265358979323846;

using PsiFn = double (*)(const QuadForm2&, const QuadForm2&);

double psi_flipped(const QuadForm2& x, const QuadForm2& y) {
  // the injected bug: '+' where the formula has '-'
  return 0.5 * (x.a * y.c + y.a * x.c) + x.b * y.b;
}

double psi_scale(const QuadForm2& x, const QuadForm2& y) {
  return 0.5 * (std::abs(x.a * y.c) + std::abs(y.a * x.c)) +
         std::abs(x.b * y.b);
}

QuadForm2 random_form(Rng& rng) {
  return {rng.coeff(), rng.coeff(), rng.coeff()};
}

QuadForm2 psi_project_out(const QuadForm2& y, const QuadForm2& x) {
  const double n2 = psi_norm2(x);
  const double k = psi_inner(y, x) / n2;
  return y - k * x;
}

Eigen::VectorXd random_unit(Rng& rng, int n) {
  for (;;) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.uniform(-1.0, 1.0);
    const double nrm = v.norm();
    if (nrm > 0.1) return v / nrm;
  }
}

Eigen::Vector3d cross3(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return Eigen::Vector3d(x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2],
                         x[0] * y[1] - x[1] * y[0]);
}

struct Battery {
  const Options& opts;
  std::vector<PropertyResult> results;
  PsiFn psi;

  explicit Battery(const Options& o)
      : opts(o), psi(o.inject_psi_sign_flip ? &psi_flipped : &psi_inner) {}

  int scaled(int n) const {
    return std::max(4, static_cast<int>(n * opts.count_scale));
  }

  void add(const std::string& name, int samples, double max_residual,
           double threshold, const std::string& note = "") {
    results.push_back(PropertyResult{name, samples, max_residual, threshold,
                                     max_residual <= threshold, note});
  }
};

// ---------------------------------------------------------------- sl2 block

void battery_sl2(Battery& b) {
  Rng rng(b.opts.seed ^ 0x51f2u);
  const int n = b.scaled(2000);
  double worst_orth = 0.0, worst_gram = 0.0, worst_triple = 0.0,
         worst_jacobi = 0.0;
  for (int k = 0; k < n; ++k) {
    const QuadForm2 q1 = random_form(rng), q2 = random_form(rng),
                    q3 = random_form(rng);
    const QuadForm2 br = poisson_bracket(q1, q2);
    worst_orth =
        std::max(worst_orth, rel_err(b.psi(br, q1), 0.0, psi_scale(br, q1)));
    worst_orth =
        std::max(worst_orth, rel_err(b.psi(br, q2), 0.0, psi_scale(br, q2)));

    const double lhs = b.psi(br, br);
    const double rhs =
        b.psi(q1, q1) * b.psi(q2, q2) - b.psi(q1, q2) * b.psi(q1, q2);
    worst_gram = std::max(worst_gram, rel_err(lhs, rhs));

    const double triple = b.psi(q1, poisson_bracket(q2, q3));
    Eigen::Matrix3d gram;
    const QuadForm2 qs[3] = {q1, q2, q3};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) gram(i, j) = b.psi(qs[i], qs[j]);
    worst_triple =
        std::max(worst_triple, rel_err(triple * triple, gram.determinant()));

    const QuadForm2 jac = poisson_bracket(q1, poisson_bracket(q2, q3)) +
                          poisson_bracket(q2, poisson_bracket(q3, q1)) +
                          poisson_bracket(q3, poisson_bracket(q1, q2));
    const double jscale =
        std::max({q1.max_abs_coeff(), q2.max_abs_coeff(), q3.max_abs_coeff()});
    worst_jacobi =
        std::max(worst_jacobi, jac.max_abs_coeff() /
                                   std::max(1.0, jscale * jscale * jscale));
  }
  b.add("sl2.bracket_pseudo_orthogonality", n, worst_orth, 1e-10);
  b.add("sl2.gram_identity", n, worst_gram, 1e-10);
  b.add("sl2.triple_identity", n, worst_triple, 1e-10);
  b.add("sl2.jacobi_identity", n, worst_jacobi, 1e-10);

  // conjugate pair: at least one of two psi-orthogonal independent forms has
  // negative squared pseudo-norm
  int bad = 0;
  const int m = b.scaled(1000);
  for (int k = 0; k < m; ++k) {
    QuadForm2 q1 = random_form(rng);
    while (std::abs(psi_norm2(q1)) < 1e-3) q1 = random_form(rng);
    const QuadForm2 q2 = psi_project_out(random_form(rng), q1);
    if (q2.max_abs_coeff() < 1e-6) continue;
    if (std::min(psi_norm2(q1), psi_norm2(q2)) >= 0.0) ++bad;
  }
  b.add("sl2.conjugate_pair_negative_norm", m, static_cast<double>(bad), 0.0);

  // self-conjugate triangle: exactly one positive squared norm among three
  // pairwise psi-orthogonal independent forms
  bad = 0;
  for (int k = 0; k < m; ++k) {
    QuadForm2 q1 = random_form(rng);
    while (std::abs(psi_norm2(q1)) < 1e-3) q1 = random_form(rng);
    const QuadForm2 q2 = psi_project_out(random_form(rng), q1);
    if (q2.max_abs_coeff() < 1e-6 || std::abs(psi_norm2(q2)) < 1e-6) continue;
    const QuadForm2 q3 = poisson_bracket(q1, q2);
    if (q3.max_abs_coeff() < 1e-6) continue;
    int pos = 0;
    for (const QuadForm2& q : {q1, q2, q3})
      if (psi_norm2(q) > 0.0) ++pos;
    if (pos != 1) ++bad;
  }
  b.add("sl2.selfconjugate_triangle_signs", m, static_cast<double>(bad), 0.0);
}

// ---------------------------------------------------------------- jets

void battery_jets(Battery& b) {
  Rng rng(b.opts.seed ^ 0x1e72u);
  const int n_specs = b.scaled(40);
  double worst = 0.0;
  for (int k = 0; k < n_specs; ++k) {
    const int dim = 3 + rng.index(3);
    const SurfaceSpec spec = random_polynomial_surface(rng, dim, 4);
    const double s0 = rng.uniform(-0.4, 0.4), t0 = rng.uniform(-0.4, 0.4);
    const Jet2 jet = eval_jet2(spec, s0, t0);
    for (int i = 0; i < dim; ++i) {
      const ExprPtr f = spec.components[i];
      const ExprPtr fs = derive(f, 's');
      const ExprPtr ft = derive(f, 't');
      const double vals[6] = {eval_expr(f, s0, t0),
                              eval_expr(fs, s0, t0),
                              eval_expr(ft, s0, t0),
                              eval_expr(derive(fs, 's'), s0, t0),
                              eval_expr(derive(fs, 't'), s0, t0),
                              eval_expr(derive(ft, 't'), s0, t0)};
      const double got[6] = {jet.value[i], jet.d_s[i],  jet.d_t[i],
                             jet.d_ss[i],  jet.d_st[i], jet.d_tt[i]};
      for (int j = 0; j < 6; ++j)
        worst = std::max(worst, rel_err(got[j], vals[j]));
    }
  }
  b.add("jet.polynomial_exactness", n_specs, worst, 1e-12);

  double worst_rot = 0.0, worst_reflect = 0.0;
  const int n_rot = b.scaled(30);
  for (int k = 0; k < n_rot; ++k) {
    const int dim = 3 + rng.index(3);
    const SurfaceSpec spec = random_polynomial_surface(rng, dim, 3);
    const double s0 = rng.uniform(-0.3, 0.3), t0 = rng.uniform(-0.3, 0.3);
    Invariants base;
    try {
      base = invariants_of(local_quadratic_map_at(spec, s0, t0));
    } catch (const ImmersionError&) {
      continue;
    }

    const double alpha = rng.uniform(0.0, 2.0 * kPi);
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    // (s,t) = (s0 + ca u - sa v, t0 + sa u + ca v), evaluated at (u,v) = 0
    const ExprPtr new_s = make_bin(
        BinOp::Add, make_num(s0),
        make_bin(BinOp::Sub, make_bin(BinOp::Mul, make_num(ca), make_var('s')),
                 make_bin(BinOp::Mul, make_num(sa), make_var('t'))));
    const ExprPtr new_t = make_bin(
        BinOp::Add, make_num(t0),
        make_bin(BinOp::Add, make_bin(BinOp::Mul, make_num(sa), make_var('s')),
                 make_bin(BinOp::Mul, make_num(ca), make_var('t'))));
    SurfaceSpec rotated = spec;
    for (auto& comp : rotated.components) comp = substitute(comp, new_s, new_t);
    const Invariants ri = invariants_of(local_quadratic_map_at(rotated, 0, 0));

    worst_rot = std::max(worst_rot, rel_err(ri.K, base.K));
    worst_rot = std::max(worst_rot, rel_err(ri.Delta, base.Delta));
    if (base.N) worst_rot = std::max(worst_rot, rel_err(*ri.N, *base.N));
    if (base.Acal) worst_rot = std::max(worst_rot, rel_err(*ri.Acal, *base.Acal));
    if (base.tau) worst_rot = std::max(worst_rot, rel_err(*ri.tau, *base.tau));
    worst_rot = std::max(worst_rot, rel_err(ri.H.norm(), base.H.norm()));
    for (int i = 0; i < base.focal.size(); ++i)
      worst_rot = std::max(worst_rot, rel_err(ri.focal[i], base.focal[i]));

    // orientation-reversing reparametrization (s,t) -> (t,s): against a
    // FIXED normal frame N and tau flip sign; the adapted-frame pipeline
    // co-flips its last normal (positive-determinant convention), so the
    // reported N and tau are unchanged. Both facts are checked.
    const ExprPtr swap_s = make_bin(BinOp::Add, make_num(s0), make_var('t'));
    const ExprPtr swap_t = make_bin(BinOp::Add, make_num(t0), make_var('s'));
    SurfaceSpec swapped = spec;
    for (auto& comp : swapped.components)
      comp = substitute(comp, swap_s, swap_t);
    const Invariants si = invariants_of(local_quadratic_map_at(swapped, 0, 0));
    worst_reflect = std::max(worst_reflect, rel_err(si.K, base.K));
    if (base.N)
      worst_reflect = std::max(worst_reflect, rel_err(*si.N, *base.N));
    if (base.tau)
      worst_reflect = std::max(worst_reflect, rel_err(*si.tau, *base.tau));

    // fixed-frame reflection at the form level: Q_i(t,s) has A and C swapped
    const LocalQuadraticMap lqm = local_quadratic_map_at(spec, s0, t0);
    const LocalQuadraticMap reflected = make_lqm(lqm.C, lqm.B, lqm.A);
    const Invariants fi = invariants_of(reflected);
    if (base.N)
      worst_reflect = std::max(worst_reflect, rel_err(*fi.N, -*base.N));
    if (base.tau)
      worst_reflect = std::max(worst_reflect, rel_err(*fi.tau, -*base.tau));
  }
  b.add("jet.tangent_rotation_invariance", n_rot, worst_rot, 1e-8);
  b.add("jet.reflection_sign_convention", n_rot, worst_reflect, 1e-8);

  // ambient rotations fixing the tangent plane (Monge graphs at the origin)
  double worst_normal = 0.0;
  const int n_norm = b.scaled(30);
  for (int k = 0; k < n_norm; ++k) {
    const int dim = 3 + rng.index(3);
    const int codim = dim - 2;
    std::vector<ExprPtr> comps{make_var('s'), make_var('t')};
    for (int i = 0; i < codim; ++i) {
      ExprPtr f = make_num(0.0);
      for (int ds = 0; ds <= 3; ++ds)
        for (int dt = 0; dt <= 3 - ds; ++dt) {
          if (ds + dt < 2) continue;
          ExprPtr term = make_num(rng.coeff());
          if (ds > 0)
            term = make_bin(BinOp::Mul, term, make_pow(make_var('s'), ds));
          if (dt > 0)
            term = make_bin(BinOp::Mul, term, make_pow(make_var('t'), dt));
          f = make_bin(BinOp::Add, f, term);
        }
      comps.push_back(f);
    }
    const SurfaceSpec spec = make_surface(dim, comps, "graph");
    const Invariants base = invariants_of(local_quadratic_map_at(spec, 0, 0));

    const Eigen::MatrixXd o = random_rotation(rng, codim);
    std::vector<ExprPtr> mixed{make_var('s'), make_var('t')};
    for (int i = 0; i < codim; ++i) {
      ExprPtr f = make_num(0.0);
      for (int j = 0; j < codim; ++j)
        f = make_bin(BinOp::Add, f,
                     make_bin(BinOp::Mul, make_num(o(i, j)), comps[2 + j]));
      mixed.push_back(f);
    }
    const SurfaceSpec rotated = make_surface(dim, mixed, "graph-rot");
    const Invariants ri = invariants_of(local_quadratic_map_at(rotated, 0, 0));

    worst_normal = std::max(worst_normal, rel_err(ri.K, base.K));
    worst_normal = std::max(worst_normal, rel_err(ri.Delta, base.Delta));
    if (base.N)
      worst_normal =
          std::max(worst_normal, rel_err(std::abs(*ri.N), std::abs(*base.N)));
    if (base.Acal)
      worst_normal = std::max(worst_normal, rel_err(*ri.Acal, *base.Acal));
    if (base.tau)
      worst_normal = std::max(
          worst_normal, rel_err(std::abs(*ri.tau), std::abs(*base.tau)));
    worst_normal = std::max(worst_normal, rel_err(ri.H.norm(), base.H.norm()));
    for (int i = 0; i < base.focal.size(); ++i)
      worst_normal =
          std::max(worst_normal, rel_err(ri.focal[i], base.focal[i]));
    if (std::abs(base.Delta) > 1e-4) {
      const CausticCenter r_base =
          caustic_center(local_quadratic_map_at(spec, 0, 0));
      const CausticCenter r_rot =
          caustic_center(local_quadratic_map_at(rotated, 0, 0));
      if (r_base.affine() && r_rot.affine())
        worst_normal = std::max(
            worst_normal, rel_err(r_base.v.norm(), r_rot.v.norm()));
    }
  }
  b.add("jet.normal_rotation_invariance", n_norm, worst_normal, 1e-8);
}

// ---------------------------------------------------------------- invariants

void battery_invariants(Battery& b) {
  Rng rng(b.opts.seed ^ 0x13a5u);
  const int n = b.scaled(2000);
  double worst_char = 0.0, worst_dir = 0.0, worst_par = 0.0, worst_h = 0.0;
  int bad_signs = 0;
  int dir_samples = 0;
  for (int k = 0; k < n; ++k) {
    const int codim = 1 + rng.index(3);
    const LocalQuadraticMap lqm = random_lqm(rng, codim);
    const GaussForm g = gauss_form(lqm);
    const Invariants inv = invariants_of(lqm);

    for (int i = 0; i < codim; ++i) {
      const double lam = inv.focal[i];
      double value, scale;
      if (codim == 1) {
        value = lam - inv.K;
        scale = std::abs(lam) + std::abs(inv.K);
      } else if (codim == 2) {
        value = lam * lam - inv.K * lam + inv.Delta;
        scale = lam * lam + std::abs(inv.K * lam) + std::abs(inv.Delta);
      } else {
        value =
            -lam * lam * lam + inv.K * lam * lam - *inv.Acal * lam + inv.Delta;
        scale = std::abs(lam * lam * lam) + std::abs(inv.K * lam * lam) +
                std::abs(*inv.Acal * lam) + std::abs(inv.Delta);
      }
      worst_char = std::max(worst_char, std::abs(value) / std::max(1.0, scale));
    }

    if (dir_samples < b.scaled(200)) {
      ++dir_samples;
      const Eigen::VectorXd dir = random_unit(rng, codim);
      const Eigen::Matrix2d m = dGamma_perp(lqm, dir);
      worst_dir =
          std::max(worst_dir, rel_err(m.determinant(), 2.0 * g.quad(dir)));
    }

    if (codim == 2 && std::abs(inv.Delta) > 1e-6 && !(inv.focal[0] < 0.0))
      ++bad_signs;
    if (codim == 3 && std::abs(inv.Delta) > 1e-6 &&
        !(inv.focal[0] < 0.0 && inv.focal[1] < 0.0 && inv.focal[2] > 0.0))
      ++bad_signs;

    double sum_norms = 0.0;
    for (int i = 0; i < codim; ++i) sum_norms += psi_norm2(lqm.component(i));
    worst_par = std::max(worst_par, rel_err(inv.K, sum_norms));
    if (codim == 2) {
      const QuadForm2 br = poisson_bracket(lqm.component(0), lqm.component(1));
      worst_par = std::max(worst_par, rel_err(inv.Delta, psi_norm2(br)));
    }
    if (codim == 3) {
      double acal = 0.0;
      for (int i = 0; i < 3; ++i)
        acal += psi_norm2(
            poisson_bracket(lqm.component(i), lqm.component((i + 1) % 3)));
      worst_par = std::max(worst_par, rel_err(*inv.Acal, acal));
      worst_par = std::max(worst_par, rel_err(inv.Delta, *inv.tau * *inv.tau));
    }

    for (int i = 0; i < codim; ++i)
      worst_h = std::max(
          worst_h, rel_err(inv.H[i], psi_inner(lqm.component(i), axis_form())));
  }
  b.add("invariants.charpoly_roots", n, worst_char, 1e-8);
  b.add("invariants.directional_curvature", dir_samples, worst_dir, 1e-10);
  b.add("invariants.focal_sign_structure", n, static_cast<double>(bad_signs),
        0.0);
  b.add("invariants.parallelogram_formulas", n, worst_par, 1e-9);
  b.add("invariants.h_projection", n, worst_h, 1e-12);
}

// ---------------------------------------------------------------- caustics

void battery_caustic(Battery& b) {
  Rng rng(b.opts.seed ^ 0xca57u);

  double worst_dual = 0.0;
  const int n_dual = b.scaled(500);
  for (int codim = 2; codim <= 3; ++codim) {
    for (int k = 0; k < n_dual; ++k) {
      const LocalQuadraticMap lqm = random_lqm_nondegenerate(rng, codim, 1e-6);
      const Quadric caustic = caustic_quadric(lqm);
      const DualSamples dual = dual_of_indicatrix(lqm, 16);
      if (dual.degenerate_ellipse) continue;
      for (const auto& pole : dual.poles) {
        if (pole.at_infinity) {
          const double val = pole.v.dot(caustic.M * pole.v);
          const double scale = std::max(
              1.0,
              pole.v.cwiseAbs().dot(caustic.M.cwiseAbs() * pole.v.cwiseAbs()));
          worst_dual = std::max(worst_dual, std::abs(val) / scale);
        } else {
          worst_dual = std::max(worst_dual, std::abs(caustic.eval(pole.v)) /
                                                caustic.eval_scale(pole.v));
        }
      }
    }
  }
  b.add("caustic.duality_poles_on_caustic", 2 * n_dual, worst_dual, 1e-8);

  double worst_foci = 0.0;
  int bad_disc = 0;
  const int n_foci = b.scaled(500);
  for (int k = 0; k < n_foci; ++k) {
    const int codim = 1 + rng.index(3);
    const LocalQuadraticMap lqm = random_lqm(rng, codim);
    const Eigen::VectorXd dir = random_unit(rng, codim);
    const Quadric caustic = caustic_quadric(lqm);
    const double lead = dir.dot(caustic.M * dir);
    const double lin = caustic.b.dot(dir);
    const double disc = lin * lin - lead;
    if (disc < -1e-10 * std::max(1.0, lin * lin + std::abs(lead))) ++bad_disc;
    const NormalLineFoci foci = normal_line_foci(lqm, dir);
    for (const ProjPoint* f : {&foci.focus1, &foci.focus2}) {
      if (f->at_infinity) continue;
      worst_foci = std::max(worst_foci, std::abs(caustic.eval(f->v)) /
                                            caustic.eval_scale(f->v));
    }
  }
  b.add("caustic.normal_line_two_real_foci", n_foci, worst_foci + bad_disc,
        1e-8);

  double worst_conv = 0.0;
  const int n_conv = b.scaled(500);
  for (int k = 0; k < n_conv; ++k) {
    const int codim = 2 + rng.index(2);
    const LocalQuadraticMap lqm = random_lqm_nondegenerate(rng, codim);
    const Quadric caustic = caustic_quadric(lqm);
    worst_conv = std::max(worst_conv, std::abs(caustic.c - 1.0));
    const Eigen::VectorXd dir = random_unit(rng, codim);
    const double lead = dir.dot(caustic.M * dir);
    const double lin = caustic.b.dot(dir);
    if (std::abs(lead) > 1e-8) {
      const double disc = lin * lin - lead * caustic.c;
      if (disc < -1e-10 * std::max(1.0, lin * lin + std::abs(lead)))
        worst_conv = std::max(worst_conv, 1.0);
    }
  }
  b.add("caustic.origin_convex_component", n_conv, worst_conv, 1e-10);

  double worst_level = 0.0;
  const int n_level = b.scaled(300);
  for (int k = 0; k < n_level; ++k) {
    const int codim = 2 + rng.index(2);
    const LocalQuadraticMap lqm = random_lqm_nondegenerate(rng, codim);
    const Quadric caustic = caustic_quadric(lqm);
    for (int j = 0; j < 4; ++j) {
      Eigen::VectorXd q(codim);
      for (int i = 0; i < codim; ++i) q[i] = rng.uniform(-3.0, 3.0);
      const double lv = caustic_level_residual(lqm, q);
      const double factor = codim == 3 ? 2.0 : 1.0;
      worst_level = std::max(worst_level, rel_err(factor * lv, caustic.eval(q),
                                                  caustic.eval_scale(q)));
    }
  }
  b.add("caustic.level_set_equivalence", 4 * n_level, worst_level, 1e-9);

  double worst_center = 0.0;
  const int n_center = b.scaled(2000);
  for (int k = 0; k < n_center; ++k) {
    const int codim = 2 + rng.index(2);
    const LocalQuadraticMap lqm = random_lqm_nondegenerate(rng, codim);
    const Invariants inv = invariants_of(lqm);
    const CausticCenter cc = caustic_center(lqm);
    if (!cc.affine()) continue;
    const double lhs = cc.v.dot(inv.H);
    const double scale = cc.v.cwiseAbs().dot(inv.H.cwiseAbs());
    const double rhs =
        codim == 2 ? 1.0 - *inv.N * *inv.N / (4.0 * inv.Delta) : 1.0;
    worst_center = std::max(worst_center, rel_err(lhs, rhs, scale));
  }
  b.add("caustic.center_identities", n_center, worst_center, 1e-8);

  double worst_loci = 0.0;
  const int n_loci = b.scaled(500);
  for (int k = 0; k < n_loci; ++k) {
    const int codim = 2 + rng.index(2);
    const LocalQuadraticMap lqm = random_lqm_nondegenerate(rng, codim);
    const Invariants inv = invariants_of(lqm);
    const CausticCenter cc = caustic_center(lqm);
    if (!cc.affine()) continue;
    const auto [h_locus, r_locus] = hr_loci(lqm);
    worst_loci = std::max(worst_loci, std::abs(h_locus.eval(inv.H)) /
                                          h_locus.eval_scale(inv.H));
    worst_loci = std::max(worst_loci, std::abs(r_locus.eval(cc.v)) /
                                          r_locus.eval_scale(cc.v));
    if (codim == 3) {
      const Eigen::VectorXd grad = h_locus.M * inv.H;
      const double off = grad.dot(inv.H);
      const Eigen::VectorXd pole = grad / off;
      worst_loci = std::max(worst_loci,
                            (pole - cc.v).norm() / std::max(1.0, cc.v.norm()));
    }
  }
  b.add("caustic.hr_loci_membership_duality", n_loci, worst_loci, 1e-8);

  int mismatches = 0;
  const int n_sect = b.scaled(500);
  for (int k = 0; k < n_sect; ++k) {
    const LocalQuadraticMap lqm = random_lqm_nondegenerate(rng, 3);
    const PointClass5 pc = classify_r5(lqm);
    if (pc.boundary_warning) continue;
    const CausticCenter cc = caustic_center(lqm);
    if (!cc.affine()) continue;
    const Quadric caustic = caustic_quadric(lqm);
    Eigen::VectorXd d = cc.v.normalized();
    Eigen::MatrixXd basis(3, 2);
    int found = 0;
    for (int i = 0; i < 3 && found < 2; ++i) {
      Eigen::VectorXd cand = Eigen::VectorXd::Zero(3);
      cand[i] = 1.0;
      cand -= cand.dot(d) * d;
      for (int j = 0; j < found; ++j)
        cand -= cand.dot(basis.col(j)) * basis.col(j);
      if (cand.norm() > 1e-8) basis.col(found++) = cand.normalized();
    }
    Eigen::Matrix2d restricted;
    restricted << basis.col(0).dot(caustic.M * basis.col(0)),
        basis.col(0).dot(caustic.M * basis.col(1)),
        basis.col(0).dot(caustic.M * basis.col(1)),
        basis.col(1).dot(caustic.M * basis.col(1));
    const double det = restricted.determinant();
    const double dscale = restricted.cwiseAbs().maxCoeff();
    if (std::abs(det) <= 1e-8 * dscale * dscale) continue;
    const bool section_ellipse = det > 0.0;
    if (section_ellipse && pc.label != Label5::PseudoElliptic) ++mismatches;
    if (!section_ellipse && pc.label != Label5::PseudoHyperbolic) ++mismatches;
  }
  b.add("caustic.pseudo_class_section_consistency", n_sect,
        static_cast<double>(mismatches), 0.0);

  double worst_flat = 0.0;
  const int n_flat = b.scaled(300);
  for (int k = 0; k < n_flat; ++k) {
    const LocalQuadraticMap lqm = random_lqm_nondegenerate(rng, 3);
    const CausticCenter cc = caustic_center(lqm);
    if (!cc.affine()) continue;
    const double rn = cc.v.norm();
    for (double s = -1.0; s <= 1.0; s += 0.5)
      for (double t = -1.0; t <= 1.0; t += 0.5) {
        const double lhs = lqm.phi(s, t).dot(cc.v) / rn;
        const double rhs = (s * s + t * t) / (2.0 * rn);
        const double scale = lqm.phi(s, t).cwiseAbs().dot(cc.v.cwiseAbs()) / rn;
        worst_flat = std::max(worst_flat, rel_err(lhs, rhs, scale));
      }
  }
  b.add("caustic.flattening_direction", n_flat, worst_flat, 1e-9);

  // asymptotic directions: root count matches the sign of Delta and each
  // direction's bracket value vanishes
  double worst_asym = 0.0;
  const int n_asym = b.scaled(500);
  for (int k = 0; k < n_asym; ++k) {
    const LocalQuadraticMap lqm = random_lqm_nondegenerate(rng, 2);
    const Invariants inv = invariants_of(lqm);
    const AsymptoticDirections ad = asymptotic_directions_r4(lqm);
    const QuadForm2 br = poisson_bracket(lqm.component(0), lqm.component(1));
    const std::size_t expect = inv.Delta < 0.0 ? 2 : 0;
    if (ad.roots.size() != expect) {
      worst_asym = std::max(worst_asym, 1.0);
      continue;
    }
    for (const auto& root : ad.roots) {
      const double v = br.eval(root.u[0], root.u[1]);
      worst_asym =
          std::max(worst_asym, std::abs(v) / std::max(1.0, br.max_abs_coeff()));
      // the ideal point lies on the caustic's quadratic part
      const Quadric caustic = caustic_quadric(lqm);
      const double hv = root.ideal_point.v.dot(caustic.M * root.ideal_point.v);
      worst_asym = std::max(
          worst_asym, std::abs(hv) / std::max(1.0, caustic.M.cwiseAbs().maxCoeff()));
    }
  }
  b.add("caustic.asymptotic_directions", n_asym, worst_asym, 1e-8);
}

// ------------------------------------------------- identity battery (10^4)

void battery_identities(Battery& b) {
  Rng rng(b.opts.seed ^ 0x1de4u);
  const int n = b.scaled(10000);

  double worst_gr = 0.0, worst_rh = 0.0, worst_tau2 = 0.0, worst_k = 0.0,
         worst_delta2 = 0.0, worst_ntr = 0.0, worst_acal = 0.0,
         worst_biorth = 0.0, worst_qstar = 0.0, worst_phiphi = 0.0,
         worst_sumbr = 0.0, worst_invol = 0.0, worst_centers = 0.0,
         worst_image = 0.0, worst_ellipse = 0.0, worst_selfn = 0.0,
         worst_sigma = 0.0;

  for (int k = 0; k < n; ++k) {
    const int codim = 2 + (k % 2);
    // the involution and centre-exchange identities run the solve twice, so
    // their forward error scales like eps * cond^2; the 1e-3 determinant
    // floor keeps that comfortably under the 1e-8 assertion
    const LocalQuadraticMap lqm =
        random_lqm_nondegenerate(rng, codim, 1e-3);
    const GaussForm g = gauss_form(lqm);
    const Invariants inv = invariants_of(lqm);
    const PairedBundle bundle = paired_map(lqm);

    const Eigen::VectorXd r =
        g.matrix.partialPivLu().solve(Eigen::VectorXd(inv.H));
    const Eigen::VectorXd gr = g.matrix * r;
    worst_gr = std::max(
        worst_gr,
        (gr - inv.H).norm() /
            std::max(1.0, g.matrix.cwiseAbs().maxCoeff() * r.norm() +
                              inv.H.norm()));

    const double rh = r.dot(inv.H);
    const double rh_scale = r.cwiseAbs().dot(inv.H.cwiseAbs());
    const double rh_expected =
        codim == 2 ? 1.0 - *inv.N * *inv.N / (4.0 * inv.Delta) : 1.0;
    worst_rh = std::max(worst_rh, rel_err(rh, rh_expected, rh_scale));

    double sum_norms = 0.0;
    for (int i = 0; i < codim; ++i) sum_norms += psi_norm2(lqm.component(i));
    worst_k = std::max(worst_k, rel_err(inv.K, sum_norms));

    if (codim == 2) {
      const QuadForm2 br = poisson_bracket(lqm.component(0), lqm.component(1));
      worst_delta2 = std::max(worst_delta2, rel_err(inv.Delta, psi_norm2(br)));
      worst_ntr = std::max(worst_ntr, rel_err(*inv.N, trace_form(br)));
      worst_selfn = std::max(
          worst_selfn,
          rel_err(*bundle.inv_star.N * *bundle.inv_star.N /
                      bundle.inv_star.Delta,
                  *inv.N * *inv.N / inv.Delta));
    } else {
      worst_tau2 =
          std::max(worst_tau2, rel_err(*inv.tau * *inv.tau, inv.Delta));
      double acal = 0.0;
      for (int i = 0; i < 3; ++i)
        acal += psi_norm2(
            poisson_bracket(lqm.component(i), lqm.component((i + 1) % 3)));
      worst_acal = std::max(worst_acal, rel_err(*inv.Acal, acal));
    }

    const IdentityReport comp = component_identities_check(bundle, 8);
    for (const auto& entry : comp.entries) {
      if (entry.name == "psi_biorthogonality")
        worst_biorth = std::max(worst_biorth, entry.residual);
      else if (entry.name == "paired_components_from_brackets")
        worst_qstar = std::max(worst_qstar, entry.residual);
      else if (entry.name == "phi_phistar_pointwise")
        worst_phiphi = std::max(worst_phiphi, entry.residual);
      else if (entry.name == "sum_bracket_Qi_Qistar_zero")
        worst_sumbr = std::max(worst_sumbr, entry.residual);
    }

    const PairedBundle twice = paired_map(bundle.paired);
    const double cscale = std::max(1.0, lqm.max_abs_coeff());
    worst_invol = std::max(
        worst_invol,
        std::max({(twice.paired.A - lqm.A).cwiseAbs().maxCoeff(),
                  (twice.paired.B - lqm.B).cwiseAbs().maxCoeff(),
                  (twice.paired.C - lqm.C).cwiseAbs().maxCoeff()}) /
            cscale);

    const CausticCenter star_center = caustic_center(bundle.paired);
    if (star_center.affine())
      worst_centers = std::max(worst_centers, (star_center.v - inv.H).norm() /
                                                  std::max(1.0, inv.H.norm()));
    worst_centers =
        std::max(worst_centers,
                 (bundle.inv_star.H - r).norm() / std::max(1.0, r.norm()));

    for (int j = 0; j < 4; ++j) {
      const double theta = kPi * (j + 0.5) / 4.0;
      const Eigen::VectorXd e_star =
          2.0 * bundle.paired.phi(std::cos(theta), std::sin(theta));
      const Eigen::VectorXd e = 2.0 * lqm.phi(std::cos(theta), std::sin(theta));
      worst_ellipse =
          std::max(worst_ellipse,
                   (g.matrix * e_star - e).norm() /
                       std::max(1.0, e.norm() + g.matrix.cwiseAbs().maxCoeff() *
                                                    e_star.norm()));
      if (codim == 3) {
        const double v1 = e_star.dot(g.matrix * e_star);
        const double s1 =
            e_star.cwiseAbs().dot(g.matrix.cwiseAbs() * e_star.cwiseAbs());
        worst_sigma = std::max(worst_sigma, std::abs(v1) / std::max(1.0, s1));
        const Eigen::VectorXd ge = g.matrix.partialPivLu().solve(e);
        const double v2 = e.dot(ge);
        const double s2 = e.cwiseAbs().dot(ge.cwiseAbs());
        worst_sigma = std::max(worst_sigma, std::abs(v2) / std::max(1.0, s2));
      }
    }
    if (k % 8 == 0)
      worst_image =
          std::max(worst_image, paired_caustic_image_check(bundle, 12));
  }

  b.add("identity.H_eq_G_R", n, worst_gr, 1e-8);
  b.add("identity.RH_inner", n, worst_rh, 1e-8);
  b.add("identity.tau_sq_eq_Delta", n / 2, worst_tau2, 1e-8);
  b.add("identity.K_sum_sq_norms", n, worst_k, 1e-8);
  b.add("identity.Delta_bracket_norm", n / 2, worst_delta2, 1e-8);
  b.add("identity.N_trace_bracket", n / 2, worst_ntr, 1e-8);
  b.add("identity.Acal_sum_bracket_norms", n / 2, worst_acal, 1e-8);
  b.add("identity.Qi_Qjstar_biorthogonal", n, worst_biorth, 1e-8);
  b.add("identity.Qstar_brackets_over_tau", n / 2, worst_qstar, 1e-8);
  b.add("identity.phi_phistar_product", n, worst_phiphi, 1e-8);
  b.add("identity.sum_bracket_Qi_Qistar", n, worst_sumbr, 1e-8);
  b.add("identity.paired_involution", n, worst_invol, 1e-8);
  b.add("identity.centre_exchange", n, worst_centers, 1e-8);
  b.add("identity.caustic_image", n / 8, worst_image, 1e-8);
  b.add("identity.ellipse_image", n, worst_ellipse, 1e-8);
  b.add("identity.self_paired_N2_over_Delta", n / 2, worst_selfn, 1e-8);
  b.add("identity.sigma_cone_duality", n / 2, worst_sigma, 1e-8);
}

// ---------------------------------------------------------------- inequalities

void battery_inequalities(Battery& b) {
  Rng rng(b.opts.seed ^ 0x1ee1u);
  const int n = b.scaled(10000);
  for (int codim = 2; codim <= 3; ++codim) {
    int violations = 0;
    double min_slack = 0.0;
    std::string worst_name;
    for (int k = 0; k < n; ++k) {
      const LocalQuadraticMap lqm = random_lqm(rng, codim);
      const InequalityReport rep = inequality_report(lqm, 1e-10);
      for (const auto& e : rep.entries) {
        if (!e.holds) {
          ++violations;
          if (e.slack < min_slack) {
            min_slack = e.slack;
            worst_name = e.name;
          }
        }
      }
    }
    b.add(codim == 2 ? "inequality.battery_r4" : "inequality.battery_r5", n,
          static_cast<double>(violations), 0.0, worst_name);
  }
}

// ---------------------------------------------------------------- paired geometry

void battery_paired_geometry(Battery& b) {
  Rng rng(b.opts.seed ^ 0xb17au);

  double worst_on_caustic = 0.0, worst_on_estar = 0.0, worst_orth_h = 0.0;
  const int n_bit = b.scaled(500);
  for (int k = 0; k < n_bit; ++k) {
    const LocalQuadraticMap lqm = random_lqm_nondegenerate(rng, 2);
    const PairedBundle bundle = paired_map(lqm);
    // <R,H> near 0 or 1 puts the tangency configuration on its degenerate
    // boundary (points escape to infinity / coalesce); the roots lose
    // accuracy like eps / disc^(3/2) there
    const Eigen::VectorXd rr =
        gauss_form(lqm).matrix.partialPivLu().solve(bundle.inv.H);
    const double rho = rr.dot(bundle.inv.H);
    if (std::abs(rho) < 1e-3 || std::abs(rho - 1.0) < 1e-3) continue;
    const Bitangency bit = bitangency_points(bundle);
    if (bit.kind != Bitangency::Kind::TwoPoints &&
        bit.kind != Bitangency::Kind::DoublePoint)
      continue;
    const Quadric caustic = caustic_quadric(lqm);
    const EllipseGeometry star_geom =
        ellipse_geometry(indicatrix(bundle.paired));
    const Eigen::Vector2d h(bundle.inv.H[0], bundle.inv.H[1]);
    for (const auto& p2 : {bit.points[0], bit.points[1]}) {
      Eigen::VectorXd p(2);
      p << p2[0], p2[1];
      worst_on_caustic = std::max(
          worst_on_caustic, std::abs(caustic.eval(p)) / caustic.eval_scale(p));
      worst_on_estar =
          std::max(worst_on_estar,
                   ellipse_distance(star_geom, p) / std::max(1.0, p.norm()));
      const Eigen::Vector2d grad =
          2.0 * (caustic.M * p2 + Eigen::Vector2d(caustic.b[0], caustic.b[1]));
      const Eigen::Vector2d tangent(-grad[1], grad[0]);
      if (tangent.norm() > 1e-12 && h.norm() > 1e-12)
        worst_orth_h =
            std::max(worst_orth_h,
                     std::abs(tangent.normalized().dot(h.normalized())));
    }
  }
  b.add("paired.bitangency_on_caustic", n_bit, worst_on_caustic, 1e-8);
  b.add("paired.bitangency_on_paired_ellipse", n_bit, worst_on_estar, 1e-6);
  b.add("paired.bitangency_orthogonal_to_H", n_bit, worst_orth_h, 1e-6);

  // six-way asymptotic/binormal equivalence at hyperbolic points
  double worst_asym_zero = 0.0, worst_asym_locus = 0.0;
  const int n_asym = b.scaled(300);
  for (int k = 0; k < n_asym; ++k) {
    const LocalQuadraticMap lqm = random_lqm_nondegenerate(rng, 2);
    const IdentityReport rep =
        asymptotic_equivalences_check(paired_map(lqm));
    for (const auto& e : rep.entries) {
      if (e.name == "all_vanish_at_asymptotic_directions")
        worst_asym_zero = std::max(worst_asym_zero, e.residual);
      else
        worst_asym_locus = std::max(worst_asym_locus, e.residual);
    }
  }
  b.add("paired.asymptotic_equivalences_vanish", n_asym, worst_asym_zero, 1e-8);
  b.add("paired.asymptotic_equivalences_locus", n_asym, worst_asym_locus, 1.0);

  double worst_sig = 0.0;
  int sign_bad = 0;
  const int n_sig = b.scaled(1000);
  for (int k = 0; k < n_sig; ++k) {
    const LocalQuadraticMap lqm = random_lqm_nondegenerate(rng, 3);
    const PairedBundle bundle = paired_map(lqm);
    const IdentityReport rep = sigma_star_geometry_check(bundle);
    for (const auto& e : rep.entries) {
      if (e.name == "min_K_Acal_negative") {
        if (e.residual != 0.0) ++sign_bad;
      } else {
        worst_sig = std::max(worst_sig, e.residual);
      }
    }
  }
  b.add("paired.sigma_star_geometry", n_sig, worst_sig + sign_bad, 1e-8);
}

// ---------------------------------------------------------------- classifier

void battery_classifier(Battery& b) {
  Rng rng(b.opts.seed ^ 0xc1a5u);

  int mismatches = 0, checked = 0;
  const int n4 = b.scaled(1000);
  for (int k = 0; k < n4; ++k) {
    const LocalQuadraticMap lqm = random_lqm(rng, 2);
    Label4 label;
    QuadricLabel caustic;
    if (!stable_classification_r4(lqm, &label, &caustic)) continue;
    ++checked;
    if (!caustic_label_matches_r4(label, caustic)) ++mismatches;
  }
  for (const auto& [lqm, expected] : constructed_cases_r4(rng)) {
    ++checked;
    const PointClass4 pc = classify_r4(lqm);
    if (pc.label != expected ||
        !caustic_label_matches_r4(pc.label,
                                  classify_quadric(caustic_quadric(lqm)).label))
      ++mismatches;
  }
  b.add("classify.correspondence_r4", checked, static_cast<double>(mismatches),
        0.0);

  mismatches = 0;
  checked = 0;
  const int n5 = b.scaled(1000);
  for (int k = 0; k < n5; ++k) {
    const LocalQuadraticMap lqm = random_lqm(rng, 3);
    Label5 label;
    QuadricLabel caustic;
    if (!stable_classification_r5(lqm, &label, &caustic)) continue;
    ++checked;
    if (!caustic_label_matches_r5(label, caustic)) ++mismatches;
  }
  for (const auto& [lqm, expected] : constructed_cases_r5(rng)) {
    ++checked;
    const PointClass5 pc = classify_r5(lqm);
    if (pc.label != expected ||
        !caustic_label_matches_r5(pc.label,
                                  classify_quadric(caustic_quadric(lqm)).label))
      ++mismatches;
  }
  {
    LocalQuadraticMap psi_p;
    if (make_pseudo_parabolic(rng, psi_p)) {
      ++checked;
      if (classify_quadric(caustic_quadric(psi_p)).label != QuadricLabel::Cone)
        ++mismatches;
    } else {
      ++mismatches;  // exemplar construction itself failed
    }
  }
  b.add("classify.correspondence_r5", checked, static_cast<double>(mismatches),
        0.0);

  // K < 0 at elliptic and parabolic points
  int bad_k = 0;
  const int nk = b.scaled(1000);
  for (int k = 0; k < nk; ++k) {
    const LocalQuadraticMap lqm = random_lqm(rng, 2);
    const PointClass4 pc = classify_r4(lqm);
    if (pc.boundary_warning) continue;
    if ((pc.label == Label4::Elliptic || pc.label == Label4::Parabolic) &&
        !(invariants_of(lqm).K < 0.0))
      ++bad_k;
  }
  for (const auto& [lqm, expected] : constructed_cases_r4(rng)) {
    if (expected != Label4::Elliptic && expected != Label4::Parabolic) continue;
    if (!(invariants_of(lqm).K < 0.0)) ++bad_k;
  }
  b.add("classify.elliptic_parabolic_K_negative", nk,
        static_cast<double>(bad_k), 0.0);

  // circle-case equivalences on maps constructed with equal focal curvatures
  double worst_circle = 0.0;
  const int nc = b.scaled(200);
  for (int k = 0; k < nc; ++k) {
    const double kappa = -rng.uniform(0.3, 2.0);
    QuadForm2 q1 = random_form(rng);
    while (psi_norm2(q1) > -1e-2) q1 = random_form(rng);
    q1 = std::sqrt(kappa / psi_norm2(q1)) * q1;
    // psi-orthogonal complement of q1 restricted to negative directions
    QuadForm2 basis[2];
    int found = 0;
    const QuadForm2 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int i = 0; i < 3 && found < 2; ++i) {
      QuadForm2 cand = psi_project_out(axes[i], q1);
      if (found == 1) {
        // project against basis[0] within the complement (may be null;
        // fall back to a generic mix if so)
        const double n0 = psi_norm2(basis[0]);
        if (std::abs(n0) > 1e-9)
          cand = cand - (psi_inner(cand, basis[0]) / n0) * basis[0];
      }
      if (cand.max_abs_coeff() > 1e-6) basis[found++] = cand;
    }
    if (found < 2) continue;
    // diagonalize the restricted psi form on span(basis)
    Eigen::Matrix2d gram;
    gram << psi_norm2(basis[0]), psi_inner(basis[0], basis[1]),
        psi_inner(basis[0], basis[1]), psi_norm2(basis[1]);
    const SymEigen eg = sym_eigen(gram);
    if (eg.values[0] >= -1e-9) continue;  // need a negative direction
    const QuadForm2 dneg = eg.vectors(0, 0) * basis[0] +
                           eg.vectors(1, 0) * basis[1];
    QuadForm2 q2 = std::sqrt(kappa / psi_norm2(dneg)) * dneg;

    Eigen::VectorXd a(2), bb(2), c(2);
    a << q1.a, q2.a;
    bb << q1.b, q2.b;
    c << q1.c, q2.c;
    const LocalQuadraticMap lqm = make_lqm(a, bb, c);
    const Invariants inv = invariants_of(lqm);
    if (inv.H.norm() < 0.05) continue;

    // (a) K^2 = 4 Delta, (b) circle caustic, (c) H, R, p collinear with p
    // between, (d) |H|^2 = (N^2/K^2 - 1) sqrt(Delta)
    worst_circle =
        std::max(worst_circle, rel_err(inv.K * inv.K, 4.0 * inv.Delta));
    worst_circle = std::max(worst_circle,
                            rel_err(inv.focal[0], inv.focal[1]));
    const QuadricClass qc = classify_quadric(caustic_quadric(lqm));
    if (qc.label != QuadricLabel::Circle) worst_circle = std::max(worst_circle, 1.0);
    const Eigen::VectorXd r =
        gauss_form(lqm).matrix.partialPivLu().solve(inv.H);
    const double cross = inv.H[0] * r[1] - inv.H[1] * r[0];
    worst_circle = std::max(
        worst_circle, std::abs(cross) / std::max(1.0, inv.H.norm() * r.norm()));
    if (!(r.dot(inv.H) < 0.0)) worst_circle = std::max(worst_circle, 1.0);
    const double n = *inv.N;
    worst_circle = std::max(
        worst_circle,
        rel_err(inv.H.squaredNorm(),
                (n * n / (inv.K * inv.K) - 1.0) * std::sqrt(inv.Delta)));
  }
  b.add("classify.circle_case_equivalences", nc, worst_circle, 1e-8);

  // umbilic characterization via |H|^2 - K = |u|^2 + |v|^2
  double worst_umb = 0.0;
  const int nu = b.scaled(1000);
  for (int k = 0; k < nu; ++k) {
    const LocalQuadraticMap lqm = random_lqm(rng, 2);
    const Invariants inv = invariants_of(lqm);
    const Eigen::VectorXd u = 0.5 * (lqm.A - lqm.C);
    worst_umb = std::max(
        worst_umb, rel_err(inv.H.squaredNorm() - inv.K,
                           u.squaredNorm() + lqm.B.squaredNorm()));
  }
  {
    // axis maps: Q_i = h_i W have |H|^2 = K > 0
    Eigen::VectorXd a(2), bb(2), c(2);
    a << 0.7, -1.1;
    bb << 0.0, 0.0;
    c << 0.7, -1.1;
    const Invariants inv = invariants_of(make_lqm(a, bb, c));
    worst_umb = std::max(worst_umb, rel_err(inv.H.squaredNorm(), inv.K));
    if (!(inv.K > 0.0)) worst_umb = std::max(worst_umb, 1.0);
  }
  b.add("classify.umbilic_characterization", nu, worst_umb, 1e-10);
}

// ---------------------------------------------------------------- frames

void battery_frame(Battery& b) {
  Rng rng(b.opts.seed ^ 0xf7a3u);
  const int n = b.scaled(1000);
  double worst = 0.0;
  int label_mismatches = 0;
  for (int k = 0; k < n; ++k) {
    const int codim = 2 + rng.index(2);
    const LocalQuadraticMap lqm = random_lqm(rng, codim);
    const double angle = rng.uniform(0.0, 2.0 * kPi);
    const Eigen::MatrixXd o = random_rotation(rng, codim);
    const LocalQuadraticMap moved = rotate_normal(rotate_tangent(lqm, angle), o);

    const Invariants a = invariants_of(lqm);
    const Invariants c = invariants_of(moved);
    worst = std::max(worst, rel_err(a.K, c.K));
    worst = std::max(worst, rel_err(a.Delta, c.Delta));
    if (a.N) worst = std::max(worst, rel_err(std::abs(*a.N), std::abs(*c.N)));
    if (a.Acal) worst = std::max(worst, rel_err(*a.Acal, *c.Acal));
    if (a.tau)
      worst = std::max(worst, rel_err(std::abs(*a.tau), std::abs(*c.tau)));
    worst = std::max(worst, rel_err(a.H.norm(), c.H.norm()));
    for (int i = 0; i < a.focal.size(); ++i)
      worst = std::max(worst, rel_err(a.focal[i], c.focal[i]));

    if (std::abs(a.Delta) > 1e-4) {
      const Eigen::VectorXd r1 =
          gauss_form(lqm).matrix.partialPivLu().solve(a.H);
      const Eigen::VectorXd r2 =
          gauss_form(moved).matrix.partialPivLu().solve(c.H);
      worst = std::max(worst, rel_err(r1.norm(), r2.norm()));
    }

    if (codim == 2) {
      const PointClass4 p1 = classify_r4(lqm);
      const PointClass4 p2 = classify_r4(moved);
      if (!p1.boundary_warning && !p2.boundary_warning &&
          p1.label != p2.label)
        ++label_mismatches;
    } else {
      const PointClass5 p1 = classify_r5(lqm);
      const PointClass5 p2 = classify_r5(moved);
      if (!p1.boundary_warning && !p2.boundary_warning &&
          p1.label != p2.label)
        ++label_mismatches;
    }
  }
  b.add("frame.lqm_rotation_invariance", n, worst + label_mismatches, 1e-8);
}

// ---------------------------------------------------------------- oracles

void battery_oracle(Battery& b) {
  Rng rng(b.opts.seed ^ 0x0a1eu);
  const int n_surf = std::max(3, static_cast<int>(20 * b.opts.count_scale));
  double worst_curv = 0.0;
  double worst_focal = 0.0;
  std::string focal_note;
  int done = 0;
  int attempt = 0;
  while (done < n_surf && attempt < 10 * n_surf) {
    ++attempt;
    const int dim = 3 + (done % 3);
    const SurfaceSpec spec = random_polynomial_surface(rng, dim, 3);
    const double s0 = rng.uniform(-0.2, 0.2), t0 = rng.uniform(-0.2, 0.2);
    const double theta = rng.uniform(0.0, kPi);
    try {
      const OracleReport curv =
          curvature_vector_oracle(spec, s0, t0, theta, 1e-4);
      worst_curv = std::max(worst_curv, curv.max_residual);
      const int grid = dim == 5 ? 41 : 101;
      const OracleReport focal =
          focal_set_oracle(spec, s0, t0, -2.0, 2.0, grid, 1e-3);
      const double ratio = focal.max_residual / focal.threshold;
      if (ratio > worst_focal) {
        worst_focal = ratio;
        focal_note = focal.details;
      }
      ++done;
    } catch (const std::exception&) {
      continue;  // degenerate draw; resample
    }
  }
  b.add("oracle.curvature_fd", done, worst_curv, 1e-5);
  b.add("oracle.focal_zero_crossings", done, worst_focal, 1.0, focal_note);

  // second-order convergence of the curvature oracle, measured on surfaces
  // with nonvanishing fourth derivatives along the section
  double sum_h = 0.0, sum_h2 = 0.0;
  const int n_rat = std::max(4, b.scaled(10));
  int informative = 0;
  for (int k = 0; k < n_rat; ++k) {
    const SurfaceSpec spec =
        random_polynomial_surface(rng, 3 + rng.index(3), 5);
    const double s0 = rng.uniform(-0.2, 0.2), t0 = rng.uniform(-0.2, 0.2);
    const double theta = rng.uniform(0.0, kPi);
    try {
      const double r1 =
          curvature_vector_oracle(spec, s0, t0, theta, 2e-2).max_residual;
      const double r2 =
          curvature_vector_oracle(spec, s0, t0, theta, 1e-2).max_residual;
      if (r1 > 1e-10) {
        sum_h += r1;
        sum_h2 += r2;
        ++informative;
      }
    } catch (const std::exception&) {
      continue;
    }
  }
  const double ratio = sum_h / std::max(sum_h2, 1e-300);
  b.add("oracle.step_halving_ratio", informative, std::abs(ratio - 4.0), 1.0,
        "aggregate ratio " + std::to_string(ratio));

  double worst_eig = 0.0;
  const int n_eig = b.scaled(300);
  for (int k = 0; k < n_eig; ++k) {
    const int codim = 1 + rng.index(3);
    const GaussForm g = gauss_form(random_lqm(rng, codim));
    worst_eig = std::max(worst_eig, eigen_oracle(g).max_residual);
  }
  b.add("oracle.eigen_charpoly", n_eig, worst_eig, 1e-9);
}

}  // namespace

bool caustic_label_matches_r4(Label4 point, QuadricLabel caustic) {
  switch (point) {
    case Label4::Elliptic:
      return caustic == QuadricLabel::Ellipse ||
             caustic == QuadricLabel::Circle;
    case Label4::Hyperbolic:
      return caustic == QuadricLabel::Hyperbola;
    case Label4::Parabolic:
      return caustic == QuadricLabel::Parabola;
    case Label4::Semiumbilic:
      return caustic == QuadricLabel::TwoIntersectingLines;
    case Label4::InflectionReal:
    case Label4::InflectionImaginary:
      return caustic == QuadricLabel::TwoParallelLines;
    case Label4::InflectionFlat:
      return caustic == QuadricLabel::LineAtInfinity;
    case Label4::Umbilic:
      return caustic == QuadricLabel::DoubleLine;
    case Label4::FlatUmbilic:
      return caustic == QuadricLabel::DoubleLineAtInfinity;
  }
  return false;
}

bool caustic_label_matches_r5(Label5 point, QuadricLabel caustic) {
  switch (point) {
    case Label5::PseudoElliptic:
    case Label5::PseudoHyperbolic:
    case Label5::PseudoParabolic:
      return caustic == QuadricLabel::Cone;
    case Label5::FlatElliptic:
      return caustic == QuadricLabel::EllipticCylinder;
    case Label5::FlatHyperbolic:
      return caustic == QuadricLabel::HyperbolicCylinder;
    case Label5::FlatParabolic:
      return caustic == QuadricLabel::ParabolicCylinder;
    case Label5::Semiumbilic:
      return caustic == QuadricLabel::TwoPlanes;
    case Label5::InflectionReal:
    case Label5::InflectionImaginary:
      return caustic == QuadricLabel::TwoParallelPlanes;
    case Label5::InflectionFlat:
      return caustic == QuadricLabel::PlaneAtInfinity;
    case Label5::Umbilic:
      return caustic == QuadricLabel::DoublePlane;
    case Label5::FlatUmbilic:
      return caustic == QuadricLabel::DoublePlaneAtInfinity;
  }
  return false;
}

bool stable_classification_r4(const LocalQuadraticMap& lqm, Label4* label,
                              QuadricLabel* caustic) {
  // the window covers both sensitivity scales: the caustic rank sees the
  // squares (det C = N^2/4) of the quantities the point classifier sees
  const PointClass4 lo = classify_r4(lqm, 1e-12);
  const PointClass4 hi = classify_r4(lqm, 1e-6);
  if (lo.label != hi.label || lo.boundary_warning || hi.boundary_warning)
    return false;
  const Quadric cq = caustic_quadric(lqm);
  const QuadricClass qlo = classify_quadric(cq, 1e-12);
  const QuadricClass qhi = classify_quadric(cq, 1e-6);
  // Circle vs Ellipse is a sub-label refinement, not a stratum change
  auto norm = [](QuadricLabel l) {
    return l == QuadricLabel::Circle ? QuadricLabel::Ellipse : l;
  };
  if (norm(qlo.label) != norm(qhi.label)) return false;
  *label = lo.label;
  *caustic = qlo.label;
  return true;
}

bool stable_classification_r5(const LocalQuadraticMap& lqm, Label5* label,
                              QuadricLabel* caustic) {
  const PointClass5 lo = classify_r5(lqm, 1e-12);
  const PointClass5 hi = classify_r5(lqm, 1e-6);
  if (lo.label != hi.label || lo.boundary_warning || hi.boundary_warning)
    return false;
  const Quadric cq = caustic_quadric(lqm);
  const QuadricClass qlo = classify_quadric(cq, 1e-12);
  const QuadricClass qhi = classify_quadric(cq, 1e-6);
  if (qlo.label != qhi.label) return false;
  *label = lo.label;
  *caustic = qlo.label;
  return true;
}

std::vector<std::pair<LocalQuadraticMap, Label4>> constructed_cases_r4(
    Rng& rng) {
  std::vector<std::pair<LocalQuadraticMap, Label4>> cases;
  auto rv2 = [&rng]() {
    Eigen::VectorXd v(2);
    v << rng.coeff(), rng.coeff();
    return v;
  };
  for (int rep = 0; rep < 4; ++rep) {
    Eigen::VectorXd u = rv2(), v = rv2();
    while (std::abs(u[0] * v[1] - u[1] * v[0]) < 0.3) {
      u = rv2();
      v = rv2();
    }
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    for (const auto& [radius, label] : std::vector<std::pair<double, Label4>>{
             {0.5, Label4::Elliptic},
             {1.7, Label4::Hyperbolic},
             {1.0, Label4::Parabolic}}) {
      const Eigen::VectorXd h =
          -(radius * std::cos(phi) * u + radius * std::sin(phi) * v);
      cases.push_back({lqm_from_ellipse(u, v, h), label});
    }
    const double lam = rng.uniform(-0.9, 0.9);
    const Eigen::VectorXd vs = lam * u;
    const double m = u.norm() * std::hypot(1.0, lam);
    const Eigen::VectorXd d = u.normalized();
    Eigen::VectorXd dperp(2);
    dperp << -d[1], d[0];
    cases.push_back({lqm_from_ellipse(u, vs, 0.4 * m * d + 0.8 * m * dperp),
                     Label4::Semiumbilic});
    cases.push_back(
        {lqm_from_ellipse(u, vs, 0.5 * m * d), Label4::InflectionReal});
    cases.push_back(
        {lqm_from_ellipse(u, vs, 1.6 * m * d), Label4::InflectionImaginary});
    cases.push_back({lqm_from_ellipse(u, vs, m * d), Label4::InflectionFlat});
    cases.push_back({lqm_from_ellipse(Eigen::VectorXd::Zero(2),
                                      Eigen::VectorXd::Zero(2), rv2()),
                     Label4::Umbilic});
  }
  cases.push_back(
      {lqm_from_ellipse(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(2),
                        Eigen::VectorXd::Zero(2)),
       Label4::FlatUmbilic});
  return cases;
}

std::vector<std::pair<LocalQuadraticMap, Label5>> constructed_cases_r5(
    Rng& rng) {
  std::vector<std::pair<LocalQuadraticMap, Label5>> cases;
  auto rv3 = [&rng]() {
    Eigen::VectorXd v(3);
    v << rng.coeff(), rng.coeff(), rng.coeff();
    return v;
  };
  for (int rep = 0; rep < 4; ++rep) {
    Eigen::VectorXd u = rv3(), v = rv3();
    while (cross3(u, v).norm() < 0.3) {
      u = rv3();
      v = rv3();
    }
    // flat cases: H inside the (u,v) plane so tau = 0 exactly
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    for (const auto& [radius, label] : std::vector<std::pair<double, Label5>>{
             {0.5, Label5::FlatElliptic},
             {1.7, Label5::FlatHyperbolic},
             {1.0, Label5::FlatParabolic}}) {
      const Eigen::VectorXd h =
          radius * std::cos(phi) * u + radius * std::sin(phi) * v;
      cases.push_back({lqm_from_ellipse(u, v, h), label});
    }
    const double lam = rng.uniform(-0.9, 0.9);
    const Eigen::VectorXd vs = lam * u;
    const double m = u.norm() * std::hypot(1.0, lam);
    const Eigen::VectorXd d = u.normalized();
    Eigen::VectorXd nperp = Eigen::VectorXd::Zero(3);
    for (int i = 0; i < 3; ++i) {
      Eigen::VectorXd cand = Eigen::VectorXd::Zero(3);
      cand[i] = 1.0;
      cand -= cand.dot(d) * d;
      if (cand.norm() > 0.3) {
        nperp = cand.normalized();
        break;
      }
    }
    cases.push_back({lqm_from_ellipse(u, vs, 0.4 * m * d + 0.8 * m * nperp),
                     Label5::Semiumbilic});
    cases.push_back(
        {lqm_from_ellipse(u, vs, 0.5 * m * d), Label5::InflectionReal});
    cases.push_back(
        {lqm_from_ellipse(u, vs, 1.6 * m * d), Label5::InflectionImaginary});
    cases.push_back({lqm_from_ellipse(u, vs, m * d), Label5::InflectionFlat});
    cases.push_back({lqm_from_ellipse(Eigen::VectorXd::Zero(3),
                                      Eigen::VectorXd::Zero(3), rv3()),
                     Label5::Umbilic});
  }
  cases.push_back(
      {lqm_from_ellipse(Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3),
                        Eigen::VectorXd::Zero(3)),
       Label5::FlatUmbilic});
  return cases;
}

// pseudo-parabolic exemplar by bisection of 2 G_p^*(R) along a segment in
// H-space
bool make_pseudo_parabolic(Rng& rng, LocalQuadraticMap& out) {
  auto rv3 = [&rng]() {
    Eigen::VectorXd v(3);
    v << rng.coeff(), rng.coeff(), rng.coeff();
    return v;
  };
  auto value = [](const LocalQuadraticMap& m, bool& valid) -> double {
    const GaussForm g = gauss_form(m);
    const double emax = g.eigenvalues.cwiseAbs().maxCoeff();
    const double emin = g.eigenvalues.cwiseAbs().minCoeff();
    valid = emax > 1e-6 && emin > 1e-4 * emax;
    if (!valid) return 0.0;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(g.matrix);
    const Eigen::VectorXd h = 0.5 * (m.A + m.C);
    const Eigen::VectorXd r = lu.solve(h);
    return r.dot(lu.solve(r));
  };

  for (int tries = 0; tries < 60; ++tries) {
    const Eigen::VectorXd u = rv3(), v = rv3(), h0 = rv3(), w = rv3();
    if (cross3(u, v).norm() < 0.3) continue;
    auto at = [&](double t) { return lqm_from_ellipse(u, v, h0 + t * w); };
    double lo = 0.0, hi = 0.0, prev_t = 0.0, prev_f = 0.0;
    bool prev_ok = false, found = false;
    for (int i = 0; i <= 100; ++i) {
      const double t = -2.0 + 4.0 * i / 100.0;
      bool ok;
      const double f = value(at(t), ok);
      if (ok && prev_ok && (f < 0.0) != (prev_f < 0.0)) {
        lo = prev_t;
        hi = t;
        found = true;
        break;
      }
      prev_t = t;
      prev_f = f;
      prev_ok = ok;
    }
    if (!found) continue;
    bool ok = true;
    bool flo_ok;
    double flo = value(at(lo), flo_ok);
    for (int i = 0; i < 200 && ok; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double f = value(at(mid), ok);
      if (!ok) break;
      if ((f < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = f;
      } else {
        hi = mid;
      }
    }
    if (!ok) continue;
    out = at(0.5 * (lo + hi));
    if (classify_r5(out).label == Label5::PseudoParabolic) return true;
  }
  return false;
}

LocalQuadraticMap random_lqm(Rng& rng, int codim) {
  Eigen::VectorXd a(codim), b(codim), c(codim);
  for (int i = 0; i < codim; ++i) a[i] = rng.coeff();
  for (int i = 0; i < codim; ++i) b[i] = rng.coeff();
  for (int i = 0; i < codim; ++i) c[i] = rng.coeff();
  return make_lqm(a, b, c);
}

LocalQuadraticMap random_lqm_nondegenerate(Rng& rng, int codim,
                                           double min_abs_delta) {
  for (;;) {
    LocalQuadraticMap lqm = random_lqm(rng, codim);
    if (std::abs(gauss_form(lqm).matrix.determinant()) > min_abs_delta)
      return lqm;
  }
}

LocalQuadraticMap lqm_from_ellipse(const Eigen::VectorXd& u,
                                   const Eigen::VectorXd& v,
                                   const Eigen::VectorXd& h) {
  return make_lqm(h + u, v, h - u);
}

SurfaceSpec random_polynomial_surface(Rng& rng, int ambient_dim, int degree) {
  std::vector<ExprPtr> comps;
  for (int i = 0; i < ambient_dim; ++i) {
    ExprPtr f = make_num(0.0);
    if (i == 0) f = make_var('s');
    if (i == 1) f = make_var('t');
    for (int ds = 0; ds <= degree; ++ds)
      for (int dt = 0; dt <= degree - ds; ++dt) {
        if (ds + dt < 2) continue;  // keep the linear part controlled
        ExprPtr term = make_num(0.5 * rng.coeff());
        if (ds > 0)
          term = make_bin(BinOp::Mul, term, make_pow(make_var('s'), ds));
        if (dt > 0)
          term = make_bin(BinOp::Mul, term, make_pow(make_var('t'), dt));
        f = make_bin(BinOp::Add, f, term);
      }
    comps.push_back(f);
  }
  return make_surface(ambient_dim, std::move(comps), "random-poly");
}

LocalQuadraticMap rotate_tangent(const LocalQuadraticMap& lqm, double angle) {
  const double ca = std::cos(angle), sa = std::sin(angle);
  Eigen::Matrix2d rot;
  rot << ca, -sa, sa, ca;
  Eigen::VectorXd a(lqm.codim), b(lqm.codim), c(lqm.codim);
  for (int i = 0; i < lqm.codim; ++i) {
    Eigen::Matrix2d s;
    s << lqm.A[i], lqm.B[i], lqm.B[i], lqm.C[i];
    const Eigen::Matrix2d moved = rot.transpose() * s * rot;
    a[i] = moved(0, 0);
    b[i] = moved(0, 1);
    c[i] = moved(1, 1);
  }
  return make_lqm(a, b, c);
}

LocalQuadraticMap rotate_normal(const LocalQuadraticMap& lqm,
                                const Eigen::MatrixXd& o) {
  return make_lqm(o.transpose() * lqm.A, o.transpose() * lqm.B,
                  o.transpose() * lqm.C);
}

Eigen::MatrixXd random_rotation(Rng& rng, int n) {
  if (n == 1) return Eigen::MatrixXd::Identity(1, 1);
  if (n == 2) {
    const double t = rng.uniform(0.0, 2.0 * kPi);
    Eigen::Matrix2d r;
    r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    return r;
  }
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (const auto& pq : pairs) {
    const double t = rng.uniform(0.0, 2.0 * kPi);
    Eigen::Matrix3d g = Eigen::Matrix3d::Identity();
    g(pq[0], pq[0]) = std::cos(t);
    g(pq[1], pq[1]) = std::cos(t);
    g(pq[0], pq[1]) = -std::sin(t);
    g(pq[1], pq[0]) = std::sin(t);
    r = r * g;
  }
  return r;
}

std::vector<PropertyResult> run_battery(const Options& opts) {
  Battery b(opts);
  battery_sl2(b);
  battery_jets(b);
  battery_invariants(b);
  battery_caustic(b);
  battery_identities(b);
  battery_inequalities(b);
  battery_paired_geometry(b);
  battery_classifier(b);
  battery_frame(b);
  battery_oracle(b);
  return std::move(b.results);
}

}  // namespace curvatura::verify

#include "curvatura/cli.hpp"

#include <Eigen/LU>
#include <fstream>
#include <iostream>
#include <sstream>

#include "curvatura/classify.hpp"
#include "curvatura/json_writer.hpp"
#include "curvatura/paired.hpp"
#include "curvatura/surface_file.hpp"
#include "curvatura/svg.hpp"
#include "curvatura/verify.hpp"

namespace curvatura {
namespace {

constexpr double kPi = 3.14159265358979323846;

void write_output(const RunConfig& config, const std::string& payload) {
  if (config.out_path == "-" || config.out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(config.out_path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open output file '" + config.out_path +
                             "'");
  out << payload;
}

struct Resolved {
  SurfaceFile file;
  double s0 = 0.0, t0 = 0.0;
  double s_min = -1.0, s_max = 1.0, t_min = -1.0, t_max = 1.0;
  int resolution = 21;
  double tol = kClassifyTol;
  int samples = 64;
  std::uint64_t seed = 1;
};

Resolved resolve(const RunConfig& config) {
  Resolved r;
  r.file = load_surface_file(config.surface_path);
  const AnalysisDefaults& a = r.file.analysis;
  if (config.have_at) {
    r.s0 = config.s0;
    r.t0 = config.t0;
  } else if (a.at_s && a.at_t) {
    r.s0 = *a.at_s;
    r.t0 = *a.at_t;
  }
  if (config.have_range) {
    r.s_min = config.s_min;
    r.s_max = config.s_max;
    r.t_min = config.t_min;
    r.t_max = config.t_max;
  } else if (a.s_min && a.s_max && a.t_min && a.t_max) {
    r.s_min = *a.s_min;
    r.s_max = *a.s_max;
    r.t_min = *a.t_min;
    r.t_max = *a.t_max;
  }
  r.resolution = config.resolution;
  if (!config.tol_overridden && a.tol) r.tol = *a.tol;
  else r.tol = config.tol;
  if (!config.samples_overridden && a.samples) r.samples = *a.samples;
  else r.samples = config.samples;
  if (!config.seed_overridden && a.seed) r.seed = *a.seed;
  else r.seed = config.seed;
  if (a.resolution && config.resolution == 21) r.resolution = *a.resolution;
  return r;
}

void write_proj_point(JsonWriter& w, const ProjPoint& p) {
  w.begin_object();
  w.key("at_infinity").value(p.at_infinity);
  w.key(p.at_infinity ? "dir" : "v").vector(p.v);
  w.end_object();
}

void write_inequalities(JsonWriter& w, const InequalityReport& rep) {
  w.begin_array();
  for (const auto& e : rep.entries) {
    w.begin_object();
    w.key("name").value(e.name);
    w.key("lhs").value(e.lhs);
    w.key("rhs").value(e.rhs);
    w.key("slack").value(e.slack);
    w.key("holds").value(e.holds);
    w.end_object();
  }
  w.end_array();
}

}  // namespace

int cmd_point(const RunConfig& config) {
  const Resolved r = resolve(config);
  const SurfaceSpec& spec = r.file.spec;
  const LocalQuadraticMap lqm = local_quadratic_map_at(spec, r.s0, r.t0);
  const Jet2 jet = eval_jet2(spec, r.s0, r.t0);
  const AdaptedFrame frame = adapted_frame(jet);
  const GaussForm g = gauss_form(lqm);
  const Invariants inv = invariants_of(lqm);
  const EllipseParam ellipse = indicatrix(lqm);
  const Quadric caustic = caustic_quadric(lqm);
  const CausticCenter center = caustic_center(lqm, r.tol);
  const InequalityReport ineq = inequality_report(lqm);

  bool paired_defined = true;
  PairedBundle bundle;
  try {
    bundle = paired_map(lqm);
  } catch (const SingularError&) {
    paired_defined = false;
    if (config.require_paired)
      throw;  // mapped to kExitUndefined by run_command
  }

  JsonWriter w;
  w.begin_object();
  w.key("schema").value("curvatura.point.v1");
  w.key("surface").value(spec.name);
  w.key("point").begin_array().value(r.s0).value(r.t0).end_array();
  w.key("ambient_dim").value(spec.ambient_dim);
  w.key("codim").value(lqm.codim);
  w.key("lqm");
  w.begin_object();
  w.key("A").vector(lqm.A);
  w.key("B").vector(lqm.B);
  w.key("C").vector(lqm.C);
  w.end_object();
  w.key("K").value(inv.K);
  if (inv.N) w.key("N").value(*inv.N);
  else w.key("N").null();
  w.key("Delta").value(inv.Delta);
  if (inv.Acal) w.key("Acal").value(*inv.Acal);
  if (inv.tau) w.key("tau").value(*inv.tau);
  w.key("H").vector(inv.H);
  w.key("Hnorm").value(inv.H.norm());
  w.key("focal").vector(inv.focal);
  w.key("principal_basis").matrix(g.eigenvectors);

  w.key("R");
  if (center.kind == CausticCenter::Kind::Affine)
    write_proj_point(w, ProjPoint::affine(center.v));
  else if (center.kind == CausticCenter::Kind::AtInfinity)
    write_proj_point(w, ProjPoint::infinite(center.v));
  else
    w.null();
  w.key("RH_inner");
  if (center.kind == CausticCenter::Kind::Affine)
    w.value(center.v.dot(inv.H));
  else
    w.null();

  if (lqm.codim == 2) {
    const PointClass4 pc = classify_r4(lqm, r.tol);
    w.key("class").value(to_string(pc.label));
    w.key("boundary_warning").value(pc.boundary_warning);
    w.key("class_flags");
    w.begin_object();
    w.key("centered").value(pc.centered);
    w.key("circle_caustic").value(pc.circle_caustic);
    w.end_object();
  } else if (lqm.codim == 3) {
    const PointClass5 pc = classify_r5(lqm, r.tol);
    w.key("class").value(to_string(pc.label));
    w.key("boundary_warning").value(pc.boundary_warning);
    w.key("class_flags");
    w.begin_object();
    w.key("tau_sign").value(pc.tau_sign);
    w.key("m_stratum").value(pc.m_stratum);
    w.end_object();
  } else {
    w.key("class").null();
    w.key("boundary_warning").value(false);
  }

  w.key("ellipse");
  w.begin_object();
  w.key("center").vector(ellipse.center);
  w.key("u_axis").vector(ellipse.u_axis);
  w.key("v_axis").vector(ellipse.v_axis);
  w.end_object();

  w.key("caustic");
  w.begin_object();
  w.key("M").matrix(caustic.M);
  w.key("b").vector(caustic.b);
  w.key("c").value(caustic.c);
  if (lqm.codim >= 2) {
    const QuadricClass qc = classify_quadric(caustic, r.tol);
    w.key("class").value(to_string(qc.label));
    w.key("center_or_vertex");
    if (qc.center_or_vertex)
      write_proj_point(w, *qc.center_or_vertex);
    else
      w.null();
  }
  w.end_object();

  w.key("inequalities");
  write_inequalities(w, ineq);

  w.key("paired");
  if (paired_defined) {
    const Invariants& ps = bundle.inv_star;
    w.begin_object();
    w.key("A").vector(bundle.paired.A);
    w.key("B").vector(bundle.paired.B);
    w.key("C").vector(bundle.paired.C);
    w.key("K").value(ps.K);
    if (ps.N) w.key("N").value(*ps.N);
    w.key("Delta").value(ps.Delta);
    if (ps.Acal) w.key("Acal").value(*ps.Acal);
    if (ps.tau) w.key("tau").value(*ps.tau);
    w.key("H").vector(ps.H);
    w.key("focal").vector(ps.focal);
    w.key("condition").value(bundle.condition);
    w.key("reliable").value(bundle.reliable);
    w.end_object();
  } else {
    w.null();
  }

  w.key("frame");
  w.begin_object();
  w.key("base").vector(frame.base_point);
  w.key("e1").vector(frame.e1);
  w.key("e2").vector(frame.e2);
  w.key("normals").matrix(frame.normals);
  w.end_object();

  w.end_object();
  write_output(config, w.str() + "\n");
  return kExitOk;
}

namespace {

struct CurveRows {
  std::ostringstream csv;
  int codim;

  explicit CurveRows(int l) : codim(l) {
    csv << "curve_id,param,q1,q2";
    if (codim == 3) csv << ",q3";
    csv << "\n";
  }

  void row(const std::string& id, double param, const Eigen::VectorXd& q) {
    csv << id << ',' << fmt_double(param);
    for (int i = 0; i < codim; ++i) csv << ',' << fmt_double(q[i]);
    csv << "\n";
  }
};

}  // namespace

int cmd_curves(const RunConfig& config) {
  const Resolved r = resolve(config);
  const SurfaceSpec& spec = r.file.spec;
  const LocalQuadraticMap lqm = local_quadratic_map_at(spec, r.s0, r.t0);
  const int l = lqm.codim;
  if (l < 2)
    throw std::invalid_argument("curves: surface must live in R^4 or R^5");

  const Invariants inv = invariants_of(lqm);
  const EllipseParam ellipse = indicatrix(lqm);
  const EllipseGeometry geom = ellipse_geometry(ellipse, r.tol);
  const Quadric caustic = caustic_quadric(lqm);
  const CausticCenter center = caustic_center(lqm, r.tol);
  const int n = std::max(8, r.samples);

  CurveRows rows(l);
  std::vector<std::vector<Eigen::Vector2d>> svg_curves;
  std::vector<std::string> svg_colors;

  auto emit_curve = [&](const std::string& id,
                        const std::vector<std::pair<double, Eigen::VectorXd>>&
                            pts,
                        const std::string& color) {
    std::vector<Eigen::Vector2d> plane;
    for (const auto& [param, q] : pts) {
      rows.row(id, param, q);
      if (l == 2) plane.emplace_back(q[0], q[1]);
    }
    if (l == 2 && plane.size() >= 2) {
      svg_curves.push_back(std::move(plane));
      svg_colors.push_back(color);
    }
  };

  // indicatrix ellipse
  {
    std::vector<std::pair<double, Eigen::VectorXd>> pts;
    for (int k = 0; k <= n; ++k) {
      const double theta = kPi * k / n;
      pts.push_back({theta, ellipse.at(theta)});
    }
    emit_curve("Ep", pts, "#1f77b4");
  }

  // local caustic
  if (geom.nondegenerate()) {
    bool delta_ok = true;
    std::vector<Eigen::VectorXd> cpts;
    try {
      cpts = sample_caustic_points(lqm, n);
    } catch (const SingularError&) {
      delta_ok = false;
    }
    if (delta_ok) {
      std::vector<std::pair<double, Eigen::VectorXd>> pts;
      for (std::size_t k = 0; k < cpts.size(); ++k)
        pts.push_back({static_cast<double>(k), cpts[k]});
      emit_curve("Cp", pts, "#d62728");
    } else {
      // parabolic-type caustic: fall back to dual sampling
      const DualSamples dual = dual_of_indicatrix(lqm, n);
      std::vector<std::pair<double, Eigen::VectorXd>> pts;
      int k = 0;
      for (const auto& pole : dual.poles)
        if (!pole.at_infinity) pts.push_back({static_cast<double>(k++), pole.v});
      emit_curve("Cp", pts, "#d62728");
    }
  } else {
    // degenerate indicatrix: the caustic is a union of polar lines of the
    // segment endpoints (a double line for a point ellipse)
    std::vector<Eigen::VectorXd> anchors;
    if (geom.rank == 0) {
      anchors.push_back(geom.center);
    } else {
      anchors.push_back(geom.center + geom.r1 * geom.w1);
      anchors.push_back(geom.center - geom.r1 * geom.w1);
    }
    int line_idx = 0;
    for (const auto& q0 : anchors) {
      if (q0.norm() < 1e-12) continue;  // polar is the ideal hyperplane
      // polar hyperplane {x : <q0,x> = 1}; sample a line inside it
      const Eigen::VectorXd base = q0 / q0.squaredNorm();
      Eigen::VectorXd dir = Eigen::VectorXd::Zero(l);
      for (int i = 0; i < l; ++i) {
        Eigen::VectorXd cand = Eigen::VectorXd::Zero(l);
        cand[i] = 1.0;
        cand -= cand.dot(q0.normalized()) * q0.normalized();
        if (cand.norm() > 1e-8) {
          dir = cand.normalized();
          break;
        }
      }
      std::vector<std::pair<double, Eigen::VectorXd>> pts;
      for (int k = 0; k <= n; ++k) {
        const double t = -3.0 + 6.0 * k / n;
        pts.push_back({t, base + t * dir});
      }
      emit_curve("Cp_line" + std::to_string(++line_idx), pts, "#d62728");
    }
  }

  // paired objects require Delta != 0
  bool have_paired = true;
  PairedBundle bundle;
  try {
    bundle = paired_map(lqm);
  } catch (const SingularError&) {
    have_paired = false;
  }
  if (have_paired) {
    const EllipseParam estar = indicatrix(bundle.paired);
    std::vector<std::pair<double, Eigen::VectorXd>> pts;
    for (int k = 0; k <= n; ++k) {
      const double theta = kPi * k / n;
      pts.push_back({theta, estar.at(theta)});
    }
    emit_curve("Ep_star", pts, "#17becf");

    try {
      const auto cpts = sample_caustic_points(bundle.paired, n);
      std::vector<std::pair<double, Eigen::VectorXd>> cp;
      for (std::size_t k = 0; k < cpts.size(); ++k)
        cp.push_back({static_cast<double>(k), cpts[k]});
      emit_curve("Cp_star", cp, "#ff7f0e");
    } catch (const SingularError&) {
    }

    try {
      const auto [h_locus, r_locus] = hr_loci(lqm);
      const auto hpts =
          sample_central_quadric(h_locus.M, Eigen::VectorXd::Zero(l),
                                 -h_locus.c, n);
      std::vector<std::pair<double, Eigen::VectorXd>> hv;
      for (std::size_t k = 0; k < hpts.size(); ++k)
        hv.push_back({static_cast<double>(k), hpts[k]});
      emit_curve("H_locus", hv, "#2ca02c");
      const auto rpts =
          sample_central_quadric(r_locus.M, Eigen::VectorXd::Zero(l),
                                 -r_locus.c, n);
      std::vector<std::pair<double, Eigen::VectorXd>> rv;
      for (std::size_t k = 0; k < rpts.size(); ++k)
        rv.push_back({static_cast<double>(k), rpts[k]});
      emit_curve("R_locus", rv, "#bcbd22");

      const auto [sigma, sigma_star] = sigma_cones(lqm);
      const auto spts = sample_central_quadric(
          sigma.M, Eigen::VectorXd::Zero(l), 0.0, n);
      std::vector<std::pair<double, Eigen::VectorXd>> sv;
      for (std::size_t k = 0; k < spts.size(); ++k)
        sv.push_back({static_cast<double>(k), spts[k]});
      emit_curve("Sigma", sv, "#7f7f7f");
      const auto sspts = sample_central_quadric(
          sigma_star.M, Eigen::VectorXd::Zero(l), 0.0, n);
      std::vector<std::pair<double, Eigen::VectorXd>> ssv;
      for (std::size_t k = 0; k < sspts.size(); ++k)
        ssv.push_back({static_cast<double>(k), sspts[k]});
      emit_curve("Sigma_star", ssv, "#c7c7c7");
    } catch (const SingularError&) {
    }
  }

  // special points
  rows.row("p", 0.0, Eigen::VectorXd::Zero(l));
  rows.row("H", 0.0, inv.H);
  if (center.kind == CausticCenter::Kind::Affine) rows.row("R", 0.0, center.v);
  std::vector<Eigen::Vector2d> marks{{0.0, 0.0}};
  if (l == 2) {
    marks.emplace_back(inv.H[0], inv.H[1]);
    if (center.kind == CausticCenter::Kind::Affine)
      marks.emplace_back(center.v[0], center.v[1]);
    if (have_paired) {
      const Bitangency bit = bitangency_points(bundle);
      if (bit.kind == Bitangency::Kind::TwoPoints ||
          bit.kind == Bitangency::Kind::DoublePoint) {
        Eigen::VectorXd p1(2), p2(2);
        p1 << bit.points[0][0], bit.points[0][1];
        p2 << bit.points[1][0], bit.points[1][1];
        rows.row("bitangency1", bit.lambda1, p1);
        rows.row("bitangency2", bit.lambda2, p2);
        marks.emplace_back(p1[0], p1[1]);
        marks.emplace_back(p2[0], p2[1]);
      }
    }
  }

  if (config.format == "svg") {
    if (l != 2)
      throw std::invalid_argument("curves: svg output requires codim 2");
    SvgCanvas canvas;
    for (std::size_t i = 0; i < svg_curves.size(); ++i)
      canvas.polyline(svg_curves[i], svg_colors[i], 1.0);
    const char* mark_colors[] = {"#000000", "#1f77b4", "#d62728", "#9467bd",
                                 "#9467bd"};
    for (std::size_t i = 0; i < marks.size(); ++i)
      canvas.dot(marks[i], mark_colors[std::min<std::size_t>(i, 4)], 0.05);
    write_output(config, canvas.str());
  } else {
    write_output(config, rows.csv.str());
  }
  return kExitOk;
}

int cmd_grid(const RunConfig& config) {
  const Resolved r = resolve(config);
  const SurfaceSpec& spec = r.file.spec;
  const int codim = spec.ambient_dim - 2;
  const std::vector<GridCell> cells = grid_classify(
      spec, r.s_min, r.s_max, r.t_min, r.t_max, r.resolution, r.tol);

  int ok_count = 0;
  std::ostringstream csv;
  csv << "s,t,K,N,Delta";
  if (codim == 3) csv << ",Acal,tau";
  csv << ",Hnorm,class,boundary_warning,error\n";
  for (const auto& cell : cells) {
    csv << fmt_double(cell.s) << ',' << fmt_double(cell.t) << ',';
    if (cell.ok) {
      ++ok_count;
      csv << fmt_double(cell.inv.K) << ','
          << (cell.inv.N ? fmt_double(*cell.inv.N) : std::string()) << ','
          << fmt_double(cell.inv.Delta) << ',';
      if (codim == 3)
        csv << fmt_double(cell.inv.Acal.value_or(0.0)) << ','
            << fmt_double(cell.inv.tau.value_or(0.0)) << ',';
      csv << fmt_double(cell.inv.H.norm()) << ',' << cell.label << ','
          << (cell.boundary_warning ? "1" : "0") << ",\n";
    } else {
      csv << ",,";
      if (codim == 3) csv << ",,";
      csv << ",,,," << '"' << cell.error << '"' << "\n";
    }
  }

  if (config.format == "svg") {
    SvgCanvas canvas;
    const double ds = (r.s_max - r.s_min) / (r.resolution - 1);
    const double dt = (r.t_max - r.t_min) / (r.resolution - 1);
    for (const auto& cell : cells) {
      if (!cell.ok) continue;
      canvas.cell(cell.s - 0.5 * ds, cell.t - 0.5 * dt, cell.s + 0.5 * ds,
                  cell.t + 0.5 * dt, class_color(cell.label));
    }
    write_output(config, canvas.str());
  } else {
    write_output(config, csv.str());
  }

  const double ok_fraction =
      cells.empty() ? 0.0 : static_cast<double>(ok_count) / cells.size();
  return ok_fraction >= 0.9 ? kExitOk : kExitGridBudget;
}

int cmd_verify(const RunConfig& config) {
  verify::Options opts;
  opts.seed = config.seed;
  opts.count_scale = config.count_scale;
  opts.inject_psi_sign_flip = config.inject_bug == "psi-sign-flip";
  const std::vector<verify::PropertyResult> results =
      verify::run_battery(opts);

  std::ostringstream text;
  const verify::PropertyResult* first_failure = nullptr;
  for (const auto& p : results) {
    text << (p.passed ? "PASS" : "FAIL") << ' ' << p.name
         << " max_residual=" << fmt_double(p.max_residual)
         << " threshold=" << fmt_double(p.threshold) << " samples=" << p.samples;
    if (!p.note.empty()) text << " note=" << p.note;
    text << "\n";
    if (!p.passed && first_failure == nullptr) first_failure = &p;
  }

  if (config.format == "json" && config.out_path != "-" &&
      !config.out_path.empty()) {
    JsonWriter w;
    w.begin_object();
    w.key("schema").value("curvatura.verify.v1");
    w.key("seed").value(config.seed);
    w.key("properties");
    w.begin_array();
    for (const auto& p : results) {
      w.begin_object();
      w.key("name").value(p.name);
      w.key("samples").value(p.samples);
      w.key("max_residual").value(p.max_residual);
      w.key("threshold").value(p.threshold);
      w.key("passed").value(p.passed);
      if (!p.note.empty()) w.key("note").value(p.note);
      w.end_object();
    }
    w.end_array();
    w.end_object();
    write_output(config, w.str() + "\n");
    std::cout << text.str();
  } else {
    write_output(config, text.str());
  }

  if (first_failure != nullptr) {
    std::cerr << "verify: first failing property: " << first_failure->name
              << "\n";
    return kExitPropertyFailure;
  }
  return kExitOk;
}

int run_command(const RunConfig& config) {
  try {
    if (config.command == "point") return cmd_point(config);
    if (config.command == "curves") return cmd_curves(config);
    if (config.command == "grid") return cmd_grid(config);
    if (config.command == "verify") return cmd_verify(config);
    std::cerr << "unknown command '" << config.command << "'\n";
    return kExitParse;
  } catch (const ParseError& ex) {
    std::cerr << "parse error: " << ex.what() << "\n";
    return kExitParse;
  } catch (const DomainError& ex) {
    std::cerr << "domain error: " << ex.what() << "\n";
    return kExitImmersion;
  } catch (const ImmersionError& ex) {
    std::cerr << "immersion failure: " << ex.what() << "\n";
    return kExitImmersion;
  } catch (const SingularError& ex) {
    std::cerr << "undefined quantity: " << ex.what() << "\n";
    return kExitUndefined;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitPropertyFailure;
  }
}

}  // namespace curvatura

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curvatura/quadric.hpp"
#include "curvatura/verify.hpp"

using namespace curvatura;

namespace {

constexpr double kPi = 3.14159265358979323846;

LocalQuadraticMap elliptic_example() {
  Eigen::Vector2d a(2, 2), b(2, 0), c(0.5, -0.5);
  return make_lqm(a, b, c);
}

LocalQuadraticMap r5_diag_example() {
  Eigen::Vector3d a(1, 0, 1), b(0, 1, 0), c(-1, 0, 1);
  return make_lqm(a, b, c);
}

LocalQuadraticMap r5_flat_elliptic_example() {
  // Q1 = (1,0,-1), Q2 = (0,1,0), Q3 = 0: caustic <A,q>^2 + <B,q>^2 = 1
  Eigen::Vector3d a(1, 0, 0), b(0, 1, 0), c(-1, 0, 0);
  return make_lqm(a, b, c);
}

double printed_elliptic_cp(const Eigen::Vector2d& q) {
  const double x = q[0] + 5.0 / 12.0, y = q[1] + 0.75;
  return 3.0 * x * x + y * y - 25.0 / 12.0;
}

}  // namespace

TEST_CASE("caustic polynomial of the worked examples") {
  const Quadric cp = caustic_quadric(elliptic_example());
  CHECK(cp.c == 1.0);
  CHECK((cp.b - Eigen::Vector2d(-1.25, -0.75)).norm() < 1e-14);
  // point set equality with the printed ellipse, both directions
  const auto pts = sample_caustic_points(elliptic_example(), 64);
  CHECK(pts.size() >= 64);
  for (const auto& q : pts)
    CHECK(std::abs(printed_elliptic_cp(Eigen::Vector2d(q[0], q[1]))) < 1e-9);
  for (int k = 0; k < 64; ++k) {
    const double phi = 2.0 * kPi * k / 64.0;
    Eigen::VectorXd q(2);
    q << -5.0 / 12.0 + std::sqrt(25.0 / 36.0) * std::cos(phi),
        -0.75 + std::sqrt(25.0 / 12.0) * std::sin(phi);
    CHECK(std::abs(cp.eval(q)) < 1e-9);
  }

  // flat umbilic: 1 = 0, the doubled ideal line
  const Quadric zero = caustic_quadric(
      make_lqm(Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(),
               Eigen::Vector2d::Zero()));
  CHECK(zero.M.cwiseAbs().maxCoeff() == 0.0);
  CHECK(zero.c == 1.0);
  CHECK(classify_quadric(zero).label == QuadricLabel::DoubleLineAtInfinity);

  // codim 3 diagonal example: (q3-1)^2 = q1^2 + q2^2
  const Quadric cone = caustic_quadric(r5_diag_example());
  for (double phi : {0.0, 1.0, 2.5}) {
    for (double t : {-1.0, 0.5, 2.0}) {
      Eigen::VectorXd q(3);
      q << t * std::cos(phi), t * std::sin(phi), 1.0 + t;
      CHECK(std::abs(cone.eval(q)) < 1e-12);
    }
  }
}

TEST_CASE("caustic centre") {
  const CausticCenter c2 = caustic_center(elliptic_example());
  REQUIRE(c2.affine());
  CHECK(c2.v[0] == doctest::Approx(-5.0 / 12.0));
  CHECK(c2.v[1] == doctest::Approx(-0.75));

  const CausticCenter c3 = caustic_center(r5_diag_example());
  REQUIRE(c3.affine());
  CHECK((c3.v - Eigen::Vector3d(0, 0, 1)).norm() < 1e-14);

  // flat point: vertex at infinity, orthogonal to the ellipse plane
  const CausticCenter flat = caustic_center(r5_flat_elliptic_example());
  CHECK(flat.kind == CausticCenter::Kind::AtInfinity);
  CHECK((flat.v - Eigen::Vector3d(0, 0, 1)).cwiseAbs().maxCoeff() < 1e-12);

  const CausticCenter none = caustic_center(
      make_lqm(Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(),
               Eigen::Vector2d::Zero()));
  CHECK(none.kind == CausticCenter::Kind::NoUnique);
}

TEST_CASE("caustic level residual") {
  const LocalQuadraticMap lqm = elliptic_example();
  Eigen::VectorXd on(2);
  on << -5.0 / 12.0 + 5.0 / 6.0, -0.75;  // 3 (q1+5/12)^2 = 25/12
  CHECK(std::abs(caustic_level_residual(lqm, on)) < 1e-12);
  Eigen::VectorXd centre(2);
  centre << -5.0 / 12.0, -0.75;
  CHECK(caustic_level_residual(lqm, centre) == doctest::Approx(25.0 / 12.0));

  Eigen::VectorXd vertex(3);
  vertex << 0, 0, 1;
  CHECK(std::abs(caustic_level_residual(r5_diag_example(), vertex)) < 1e-14);

  CHECK_THROWS_AS(
      caustic_level_residual(
          make_lqm(Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(),
                   Eigen::Vector2d::Zero()),
          centre),
      SingularError);
}

TEST_CASE("pole of a hyperplane") {
  Eigen::Vector3d n(2, 5, 4);
  const ProjPoint p = polar_point_of_hyperplane(n, 1.0);
  CHECK(!p.at_infinity);
  CHECK((p.v - n).norm() < 1e-15);

  const ProjPoint inf = polar_point_of_hyperplane(Eigen::Vector2d(1, 0), 0.0);
  CHECK(inf.at_infinity);
  CHECK((inf.v - Eigen::Vector2d(1, 0)).norm() < 1e-15);

  const ProjPoint scaled = polar_point_of_hyperplane(Eigen::Vector2d(3, 0), 3.0);
  CHECK((scaled.v - Eigen::Vector2d(1, 0)).norm() < 1e-15);

  CHECK_THROWS_AS(polar_point_of_hyperplane(Eigen::Vector2d(0, 0), 1.0),
                  std::invalid_argument);
}

TEST_CASE("polar dual of the indicatrix lies on the caustic") {
  const LocalQuadraticMap lqm = elliptic_example();
  const Quadric cp = caustic_quadric(lqm);
  const DualSamples dual = dual_of_indicatrix(lqm, 16);
  CHECK(!dual.degenerate_ellipse);
  CHECK(dual.poles.size() == 16);
  for (const auto& pole : dual.poles) {
    REQUIRE(!pole.at_infinity);  // elliptic: no tangent line through origin
    CHECK(std::abs(cp.eval(pole.v)) / cp.eval_scale(pole.v) < 1e-10);
    CHECK(std::abs(printed_elliptic_cp(Eigen::Vector2d(pole.v[0], pole.v[1]))) <
          1e-9);
  }

  // point ellipse: degenerate flag
  Eigen::Vector2d h(1, 0);
  const DualSamples umb =
      dual_of_indicatrix(make_lqm(h, Eigen::Vector2d::Zero(), h), 16);
  CHECK(umb.degenerate_ellipse);

  const LocalQuadraticMap diag = r5_diag_example();
  const Quadric cone = caustic_quadric(diag);
  const DualSamples d3 = dual_of_indicatrix(diag, 8);
  CHECK(!d3.degenerate_ellipse);
  CHECK(d3.poles.size() == 8 * 8);
  for (const auto& pole : d3.poles) {
    if (pole.at_infinity) {
      CHECK(std::abs(pole.v.dot(cone.M * pole.v)) < 1e-10);
    } else {
      CHECK(std::abs(cone.eval(pole.v)) / cone.eval_scale(pole.v) < 1e-10);
    }
  }

  CHECK_THROWS_AS(dual_of_indicatrix(lqm, 4), std::invalid_argument);
}

TEST_CASE("normal line foci") {
  const LocalQuadraticMap lqm = elliptic_example();
  const NormalLineFoci f = normal_line_foci(lqm, Eigen::Vector2d(0, 1));
  CHECK(f.mu1 == doctest::Approx(-0.5));
  CHECK(f.mu2 == doctest::Approx(2.0));
  REQUIRE(!f.focus1.at_infinity);
  REQUIRE(!f.focus2.at_infinity);
  CHECK((f.focus1.v - Eigen::Vector2d(0, -2)).norm() < 1e-12);
  CHECK((f.focus2.v - Eigen::Vector2d(0, 0.5)).norm() < 1e-12);
  // directions: t-axis for mu1, s-axis for mu2
  CHECK(std::abs(f.dir1[1]) > 1.0 - 1e-12);
  CHECK(std::abs(f.dir2[0]) > 1.0 - 1e-12);
  const Quadric cp = caustic_quadric(lqm);
  CHECK(std::abs(cp.eval(f.focus1.v)) < 1e-12);
  CHECK(std::abs(cp.eval(f.focus2.v)) < 1e-12);

  const NormalLineFoci zero = normal_line_foci(
      make_lqm(Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(),
               Eigen::Vector2d::Zero()),
      Eigen::Vector2d(1, 0));
  CHECK(zero.focus1.at_infinity);
  CHECK(zero.focus2.at_infinity);

  Eigen::VectorXd a(1), b(1), c(1);
  a << -1;
  b << 0;
  c << -1;
  const NormalLineFoci sph =
      normal_line_foci(make_lqm(a, b, c), Eigen::VectorXd::Constant(1, 1.0));
  CHECK(sph.mu1 == doctest::Approx(-1.0));
  CHECK(sph.mu2 == doctest::Approx(-1.0));
  CHECK(sph.focus1.v[0] == doctest::Approx(-1.0));
  CHECK(sph.focus2.v[0] == doctest::Approx(-1.0));
}

TEST_CASE("sigma cones") {
  const auto [sigma_e, sigma_star_e] = sigma_cones(elliptic_example());
  // definite form: the cone is only the origin
  CHECK(sigma_e.eval(Eigen::Vector2d(1, 0)) < 0.0);
  CHECK(sigma_e.eval(Eigen::Vector2d(0, 1)) < 0.0);

  const auto [sigma, sigma_star] = sigma_cones(r5_diag_example());
  const Quadric cp = caustic_quadric(r5_diag_example());
  const auto pts =
      sample_central_quadric(sigma.M, Eigen::VectorXd::Zero(3), 0.0, 32);
  CHECK(pts.size() >= 32);
  Eigen::Vector3d r(0, 0, 1);
  for (const auto& q : pts) {
    CHECK(std::abs(sigma.eval(q)) < 1e-10 * std::max(1.0, q.squaredNorm()));
    // Sigma_p + R = C_p
    CHECK(std::abs(cp.eval(q + r)) / cp.eval_scale(q + r) < 1e-10);
  }

  // hyperbolic Gauss form diag(-3, 1): two lines q2 = +/- sqrt(3) q1
  Eigen::Matrix2d m = Eigen::Vector2d(-3.0, 1.0).asDiagonal();
  const auto lines =
      sample_central_quadric(m, Eigen::VectorXd::Zero(2), 0.0, 16);
  CHECK(!lines.empty());
  for (const auto& q : lines)
    CHECK(q[1] * q[1] == doctest::Approx(3.0 * q[0] * q[0]).epsilon(1e-9));

  CHECK_THROWS_AS(sigma_cones(r5_flat_elliptic_example()), SingularError);
}

TEST_CASE("H and R loci") {
  const LocalQuadraticMap lqm = elliptic_example();
  const auto [h_locus, r_locus] = hr_loci(lqm);
  const Invariants inv = invariants_of(lqm);
  CHECK(std::abs(h_locus.eval(inv.H)) < 1e-12);
  Eigen::VectorXd r(2);
  r << -5.0 / 12.0, -0.75;
  CHECK(std::abs(r_locus.eval(r)) < 1e-12);
  // the locus constant is 1 - N^2 / (4 Delta) = -13/12
  CHECK(-h_locus.c == doctest::Approx(-13.0 / 12.0));

  const auto [h5, r5] = hr_loci(r5_diag_example());
  Eigen::Vector3d h(0, 0, 1);
  CHECK(std::abs(h5.eval(h)) < 1e-14);
  CHECK(std::abs(r5.eval(h)) < 1e-14);  // self-dual in the involutive case
}

TEST_CASE("quadric classification labels") {
  CHECK(classify_quadric(caustic_quadric(elliptic_example())).label ==
        QuadricLabel::Ellipse);
  const QuadricClass ell = classify_quadric(caustic_quadric(elliptic_example()));
  REQUIRE(ell.center_or_vertex.has_value());
  CHECK(ell.center_or_vertex->v[0] == doctest::Approx(-5.0 / 12.0));
  CHECK(ell.center_or_vertex->v[1] == doctest::Approx(-0.75));

  const QuadricClass cone = classify_quadric(caustic_quadric(r5_diag_example()));
  CHECK(cone.label == QuadricLabel::Cone);
  REQUIRE(cone.center_or_vertex.has_value());
  CHECK((cone.center_or_vertex->v - Eigen::Vector3d(0, 0, 1)).norm() < 1e-12);

  const QuadricClass cyl =
      classify_quadric(caustic_quadric(r5_flat_elliptic_example()));
  CHECK(cyl.label == QuadricLabel::EllipticCylinder);
  REQUIRE(cyl.center_or_vertex.has_value());
  CHECK(cyl.center_or_vertex->at_infinity);

  // H/R hyperboloids are projectively nondegenerate
  const auto [h5, r5] = hr_loci(r5_diag_example());
  CHECK(classify_quadric(h5).label == QuadricLabel::Nondegenerate);

  // circle sub-label when the focal curvatures coincide
  Eigen::Vector2d a(-1, 0), b(0, -1), c(-1, 0);
  // Q1 = (-1,0,-1) = -W (norm 1? (-1)(-1) - 0 = 1)... use G = -I instead:
  // Q1 = (1,0,-1), Q2 = (0,1,0) gives G = diag(-1,-1)
  Eigen::Vector2d a2(1, 0), b2(0, 1), c2(-1, 0);
  const LocalQuadraticMap equal_focal = make_lqm(a2, b2, c2);
  const GaussForm g = gauss_form(equal_focal);
  REQUIRE(g.eigenvalues[0] == doctest::Approx(g.eigenvalues[1]));
  CHECK(classify_quadric(caustic_quadric(equal_focal)).label ==
        QuadricLabel::Circle);
}

TEST_CASE("asymptotic directions in codim 2") {
  CHECK(asymptotic_directions_r4(elliptic_example()).roots.empty());
  CHECK(!asymptotic_directions_r4(elliptic_example()).all_directions);

  // Q1 = (1,0,0), Q2 = (0,0,1): bracket (0, 1/2, 0), roots at 0 and pi/2
  Eigen::Vector2d a(1, 0), b(0, 0), c(0, 1);
  const AsymptoticDirections ad = asymptotic_directions_r4(make_lqm(a, b, c));
  REQUIRE(ad.roots.size() == 2);
  const double t1 = std::min(ad.roots[0].theta, ad.roots[1].theta);
  const double t2 = std::max(ad.roots[0].theta, ad.roots[1].theta);
  CHECK(t1 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(t2 == doctest::Approx(kPi / 2.0).epsilon(1e-12));

  const AsymptoticDirections zero = asymptotic_directions_r4(
      make_lqm(Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(),
               Eigen::Vector2d::Zero()));
  CHECK(zero.all_directions);

  // hyperbolic random maps: asymptote poles are the points of E_p whose
  // tangent line passes through the origin
  Rng rng(5);
  int tested = 0;
  while (tested < 50) {
    const LocalQuadraticMap lqm = verify::random_lqm(rng, 2);
    const Invariants inv = invariants_of(lqm);
    if (inv.Delta > -1e-3) continue;
    ++tested;
    const AsymptoticDirections roots = asymptotic_directions_r4(lqm);
    REQUIRE(roots.roots.size() == 2);
    const EllipseParam ep = indicatrix(lqm);
    for (const auto& root : roots.roots) {
      // tangent direction at E_p(theta) is parallel to E_p(theta)
      const Eigen::VectorXd p = ep.at(root.theta);
      const Eigen::VectorXd d =
          -2.0 * std::sin(2.0 * root.theta) * ep.u_axis +
          2.0 * std::cos(2.0 * root.theta) * ep.v_axis;
      const double cross = p[0] * d[1] - p[1] * d[0];
      CHECK(std::abs(cross) <
            1e-8 * std::max(1.0, p.norm() * d.norm()));
    }
    // centre R is the pole of the line joining the two tangency points
    const CausticCenter cc = caustic_center(lqm);
    REQUIRE(cc.affine());
    const Eigen::VectorXd pa = roots.roots[0].ep_point;
    const Eigen::VectorXd pb = roots.roots[1].ep_point;
    // line through pa, pb: <n, x> = off
    Eigen::Vector2d dir(pb[0] - pa[0], pb[1] - pa[1]);
    Eigen::Vector2d nrm(-dir[1], dir[0]);
    const double off = nrm.dot(Eigen::Vector2d(pa[0], pa[1]));
    const ProjPoint pole = polar_point_of_hyperplane(nrm, off);
    if (!pole.at_infinity)
      CHECK((pole.v - cc.v).norm() < 1e-6 * std::max(1.0, cc.v.norm()));
  }
}

TEST_CASE("hyperbolic worked point: caustic from direct expansion") {
  // phi = ( (3s^2 - t^2)/2 , (s^2/2 + st + t^2/2)/2 ): Delta = -1/4 and the
  // caustic expands to -3 q1^2 + q1 q2 - 2 q1 - q2 + 1 = 0 with centre (1,8)
  Eigen::Vector2d a(3, 0.5), b(0, 0.5), c(-1, 0.5);
  const LocalQuadraticMap lqm = make_lqm(a, b, c);
  const Invariants inv = invariants_of(lqm);
  CHECK(inv.Delta == doctest::Approx(-0.25));
  CHECK(inv.K == doctest::Approx(-3.0));
  CHECK(*inv.N == doctest::Approx(2.0));

  const Quadric cp = caustic_quadric(lqm);
  auto expanded = [](const Eigen::VectorXd& q) {
    return -3.0 * q[0] * q[0] + q[0] * q[1] - 2.0 * q[0] - q[1] + 1.0;
  };
  for (const auto& q : sample_caustic_points(lqm, 32))
    CHECK(std::abs(expanded(q)) < 1e-10 * cp.eval_scale(q));

  const CausticCenter cc = caustic_center(lqm);
  REQUIRE(cc.affine());
  CHECK(cc.v[0] == doctest::Approx(1.0));
  CHECK(cc.v[1] == doctest::Approx(8.0));
  CHECK(classify_quadric(cp).label == QuadricLabel::Hyperbola);
}

TEST_CASE("ellipse geometry, containment and distance") {
  EllipseParam e;
  e.center = Eigen::Vector2d(0, 0);
  e.u_axis = Eigen::Vector2d(2, 0);
  e.v_axis = Eigen::Vector2d(0, 1);
  const EllipseGeometry g = ellipse_geometry(e);
  REQUIRE(g.nondegenerate());
  CHECK(g.r1 == doctest::Approx(2.0));
  CHECK(g.r2 == doctest::Approx(1.0));

  CHECK(ellipse_distance(g, Eigen::Vector2d(3, 0)) == doctest::Approx(1.0));
  CHECK(ellipse_distance(g, Eigen::Vector2d(0, 0)) == doctest::Approx(1.0));
  CHECK(ellipse_distance(g, Eigen::Vector2d(0, 2.5)) == doctest::Approx(1.5));
  CHECK(ellipse_distance(g, Eigen::Vector2d(2, 0)) ==
        doctest::Approx(0.0).epsilon(1e-12));
  // generic point: verify against dense sampling
  const Eigen::Vector2d p(1.3, 0.7);
  double best = 1e300;
  for (int k = 0; k < 200000; ++k) {
    const double phi = 2.0 * kPi * k / 200000.0;
    best = std::min(best,
                    (p - Eigen::Vector2d(2.0 * std::cos(phi), std::sin(phi)))
                        .norm());
  }
  CHECK(ellipse_distance(g, p) == doctest::Approx(best).epsilon(1e-6));

  const EllipseContainment inside = ellipse_containment(g, Eigen::Vector2d(1, 0.2));
  CHECK(inside.ratio < 1.0);
  const EllipseContainment outside =
      ellipse_containment(g, Eigen::Vector2d(2.2, 0.4));
  CHECK(outside.ratio > 1.0);

  // conjugate-diameter (sheared) presentation of the same containment
  EllipseParam sheared;
  sheared.center = Eigen::Vector2d(1, 1);
  sheared.u_axis = Eigen::Vector2d(1, 0.5);
  sheared.v_axis = Eigen::Vector2d(-0.3, 1.2);
  const EllipseGeometry gs = ellipse_geometry(sheared);
  for (double phi : {0.3, 1.1, 2.9}) {
    const Eigen::Vector2d on =
        sheared.center + std::cos(phi) * sheared.u_axis +
        std::sin(phi) * sheared.v_axis;
    CHECK(ellipse_distance(gs, on) < 1e-10);
    const EllipseContainment c = ellipse_containment(gs, on);
    CHECK(c.ratio == doctest::Approx(1.0).epsilon(1e-10));
  }

  // segment degeneration
  EllipseParam seg;
  seg.center = Eigen::Vector2d(0, 1);
  seg.u_axis = Eigen::Vector2d(1, 0);
  seg.v_axis = Eigen::Vector2d(0.5, 0);
  const EllipseGeometry sg = ellipse_geometry(seg);
  CHECK(sg.rank == 1);
  CHECK(sg.r1 == doctest::Approx(std::hypot(1.0, 0.5)));
  CHECK(ellipse_distance(sg, Eigen::Vector2d(0, 0)) == doctest::Approx(1.0));
  CHECK(ellipse_distance(sg, Eigen::Vector2d(3, 1)) ==
        doctest::Approx(3.0 - sg.r1));
}

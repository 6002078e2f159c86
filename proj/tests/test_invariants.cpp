#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curvatura/invariants.hpp"
#include "curvatura/verify.hpp"

using namespace curvatura;

namespace {

LocalQuadraticMap elliptic_example() {
  Eigen::Vector2d a(2, 2), b(2, 0), c(0.5, -0.5);
  return make_lqm(a, b, c);
}

LocalQuadraticMap r5_diag_example() {
  // Q1 = (1,0,-1), Q2 = (0,1,0), Q3 = (1,0,1)
  Eigen::Vector3d a(1, 0, 1), b(0, 1, 0), c(-1, 0, 1);
  return make_lqm(a, b, c);
}

}  // namespace

TEST_CASE("gauss form of the worked examples") {
  const GaussForm g = gauss_form(elliptic_example());
  CHECK(g.matrix(0, 0) == doctest::Approx(-3.0));
  CHECK(g.matrix(1, 1) == doctest::Approx(-1.0));
  CHECK(g.matrix(0, 1) == doctest::Approx(0.0));
  CHECK(g.eigenvalues[0] == doctest::Approx(-3.0));
  CHECK(g.eigenvalues[1] == doctest::Approx(-1.0));

  const GaussForm zero =
      gauss_form(make_lqm(Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(),
                          Eigen::Vector2d::Zero()));
  CHECK(zero.matrix.cwiseAbs().maxCoeff() == 0.0);
  CHECK(zero.eigenvalues.cwiseAbs().maxCoeff() == 0.0);

  const GaussForm g5 = gauss_form(r5_diag_example());
  Eigen::Matrix3d expect = Eigen::Vector3d(-1, -1, 1).asDiagonal();
  CHECK((g5.matrix - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("invariants of the elliptic example") {
  const Invariants inv = invariants_of(elliptic_example());
  CHECK(inv.K == doctest::Approx(-4.0));
  CHECK(inv.Delta == doctest::Approx(3.0));
  CHECK(*inv.N == doctest::Approx(-5.0));
  CHECK((inv.H - Eigen::Vector2d(1.25, 0.75)).norm() < 1e-14);
  CHECK(inv.focal[0] == doctest::Approx(-3.0));
  CHECK(inv.focal[1] == doctest::Approx(-1.0));
  CHECK(!inv.Acal);
  CHECK(!inv.tau);
}

TEST_CASE("invariants of the zero map vanish") {
  const Invariants inv = invariants_of(
      make_lqm(Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(),
               Eigen::Vector2d::Zero()));
  CHECK(inv.K == 0.0);
  CHECK(inv.Delta == 0.0);
  CHECK(*inv.N == 0.0);
  CHECK(inv.H.norm() == 0.0);
}

TEST_CASE("invariants of the codim-3 diagonal example") {
  const Invariants inv = invariants_of(r5_diag_example());
  CHECK(inv.K == doctest::Approx(-1.0));
  CHECK(inv.Delta == doctest::Approx(1.0));
  CHECK(*inv.Acal == doctest::Approx(-1.0));
  CHECK(*inv.tau == doctest::Approx(1.0));
  CHECK((inv.H - Eigen::Vector3d(0, 0, 1)).norm() < 1e-14);
  CHECK(inv.focal[0] == doctest::Approx(-1.0));
  CHECK(inv.focal[1] == doctest::Approx(-1.0));
  CHECK(inv.focal[2] == doctest::Approx(1.0));
  // N = sign(tau) |(A-C) x B| = |(2,0,0) x (0,1,0)| = 2
  CHECK(*inv.N == doctest::Approx(2.0));
  CHECK(inv.n_sign_known);
}

TEST_CASE("codim-1 is supported as the trivial case") {
  Eigen::VectorXd a(1), b(1), c(1);
  a << -1.0;
  b << 0.0;
  c << -1.0;
  const Invariants inv = invariants_of(make_lqm(a, b, c));
  CHECK(inv.K == doctest::Approx(1.0));  // ac - b^2
  CHECK(inv.focal[0] == doctest::Approx(1.0));
  CHECK(!inv.N);
}

TEST_CASE("indicatrix parametrization") {
  const EllipseParam e = indicatrix(elliptic_example());
  CHECK((e.center - Eigen::Vector2d(1.25, 0.75)).norm() < 1e-15);
  CHECK((e.u_axis - Eigen::Vector2d(0.75, 1.25)).norm() < 1e-15);
  CHECK((e.v_axis - Eigen::Vector2d(2, 0)).norm() < 1e-15);
  // E(theta + pi) = E(theta); double cover \hat E(u) = 2 phi(u)
  for (double theta : {0.1, 0.9, 2.2}) {
    CHECK((e.at(theta) - e.at(theta + 3.14159265358979323846)).norm() < 1e-12);
    const Eigen::VectorXd lhs = e.at(theta);
    const Eigen::VectorXd rhs = 2.0 * elliptic_example().phi(std::cos(theta),
                                                             std::sin(theta));
    CHECK((lhs - rhs).norm() < 1e-12);
  }

  const EllipseParam zero = indicatrix(
      make_lqm(Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(),
               Eigen::Vector2d::Zero()));
  CHECK(zero.center.norm() == 0.0);
  CHECK(zero.u_axis.norm() == 0.0);
  CHECK(zero.v_axis.norm() == 0.0);

  // umbilic: point ellipse off the origin
  Eigen::Vector2d h(1, 0);
  const EllipseParam umb = indicatrix(make_lqm(h, Eigen::Vector2d::Zero(), h));
  CHECK((umb.center - h).norm() == 0.0);
  CHECK(umb.u_axis.norm() == 0.0);
  CHECK(umb.v_axis.norm() == 0.0);
}

TEST_CASE("dGamma_perp and directional curvature") {
  const LocalQuadraticMap lqm = elliptic_example();
  Eigen::Vector2d n(1, 0);
  const Eigen::Matrix2d m = dGamma_perp(lqm, n);
  CHECK(m(0, 0) == doctest::Approx(2.0));
  CHECK(m(0, 1) == doctest::Approx(2.0));
  CHECK(m(1, 1) == doctest::Approx(0.5));
  CHECK(m.determinant() == doctest::Approx(-3.0));
  CHECK(m.determinant() ==
        doctest::Approx(2.0 * gauss_form(lqm).quad(Eigen::VectorXd(n))));

  const Eigen::Matrix2d m5 =
      dGamma_perp(r5_diag_example(), Eigen::Vector3d(0, 0, 1));
  CHECK((m5 - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-15);

  CHECK_THROWS_AS(dGamma_perp(lqm, Eigen::Vector2d(1, 1)),
                  std::invalid_argument);
}

TEST_CASE("normal section curvature equals the indicatrix point") {
  const LocalQuadraticMap lqm = elliptic_example();
  CHECK((normal_section_curvature(lqm, 0.0) - lqm.A).norm() < 1e-15);
  CHECK((normal_section_curvature(lqm, 1.5707963267948966) - lqm.C).norm() <
        1e-12);
  const Eigen::VectorXd quarter =
      normal_section_curvature(lqm, 0.78539816339744831);
  CHECK(quarter[0] == doctest::Approx(13.0 / 4.0));
  CHECK(quarter[1] == doctest::Approx(3.0 / 4.0));
}

TEST_CASE("N cross-check via the bracket trace holds on random maps") {
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    const LocalQuadraticMap lqm = verify::random_lqm(rng, 2);
    const Invariants inv = invariants_of(lqm);  // throws on mismatch
    const QuadForm2 br = poisson_bracket(lqm.component(0), lqm.component(1));
    CHECK(*inv.N == doctest::Approx(trace_form(br)).epsilon(1e-10));
  }
}

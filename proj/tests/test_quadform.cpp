#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curvatura/quadform.hpp"

using namespace curvatura;

// The worked codim-2 map used throughout: Q1 = (2, 2, 1/2), Q2 = (2, 0, -1/2).
static const QuadForm2 kQ1{2.0, 2.0, 0.5};
static const QuadForm2 kQ2{2.0, 0.0, -0.5};

TEST_CASE("psi inner product on reference forms") {
  CHECK(psi_inner(kQ1, kQ1) == doctest::Approx(-3.0).epsilon(1e-15));
  CHECK(psi_inner(axis_form(), axis_form()) == doctest::Approx(1.0));
  CHECK(psi_inner(kQ1, kQ2) == doctest::Approx(0.0).epsilon(1e-15));
  // symmetry and bilinearity spot checks
  const QuadForm2 q3{-1.0, 0.7, 0.3};
  CHECK(psi_inner(kQ1, q3) == doctest::Approx(psi_inner(q3, kQ1)));
  CHECK(psi_inner(kQ1 + kQ2, q3) ==
        doctest::Approx(psi_inner(kQ1, q3) + psi_inner(kQ2, q3)));
}

TEST_CASE("form evaluation carries the 1/2 normalization") {
  CHECK(kQ1.eval(1.0, 0.0) == doctest::Approx(1.0));   // a/2
  CHECK(kQ1.eval(0.0, 1.0) == doctest::Approx(0.25));  // c/2
  CHECK(kQ1.eval(1.0, 1.0) == doctest::Approx(0.5 * (2.0 + 4.0 + 0.5)));
}

TEST_CASE("poisson bracket") {
  const QuadForm2 br = poisson_bracket(kQ1, kQ2);
  CHECK(br.a == doctest::Approx(-4.0));
  CHECK(br.b == doctest::Approx(-1.0));
  CHECK(br.c == doctest::Approx(-1.0));
  // cross-checks against the worked example's invariants
  CHECK(psi_norm2(br) == doctest::Approx(3.0));   // Delta
  CHECK(trace_form(br) == doctest::Approx(-5.0)); // N

  const QuadForm2 self = poisson_bracket(kQ1, kQ1);
  CHECK(self.max_abs_coeff() == 0.0);

  const QuadForm2 w = poisson_bracket({1, 0, -1}, {0, 1, 0});
  CHECK(w.a == doctest::Approx(1.0));
  CHECK(w.b == doctest::Approx(0.0));
  CHECK(w.c == doctest::Approx(1.0));
}

TEST_CASE("trace equals twice the projection on the axis") {
  CHECK(trace_form({-4, -1, -1}) == doctest::Approx(-5.0));
  CHECK(trace_form(axis_form()) == doctest::Approx(2.0));
  CHECK(trace_form({0, 0, 0}) == 0.0);
  const QuadForm2 q{0.3, -1.2, 0.9};
  CHECK(trace_form(q) == doctest::Approx(2.0 * psi_inner(q, axis_form())));
}

TEST_CASE("cone position by sign of the squared pseudo-norm") {
  CHECK(cone_position({1, 0, 1}, 1e-12) == ConePosition::Inside);
  CHECK(cone_position({1, 0, -1}, 1e-12) == ConePosition::Outside);
  CHECK(cone_position({1, 1, 1}, 1e-12) == ConePosition::OnCone);
  CHECK_THROWS_AS(cone_position({1, 0, 1}, -1.0), std::invalid_argument);
}

TEST_CASE("projective conjugacy") {
  CHECK(conjugate_forms(kQ1, kQ2));
  CHECK(!conjugate_forms(axis_form(), axis_form()));
  CHECK(!conjugate_forms({1, 0, 0}, {0, 0, 1}));  // psi = 1/2
  // scale invariance of the relative tolerance
  CHECK(conjugate_forms(1000.0 * kQ1, 0.001 * kQ2));
  CHECK_THROWS_AS(conjugate_forms({0, 0, 0}, kQ1), std::invalid_argument);
}

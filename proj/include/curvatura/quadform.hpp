#pragma once

#include <cmath>

#include "curvatura/common.hpp"

namespace curvatura {

/// Binary quadratic form Q(s,t) = 1/2 (a s^2 + 2b st + c t^2), identified with
/// the point (a,b,c) of the pseudo-Euclidean 3-space of quadratic forms on R^2.
struct QuadForm2 {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double eval(double s, double t) const {
    return 0.5 * (a * s * s + 2.0 * b * s * t + c * t * t);
  }

  double max_abs_coeff() const {
    return std::max({std::abs(a), std::abs(b), std::abs(c)});
  }
};

inline QuadForm2 operator+(const QuadForm2& x, const QuadForm2& y) {
  return {x.a + y.a, x.b + y.b, x.c + y.c};
}
inline QuadForm2 operator-(const QuadForm2& x, const QuadForm2& y) {
  return {x.a - y.a, x.b - y.b, x.c - y.c};
}
inline QuadForm2 operator*(double k, const QuadForm2& x) {
  return {k * x.a, k * x.b, k * x.c};
}

/// Pseudo-scalar product (a1 c2 + a2 c1)/2 - b1 b2. Its null cone is the
/// discriminant cone ac - b^2 = 0.
double psi_inner(const QuadForm2& q1, const QuadForm2& q2);

/// Squared pseudo-norm ac - b^2.
double psi_norm2(const QuadForm2& q);

/// Poisson bracket 1/2 (f_s g_t - f_t g_s) of the two forms; antisymmetric,
/// bilinear, satisfies the Jacobi identity.
QuadForm2 poisson_bracket(const QuadForm2& q1, const QuadForm2& q2);

/// Tr Q = a + c = 2 <Q, W>_psi.
double trace_form(const QuadForm2& q);

/// The pseudo-unit vector generating and orienting the axis of the cone.
inline QuadForm2 axis_form() { return {1.0, 0.0, 1.0}; }

enum class ConePosition { Inside, OnCone, Outside };

const char* to_string(ConePosition p);

/// Position of Q relative to the discriminant cone, decided by the sign of
/// ||Q||^2_psi under the given tolerance.
ConePosition cone_position(const QuadForm2& q, double tol);

/// Projective conjugacy: |<Q1,Q2>_psi| <= tol * scale with scale the product
/// of the forms' max-abs coefficients. Throws std::invalid_argument when a
/// form is identically zero (conjugacy is undefined for the zero point).
bool conjugate_forms(const QuadForm2& q1, const QuadForm2& q2,
                     double tol = kDefaultTol);

}  // namespace curvatura

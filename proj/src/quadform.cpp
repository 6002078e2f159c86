#include "curvatura/quadform.hpp"

#include <stdexcept>

namespace curvatura {

double psi_inner(const QuadForm2& q1, const QuadForm2& q2) {
  return 0.5 * (q1.a * q2.c + q2.a * q1.c) - q1.b * q2.b;
}

double psi_norm2(const QuadForm2& q) { return q.a * q.c - q.b * q.b; }

QuadForm2 poisson_bracket(const QuadForm2& q1, const QuadForm2& q2) {
  return {q1.a * q2.b - q2.a * q1.b, 0.5 * (q1.a * q2.c - q2.a * q1.c),
          q1.b * q2.c - q2.b * q1.c};
}

double trace_form(const QuadForm2& q) { return q.a + q.c; }

const char* to_string(ConePosition p) {
  switch (p) {
    case ConePosition::Inside:
      return "Inside";
    case ConePosition::OnCone:
      return "OnCone";
    case ConePosition::Outside:
      return "Outside";
  }
  return "?";
}

ConePosition cone_position(const QuadForm2& q, double tol) {
  if (tol < 0.0) throw std::invalid_argument("cone_position: tol must be >= 0");
  const double n2 = psi_norm2(q);
  if (n2 > tol) return ConePosition::Inside;
  if (n2 < -tol) return ConePosition::Outside;
  return ConePosition::OnCone;
}

bool conjugate_forms(const QuadForm2& q1, const QuadForm2& q2, double tol) {
  const double s1 = q1.max_abs_coeff();
  const double s2 = q2.max_abs_coeff();
  if (s1 == 0.0 || s2 == 0.0)
    throw std::invalid_argument(
        "conjugate_forms: undefined for the zero form");
  return std::abs(psi_inner(q1, q2)) <= tol * s1 * s2;
}

}  // namespace curvatura

#pragma once

#include <cmath>

namespace curvatura {

/// Truncated bivariate Taylor scalar of total order 2: carries the value and
/// all partial derivatives up to second order through arithmetic and the
/// supported function set. Exact (up to rounding) for the whole function set;
/// no step-size tuning.
struct Taylor2 {
  double v = 0.0;
  double ds = 0.0, dt = 0.0;
  double dss = 0.0, dst = 0.0, dtt = 0.0;

  static Taylor2 constant(double x) { return {x, 0, 0, 0, 0, 0}; }
  static Taylor2 var_s(double x) { return {x, 1, 0, 0, 0, 0}; }
  static Taylor2 var_t(double x) { return {x, 0, 1, 0, 0, 0}; }
};

inline Taylor2 operator+(const Taylor2& f, const Taylor2& g) {
  return {f.v + g.v,     f.ds + g.ds,   f.dt + g.dt,
          f.dss + g.dss, f.dst + g.dst, f.dtt + g.dtt};
}

inline Taylor2 operator-(const Taylor2& f, const Taylor2& g) {
  return {f.v - g.v,     f.ds - g.ds,   f.dt - g.dt,
          f.dss - g.dss, f.dst - g.dst, f.dtt - g.dtt};
}

inline Taylor2 operator-(const Taylor2& f) {
  return {-f.v, -f.ds, -f.dt, -f.dss, -f.dst, -f.dtt};
}

inline Taylor2 operator*(const Taylor2& f, const Taylor2& g) {
  return {f.v * g.v,
          f.ds * g.v + f.v * g.ds,
          f.dt * g.v + f.v * g.dt,
          f.dss * g.v + 2.0 * f.ds * g.ds + f.v * g.dss,
          f.dst * g.v + f.ds * g.dt + f.dt * g.ds + f.v * g.dst,
          f.dtt * g.v + 2.0 * f.dt * g.dt + f.v * g.dtt};
}

inline Taylor2 operator*(double k, const Taylor2& f) {
  return {k * f.v, k * f.ds, k * f.dt, k * f.dss, k * f.dst, k * f.dtt};
}

// Chain rule through h with derivatives (h0, h1, h2) evaluated at f.v.
inline Taylor2 compose(const Taylor2& f, double h0, double h1, double h2) {
  return {h0,
          h1 * f.ds,
          h1 * f.dt,
          h2 * f.ds * f.ds + h1 * f.dss,
          h2 * f.ds * f.dt + h1 * f.dst,
          h2 * f.dt * f.dt + h1 * f.dtt};
}

inline Taylor2 reciprocal(const Taylor2& g) {
  const double iv = 1.0 / g.v;
  return compose(g, iv, -iv * iv, 2.0 * iv * iv * iv);
}

inline Taylor2 operator/(const Taylor2& f, const Taylor2& g) {
  return f * reciprocal(g);
}

inline Taylor2 sin(const Taylor2& f) {
  const double sv = std::sin(f.v), cv = std::cos(f.v);
  return compose(f, sv, cv, -sv);
}

inline Taylor2 cos(const Taylor2& f) {
  const double sv = std::sin(f.v), cv = std::cos(f.v);
  return compose(f, cv, -sv, -cv);
}

inline Taylor2 exp(const Taylor2& f) {
  const double ev = std::exp(f.v);
  return compose(f, ev, ev, ev);
}

inline Taylor2 sqrt(const Taylor2& f) {
  const double rv = std::sqrt(f.v);
  return compose(f, rv, 0.5 / rv, -0.25 / (rv * f.v));
}

inline Taylor2 log(const Taylor2& f) {
  const double iv = 1.0 / f.v;
  return compose(f, std::log(f.v), iv, -iv * iv);
}

inline Taylor2 pow_int(const Taylor2& f, int n) {
  if (n < 0) return reciprocal(pow_int(f, -n));
  Taylor2 acc = Taylor2::constant(1.0);
  Taylor2 base = f;
  int e = n;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

}  // namespace curvatura

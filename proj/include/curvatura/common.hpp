#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace curvatura {

// Error taxonomy shared across modules. The CLI maps these to exit codes.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

// sqrt/ln of non-positive argument, division by zero; carries the offending
// subexpression.
class DomainError : public std::runtime_error {
public:
  DomainError(const std::string& msg, std::string subexpr)
      : std::runtime_error(msg + " in '" + subexpr + "'"),
        subexpr_(std::move(subexpr)) {}
  const std::string& subexpression() const { return subexpr_; }

private:
  std::string subexpr_;
};

class ImmersionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operations that require det of the Gauss form to be nonzero.
class SingularError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Default relative tolerance for sign decisions; always applied against a
// problem-scale factor, never absolute-only.
constexpr double kDefaultTol = 1e-9;
// Default relative tolerance for rank/classification decisions.
constexpr double kClassifyTol = 1e-8;

// |lhs - rhs| measured against the magnitude of the quantities combined.
// `extra_scale` should carry the summand magnitudes when the identity involves
// cancellation (e.g. inner products of large vectors with small result).
inline double rel_err(double lhs, double rhs, double extra_scale = 0.0) {
  const double scale =
      std::max(1.0, std::abs(lhs) + std::abs(rhs) + std::abs(extra_scale));
  return std::abs(lhs - rhs) / scale;
}

// Deterministic RNG. std::mt19937_64 is fully specified by the standard and
// the uniform mapping is hand-rolled, so streams are identical across
// platforms for a given seed.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Coefficient distribution for randomized property runs.
  double coeff() { return uniform(-2.0, 2.0); }

  int index(int n) {
    return static_cast<int>(eng_() % static_cast<std::uint64_t>(n));
  }

private:
  std::mt19937_64 eng_;
};

}  // namespace curvatura

#pragma once

#include <limits>
#include <string>

namespace batchelor {

/// Increasing weight w : [0, inf) -> [1, inf] used by the flux bound.
///
/// Two kinds:
///   indicator(L):  w(s) = 2L on [0, L], +inf beyond; 1/w is exactly zero
///                  beyond L so no floating infinity ever enters a sum.
///   polynomial(q): w(s) = 2 (1+s)^q.
/// Exponents are capped at 64: (1+s)^q overflows double well before the
/// weight stops being representable, so larger q is rejected up front.
class Weight {
 public:
  enum class Kind { indicator, polynomial };

  static Weight indicator(double band);
  static Weight polynomial(double exponent);

  double operator()(double s) const;       // may return +inf (indicator kind)
  double inverse(double s) const;          // exact 0 where w = +inf
  bool finite_at(double s) const;

  /// True when the integral of 1/w over [0, inf) is <= 1/2 (indicator always;
  /// polynomial for q >= 2).
  bool integrable_half() const;

  Kind kind() const { return kind_; }
  double param() const { return param_; }
  std::string name() const;

 private:
  Weight(Kind kind, double param) : kind_(kind), param_(param) {}
  Kind kind_;
  double param_;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace batchelor

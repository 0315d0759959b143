#include "batchelor/weights.hpp"

#include <cmath>
#include <stdexcept>

namespace batchelor {

Weight Weight::indicator(double band) {
  if (!(band > 0.0)) throw std::invalid_argument("Weight::indicator: band must be > 0");
  return Weight(Kind::indicator, band);
}

Weight Weight::polynomial(double exponent) {
  if (exponent < 0.0 || exponent > 64.0)
    throw std::invalid_argument("Weight::polynomial: exponent must be in [0, 64]");
  return Weight(Kind::polynomial, exponent);
}

double Weight::operator()(double s) const {
  s = std::abs(s);
  if (kind_ == Kind::indicator) return s <= param_ ? 2.0 * param_ : kInfinity;
  return 2.0 * std::pow(1.0 + s, param_);
}

double Weight::inverse(double s) const {
  s = std::abs(s);
  if (kind_ == Kind::indicator) return s <= param_ ? 1.0 / (2.0 * param_) : 0.0;
  return 0.5 * std::pow(1.0 + s, -param_);
}

bool Weight::finite_at(double s) const {
  return kind_ == Kind::polynomial || std::abs(s) <= param_;
}

bool Weight::integrable_half() const {
  if (kind_ == Kind::indicator) return true;
  return param_ >= 2.0;
}

std::string Weight::name() const {
  if (kind_ == Kind::indicator) return "indicator(" + std::to_string(param_) + ")";
  return "poly(" + std::to_string(param_) + ")";
}

}  // namespace batchelor

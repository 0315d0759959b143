#include "batchelor/velocity.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace batchelor {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// splitmix64: counter-based phase/noise derivation for random access in t.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

class ZeroVelocity final : public VelocityModel {
 public:
  int band_limit() const override { return 0; }
  double amplitude() const override { return 0.0; }
  double period() const override { return 1.0; }
  std::vector<ModeCoeff> coefficients(double) const override { return {}; }
  std::optional<ShearSegment> shear_at(double t) const override {
    return ShearSegment{0, 0.0, 0.0, std::floor(t), std::floor(t) + 0.5};
  }
  std::string kind() const override { return "zero"; }
};

class Pierrehumbert final : public VelocityModel {
 public:
  Pierrehumbert(double amplitude, double period, std::uint64_t seed)
      : a_(amplitude), tau_(period), seed_(seed) {
    if (!(amplitude > 0.0)) throw std::invalid_argument("pierrehumbert: amplitude must be > 0");
    if (!(period > 0.0)) throw std::invalid_argument("pierrehumbert: period must be > 0");
  }

  int band_limit() const override { return 1; }
  double amplitude() const override { return a_; }
  double period() const override { return tau_; }

  std::vector<ModeCoeff> coefficients(double t) const override {
    const auto seg = segment(t);
    // A sin(2 pi x + theta) = (A/2i) e^{i theta} e^{2 pi i x} + c.c.
    const cdouble c = cdouble{0.0, -0.5 * a_} *
                      std::polar(1.0, seg.phase);
    std::vector<ModeCoeff> out;
    if (seg.axis == 0) {
      out.push_back({0, 1, c, 0.0});
      out.push_back({0, -1, std::conj(c), 0.0});
    } else {
      out.push_back({1, 0, 0.0, c});
      out.push_back({-1, 0, 0.0, std::conj(c)});
    }
    return out;
  }

  std::optional<ShearSegment> shear_at(double t) const override { return segment(t); }

  std::string kind() const override { return "pierrehumbert"; }

 private:
  ShearSegment segment(double t) const {
    // Times within 1e-9 * tau below a boundary resolve to the later segment.
    const double s = t / tau_ + 1e-9;
    const auto n = static_cast<std::int64_t>(std::floor(s));
    const bool first_half = (s - static_cast<double>(n)) < 0.5;
    const std::uint64_t base = splitmix64(seed_ ^ (0x51ed2701ULL + 2ULL * static_cast<std::uint64_t>(n)));
    const double theta2 = kTwoPi * uniform01(base);
    const double theta1 = kTwoPi * uniform01(splitmix64(base));
    const double t0 = static_cast<double>(n) * tau_;
    if (first_half) return ShearSegment{0, a_, theta2, t0, t0 + 0.5 * tau_};
    return ShearSegment{1, a_, theta1, t0 + 0.5 * tau_, t0 + tau_};
  }

  double a_;
  double tau_;
  std::uint64_t seed_;
};

class RandomBandFlow final : public VelocityModel {
 public:
  RandomBandFlow(int band, double decay, std::uint64_t seed, double amplitude)
      : band_(band), decay_(decay), amplitude_(amplitude), rng_(seed) {
    if (band < 1) throw std::invalid_argument("random_band_flow: band must be >= 1");
    if (!(amplitude > 0.0)) throw std::invalid_argument("random_band_flow: amplitude must be > 0");
    // Half lattice of active modes (k1 > 0, or k1 == 0 and k2 > 0).
    for (int k1 = 0; k1 <= band; ++k1)
      for (int k2 = (k1 == 0 ? 1 : -band); k2 <= band; ++k2) {
        const double r = std::hypot(static_cast<double>(k1), static_cast<double>(k2));
        if (r < 1.0 || r > static_cast<double>(band)) continue;
        Mode m;
        m.k1 = k1;
        m.k2 = k2;
        m.d1 = -k2 / r;  // k-perp / |k|
        m.d2 = k1 / r;
        m.sigma = std::pow(r, -decay);
        modes_.push_back(m);
      }
    // E|c| of a complex normal with E|c|^2 = sigma^2 is sigma sqrt(pi)/2;
    // both k and -k contribute to the l1 norm.
    double l1_mean = 0.0;
    for (const auto& m : modes_) l1_mean += 2.0 * m.sigma * std::sqrt(std::numbers::pi) / 2.0;
    const double scale = amplitude_ / l1_mean;
    for (auto& m : modes_) m.sigma *= scale;
    // Stationary initialization at lattice time 0.
    std::vector<cdouble> c0(modes_.size());
    for (std::size_t i = 0; i < modes_.size(); ++i) c0[i] = modes_[i].sigma * unit_normal();
    lattice_.push_back(std::move(c0));
  }

  int band_limit() const override { return band_; }
  double amplitude() const override { return amplitude_; }
  double period() const override { return kLatticeStep; }

  std::vector<ModeCoeff> coefficients(double t) const override {
    if (t < 0.0) throw std::invalid_argument("random_band_flow: t must be >= 0");
    const double s = t / kLatticeStep;
    const auto j = static_cast<std::size_t>(std::floor(s));
    const double alpha = s - static_cast<double>(j);
    extend_lattice(j + 1);
    std::vector<ModeCoeff> out;
    out.reserve(2 * modes_.size());
    for (std::size_t i = 0; i < modes_.size(); ++i) {
      const cdouble c =
          (1.0 - alpha) * lattice_[j][i] + alpha * lattice_[j + 1][i];
      const auto& m = modes_[i];
      // u_hat(k) = c * d, u_hat(-k) = -conj(c) * d keeps the field real.
      out.push_back({m.k1, m.k2, c * m.d1, c * m.d2});
      out.push_back({-m.k1, -m.k2, -std::conj(c) * m.d1, -std::conj(c) * m.d2});
    }
    return out;
  }

  std::string kind() const override { return "random_band"; }

 private:
  static constexpr double kLatticeStep = 1.0 / 32;
  static constexpr double kCorrTime = 1.0;

  struct Mode {
    int k1, k2;
    double d1, d2;
    double sigma;
  };

  cdouble unit_normal() const {
    std::normal_distribution<double> g(0.0, std::numbers::sqrt2 / 2.0);
    return {g(rng_), g(rng_)};
  }

  void extend_lattice(std::size_t upto) const {
    const double rho = std::exp(-kLatticeStep / kCorrTime);
    const double fresh = std::sqrt(1.0 - rho * rho);
    while (lattice_.size() <= upto) {
      const auto& prev = lattice_.back();
      std::vector<cdouble> next(modes_.size());
      for (std::size_t i = 0; i < modes_.size(); ++i)
        next[i] = rho * prev[i] + fresh * modes_[i].sigma * unit_normal();
      lattice_.push_back(std::move(next));
    }
  }

  int band_;
  double decay_;
  double amplitude_;
  std::vector<Mode> modes_;
  mutable std::mt19937_64 rng_;
  mutable std::vector<std::vector<cdouble>> lattice_;
};

}  // namespace

std::unique_ptr<VelocityModel> zero_velocity() { return std::make_unique<ZeroVelocity>(); }

std::unique_ptr<VelocityModel> pierrehumbert(double amplitude, double period,
                                             std::uint64_t seed) {
  return std::make_unique<Pierrehumbert>(amplitude, period, seed);
}

std::unique_ptr<VelocityModel> random_band_flow(int band, double spectrum_decay,
                                                std::uint64_t seed, double amplitude) {
  return std::make_unique<RandomBandFlow>(band, spectrum_decay, seed, amplitude);
}

double weighted_l1(const VelocityModel& u, double t, const Weight& w) {
  double acc = 0.0;
  for (const auto& m : u.coefficients(t)) {
    const double mag = std::sqrt(std::norm(m.u1) + std::norm(m.u2));
    if (mag == 0.0) continue;
    const double r = std::hypot(static_cast<double>(m.k1), static_cast<double>(m.k2));
    if (!w.finite_at(r)) return kInfinity;
    acc += w(r) * mag;
  }
  return acc;
}

double coeff_l1(const std::vector<ModeCoeff>& coeffs) {
  double acc = 0.0;
  for (const auto& m : coeffs) acc += std::sqrt(std::norm(m.u1) + std::norm(m.u2));
  return acc;
}

double divergence_defect(const std::vector<ModeCoeff>& coeffs) {
  double worst = 0.0;
  for (const auto& m : coeffs) {
    const cdouble dot = static_cast<double>(m.k1) * m.u1 + static_cast<double>(m.k2) * m.u2;
    worst = std::max(worst, std::abs(dot));
  }
  return worst;
}

}  // namespace batchelor

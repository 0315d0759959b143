#include "batchelor/spectral_field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace batchelor {

namespace {
constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;
}

SpectralField::SpectralField(std::shared_ptr<const WaveGrid> grid)
    : grid_(std::move(grid)), amp_(grid_->size(), cdouble{0.0, 0.0}) {}

void SpectralField::set_mode_pair(int k1, int k2, cdouble value) {
  if (k1 == 0 && k2 == 0)
    throw std::invalid_argument("SpectralField: the k = 0 amplitude is fixed to zero");
  if (!grid_->contains(k1, k2))
    throw std::invalid_argument("SpectralField: mode outside grid");
  amp_[grid_->index(k1, k2)] = value;
  amp_[grid_->index(-k1, -k2)] = std::conj(value);
}

void SpectralField::clear() { std::fill(amp_.begin(), amp_.end(), cdouble{0.0, 0.0}); }

SpectralField project_high(const SpectralField& f, double r) {
  SpectralField out(f.grid_ptr());
  const auto& grid = f.grid();
  auto dst = out.amplitudes();
  auto src = f.amplitudes();
  for (std::size_t i = 0; i < src.size(); ++i)
    if (grid.modulus(i) >= r) dst[i] = src[i];
  return out;
}

SpectralField project_low(const SpectralField& f, double r) {
  SpectralField out(f.grid_ptr());
  const auto& grid = f.grid();
  auto dst = out.amplitudes();
  auto src = f.amplitudes();
  for (std::size_t i = 0; i < src.size(); ++i)
    if (grid.modulus(i) < r) dst[i] = src[i];
  return out;
}

double l2_norm_sq(const SpectralField& f) {
  double acc = 0.0;
  for (const auto& a : f.amplitudes()) acc += std::norm(a);
  return acc;
}

double grad_norm_sq(const SpectralField& f) {
  const auto& grid = f.grid();
  auto amp = f.amplitudes();
  double acc = 0.0;
  for (std::size_t i = 0; i < amp.size(); ++i)
    acc += grid.mod_sq(i) * std::norm(amp[i]);
  return kFourPiSq * acc;
}

double hminus1_norm_sq(const SpectralField& f) {
  const auto& grid = f.grid();
  auto amp = f.amplitudes();
  const std::size_t zero = grid.index(0, 0);
  if (std::norm(amp[zero]) != 0.0)
    throw std::invalid_argument("hminus1_norm_sq: field has nonzero mean");
  double acc = 0.0;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if (i == zero) continue;
    acc += std::norm(amp[i]) / grid.mod_sq(i);
  }
  return acc / kFourPiSq;
}

double inner_product(const SpectralField& f, const SpectralField& g) {
  auto fa = f.amplitudes();
  auto ga = g.amplitudes();
  double acc = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i)
    acc += fa[i].real() * ga[i].real() + fa[i].imag() * ga[i].imag();
  return acc;
}

double hermitian_defect(const SpectralField& f) {
  const auto& grid = f.grid();
  const int n = grid.max_mode();
  double worst = 0.0;
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2) {
      const cdouble d = f.at(-k1, -k2) - std::conj(f.at(k1, k2));
      worst = std::max(worst, std::abs(d));
    }
  return worst;
}

double tail_mass_fraction(const SpectralField& f, double r) {
  const auto& grid = f.grid();
  auto amp = f.amplitudes();
  double tail = 0.0, total = 0.0;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const double m = std::norm(amp[i]);
    total += m;
    if (grid.modulus(i) >= r) tail += m;
  }
  return total > 0.0 ? tail / total : 0.0;
}

SpectralField random_band_field(std::shared_ptr<const WaveGrid> grid, double band,
                                std::mt19937_64& rng) {
  SpectralField f(grid);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = grid->max_mode();
  // Half lattice: k1 > 0, or k1 == 0 && k2 > 0; mirror closes symmetry.
  for (int k1 = 0; k1 <= n; ++k1) {
    for (int k2 = (k1 == 0 ? 1 : -n); k2 <= n; ++k2) {
      const double rad = std::sqrt(static_cast<double>(k1 * k1 + k2 * k2));
      if (rad < 1.0 || rad > band) continue;
      f.set_mode_pair(k1, k2, cdouble{gauss(rng), gauss(rng)});
    }
  }
  const double norm = l2_norm_sq(f);
  if (norm <= 0.0) throw std::invalid_argument("random_band_field: empty band");
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& a : f.amplitudes()) a *= scale;
  return f;
}

SpectralField cosine_mode_field(std::shared_ptr<const WaveGrid> grid, int k1, int k2) {
  SpectralField f(grid);
  // sqrt(2) cos(2 pi k.x) = (1/sqrt(2)) (e^{2 pi i k.x} + c.c.)
  f.set_mode_pair(k1, k2, cdouble{1.0 / std::sqrt(2.0), 0.0});
  return f;
}

}  // namespace batchelor

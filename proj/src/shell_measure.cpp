#include "batchelor/shell_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace batchelor {

ShellMeasure::ShellMeasure(std::vector<double> radii, std::vector<double> masses)
    : radii_(std::move(radii)), mass_(std::move(masses)) {
  if (radii_.size() != mass_.size())
    throw std::invalid_argument("ShellMeasure: radii/mass size mismatch");
  if (!std::is_sorted(radii_.begin(), radii_.end()))
    throw std::invalid_argument("ShellMeasure: radii must be ascending");
  for (double m : mass_)
    if (m < 0.0) throw std::invalid_argument("ShellMeasure: negative mass");
  build_prefix();
}

ShellMeasure ShellMeasure::from_shells(const WaveGrid& grid,
                                       std::span<const double> mass_per_shell) {
  if (static_cast<int>(mass_per_shell.size()) != grid.shell_count())
    throw std::invalid_argument("ShellMeasure: shell vector size mismatch");
  return ShellMeasure(grid.shell_radii(),
                      std::vector<double>(mass_per_shell.begin(), mass_per_shell.end()));
}

void ShellMeasure::build_prefix() {
  prefix_.assign(radii_.size() + 1, 0.0);
  for (std::size_t i = 0; i < radii_.size(); ++i) prefix_[i + 1] = prefix_[i] + mass_[i];
}

double ShellMeasure::total() const { return prefix_.empty() ? 0.0 : prefix_.back(); }

double ShellMeasure::mass_in(double lo, double hi) const {
  if (hi < lo || radii_.empty()) return 0.0;
  const auto first = std::lower_bound(radii_.begin(), radii_.end(), lo);
  const auto last = std::upper_bound(radii_.begin(), radii_.end(), hi);
  const auto i0 = static_cast<std::size_t>(first - radii_.begin());
  const auto i1 = static_cast<std::size_t>(last - radii_.begin());
  return prefix_[i1] - prefix_[i0];
}

double ShellMeasure::annulus_mass(double r, double h) const {
  if (!(h > 0.0)) throw std::invalid_argument("annulus_mass: h must be > 0");
  return mass_in(r, r + h);
}

ShellMeasure instantaneous_mass(const SpectralField& phi) {
  return ShellMeasure::from_shells(phi.grid(), shell_mass_vector(phi));
}

void shell_mass_vector(const SpectralField& phi, std::span<double> out) {
  const auto& grid = phi.grid();
  std::fill(out.begin(), out.end(), 0.0);
  auto amp = phi.amplitudes();
  for (std::size_t i = 0; i < amp.size(); ++i)
    out[grid.shell_of(i)] += std::norm(amp[i]);
}

std::vector<double> shell_mass_vector(const SpectralField& phi) {
  std::vector<double> out(phi.grid().shell_count());
  shell_mass_vector(phi, out);
  return out;
}

std::vector<double> shell_dissipation_vector(const SpectralField& phi) {
  const auto& grid = phi.grid();
  std::vector<double> out(grid.shell_count(), 0.0);
  auto amp = phi.amplitudes();
  constexpr double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;
  for (std::size_t i = 0; i < amp.size(); ++i)
    out[grid.shell_of(i)] += four_pi_sq * grid.mod_sq(i) * std::norm(amp[i]);
  return out;
}

double weight_convolve(const ShellMeasure& m, const Weight& w, double r) {
  double acc = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.mass(i) == 0.0) continue;
    acc += m.mass(i) * w.inverse(r - m.radius(i));
  }
  return acc;
}

}  // namespace batchelor

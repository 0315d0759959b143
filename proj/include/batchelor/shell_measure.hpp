#pragma once

#include <span>
#include <vector>

#include "batchelor/spectral_field.hpp"
#include "batchelor/weights.hpp"

namespace batchelor {

/// Atomic positive measure on radii.  Atoms live at the distinct |k| values
/// of a wavevector lattice (ascending); masses are nonnegative.
class ShellMeasure {
 public:
  ShellMeasure() = default;
  ShellMeasure(std::vector<double> radii, std::vector<double> masses);
  static ShellMeasure from_shells(const WaveGrid& grid,
                                  std::span<const double> mass_per_shell);

  std::size_t size() const { return radii_.size(); }
  double radius(std::size_t i) const { return radii_[i]; }
  double mass(std::size_t i) const { return mass_[i]; }
  const std::vector<double>& radii() const { return radii_; }
  const std::vector<double>& masses() const { return mass_; }

  double total() const;

  /// Mass of the closed annulus [r, r+h]; both endpoints included, so an atom
  /// exactly at r+h counts here and in the abutting annulus starting there.
  double annulus_mass(double r, double h) const;

  /// Mass of the closed interval [lo, hi].
  double mass_in(double lo, double hi) const;

 private:
  std::vector<double> radii_;
  std::vector<double> mass_;
  std::vector<double> prefix_;  // prefix_[i] = sum of mass_[0..i-1]
  void build_prefix();
};

/// Instantaneous mass measure of phi: atom at each occupied |k| with mass
/// sum_{|k| = rho} |phihat(k)|^2.
ShellMeasure instantaneous_mass(const SpectralField& phi);

/// Per-grid-shell |phihat|^2 sums (fast path used by trajectory loops).
void shell_mass_vector(const SpectralField& phi, std::span<double> out);
std::vector<double> shell_mass_vector(const SpectralField& phi);

/// Per-grid-shell 4 pi^2 |k|^2 |phihat|^2 sums (dissipation integrand, no nu).
std::vector<double> shell_dissipation_vector(const SpectralField& phi);

/// (1/w) * m (r) = sum_rho m(rho) / w(|r - rho|), with 1/inf = 0.
double weight_convolve(const ShellMeasure& m, const Weight& w, double r);

}  // namespace batchelor

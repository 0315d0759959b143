#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "batchelor/wave_grid.hpp"

namespace batchelor {

using cdouble = std::complex<double>;

/// A real-valued, mean-zero scalar on the 2-torus stored as Fourier
/// amplitudes over a WaveGrid, with the convention
///   f(x) = sum_k fhat(k) exp(2*pi*i k.x).
///
/// Invariants: fhat(-k) == conj(fhat(k)) and fhat(0) == 0.  The amplitude
/// array is freely mutable for speed; operations in this library preserve
/// both invariants and tests assert them.
class SpectralField {
 public:
  explicit SpectralField(std::shared_ptr<const WaveGrid> grid);

  const WaveGrid& grid() const { return *grid_; }
  std::shared_ptr<const WaveGrid> grid_ptr() const { return grid_; }

  cdouble at(int k1, int k2) const { return amp_[grid_->index(k1, k2)]; }
  cdouble operator[](std::size_t idx) const { return amp_[idx]; }

  std::span<cdouble> amplitudes() { return amp_; }
  std::span<const cdouble> amplitudes() const { return amp_; }

  /// Sets fhat(k) and fhat(-k) = conj(value) in one go.  Rejects k = 0.
  void set_mode_pair(int k1, int k2, cdouble value);

  void clear();

 private:
  std::shared_ptr<const WaveGrid> grid_;
  std::vector<cdouble> amp_;
};

/// Pi_{>=r}: zeroes amplitudes with |k| < r.  r <= 0 is the identity.
SpectralField project_high(const SpectralField& f, double r);
/// Pi_{<r} = identity - Pi_{>=r}.
SpectralField project_low(const SpectralField& f, double r);

double l2_norm_sq(const SpectralField& f);
double grad_norm_sq(const SpectralField& f);
/// Homogeneous H^{-1} seminorm squared; throws on fields with nonzero mean.
double hminus1_norm_sq(const SpectralField& f);

/// L^2 inner product <f, g> = sum_k fhat(k) conj(ghat(k)) (real part).
double inner_product(const SpectralField& f, const SpectralField& g);

/// Max |fhat(-k) - conj(fhat(k))| over the lattice.
double hermitian_defect(const SpectralField& f);

/// Fraction of |f|^2 mass at |k| >= r (truncation-tail monitor input).
double tail_mass_fraction(const SpectralField& f, double r);

/// Unit-normalized real random field supported on 1 <= |k| <= band.
SpectralField random_band_field(std::shared_ptr<const WaveGrid> grid, double band,
                                std::mt19937_64& rng);

/// g = sqrt(2) cos(2 pi k0.x): unit L^2 norm, modes at +-k0.
SpectralField cosine_mode_field(std::shared_ptr<const WaveGrid> grid, int k1, int k2);

}  // namespace batchelor

#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "batchelor/spectral_field.hpp"

namespace batchelor {

/// Smallest 2^a 3^b 5^c >= n (FFT-friendly size).
int next_fast_size(int n);

/// Minimum physical points per axis for alias-free products of a band-N
/// scalar against a band-L velocity: 2N + 2L + 1.
int alias_free_size(int max_mode, int band_limit);

/// Complex-to-complex FFT engine for one fixed physical grid size M x M.
/// Not copyable; create one per thread (plans are private to the instance,
/// planning itself is serialized globally).
class FourierTransform {
 public:
  explicit FourierTransform(int physical_size);
  ~FourierTransform();
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  int physical_size() const { return m_; }

  /// Samples f on the M x M lattice x_ij = (i/M, j/M), row-major.
  /// Requires M >= 2N+1; throws std::invalid_argument otherwise.
  void to_physical(const SpectralField& f, std::span<double> out);

  /// Inverse of to_physical for band-limited data.  The sampled mean must
  /// vanish (|mean| <= 1e-9 * (rms + 1)); the k = 0 bin is zeroed exactly.
  SpectralField to_spectral(std::span<const double> samples,
                            std::shared_ptr<const WaveGrid> grid);

  /// Raw padded-lattice access used by the pseudo-spectral product: the
  /// caller fills/reads the complex buffer in wrapped layout.
  std::span<cdouble> buffer();
  void execute_backward();  // e^{+2 pi i}, unnormalized
  void execute_forward();   // e^{-2 pi i}, unnormalized

  std::size_t wrapped_index(int k1, int k2) const;

 private:
  int m_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace batchelor

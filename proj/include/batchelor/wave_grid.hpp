#pragma once

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

namespace batchelor {

/// Truncated integer wavevector lattice {k in Z^2 : |k1|,|k2| <= N} with
/// precomputed Euclidean moduli and a shell decomposition by distinct |k|.
///
/// The lattice is closed under k -> -k by construction.  Shells are indexed
/// by the sorted list of distinct values of k1^2 + k2^2; shell radii are
/// sqrt of those integers, so |k| comparisons against shell boundaries are
/// exact up to one ulp of sqrt.
class WaveGrid {
 public:
  explicit WaveGrid(int max_mode);

  int max_mode() const { return n_; }
  int side() const { return 2 * n_ + 1; }
  std::size_t size() const { return static_cast<std::size_t>(side()) * side(); }

  bool contains(int k1, int k2) const {
    return k1 >= -n_ && k1 <= n_ && k2 >= -n_ && k2 <= n_;
  }

  std::size_t index(int k1, int k2) const {
    return static_cast<std::size_t>(k1 + n_) * side() +
           static_cast<std::size_t>(k2 + n_);
  }

  std::pair<int, int> mode(std::size_t idx) const {
    const int s = side();
    return {static_cast<int>(idx) / s - n_, static_cast<int>(idx) % s - n_};
  }

  /// Euclidean |k| of lattice site idx.
  double modulus(std::size_t idx) const { return modulus_[idx]; }
  /// k1^2 + k2^2 of lattice site idx (exact integer).
  int mod_sq(std::size_t idx) const { return mod_sq_[idx]; }

  int shell_count() const { return static_cast<int>(shell_radius_.size()); }
  int shell_of(std::size_t idx) const { return shell_of_[idx]; }
  double shell_radius(int shell) const { return shell_radius_[shell]; }
  int shell_mod_sq(int shell) const { return shell_mod_sq_[shell]; }

  const std::vector<double>& shell_radii() const { return shell_radius_; }

  /// Smallest shell index with radius >= r, or shell_count() if none.
  int first_shell_at_or_above(double r) const;

  static std::shared_ptr<const WaveGrid> create(int max_mode);

 private:
  int n_;
  std::vector<double> modulus_;
  std::vector<int> mod_sq_;
  std::vector<int> shell_of_;
  std::vector<double> shell_radius_;
  std::vector<int> shell_mod_sq_;
};

}  // namespace batchelor

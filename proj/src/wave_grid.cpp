#include "batchelor/wave_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace batchelor {

WaveGrid::WaveGrid(int max_mode) : n_(max_mode) {
  if (max_mode < 1) throw std::invalid_argument("WaveGrid: max_mode must be >= 1");
  const std::size_t total = size();
  modulus_.resize(total);
  mod_sq_.resize(total);
  shell_of_.resize(total);

  // Distinct values of k1^2+k2^2 present on the lattice.
  std::vector<char> present(static_cast<std::size_t>(2 * n_ * n_) + 1, 0);
  for (int k1 = -n_; k1 <= n_; ++k1) {
    for (int k2 = -n_; k2 <= n_; ++k2) {
      const int s = k1 * k1 + k2 * k2;
      const std::size_t idx = index(k1, k2);
      mod_sq_[idx] = s;
      modulus_[idx] = std::sqrt(static_cast<double>(s));
      present[s] = 1;
    }
  }
  std::vector<int> shell_lookup(present.size(), -1);
  for (std::size_t s = 0; s < present.size(); ++s) {
    if (present[s]) {
      shell_lookup[s] = static_cast<int>(shell_mod_sq_.size());
      shell_mod_sq_.push_back(static_cast<int>(s));
      shell_radius_.push_back(std::sqrt(static_cast<double>(s)));
    }
  }
  for (std::size_t idx = 0; idx < total; ++idx)
    shell_of_[idx] = shell_lookup[mod_sq_[idx]];
}

int WaveGrid::first_shell_at_or_above(double r) const {
  auto it = std::lower_bound(shell_radius_.begin(), shell_radius_.end(), r);
  return static_cast<int>(it - shell_radius_.begin());
}

std::shared_ptr<const WaveGrid> WaveGrid::create(int max_mode) {
  return std::make_shared<const WaveGrid>(max_mode);
}

}  // namespace batchelor

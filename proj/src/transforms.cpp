#include "batchelor/transforms.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace batchelor {

namespace {
// FFTW planning is not thread-safe; execution on private buffers is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

int next_fast_size(int n) {
  auto smooth = [](int v) {
    for (int p : {2, 3, 5})
      while (v % p == 0) v /= p;
    return v == 1;
  };
  while (!smooth(n)) ++n;
  return n;
}

int alias_free_size(int max_mode, int band_limit) {
  return 2 * max_mode + 2 * band_limit + 1;
}

struct FourierTransform::Impl {
  fftw_complex* buf = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

FourierTransform::FourierTransform(int physical_size)
    : m_(physical_size), impl_(std::make_unique<Impl>()) {
  if (m_ < 3) throw std::invalid_argument("FourierTransform: physical size too small");
  const std::size_t total = static_cast<std::size_t>(m_) * m_;
  impl_->buf = fftw_alloc_complex(total);
  std::lock_guard<std::mutex> lock(plan_mutex());
  // FFTW_ESTIMATE keeps plan selection deterministic across runs.
  impl_->forward = fftw_plan_dft_2d(m_, m_, impl_->buf, impl_->buf, FFTW_FORWARD,
                                    FFTW_ESTIMATE);
  impl_->backward = fftw_plan_dft_2d(m_, m_, impl_->buf, impl_->buf, FFTW_BACKWARD,
                                     FFTW_ESTIMATE);
}

FourierTransform::~FourierTransform() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  if (impl_->forward) fftw_destroy_plan(impl_->forward);
  if (impl_->backward) fftw_destroy_plan(impl_->backward);
  if (impl_->buf) fftw_free(impl_->buf);
}

std::span<cdouble> FourierTransform::buffer() {
  return {reinterpret_cast<cdouble*>(impl_->buf),
          static_cast<std::size_t>(m_) * m_};
}

void FourierTransform::execute_backward() { fftw_execute(impl_->backward); }
void FourierTransform::execute_forward() { fftw_execute(impl_->forward); }

std::size_t FourierTransform::wrapped_index(int k1, int k2) const {
  const int i = ((k1 % m_) + m_) % m_;
  const int j = ((k2 % m_) + m_) % m_;
  return static_cast<std::size_t>(i) * m_ + j;
}

void FourierTransform::to_physical(const SpectralField& f, std::span<double> out) {
  const auto& grid = f.grid();
  const int n = grid.max_mode();
  if (m_ < 2 * n + 1)
    throw std::invalid_argument("to_physical: physical grid undersized for band");
  auto buf = buffer();
  std::fill(buf.begin(), buf.end(), cdouble{0.0, 0.0});
  auto amp = f.amplitudes();
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2)
      buf[wrapped_index(k1, k2)] = amp[grid.index(k1, k2)];
  execute_backward();
  if (out.size() != buf.size())
    throw std::invalid_argument("to_physical: output span has wrong size");
  for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real();
}

SpectralField FourierTransform::to_spectral(std::span<const double> samples,
                                            std::shared_ptr<const WaveGrid> grid) {
  const int n = grid->max_mode();
  if (m_ < 2 * n + 1)
    throw std::invalid_argument("to_spectral: physical grid undersized for band");
  auto buf = buffer();
  if (samples.size() != buf.size())
    throw std::invalid_argument("to_spectral: sample span has wrong size");
  double rms = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    buf[i] = cdouble{samples[i], 0.0};
    rms += samples[i] * samples[i];
  }
  rms = std::sqrt(rms / static_cast<double>(samples.size()));
  execute_forward();
  const double scale = 1.0 / (static_cast<double>(m_) * m_);
  SpectralField f(grid);
  auto amp = f.amplitudes();
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2)
      amp[grid->index(k1, k2)] = buf[wrapped_index(k1, k2)] * scale;
  const std::size_t zero = grid->index(0, 0);
  if (std::abs(amp[zero]) > 1e-9 * (rms + 1.0))
    throw std::invalid_argument("to_spectral: samples have nonzero mean");
  amp[zero] = cdouble{0.0, 0.0};
  return f;
}

}  // namespace batchelor

#include "batchelor/evolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <set>
#include <stdexcept>

#include "batchelor/errors.hpp"
#include "batchelor/shell_measure.hpp"

namespace batchelor {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

int next_fast_even(int n) {
  n = next_fast_size(n);
  while (n % 2 != 0) n = next_fast_size(n + 1);
  return n;
}

// Band beyond which J_m(z) is below machine precision, with margin.
int bessel_band(double z) {
  z = std::abs(z);
  return static_cast<int>(std::ceil(z + 18.0 * std::cbrt(0.5 * z + 1.0) + 12.0));
}
}  // namespace

IntegratorSpec IntegratorSpec::make(Scheme scheme, double dt, const WaveGrid& grid,
                                    const VelocityModel& u, int dealias_pad) {
  if (!(dt > 0.0)) throw std::invalid_argument("IntegratorSpec: dt must be > 0");
  IntegratorSpec spec;
  spec.scheme = scheme;
  spec.dt = dt;
  const int L = u.band_limit();
  if (dealias_pad < 0)
    dealias_pad = std::max(L, (grid.max_mode() + 1) / 2);
  if (dealias_pad < L)
    throw std::invalid_argument("IntegratorSpec: dealias padding below velocity band");
  spec.dealias_pad = dealias_pad;
  if (scheme == Scheme::split_step_galerkin) {
    const double cfl = u.amplitude() * dt * grid.max_mode();
    if (cfl > 0.5 + 1e-12)
      throw std::invalid_argument(
          "IntegratorSpec: advective CFL number A*dt*N exceeds 0.5");
  }
  return spec;
}

// ---------------------------------------------------------------------------
// GalerkinEvaluator

GalerkinEvaluator::GalerkinEvaluator(std::shared_ptr<const WaveGrid> grid,
                                     int dealias_pad)
    : grid_(std::move(grid)),
      pad_(dealias_pad < 0 ? (grid_->max_mode() + 1) / 2 : dealias_pad),
      m_(next_fast_even(2 * grid_->max_mode() + 2 * pad_ + 1)),
      ft_(m_) {
  const std::size_t total = static_cast<std::size_t>(m_) * m_;
  u1_.resize(total);
  u2_.resize(total);
  d1_.resize(total);
  d2_.resize(total);
}

SpectralField GalerkinEvaluator::advection_rhs(const SpectralField& phi,
                                               const std::vector<ModeCoeff>& u) {
  return rhs(phi, u, 0.0);
}

SpectralField GalerkinEvaluator::rhs(const SpectralField& phi,
                                     const std::vector<ModeCoeff>& u, double nu) {
  const auto& grid = *grid_;
  const int n = grid.max_mode();
  for (const auto& m : u) {
    if (std::max(std::abs(m.k1), std::abs(m.k2)) > pad_)
      throw std::invalid_argument("GalerkinEvaluator: padding below velocity band");
  }

  auto buf = ft_.buffer();
  const double inv_mm = 1.0 / (static_cast<double>(m_) * m_);
  auto amp = phi.amplitudes();

  // d/dx1 phi and d/dx2 phi on the padded physical lattice.
  for (int pass = 0; pass < 2; ++pass) {
    std::fill(buf.begin(), buf.end(), cdouble{0.0, 0.0});
    for (int k1 = -n; k1 <= n; ++k1)
      for (int k2 = -n; k2 <= n; ++k2) {
        const cdouble a = amp[grid.index(k1, k2)];
        if (a == cdouble{0.0, 0.0}) continue;
        const double kk = static_cast<double>(pass == 0 ? k1 : k2);
        buf[ft_.wrapped_index(k1, k2)] = cdouble{0.0, kTwoPi * kk} * a;
      }
    ft_.execute_backward();
    auto& dst = pass == 0 ? d1_ : d2_;
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = buf[i].real();
  }

  // Velocity components on the same lattice.
  for (int pass = 0; pass < 2; ++pass) {
    std::fill(buf.begin(), buf.end(), cdouble{0.0, 0.0});
    for (const auto& m : u)
      buf[ft_.wrapped_index(m.k1, m.k2)] = pass == 0 ? m.u1 : m.u2;
    ft_.execute_backward();
    auto& dst = pass == 0 ? u1_ : u2_;
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = buf[i].real();
  }

  for (std::size_t i = 0; i < buf.size(); ++i)
    buf[i] = cdouble{u1_[i] * d1_[i] + u2_[i] * d2_[i], 0.0};
  ft_.execute_forward();

  SpectralField out(phi.grid_ptr());
  auto dst = out.amplitudes();
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2) {
      const std::size_t idx = grid.index(k1, k2);
      const cdouble conv = buf[ft_.wrapped_index(k1, k2)] * inv_mm;
      dst[idx] = -kFourPiSq * nu * grid.mod_sq(idx) * amp[idx] - conv;
    }
  dst[grid.index(0, 0)] = cdouble{0.0, 0.0};
  return out;
}

SpectralField galerkin_rhs_direct(const SpectralField& phi,
                                  const std::vector<ModeCoeff>& u, double nu) {
  const auto& grid = phi.grid();
  const int n = grid.max_mode();
  SpectralField out(phi.grid_ptr());
  auto dst = out.amplitudes();
  auto amp = phi.amplitudes();
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2) {
      cdouble acc{0.0, 0.0};
      for (const auto& m : u) {
        const int j1 = k1 - m.k1, j2 = k2 - m.k2;
        if (!grid.contains(j1, j2)) continue;
        const cdouble kdot =
            static_cast<double>(k1) * m.u1 + static_cast<double>(k2) * m.u2;
        acc += kdot * amp[grid.index(j1, j2)];
      }
      const std::size_t idx = grid.index(k1, k2);
      dst[idx] = -kFourPiSq * nu * grid.mod_sq(idx) * amp[idx] -
                 cdouble{0.0, kTwoPi} * acc;
    }
  dst[grid.index(0, 0)] = cdouble{0.0, 0.0};
  return out;
}

// ---------------------------------------------------------------------------
// Stepper

struct Stepper::RowFFT {
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  int rows = 0, len = 0;

  RowFFT(int rows_, int len_) : rows(rows_), len(len_) {
    buf = fftw_alloc_complex(static_cast<std::size_t>(rows) * len);
    std::lock_guard<std::mutex> lock(plan_mutex());
    int n[1] = {len};
    fwd = fftw_plan_many_dft(1, n, rows, buf, nullptr, 1, len, buf, nullptr, 1, len,
                             FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_many_dft(1, n, rows, buf, nullptr, 1, len, buf, nullptr, 1, len,
                             FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~RowFFT() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (buf) fftw_free(buf);
  }
  cdouble* row(int r) { return reinterpret_cast<cdouble*>(buf) + static_cast<std::size_t>(r) * len; }
};

Stepper::Stepper(std::shared_ptr<const WaveGrid> grid, const VelocityModel& u,
                 double nu, const IntegratorSpec& spec)
    : grid_(std::move(grid)), u_(u), nu_(nu), spec_(spec) {
  const int n = grid_->max_mode();
  if (spec_.scheme == IntegratorSpec::Scheme::split_step_galerkin) {
    eval_ = std::make_unique<GalerkinEvaluator>(grid_, spec_.dealias_pad);
  } else {
    const double delta_max = u_.amplitude() * spec_.dt;
    const int band = bessel_band(kTwoPi * n * delta_max);
    m2_ = next_fast_even(2 * n + 1 + band);
    rows_ = std::make_unique<RowFFT>(n, m2_);
    phase_.assign(static_cast<std::size_t>(n) * m2_, cdouble{0.0, 0.0});
    scratch_.resize(grid_->size());
  }
  diff_full_.resize(grid_->size());
  diff_half_.resize(grid_->size());
  for (std::size_t i = 0; i < grid_->size(); ++i) {
    const double lam = kFourPiSq * nu_ * grid_->mod_sq(i);
    diff_full_[i] = std::exp(-lam * spec_.dt);
    diff_half_[i] = std::exp(-lam * spec_.dt * 0.5);
  }
}

void Stepper::apply_diffusion(SpectralField& phi, int which_table) {
  const auto& table = which_table == 0 ? diff_full_ : diff_half_;
  auto amp = phi.amplitudes();
  if (diss_acc_) {
    auto& acc = *diss_acc_;
    for (std::size_t i = 0; i < amp.size(); ++i) {
      const double before = std::norm(amp[i]);
      amp[i] *= table[i];
      acc[grid_->shell_of(i)] += before - std::norm(amp[i]);
    }
  } else {
    for (std::size_t i = 0; i < amp.size(); ++i) amp[i] *= table[i];
  }
}

void Stepper::ensure_phase_table(const ShearSegment& seg) {
  const double delta = seg.amplitude * spec_.dt;
  if (phase_valid_ && phase_theta_ == seg.phase && phase_delta_ == delta) return;
  const int n = grid_->max_mode();
  for (int j = 0; j < m2_; ++j) {
    const double x = static_cast<double>(j) / m2_;
    const double base = -kTwoPi * delta * std::sin(kTwoPi * x + seg.phase);
    for (int k1 = 1; k1 <= n; ++k1)
      phase_[static_cast<std::size_t>(k1 - 1) * m2_ + j] =
          std::polar(1.0, base * k1);
  }
  phase_theta_ = seg.phase;
  phase_delta_ = delta;
  phase_valid_ = true;
}

void Stepper::shear_advect(SpectralField& phi, const ShearSegment& seg) {
  if (seg.amplitude == 0.0) return;
  ensure_phase_table(seg);
  const int n = grid_->max_mode();
  const int side = grid_->side();
  auto amp = phi.amplitudes();

  const bool transpose = seg.axis == 1;
  if (transpose) {
    // Vertical shear: swap axes so the convolved wavenumber axis is contiguous.
    for (int a = 0; a < side; ++a)
      for (int b = 0; b < side; ++b)
        scratch_[static_cast<std::size_t>(b) * side + a] =
            amp[static_cast<std::size_t>(a) * side + b];
    std::copy(scratch_.begin(), scratch_.end(), amp.begin());
  }

  auto wrap = [this](int k) { return ((k % m2_) + m2_) % m2_; };
  const double inv_m2 = 1.0 / m2_;

  std::vector<char> active(n + 1, 0);
  for (int k1 = 1; k1 <= n; ++k1) {
    const cdouble* src = &amp[grid_->index(k1, -n)];
    cdouble* row = rows_->row(k1 - 1);
    std::fill(row, row + m2_, cdouble{0.0, 0.0});
    bool any = false;
    for (int k2 = -n; k2 <= n; ++k2) {
      const cdouble a = src[k2 + n];
      if (a != cdouble{0.0, 0.0}) {
        row[wrap(k2)] = a;
        any = true;
      }
    }
    active[k1] = any;
  }

  fftw_execute(rows_->bwd);
  for (int k1 = 1; k1 <= n; ++k1) {
    if (!active[k1]) continue;
    cdouble* row = rows_->row(k1 - 1);
    const cdouble* ph = &phase_[static_cast<std::size_t>(k1 - 1) * m2_];
    for (int j = 0; j < m2_; ++j) row[j] *= ph[j];
  }
  fftw_execute(rows_->fwd);

  for (int k1 = 1; k1 <= n; ++k1) {
    if (!active[k1]) continue;
    cdouble* row = rows_->row(k1 - 1);
    cdouble* dst = &amp[grid_->index(k1, -n)];
    cdouble* mir = &amp[grid_->index(-k1, -n)];
    double before = 0.0, after = 0.0;
    for (int j = 0; j < m2_; ++j) before += std::norm(row[j]);
    before *= inv_m2 * inv_m2;
    for (int k2 = -n; k2 <= n; ++k2) {
      const cdouble v = row[wrap(k2)] * inv_m2;
      dst[k2 + n] = v;
      mir[n - k2] = std::conj(v);
      after += std::norm(v);
    }
    // Parseval per row: phase multiplication preserves the row norm, so the
    // difference is exactly the mass convolved past the grid edge.
    trunc_loss_ += 2.0 * (before - after);
  }

  if (transpose) {
    for (int a = 0; a < side; ++a)
      for (int b = 0; b < side; ++b)
        scratch_[static_cast<std::size_t>(b) * side + a] =
            amp[static_cast<std::size_t>(a) * side + b];
    std::copy(scratch_.begin(), scratch_.end(), amp.begin());
  }
}

void Stepper::rk4_advect(SpectralField& phi, double t) {
  const double dt = spec_.dt;
  const auto c0 = u_.coefficients(t);
  const auto cm = u_.coefficients(t + 0.5 * dt);
  const auto c1 = u_.coefficients(t + dt);

  SpectralField k1 = eval_->advection_rhs(phi, c0);
  SpectralField tmp(phi.grid_ptr());
  auto phi_a = phi.amplitudes();
  auto tmp_a = tmp.amplitudes();
  auto k1_a = k1.amplitudes();
  for (std::size_t i = 0; i < phi_a.size(); ++i)
    tmp_a[i] = phi_a[i] + 0.5 * dt * k1_a[i];
  SpectralField k2 = eval_->advection_rhs(tmp, cm);
  auto k2_a = k2.amplitudes();
  for (std::size_t i = 0; i < phi_a.size(); ++i)
    tmp_a[i] = phi_a[i] + 0.5 * dt * k2_a[i];
  SpectralField k3 = eval_->advection_rhs(tmp, cm);
  auto k3_a = k3.amplitudes();
  for (std::size_t i = 0; i < phi_a.size(); ++i)
    tmp_a[i] = phi_a[i] + dt * k3_a[i];
  SpectralField k4 = eval_->advection_rhs(tmp, c1);
  auto k4_a = k4.amplitudes();
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < phi_a.size(); ++i)
    phi_a[i] += w * (k1_a[i] + 2.0 * k2_a[i] + 2.0 * k3_a[i] + k4_a[i]);
}

void Stepper::step(SpectralField& phi, double t) {
  if (spec_.scheme == IntegratorSpec::Scheme::exact_shear_map) {
    const auto seg = u_.shear_at(t);
    if (!seg)
      throw std::invalid_argument("exact_shear_map requires a pure-shear velocity");
    if (t + spec_.dt > seg->t_end + 1e-9 * spec_.dt)
      throw std::invalid_argument("exact_shear_map: step straddles a shear segment");
    apply_diffusion(phi, 1);
    shear_advect(phi, *seg);
    apply_diffusion(phi, 1);
  } else {
    apply_diffusion(phi, 1);
    rk4_advect(phi, t);
    apply_diffusion(phi, 1);
  }
}

// ---------------------------------------------------------------------------
// Trajectory drivers

int snapped_steps(const VelocityModel& u, double T, double dt, double* dt_out) {
  if (!(T > 0.0)) throw std::invalid_argument("run: T must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("run: dt must be > 0");
  double dt_eff;
  if (const auto seg = u.shear_at(0.0)) {
    const double half = seg->t_end - seg->t_begin;
    const int sub = std::max(1, static_cast<int>(std::ceil(half / dt - 1e-9)));
    dt_eff = half / sub;
  } else {
    dt_eff = dt;
  }
  const auto steps = static_cast<long long>(std::llround(T / dt_eff));
  if (steps < 1 || std::abs(steps * dt_eff - T) > 1e-9 * std::max(1.0, T))
    throw std::invalid_argument(
        "run: T must be a whole number of (half-period-snapped) steps");
  if (dt_out) *dt_out = dt_eff;
  return static_cast<int>(steps);
}

TrajectoryRecord run_phi(const SpectralField& g, const VelocityModel& u, double nu,
                         double T, const IntegratorSpec& spec,
                         const TrajectoryOptions& opts, SpectralField* final_state) {
  const double norm = l2_norm_sq(g);
  if (std::abs(norm - 1.0) > 1e-9)
    throw std::invalid_argument("run_phi: g must have unit L2 norm");

  auto grid = g.grid_ptr();
  double dt;
  const int steps = snapped_steps(u, T, spec.dt, &dt);
  IntegratorSpec spec_eff = spec;
  spec_eff.dt = dt;

  Stepper stepper(grid, u, nu, spec_eff);
  TrajectoryRecord rec;
  rec.max_mode = grid->max_mode();
  rec.nu = nu;
  rec.T = T;
  rec.dt = dt;
  rec.start_time = opts.start_time;
  rec.velocity_kind = u.kind();
  const int shells = grid->shell_count();
  if (opts.integrate_shells) rec.mass_time_integral.assign(shells, 0.0);
  rec.dissipation_integral.assign(shells, 0.0);
  stepper.set_dissipation_accumulator(&rec.dissipation_integral);

  std::set<int> snaps(opts.snapshot_steps.begin(), opts.snapshot_steps.end());

  SpectralField phi = g;
  const double half_band = grid->max_mode() / 2.0;
  std::vector<double> shell_buf(shells);

  for (int n = 0; n <= steps; ++n) {
    const double t_rel = n * dt;
    shell_mass_vector(phi, shell_buf);
    if (opts.integrate_shells) {
      const double w = (n == 0 || n == steps) ? 0.5 * dt : dt;
      for (int s = 0; s < shells; ++s) rec.mass_time_integral[s] += w * shell_buf[s];
    }
    if (n % opts.sample_stride == 0 || n == steps) {
      rec.times.push_back(t_rel);
      rec.l2.push_back(l2_norm_sq(phi));
      rec.grad_sq.push_back(grad_norm_sq(phi));
      rec.hm1.push_back(hminus1_norm_sq(phi));
    }
    if (snaps.count(n)) {
      rec.snapshot_steps.push_back(n);
      rec.shell_snapshots.push_back(shell_buf);
    }
    if (n % opts.tail_check_stride == 0 || n == steps) {
      const double frac = tail_mass_fraction(phi, half_band);
      rec.max_tail_fraction = std::max(rec.max_tail_fraction, frac);
      if (frac > opts.tail_abort_fraction)
        throw ResolutionError("run_phi: truncation tail " + std::to_string(frac) +
                              " above threshold at t = " + std::to_string(t_rel));
    }
    if (n < steps) stepper.step(phi, opts.start_time + t_rel);
  }

  double dissipated = 0.0;
  for (double d : rec.dissipation_integral) dissipated += d;
  rec.energy_residual = l2_norm_sq(phi) + dissipated - 1.0;
  rec.advective_loss = stepper.advective_truncation_loss();
  if (final_state) *final_state = std::move(phi);
  return rec;
}

SpectralField run_forced_oracle(const SpectralField& g, const VelocityModel& u,
                                double nu, double T, const IntegratorSpec& spec,
                                std::mt19937_64& noise_rng, double forcing_scale,
                                const SpectralField* initial) {
  auto grid = g.grid_ptr();
  double dt;
  const int steps = snapped_steps(u, T, spec.dt, &dt);
  IntegratorSpec spec_eff = spec;
  spec_eff.dt = dt;
  Stepper stepper(grid, u, nu, spec_eff);

  SpectralField psi = initial ? *initial : SpectralField(grid);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto g_amp = g.amplitudes();
  const double root_dt = std::sqrt(dt);
  for (int n = 0; n < steps; ++n) {
    stepper.step(psi, n * dt);
    const double xi = gauss(noise_rng) * root_dt * forcing_scale;
    auto psi_amp = psi.amplitudes();
    if (xi != 0.0)
      for (std::size_t i = 0; i < psi_amp.size(); ++i) psi_amp[i] += xi * g_amp[i];
  }
  return psi;
}

}  // namespace batchelor

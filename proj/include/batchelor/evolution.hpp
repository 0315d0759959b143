#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "batchelor/spectral_field.hpp"
#include "batchelor/transforms.hpp"
#include "batchelor/velocity.hpp"

namespace batchelor {

/// Time integration scheme for the advection-diffusion scalar.
///
/// split_step_galerkin: Strang split, exact diffusion multiplier halves
/// around an RK4 substep on the pseudo-spectral advection term.
/// exact_shear_map: for pure-shear velocities only; the advection substep
/// applies the exact displacement map through its Fourier-space action
/// (a Jacobi-Anger band convolution, evaluated alias-free on a padded
/// mixed representation), composed with the exact diffusion multiplier.
struct IntegratorSpec {
  enum class Scheme { split_step_galerkin, exact_shear_map };

  Scheme scheme = Scheme::split_step_galerkin;
  double dt = 1.0 / 64;
  int dealias_pad = -1;  // modes per axis; -1 -> max(L, ceil(N/2))

  /// Validates dt and, for the split scheme, the advective CFL number
  /// amplitude * dt * N <= 0.5.  Resolves the default padding.
  static IntegratorSpec make(Scheme scheme, double dt, const WaveGrid& grid,
                             const VelocityModel& u, int dealias_pad = -1);
};

/// Pseudo-spectral evaluator of the Galerkin right-hand side
///   d phihat/dt (k) = -4 pi^2 nu |k|^2 phihat(k)
///                     - 2 pi i sum_j (k . uhat(k-j)) phihat(j),
/// truncated to the grid.  The product is formed on a zero-padded physical
/// grid, which reproduces the truncated convolution exactly for band-limited
/// velocities.  Throws if the padding cannot fit the velocity band.
class GalerkinEvaluator {
 public:
  GalerkinEvaluator(std::shared_ptr<const WaveGrid> grid, int dealias_pad);

  SpectralField rhs(const SpectralField& phi, const std::vector<ModeCoeff>& u,
                    double nu);
  /// Advection-only right-hand side (nu = 0).
  SpectralField advection_rhs(const SpectralField& phi,
                              const std::vector<ModeCoeff>& u);

  int physical_size() const { return m_; }
  int dealias_pad() const { return pad_; }

 private:
  std::shared_ptr<const WaveGrid> grid_;
  int pad_;
  int m_;
  FourierTransform ft_;
  std::vector<double> u1_, u2_, d1_, d2_;
};

/// Reference O(N^4) evaluation of the same right-hand side by direct double
/// sum; test oracle for the pseudo-spectral path.
SpectralField galerkin_rhs_direct(const SpectralField& phi,
                                  const std::vector<ModeCoeff>& u, double nu);

/// One-trajectory integration state.  Owns FFT plans and multiplier tables;
/// create one per thread.
class Stepper {
 public:
  Stepper(std::shared_ptr<const WaveGrid> grid, const VelocityModel& u, double nu,
          const IntegratorSpec& spec);

  /// Advances phi by one dt starting at time t (velocity clock time).
  /// exact_shear_map steps must not straddle a shear segment boundary.
  void step(SpectralField& phi, double t);

  /// When set, exact per-substep diffusion losses are accumulated per shell
  /// (units of energy; this is 2 nu int ||grad Pi_shell phi||^2 dt along the
  /// scheme, summed exactly over the diffusion substeps).
  void set_dissipation_accumulator(std::vector<double>* per_shell) {
    diss_acc_ = per_shell;
  }

  /// Cumulative l2 mass lost by the advection substeps (band truncation for
  /// the exact map; RK4 non-isometry is not included here).
  double advective_truncation_loss() const { return trunc_loss_; }

  double dt() const { return spec_.dt; }
  const IntegratorSpec& spec() const { return spec_; }

 private:
  void apply_diffusion(SpectralField& phi, int which_table);
  void shear_advect(SpectralField& phi, const ShearSegment& seg);
  void rk4_advect(SpectralField& phi, double t);
  void ensure_phase_table(const ShearSegment& seg);

  std::shared_ptr<const WaveGrid> grid_;
  const VelocityModel& u_;
  double nu_;
  IntegratorSpec spec_;
  std::unique_ptr<GalerkinEvaluator> eval_;  // split scheme only

  // Exact shear machinery: padded mixed-representation FFTs along one axis.
  int m2_ = 0;  // padded length of the convolved axis
  std::unique_ptr<FourierTransform> row_ft_;  // 1d transforms via plan_many
  struct RowFFT;
  std::unique_ptr<RowFFT> rows_;
  std::vector<cdouble> phase_;  // (N+1) x m2 table for k1 = 0..N
  double phase_theta_ = 0.0, phase_delta_ = 0.0;
  bool phase_valid_ = false;

  std::vector<double> diff_full_, diff_half_;  // e^{-4 pi^2 nu |k|^2 dt(/2)}
  std::vector<double>* diss_acc_ = nullptr;
  double trunc_loss_ = 0.0;
  std::vector<cdouble> scratch_;
};

/// Per-trajectory outputs: sampled scalar diagnostics, trapezoid-in-time
/// shell-mass integrals, exact per-shell dissipation totals, and optional
/// full shell snapshots at chosen steps.
struct TrajectoryRecord {
  int max_mode = 0;
  double nu = 0.0;
  double T = 0.0;
  double dt = 0.0;
  double start_time = 0.0;
  std::string velocity_kind;

  std::vector<double> times;
  std::vector<double> l2;
  std::vector<double> grad_sq;
  std::vector<double> hm1;

  std::vector<double> mass_time_integral;    // per grid shell
  std::vector<double> dissipation_integral;  // per grid shell, energy units

  std::vector<int> snapshot_steps;
  std::vector<std::vector<double>> shell_snapshots;

  double energy_residual = 0.0;  // |phi_T|^2 + dissipated - 1
  double advective_loss = 0.0;
  double max_tail_fraction = 0.0;
};

struct TrajectoryOptions {
  int sample_stride = 1;
  std::vector<int> snapshot_steps;   // in units of steps from 0
  double start_time = 0.0;           // velocity clock offset
  double tail_abort_fraction = 1e-8;
  int tail_check_stride = 8;
  bool integrate_shells = true;
};

/// Integrates the unforced scalar from phi_0 = g over [0, T].  Requires
/// ||g|| = 1 and mean zero; T must be a whole number of steps after dt is
/// snapped to divide the shear half-period.  Aborts (ResolutionError) if the
/// truncation tail monitor trips.
TrajectoryRecord run_phi(const SpectralField& g, const VelocityModel& u, double nu,
                         double T, const IntegratorSpec& spec,
                         const TrajectoryOptions& opts = {},
                         SpectralField* final_state = nullptr);

/// Euler-Maruyama-in-noise forced solve: psi_{n+1} = step(psi_n) + sqrt(dt) xi_n g
/// from psi_0 = 0 (or a caller-supplied state).  Used as a cross-check oracle.
SpectralField run_forced_oracle(const SpectralField& g, const VelocityModel& u,
                                double nu, double T, const IntegratorSpec& spec,
                                std::mt19937_64& noise_rng,
                                double forcing_scale = 1.0,
                                const SpectralField* initial = nullptr);

/// Steps per shear half-period after snapping (1 if the model has no shear
/// structure); exposed for callers that align sampling to period boundaries.
int snapped_steps(const VelocityModel& u, double T, double dt, double* dt_out);

}  // namespace batchelor

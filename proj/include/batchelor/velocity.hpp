#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "batchelor/weights.hpp"

namespace batchelor {

/// One active Fourier mode of a velocity field: u_hat(k) as a C^2 vector.
struct ModeCoeff {
  int k1, k2;
  std::complex<double> u1, u2;
};

/// Frozen-in-time pure shear valid on [t_begin, t_end):
///   axis == 0: u = (a sin(2 pi x2 + phase), 0)
///   axis == 1: u = (0, a sin(2 pi x1 + phase))
struct ShearSegment {
  int axis;
  double amplitude;
  double phase;
  double t_begin;
  double t_end;
};

/// Time-dependent divergence-free band-limited velocity on the 2-torus.
///
/// Coefficients at time t are a deterministic function of (seed, t); one
/// instance serves one trajectory (lazy internal state is not shared across
/// threads).  Realizations parallelize by constructing one model per seed.
class VelocityModel {
 public:
  virtual ~VelocityModel() = default;

  virtual int band_limit() const = 0;
  /// Amplitude scale X: |u_hat(k)| <= X/2-ish; used for CFL limits.
  virtual double amplitude() const = 0;
  /// Shift under which the law of t -> u_t is invariant (tau for the
  /// alternating shear, the OU lattice step for the random band flow).
  virtual double period() const = 0;

  virtual std::vector<ModeCoeff> coefficients(double t) const = 0;

  /// Non-null only while u_t is a pure shear (exact-map integrators).
  virtual std::optional<ShearSegment> shear_at(double t) const { return std::nullopt; }

  virtual std::string kind() const = 0;
};

/// Identically zero velocity (pure diffusion runs).  band_limit() == 0.
std::unique_ptr<VelocityModel> zero_velocity();

/// Alternating random-phase sine shears: on [n tau, n tau + tau/2) the flow is
/// (A sin(2 pi x2 + theta2_n), 0), on the second half (0, A sin(2 pi x1 + theta1_n)),
/// with phases i.i.d. uniform on [0, 2 pi) redrawn each period.
std::unique_ptr<VelocityModel> pierrehumbert(double amplitude, double period,
                                             std::uint64_t seed);

/// Stationary band-limited flow: each mode 0 < |k| <= band carries an
/// Ornstein-Uhlenbeck complex amplitude (stationary init, exact lattice
/// transitions, linear interpolation in between) directed along k-perp.
/// Stationary per-mode scale falls off like |k|^{-spectrum_decay} and the
/// overall scale is normalized so E ||u_hat||_l1 = amplitude.
std::unique_ptr<VelocityModel> random_band_flow(int band, double spectrum_decay,
                                                std::uint64_t seed,
                                                double amplitude = 1.0);

/// sum_k w(|k|) |u_hat_t(k)| with |.| the Euclidean magnitude of the C^2
/// coefficient.  Returns +inf when a mode with w = +inf is active.
double weighted_l1(const VelocityModel& u, double t, const Weight& w);

/// Unweighted l1 norm of the coefficients at time t.
double coeff_l1(const std::vector<ModeCoeff>& coeffs);

/// max_k |k . u_hat(k)| over active modes (divergence-free check).
double divergence_defect(const std::vector<ModeCoeff>& coeffs);

}  // namespace batchelor

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "batchelor/evolution.hpp"
#include "batchelor/velocity.hpp"
#include "batchelor/weights.hpp"

namespace batchelor {

struct SourceConfig {
  std::string kind = "single_mode";  // single_mode | random_band
  int k1 = 1, k2 = 0;
  double band = 3.0;
};

struct VelocityConfig {
  std::string kind = "pierrehumbert";  // zero | pierrehumbert | random_band
  double amplitude = 1.0;
  double period = 1.0;
  int band = 2;
  double spectrum_decay = 2.0;
};

struct IntegratorConfig {
  std::string scheme = "exact_shear_map";  // exact_shear_map | split_step_galerkin
  double dt = 1.0 / 16;
  int dealias_pad = -1;
};

struct RadiiConfig {
  int count = 64;
  double r_min = 1.0;
  double r_max = 0.0;  // 0 -> N - L
};

struct WeightsConfig {
  double indicator_band = -1.0;  // -1 -> velocity band, 0 -> disabled
  std::vector<double> polynomial_q = {2.0};
};

struct DensityConfig {
  double h = 2.0;
  std::vector<double> alpha = {0.01, 0.02, 0.05, 0.1, 0.2};
  double window_lo = 0.0;  // 0 -> max(N0, 8)
  double window_hi = 0.0;  // 0 -> D_nu / 2
  std::string tail_mode = "separate";  // separate | add
};

struct AuditConfig {
  bool enabled = false;
  int cadence = 10;
};

struct CrossCheckConfig {
  int forced_M = 0;
  double T = 8.0;
};

struct OutputConfig {
  std::string dir = "run_out";
  bool trajectories = true;
};

/// Full reproducible description of an ensemble run.  Parsed from an
/// INI-style file ([section] headers, key = value lines, '#' comments);
/// unknown sections or keys are rejected, as are ill-typed values.
struct ExperimentConfig {
  int N = 32;
  double nu = 1e-3;
  SourceConfig source;
  VelocityConfig velocity;
  IntegratorConfig integrator;
  double T = 10.0;
  int sample_stride = 1;
  int M = 1;
  std::uint64_t master_seed = 1;
  int workers = 0;  // 0 -> env BATCHELOR2D_WORKERS or hardware
  RadiiConfig radii;
  WeightsConfig weights;
  DensityConfig density;
  AuditConfig audit;
  CrossCheckConfig crosscheck;
  OutputConfig output;

  /// Structural checks: positivity, T a whole number of velocity periods,
  /// the resolution rule N >= nu^{-1/2} for advective runs, scheme/velocity
  /// compatibility.  Throws ConfigError or ResolutionError.
  void validate() const;

  /// Canonical serialization (fixed key order, round-trip exact floats);
  /// the config hash is the SHA-256 of this text.
  std::string canonical_text() const;

  std::shared_ptr<const WaveGrid> make_grid() const;
  SpectralField make_source(std::shared_ptr<const WaveGrid> grid) const;
  std::unique_ptr<VelocityModel> make_velocity(std::uint64_t realization) const;
  IntegratorSpec make_integrator(const WaveGrid& grid, const VelocityModel& u) const;
  std::vector<Weight> make_weights() const;
  std::vector<double> make_r_grid() const;
  int effective_workers() const;
};

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::vector<std::string>& overrides = {});
ExperimentConfig load_config_file(const std::string& path,
                                  const std::vector<std::string>& overrides = {});

}  // namespace batchelor

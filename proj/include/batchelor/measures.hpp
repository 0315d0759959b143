#pragma once

#include <span>
#include <vector>

#include "batchelor/evolution.hpp"
#include "batchelor/shell_measure.hpp"

namespace batchelor {

/// Certified upper envelope K_hat e^{-gamma_hat t} >= ensemble-mean H^{-1}
/// mass over the fit window [t0, t1] (and, as built here, over every sample).
struct MixingFit {
  double K_hat = 1.0;
  double gamma_hat = 0.0;
  double residual = 0.0;  // rms of log-residuals over the window
  double t0 = 0.0, t1 = 0.0;
};

/// Ensemble estimate of the asymptotic mass measure through the identity
/// m(E) = E int_0^inf m_t dt: per-trajectory trapezoid time integrals of the
/// instantaneous measure, averaged over independent realizations.
struct MassEstimate {
  ShellMeasure mean;
  std::vector<double> se;  // standard error per shell
  MixingFit fit;
  double tail_bound = 0.0;  // K_hat e^{-gamma_hat T} / gamma_hat
  double T = 0.0;
  int ensemble = 0;
};

/// Cumulative dissipation ledger: eps(r) = 2 nu E int ||Pi_{>=r} grad phi||^2 dt
/// as a nonincreasing step function on the grid shell radii.
struct DissipationScale {
  double D = 0.0;                // largest shell radius with eps >= 1/2
  double eps_total = 0.0;        // eps at r = 0 (should be ~1)
  std::vector<double> radii;
  std::vector<double> eps_cum;
};

/// Least-squares exponential fit on the ensemble-mean H^{-1} trajectory over
/// the window where the mean exceeds 100x its standard error, lifted to an
/// upper envelope over all samples.  Throws InvariantError when the window is
/// empty or no decay is observed.
MixingFit fit_mixing(std::span<const TrajectoryRecord> ensemble);

MassEstimate estimate_mass_measure(std::span<const TrajectoryRecord> ensemble,
                                   const WaveGrid& grid);

DissipationScale dissipation_scale(std::span<const TrajectoryRecord> ensemble,
                                   const WaveGrid& grid);

/// Smallest represented radius r >= 1 with ||Pi_{>=r} g||^2 <= 1/4.
double n_zero(const SpectralField& g);

struct Interval {
  double lo, hi;
};

/// Logarithmic density mu_{a,b}(E) = (1/log(b/a)) int_{E cap [a,b]} dr/r for
/// E a finite union of intervals (overlaps are merged).  Requires 0 < a < b.
double log_density(std::span<const Interval> set, double a, double b);

/// Trapezoid variant for indicator data on an r-grid.
double log_density_indicator(std::span<const double> r_grid,
                             std::span<const char> flags, double a, double b);

/// Exact-evaluation machinery: annulus mass m([r, r+h]) is piecewise constant
/// in r; these return the sub-broken intervals of [a, b] where the annulus is
/// under- (resp. over-) charged against alpha h / r.  An additive per-annulus
/// allowance widens the measured mass before the comparison (conservative
/// tail handling); 0 keeps the raw estimate.
std::vector<Interval> bad_set_intervals(const ShellMeasure& m, double h, double alpha,
                                        double a, double b, double mass_allowance = 0.0);
std::vector<Interval> overcharged_set_intervals(const ShellMeasure& m, double h,
                                                double alpha, double a, double b);

std::vector<char> bad_set_indicator(const ShellMeasure& m, double h, double alpha,
                                    std::span<const double> r_grid,
                                    double mass_allowance = 0.0);
std::vector<char> overcharged_set_indicator(const ShellMeasure& m, double h,
                                            double alpha,
                                            std::span<const double> r_grid);

/// Essential infimum of r m([r, r+h]) / h over [a, b]: the largest alpha at
/// which the undercharged set has zero logarithmic density.
double alpha_star(const ShellMeasure& m, double h, double a, double b);

/// Log-spaced grid of n points on [lo, hi].
std::vector<double> log_spaced(double lo, double hi, int n);

}  // namespace batchelor

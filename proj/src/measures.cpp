#include "batchelor/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "batchelor/errors.hpp"

namespace batchelor {

namespace {

void check_compatible(std::span<const TrajectoryRecord> ens) {
  if (ens.empty()) throw InvariantError("ensemble is empty");
  const auto& head = ens.front();
  for (const auto& r : ens) {
    if (r.max_mode != head.max_mode || r.nu != head.nu || r.dt != head.dt ||
        r.T != head.T || r.velocity_kind != head.velocity_kind ||
        r.times.size() != head.times.size())
      throw InvariantError("ensemble mixes incompatible trajectory configurations");
  }
}

struct MeanSe {
  double mean, se;
};

MeanSe mean_se(std::span<const double> xs) {
  const auto n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, 0.0};
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

}  // namespace

MixingFit fit_mixing(std::span<const TrajectoryRecord> ensemble) {
  check_compatible(ensemble);
  const auto& times = ensemble.front().times;
  const std::size_t nt = times.size();
  std::vector<double> mean(nt), se(nt);
  std::vector<double> buf(ensemble.size());
  for (std::size_t j = 0; j < nt; ++j) {
    for (std::size_t i = 0; i < ensemble.size(); ++i) buf[i] = ensemble[i].hm1[j];
    const auto ms = mean_se(buf);
    mean[j] = ms.mean;
    se[j] = ms.se;
  }

  // Fit window: samples whose mean stands 100 sigma above the Monte Carlo
  // noise floor.
  std::vector<std::size_t> window;
  for (std::size_t j = 0; j < nt; ++j)
    if (mean[j] > 0.0 && mean[j] > 100.0 * se[j]) window.push_back(j);
  if (window.size() < 2)
    throw InvariantError("fit_mixing: empty fit window (no mixing observed)");

  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (auto j : window) {
    const double y = std::log(mean[j]);
    st += times[j];
    sy += y;
    stt += times[j] * times[j];
    sty += times[j] * y;
  }
  const double n = static_cast<double>(window.size());
  const double denom = n * stt - st * st;
  if (denom <= 0.0) throw InvariantError("fit_mixing: degenerate time samples");
  const double slope = (n * sty - st * sy) / denom;
  const double intercept = (sy - slope * st) / n;
  MixingFit fit;
  fit.gamma_hat = -slope;
  if (!(fit.gamma_hat > 0.0))
    throw InvariantError("fit_mixing: no exponential decay observed");

  double rss = 0.0;
  for (auto j : window) {
    const double r = std::log(mean[j]) - (intercept + slope * times[j]);
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / n);
  fit.t0 = times[window.front()];
  fit.t1 = times[window.back()];

  // Lift to an upper envelope over every sample (not just the window) so the
  // reported pair certifies K e^{-gamma t} >= mean everywhere observed.
  double log_k = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < nt; ++j)
    if (mean[j] > 0.0)
      log_k = std::max(log_k, std::log(mean[j]) + fit.gamma_hat * times[j]);
  fit.K_hat = std::max(1.0, std::exp(log_k));
  return fit;
}

MassEstimate estimate_mass_measure(std::span<const TrajectoryRecord> ensemble,
                                   const WaveGrid& grid) {
  check_compatible(ensemble);
  const int shells = grid.shell_count();
  for (const auto& r : ensemble)
    if (static_cast<int>(r.mass_time_integral.size()) != shells)
      throw InvariantError("estimate_mass_measure: missing shell integrals");

  std::vector<double> mean(shells), se(shells);
  std::vector<double> buf(ensemble.size());
  for (int s = 0; s < shells; ++s) {
    for (std::size_t i = 0; i < ensemble.size(); ++i)
      buf[i] = ensemble[i].mass_time_integral[s];
    const auto ms = mean_se(buf);
    mean[s] = ms.mean;
    se[s] = ms.se;
  }

  MassEstimate est;
  est.mean = ShellMeasure::from_shells(grid, mean);
  est.se = std::move(se);
  est.fit = fit_mixing(ensemble);
  est.T = ensemble.front().T;
  est.ensemble = static_cast<int>(ensemble.size());
  est.tail_bound = est.fit.K_hat * std::exp(-est.fit.gamma_hat * est.T) / est.fit.gamma_hat;
  return est;
}

DissipationScale dissipation_scale(std::span<const TrajectoryRecord> ensemble,
                                   const WaveGrid& grid) {
  check_compatible(ensemble);
  const int shells = grid.shell_count();
  std::vector<double> mean(shells, 0.0);
  for (const auto& r : ensemble) {
    if (static_cast<int>(r.dissipation_integral.size()) != shells)
      throw InvariantError("dissipation_scale: missing dissipation integrals");
    for (int s = 0; s < shells; ++s) mean[s] += r.dissipation_integral[s];
  }
  for (auto& v : mean) v /= static_cast<double>(ensemble.size());

  DissipationScale out;
  out.radii = grid.shell_radii();
  out.eps_cum.assign(shells, 0.0);
  double acc = 0.0;
  for (int s = shells - 1; s >= 0; --s) {
    acc += mean[s];
    out.eps_cum[s] = acc;
  }
  out.eps_total = acc;
  if (out.eps_total < 0.5 + 0.01)
    throw ResolutionError(
        "dissipation_scale: total dissipated energy " + std::to_string(out.eps_total) +
        " too small; run under-resolved or horizon too short");
  out.D = 0.0;
  for (int s = shells - 1; s >= 0; --s)
    if (out.eps_cum[s] >= 0.5) {
      out.D = out.radii[s];
      break;
    }
  return out;
}

double n_zero(const SpectralField& g) {
  const auto& grid = g.grid();
  const auto mass = shell_mass_vector(g);
  const int shells = grid.shell_count();
  std::vector<double> suffix(shells + 1, 0.0);
  for (int s = shells - 1; s >= 0; --s) suffix[s] = suffix[s + 1] + mass[s];
  for (int s = 0; s < shells; ++s) {
    const double rho = grid.shell_radius(s);
    if (rho < 1.0) continue;
    if (suffix[s] <= 0.25) return rho;
  }
  throw InvariantError("n_zero: tail mass stays above 1/4 on the whole grid");
}

namespace {
std::vector<Interval> merge_intervals(std::vector<Interval> v) {
  std::sort(v.begin(), v.end(), [](auto& x, auto& y) { return x.lo < y.lo; });
  std::vector<Interval> out;
  for (const auto& iv : v) {
    if (!(iv.hi > iv.lo)) continue;
    if (!out.empty() && iv.lo <= out.back().hi)
      out.back().hi = std::max(out.back().hi, iv.hi);
    else
      out.push_back(iv);
  }
  return out;
}
}  // namespace

double log_density(std::span<const Interval> set, double a, double b) {
  if (!(0.0 < a && a < b)) throw std::invalid_argument("log_density: need 0 < a < b");
  auto merged = merge_intervals({set.begin(), set.end()});
  double acc = 0.0;
  for (const auto& iv : merged) {
    const double lo = std::max(iv.lo, a);
    const double hi = std::min(iv.hi, b);
    if (hi > lo) acc += std::log(hi / lo);
  }
  return acc / std::log(b / a);
}

double log_density_indicator(std::span<const double> r_grid,
                             std::span<const char> flags, double a, double b) {
  if (!(0.0 < a && a < b)) throw std::invalid_argument("log_density: need 0 < a < b");
  if (r_grid.size() != flags.size() || r_grid.size() < 2)
    throw std::invalid_argument("log_density_indicator: bad grid");
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < r_grid.size(); ++i) {
    const double lo = std::max(r_grid[i], a);
    const double hi = std::min(r_grid[i + 1], b);
    if (hi <= lo) continue;
    const double f0 = flags[i] ? 1.0 / r_grid[i] : 0.0;
    const double f1 = flags[i + 1] ? 1.0 / r_grid[i + 1] : 0.0;
    acc += 0.5 * (f0 + f1) * (hi - lo);
  }
  return acc / std::log(b / a);
}

namespace {

// Breakpoints of r -> m([r, r+h]) inside [a, b]: atoms enter at rho - h and
// leave after rho.
std::vector<double> annulus_breakpoints(const ShellMeasure& m, double h, double a,
                                        double b) {
  std::vector<double> pts{a, b};
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double rho = m.radius(i);
    if (rho > a && rho < b) pts.push_back(rho);
    if (rho - h > a && rho - h < b) pts.push_back(rho - h);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

std::vector<Interval> bad_set_intervals(const ShellMeasure& m, double h, double alpha,
                                        double a, double b, double mass_allowance) {
  if (!(h > 0.0) || !(alpha > 0.0))
    throw std::invalid_argument("bad_set: need h > 0 and alpha > 0");
  if (!(0.0 < a && a < b)) throw std::invalid_argument("bad_set: need 0 < a < b");
  const auto pts = annulus_breakpoints(m, h, a, b);
  std::vector<Interval> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double lo = pts[i], hi = pts[i + 1];
    const double mc = m.annulus_mass(0.5 * (lo + hi), h) + mass_allowance;
    if (mc == 0.0) {
      out.push_back({lo, hi});
      continue;
    }
    // m <= alpha h / r  <=>  r <= alpha h / m
    const double cut = alpha * h / mc;
    if (cut > lo) out.push_back({lo, std::min(hi, cut)});
  }
  return merge_intervals(std::move(out));
}

std::vector<Interval> overcharged_set_intervals(const ShellMeasure& m, double h,
                                                double alpha, double a, double b) {
  if (!(h > 0.0) || !(alpha > 0.0))
    throw std::invalid_argument("overcharged_set: need h > 0 and alpha > 0");
  if (!(0.0 < a && a < b))
    throw std::invalid_argument("overcharged_set: need 0 < a < b");
  const auto pts = annulus_breakpoints(m, h, a, b);
  std::vector<Interval> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double lo = pts[i], hi = pts[i + 1];
    const double mc = m.annulus_mass(0.5 * (lo + hi), h);
    if (mc == 0.0) continue;
    const double cut = alpha * h / mc;  // m >= alpha h / r  <=>  r >= cut
    if (cut < hi) out.push_back({std::max(lo, cut), hi});
  }
  return merge_intervals(std::move(out));
}

std::vector<char> bad_set_indicator(const ShellMeasure& m, double h, double alpha,
                                    std::span<const double> r_grid,
                                    double mass_allowance) {
  std::vector<char> out(r_grid.size(), 0);
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    const double r = r_grid[i];
    out[i] = (m.annulus_mass(r, h) + mass_allowance <= alpha * h / r) ? 1 : 0;
  }
  return out;
}

std::vector<char> overcharged_set_indicator(const ShellMeasure& m, double h,
                                            double alpha,
                                            std::span<const double> r_grid) {
  std::vector<char> out(r_grid.size(), 0);
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    const double r = r_grid[i];
    out[i] = (m.annulus_mass(r, h) >= alpha * h / r) ? 1 : 0;
  }
  return out;
}

double alpha_star(const ShellMeasure& m, double h, double a, double b) {
  if (!(h > 0.0)) throw std::invalid_argument("alpha_star: h must be > 0");
  if (!(0.0 < a && a < b)) throw std::invalid_argument("alpha_star: need 0 < a < b");
  const auto pts = annulus_breakpoints(m, h, a, b);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double lo = pts[i], hi = pts[i + 1];
    const double mc = m.annulus_mass(0.5 * (lo + hi), h);
    best = std::min(best, std::max(lo, a) * mc / h);
    if (best == 0.0) break;
  }
  return best;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (!(0.0 < lo && lo < hi) || n < 2)
    throw std::invalid_argument("log_spaced: need 0 < lo < hi and n >= 2");
  std::vector<double> out(n);
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[i] = lo * std::exp(step * i);
  out.back() = hi;
  return out;
}

}  // namespace batchelor

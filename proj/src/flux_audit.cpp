#include "batchelor/flux_audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "batchelor/errors.hpp"

namespace batchelor {

namespace {
constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;
}  // namespace

FluxAuditor::FluxAuditor(std::shared_ptr<const WaveGrid> grid, int dealias_pad)
    : grid_(grid), eval_(grid, dealias_pad) {}

std::vector<FluxRow> FluxAuditor::audit_step(const SpectralField& phi,
                                             const std::vector<ModeCoeff>& u,
                                             double nu, double t,
                                             std::span<const double> r_grid,
                                             std::span<const Weight> weights) {
  const auto& grid = *grid_;
  const int n = grid.max_mode();
  int band = 0;
  for (const auto& m : u)
    band = std::max({band, std::abs(m.k1), std::abs(m.k2)});
  const double r_margin = static_cast<double>(n - band);

  const double tail = tail_mass_fraction(phi, n / 2.0);
  const bool tail_ok = tail <= 1e-8;

  const SpectralField rhs = eval_.rhs(phi, u, nu);

  // Per-shell sums, then suffix accumulation over the sorted radius grid.
  const int shells = grid.shell_count();
  std::vector<double> ddt_shell(shells, 0.0), diss_shell(shells, 0.0);
  auto amp = phi.amplitudes();
  auto rhs_amp = rhs.amplitudes();
  std::vector<double> mag(amp.size());
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const int s = grid.shell_of(i);
    ddt_shell[s] += 2.0 * (amp[i].real() * rhs_amp[i].real() +
                           amp[i].imag() * rhs_amp[i].imag());
    diss_shell[s] += 2.0 * nu * kFourPiSq * grid.mod_sq(i) * std::norm(amp[i]);
    mag[i] = std::abs(amp[i]);
  }

  std::vector<double> sorted_r(r_grid.begin(), r_grid.end());
  std::sort(sorted_r.begin(), sorted_r.end());
  const std::size_t nr = sorted_r.size();

  // lhs(r) = suffix sums over shells with radius >= r.
  std::vector<double> lhs_ddt(nr, 0.0), lhs_diss(nr, 0.0);
  {
    std::vector<double> suf_ddt(shells + 1, 0.0), suf_diss(shells + 1, 0.0);
    for (int s = shells - 1; s >= 0; --s) {
      suf_ddt[s] = suf_ddt[s + 1] + ddt_shell[s];
      suf_diss[s] = suf_diss[s + 1] + diss_shell[s];
    }
    for (std::size_t i = 0; i < nr; ++i) {
      const int s = grid.first_shell_at_or_above(sorted_r[i]);
      lhs_ddt[i] = suf_ddt[s];
      lhs_diss[i] = suf_diss[s];
    }
  }

  // Bilinear sum for all radii in one sweep: the (k, j) term contributes to
  // exactly the radii in (|j|, |k|]; a difference array over the sorted grid
  // turns that into two binary searches per term.
  std::vector<double> diff(nr + 1, 0.0);
  const double phi_l2 = l2_norm_sq(phi);
  double u_l1 = 0.0;
  for (const auto& mode : u) {
    const double umag = std::sqrt(std::norm(mode.u1) + std::norm(mode.u2));
    u_l1 += umag;
    if (umag == 0.0) continue;
    for (int j1 = -n; j1 <= n; ++j1) {
      const int k1 = j1 + mode.k1;
      if (k1 < -n || k1 > n) continue;
      for (int j2 = -n; j2 <= n; ++j2) {
        const int k2 = j2 + mode.k2;
        if (k2 < -n || k2 > n) continue;
        const std::size_t ji = grid.index(j1, j2);
        const double mj = mag[ji];
        if (mj == 0.0) continue;
        const std::size_t ki = grid.index(k1, k2);
        const double mk = mag[ki];
        if (mk == 0.0) continue;
        const double rj = grid.modulus(ji);
        const double rk = grid.modulus(ki);
        if (rk <= rj) continue;  // needs |j| < r <= |k|
        // First grid radius > |j|, last grid radius <= |k|.
        const auto lo = std::upper_bound(sorted_r.begin(), sorted_r.end(), rj);
        const auto hi = std::upper_bound(sorted_r.begin(), sorted_r.end(), rk);
        if (lo == hi) continue;
        const double v = mk * umag * mj;
        diff[static_cast<std::size_t>(lo - sorted_r.begin())] += v;
        diff[static_cast<std::size_t>(hi - sorted_r.begin())] -= v;
      }
    }
  }
  std::vector<double> bilinear(nr, 0.0);
  double run = 0.0;
  for (std::size_t i = 0; i < nr; ++i) {
    run += diff[i];
    bilinear[i] = run;
  }

  const ShellMeasure m_t = instantaneous_mass(phi);
  const double tolerance = 1e-10 * (1.0 + phi_l2 * u_l1);

  std::vector<FluxRow> rows;
  rows.reserve(nr * weights.size());
  for (std::size_t i = 0; i < nr; ++i) {
    const double r = sorted_r[i];
    for (const auto& w : weights) {
      FluxRow row;
      row.t = t;
      row.r = r;
      row.weight = w.name();
      row.tolerance = tolerance;
      if (r > r_margin || !tail_ok) {
        row.status = FluxRow::Status::skipped;
        rows.push_back(std::move(row));
        continue;
      }
      row.lhs_derivative = lhs_ddt[i];
      row.lhs_dissipation = lhs_diss[i];
      row.rhs_bilinear = kFourPi * r * bilinear[i];
      double wl1 = 0.0;
      bool finite = true;
      for (const auto& mode : u) {
        const double umag = std::sqrt(std::norm(mode.u1) + std::norm(mode.u2));
        if (umag == 0.0) continue;
        const double kr = std::hypot(static_cast<double>(mode.k1),
                                     static_cast<double>(mode.k2));
        if (!w.finite_at(kr)) {
          finite = false;
          break;
        }
        wl1 += w(kr) * umag;
      }
      row.rhs_young =
          finite ? kFourPi * r * wl1 * weight_convolve(m_t, w, r) : kInfinity;
      row.slack_bilinear = row.rhs_bilinear - (row.lhs_derivative + row.lhs_dissipation);
      row.slack_young = row.rhs_young - row.rhs_bilinear;
      row.status = (row.slack_bilinear < -tolerance || row.slack_young < -tolerance)
                       ? FluxRow::Status::violation
                       : FluxRow::Status::pass;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

double FluxAuditor::bilinear_direct(const SpectralField& phi,
                                    const std::vector<ModeCoeff>& u, double r) {
  const auto& grid = phi.grid();
  const int n = grid.max_mode();
  double acc = 0.0;
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2) {
      const double rk = std::hypot(static_cast<double>(k1), static_cast<double>(k2));
      if (rk < r) continue;
      const double mk = std::abs(phi.at(k1, k2));
      if (mk == 0.0) continue;
      for (int j1 = -n; j1 <= n; ++j1)
        for (int j2 = -n; j2 <= n; ++j2) {
          const double rj = std::hypot(static_cast<double>(j1), static_cast<double>(j2));
          if (rj >= r) continue;
          cdouble uc1{0.0, 0.0}, uc2{0.0, 0.0};
          for (const auto& m : u)
            if (m.k1 == k1 - j1 && m.k2 == k2 - j2) {
              uc1 += m.u1;
              uc2 += m.u2;
            }
          const double umag = std::sqrt(std::norm(uc1) + std::norm(uc2));
          if (umag == 0.0) continue;
          acc += mk * umag * std::abs(phi.at(j1, j2));
        }
    }
  return acc;
}

namespace {
void fold_row(FluxSummary& s, const FluxRow& row) {
  if (row.status == FluxRow::Status::skipped) {
    ++s.skipped;
    return;
  }
  ++s.audited;
  if (row.status == FluxRow::Status::violation) ++s.violations;
  if (row.slack_bilinear < s.min_slack_bilinear) {
    s.min_slack_bilinear = row.slack_bilinear;
    s.min_at_t = row.t;
    s.min_at_r = row.r;
    s.min_at_weight = row.weight;
  }
  s.min_slack_young = std::min(s.min_slack_young, row.slack_young);
}

FluxSummary fresh_summary() {
  FluxSummary s;
  s.min_slack_bilinear = std::numeric_limits<double>::infinity();
  s.min_slack_young = std::numeric_limits<double>::infinity();
  return s;
}
}  // namespace

FluxSummary summarize_flux(std::span<const FluxRow> rows) {
  FluxSummary s = fresh_summary();
  for (const auto& row : rows) fold_row(s, row);
  return s;
}

AuditRunResult audit_trajectory(const SpectralField& g, const VelocityModel& u,
                                double nu, double T, const IntegratorSpec& spec,
                                int cadence, std::span<const double> r_grid,
                                std::span<const Weight> weights, bool keep_rows,
                                const std::function<void(const FluxRow&)>& sink) {
  if (cadence < 1) throw std::invalid_argument("audit_trajectory: cadence must be >= 1");
  auto grid = g.grid_ptr();
  double dt;
  const int steps = snapped_steps(u, T, spec.dt, &dt);
  IntegratorSpec spec_eff = spec;
  spec_eff.dt = dt;
  Stepper stepper(grid, u, nu, spec_eff);
  FluxAuditor auditor(grid, spec_eff.dealias_pad);

  AuditRunResult result;
  result.summary = fresh_summary();
  SpectralField phi = g;
  for (int n = 0; n <= steps; ++n) {
    if (n % cadence == 0 || n == steps) {
      const double t = n * dt;
      auto rows = auditor.audit_step(phi, u.coefficients(t), nu, t, r_grid, weights);
      for (auto& row : rows) {
        fold_row(result.summary, row);
        if (sink) sink(row);
        if (keep_rows) result.rows.push_back(std::move(row));
      }
    }
    if (n < steps) stepper.step(phi, n * dt);
  }
  return result;
}

}  // namespace batchelor

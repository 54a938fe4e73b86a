// Copyright 2026 The cvrealign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Critical-time root finding and the TMC / Bell-state critical-time tables.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "cvrealign/evolution.hpp"
#include "cvrealign/fock_oracle.hpp"

namespace cvrealign {

enum class CriticalTimeFlag {
  found,
  detected_throughout,   // still detected at t_max
  not_detected_at_start,
  non_monotone,          // margin changes sign more than once on the scan grid
};

inline std::string_view to_string(CriticalTimeFlag f) {
  switch (f) {
    case CriticalTimeFlag::found: return "found";
    case CriticalTimeFlag::detected_throughout: return "no_critical_time_before_t_max";
    case CriticalTimeFlag::not_detected_at_start: return "not_detected_at_t0";
    case CriticalTimeFlag::non_monotone: return "non_monotone_margin";
  }
  return "found";
}

struct CriticalTimeOptions {
  double t_max = 50.0;
  double tolerance = 1e-8;
  int scan_points = 64;
};

struct CriticalTime {
  double t = 0.0;
  CriticalTimeFlag flag = CriticalTimeFlag::found;
  int iterations = 0;
  double bracket_width = 0.0;
  /// max(|margin(lo)|, |margin(hi)|) after each bisection step.
  std::vector<double> endpoint_margins;
};

/// Bisection root of margin(t) on [0, t_max]. A margin that is positive at 0
/// and non-negative at t_max returns t_max with a flag, never a clamped root.
inline CriticalTime critical_time(const std::function<double(double)>& margin,
                                  const CriticalTimeOptions& opt = {}) {
  CriticalTime out;
  const double m0 = margin(0.0);
  if (!(m0 > 0.0)) {
    out.flag = CriticalTimeFlag::not_detected_at_start;
    return out;
  }
  // A margin that has decayed to exactly zero at t_max has not crossed.
  const double m_end = margin(opt.t_max);
  if (m_end >= 0.0) {
    out.t = opt.t_max;
    out.flag = CriticalTimeFlag::detected_throughout;
    return out;
  }

  int sign_changes = 0;
  bool prev = true;
  for (int i = 1; i <= opt.scan_points; ++i) {
    const bool now = margin(opt.t_max * i / opt.scan_points) > 0.0;
    if (now != prev) ++sign_changes;
    prev = now;
  }

  double lo = 0.0, hi = opt.t_max, mlo = m0, mhi = m_end;
  while (hi - lo > opt.tolerance) {
    const double mid = 0.5 * (lo + hi);
    const double mm = margin(mid);
    if (mm > 0.0) {
      lo = mid;
      mlo = mm;
    } else {
      hi = mid;
      mhi = mm;
    }
    ++out.iterations;
    out.endpoint_margins.push_back(std::max(std::abs(mlo), std::abs(mhi)));
  }
  out.t = 0.5 * (lo + hi);
  out.bracket_width = hi - lo;
  out.flag = sign_changes > 1 ? CriticalTimeFlag::non_monotone : CriticalTimeFlag::found;
  return out;
}

/// Runs body(i) for i in [0, n) on all hardware threads. Results must be
/// written to per-index slots so the output order is independent of scheduling.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  for (auto& t : pool) t.join();
}

/// sum_m m |C_m|^2 for Poisson amplitudes, by direct series summation.
inline double tmc_mean_photons(double lambda) {
  const double g = tmc_g(lambda);
  double term = 1.0, sum = 0.0;
  for (int m = 1; m < 100000; ++m) {
    term *= (lambda / m) * (lambda / m);
    sum += m * term;
    if (m > lambda && term < 1e-17 * (sum + 1.0)) break;
  }
  return sum / g;
}

inline std::string format_g12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

struct Fig1aRow {
  double n_tilde = 0.0;
  double lambda = 0.0;
  double n_mean = 0.0;
  CriticalTime critical;
};

/// Critical separable time of the TMC state from the closed-form criterion.
inline CriticalTime tmc_critical_time(double lambda, double n_tilde, const CriticalTimeOptions& opt = {}) {
  return critical_time([&](double t) { return tmc_criterion(lambda, channel_point(n_tilde, t)).margin; }, opt);
}

inline std::vector<Fig1aRow> fig1a_curve(const std::vector<double>& noise_levels,
                                         const std::vector<double>& lambda_grid,
                                         const CriticalTimeOptions& opt = {}) {
  std::vector<Fig1aRow> rows(noise_levels.size() * lambda_grid.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    Fig1aRow& row = rows[i];
    row.n_tilde = noise_levels[i / lambda_grid.size()];
    row.lambda = lambda_grid[i % lambda_grid.size()];
    row.n_mean = tmc_mean_photons(row.lambda);
    row.critical = tmc_critical_time(row.lambda, row.n_tilde, opt);
  });
  return rows;
}

inline void write_fig1a_csv(std::ostream& out, const std::vector<Fig1aRow>& rows) {
  out << "n_tilde,lambda,n_mean,t_critical,flag\n";
  for (const Fig1aRow& r : rows)
    out << format_g12(r.n_tilde) << ',' << format_g12(r.lambda) << ',' << format_g12(r.n_mean) << ','
        << format_g12(r.critical.t) << ',' << to_string(r.critical.flag) << '\n';
}

/// Bell coefficients on the real grid c0 in [0, 1], c1 = sqrt(1 - c0^2).
inline BellCoeffs bell_from_c0(double c0) {
  return {c0, std::sqrt(std::max(0.0, 1.0 - c0 * c0))};
}

inline CriticalTime bell_realignment_critical_time(const BellCoeffs& bc, double n_tilde,
                                                   const CriticalTimeOptions& opt = {}) {
  return critical_time([&](double t) { return bell_criterion(bc, channel_point(n_tilde, t)).margin; }, opt);
}

/// Critical time of an oracle-side quantity of the channel-evolved Bell state.
inline CriticalTime bell_oracle_critical_time(const BellCoeffs& bc, double n_tilde, int cutoff,
                                              const std::function<double(const FockOperator&)>& margin,
                                              const CriticalTimeOptions& opt = {}) {
  const FockOperator rho0 = bell_state(bc, cutoff);
  return critical_time([&](double t) { return margin(evolve_channel(rho0, channel_point(n_tilde, t))); }, opt);
}

inline CriticalTime bell_simon_critical_time(const BellCoeffs& bc, double n_tilde, int cutoff,
                                             const CriticalTimeOptions& opt = {}) {
  return bell_oracle_critical_time(
      bc, n_tilde, cutoff, [](const FockOperator& r) { return simon_criterion(r).margin; }, opt);
}

inline CriticalTime bell_trace_norm_critical_time(const BellCoeffs& bc, double n_tilde, int cutoff,
                                                  const CriticalTimeOptions& opt = {}) {
  return bell_oracle_critical_time(
      bc, n_tilde, cutoff,
      [](const FockOperator& r) { return realignment_report(r).trace_norm_ratio - 1.0; }, opt);
}

struct Fig1bRow {
  double c0 = 0.0;
  CriticalTime realign;
  CriticalTime simon;
};

inline std::vector<Fig1bRow> fig1b_curve(const std::vector<double>& c0_grid, double n_tilde, int cutoff,
                                         const CriticalTimeOptions& opt = {}) {
  std::vector<Fig1bRow> rows(c0_grid.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const BellCoeffs bc = bell_from_c0(c0_grid[i]);
    rows[i].c0 = c0_grid[i];
    rows[i].realign = bell_realignment_critical_time(bc, n_tilde, opt);
    rows[i].simon = bell_simon_critical_time(bc, n_tilde, cutoff, opt);
  });
  return rows;
}

inline void write_fig1b_csv(std::ostream& out, const std::vector<Fig1bRow>& rows) {
  out << "c0,t_realign,t_simon,flag_realign,flag_simon\n";
  for (const Fig1bRow& r : rows)
    out << format_g12(r.c0) << ',' << format_g12(r.realign.t) << ',' << format_g12(r.simon.t) << ','
        << to_string(r.realign.flag) << ',' << to_string(r.simon.flag) << '\n';
}

}  // namespace cvrealign

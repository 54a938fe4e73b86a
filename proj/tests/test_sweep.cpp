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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cvrealign/sweep.hpp"

namespace cvrealign {
namespace {

TEST(CriticalTime, LinearRoot) {
  const CriticalTime c = critical_time([](double t) { return 1.3 - t; });
  EXPECT_EQ(c.flag, CriticalTimeFlag::found);
  EXPECT_NEAR(c.t, 1.3, 1e-8);
  EXPECT_LE(c.bracket_width, 1e-8);
}

TEST(CriticalTime, EndpointMarginsShrink) {
  const CriticalTime c = critical_time([](double t) { return std::exp(-t) - 0.25; });
  ASSERT_GT(c.endpoint_margins.size(), 10u);
  for (std::size_t i = 1; i < c.endpoint_margins.size(); ++i)
    EXPECT_LE(c.endpoint_margins[i], c.endpoint_margins[i - 1] + 1e-15);
  EXPECT_NEAR(c.t, std::log(4.0), 1e-8);
}

TEST(CriticalTime, Flags) {
  EXPECT_EQ(critical_time([](double) { return -1.0; }).flag, CriticalTimeFlag::not_detected_at_start);
  const CriticalTime never = critical_time([](double) { return 1.0; });
  EXPECT_EQ(never.flag, CriticalTimeFlag::detected_throughout);
  EXPECT_EQ(never.t, 50.0);
  EXPECT_EQ(critical_time([](double t) { return std::cos(t) - t / 100 - 0.5; }).flag, CriticalTimeFlag::non_monotone);
}

TEST(CriticalTime, TmsvClosedForm) {
  // Zero noise: the TMSV criterion stays satisfied for all t.
  const CriticalTime c = critical_time([](double t) { return tmsv_criterion(0.5, channel_point(0.0, t)).margin; });
  EXPECT_EQ(c.flag, CriticalTimeFlag::detected_throughout);
  const CriticalTime n = critical_time([](double t) { return tmsv_criterion(0.5, channel_point(0.1, t)).margin; });
  EXPECT_EQ(n.flag, CriticalTimeFlag::found);
  EXPECT_NEAR(tmsv_criterion(0.5, channel_point(0.1, n.t)).lhs, 1.0, 1e-7);
}

TEST(TmcMeanPhotons, BelowLambda) {
  for (double l : {0.5, 1.0, 2.0, 3.0}) {
    const double n = tmc_mean_photons(l);
    EXPECT_LT(n, l);
    EXPECT_GT(n, 0.0);
  }
  // <n> = x g'(x) / (2 g(x)) with g = I0(2x): x I1(2x) / I0(2x).
  EXPECT_NEAR(tmc_mean_photons(1.2), 1.2 * std::cyl_bessel_i(1.0, 2.4) / std::cyl_bessel_i(0.0, 2.4), 1e-12);
}

TEST(TmcTable, OrderedByNoiseAndDeterministic) {
  const std::vector<double> noise{1e-5, 1e-3, 1e-1};
  const std::vector<double> grid{0.5, 1.5};
  const auto rows = fig1a_curve(noise, grid);
  ASSERT_EQ(rows.size(), 6u);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    EXPECT_GT(rows[k].critical.t, rows[2 + k].critical.t);
    EXPECT_GT(rows[2 + k].critical.t, rows[4 + k].critical.t);
  }
  std::ostringstream a, b;
  write_fig1a_csv(a, rows);
  write_fig1a_csv(b, fig1a_curve(noise, grid));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "n_tilde,lambda,n_mean,t_critical,flag");
}

TEST(BellTable, RealignmentAgainstOracle) {
  const BellCoeffs bc = bell_from_c0(1 / std::sqrt(2.0));
  const CriticalTime eq = bell_realignment_critical_time(bc, 0.1);
  const CriticalTime tr = bell_oracle_critical_time(
      bc, 0.1, 12, [](const FockOperator& r) { return realignment_report(r, false).trace_ratio - 1.0; });
  EXPECT_NEAR(eq.t, 0.93811688, 1e-6);
  EXPECT_NEAR(eq.t, tr.t, 1e-7);
}

TEST(BellTable, CsvShape) {
  const auto rows = fig1b_curve({0.3, 0.9}, 0.1, 8);
  std::ostringstream out;
  write_fig1b_csv(out, rows);
  const std::string s = out.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "c0,t_realign,t_simon,flag_realign,flag_simon");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 3);
  // Simon's test misses the Bell state at t = 0 when |c1| dominates.
  EXPECT_EQ(rows[0].simon.flag, CriticalTimeFlag::not_detected_at_start);
  EXPECT_EQ(rows[1].simon.flag, CriticalTimeFlag::found);
  EXPECT_EQ(rows[1].realign.flag, CriticalTimeFlag::found);
}

TEST(FormatG12, Stable) {
  EXPECT_EQ(format_g12(0.1), "0.1");
  EXPECT_EQ(format_g12(1.0 / 3.0), "0.333333333333");
}

}  // namespace
}  // namespace cvrealign

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
#include <random>

#include "cvrealign/criteria.hpp"
#include "cvrealign/fock_oracle.hpp"

namespace cvrealign {
namespace {

const std::vector<CoeffSeq>& nonnegative_sets() {
  static const std::vector<CoeffSeq> sets{{0.0, 1.0}, {1.0, 1.0}, {1.0, 0.5, 0.25}, {0.0, 0.0, 1.0}, {1.0, 2.0}};
  return sets;
}

TEST(SubtractionTmst, DetectedIffKernelEntangled) {
  for (double N : {0.0, 0.1, 0.5, 1.5})
    for (double r : {0.02, 0.1, 0.3, 0.6, 1.1})
      for (const CoeffSeq& A : nonnegative_sets()) {
        const TmstSubtractionVerdict v = subtraction_criterion_tmst(A, {N, r});
        EXPECT_NE(v.verdict.detected, v.kernel_separable) << "N=" << N << " r=" << r;
        EXPECT_TRUE(v.consistent);
        EXPECT_EQ(v.verdict.status, v.kernel_separable ? Status::separable : Status::entangled);
      }
}

TEST(SubtractionTmst, ImaginaryCoefficientsAlsoComplete) {
  for (double r : {0.2, 0.5, 0.8})
    EXPECT_TRUE(subtraction_criterion_tmst(CoeffSeq{1.0, Complex(0.0, 1.0)}, {0.0, r}).verdict.detected);
}

TEST(SubtractionTmst, NearBoundaryPositiveMargin) {
  for (double N : {0.0, 0.4, 2.0}) {
    const double r = 0.5 * std::log((2 * N + 1) / (1 - 1e-3));
    const auto v = subtraction_criterion_tmst(CoeffSeq{1.0, 1.0}, {N, r});
    EXPECT_TRUE(v.verdict.detected);
    EXPECT_GT(v.verdict.margin, 0.0);
    EXPECT_GT(v.verdict.diagnostics.at("tau"), 1.0);
  }
}

TEST(SubtractionTmst, RatioEqualsOracleTraceRatio) {
  for (auto [N, r] : {std::pair{0.0, 0.3}, {0.3, 0.2}, {0.5, 0.4}})
    for (const CoeffSeq& A : {CoeffSeq{1.0, 1.0}, CoeffSeq{1.0, Complex(0.2, -0.6), 0.3}}) {
      const CriterionVerdict v = subtraction_criterion_tmst(A, {N, r}).verdict;
      const RealignmentReport rep = realignment_report(apply_coherent_subtraction(tmst_fock({N, r}, 30), A), false);
      EXPECT_NEAR(v.lhs / v.rhs, rep.trace_ratio, 1e-6);
    }
}

// Pure kernel, destructive phase: the subtracted state sum_n c_n |nn> with
// sign-alternating c_n has Tr rho_R = (sum c_n)^2 < 1 although it is
// entangled. The criterion reports this as a completeness violation.
TEST(SubtractionTmst, DestructivePhaseOnPureKernelIsMissed) {
  const CoeffSeq A{1.0, -1.0};
  const TmstSubtractionVerdict v = subtraction_criterion_tmst(A, {0.0, 0.5});
  EXPECT_FALSE(v.kernel_separable);
  EXPECT_FALSE(v.verdict.detected);
  EXPECT_FALSE(v.consistent);
  EXPECT_EQ(v.verdict.status, Status::unresolved);
  ASSERT_EQ(v.verdict.flags.size(), 1u);
  EXPECT_EQ(v.verdict.flags[0], "completeness_violated");
  const RealignmentReport rep = realignment_report(apply_coherent_subtraction(tmst_fock({0.0, 0.5}, 30), A));
  EXPECT_LT(rep.trace_ratio, 1.0);
  EXPECT_GT(rep.trace_norm_ratio, 1.0);
}

TEST(SubtractionTmst, RejectsNegativeN) {
  EXPECT_THROW(subtraction_criterion_tmst(CoeffSeq{1.0, 1.0}, {-0.2, 0.3}), PreconditionError);
}

TEST(SubtractionBoundary, ReducedFormEqualsUnreducedDifference) {
  for (double c1 : {-0.1, -0.4, -0.9})
    for (double c2 : {0.2, -0.5, 1.3}) {
      const SymmetricKernelParams p = boundary_kernel(c1, c2);
      for (const CoeffSeq& A : {CoeffSeq{1.0, 1.0}, CoeffSeq{1.0, Complex(0.0, 1.0), -0.5}, CoeffSeq{0.3, 0.0, 1.0}}) {
        const CriterionVerdict v = subtraction_criterion_boundary(A, p);
        const double unreduced = v.diagnostics.at("unreduced_difference");
        EXPECT_NEAR(v.lhs, unreduced, 1e-10 * std::max(1.0, std::abs(unreduced)));
      }
    }
}

TEST(SubtractionBoundary, CoherentSetsDetected) {
  // f > 0 on (-1, 1) makes every B_mn > 0 term positive.
  const SymmetricKernelParams p = boundary_kernel(-0.3, 0.4);
  EXPECT_TRUE(subtraction_criterion_boundary(CoeffSeq{1.0, 1.0}, p).detected);
  EXPECT_TRUE(subtraction_criterion_boundary(CoeffSeq{1.0, 0.5, 0.25}, p).detected);
  EXPECT_FALSE(subtraction_criterion_boundary(CoeffSeq{0.0, 1.0}, p).detected);
}

TEST(SubtractionBoundary, Preconditions) {
  EXPECT_THROW(subtraction_criterion_boundary(CoeffSeq{1.0, 1.0}, {1.0, -0.3, 0.4}), PreconditionError);
  EXPECT_THROW(subtraction_criterion_boundary(CoeffSeq{1.0, 1.0}, boundary_kernel(-0.3, 0.0)), PreconditionError);
  EXPECT_THROW(subtraction_criterion_boundary(CoeffSeq{1.0, 1.0}, boundary_kernel(0.3, 0.4)), UnsupportedSignError);
}

TEST(AdditionBoundary, PhaseConditionDecidesTwoTermCase) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ph(-M_PI, M_PI);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = ph(rng), b = ph(rng);
    const int m = 1 + trial % 3, n = trial % 2 == 0 ? 0 : (m == 1 ? 2 : m - 1);
    std::vector<Complex> coeffs(std::max(m, n) + 1, 0.0);
    coeffs[m] = std::polar(0.7, a);
    coeffs[n] = std::polar(1.1, b);
    const auto v = addition_criterion_tmst_boundary(CoeffSeq(coeffs), boundary_kernel(-0.35, 0.0));
    EXPECT_EQ(v.detected, two_term_phase_condition(a, b)) << "trial " << trial;
  }
}

TEST(AdditionBoundary, OracleConfirmsDetection) {
  const SymmetricKernelParams p = boundary_kernel(-0.3, 0.0);
  const CoeffSeq A{1.0, Complex(0.6, 0.3)};
  ASSERT_TRUE(addition_criterion_tmst_boundary(A, p).detected);
  const RealignmentReport rep = realignment_report(apply_coherent_addition(tmst_fock(tmst_spec_from_params(p), 25), A));
  EXPECT_GT(rep.trace_norm_ratio, 1.0);
  EXPECT_FALSE(rep.tail_flagged);
}

TEST(AdditionBoundary, Preconditions) {
  EXPECT_THROW(addition_criterion_tmst_boundary(CoeffSeq{1.0, 1.0}, boundary_kernel(-0.3, 0.2)), PreconditionError);
  EXPECT_THROW(addition_criterion_tmst_boundary(CoeffSeq{1.0, 1.0}, {1.0, -0.3, 0.0}), PreconditionError);
  EXPECT_THROW(addition_criterion_tmst_boundary(CoeffSeq{1.0, 1.0}, {0.5, 0.0, 0.0}), PreconditionError);
}

TEST(BoundaryKernel, TauIsOne) {
  for (double c1 : {-0.1, -1.0})
    for (double c2 : {0.0, 0.7}) EXPECT_NEAR(tau(boundary_kernel(c1, c2)), 1.0, 1e-12);
}

}  // namespace
}  // namespace cvrealign

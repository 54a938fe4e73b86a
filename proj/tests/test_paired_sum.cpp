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

#include "cvrealign/paired_sum.hpp"
#include "cvrealign/paired_sum_oracle.hpp"

namespace cvrealign {
namespace {

TEST(Binomial, Pascal) {
  EXPECT_EQ(binomial(5, 2), 10.0);
  EXPECT_EQ(binomial(0, 0), 1.0);
  EXPECT_EQ(binomial(3, 5), 0.0);
  EXPECT_NEAR(binomial(60, 30), 1.1826458156486115e17, 1e3);
}

TEST(CoeffSeq, RejectsAllZero) { EXPECT_THROW(CoeffSeq({0.0, 0.0}), PreconditionError); }

TEST(CoeffSeq, ScaledAndAmplitudes) {
  const CoeffSeq A{1.0, 2.0, 0.5};
  const auto a = A.scaled();
  EXPECT_DOUBLE_EQ(a[2].real(), 1.0);
  const auto c = A.state_amplitudes();
  double n = 0;
  for (auto x : c) n += std::norm(x);
  EXPECT_NEAR(n, 1.0, 1e-15);
  EXPECT_TRUE(A.is_coherent());
  EXPECT_FALSE(CoeffSeq({0.0, 3.0}).is_coherent());
  const auto back = CoeffSeq::from_state_amplitudes(a);
  EXPECT_DOUBLE_EQ(back[2].real(), 0.5);
}

TEST(PairingSum, SingleTermIsVacuumPairing) {
  // A = {1}: only m = n = 0 contributes, value 1.
  EXPECT_NEAR(pairing_sum(CoeffSeq{1.0}, {0.3, 0.4, 0.5}).real(), 1.0, 1e-15);
  // A = {0, 1}: p^2 + q^2 + s^2.
  EXPECT_NEAR(pairing_sum(CoeffSeq{0.0, 1.0}, {0.3, 0.4, 0.5}).real(), 0.09 + 0.16 + 0.25, 1e-15);
}

TEST(PairingSum, MatchesPolynomialExpansionRandom) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Complex> a(1 + trial % 6);
    for (auto& x : a) x = {u(rng), u(rng)};
    const PairingWeights w{2 * u(rng), 2 * u(rng), 2 * u(rng)};
    const Complex fast = pairing_sum(CoeffSeq(a), w);
    const Complex slow = symbolic_pairing_oracle(CoeffSeq(a), w);
    EXPECT_LT(std::abs(fast - slow), 1e-10 * std::abs(slow)) << "trial " << trial;
  }
}

TEST(PairingSum, HermitianFormIsReal) {
  const CoeffSeq A{Complex(0.3, 0.2), Complex(-1.0, 0.5), Complex(0.0, 0.7)};
  EXPECT_NEAR(pairing_sum(A, {0.4, -0.9, 0.3}).imag(), 0.0, 1e-14);
}

TEST(PairingSum, OrderGuard) {
  std::vector<Complex> big(70, 0.0);
  big.back() = 1.0;
  EXPECT_THROW(pairing_sum(CoeffSeq(big), {0.1, 0.1, 0.0}), PreconditionError);
  EXPECT_NO_THROW(pairing_sum(CoeffSeq(big), {0.1, 0.1, 0.0}, 80));
}

TEST(Oracle, OrderGuard) {
  std::vector<Complex> big(kMaxOracleOrder + 2, 1.0);
  EXPECT_THROW(symbolic_pairing_oracle(CoeffSeq(big), {0.1, 0.1, 0.1}), PreconditionError);
}

TEST(FPoly, SmallCases) {
  for (double x : {-0.5, 0.25}) EXPECT_NEAR(f_poly(1, 0, x), 1.0 - x, 1e-15);
  for (double x : {-0.9, -0.3, 0.0, 0.5, 0.99}) {
    EXPECT_GT(f_poly(1, 0, x), 0.0);
    EXPECT_GT(f_poly(3, 1, x), 0.0);
  }
  EXPECT_NEAR(f_poly(2, 1, 1.0), 0.0, 1e-14);
}

TEST(FPositivity, ReportedGrid) {
  const PositivityReport rep = verify_f_positivity(20, 1e-2);
  EXPECT_TRUE(rep.all_positive());
  EXPECT_GT(rep.min_value, 0.0);
  EXPECT_EQ(rep.evaluations, 210L * 199L);
}

TEST(BCoeffs, SymmetricRealPart) {
  const CoeffSeq A{1.0, Complex(0.0, 1.0)};
  const MatXd B = b_coeffs(A);
  EXPECT_NEAR(B(1, 0), 0.0, 1e-15);
  const MatXd B2 = b_coeffs(CoeffSeq{1.0, -2.0});
  EXPECT_NEAR(B2(1, 0), -4.0, 1e-15);
}

}  // namespace
}  // namespace cvrealign

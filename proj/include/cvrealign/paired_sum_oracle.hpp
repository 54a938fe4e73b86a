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

// Brute-force check of pairing_sum: expands the exponential as a truncated
// polynomial in (xi1, xi2, eta1, eta2) and reads off mixed-derivative
// coefficients. Shares no code with the closed-form path.

#include <complex>
#include <vector>

#include "cvrealign/errors.hpp"
#include "cvrealign/paired_sum.hpp"

namespace cvrealign {

inline constexpr int kMaxOracleOrder = 8;

namespace detail {

// Dense coefficient array over exponents (e_xi1, e_xi2, e_eta1, e_eta2), each
// truncated at `cap`.
class Poly4 {
 public:
  explicit Poly4(int cap) : cap_(cap), stride_(cap + 1), c_(stride_ * stride_ * stride_ * stride_, 0.0) {}

  double& at(int a, int b, int c, int d) { return c_[((a * stride_ + b) * stride_ + c) * stride_ + d]; }
  double at(int a, int b, int c, int d) const {
    return c_[((a * stride_ + b) * stride_ + c) * stride_ + d];
  }
  int cap() const { return cap_; }

  // this * x_i x_j, where idx = (i, j) are variable slots 0..3.
  void add_times_monomial(const Poly4& src, double weight, int i, int j) {
    if (weight == 0.0) return;
    int e[4];
    for (e[0] = 0; e[0] <= cap_; ++e[0])
      for (e[1] = 0; e[1] <= cap_; ++e[1])
        for (e[2] = 0; e[2] <= cap_; ++e[2])
          for (e[3] = 0; e[3] <= cap_; ++e[3]) {
            const double v = src.at(e[0], e[1], e[2], e[3]);
            if (v == 0.0) continue;
            int f[4] = {e[0], e[1], e[2], e[3]};
            ++f[i];
            ++f[j];
            if (f[i] > cap_ || f[j] > cap_) continue;
            at(f[0], f[1], f[2], f[3]) += weight * v;
          }
  }

 private:
  int cap_;
  int stride_;
  std::vector<double> c_;
};

}  // namespace detail

/// Reference evaluation of pairing_sum for M <= 8 by polynomial expansion.
inline Complex symbolic_pairing_oracle(const CoeffSeq& A, const PairingWeights& w) {
  const int M = A.max_index();
  if (M > kMaxOracleOrder) throw PreconditionError("symbolic_pairing_oracle: order above 8");
  enum { XI1 = 0, XI2 = 1, ETA1 = 2, ETA2 = 3 };

  // exp(Q) = sum_j Q^j / j!, j <= 2M suffices because every monomial of
  // interest has total degree <= 4M and Q is homogeneous of degree 2.
  detail::Poly4 term(M);
  term.at(0, 0, 0, 0) = 1.0;
  detail::Poly4 sum = term;
  for (int j = 1; j <= 2 * M; ++j) {
    detail::Poly4 next(M);
    const double inv = 1.0 / j;
    next.add_times_monomial(term, w.p * inv, ETA1, XI1);
    next.add_times_monomial(term, w.p * inv, ETA2, XI2);
    next.add_times_monomial(term, w.q * inv, ETA1, ETA2);
    next.add_times_monomial(term, w.q * inv, XI1, XI2);
    next.add_times_monomial(term, w.s * inv, ETA1, XI2);
    next.add_times_monomial(term, w.s * inv, ETA2, XI1);
    term = next;
    for (int a = 0; a <= M; ++a)
      for (int b = 0; b <= M; ++b)
        for (int c = 0; c <= M; ++c)
          for (int d = 0; d <= M; ++d) sum.at(a, b, c, d) += term.at(a, b, c, d);
  }

  Complex total = 0.0;
  for (int m = 0; m <= M; ++m)
    for (int n = 0; n <= M; ++n) {
      const double fm = factorial(m), fn = factorial(n);
      const double deriv = sum.at(m, m, n, n) * fm * fm * fn * fn;
      total += A[m] * std::conj(A[n]) * deriv;
    }
  return total;
}

}  // namespace cvrealign

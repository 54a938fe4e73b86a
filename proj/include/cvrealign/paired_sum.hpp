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

// Evaluation of O exp[p(eta1 xi1 + eta2 xi2) + q(eta1 eta2 + xi1 xi2)
//                    + s(eta1 xi2 + eta2 xi1)],
// with O = sum_{m,n} A_m A_n* d^{2m+2n} / (dxi1^m dxi2^m deta1^n deta2^n) at 0.
// Every subtraction, addition and channel criterion reduces to one or two of
// these sums with different (p, q, s).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cvrealign/errors.hpp"
#include "cvrealign/linalg.hpp"

namespace cvrealign {

inline constexpr int kMaxBinomialOrder = 200;
inline constexpr int kDefaultMaxPairingOrder = 64;

namespace detail {

struct BinomialTable {
  std::vector<double> v;
  int n;
  explicit BinomialTable(int order) : v((order + 1) * (order + 1), 0.0), n(order + 1) {
    for (int i = 0; i <= order; ++i) {
      at(i, 0) = 1.0;
      for (int k = 1; k <= i; ++k) at(i, k) = at(i - 1, k - 1) + (k <= i - 1 ? at(i - 1, k) : 0.0);
    }
  }
  double& at(int i, int k) { return v[i * n + k]; }
  double at(int i, int k) const { return v[i * n + k]; }
};

inline const BinomialTable& binomials() {
  static const BinomialTable table(kMaxBinomialOrder);
  return table;
}

}  // namespace detail

/// C(n, k) from a Pascal table, n <= 200.
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (n > kMaxBinomialOrder) throw PreconditionError("binomial order above 200");
  return detail::binomials().at(n, k);
}

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Coefficients A_0..A_M of a symmetric coherent subtraction/addition operator.
class CoeffSeq {
 public:
  CoeffSeq() = default;

  explicit CoeffSeq(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
    if (std::none_of(coeffs_.begin(), coeffs_.end(), [](Complex c) { return c != 0.0; }))
      throw PreconditionError("coefficient sequence needs at least one nonzero entry");
  }

  CoeffSeq(std::initializer_list<Complex> coeffs) : CoeffSeq(std::vector<Complex>(coeffs)) {}

  /// Operator coefficients recovered from state amplitudes C_m via A_m = C_m / m!.
  static CoeffSeq from_state_amplitudes(std::span<const Complex> amplitudes) {
    std::vector<Complex> a(amplitudes.begin(), amplitudes.end());
    for (std::size_t m = 0; m < a.size(); ++m) a[m] /= factorial(static_cast<int>(m));
    return CoeffSeq(std::move(a));
  }

  const std::vector<Complex>& coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  int max_index() const { return static_cast<int>(coeffs_.size()) - 1; }
  Complex operator[](std::size_t m) const { return coeffs_[m]; }

  /// At least two nonzero entries.
  bool is_coherent() const {
    return std::count_if(coeffs_.begin(), coeffs_.end(), [](Complex c) { return c != 0.0; }) >= 2;
  }

  double phase(std::size_t m) const { return std::arg(coeffs_[m]); }

  /// a_m = m! A_m, the amplitude of |mm> produced from the vacuum.
  std::vector<Complex> scaled() const {
    std::vector<Complex> a(coeffs_);
    for (std::size_t m = 0; m < a.size(); ++m) a[m] *= factorial(static_cast<int>(m));
    return a;
  }

  /// C_m = m! A_m / sqrt(sum_n |n! A_n|^2).
  std::vector<Complex> state_amplitudes() const {
    std::vector<Complex> c = scaled();
    double norm2 = 0.0;
    for (const Complex& x : c) norm2 += std::norm(x);
    const double inv = 1.0 / std::sqrt(norm2);
    for (Complex& x : c) x *= inv;
    return c;
  }

 private:
  std::vector<Complex> coeffs_{1.0};
};

/// Same-mode cross weight p, within-side weight q, exchange weight s.
struct PairingWeights {
  double p = 0.0;
  double q = 0.0;
  double s = 0.0;
};

/// The pairing sum with the factorials folded into the amplitudes a_m = m! A_m.
/// The remaining combinatorial weight is a product of two trinomials, each
/// bounded by 3^m, so orders up to 64 stay well inside double range.
inline Complex pairing_sum_scaled(std::span<const Complex> a, const PairingWeights& w,
                                  int max_order = kDefaultMaxPairingOrder) {
  const int M = static_cast<int>(a.size()) - 1;
  if (M > max_order)
    throw PreconditionError("coefficient order " + std::to_string(M) + " exceeds max order " +
                            std::to_string(max_order));
  std::vector<double> q_pow(2 * M + 1), p2_pow(M + 1), s2_pow(M + 1);
  for (int i = 0; i <= 2 * M; ++i) q_pow[i] = ipow(w.q, i);
  for (int i = 0; i <= M; ++i) {
    p2_pow[i] = ipow(w.p * w.p, i);
    s2_pow[i] = ipow(w.s * w.s, i);
  }
  Complex total = 0.0;
  for (int m = 0; m <= M; ++m) {
    if (a[m] == 0.0) continue;
    for (int n = 0; n <= M; ++n) {
      if (a[n] == 0.0) continue;
      const int lo = std::min(m, n);
      double acc = 0.0;
      for (int k = 0; k <= lo; ++k) {
        const double ck = binomial(m, k) * binomial(n, k) * s2_pow[k];
        if (ck == 0.0) continue;
        double inner = 0.0;
        for (int l = 0; l <= lo - k; ++l)
          inner += binomial(m - k, l) * binomial(n - k, l) * q_pow[m + n - 2 * k - 2 * l] * p2_pow[l];
        acc += ck * inner;
      }
      total += a[m] * std::conj(a[n]) * acc;
    }
  }
  return total;
}

/// O exp[...] for operator coefficients A_m and weights (p, q, s).
inline Complex pairing_sum(const CoeffSeq& A, const PairingWeights& w,
                           int max_order = kDefaultMaxPairingOrder) {
  if (A.max_index() > max_order)
    throw PreconditionError("coefficient order " + std::to_string(A.max_index()) +
                            " exceeds max order " + std::to_string(max_order));
  const std::vector<Complex> a = A.scaled();
  return pairing_sum_scaled(a, w, max_order);
}

/// f_{m,n}(x) = sum_l C(m,l) C(n,l) (x^{2l} - x^{m+n-2l}).
inline double f_poly(int m, int n, double x) {
  double acc = 0.0;
  const int lo = std::min(m, n);
  for (int l = 0; l <= lo; ++l)
    acc += binomial(m, l) * binomial(n, l) * (ipow(x, 2 * l) - ipow(x, m + n - 2 * l));
  return acc;
}

struct PositivityHit {
  int m;
  int n;
  double x;
  double value;
};

struct PositivityReport {
  int max_order = 0;
  double grid_step = 0.0;
  double min_value = std::numeric_limits<double>::infinity();
  int argmin_m = -1;
  int argmin_n = -1;
  double argmin_x = 0.0;
  std::size_t evaluations = 0;
  std::vector<PositivityHit> non_positive;
  double seconds = 0.0;

  bool all_positive() const { return non_positive.empty() && min_value > 0.0; }
};

/// Scans f_{m,n} for m != n <= max_order on x = -1 + i*step, i = 1..(2/step - 1).
/// f is symmetric in (m, n), so only m > n is evaluated.
inline PositivityReport verify_f_positivity(int max_order, double grid_step) {
  if (max_order > kMaxBinomialOrder) throw PreconditionError("verify_f_positivity: max_order > 200");
  if (!(grid_step > 0.0 && grid_step < 1.0))
    throw PreconditionError("verify_f_positivity: grid_step must lie in (0, 1)");
  const auto start = std::chrono::steady_clock::now();
  PositivityReport report;
  report.max_order = max_order;
  report.grid_step = grid_step;
  const long points = std::lround(2.0 / grid_step) - 1;
  std::vector<double> pw(2 * max_order + 1);
  for (long i = 1; i <= points; ++i) {
    const double x = -1.0 + static_cast<double>(i) * grid_step;
    pw[0] = 1.0;
    for (std::size_t k = 1; k < pw.size(); ++k) pw[k] = pw[k - 1] * x;
    for (int m = 1; m <= max_order; ++m) {
      for (int n = 0; n < m; ++n) {
        double f = 0.0;
        for (int l = 0; l <= n; ++l)
          f += binomial(m, l) * binomial(n, l) * (pw[2 * l] - pw[m + n - 2 * l]);
        ++report.evaluations;
        if (f < report.min_value) {
          report.min_value = f;
          report.argmin_m = m;
          report.argmin_n = n;
          report.argmin_x = x;
        }
        if (!(f > 0.0)) report.non_positive.push_back({m, n, x, f});
      }
    }
  }
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

/// B_mn = m! n! (A_m A_n* + A_n A_m*).
inline MatXd b_coeffs(const CoeffSeq& A) {
  const std::vector<Complex> a = A.scaled();
  const int size = static_cast<int>(a.size());
  MatXd B(size, size);
  for (int m = 0; m < size; ++m)
    for (int n = 0; n < size; ++n) B(m, n) = 2.0 * (a[m] * std::conj(a[n])).real();
  return B;
}

}  // namespace cvrealign

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

// Realignment criteria for symmetric coherent-subtraction states of TMST and
// boundary standard-form kernels, and coherent-addition states of boundary
// TMST kernels.

#include <cmath>
#include <string>

#include "cvrealign/errors.hpp"
#include "cvrealign/gaussian_core.hpp"
#include "cvrealign/paired_sum.hpp"
#include "cvrealign/verdict.hpp"

namespace cvrealign {

inline constexpr double kBoundaryTolerance = 1e-9;

/// Kernel on the tau = 1 boundary for given (c1, c2): b0 = -c1 + sqrt(1 + c2^2) / 2.
inline SymmetricKernelParams boundary_kernel(double c1, double c2) {
  return {-c1 + 0.5 * std::sqrt(1.0 + c2 * c2), c1, c2};
}

inline void require_on_boundary(const SymmetricKernelParams& p, const char* op) {
  const double t = tau(p);
  if (std::abs(t - 1.0) > kBoundaryTolerance)
    throw PreconditionError(std::string(op) + ": kernel is off the tau = 1 boundary (tau = " +
                            std::to_string(t) + ")");
}

struct TmstSubtractionVerdict {
  CriterionVerdict verdict;
  bool kernel_separable = false;
  /// detected == !kernel_separable. Fails for some destructive-phase
  /// coefficients on pure kernels, where Tr rho_R misses entanglement.
  bool consistent = true;
};

/// sqrt(tau) O P^R > O P for the coherent subtraction of a symmetric TMST.
/// lhs/rhs equals Tr rho_R / Tr rho of the unnormalized state.
inline TmstSubtractionVerdict subtraction_criterion_tmst(const CoeffSeq& A, const TmstSpec& spec) {
  const SymmetricKernelParams p = tmst_params(spec);
  require_nonpositive_c1(p);
  const double t = tau(p);
  const double lhs = std::sqrt(t) * pairing_sum(A, {p.L(), p.K(), 0.0}).real();
  const double rhs = pairing_sum(A, {p.b0 - 0.5, -p.c1, 0.0}).real();

  TmstSubtractionVerdict out;
  out.verdict = CriterionVerdict::compare(lhs, rhs);
  out.kernel_separable = tmst_separable(p);
  out.consistent = out.verdict.detected != out.kernel_separable;
  CriterionVerdict& v = out.verdict;
  v.diagnostics["tau"] = t;
  v.diagnostics["K"] = p.K();
  v.diagnostics["L"] = p.L();
  v.diagnostics["kernel_separable"] = out.kernel_separable ? 1.0 : 0.0;
  if (out.kernel_separable) {
    // Separable kernels stay separable under coherent subtraction.
    v.status = Status::separable;
  } else if (!v.detected) {
    v.flags.push_back("completeness_violated");
  }
  return out;
}

/// sum_{m>n} B_mn sum_k C(m,k) C(n,k) c2^{2k} b^{m+n-2k} f_{m-k,n-k}(-c1/b) > 0
/// at the tau = 1 boundary with c2 != 0.
inline CriterionVerdict subtraction_criterion_boundary(const CoeffSeq& A,
                                                       const SymmetricKernelParams& p) {
  require_nonpositive_c1(p);
  if (p.c2 == 0.0)
    throw PreconditionError("subtraction_criterion_boundary: needs c2 != 0 (use the TMST criterion)");
  require_on_boundary(p, "subtraction_criterion_boundary");
  const double b = p.b();
  if (!(b > 0.0)) throw PreconditionError("subtraction_criterion_boundary: b = b0 - 1/2 must be positive");

  const MatXd B = b_coeffs(A);
  const double x = -p.c1 / b;
  const int M = A.max_index();
  double lhs = 0.0;
  for (int m = 1; m <= M; ++m)
    for (int n = 0; n < m; ++n) {
      if (B(m, n) == 0.0) continue;
      double inner = 0.0;
      for (int k = 0; k <= n; ++k)
        inner += binomial(m, k) * binomial(n, k) * ipow(p.c2 * p.c2, k) * ipow(b, m + n - 2 * k) *
                 f_poly(m - k, n - k, x);
      lhs += B(m, n) * inner;
    }

  CriterionVerdict v = CriterionVerdict::compare(lhs, 0.0);
  const double unreduced =
      pairing_sum(A, {-p.c1, b, p.c2}).real() - pairing_sum(A, {b, -p.c1, p.c2}).real();
  v.diagnostics["unreduced_difference"] = unreduced;
  v.diagnostics["f_argument"] = x;
  return v;
}

/// sum_{m>n} B_mn (b0+1/2)^{m+n} f_{m,n}(-c1/(b0+1/2)) > 0 for the coherent
/// addition of a TMST on its separability boundary.
inline CriterionVerdict addition_criterion_tmst_boundary(const CoeffSeq& A,
                                                         const SymmetricKernelParams& p) {
  require_nonpositive_c1(p);
  if (p.c2 != 0.0) throw PreconditionError("addition_criterion_tmst_boundary: c2 must be 0");
  if (!(p.c1 < 0.0)) throw PreconditionError("addition_criterion_tmst_boundary: needs c1 < 0");
  require_on_boundary(p, "addition_criterion_tmst_boundary");

  const MatXd B = b_coeffs(A);
  const double X = p.b0 + 0.5;
  const double x = -p.c1 / X;
  const int M = A.max_index();
  double lhs = 0.0;
  for (int m = 1; m <= M; ++m)
    for (int n = 0; n < m; ++n)
      if (B(m, n) != 0.0) lhs += B(m, n) * ipow(X, m + n) * f_poly(m, n, x);

  CriterionVerdict v = CriterionVerdict::compare(lhs, 0.0);
  v.diagnostics["f_argument"] = x;
  return v;
}

/// cos(phi_m - phi_n) > 0.
inline bool two_term_phase_condition(double phi_m, double phi_n) {
  return std::cos(phi_m - phi_n) > 0.0;
}

}  // namespace cvrealign

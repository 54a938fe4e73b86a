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

// Covariance algebra for symmetric 1x1 two-mode Gaussian kernels.
//
// The complex covariance gamma enters the characteristic function as
//   chi(mu) = exp[-1/2 (mu, mu*) gamma (mu, mu*)^T]
// on the vector (mu_1, mu_2, mu_1*, mu_2*). For a symmetric kernel
//   gamma = b0 s1(x)I2 + c1 I2(x)s1 + c2 s1(x)s1
// which, written out entrywise, is
//
//           mu_1   mu_2   mu_1*  mu_2*
//   mu_1  [  0     c1     b0     c2  ]
//   mu_2  [  c1    0      c2     b0  ]
//   mu_1* [  b0    c2     0      c1  ]
//   mu_2* [  c2    b0     c1     0   ]

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "cvrealign/errors.hpp"
#include "cvrealign/linalg.hpp"
#include "cvrealign/verdict.hpp"

namespace cvrealign {

/// Thermal mean photon number per mode and two-mode squeezing parameter.
struct TmstSpec {
  double mean_photons = 0.0;
  double squeezing = 0.0;

  /// v = N / (N + 1), the geometric ratio of each thermal factor.
  double thermal_ratio() const { return mean_photons / (mean_photons + 1.0); }
};

/// The (b0, c1, c2) triple of a symmetric standard-form kernel.
struct SymmetricKernelParams {
  double b0 = 0.5;
  double c1 = 0.0;
  double c2 = 0.0;

  double b() const { return b0 - 0.5; }
  double tau_denominator() const { return 4.0 * (b0 + c1) * (b0 + c1) - c2 * c2; }
  /// epsilon = 1 - 2 b0 - 2 c1; positive and small just inside the entangled region.
  double epsilon() const { return 1.0 - 2.0 * b0 - 2.0 * c1; }
  /// Boundary parameter z = (b0 - c1 - 1/2) / 2, not the channel z.
  double z_boundary() const { return 0.5 * (b0 - c1 - 0.5); }
  double tau() const;
  double K() const { return 0.5 * ((b0 + c1) * tau() + (b0 - c1) - 1.0); }
  double L() const { return 0.5 * ((b0 - c1) - (b0 + c1) * tau()); }
};

inline double tau(const SymmetricKernelParams& p) {
  const double den = p.tau_denominator();
  if (!(den > 0.0))
    throw PreconditionError("tau: 4(b0+c1)^2 - c2^2 must be positive, got " + std::to_string(den));
  return 1.0 / den;
}

inline double SymmetricKernelParams::tau() const { return cvrealign::tau(*this); }

/// Rejects c1 > 0, where none of the criteria apply.
inline void require_nonpositive_c1(const SymmetricKernelParams& p) {
  if (p.c1 > 0.0)
    throw UnsupportedSignError("c1 = " + std::to_string(p.c1) +
                               " > 0: the realignment criteria are only derived for c1 <= 0");
}

/// Accepts a triple iff b0 >= 1/2, b0 + c1 > 0, b0 - c1 > 0 and the tau
/// denominator is positive. No full uncertainty-relation check.
inline void validate_physical(const SymmetricKernelParams& p) {
  if (p.b0 < 0.5) throw PreconditionError("b0 = " + std::to_string(p.b0) + " < 1/2");
  if (!(p.b0 + p.c1 > 0.0)) throw PreconditionError("b0 + c1 must be positive");
  if (!(p.b0 - p.c1 > 0.0)) throw PreconditionError("b0 - c1 must be positive");
  if (!(p.tau_denominator() > 0.0))
    throw PreconditionError("4(b0+c1)^2 - c2^2 must be positive");
}

inline SymmetricKernelParams tmst_params(const TmstSpec& spec) {
  if (spec.mean_photons < 0.0)
    throw PreconditionError("TMST mean photon number N = " + std::to_string(spec.mean_photons) +
                            " < 0");
  const double e = spec.mean_photons + 0.5;
  return {e * std::cosh(2.0 * spec.squeezing), -e * std::sinh(2.0 * spec.squeezing), 0.0};
}

/// Inverse of tmst_params for c2 = 0 triples with b0 > |c1|.
inline TmstSpec tmst_spec_from_params(const SymmetricKernelParams& p) {
  if (p.c2 != 0.0) throw PreconditionError("tmst_spec_from_params: c2 must be 0");
  if (!(p.b0 > std::abs(p.c1))) throw PreconditionError("tmst_spec_from_params: need b0 > |c1|");
  const double energy = std::sqrt((p.b0 - p.c1) * (p.b0 + p.c1));
  return {energy - 0.5, 0.5 * std::atanh(-p.c1 / p.b0)};
}

/// Necessary and sufficient separability of a symmetric TMST: 2 b0 + 2 c1 >= 1.
inline bool tmst_separable(const SymmetricKernelParams& p) {
  if (p.c2 != 0.0)
    throw PreconditionError("tmst_separable: c2 = " + std::to_string(p.c2) + " must be 0 for a TMST");
  return 2.0 * p.b0 + 2.0 * p.c1 >= 1.0;
}

/// 4x4 complex covariance matrix in the (mu, mu*) ordering.
struct ComplexCovariance {
  Mat4c gamma = Mat4c::Zero();

  static ComplexCovariance from_kernel(const SymmetricKernelParams& p) {
    return {p.b0 * pauli::s1_i2() + p.c1 * pauli::i2_s1() + p.c2 * pauli::s1_s1()};
  }

  static ComplexCovariance vacuum() { return from_kernel({0.5, 0.0, 0.0}); }

  /// gamma' = gamma + 1/2 s1(x)I2.
  Mat4c gamma_prime() const { return gamma + 0.5 * pauli::s1_i2(); }
};

/// Reads (b0, c1, c2) back from a covariance, rejecting matrices outside the
/// symmetric-kernel family.
inline SymmetricKernelParams kernel_params(const ComplexCovariance& cov) {
  const SymmetricKernelParams p{cov.gamma(0, 2).real(), cov.gamma(0, 1).real(),
                                cov.gamma(0, 3).real()};
  const Mat4c rebuilt = ComplexCovariance::from_kernel(p).gamma;
  const double scale = std::max(1.0, cov.gamma.cwiseAbs().maxCoeff());
  if ((rebuilt - cov.gamma).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw PreconditionError("covariance is not of the symmetric b0/c1/c2 form");
  return p;
}

struct DerivedMatrices {
  Mat4c gamma_prime;
  Mat4c Gamma;
  Mat4c Gamma_R;
  Mat4c gamma_R_prime;
};

inline DerivedMatrices derived_matrices(const ComplexCovariance& cov) {
  using namespace pauli;
  DerivedMatrices d;
  d.gamma_prime = cov.gamma_prime();
  const Mat4c gp_inv = checked_inverse(d.gamma_prime, "gamma_prime");
  d.Gamma = s1_i2() + s3_i2() * gp_inv * s3_i2();
  d.Gamma_R = realign_z() * d.Gamma * realign_z();
  d.gamma_R_prime = s3_i2() * checked_inverse(d.Gamma_R - s1_i2(), "Gamma_R - s1(x)I2") * s3_i2();
  return d;
}

/// sqrt(det gamma_R' / det gamma'), the realignment trace of a normalized
/// Gaussian state, compared against 1.
inline CriterionVerdict gaussian_realignment_trace(const ComplexCovariance& cov) {
  const DerivedMatrices d = derived_matrices(cov);
  const Complex ratio = determinant(d.gamma_R_prime) / determinant(d.gamma_prime);
  if (std::abs(ratio.imag()) > 1e-9 * std::abs(ratio) || ratio.real() <= 0.0)
    throw NumericalError("gaussian_realignment_trace: determinant ratio is not positive real");
  CriterionVerdict v = CriterionVerdict::compare(std::sqrt(ratio.real()), 1.0);
  v.diagnostics["det_gamma_prime"] = determinant(d.gamma_prime).real();
  v.diagnostics["det_gamma_R_prime"] = determinant(d.gamma_R_prime).real();
  return v;
}

using ModePair = std::array<Complex, 2>;

/// <alpha| rho_G |beta> for two-mode coherent states.
inline Complex coherent_matrix_element(const ComplexCovariance& cov, const ModePair& alpha,
                                       const ModePair& beta) {
  const DerivedMatrices d = derived_matrices(cov);
  Eigen::Vector4cd x;
  x << std::conj(alpha[0]), std::conj(alpha[1]), beta[0], beta[1];
  const double norms = std::norm(alpha[0]) + std::norm(alpha[1]) + std::norm(beta[0]) +
                       std::norm(beta[1]);
  const Complex quad = (x.transpose() * d.Gamma * x)(0, 0);
  return std::exp(-0.5 * norms + 0.5 * quad) / std::sqrt(determinant(d.gamma_prime));
}

/// chi(mu) = exp[-1/2 (mu, mu*) gamma (mu, mu*)^T].
inline Complex characteristic_function(const ComplexCovariance& cov, const ModePair& mu) {
  Eigen::Vector4cd v;
  v << mu[0], mu[1], std::conj(mu[0]), std::conj(mu[1]);
  return std::exp(-0.5 * (v.transpose() * cov.gamma * v)(0, 0));
}

}  // namespace cvrealign

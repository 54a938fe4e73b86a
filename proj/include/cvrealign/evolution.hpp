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

// Realignment criteria for coherent-addition states evolving in a symmetric
// thermal-noise / amplitude-damping channel. Time is measured in units of the
// inverse damping rate.

#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cvrealign/errors.hpp"
#include "cvrealign/gaussian_core.hpp"
#include "cvrealign/linalg.hpp"
#include "cvrealign/paired_sum.hpp"
#include "cvrealign/verdict.hpp"

namespace cvrealign {

inline constexpr double kNormalizationTolerance = 1e-9;

/// Channel parameters (n_tilde, t) and the derived n_t and z.
struct ChannelPoint {
  double n_tilde = 0.0;
  double t = 0.0;
  double n_t = 1.0;
  double z = 1.0;
};

/// n_t = n_tilde (1 - e^-t) + 1, z = e^-t / (2 n_t - 1).
inline ChannelPoint channel_point(double n_tilde, double t) {
  if (n_tilde < 0.0) throw PreconditionError("channel noise n_tilde = " + std::to_string(n_tilde) + " < 0");
  if (t < 0.0) throw PreconditionError("channel time t = " + std::to_string(t) + " < 0");
  ChannelPoint ch;
  ch.n_tilde = n_tilde;
  ch.t = t;
  const double decay = std::exp(-t);
  ch.n_t = n_tilde * (1.0 - decay) + 1.0;
  ch.z = decay / (2.0 * ch.n_t - 1.0);
  return ch;
}

/// Photonic Bell state c0|00> + c1|11>.
struct BellCoeffs {
  Complex c0 = 1.0;
  Complex c1_bell = 0.0;
};

struct EvolvedMatrices {
  Mat4c gamma_t_prime;
  Mat4c gamma_Rt_prime;
  Mat4c Omega;
};

inline EvolvedMatrices evolved_matrices(const Mat4c& gamma_prime, const ChannelPoint& ch) {
  using namespace pauli;
  const double decay = std::exp(-ch.t);
  const Mat4c zp = realign_z_prime();
  EvolvedMatrices e;
  e.gamma_t_prime = decay * gamma_prime + (ch.n_tilde + 1.0) * (1.0 - decay) * s1_i2();
  const Mat4c gt_inv = checked_inverse(e.gamma_t_prime, "gamma_t_prime");
  e.gamma_Rt_prime =
      checked_inverse(zp * gt_inv * zp + i2_s1() + s1_i2(), "Z' gamma_t'^-1 Z' + I2(x)s1 + s1(x)I2");
  e.Omega = gamma_prime +
            decay * gamma_prime * (-gt_inv + gt_inv * zp * e.gamma_Rt_prime * zp * gt_inv) * gamma_prime;
  return e;
}

/// Gaussian-side channel action on the covariance:
/// gamma_t = e^-t gamma + (n_tilde + 1/2)(1 - e^-t) s1(x)I2.
inline ComplexCovariance evolve_covariance(const ComplexCovariance& cov, const ChannelPoint& ch) {
  const double decay = std::exp(-ch.t);
  return {decay * cov.gamma + (ch.n_tilde + 0.5) * (1.0 - decay) * pauli::s1_i2()};
}

/// Pairing weights of -1/2 v M v^T with v = (eps1, eps2, -zeta1, -zeta2) when
/// M = u s1(x)I2 + w I2(x)s1: p = u, q = -w. Empty if M has any other component.
inline std::optional<PairingWeights> weights_from_quadratic_form(const Mat4c& M) {
  const Complex u = M(0, 2);
  const Complex w = M(0, 1);
  const Mat4c rebuilt = u * pauli::s1_i2() + w * pauli::i2_s1();
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((rebuilt - M).cwiseAbs().maxCoeff() > 1e-10 * scale) return std::nullopt;
  if (std::abs(u.imag()) > 1e-10 * scale || std::abs(w.imag()) > 1e-10 * scale) return std::nullopt;
  return PairingWeights{u.real(), -w.real(), 0.0};
}

/// sqrt(det gamma_Rt' / det gamma_t') O exp[-v Omega v^T / 2] > O exp[-v gamma' v^T / 2].
inline CriterionVerdict general_evolution_criterion(const CoeffSeq& A, const ComplexCovariance& gamma,
                                                    const ChannelPoint& ch) {
  const SymmetricKernelParams kp = kernel_params(gamma);
  require_nonpositive_c1(kp);
  const Mat4c gp = gamma.gamma_prime();
  const EvolvedMatrices e = evolved_matrices(gp, ch);
  const auto w_omega = weights_from_quadratic_form(e.Omega);
  if (!w_omega) throw PreconditionError("general_evolution_criterion: Omega is outside the u s1(x)I2 + w I2(x)s1 family");
  const auto w_gamma = weights_from_quadratic_form(gp);
  if (!w_gamma) throw PreconditionError("general_evolution_criterion: gamma' is outside the u s1(x)I2 + w I2(x)s1 family");

  const Complex ratio = determinant(e.gamma_Rt_prime) / determinant(e.gamma_t_prime);
  if (ratio.real() <= 0.0 || std::abs(ratio.imag()) > 1e-9 * std::abs(ratio))
    throw NumericalError("general_evolution_criterion: determinant ratio is not positive real");
  const double prefactor = std::sqrt(ratio.real());

  CriterionVerdict v =
      CriterionVerdict::compare(prefactor * pairing_sum(A, *w_omega).real(), pairing_sum(A, *w_gamma).real());
  v.diagnostics["prefactor"] = prefactor;
  v.diagnostics["omega_p"] = w_omega->p;
  v.diagnostics["omega_q"] = w_omega->q;
  v.diagnostics["n_t"] = ch.n_t;
  v.diagnostics["z"] = ch.z;
  return v;
}

inline double squared_norm(std::span<const Complex> c) {
  double s = 0.0;
  for (const Complex& x : c) s += std::norm(x);
  return s;
}

/// Criterion for an evolving photon-number entangled state sum_m C_m |mm>.
/// The entries of `C` are the normalized state amplitudes C_m.
inline CriterionVerdict pnes_criterion(const CoeffSeq& C, const ChannelPoint& ch) {
  const double norm2 = squared_norm(C.coeffs());
  if (std::abs(norm2 - 1.0) > kNormalizationTolerance)
    throw PreconditionError("pnes_criterion: sum |C_m|^2 = " + std::to_string(norm2) + " != 1");
  const double lhs =
      pairing_sum_scaled(C.coeffs(), {1.0 - ch.z, ch.z, 0.0}).real() / (2.0 * ch.n_t - 1.0);
  CriterionVerdict v = CriterionVerdict::compare(lhs, 1.0);
  v.diagnostics["n_t"] = ch.n_t;
  v.diagnostics["z"] = ch.z;
  return v;
}

/// C_m = sqrt(1 - lambda^2) lambda^m for m <= max_index.
inline std::vector<Complex> geometric_amplitudes(double lambda, int max_index) {
  std::vector<Complex> c(max_index + 1);
  const double norm = std::sqrt(1.0 - lambda * lambda);
  for (int m = 0; m <= max_index; ++m) c[m] = norm * ipow(lambda, m);
  return c;
}

/// g(x) = sum_m (x^m / m!)^2, summed until a term drops below 1e-16 of the sum
/// past the peak of the series.
inline double tmc_g(double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m < 100000; ++m) {
    term *= (x / m) * (x / m);
    sum += term;
    if (m > std::abs(x) && term < 1e-16 * sum) break;
  }
  return sum;
}

/// C_m = lambda^m / (m! sqrt(g(lambda))) for m <= max_index.
inline std::vector<Complex> poisson_amplitudes(double lambda, int max_index) {
  std::vector<Complex> c(max_index + 1);
  const double inv = 1.0 / std::sqrt(tmc_g(lambda));
  double term = 1.0;
  for (int m = 0; m <= max_index; ++m) {
    if (m > 0) term *= lambda / m;
    c[m] = term * inv;
  }
  return c;
}

/// (1 + lambda) / [(2 n_t - 1)(1 + lambda - 2 lambda z)] > 1.
inline CriterionVerdict tmsv_criterion(double lambda, const ChannelPoint& ch) {
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw PreconditionError("tmsv_criterion: lambda = " + std::to_string(lambda) + " outside [0, 1)");
  const double lhs = (1.0 + lambda) / ((2.0 * ch.n_t - 1.0) * (1.0 + lambda - 2.0 * lambda * ch.z));
  return CriterionVerdict::compare(lhs, 1.0);
}

/// e^{2 lambda z} g(lambda (1 - z)) > (2 n_t - 1) g(lambda).
inline CriterionVerdict tmc_criterion(double lambda, const ChannelPoint& ch) {
  if (lambda < 0.0) throw PreconditionError("tmc_criterion: lambda must be non-negative");
  const double lhs = std::exp(2.0 * lambda * ch.z) * tmc_g(lambda * (1.0 - ch.z));
  const double rhs = (2.0 * ch.n_t - 1.0) * tmc_g(lambda);
  return CriterionVerdict::compare(lhs, rhs);
}

/// |c0|^2 + 2 Re(c0 c1*) z + |c1|^2 (1 - 2z + 2z^2) > 2 n_t - 1.
inline CriterionVerdict bell_criterion(const BellCoeffs& bc, const ChannelPoint& ch) {
  const double norm2 = std::norm(bc.c0) + std::norm(bc.c1_bell);
  if (std::abs(norm2 - 1.0) > kNormalizationTolerance)
    throw PreconditionError("bell_criterion: |c0|^2 + |c1|^2 = " + std::to_string(norm2) + " != 1");
  const double z = ch.z;
  const double lhs = std::norm(bc.c0) + 2.0 * (bc.c0 * std::conj(bc.c1_bell)).real() * z +
                     std::norm(bc.c1_bell) * (1.0 - 2.0 * z + 2.0 * z * z);
  return CriterionVerdict::compare(lhs, 2.0 * ch.n_t - 1.0);
}

}  // namespace cvrealign

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

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "cvrealign/errors.hpp"

namespace cvrealign {

using Complex = std::complex<double>;
using Mat4c = Eigen::Matrix4cd;
using MatXc = Eigen::MatrixXcd;
using MatXd = Eigen::MatrixXd;

// Fixed 4x4 constants acting on the (mu_1, mu_2, mu_1*, mu_2*) ordering.
// The first tensor factor indexes conjugation, the second indexes the mode.
namespace pauli {

inline Eigen::Matrix2cd sigma1() {
  Eigen::Matrix2cd m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline Eigen::Matrix2cd sigma3() {
  Eigen::Matrix2cd m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

inline Mat4c kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Mat4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

/// sigma_1 (x) I_2: couples mu_i with mu_i*.
inline Mat4c s1_i2() { return kron(sigma1(), Eigen::Matrix2cd::Identity()); }
/// I_2 (x) sigma_1: couples mu_1 with mu_2 inside each conjugation block.
inline Mat4c i2_s1() { return kron(Eigen::Matrix2cd::Identity(), sigma1()); }
/// sigma_1 (x) sigma_1: couples mu_1 with mu_2*.
inline Mat4c s1_s1() { return kron(sigma1(), sigma1()); }
inline Mat4c s3_i2() { return kron(sigma3(), Eigen::Matrix2cd::Identity()); }

/// Realignment permutation: Z_11 = Z_44 = Z_23 = Z_32 = 1 (1-based).
inline Mat4c realign_z() {
  Mat4c z = Mat4c::Zero();
  z(0, 0) = z(3, 3) = z(1, 2) = z(2, 1) = 1.0;
  return z;
}

/// Z' = (sigma_3 (x) I_2) Z (sigma_3 (x) I_2).
inline Mat4c realign_z_prime() { return s3_i2() * realign_z() * s3_i2(); }

}  // namespace pauli

/// Determinant by partially pivoted LU.
inline Complex determinant(const Mat4c& m) { return m.partialPivLu().determinant(); }

/// True when |det m| < 1e-12 * ||m||_inf^4.
inline bool is_near_singular(const Mat4c& m) {
  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  if (norm == 0.0) return true;
  return std::abs(determinant(m)) < 1e-12 * std::pow(norm, 4);
}

inline Mat4c checked_inverse(const Mat4c& m, const std::string& name) {
  if (is_near_singular(m)) throw SingularMatrixError(name);
  return m.partialPivLu().inverse();
}

/// Integer power with 0^0 = 1.
inline double ipow(double x, int n) {
  double r = 1.0;
  for (; n > 0; --n) r *= x;
  return r;
}

}  // namespace cvrealign

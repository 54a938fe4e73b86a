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

// Truncated-Fock brute-force oracle. Two-mode operators are dense d^2 x d^2
// matrices in the basis |n1>|n2>, row index n1*d + n2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/MatrixFunctions>

#include "cvrealign/errors.hpp"
#include "cvrealign/evolution.hpp"
#include "cvrealign/gaussian_core.hpp"
#include "cvrealign/linalg.hpp"
#include "cvrealign/paired_sum.hpp"
#include "cvrealign/verdict.hpp"

namespace cvrealign {

inline constexpr int kMaxCutoff = 64;
inline constexpr double kTailMassThreshold = 1e-6;

class FockOperator {
 public:
  FockOperator() = default;
  FockOperator(int cutoff, MatXc data) : d_(cutoff), data_(std::move(data)) {
    if (d_ < 2 || d_ > kMaxCutoff) throw PreconditionError("Fock cutoff must lie in [2, 64]");
    if (data_.rows() != d_ * d_ || data_.cols() != d_ * d_)
      throw PreconditionError("Fock operator must be d^2 x d^2");
  }

  static FockOperator zeros(int cutoff) {
    return FockOperator(cutoff, MatXc::Zero(cutoff * cutoff, cutoff * cutoff));
  }

  int cutoff() const { return d_; }
  int dim() const { return d_ * d_; }
  int index(int n1, int n2) const { return n1 * d_ + n2; }
  const MatXc& matrix() const { return data_; }
  MatXc& matrix() { return data_; }

  Complex trace() const { return data_.trace(); }

  /// Population on the truncation edge (n1 or n2 = d-1) relative to the trace.
  double tail_mass() const {
    double edge = 0.0;
    for (int k = 0; k < d_; ++k) {
      edge += data_(index(d_ - 1, k), index(d_ - 1, k)).real();
      if (k != d_ - 1) edge += data_(index(k, d_ - 1), index(k, d_ - 1)).real();
    }
    return edge / trace().real();
  }

  bool tail_flagged() const { return tail_mass() > kTailMassThreshold; }

  void write_csv(std::ostream& out) const {
    out << "# fock-operator cutoff=" << d_ << " rows=" << dim() << " cols=" << dim()
        << " layout=row-major re,im\n";
    out.precision(17);
    for (int i = 0; i < dim(); ++i) {
      for (int j = 0; j < dim(); ++j) {
        if (j) out << ',';
        out << data_(i, j).real() << ',' << data_(i, j).imag();
      }
      out << '\n';
    }
  }

  static FockOperator read_csv(std::istream& in) {
    std::string header;
    std::getline(in, header);
    const auto pos = header.find("cutoff=");
    if (pos == std::string::npos) throw PreconditionError("Fock CSV: missing cutoff header");
    const int d = std::stoi(header.substr(pos + 7));
    FockOperator op = zeros(d);
    std::string line;
    for (int i = 0; i < op.dim(); ++i) {
      if (!std::getline(in, line)) throw PreconditionError("Fock CSV: truncated file");
      std::istringstream row(line);
      std::string re, im;
      for (int j = 0; j < op.dim(); ++j) {
        if (!std::getline(row, re, ',') || !std::getline(row, im, ','))
          throw PreconditionError("Fock CSV: short row");
        op.data_(i, j) = Complex(std::stod(re), std::stod(im));
      }
    }
    return op;
  }

 private:
  int d_ = 2;
  MatXc data_ = MatXc::Zero(4, 4);
};

struct LadderOps {
  MatXd a;
  MatXd a_dagger;
};

/// a|n> = sqrt(n)|n-1> truncated to d levels.
inline LadderOps ladder_ops(int d) {
  if (d < 2) throw PreconditionError("ladder_ops: d must be >= 2");
  LadderOps ops{MatXd::Zero(d, d), MatXd::Zero(d, d)};
  for (int n = 1; n < d; ++n) ops.a(n - 1, n) = std::sqrt(static_cast<double>(n));
  ops.a_dagger = ops.a.transpose();
  return ops;
}

namespace detail {

// Pair-sector (n1 - n2 = k) basis of a two-mode space with cutoff D.
inline int sector_size(int D, int k) { return D - std::abs(k); }
inline int sector_n1(int k, int j) { return j + std::max(k, 0); }
inline int sector_n2(int k, int j) { return j + std::max(-k, 0); }

// Disjoint blocks of a matrix found from its exact-zero pattern.
struct Block {
  std::vector<int> rows;
  std::vector<int> cols;
};

inline int uf_find(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

inline std::vector<Block> bipartite_blocks(const MatXc& m) {
  const int R = static_cast<int>(m.rows()), C = static_cast<int>(m.cols());
  std::vector<int> parent(R + C);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<char> used(R + C, 0);
  for (int j = 0; j < C; ++j)
    for (int i = 0; i < R; ++i)
      if (m(i, j) != 0.0) {
        used[i] = used[R + j] = 1;
        const int a = uf_find(parent, i), b = uf_find(parent, R + j);
        if (a != b) parent[a] = b;
      }
  std::vector<int> slot(R + C, -1);
  std::vector<Block> blocks;
  for (int x = 0; x < R + C; ++x) {
    if (!used[x]) continue;
    const int root = uf_find(parent, x);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    Block& b = blocks[slot[root]];
    if (x < R) b.rows.push_back(x);
    else b.cols.push_back(x - R);
  }
  return blocks;
}

inline MatXc extract(const MatXc& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  MatXc out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

}  // namespace detail

/// S(r) (rho_th (x) rho_th) S(r)^dagger with S(r) = exp[r(a1^dag a2^dag - a1 a2)].
///
/// The generator preserves n1 - n2, so its exponential is taken sector by
/// sector at an internal cutoff of 2d, and the result is projected onto the
/// first d levels of each mode.
inline FockOperator tmst_fock(const TmstSpec& spec, int d) {
  if (spec.mean_photons < 0.0) throw PreconditionError("tmst_fock: N < 0");
  const int D = 2 * d;
  const double v = spec.thermal_ratio();
  std::vector<double> p(D);
  for (int n = 0; n < D; ++n) p[n] = (1.0 - v) * ipow(v, n);

  FockOperator rho = FockOperator::zeros(d);
  for (int k = -(d - 1); k <= d - 1; ++k) {
    const int size = detail::sector_size(D, k);
    MatXd gen = MatXd::Zero(size, size);
    for (int j = 0; j + 1 < size; ++j) {
      const double amp = spec.squeezing * std::sqrt(static_cast<double>(detail::sector_n1(k, j) + 1) *
                                                    (detail::sector_n2(k, j) + 1));
      gen(j + 1, j) = amp;
      gen(j, j + 1) = -amp;
    }
    const MatXd S = gen.exp();
    Eigen::VectorXd weights(size);
    for (int j = 0; j < size; ++j) weights[j] = p[detail::sector_n1(k, j)] * p[detail::sector_n2(k, j)];
    const MatXd block = S * weights.asDiagonal() * S.transpose();
    const int keep = detail::sector_size(d, k);
    for (int i = 0; i < keep; ++i)
      for (int j = 0; j < keep; ++j)
        rho.matrix()(rho.index(detail::sector_n1(k, i), detail::sector_n2(k, i)),
                     rho.index(detail::sector_n1(k, j), detail::sector_n2(k, j))) = block(i, j);
  }
  return rho;
}

namespace detail {

// sum_m A_m (a1 a2)^m, or its raising counterpart, as a sparse d^2 x d^2 matrix.
inline Eigen::SparseMatrix<Complex> pair_operator(const CoeffSeq& A, int d, bool raising) {
  std::vector<Eigen::Triplet<Complex>> entries;
  for (int n1 = 0; n1 < d; ++n1)
    for (int n2 = 0; n2 < d; ++n2)
      for (int m = 0; m <= A.max_index(); ++m) {
        if (A[m] == 0.0) continue;
        const int s = raising ? m : -m;
        const int t1 = n1 + s, t2 = n2 + s;
        if (t1 < 0 || t2 < 0 || t1 >= d || t2 >= d) continue;
        double amp = 1.0;
        for (int i = 0; i < m; ++i) {
          const int f1 = raising ? n1 + i + 1 : n1 - i;
          const int f2 = raising ? n2 + i + 1 : n2 - i;
          amp *= std::sqrt(static_cast<double>(f1) * f2);
        }
        entries.emplace_back(t1 * d + t2, n1 * d + n2, A[m] * amp);
      }
  Eigen::SparseMatrix<Complex> op(d * d, d * d);
  op.setFromTriplets(entries.begin(), entries.end());
  return op;
}

inline FockOperator sandwich(const FockOperator& rho, const Eigen::SparseMatrix<Complex>& op) {
  MatXc left = op * rho.matrix();
  MatXc out = (op * left.adjoint()).adjoint();
  return FockOperator(rho.cutoff(), std::move(out));
}

}  // namespace detail

/// sum_m A_m a1^m a2^m rho sum_n A_n* a1^dag^n a2^dag^n, unnormalized.
inline FockOperator apply_coherent_subtraction(const FockOperator& rho, const CoeffSeq& A) {
  return detail::sandwich(rho, detail::pair_operator(A, rho.cutoff(), false));
}

/// sum_m A_m a1^dag^m a2^dag^m rho sum_n A_n* a1^n a2^n, unnormalized.
inline FockOperator apply_coherent_addition(const FockOperator& rho, const CoeffSeq& A) {
  if (2 * A.max_index() >= rho.cutoff())
    throw PreconditionError("apply_coherent_addition: max index " + std::to_string(A.max_index()) +
                            " needs cutoff > " + std::to_string(2 * A.max_index()));
  return detail::sandwich(rho, detail::pair_operator(A, rho.cutoff(), true));
}

/// |psi><psi| with |psi> = sum_m C_m |mm>.
inline FockOperator pnes_state(std::span<const Complex> amplitudes, int d) {
  if (static_cast<int>(amplitudes.size()) > d)
    throw PreconditionError("pnes_state: support " + std::to_string(amplitudes.size()) +
                            " exceeds cutoff " + std::to_string(d));
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d * d);
  for (std::size_t m = 0; m < amplitudes.size(); ++m) psi[m * d + m] = amplitudes[m];
  return FockOperator(d, psi * psi.adjoint());
}

inline FockOperator bell_state(const BellCoeffs& bc, int d) {
  const Complex amps[2] = {bc.c0, bc.c1_bell};
  return pnes_state(amps, d);
}

/// Single-mode thermal attenuator exp(t L) with
///   L rho = (n+1) D[a] rho + n D[a^dag] rho,  D[X] rho = X rho X^dag - {X^dag X, rho}/2,
/// stored per band k = n - m of the density matrix. Truncated a a^dag keeps the
/// generator trace preserving.
class ThermalAttenuator {
 public:
  ThermalAttenuator(int d, const ChannelPoint& ch) : d_(d), bands_(2 * d - 1) {
    const double nt = ch.n_tilde;
    auto aad = [d](int n) { return n < d - 1 ? n + 1.0 : 0.0; };
    for (int k = -(d - 1); k <= d - 1; ++k) {
      const int size = d - std::abs(k);
      MatXd gen = MatXd::Zero(size, size);
      for (int j = 0; j < size; ++j) {
        const int n = detail::sector_n1(k, j), m = detail::sector_n2(k, j);
        gen(j, j) = -0.5 * (nt + 1.0) * (n + m) - 0.5 * nt * (aad(n) + aad(m));
        if (j + 1 < size) gen(j, j + 1) = (nt + 1.0) * std::sqrt((n + 1.0) * (m + 1.0));
        if (j > 0) gen(j, j - 1) = nt * std::sqrt(static_cast<double>(n) * m);
      }
      bands_[k + d - 1] = (ch.t * gen).exp();
    }
  }

  const MatXd& band(int k) const { return bands_[k + d_ - 1]; }

  /// Applies the channel independently to both modes.
  FockOperator apply(const FockOperator& rho) const {
    if (rho.cutoff() != d_) throw PreconditionError("ThermalAttenuator: cutoff mismatch");
    const MatXc& in = rho.matrix();
    FockOperator out = FockOperator::zeros(d_);
    for (int k1 = -(d_ - 1); k1 <= d_ - 1; ++k1) {
      const int s1 = d_ - std::abs(k1);
      for (int k2 = -(d_ - 1); k2 <= d_ - 1; ++k2) {
        const int s2 = d_ - std::abs(k2);
        MatXc x(s1, s2);
        bool any = false;
        for (int i = 0; i < s1; ++i)
          for (int j = 0; j < s2; ++j) {
            const Complex v = in(rho.index(detail::sector_n1(k1, i), detail::sector_n1(k2, j)),
                                 rho.index(detail::sector_n2(k1, i), detail::sector_n2(k2, j)));
            x(i, j) = v;
            any = any || v != 0.0;
          }
        if (!any) continue;
        const MatXc y = band(k1).cast<Complex>() * x * band(k2).transpose().cast<Complex>();
        for (int i = 0; i < s1; ++i)
          for (int j = 0; j < s2; ++j)
            out.matrix()(rho.index(detail::sector_n1(k1, i), detail::sector_n1(k2, j)),
                         rho.index(detail::sector_n2(k1, i), detail::sector_n2(k2, j))) = y(i, j);
      }
    }
    return out;
  }

 private:
  int d_;
  std::vector<MatXd> bands_;
};

inline FockOperator evolve_channel(const FockOperator& rho, const ChannelPoint& ch) {
  return ThermalAttenuator(rho.cutoff(), ch).apply(rho);
}

/// (rho_R)_{(i,j),(k,l)} = rho_{(i,k),(j,l)}.
inline FockOperator realign(const FockOperator& rho) {
  const int d = rho.cutoff();
  MatXc out(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) out(i * d + j, k * d + l) = rho.matrix()(i * d + k, j * d + l);
  return FockOperator(d, std::move(out));
}

/// Transpose on mode 2: (rho^T2)_{(i,j),(k,l)} = rho_{(i,l),(k,j)}.
inline FockOperator partial_transpose(const FockOperator& rho) {
  const int d = rho.cutoff();
  MatXc out(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) out(i * d + j, k * d + l) = rho.matrix()(i * d + l, k * d + j);
  return FockOperator(d, std::move(out));
}

/// Sum of singular values. The matrix is split into the independent blocks of
/// its zero pattern before each block is decomposed.
inline double trace_norm(const MatXc& m) {
  double total = 0.0;
  for (const detail::Block& b : detail::bipartite_blocks(m)) {
    if (b.rows.empty() || b.cols.empty()) continue;
    const MatXc sub = detail::extract(m, b.rows, b.cols);
    Eigen::BDCSVD<MatXc> svd(sub);
    if (svd.info() != Eigen::Success) throw NumericalError("trace_norm: SVD did not converge");
    total += svd.singularValues().sum();
  }
  return total;
}

inline double trace_norm(const FockOperator& m) { return trace_norm(m.matrix()); }

/// Re Tr M, the weak realignment quantity when M = rho_R.
inline double realignment_trace(const FockOperator& m) { return m.trace().real(); }

/// Smallest eigenvalue of the partial transpose of rho / Tr rho.
inline double ppt_min_eigenvalue(const FockOperator& rho) {
  const FockOperator pt = partial_transpose(rho);
  const double tr = rho.trace().real();
  const MatXc& m = pt.matrix();
  const int n = static_cast<int>(m.rows());

  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (m(i, j) != 0.0) {
        const int a = detail::uf_find(parent, i), b = detail::uf_find(parent, j);
        if (a != b) parent[a] = b;
      }
  std::vector<std::vector<int>> groups(n);
  for (int i = 0; i < n; ++i) groups[detail::uf_find(parent, i)].push_back(i);

  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& g : groups) {
    if (g.empty()) continue;
    MatXc sub = detail::extract(m, g, g) / tr;
    sub = 0.5 * (sub + sub.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<MatXc> es(sub, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("ppt_min_eigenvalue: eigensolver failed");
    lowest = std::min(lowest, es.eigenvalues().minCoeff());
  }
  return lowest;
}

/// Single-mode ladder moments of a two-mode state, all divided by Tr rho.
struct LadderMoments {
  Complex a1, a2;    // <a_i>
  Complex a1a1, a2a2;  // <a_i^2>
  double n1 = 0.0, n2 = 0.0;  // <a_i^dag a_i>
  Complex a1a2;      // <a1 a2>
  Complex a1d_a2;    // <a1^dag a2>
};

inline LadderMoments ladder_moments(const FockOperator& rho) {
  const int d = rho.cutoff();
  const MatXc& r = rho.matrix();
  const double tr = rho.trace().real();
  auto elem = [&](int n1, int n2, int m1, int m2) -> Complex {
    if (n1 < 0 || n2 < 0 || m1 < 0 || m2 < 0 || n1 >= d || n2 >= d || m1 >= d || m2 >= d) return 0.0;
    return r(n1 * d + n2, m1 * d + m2);
  };
  auto sq = [](int n) { return std::sqrt(static_cast<double>(n)); };
  LadderMoments mo;
  // Tr[rho X] = sum <m|rho|n> <n|X|m>, with X lowering m to n.
  for (int m1 = 0; m1 < d; ++m1)
    for (int m2 = 0; m2 < d; ++m2) {
      mo.a1 += elem(m1, m2, m1 - 1, m2) * sq(m1);
      mo.a2 += elem(m1, m2, m1, m2 - 1) * sq(m2);
      mo.a1a1 += elem(m1, m2, m1 - 2, m2) * sq(m1) * sq(m1 - 1 > 0 ? m1 - 1 : 0);
      mo.a2a2 += elem(m1, m2, m1, m2 - 2) * sq(m2) * sq(m2 - 1 > 0 ? m2 - 1 : 0);
      mo.n1 += r(m1 * d + m2, m1 * d + m2).real() * m1;
      mo.n2 += r(m1 * d + m2, m1 * d + m2).real() * m2;
      mo.a1a2 += elem(m1, m2, m1 - 1, m2 - 1) * sq(m1) * sq(m2);
      mo.a1d_a2 += elem(m1, m2, m1 + 1, m2 - 1) * sq(m1 + 1) * sq(m2);
    }
  mo.a1 /= tr;
  mo.a2 /= tr;
  mo.a1a1 /= tr;
  mo.a2a2 /= tr;
  mo.n1 /= tr;
  mo.n2 /= tr;
  mo.a1a2 /= tr;
  mo.a1d_a2 /= tr;
  return mo;
}

/// Quadrature covariance V_ij = <{dR_i, dR_j}>/2 in the order (x1, p1, x2, p2),
/// x = (a + a^dag)/sqrt2, p = (a - a^dag)/(i sqrt2); the vacuum has V = I/2.
inline Eigen::Matrix4d quadrature_covariance(const FockOperator& rho) {
  const LadderMoments mo = ladder_moments(rho);
  const Complex s1 = mo.a1a1 - mo.a1 * mo.a1;
  const Complex s2 = mo.a2a2 - mo.a2 * mo.a2;
  const double n1 = mo.n1 - std::norm(mo.a1);
  const double n2 = mo.n2 - std::norm(mo.a2);
  const Complex P = mo.a1a2 - mo.a1 * mo.a2;
  const Complex Q = mo.a1d_a2 - std::conj(mo.a1) * mo.a2;

  Eigen::Matrix4d V;
  V(0, 0) = s1.real() + n1 + 0.5;
  V(1, 1) = -s1.real() + n1 + 0.5;
  V(0, 1) = V(1, 0) = s1.imag();
  V(2, 2) = s2.real() + n2 + 0.5;
  V(3, 3) = -s2.real() + n2 + 0.5;
  V(2, 3) = V(3, 2) = s2.imag();
  V(0, 2) = V(2, 0) = P.real() + Q.real();
  V(1, 3) = V(3, 1) = -P.real() + Q.real();
  V(0, 3) = V(3, 0) = P.imag() + Q.imag();
  V(1, 2) = V(2, 1) = P.imag() - Q.imag();
  return V;
}

/// Simon's PPT test on V = [[A, C], [C^T, B]]: the state is detected as
/// entangled when
///   det A det B + (1/4 - |det C|)^2 - tr(A J C J B J C^T J) < (det A + det B)/4.
/// lhs = (det A + det B)/4, rhs = the left-hand combination above.
inline CriterionVerdict simon_criterion(const Eigen::Matrix4d& V) {
  const Eigen::Matrix2d A = V.block<2, 2>(0, 0), B = V.block<2, 2>(2, 2), C = V.block<2, 2>(0, 2);
  Eigen::Matrix2d J;
  J << 0.0, 1.0, -1.0, 0.0;
  const double dA = A.determinant(), dB = B.determinant(), dC = C.determinant();
  const double cross = (A * J * C * J * B * J * C.transpose() * J).trace();
  const double rhs = dA * dB + (0.25 - std::abs(dC)) * (0.25 - std::abs(dC)) - cross;
  CriterionVerdict v = CriterionVerdict::compare(0.25 * (dA + dB), rhs);
  v.diagnostics["det_A"] = dA;
  v.diagnostics["det_B"] = dB;
  v.diagnostics["det_C"] = dC;
  return v;
}

inline CriterionVerdict simon_criterion(const FockOperator& rho) {
  CriterionVerdict v = simon_criterion(quadrature_covariance(rho));
  v.diagnostics["tail_mass"] = rho.tail_mass();
  if (rho.tail_flagged()) v.flags.push_back("tail_mass");
  return v;
}

/// Realignment quantities of an unnormalized state, relative to its trace.
struct RealignmentReport {
  double trace = 0.0;
  double trace_ratio = 0.0;       // Tr rho_R / Tr rho
  double trace_norm_ratio = 0.0;  // ||rho_R||_1 / Tr rho
  double tail_mass = 0.0;
  bool tail_flagged = false;
};

inline RealignmentReport realignment_report(const FockOperator& rho, bool with_trace_norm = true) {
  const FockOperator r = realign(rho);
  RealignmentReport rep;
  rep.trace = rho.trace().real();
  rep.trace_ratio = realignment_trace(r) / rep.trace;
  rep.trace_norm_ratio = with_trace_norm ? trace_norm(r) / rep.trace : 0.0;
  rep.tail_mass = rho.tail_mass();
  rep.tail_flagged = rep.tail_mass > kTailMassThreshold;
  return rep;
}

}  // namespace cvrealign

// SPDX-License-Identifier: Apache-2.0
//
// musched: user selection for block-diagonalized multiuser MIMO downlinks
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Random generators and independent reference computations for the test
// suites. Nothing here calls the library routine it is used to check.

#ifndef MUSCHED_TESTS_SUPPORT_HPP
#define MUSCHED_TESTS_SUPPORT_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace musched::testing {

using CMatrix = Eigen::MatrixXcd;

inline CMatrix random_cmatrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64 &rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  CMatrix a(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) a(r, c) = {g(rng), g(rng)};
  return a;
}

/// Well-conditioned Hermitian positive definite matrix.
inline CMatrix random_pd(Eigen::Index dim, std::mt19937_64 &rng) {
  const CMatrix a = random_cmatrix(dim, dim, rng);
  return a * a.adjoint() + 0.5 * CMatrix::Identity(dim, dim);
}

/// log2 det of a Hermitian PD matrix from its eigenvalues.
inline double logdet_eigen(const CMatrix &a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) acc += std::log2(es.eigenvalues()(i));
  return acc;
}

/// log2 |det| of a general square matrix through partial-pivot LU.
inline double logdet_lu(const CMatrix &a) {
  return std::log2(std::abs(a.partialPivLu().determinant()));
}

/// Inverse through LU, not Cholesky.
inline CMatrix inverse_lu(const CMatrix &a) { return a.partialPivLu().inverse(); }

/// ((M/P) I + sum_k H_k^H H_k)^-1 assembled and inverted in one shot.
inline CMatrix direct_omega(const std::vector<CMatrix> &channels, Eigen::Index m,
                            double power_ratio) {
  CMatrix acc = CMatrix::Identity(m, m) / power_ratio;
  for (const auto &h : channels) acc += h.adjoint() * h;
  return inverse_lu(acc);
}

inline double rel_frobenius(const CMatrix &a, const CMatrix &b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

/// Brute-force grid maximization of sum log2(1 + p_i g_i) over two modes
/// with p_1 + p_2 = total.
inline double waterfill_grid_two(double g1, double g2, double total, int steps) {
  double best = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double p1 = total * i / steps;
    best = std::max(best, std::log2(1.0 + p1 * g1) + std::log2(1.0 + (total - p1) * g2));
  }
  return best;
}

/// Grid maximization over three modes on the simplex p1 + p2 + p3 = total.
inline double waterfill_grid_three(const double g[3], double total, int steps) {
  double best = 0.0;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; i + j <= steps; ++j) {
      const double p1 = total * i / steps, p2 = total * j / steps;
      const double p3 = total - p1 - p2;
      best = std::max(best, std::log2(1.0 + p1 * g[0]) + std::log2(1.0 + p2 * g[1]) +
                                std::log2(1.0 + p3 * g[2]));
    }
  }
  return best;
}

/// Orthogonal projector onto the row space of h (as a subspace of C^M),
/// built from the eigenvectors of h^H h.
inline CMatrix row_space_projector(const CMatrix &h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.adjoint() * h);
  const auto &ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  CMatrix p = CMatrix::Zero(h.cols(), h.cols());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 1e-10 * top) p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  return p;
}

}  // namespace musched::testing

#endif  // MUSCHED_TESTS_SUPPORT_HPP

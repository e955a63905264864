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

#ifndef MUSCHED_FLOPMODEL_HPP
#define MUSCHED_FLOPMODEL_HPP

#include <algorithm>
#include <cstdint>

#include "musched/channel.hpp"
#include "musched/select.hpp"

// Analytic floating-point operation counts of the selectors.
//
// A complex multiply-add is 8 real flops, so an (a x b)(b x c) complex
// product costs 8abc. Cholesky-based costs for an n x n Hermitian PD
// matrix are
//   determinant: 4/3 n^3 - 3/2 n^2 + 13/6 n
//   inverse:     4 n^3 - 1/2 n^2 - 3/2 n
// and a full complex SVD (U, sigma, V) of an r x c matrix with
// m = max(r, c), n = min(r, c) is charged 4 (4 m^2 n + 22 n^3), i.e. four
// times the real R-SVD count of Golub and Van Loan.
//
// Evaluating I_N + H Omega H^H costs 8 M^2 N + 8 M N^2 + N; refreshing
// Omega with one Woodbury step costs psi_omega(M, N). Water-filling and
// precoder assembly are not charged for any algorithm.
//
// Polynomials with fractional coefficients are accumulated in integer
// sixths and divided once, so results for integer M, N are exact.

namespace musched::flops {

using Sixths = std::int64_t;

namespace detail {

constexpr Sixths i64(Eigen::Index v) { return static_cast<Sixths>(v); }

constexpr Sixths chol_det_sixths(Sixths n) { return 8 * n * n * n - 9 * n * n + 13 * n; }

constexpr Sixths pd_inverse_sixths(Sixths n) { return 24 * n * n * n - 3 * n * n - 9 * n; }

/// I_N + H Omega H^H
constexpr Sixths quad_form_sixths(Sixths m, Sixths n) {
  return 6 * (8 * m * m * n + 8 * m * n * n + n);
}

constexpr Sixths matmul_sixths(Sixths a, Sixths b, Sixths c) { return 6 * 8 * a * b * c; }

constexpr Sixths svd_sixths(Sixths rows, Sixths cols) {
  const auto m = std::max(rows, cols);
  const auto n = std::min(rows, cols);
  if (n <= 0) return 0;
  return 6 * 4 * (4 * m * m * n + 22 * n * n * n);
}

/// One BD rate evaluation for a set of `users` users: per user a null-space
/// SVD of the others' stacked channel, the effective channel product, and
/// the effective channel's SVD.
constexpr Sixths bd_rate_sixths(Sixths m, Sixths n, Sixths users) {
  const auto others = (users - 1) * n;
  const auto free_dims = m - others;
  return users *
         (svd_sixths(others, m) + matmul_sixths(n, m, free_dims) + svd_sixths(n, free_dims));
}

constexpr double from_sixths(Sixths s) { return static_cast<double>(s) / 6.0; }

constexpr Sixths psi_omega_sixths(Sixths m, Sixths n) {
  return 6 * (32 * m * m * n + 16 * m * n * n + 2 * m * m + n) + pd_inverse_sixths(n);
}

}  // namespace detail

/// Cost of one Woodbury refresh of Omega:
/// 32 M^2 N + 16 M N^2 + 2 M^2 + N + 4 N^3 - 1/2 N^2 - 3/2 N.
constexpr double psi_omega(Eigen::Index m, Eigen::Index n) {
  return detail::from_sixths(detail::psi_omega_sixths(detail::i64(m), detail::i64(n)));
}

/// Per-candidate, per-term cost inside the conditional entropy sum:
/// 4/3 N^3 - 3/2 N^2 + 19/6 N + 8 M^2 N + 8 M N^2.
constexpr double ce_term(Eigen::Index m, Eigen::Index n) {
  return detail::from_sixths(detail::quad_form_sixths(detail::i64(m), detail::i64(n)) +
                             detail::chol_det_sixths(detail::i64(n)));
}

struct FlopReport {
  Algorithm algorithm = Algorithm::CondEntropy;
  std::size_t k_total = 0;
  double flops = 0.0;
};

/// Conditional entropy selection:
///   sum_{i=1}^{K} { psi_omega (i-1) + ce_term i } (K_T - i + 1) + K psi_omega
inline FlopReport psi_ce(const SystemConfig &config) {
  using detail::i64;
  const Sixths m = i64(config.m), n = i64(config.n), kt = static_cast<Sixths>(config.k_total);
  const Sixths k = static_cast<Sixths>(std::min(config.k_max, config.k_total));
  const Sixths omega6 = detail::psi_omega_sixths(m, n);
  const Sixths term6 = detail::quad_form_sixths(m, n) + detail::chol_det_sixths(n);
  Sixths total = 0;
  for (Sixths i = 1; i <= k; ++i) total += (omega6 * (i - 1) + term6 * i) * (kt - i + 1);
  total += k * omega6;
  return {Algorithm::CondEntropy, config.k_total, detail::from_sixths(total)};
}

namespace detail {

inline Sixths binomial(Sixths n, Sixths k) {
  if (k < 0 || k > n) return 0;
  Sixths b = 1;
  for (Sixths j = 1; j <= k; ++j) b = b * (n - k + j) / j;
  return b;
}

}  // namespace detail

/// Flop model of any selector. Cond-entropy delegates to psi_ce; the other
/// models, per greedy step i = 1..K with K_T - i + 1 candidates, are
///
///   c-alg       one BD rate of i users per candidate
///   brute-force one BD rate of |S| users for each of the C(K_T, |S|) sets
///   upperbound  quad form + Cholesky det per candidate, K Omega refreshes
///   n-alg       4MN per candidate norm, plus 16M per row-vs-basis
///               projection (N (i-1) N of them) and the Gram-Schmidt
///               orthonormalization of each committed user's rows
///   chordal     one row-space SVD per user, 4MN norms at step 1, then
///               after each commit a cross Gram N x M x N plus 4N^2 between
///               the new member and every remaining candidate
///   row-norm    4MN norms at step 1, then one null-space SVD per step and
///               per candidate an N x M x (M - (i-1)N) product and row norms
inline FlopReport baseline_flops(Algorithm algorithm, const SystemConfig &config) {
  using detail::i64;
  const Sixths m = i64(config.m), n = i64(config.n), kt = static_cast<Sixths>(config.k_total);
  const Sixths k = static_cast<Sixths>(std::min(config.k_max, config.k_total));
  Sixths total = 0;

  switch (algorithm) {
    case Algorithm::CondEntropy: return psi_ce(config);
    case Algorithm::CAlg:
      for (Sixths i = 1; i <= k; ++i) total += (kt - i + 1) * detail::bd_rate_sixths(m, n, i);
      break;
    case Algorithm::BruteForce:
      for (Sixths i = 1; i <= k; ++i)
        total += detail::binomial(kt, i) * detail::bd_rate_sixths(m, n, i);
      break;
    case Algorithm::Upperbound: {
      const Sixths term6 = detail::quad_form_sixths(m, n) + detail::chol_det_sixths(n);
      for (Sixths i = 1; i <= k; ++i) total += (kt - i + 1) * term6;
      total += k * detail::psi_omega_sixths(m, n);
      break;
    }
    case Algorithm::NAlg:
      for (Sixths i = 1; i <= k; ++i) {
        const Sixths basis = (i - 1) * n;
        total += (kt - i + 1) * 6 * (n * basis * 16 * m + 4 * m * n);
        // orthonormalize the committed rows: project, then normalize
        for (Sixths r = 0; r < n; ++r) total += 6 * ((basis + r) * 16 * m + 6 * m);
      }
      break;
    case Algorithm::Chordal:
      total += kt * detail::svd_sixths(n, m) + kt * 6 * 4 * m * n;
      for (Sixths i = 1; i < k; ++i)
        total += (kt - i) * (detail::matmul_sixths(n, m, n) + 6 * 4 * n * n);
      break;
    case Algorithm::RowNorm:
      total += kt * 6 * 4 * m * n;
      for (Sixths i = 2; i <= k; ++i) {
        const Sixths free_dims = m - (i - 1) * n;
        total += detail::svd_sixths((i - 1) * n, m);
        total += (kt - i + 1) * (detail::matmul_sixths(n, m, free_dims) + 6 * (4 * n * free_dims + n));
      }
      break;
  }
  return {algorithm, config.k_total, detail::from_sixths(total)};
}

}  // namespace musched::flops

#endif  // MUSCHED_FLOPMODEL_HPP

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

#ifndef MUSCHED_MATCORE_HPP
#define MUSCHED_MATCORE_HPP

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "musched/errors.hpp"

// Dense complex linear algebra used by every other module. Matrices are
// plain Eigen::MatrixXcd values; everything here is a pure function.

namespace musched {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// Relative rank cut-off used when extracting null spaces.
inline constexpr double kRankTolerance = 1e-10;

struct SvdResult {
  CMatrix left_vectors;     // U, rows x rows
  RVector singular_values;  // descending, min(rows, cols) entries
  CMatrix right_vectors;    // V, cols x cols

  CMatrix reconstruct() const {
    const auto rows = left_vectors.rows();
    const auto cols = right_vectors.rows();
    CMatrix sigma = CMatrix::Zero(rows, cols);
    for (Eigen::Index i = 0; i < singular_values.size(); ++i) sigma(i, i) = singular_values(i);
    return left_vectors * sigma * right_vectors.adjoint();
  }
};

inline bool all_finite(const CMatrix &a) { return a.allFinite(); }

/// a * b^H
inline CMatrix herm_product(const CMatrix &a, const CMatrix &b) {
  detail::require(a.cols() == b.cols(), "herm_product: column counts differ (" +
                                            std::to_string(a.cols()) + " vs " +
                                            std::to_string(b.cols()) + ")");
  return a * b.adjoint();
}

/// a^H * b
inline CMatrix adjoint_product(const CMatrix &a, const CMatrix &b) {
  detail::require(a.rows() == b.rows(), "adjoint_product: row counts differ (" +
                                            std::to_string(a.rows()) + " vs " +
                                            std::to_string(b.rows()) + ")");
  return a.adjoint() * b;
}

inline CMatrix hermitian_part(const CMatrix &a) { return (a + a.adjoint()) * 0.5; }

namespace detail {

inline Eigen::LLT<CMatrix> cholesky(const CMatrix &a, const char *who) {
  require(a.rows() == a.cols(), std::string(who) + ": matrix is not square");
  require(a.rows() > 0, std::string(who) + ": empty matrix");
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite(std::string(who) + ": Cholesky pivot <= 0");
  return llt;
}

}  // namespace detail

/// log2 det(a) for Hermitian positive definite a, via a = L L^H.
inline double chol_logdet(const CMatrix &a) {
  const auto llt = detail::cholesky(a, "chol_logdet");
  const CMatrix &l = llt.matrixLLT();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) acc += std::log2(l(i, i).real());
  return 2.0 * acc;
}

inline CMatrix pd_inverse(const CMatrix &a) {
  const auto llt = detail::cholesky(a, "pd_inverse");
  return hermitian_part(llt.solve(CMatrix::Identity(a.rows(), a.cols())));
}

/// Rank-N refresh of an M x M inverse:
///   (omega^-1 + h^H h)^-1 = omega - omega h^H (I_N + h omega h^H)^-1 h omega
/// Only the N x N inner matrix is factored.
inline CMatrix woodbury_update(const CMatrix &omega, const CMatrix &h) {
  detail::require(omega.rows() == omega.cols(), "woodbury_update: omega is not square");
  detail::require(h.cols() == omega.rows(), "woodbury_update: h has " + std::to_string(h.cols()) +
                                                " columns, omega is " +
                                                std::to_string(omega.rows()) + " square");
  const CMatrix g = h * omega;  // N x M; omega Hermitian so g^H = omega h^H
  const CMatrix inner = CMatrix::Identity(h.rows(), h.rows()) + g * h.adjoint();
  const auto llt = detail::cholesky(inner, "woodbury_update");
  return hermitian_part(omega - g.adjoint() * llt.solve(g));
}

inline SvdResult svd(const CMatrix &a) {
  detail::require(all_finite(a), "svd: non-finite entries");
  if (a.size() == 0) {
    return {CMatrix::Identity(a.rows(), a.rows()), RVector(0),
            CMatrix::Identity(a.cols(), a.cols())};
  }
  Eigen::JacobiSVD<CMatrix, Eigen::ColPivHouseholderQRPreconditioner> dec(
      a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

/// Number of singular values above kRankTolerance * sigma_max.
inline Eigen::Index numerical_rank(const RVector &sigma) {
  if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
  const double cut = kRankTolerance * sigma(0);
  Eigen::Index r = 0;
  while (r < sigma.size() && sigma(r) > cut) ++r;
  return r;
}

/// Orthonormal basis (total_cols x (total_cols - rank)) of {x : a x = 0}.
/// An a with zero rows yields the identity.
inline CMatrix null_space_basis(const CMatrix &a, Eigen::Index total_cols) {
  detail::require(total_cols > 0, "null_space_basis: total_cols must be positive");
  if (a.rows() == 0) return CMatrix::Identity(total_cols, total_cols);
  detail::require(a.cols() == total_cols, "null_space_basis: a has " + std::to_string(a.cols()) +
                                              " columns, expected " +
                                              std::to_string(total_cols));
  const auto dec = svd(a);
  const auto rank = numerical_rank(dec.singular_values);
  return dec.right_vectors.rightCols(total_cols - rank);
}

/// Orthonormal basis (cols x rank) of the row space of a, expressed as the
/// column space of a^H.
inline CMatrix row_space_basis(const CMatrix &a) {
  const auto dec = svd(a);
  return dec.right_vectors.leftCols(numerical_rank(dec.singular_values));
}

}  // namespace musched

#endif  // MUSCHED_MATCORE_HPP

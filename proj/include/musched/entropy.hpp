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

#ifndef MUSCHED_ENTROPY_HPP
#define MUSCHED_ENTROPY_HPP

#include <algorithm>
#include <span>
#include <vector>

#include "musched/channel.hpp"
#include "musched/matcore.hpp"

// Gaussian entropy metrics of received signals under the isotropic input
// covariance Q = (P/M) I. All values are in bits and omit the additive
// N log2(pi e) constants, which never change an argmax.

namespace musched {

/// Entropy of one user's received signal: log2 det(I_N + (P/M) H H^H).
inline double diff_entropy(const CMatrix &h, double power_ratio) {
  detail::require(power_ratio > 0.0, "diff_entropy: power ratio must be positive");
  const CMatrix cov = CMatrix::Identity(h.rows(), h.rows()) + power_ratio * herm_product(h, h);
  return chol_logdet(cov);
}

/// Joint entropy of several users' signals, evaluated on the M x M side:
/// log2 det(I_M + (P/M) sum_i H_i^H H_i).
inline double joint_entropy(std::span<const CMatrix> channels, double power_ratio) {
  detail::require(power_ratio > 0.0, "joint_entropy: power ratio must be positive");
  if (channels.empty()) return 0.0;
  const auto m = channels.front().cols();
  CMatrix acc = CMatrix::Identity(m, m);
  for (const auto &h : channels) {
    detail::require(h.cols() == m, "joint_entropy: channels disagree on M");
    acc.noalias() += power_ratio * h.adjoint() * h;
  }
  return chol_logdet(acc);
}

/// Joint entropy from the stacked received-signal covariance Sigma, whose
/// (i, j) block is (P/M) H_i H_j^H plus I_N on the diagonal. Evaluated on
/// the nN x nN side, independently of joint_entropy.
inline double joint_entropy_via_sigma(std::span<const CMatrix> channels, double power_ratio) {
  detail::require(power_ratio > 0.0, "joint_entropy_via_sigma: power ratio must be positive");
  if (channels.empty()) return 0.0;
  Eigen::Index total = 0;
  for (const auto &h : channels) total += h.rows();
  if (total == 0) return 0.0;
  CMatrix sigma(total, total);
  Eigen::Index row = 0;
  for (const auto &hi : channels) {
    Eigen::Index col = 0;
    for (const auto &hj : channels) {
      sigma.block(row, col, hi.rows(), hj.rows()) = power_ratio * herm_product(hi, hj);
      col += hj.rows();
    }
    row += hi.rows();
  }
  sigma += CMatrix::Identity(total, total);
  return chol_logdet(sigma);
}

/// I(y1; y2) = H(y1) + H(y2) - H(y1, y2). Zero when H1 H2^H = 0.
/// Round-off negatives down to -1e-9 are reported as 0.
inline double mutual_information_pair(const CMatrix &h1, const CMatrix &h2, double power_ratio) {
  const CMatrix pair[] = {h1, h2};
  const double mi = diff_entropy(h1, power_ratio) + diff_entropy(h2, power_ratio) -
                    joint_entropy(pair, power_ratio);
  return (mi < 0.0 && mi >= -1e-9) ? 0.0 : mi;
}

/// Cached inverses for a selected set S:
///   omega()            = ((M/P) I_M + H(S)^H H(S))^-1
///   leave_one_out(j)   = the same with member j removed
/// Each addition is a Woodbury refresh, never a full M x M inversion.
class OmegaState {
 public:
  OmegaState(Eigen::Index m, double power_ratio)
      : power_ratio_(power_ratio), omega_(power_ratio * CMatrix::Identity(m, m)) {
    detail::require(m > 0, "OmegaState: M must be positive");
    detail::require(power_ratio > 0.0, "OmegaState: power ratio must be positive");
  }

  double power_ratio() const { return power_ratio_; }
  const UserList &members() const { return members_; }
  const CMatrix &omega() const { return omega_; }
  const CMatrix &leave_one_out(std::size_t j) const { return leave_one_out_.at(j); }
  Eigen::Index dim() const { return omega_.rows(); }

  bool contains(UserIndex k) const {
    return std::find(members_.begin(), members_.end(), k) != members_.end();
  }

  /// Appends user k with channel h.
  void add(UserIndex k, const CMatrix &h) {
    detail::require(!contains(k), "OmegaState::add: user " + std::to_string(k) +
                                      " is already a member");
    for (auto &loo : leave_one_out_) loo = woodbury_update(loo, h);
    leave_one_out_.push_back(omega_);
    omega_ = woodbury_update(omega_, h);
    members_.push_back(k);
  }

 private:
  double power_ratio_;
  CMatrix omega_;
  UserList members_;
  std::vector<CMatrix> leave_one_out_;
};

/// The per-user conditional entropies that make up H_SC(S + {t}); entry 0
/// is the candidate's own term, entry j+1 belongs to member j.
inline std::vector<double> conditional_entropy_terms(const OmegaState &state,
                                                     const ChannelSet &channels,
                                                     UserIndex candidate) {
  detail::require(candidate < channels.size(), "candidate index out of range");
  detail::require(!state.contains(candidate),
                  "sum_conditional_entropy: candidate " + std::to_string(candidate) +
                      " is already selected");
  const CMatrix &ht = channels[candidate];
  const auto eye = CMatrix::Identity(ht.rows(), ht.rows());

  std::vector<double> terms;
  terms.reserve(state.members().size() + 1);
  terms.push_back(chol_logdet(eye + ht * state.omega() * ht.adjoint()));
  for (std::size_t j = 0; j < state.members().size(); ++j) {
    const CMatrix &hs = channels[state.members()[j]];
    const CMatrix omega_sj_t = woodbury_update(state.leave_one_out(j), ht);
    terms.push_back(chol_logdet(eye + hs * omega_sj_t * hs.adjoint()));
  }
  return terms;
}

/// Sum over S + {t} of each user's entropy conditioned on all the others.
inline double sum_conditional_entropy(const OmegaState &state, const ChannelSet &channels,
                                      UserIndex candidate) {
  double acc = 0.0;
  for (double term : conditional_entropy_terms(state, channels, candidate)) acc += term;
  return acc;
}

/// Entropy gain of appending t to S: log2 det(I_N + H_t omega(S) H_t^H),
/// which equals joint_entropy(S + {t}) - joint_entropy(S).
inline double joint_entropy_gain(const OmegaState &state, const ChannelSet &channels,
                                 UserIndex candidate) {
  const CMatrix &ht = channels[candidate];
  return chol_logdet(CMatrix::Identity(ht.rows(), ht.rows()) +
                     ht * state.omega() * ht.adjoint());
}

}  // namespace musched

#endif  // MUSCHED_ENTROPY_HPP

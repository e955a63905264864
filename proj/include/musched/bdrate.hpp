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

#ifndef MUSCHED_BDRATE_HPP
#define MUSCHED_BDRATE_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "musched/channel.hpp"
#include "musched/matcore.hpp"

namespace musched {

struct WaterfillResult {
  std::vector<double> powers;  // same order as the input gains
  double water_level = 0.0;
  double rate = 0.0;  // bits/s/Hz
};

/// Optimal split of total_power over parallel channels with gains
/// lambda_i^2: p_i = max(0, mu - 1/lambda_i^2), sum p_i = total_power.
///
/// Exact active-set solution. Gains are ranked descending (ties by input
/// position) and the largest prefix whose weakest member still gets positive
/// power is the active set.
inline WaterfillResult waterfill(std::span<const double> gains, double total_power) {
  detail::require(total_power > 0.0, "waterfill: total power must be positive");
  detail::require(!gains.empty(), "waterfill: no modes");
  for (double g : gains)
    detail::require(g >= 0.0 && std::isfinite(g), "waterfill: gains must be finite and >= 0");

  WaterfillResult out;
  out.powers.assign(gains.size(), 0.0);

  std::vector<std::size_t> order(gains.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return gains[a] > gains[b]; });

  std::size_t positive = 0;
  while (positive < order.size() && gains[order[positive]] > 0.0) ++positive;
  if (positive == 0) return out;

  std::vector<double> inv_prefix(positive + 1, 0.0);
  for (std::size_t i = 0; i < positive; ++i)
    inv_prefix[i + 1] = inv_prefix[i] + 1.0 / gains[order[i]];

  std::size_t active = positive;
  double mu = 0.0;
  for (; active >= 1; --active) {
    mu = (total_power + inv_prefix[active]) / static_cast<double>(active);
    if (mu - 1.0 / gains[order[active - 1]] > 0.0) break;
  }

  out.water_level = mu;
  for (std::size_t i = 0; i < active; ++i) {
    const auto idx = order[i];
    out.powers[idx] = mu - 1.0 / gains[idx];
    out.rate += std::log2(1.0 + out.powers[idx] * gains[idx]);
  }
  return out;
}

/// Block-diagonalization precoding of a user set with joint water-filling.
struct BdSolution {
  UserList users;
  std::vector<CMatrix> precoders;       // T_k, M x L_k, power already applied
  std::vector<double> mode_gains;       // lambda_i^2, all users' modes flattened
  std::vector<std::size_t> mode_owner;  // position in `users` owning each mode
  std::vector<double> powers;           // p_i per mode
  double sum_rate = 0.0;
};

inline BdSolution bd_solution(const ChannelSet &channels, const UserList &users, double power) {
  detail::require(power > 0.0, "bd_solution: power must be positive");
  detail::require_valid_users(channels, users);

  BdSolution out;
  out.users = users;
  if (users.empty()) return out;

  const auto m = channels.tx_antennas();
  std::vector<CMatrix> steering;  // V_k W_k, before power loading
  steering.reserve(users.size());
  for (std::size_t j = 0; j < users.size(); ++j) {
    const CMatrix null_basis = null_space_basis(stack(channels, without(users, j)), m);
    if (null_basis.cols() == 0)
      throw EmptyNullSpace("bd_solution: user " + std::to_string(users[j]) +
                           " has no interference-free subspace; set of " +
                           std::to_string(users.size()) + " users is too large");
    const CMatrix effective = channels[users[j]] * null_basis;
    const auto dec = svd(effective);
    const auto streams = std::min<Eigen::Index>(effective.rows(), null_basis.cols());
    for (Eigen::Index i = 0; i < streams; ++i) {
      const double s = dec.singular_values(i);
      out.mode_gains.push_back(s * s);
      out.mode_owner.push_back(j);
    }
    steering.push_back(null_basis * dec.right_vectors.leftCols(streams));
  }

  const auto wf = waterfill(out.mode_gains, power);
  out.powers = wf.powers;
  out.sum_rate = wf.rate;

  out.precoders.reserve(users.size());
  std::size_t mode = 0;
  for (std::size_t j = 0; j < users.size(); ++j) {
    CMatrix t = steering[j];
    for (Eigen::Index c = 0; c < t.cols(); ++c, ++mode) t.col(c) *= std::sqrt(out.powers[mode]);
    out.precoders.push_back(std::move(t));
  }
  return out;
}

/// Achievable BD sum rate R(S) in bits/s/Hz; 0 for the empty set.
inline double sum_rate(const ChannelSet &channels, const UserList &users, double power) {
  return bd_solution(channels, users, power).sum_rate;
}

}  // namespace musched

#endif  // MUSCHED_BDRATE_HPP

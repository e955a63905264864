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

#ifndef MUSCHED_SELECT_HPP
#define MUSCHED_SELECT_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string_view>
#include <vector>

#include "musched/bdrate.hpp"
#include "musched/channel.hpp"
#include "musched/entropy.hpp"
#include "musched/matcore.hpp"

namespace musched {

enum class Algorithm { CondEntropy, BruteForce, CAlg, NAlg, Upperbound, Chordal, RowNorm };

inline constexpr std::array kAllAlgorithms = {
    Algorithm::CondEntropy, Algorithm::BruteForce, Algorithm::CAlg,   Algorithm::NAlg,
    Algorithm::Upperbound,  Algorithm::Chordal,    Algorithm::RowNorm};

/// Stable tag used on the command line and in CSV output.
constexpr std::string_view tag(Algorithm a) {
  switch (a) {
    case Algorithm::CondEntropy: return "cond-entropy";
    case Algorithm::BruteForce: return "brute-force";
    case Algorithm::CAlg: return "c-alg";
    case Algorithm::NAlg: return "n-alg";
    case Algorithm::Upperbound: return "upperbound";
    case Algorithm::Chordal: return "chordal";
    case Algorithm::RowNorm: return "row-norm";
  }
  return "?";
}

constexpr std::optional<Algorithm> parse_algorithm(std::string_view s) {
  for (auto a : kAllAlgorithms)
    if (tag(a) == s) return a;
  return std::nullopt;
}

struct Selection {
  UserList users;  // in selection order (ascending for brute force)
  double sum_rate = 0.0;
  Algorithm algorithm = Algorithm::CondEntropy;
  std::vector<double> metric_trace;  // winning score of each committed step
  /// Candidate whose addition lowered the rate and ended the greedy loop.
  std::optional<UserIndex> rejected;
};

inline constexpr std::uint64_t kDefaultBruteForceCap = 100000;

// ---------------------------------------------------------------------------
// Per-candidate metrics of the baseline selectors, exposed for testing.

/// Squared chordal distance between the row spaces spanned by the columns
/// of qa and qb (orthonormal): (ra + rb)/2 - ||qa^H qb||_F^2. Equals
/// N - ||qa^H qb||_F^2 for two rank-N channels.
inline double chordal_distance_sq_bases(const CMatrix &qa, const CMatrix &qb) {
  return 0.5 * static_cast<double>(qa.cols() + qb.cols()) -
         adjoint_product(qa, qb).squaredNorm();
}

inline double chordal_distance_sq(const CMatrix &ha, const CMatrix &hb) {
  return chordal_distance_sq_bases(row_space_basis(ha), row_space_basis(hb));
}

/// ||h||_F^2 after removing from every row of h its component in the span
/// of the orthonormal row vectors in basis (modified Gram-Schmidt sweep).
inline double projected_frobenius_sq(const CMatrix &h, const std::vector<CMatrix> &basis) {
  double acc = 0.0;
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    CMatrix row = h.row(r);
    for (const auto &q : basis) row -= (row * q.adjoint())(0, 0) * q;
    acc += row.squaredNorm();
  }
  return acc;
}

/// Product over rows of h of the squared row norms of h restricted to the
/// columns of null_basis.
inline double row_norm_score(const CMatrix &h, const CMatrix &null_basis) {
  const CMatrix projected = h * null_basis;
  double acc = 1.0;
  for (Eigen::Index r = 0; r < projected.rows(); ++r) acc *= projected.row(r).squaredNorm();
  return acc;
}

namespace detail {

inline void require_compatible(const ChannelSet &channels, const SystemConfig &config) {
  require(channels.size() >= 1, "selector: empty channel set");
  require(channels.tx_antennas() == config.m && channels.rx_antennas() == config.n,
          "selector: channel dimensions disagree with configuration");
}

/// Shared greedy loop. At each step the best-scoring remaining candidate p
/// (smallest index on ties) is tried; the loop stops at K users or as soon
/// as R(S + {p}) drops below R(S).
template <class Scorer>
Selection greedy(const ChannelSet &channels, const SystemConfig &config, Algorithm algorithm,
                 Scorer &scorer) {
  require_compatible(channels, config);
  const double power = config.power();
  Selection out;
  out.algorithm = algorithm;

  std::vector<bool> taken(channels.size(), false);
  const auto steps = std::min<std::size_t>(config.k_max, channels.size());
  for (std::size_t step = 0; step < steps; ++step) {
    std::optional<UserIndex> best;
    double best_score = -std::numeric_limits<double>::infinity();
    for (UserIndex t = 0; t < channels.size(); ++t) {
      if (taken[t]) continue;
      const double s = scorer.score(t);
      if (!best || s > best_score) {
        best = t;
        best_score = s;
      }
    }

    UserList trial = out.users;
    trial.push_back(*best);
    const double rate = sum_rate(channels, trial, power);
    if (rate < out.sum_rate) {
      out.rejected = *best;
      break;
    }
    out.users = std::move(trial);
    out.sum_rate = rate;
    out.metric_trace.push_back(best_score);
    taken[*best] = true;
    scorer.commit(*best);
  }
  return out;
}

class CondEntropyScorer {
 public:
  CondEntropyScorer(const ChannelSet &channels, const SystemConfig &config)
      : channels_(channels), state_(config.m, config.power_ratio()) {}
  double score(UserIndex t) const { return sum_conditional_entropy(state_, channels_, t); }
  void commit(UserIndex p) { state_.add(p, channels_[p]); }

 private:
  const ChannelSet &channels_;
  OmegaState state_;
};

class UpperboundScorer {
 public:
  UpperboundScorer(const ChannelSet &channels, const SystemConfig &config)
      : channels_(channels), state_(config.m, config.power_ratio()) {}
  double score(UserIndex t) const { return joint_entropy_gain(state_, channels_, t); }
  void commit(UserIndex p) { state_.add(p, channels_[p]); }

 private:
  const ChannelSet &channels_;
  OmegaState state_;
};

class CAlgScorer {
 public:
  CAlgScorer(const ChannelSet &channels, const SystemConfig &config)
      : channels_(channels), power_(config.power()) {}
  double score(UserIndex t) const {
    UserList trial = selected_;
    trial.push_back(t);
    return sum_rate(channels_, trial, power_);
  }
  void commit(UserIndex p) { selected_.push_back(p); }

 private:
  const ChannelSet &channels_;
  double power_;
  UserList selected_;
};

class NAlgScorer {
 public:
  explicit NAlgScorer(const ChannelSet &channels) : channels_(channels) {}
  double score(UserIndex t) const { return projected_frobenius_sq(channels_[t], basis_); }
  void commit(UserIndex p) {
    const CMatrix &h = channels_[p];
    for (Eigen::Index r = 0; r < h.rows(); ++r) {
      CMatrix row = h.row(r);
      const double original = row.norm();
      for (const auto &q : basis_) row -= (row * q.adjoint())(0, 0) * q;
      const double residual = row.norm();
      if (residual > kRankTolerance * original) basis_.push_back(row / residual);
    }
  }

 private:
  const ChannelSet &channels_;
  std::vector<CMatrix> basis_;  // orthonormal 1 x M rows
};

class ChordalScorer {
 public:
  explicit ChordalScorer(const ChannelSet &channels)
      : channels_(channels), distance_sum_(channels.size(), 0.0) {
    bases_.reserve(channels.size());
    for (const auto &h : channels.users) bases_.push_back(row_space_basis(h));
  }
  double score(UserIndex t) const {
    return any_selected_ ? distance_sum_[t] : channels_[t].squaredNorm();
  }
  void commit(UserIndex p) {
    any_selected_ = true;
    for (UserIndex t = 0; t < channels_.size(); ++t)
      distance_sum_[t] += chordal_distance_sq_bases(bases_[t], bases_[p]);
  }

 private:
  const ChannelSet &channels_;
  std::vector<CMatrix> bases_;
  std::vector<double> distance_sum_;
  bool any_selected_ = false;
};

class RowNormScorer {
 public:
  RowNormScorer(const ChannelSet &channels, const SystemConfig &config)
      : channels_(channels), null_basis_(CMatrix::Identity(config.m, config.m)) {}
  double score(UserIndex t) const {
    return selected_.empty() ? channels_[t].squaredNorm() : row_norm_score(channels_[t], null_basis_);
  }
  void commit(UserIndex p) {
    selected_.push_back(p);
    null_basis_ = null_space_basis(stack(channels_, selected_), channels_.tx_antennas());
  }

 private:
  const ChannelSet &channels_;
  CMatrix null_basis_;
  UserList selected_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Selectors

/// Greedy maximization of the sum conditional entropy of S + {t}. The first
/// term uses the cached omega(S); each member's term refreshes that member's
/// leave-one-out inverse with H_t through one Woodbury update.
inline Selection select_conditional_entropy(const ChannelSet &channels,
                                            const SystemConfig &config) {
  detail::CondEntropyScorer scorer(channels, config);
  return detail::greedy(channels, config, Algorithm::CondEntropy, scorer);
}

/// Greedy maximization of joint_entropy(S + {t}) (the capacity upper bound).
inline Selection select_upperbound(const ChannelSet &channels, const SystemConfig &config) {
  detail::UpperboundScorer scorer(channels, config);
  return detail::greedy(channels, config, Algorithm::Upperbound, scorer);
}

/// Greedy maximization of the BD sum rate itself.
inline Selection select_c_algorithm(const ChannelSet &channels, const SystemConfig &config) {
  detail::CAlgScorer scorer(channels, config);
  return detail::greedy(channels, config, Algorithm::CAlg, scorer);
}

/// Greedy maximization of the channel norm left after Gram-Schmidt projection
/// against all previously selected users' rows.
inline Selection select_n_algorithm(const ChannelSet &channels, const SystemConfig &config) {
  detail::NAlgScorer scorer(channels);
  return detail::greedy(channels, config, Algorithm::NAlg, scorer);
}

/// Strongest user first, then greedy maximization of the summed squared
/// chordal distance to the selected users.
inline Selection select_chordal(const ChannelSet &channels, const SystemConfig &config) {
  detail::ChordalScorer scorer(channels);
  return detail::greedy(channels, config, Algorithm::Chordal, scorer);
}

/// Strongest user first, then greedy maximization of the product of squared
/// row norms inside the null space of the selected users.
inline Selection select_row_norm(const ChannelSet &channels, const SystemConfig &config) {
  detail::RowNormScorer scorer(channels, config);
  return detail::greedy(channels, config, Algorithm::RowNorm, scorer);
}

/// Number of nonempty subsets of at most k_max out of k_total users,
/// saturating at uint64 max.
inline std::uint64_t subset_count(std::size_t k_total, std::size_t k_max) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  std::uint64_t binom = 1;  // C(k_total, k)
  for (std::size_t k = 1; k <= std::min(k_max, k_total); ++k) {
    // C(n,k) = C(n,k-1) * (n-k+1) / k, exact in integers
    const std::uint64_t num = k_total - k + 1;
    if (binom > kMax / num) return kMax;
    binom = binom * num / k;
    if (total > kMax - binom) return kMax;
    total += binom;
  }
  return total;
}

/// Exhaustive search over every nonempty subset of size <= K. Ties go to the
/// lexicographically smallest (ascending) index list.
inline Selection select_brute_force(const ChannelSet &channels, const SystemConfig &config,
                                    std::uint64_t cap = kDefaultBruteForceCap) {
  detail::require_compatible(channels, config);
  const auto k_total = channels.size();
  const auto count = subset_count(k_total, config.k_max);
  if (count > cap)
    throw BudgetExceeded("select_brute_force: " + std::to_string(count) +
                         " subsets exceed the cap of " + std::to_string(cap));

  const double power = config.power();
  Selection best;
  best.algorithm = Algorithm::BruteForce;
  best.sum_rate = -1.0;

  const auto consider = [&](const UserList &subset) {
    const double rate = sum_rate(channels, subset, power);
    if (rate > best.sum_rate || (rate == best.sum_rate && subset < best.users)) {
      best.sum_rate = rate;
      best.users = subset;
    }
  };

  for (std::size_t size = 1; size <= std::min(config.k_max, k_total); ++size) {
    UserList subset(size);
    std::iota(subset.begin(), subset.end(), UserIndex{0});
    while (true) {
      consider(subset);
      // next combination in lexicographic order
      std::size_t i = size;
      while (i > 0 && subset[i - 1] == k_total - size + i - 1) --i;
      if (i == 0) break;
      ++subset[i - 1];
      for (std::size_t j = i; j < size; ++j) subset[j] = subset[j - 1] + 1;
    }
  }
  best.metric_trace.push_back(best.sum_rate);
  return best;
}

inline Selection run_selector(Algorithm algorithm, const ChannelSet &channels,
                              const SystemConfig &config,
                              std::uint64_t brute_force_cap = kDefaultBruteForceCap) {
  switch (algorithm) {
    case Algorithm::CondEntropy: return select_conditional_entropy(channels, config);
    case Algorithm::BruteForce: return select_brute_force(channels, config, brute_force_cap);
    case Algorithm::CAlg: return select_c_algorithm(channels, config);
    case Algorithm::NAlg: return select_n_algorithm(channels, config);
    case Algorithm::Upperbound: return select_upperbound(channels, config);
    case Algorithm::Chordal: return select_chordal(channels, config);
    case Algorithm::RowNorm: return select_row_norm(channels, config);
  }
  throw ContractViolation("run_selector: unknown algorithm");
}

}  // namespace musched

#endif  // MUSCHED_SELECT_HPP

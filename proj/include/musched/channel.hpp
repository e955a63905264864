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

#ifndef MUSCHED_CHANNEL_HPP
#define MUSCHED_CHANNEL_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "musched/matcore.hpp"

namespace musched {

using UserIndex = std::size_t;
using UserList = std::vector<UserIndex>;

/// Antenna geometry, population and SNR of one scheduling problem.
/// Noise has unit variance, so the total transmit power is P = 10^(snr_db/10).
struct SystemConfig {
  Eigen::Index m = 0;       // transmit antennas
  Eigen::Index n = 0;       // receive antennas per user
  std::size_t k_total = 0;  // user population K_T
  double snr_db = 0.0;
  std::size_t k_max = 0;  // simultaneously supportable users K

  static SystemConfig make(Eigen::Index m, Eigen::Index n, std::size_t k_total, double snr_db,
                           std::optional<std::size_t> k_max = std::nullopt) {
    detail::require(n >= 1 && m >= n, "SystemConfig: need M >= N >= 1 (got M=" +
                                          std::to_string(m) + ", N=" + std::to_string(n) + ")");
    detail::require(k_total >= 1, "SystemConfig: K_T must be at least 1");
    detail::require(std::isfinite(snr_db), "SystemConfig: SNR must be finite");
    const auto k = k_max.value_or(static_cast<std::size_t>(m / n));
    detail::require(k >= 1 && static_cast<Eigen::Index>(k) * n <= m,
                    "SystemConfig: K*N must not exceed M (K=" + std::to_string(k) + ")");
    return SystemConfig{m, n, k_total, snr_db, k};
  }

  double power() const { return std::pow(10.0, snr_db / 10.0); }
  /// P/M, the per-antenna power of the isotropic input covariance.
  double power_ratio() const { return power() / static_cast<double>(m); }
};

/// SplitMix64 finalizer; used to derive independent per-trial seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of the channel realization for one (trial, K_T) cell of a sweep.
constexpr std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial,
                                   std::uint64_t k_total) {
  return base_seed ^ splitmix64((k_total << 32) ^ trial);
}

/// Circularly symmetric unit-variance complex Gaussian source.
///
/// Engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Normals come from Box-Muller on 53-bit uniforms rather than
/// std::normal_distribution, whose algorithm is implementation-defined.
class ComplexGaussianSource {
 public:
  explicit ComplexGaussianSource(std::uint64_t seed) : engine_(seed) {}

  Complex operator()() {
    // (g1 + i g2)/sqrt(2) with g1, g2 ~ N(0,1): radius sqrt(-ln u1)
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

 private:
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 engine_;
};

/// One i.i.d. Rayleigh fading realization: K_T channels, each N x M.
struct ChannelSet {
  std::vector<CMatrix> users;
  std::uint64_t seed = 0;

  std::size_t size() const { return users.size(); }
  const CMatrix &operator[](UserIndex k) const { return users.at(k); }
  Eigen::Index tx_antennas() const { return users.empty() ? 0 : users.front().cols(); }
  Eigen::Index rx_antennas() const { return users.empty() ? 0 : users.front().rows(); }
};

inline ChannelSet generate(const SystemConfig &config, std::uint64_t seed) {
  ComplexGaussianSource source(seed);
  ChannelSet out;
  out.seed = seed;
  out.users.reserve(config.k_total);
  for (std::size_t k = 0; k < config.k_total; ++k) {
    CMatrix h(config.n, config.m);
    for (Eigen::Index r = 0; r < h.rows(); ++r)
      for (Eigen::Index c = 0; c < h.cols(); ++c) h(r, c) = source();
    out.users.push_back(std::move(h));
  }
  return out;
}

namespace detail {

inline void require_valid_users(const ChannelSet &channels, const UserList &users) {
  std::vector<bool> seen(channels.size(), false);
  for (auto u : users) {
    require(u < channels.size(), "user index " + std::to_string(u) + " out of range (K_T=" +
                                     std::to_string(channels.size()) + ")");
    require(!seen[u], "duplicate user index " + std::to_string(u));
    seen[u] = true;
  }
}

}  // namespace detail

/// Vertically stacks the listed users' channels: (|users| N) x M.
inline CMatrix stack(const ChannelSet &channels, const UserList &users) {
  detail::require_valid_users(channels, users);
  const auto n = channels.rx_antennas();
  CMatrix out(static_cast<Eigen::Index>(users.size()) * n, channels.tx_antennas());
  for (std::size_t j = 0; j < users.size(); ++j)
    out.middleRows(static_cast<Eigen::Index>(j) * n, n) = channels[users[j]];
  return out;
}

/// users minus the entry at position skip, order preserved.
inline UserList without(const UserList &users, std::size_t skip) {
  UserList out;
  out.reserve(users.size());
  for (std::size_t j = 0; j < users.size(); ++j)
    if (j != skip) out.push_back(users[j]);
  return out;
}

}  // namespace musched

#endif  // MUSCHED_CHANNEL_HPP

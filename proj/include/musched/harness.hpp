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

#ifndef MUSCHED_HARNESS_HPP
#define MUSCHED_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "musched/channel.hpp"
#include "musched/flopmodel.hpp"
#include "musched/select.hpp"

namespace musched {

struct SweepConfig {
  Eigen::Index m = 8;
  Eigen::Index n = 2;
  std::optional<std::size_t> k_max;  // floor(M/N) when unset
  std::vector<std::size_t> kt_values{10, 20, 30, 40, 50, 60};
  std::vector<double> snr_db_values{20.0};
  std::size_t trials = 200;
  std::uint64_t base_seed = 42;
  std::vector<Algorithm> algorithms{Algorithm::CondEntropy, Algorithm::CAlg,
                                    Algorithm::NAlg,        Algorithm::Upperbound,
                                    Algorithm::Chordal,     Algorithm::RowNorm};
  std::uint64_t brute_force_cap = kDefaultBruteForceCap;
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const {
    detail::require(trials >= 1, "sweep: trials must be at least 1");
    detail::require(!kt_values.empty(), "sweep: no K_T values");
    detail::require(std::is_sorted(kt_values.begin(), kt_values.end()) &&
                        std::adjacent_find(kt_values.begin(), kt_values.end()) == kt_values.end(),
                    "sweep: K_T values must be strictly ascending");
    detail::require(!snr_db_values.empty(), "sweep: no SNR values");
    detail::require(!algorithms.empty(), "sweep: no algorithms");
    // delegate geometry checks
    for (auto kt : kt_values) (void)SystemConfig::make(m, n, kt, snr_db_values.front(), k_max);
  }
};

/// One aggregated (algorithm, K_T, SNR) cell.
struct SweepRow {
  Algorithm algorithm = Algorithm::CondEntropy;
  std::size_t kt = 0;
  double snr_db = 0.0;
  std::size_t trials = 0;
  double mean_sum_rate = 0.0;
  double std_sum_rate = 0.0;  // sample standard deviation over trials
  double flops = 0.0;
  std::vector<double> trial_rates;  // per-trial rates, paired across algorithms

  double standard_error() const {
    return trials > 0 ? std_sum_rate / std::sqrt(static_cast<double>(trials)) : 0.0;
  }
};

struct SweepResult {
  std::vector<SweepRow> rows;  // algorithm-major, then K_T, then SNR
  std::vector<std::string> warnings;

  const SweepRow *find(Algorithm a, std::size_t kt, double snr_db) const {
    for (const auto &r : rows)
      if (r.algorithm == a && r.kt == kt && r.snr_db == snr_db) return &r;
    return nullptr;
  }
};

namespace detail {

inline double mean_of(const std::vector<double> &v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return v.empty() ? 0.0 : acc / static_cast<double>(v.size());
}

inline double sample_std(const std::vector<double> &v, double mean) {
  if (v.size() < 2) return 0.0;
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

/// Runs body(i) for i in [0, count) on `threads` workers. The first
/// exception thrown by any worker is rethrown on the caller.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body &&body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto &t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Monte Carlo sweep. Every (trial, K_T) pair draws one channel set that all
/// algorithms and SNR points share, so algorithm comparisons are paired.
/// Output depends only on the configuration, never on thread scheduling.
inline SweepResult run_sweep(const SweepConfig &config) {
  config.validate();
  SweepResult result;

  const auto n_alg = config.algorithms.size();
  const auto n_kt = config.kt_values.size();
  const auto n_snr = config.snr_db_values.size();

  std::vector<bool> enabled(n_alg * n_kt, true);
  for (std::size_t a = 0; a < n_alg; ++a) {
    if (config.algorithms[a] != Algorithm::BruteForce) continue;
    for (std::size_t j = 0; j < n_kt; ++j) {
      const auto cfg = SystemConfig::make(config.m, config.n, config.kt_values[j], 0.0, config.k_max);
      const auto count = subset_count(cfg.k_total, cfg.k_max);
      if (count > config.brute_force_cap) {
        enabled[a * n_kt + j] = false;
        result.warnings.push_back("brute-force skipped at K_T=" + std::to_string(cfg.k_total) +
                                  ": " + std::to_string(count) + " subsets exceed cap " +
                                  std::to_string(config.brute_force_cap));
      }
    }
  }

  // rates[((a * n_kt + j) * n_snr + s) * trials + t]
  std::vector<double> rates(n_alg * n_kt * n_snr * config.trials, 0.0);
  const auto slot = [&](std::size_t a, std::size_t j, std::size_t s, std::size_t t) {
    return ((a * n_kt + j) * n_snr + s) * config.trials + t;
  };

  detail::parallel_for(config.trials * n_kt, config.threads, [&](std::size_t work) {
    const auto t = work / n_kt;
    const auto j = work % n_kt;
    const auto kt = config.kt_values[j];
    const auto base = SystemConfig::make(config.m, config.n, kt, 0.0, config.k_max);
    const auto channels = generate(base, trial_seed(config.base_seed, t, kt));
    for (std::size_t s = 0; s < n_snr; ++s) {
      auto cfg = base;
      cfg.snr_db = config.snr_db_values[s];
      for (std::size_t a = 0; a < n_alg; ++a) {
        if (!enabled[a * n_kt + j]) continue;
        rates[slot(a, j, s, t)] =
            run_selector(config.algorithms[a], channels, cfg, config.brute_force_cap).sum_rate;
      }
    }
  });

  for (std::size_t a = 0; a < n_alg; ++a) {
    for (std::size_t j = 0; j < n_kt; ++j) {
      if (!enabled[a * n_kt + j]) continue;
      const auto cfg = SystemConfig::make(config.m, config.n, config.kt_values[j], 0.0, config.k_max);
      const double flop_count = flops::baseline_flops(config.algorithms[a], cfg).flops;
      for (std::size_t s = 0; s < n_snr; ++s) {
        SweepRow row;
        row.algorithm = config.algorithms[a];
        row.kt = config.kt_values[j];
        row.snr_db = config.snr_db_values[s];
        row.trials = config.trials;
        const auto first = rates.begin() + static_cast<std::ptrdiff_t>(slot(a, j, s, 0));
        row.trial_rates.assign(first, first + static_cast<std::ptrdiff_t>(config.trials));
        row.mean_sum_rate = detail::mean_of(row.trial_rates);
        row.std_sum_rate = detail::sample_std(row.trial_rates, row.mean_sum_rate);
        row.flops = flop_count;
        result.rows.push_back(std::move(row));
      }
    }
  }
  return result;
}

inline constexpr const char *kCsvHeader =
    "algorithm,kt,snr_db,trials,mean_sum_rate,std_sum_rate,flops";

namespace detail {

inline std::string sig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace detail

inline void write_csv(const SweepResult &result, std::ostream &out) {
  out << kCsvHeader << '\n';
  for (const auto &r : result.rows) {
    out << tag(r.algorithm) << ',' << r.kt << ',' << detail::sig6(r.snr_db) << ',' << r.trials
        << ',' << detail::sig6(r.mean_sum_rate) << ',' << detail::sig6(r.std_sum_rate) << ','
        << detail::sig6(r.flops) << '\n';
  }
}

inline void write_csv(const SweepResult &result, const std::string &path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("write_csv: cannot open '" + path + "' for writing");
  write_csv(result, file);
  file.flush();
  if (!file) throw std::runtime_error("write_csv: write to '" + path + "' failed");
}

/// Parses a file written by write_csv; per-trial rates are not stored there.
inline SweepResult read_csv(std::istream &in) {
  SweepResult result;
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::runtime_error("read_csv: missing or unexpected header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (fields.size() != 7) throw std::runtime_error("read_csv: malformed row '" + line + "'");
    const auto alg = parse_algorithm(fields[0]);
    if (!alg) throw std::runtime_error("read_csv: unknown algorithm '" + fields[0] + "'");
    SweepRow row;
    row.algorithm = *alg;
    row.kt = std::stoul(fields[1]);
    row.snr_db = std::stod(fields[2]);
    row.trials = std::stoul(fields[3]);
    row.mean_sum_rate = std::stod(fields[4]);
    row.std_sum_rate = std::stod(fields[5]);
    row.flops = std::stod(fields[6]);
    result.rows.push_back(std::move(row));
  }
  return result;
}

/// Fixed-width table of the sweep, one line per cell.
inline std::string format_summary(const SweepResult &result) {
  std::ostringstream os;
  os << std::left << std::setw(14) << "algorithm" << std::right << std::setw(6) << "K_T"
     << std::setw(9) << "SNR dB" << std::setw(8) << "trials" << std::setw(12) << "mean rate"
     << std::setw(10) << "std err" << std::setw(14) << "flops" << '\n';
  for (const auto &r : result.rows) {
    os << std::left << std::setw(14) << tag(r.algorithm) << std::right << std::setw(6) << r.kt
       << std::setw(9) << std::fixed << std::setprecision(1) << r.snr_db << std::setw(8)
       << r.trials << std::setw(12) << std::setprecision(4) << r.mean_sum_rate << std::setw(10)
       << r.standard_error() << std::setw(14) << std::setprecision(0) << r.flops << '\n';
  }
  return os.str();
}

}  // namespace musched

#endif  // MUSCHED_HARNESS_HPP

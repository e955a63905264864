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

#ifndef MUSCHED_CLI_HPP
#define MUSCHED_CLI_HPP

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <ostream>
#include <string>
#include <vector>

#include "musched/harness.hpp"

namespace musched {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::size_t parse_count(const std::string &s, const char *what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (s.empty() || s.front() == '-') throw std::invalid_argument(s);
    v = std::stoull(s, &used);
  } catch (const std::exception &) {
    throw UsageError(std::string(what) + ": '" + s + "' is not a non-negative integer");
  }
  if (used != s.size()) throw UsageError(std::string(what) + ": trailing characters in '" + s + "'");
  return static_cast<std::size_t>(v);
}

inline double parse_real(const std::string &s, const char *what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception &) {
    throw UsageError(std::string(what) + ": '" + s + "' is not a number");
  }
  if (used != s.size() || !std::isfinite(v))
    throw UsageError(std::string(what) + ": '" + s + "' is not a finite number");
  return v;
}

/// "10,20,30" or the inclusive range "a:b:step".
inline std::vector<std::size_t> parse_kt_list(const std::string &spec) {
  std::vector<std::size_t> out;
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw UsageError("--kt: range must look like a:b:step");
    const auto first = parse_count(parts[0], "--kt");
    const auto last = parse_count(parts[1], "--kt");
    const auto step = parse_count(parts[2], "--kt");
    if (step == 0 || first > last) throw UsageError("--kt: need a <= b and step > 0");
    for (auto v = first; v <= last; v += step) out.push_back(v);
  } else {
    for (const auto &p : split(spec, ',')) out.push_back(parse_count(p, "--kt"));
  }
  if (out.empty()) throw UsageError("--kt: empty list");
  return out;
}

}  // namespace detail

/// Entry point of the musched command-line tool. args excludes the program
/// name. Returns 0 on success, 2 on usage errors, 1 on runtime failures.
inline int cli_main(const std::vector<std::string> &args, std::ostream &out = std::cout,
                    std::ostream &err = std::cerr) {
  CLI::App app{"Monte Carlo comparison of multiuser MIMO user selection algorithms "
               "under block diagonalization precoding",
               "musched"};

  long long m = 8, n = 2;
  std::size_t k = 0;
  std::string kt_spec = "10:60:10";
  std::string snr_spec = "20";
  std::size_t trials = 200;
  std::uint64_t seed = 42;
  std::string algorithms_spec = "cond-entropy,c-alg,n-alg,upperbound,chordal,row-norm";
  std::string output;
  std::uint64_t cap = kDefaultBruteForceCap;
  unsigned threads = 0;

  app.add_option("--m", m, "transmit antennas M")->capture_default_str();
  app.add_option("--n", n, "receive antennas per user N")->capture_default_str();
  app.add_option("--k", k, "max simultaneous users K (default floor(M/N))");
  app.add_option("--kt", kt_spec, "user populations: comma list or a:b:step")->capture_default_str();
  app.add_option("--snr-db", snr_spec, "SNR values in dB, comma list")->capture_default_str();
  app.add_option("--trials", trials, "Monte Carlo trials per cell")->capture_default_str();
  app.add_option("--seed", seed, "base RNG seed")->capture_default_str();
  app.add_option("--algorithms", algorithms_spec,
                 "comma list of: cond-entropy, brute-force, c-alg, n-alg, upperbound, "
                 "chordal, row-norm")
      ->capture_default_str();
  app.add_option("--output", output, "CSV output path (CSV goes to stdout when omitted)");
  app.add_option("--brute-force-cap", cap, "max subsets brute force may enumerate per cell")
      ->capture_default_str();
  app.add_option("--threads", threads, "worker threads (0: all cores)")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "musched: " << e.what() << "\n" << "Run with --help for usage.\n";
    return kExitUsage;
  }

  SweepConfig config;
  try {
    if (m < 1 || n < 1) throw detail::UsageError("--m and --n must be positive");
    config.m = m;
    config.n = n;
    if (app.count("--k") > 0) config.k_max = k;
    config.kt_values = detail::parse_kt_list(kt_spec);
    config.snr_db_values.clear();
    for (const auto &s : detail::split(snr_spec, ','))
      config.snr_db_values.push_back(detail::parse_real(s, "--snr-db"));
    config.trials = trials;
    config.base_seed = seed;
    config.brute_force_cap = cap;
    config.threads = threads;
    config.algorithms.clear();
    for (const auto &s : detail::split(algorithms_spec, ',')) {
      const auto alg = parse_algorithm(s);
      if (!alg) throw detail::UsageError("--algorithms: unknown tag '" + s + "'");
      if (std::find(config.algorithms.begin(), config.algorithms.end(), *alg) ==
          config.algorithms.end())
        config.algorithms.push_back(*alg);
    }
    config.validate();
  } catch (const std::exception &e) {
    err << "musched: " << e.what() << "\n" << "Run with --help for usage.\n";
    return kExitUsage;
  }

  try {
    const auto result = run_sweep(config);
    for (const auto &w : result.warnings) err << "musched: warning: " << w << '\n';
    if (output.empty()) {
      write_csv(result, out);
    } else {
      write_csv(result, output);
      out << format_summary(result);
      out << "wrote " << result.rows.size() << " rows to " << output << '\n';
    }
  } catch (const std::exception &e) {
    err << "musched: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace musched

#endif  // MUSCHED_CLI_HPP

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

#ifndef MUSCHED_ERRORS_HPP
#define MUSCHED_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace musched {

/// Caller broke a precondition (dimension mismatch, duplicate index, ...).
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// Cholesky hit a pivot <= 0, i.e. the matrix is not a valid covariance.
struct NotPositiveDefinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A user's interference null space is empty; the user set is too large.
struct EmptyNullSpace : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exhaustive search would enumerate more subsets than allowed.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string &what) {
  if (!ok) throw ContractViolation(what);
}

}  // namespace detail
}  // namespace musched

#endif  // MUSCHED_ERRORS_HPP

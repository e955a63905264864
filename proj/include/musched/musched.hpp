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

#ifndef MUSCHED_MUSCHED_HPP
#define MUSCHED_MUSCHED_HPP

#include "musched/bdrate.hpp"
#include "musched/channel.hpp"
#include "musched/entropy.hpp"
#include "musched/errors.hpp"
#include "musched/flopmodel.hpp"
#include "musched/harness.hpp"
#include "musched/matcore.hpp"
#include "musched/select.hpp"

#endif  // MUSCHED_MUSCHED_HPP

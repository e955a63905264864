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

#include <gtest/gtest.h>

#include <algorithm>

#include "musched/entropy.hpp"
#include "test_support.hpp"

using namespace musched;
using musched::testing::random_cmatrix;

namespace {

std::vector<CMatrix> random_channels(std::size_t count, Eigen::Index n, Eigen::Index m,
                                     std::mt19937_64 &rng) {
  std::vector<CMatrix> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_cmatrix(n, m, rng));
  return out;
}

/// Mutual information in its closed determinant form:
/// log2 det(I + r^2 A1 A2 (I + r A1 + r A2)^-1), A_i = H_i^H H_i.
double mutual_information_closed_form(const CMatrix &h1, const CMatrix &h2, double r) {
  const auto m = h1.cols();
  const CMatrix a1 = h1.adjoint() * h1, a2 = h2.adjoint() * h2;
  const CMatrix c = CMatrix::Identity(m, m) + r * a1 + r * a2;
  return musched::testing::logdet_lu(CMatrix::Identity(m, m) +
                                     r * r * a1 * a2 * musched::testing::inverse_lu(c));
}

TEST(DiffEntropy, ZeroChannel) { EXPECT_EQ(diff_entropy(CMatrix::Zero(2, 4), 3.0), 0.0); }

TEST(DiffEntropy, ScalarUnitChannel) {
  EXPECT_NEAR(diff_entropy(CMatrix::Identity(1, 1), 1.0), 1.0, 1e-15);
}

TEST(DiffEntropy, MatchesSingularValues) {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 30; ++rep) {
    const CMatrix h = random_cmatrix(2, 8, rng);
    const double r = 12.5;
    const auto sigma = h.jacobiSvd().singularValues();
    double expected = 0.0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) expected += std::log2(1.0 + r * sigma(i) * sigma(i));
    EXPECT_NEAR(diff_entropy(h, r), expected, 1e-10);
  }
}

TEST(JointEntropy, EmptyAndZero) {
  EXPECT_EQ(joint_entropy({}, 1.0), 0.0);
  const std::vector<CMatrix> zeros{CMatrix::Zero(2, 4), CMatrix::Zero(2, 4)};
  EXPECT_EQ(joint_entropy(zeros, 5.0), 0.0);
  EXPECT_EQ(joint_entropy_via_sigma(zeros, 5.0), 0.0);
}

TEST(JointEntropy, SingleChannelEqualsDiffEntropy) {
  std::mt19937_64 rng(22);
  const std::vector<CMatrix> one{random_cmatrix(2, 8, rng)};
  EXPECT_NEAR(joint_entropy(one, 3.0), diff_entropy(one[0], 3.0), 1e-10);
}

TEST(JointEntropy, OrthogonalUsersAdd) {
  // M = 4: H1 lives on coordinates 0,1 and H2 on 2,3, so H1 H2^H = 0
  std::mt19937_64 rng(23);
  CMatrix h1 = CMatrix::Zero(2, 4), h2 = CMatrix::Zero(2, 4);
  h1.leftCols(2) = random_cmatrix(2, 2, rng);
  h2.rightCols(2) = random_cmatrix(2, 2, rng);
  ASSERT_LE((h1 * h2.adjoint()).norm(), 1e-15);
  const std::vector<CMatrix> pair{h1, h2};
  EXPECT_NEAR(joint_entropy(pair, 2.0), diff_entropy(h1, 2.0) + diff_entropy(h2, 2.0), 1e-10);
  EXPECT_NEAR(mutual_information_pair(h1, h2, 2.0), 0.0, 1e-12);
}

TEST(JointEntropyViaSigma, ScalarUser) {
  const std::vector<CMatrix> one{CMatrix::Identity(1, 1)};
  EXPECT_NEAR(joint_entropy_via_sigma(one, 1.0), 1.0, 1e-15);
}

TEST(JointEntropyViaSigma, AgreesWithJointEntropy) {
  std::mt19937_64 rng(24);
  for (int rep = 0; rep < 200; ++rep) {
    const auto users = 1 + rep % 4;
    const auto hs = random_channels(users, 2, 8, rng);
    const double r = (rep % 2 == 0) ? 12.5 : 1.25;
    EXPECT_NEAR(joint_entropy(hs, r), joint_entropy_via_sigma(hs, r), 1e-9);
  }
}

TEST(JointEntropy, OrderInvariant) {
  std::mt19937_64 rng(25);
  auto hs = random_channels(4, 2, 8, rng);
  const double base = joint_entropy(hs, 12.5);
  std::vector<std::size_t> perm{0, 1, 2, 3};
  while (std::next_permutation(perm.begin(), perm.end())) {
    std::vector<CMatrix> permuted;
    for (auto p : perm) permuted.push_back(hs[p]);
    EXPECT_NEAR(joint_entropy(permuted, 12.5), base, 1e-10);
  }
}

TEST(JointEntropy, Subadditive) {
  std::mt19937_64 rng(26);
  for (int rep = 0; rep < 100; ++rep) {
    const auto hs = random_channels(2, 2, 8, rng);
    EXPECT_LE(joint_entropy(hs, 12.5), diff_entropy(hs[0], 12.5) + diff_entropy(hs[1], 12.5) + 1e-9);
  }
}

TEST(Entropy, MonotoneInPower) {
  std::mt19937_64 rng(27);
  for (int rep = 0; rep < 50; ++rep) {
    const auto hs = random_channels(3, 2, 8, rng);
    EXPECT_LE(diff_entropy(hs[0], 1.25), diff_entropy(hs[0], 12.5));
    EXPECT_LE(joint_entropy(hs, 1.25), joint_entropy(hs, 12.5));
  }
}

TEST(MutualInformation, SimpleOrthogonalRows) {
  CMatrix h1(1, 2), h2(1, 2);
  h1 << 1.0, 0.0;
  h2 << 0.0, 1.0;
  EXPECT_EQ(mutual_information_pair(h1, h2, 1.0), 0.0);
}

TEST(MutualInformation, IdenticalChannelsMatchClosedForm) {
  std::mt19937_64 rng(28);
  const CMatrix h = random_cmatrix(2, 8, rng);
  EXPECT_NEAR(mutual_information_pair(h, h, 12.5), mutual_information_closed_form(h, h, 12.5), 1e-8);
}

TEST(MutualInformation, MatchesClosedFormAndIsSymmetric) {
  std::mt19937_64 rng(29);
  for (int rep = 0; rep < 100; ++rep) {
    const CMatrix h1 = random_cmatrix(2, 8, rng), h2 = random_cmatrix(2, 8, rng);
    const double mi = mutual_information_pair(h1, h2, 12.5);
    EXPECT_GE(mi, 0.0);
    EXPECT_NEAR(mi, mutual_information_closed_form(h1, h2, 12.5), 1e-8);
    EXPECT_NEAR(mi, mutual_information_pair(h2, h1, 12.5), 1e-10);
  }
}

TEST(MutualInformation, MarginalsMinusInformationIsJointEntropy) {
  // H(y1) + H(y2) - I(y1;y2) collapses to the joint entropy
  std::mt19937_64 rng(30);
  for (int rep = 0; rep < 20; ++rep) {
    const auto hs = random_channels(2, 2, 8, rng);
    const double lhs = diff_entropy(hs[0], 12.5) + diff_entropy(hs[1], 12.5) -
                       mutual_information_pair(hs[0], hs[1], 12.5);
    EXPECT_NEAR(lhs, joint_entropy(hs, 12.5), 1e-9);
  }
}

ChannelSet to_set(std::vector<CMatrix> hs) {
  ChannelSet s;
  s.users = std::move(hs);
  return s;
}

TEST(OmegaState, StartsAtScaledIdentity) {
  const OmegaState st(8, 12.5);
  EXPECT_TRUE(st.omega().isApprox(12.5 * CMatrix::Identity(8, 8)));
  EXPECT_TRUE(st.members().empty());
}

TEST(OmegaState, TracksDirectInversesIncludingLeaveOneOut) {
  std::mt19937_64 rng(31);
  const auto set = to_set(random_channels(5, 2, 8, rng));
  OmegaState st(8, 12.5);
  std::vector<CMatrix> chosen;
  for (UserIndex k : {3u, 0u, 4u, 1u}) {
    st.add(k, set[k]);
    chosen.push_back(set[k]);
    EXPECT_LE(musched::testing::rel_frobenius(st.omega(),
                                              musched::testing::direct_omega(chosen, 8, 12.5)),
              1e-9);
    for (std::size_t j = 0; j < chosen.size(); ++j) {
      std::vector<CMatrix> others;
      for (std::size_t i = 0; i < chosen.size(); ++i)
        if (i != j) others.push_back(chosen[i]);
      EXPECT_LE(musched::testing::rel_frobenius(st.leave_one_out(j),
                                                musched::testing::direct_omega(others, 8, 12.5)),
                1e-9);
    }
  }
  EXPECT_THROW(st.add(3, set[3]), ContractViolation);
}

TEST(SumConditionalEntropy, EmptySetIsDiffEntropy) {
  std::mt19937_64 rng(32);
  const auto set = to_set(random_channels(3, 2, 8, rng));
  const OmegaState st(8, 12.5);
  for (UserIndex t = 0; t < 3; ++t)
    EXPECT_NEAR(sum_conditional_entropy(st, set, t), diff_entropy(set[t], 12.5), 1e-10);
}

TEST(SumConditionalEntropy, MatchesDirectInversionAndJointEntropyDifferences) {
  std::mt19937_64 rng(33);
  for (int rep = 0; rep < 50; ++rep) {
    const auto set = to_set(random_channels(6, 2, 8, rng));
    const double r = 12.5;
    OmegaState st(8, r);
    st.add(1, set[1]);
    st.add(4, set[4]);
    for (UserIndex t : {0u, 2u, 3u, 5u}) {
      // direct: every Omega(S_i) inverted from scratch
      const std::vector<UserIndex> all{t, 1, 4};
      double direct = 0.0, via_joint = 0.0;
      std::vector<CMatrix> every;
      for (auto u : all) every.push_back(set[u]);
      const double joint_all = joint_entropy(every, r);
      for (std::size_t i = 0; i < all.size(); ++i) {
        std::vector<CMatrix> others;
        for (std::size_t j = 0; j < all.size(); ++j)
          if (j != i) others.push_back(set[all[j]]);
        const CMatrix omega = musched::testing::direct_omega(others, 8, r);
        const CMatrix &h = set[all[i]];
        direct += musched::testing::logdet_lu(CMatrix::Identity(2, 2) + h * omega * h.adjoint());
        via_joint += joint_all - joint_entropy(others, r);
      }
      const double got = sum_conditional_entropy(st, set, t);
      EXPECT_NEAR(got, direct, 1e-9);
      EXPECT_NEAR(got, via_joint, 1e-9);
      for (double term : conditional_entropy_terms(st, set, t)) EXPECT_GE(term, 0.0);
    }
    EXPECT_THROW(sum_conditional_entropy(st, set, 4), ContractViolation);
  }
}

TEST(SumConditionalEntropy, PairArgmaxMatchesJointMinusInformation) {
  // With one member s, the objective is H(t, s) - I(t; s).
  std::mt19937_64 rng(34);
  for (int rep = 0; rep < 50; ++rep) {
    const auto set = to_set(random_channels(8, 2, 8, rng));
    const double r = 12.5;
    OmegaState st(8, r);
    st.add(0, set[0]);
    for (UserIndex t = 1; t < 8; ++t) {
      const std::vector<CMatrix> pair{set[t], set[0]};
      const double expected = joint_entropy(pair, r) - mutual_information_pair(set[t], set[0], r);
      EXPECT_NEAR(sum_conditional_entropy(st, set, t), expected, 1e-9);
    }
  }
}

TEST(JointEntropyGain, EqualsJointEntropyIncrement) {
  std::mt19937_64 rng(35);
  const auto set = to_set(random_channels(4, 2, 8, rng));
  OmegaState st(8, 12.5);
  st.add(2, set[2]);
  st.add(0, set[0]);
  const std::vector<CMatrix> s{set[2], set[0]}, st3{set[2], set[0], set[3]};
  EXPECT_NEAR(joint_entropy_gain(st, set, 3), joint_entropy(st3, 12.5) - joint_entropy(s, 12.5),
              1e-9);
}

}  // namespace

// Copyright 2026 The xalign Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace xalign {
namespace {

RowMatrix er_similarity(std::size_t n, std::uint64_t seed) {
  const Graph g = generate_er(n, 4, seed);
  return dense_similarity_oracle(testing::features_of(g), {});
}

double mean_deviation(const RowMatrix& S, std::size_t m, std::uint64_t seeds) {
  double total = 0;
  for (std::uint64_t s = 0; s < seeds; ++s)
    total += convergence_check(sample_cooccurrence(S, {m, s}), S, m);
  return total / seeds;
}

TEST(RowNormalize, Example) {
  RowMatrix S(2, 2);
  S << 1, 3, 2, 2;
  RowMatrix want(2, 2);
  want << 0.25, 0.75, 0.5, 0.5;
  EXPECT_EQ(row_normalize(S), want);
}

TEST(RowNormalize, LimitsAndUniform) {
  RowMatrix S(2, 2);
  S << 1, 1e-30, 1, 1;
  const RowMatrix T = row_normalize(S);
  EXPECT_DOUBLE_EQ(T(0, 0), 1.0);
  EXPECT_LT(T(0, 1), 1e-29);
  EXPECT_EQ(T(1, 0), 0.5);
  EXPECT_EQ(T(1, 1), 0.5);
  const RowMatrix U = row_normalize(RowMatrix::Constant(4, 4, 3.0));
  EXPECT_EQ(U, RowMatrix::Constant(4, 4, 0.25));
}

TEST(Walks, DegenerateRowSendsEveryWalkToOneNode) {
  RowMatrix S = RowMatrix::Ones(3, 3);
  S.row(1) << 0, 0, 2;
  const auto D = sample_cooccurrence(S, {777, 3});
  EXPECT_EQ(D(1, 2), 777);
  EXPECT_EQ(D(1, 0) + D(1, 1), 0);
}

TEST(RowNormalize, ScaleInvariantPerRow) {
  RowMatrix S = er_similarity(15, 1);
  RowMatrix scaled = S;
  scaled.row(3) *= 7.0;
  scaled.row(9) *= 1e-3;
  EXPECT_LT((row_normalize(S) - row_normalize(scaled)).cwiseAbs().maxCoeff(), 1e-15);
  for (Eigen::Index i = 0; i < S.rows(); ++i)
    EXPECT_NEAR(row_normalize(S).row(i).sum(), 1.0, 1e-14);
}

TEST(RowNormalize, RejectsDegenerateRows) {
  RowMatrix zero = RowMatrix::Zero(2, 2);
  zero(0, 0) = 1;
  EXPECT_THROW(row_normalize(zero), std::invalid_argument);
  RowMatrix negative = RowMatrix::Identity(2, 2);
  negative(0, 1) = -0.5;
  EXPECT_THROW(row_normalize(negative), std::invalid_argument);
  EXPECT_THROW(row_normalize(RowMatrix::Ones(2, 3)), std::invalid_argument);
}

TEST(Walks, TwoNodeCountsWithinThreeSigma) {
  RowMatrix S = RowMatrix::Ones(2, 2);
  const std::size_t m = 1000000;
  const auto D = sample_cooccurrence(S, {m, 42});
  // Binomial(1e6, 0.5): sigma = 500.
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(static_cast<double>(D(i, 0)), 5e5, 1500);
    EXPECT_EQ(D(i, 0) + D(i, 1), static_cast<std::int64_t>(m));
  }
}

TEST(Walks, RowSumsEqualWalkCount) {
  const RowMatrix S = er_similarity(20, 3);
  const auto D = sample_cooccurrence(S, {123, 4});
  for (Eigen::Index i = 0; i < D.rows(); ++i) EXPECT_EQ(D.row(i).sum(), 123);
  EXPECT_GE(D.minCoeff(), 0);
}

TEST(Walks, DeterministicAndThreadIndependent) {
  const RowMatrix S = er_similarity(20, 5);
  const auto a = sample_cooccurrence(S, {500, 9}, 1);
  EXPECT_EQ(a, sample_cooccurrence(S, {500, 9}, 1));
  EXPECT_EQ(a, sample_cooccurrence(S, {500, 9}, 4));
  EXPECT_NE(a, sample_cooccurrence(S, {500, 10}, 1));
}

TEST(Walks, ZeroWalksRejected) {
  EXPECT_THROW(sample_cooccurrence(RowMatrix::Ones(2, 2), {0, 0}), std::invalid_argument);
}

TEST(Convergence, SingleNodeIsExact) {
  RowMatrix S(1, 1);
  S << 1;
  for (std::size_t m : {1, 10, 1000})
    EXPECT_EQ(convergence_check(sample_cooccurrence(S, {m, 0}), S, m), 0.0);
}

TEST(Convergence, SingleWalkDeviationAtMostOne) {
  const RowMatrix S = er_similarity(20, 6);
  for (std::uint64_t s = 0; s < 5; ++s)
    EXPECT_LE(convergence_check(sample_cooccurrence(S, {1, s}), S, 1), 1.0);
}

TEST(Convergence, SmallAtTenThousandWalks) {
  EXPECT_LT(mean_deviation(er_similarity(20, 7), 10000, 10), 0.02);
}

TEST(Convergence, ShrinksLikeInverseSquareRoot) {
  const RowMatrix S = er_similarity(20, 8);
  const double a = mean_deviation(S, 10000, 10);
  const double b = mean_deviation(S, 40000, 10);
  const double ratio = a / b;
  EXPECT_GE(ratio, 1.333);
  EXPECT_LE(ratio, 3.0);
}

TEST(Convergence, ShapeChecks) {
  const RowMatrix S = RowMatrix::Ones(2, 2);
  const auto D = sample_cooccurrence(S, {5, 0});
  EXPECT_THROW(convergence_check(D, RowMatrix::Ones(3, 3), 5), std::invalid_argument);
  EXPECT_THROW(convergence_check(D, S, 0), std::invalid_argument);
}

}  // namespace
}  // namespace xalign

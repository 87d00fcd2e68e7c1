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

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace xalign {
namespace {

TEST(AttributeDistance, Categorical) {
  std::vector<double> a{1, 0, 1}, b{1, 1, 1};
  EXPECT_EQ(attribute_distance(a, b, AttributeDistance::categorical), 1.0);
}

TEST(AttributeDistance, SelfIsZeroForEveryKind) {
  std::vector<double> a{0.5, -2, 3};
  for (auto k : {AttributeDistance::categorical, AttributeDistance::euclidean,
                 AttributeDistance::cosine})
    EXPECT_NEAR(attribute_distance(a, a, k), 0.0, 1e-15);
}

TEST(AttributeDistance, EuclideanIsSquared) {
  std::vector<double> a{0, 0}, b{3, 4};
  EXPECT_EQ(attribute_distance(a, b, AttributeDistance::euclidean), 25.0);
}

TEST(AttributeDistance, CosineAndErrors) {
  std::vector<double> a{1, 0}, b{0, 2}, z{0, 0};
  EXPECT_NEAR(attribute_distance(a, b, AttributeDistance::cosine), 1.0, 1e-15);
  EXPECT_EQ(attribute_distance(z, z, AttributeDistance::cosine), 0.0);
  EXPECT_EQ(attribute_distance(a, z, AttributeDistance::cosine), 1.0);
  std::vector<double> c{1};
  EXPECT_THROW(attribute_distance(a, c, AttributeDistance::categorical), std::invalid_argument);
}

TEST(Similarity, IdenticalIsOne) {
  std::vector<double> d{1, 2, 0.5}, f{1, 0};
  EXPECT_EQ(similarity(d, d, f, f, {}), 1.0);
}

TEST(Similarity, StructuralOnly) {
  std::vector<double> du{1, 0}, dv{0, 0};
  EXPECT_NEAR(similarity(du, dv, {}, {}, {1.0, 1.0}), 0.36787944117144233, 1e-15);
}

TEST(Similarity, StructuralPlusAttributes) {
  // ||du - dv||^2 = 0.5, one categorical disagreement: exp(-1.5)
  std::vector<double> du{0.5, 0.5}, dv{0, 0};
  std::vector<double> fu{1, 0, 1}, fv{1, 1, 1};
  EXPECT_NEAR(similarity(du, dv, fu, fv, {1.0, 1.0}), 0.22313016014842982, 1e-15);
  // gamma_a = 0 ignores the attributes
  EXPECT_NEAR(similarity(du, dv, fu, fv, {1.0, 0.0}), std::exp(-0.5), 1e-15);
}

TEST(Similarity, SymmetricAndPositive) {
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> a(5), b(5);
    for (auto& x : a) x = 40 * rng.uniform01();
    for (auto& x : b) x = 40 * rng.uniform01();
    const double ab = similarity(a, b, {}, {}, {});
    EXPECT_EQ(ab, similarity(b, a, {}, {}, {}));
    EXPECT_GT(ab, 0.0);
    EXPECT_LE(ab, 1.0);
  }
}

TEST(Similarity, InvalidParams) {
  SimilarityParams p{0.0, 0.0};
  EXPECT_THROW(p.validate(), std::invalid_argument);
  std::vector<double> a{1}, b{1, 2};
  EXPECT_THROW(similarity(a, b, {}, {}, {}), std::invalid_argument);
}

TEST(Landmarks, DefaultCountRule) {
  EXPECT_EQ(default_landmark_count(1024), 100u);
  EXPECT_EQ(default_landmark_count(2000), 109u);  // floor(10 * 10.966)
  EXPECT_EQ(default_landmark_count(4), 4u);       // clamped to n
  EXPECT_EQ(default_landmark_count(1), 1u);
}

TEST(Landmarks, ExhaustiveSample) {
  auto l = choose_landmarks(10, 10, 3);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(l.indices[i], i);
}

TEST(Landmarks, DeterministicSortedUnique) {
  auto a = choose_landmarks(1000, 50, 42);
  auto b = choose_landmarks(1000, 50, 42);
  EXPECT_EQ(a.indices, b.indices);
  EXPECT_TRUE(std::is_sorted(a.indices.begin(), a.indices.end()));
  EXPECT_EQ(std::set<std::size_t>(a.indices.begin(), a.indices.end()).size(), 50u);
  EXPECT_NE(a.indices, choose_landmarks(1000, 50, 43).indices);
  EXPECT_THROW(choose_landmarks(5, 6, 0), std::invalid_argument);
  EXPECT_THROW(choose_landmarks(5, 0, 0), std::invalid_argument);
}

TEST(Landmarks, RoughlyUniform) {
  // Each id is picked with probability p/n = 0.1; over 400 draws the count
  // per id is Binomial(400, 0.1): mean 40, sd 6.
  std::vector<int> hits(100, 0);
  for (std::uint64_t seed = 0; seed < 400; ++seed)
    for (auto i : choose_landmarks(100, 10, seed).indices) ++hits[i];
  for (int h : hits) {
    EXPECT_GT(h, 10);
    EXPECT_LT(h, 75);
  }
}

TEST(Landmarks, Stratified) {
  auto l = choose_landmarks_stratified(30, 70, 10, 5);
  ASSERT_EQ(l.size(), 10u);
  const auto in_first = std::count_if(l.indices.begin(), l.indices.end(),
                                      [](std::size_t i) { return i < 30; });
  EXPECT_EQ(in_first, 3);
  EXPECT_TRUE(std::is_sorted(l.indices.begin(), l.indices.end()));
}

TEST(SimilaritySlice, LandmarkBlockProperties) {
  Graph g = generate_er(120, 5, 11);
  auto f = testing::features_of(g);
  auto lm = choose_landmarks(g.node_count(), 30, 2);
  auto slice = build_similarity_slice(f, lm, {});
  EXPECT_EQ(slice.C.rows(), 120);
  EXPECT_EQ(slice.C.cols(), 30);
  for (Eigen::Index i = 0; i < 30; ++i) EXPECT_EQ(slice.W(i, i), 1.0);
  EXPECT_EQ(slice.W, slice.W.transpose());
  EXPECT_GT(slice.C.minCoeff(), 0.0);
  EXPECT_LE(slice.C.maxCoeff(), 1.0);
}

TEST(SimilaritySlice, FullLandmarksGiveDenseMatrix) {
  Graph g = generate_er(60, 4, 12);
  auto f = testing::features_of(g);
  auto slice = build_similarity_slice(f, choose_landmarks(60, 60, 0), {});
  EXPECT_EQ(slice.C, dense_similarity_oracle(f, {}));
}

TEST(SimilaritySlice, IdenticalNodesIdenticalRows) {
  Graph g = Graph::from_edges(4, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}, {3, 1}});
  auto f = testing::features_of(g);
  auto slice = build_similarity_slice(f, choose_landmarks(4, 2, 9), {});
  // nodes 1 and 3 both have degree 2 with neighbors {0 (deg 3), other (deg 2)}
  EXPECT_EQ(slice.C.row(1), slice.C.row(3));
}

TEST(SimilaritySlice, ThreadIndependent) {
  Graph g = generate_er(300, 6, 13);
  auto f = testing::features_of(g);
  auto lm = choose_landmarks(300, 40, 1);
  EXPECT_EQ(build_similarity_slice(f, lm, {}, 1).C, build_similarity_slice(f, lm, {}, 3).C);
}

TEST(DenseOracle, SymmetricUnitDiagonalAndCapped) {
  Graph g = generate_er(80, 4, 14);
  auto f = testing::features_of(g);
  auto S = dense_similarity_oracle(f, {});
  EXPECT_EQ(S, S.transpose());
  for (Eigen::Index i = 0; i < S.rows(); ++i) EXPECT_EQ(S(i, i), 1.0);
  EXPECT_THROW(dense_similarity_oracle(f, {}, 50), std::invalid_argument);
}

TEST(DenseOracle, AttributesEnterTheScore) {
  Graph g = testing::path_graph(4);
  NodeFeatures f = testing::features_of(g);
  RowMatrix attrs(4, 2);
  attrs << 0, 1, 0, 1, 1, 1, 0, 0;
  f.attributes = attrs;
  auto S = dense_similarity_oracle(f, {1.0, 1.0});
  // nodes 0 and 3 are structural twins; attributes differ in 1 position
  EXPECT_NEAR(S(0, 3), std::exp(-1.0), 1e-15);
  EXPECT_EQ(S(0, 0), 1.0);
}

}  // namespace
}  // namespace xalign

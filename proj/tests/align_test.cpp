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

#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace xalign {
namespace {

using testing::brute_force_knn;
using testing::random_matrix;

RowMatrix unit_rows(RowMatrix m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i).normalize();
  return m;
}

AlignOptions options(std::size_t alpha, MatchMode mode = MatchMode::per_node,
                     unsigned threads = 1) {
  AlignOptions o;
  o.alpha = alpha;
  o.mode = mode;
  o.threads = threads;
  return o;
}

void expect_same(const std::vector<Neighbor>& got, const std::vector<Neighbor>& want) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t k = 0; k < got.size(); ++k) {
    EXPECT_EQ(got[k].node, want[k].node) << "rank " << k;
    EXPECT_NEAR(got[k].distance_sq, want[k].distance_sq, 1e-12) << "rank " << k;
  }
}

TEST(NnIndex, MatchesBruteForce) {
  for (std::size_t p : {10, 100}) {
    const RowMatrix pts = unit_rows(random_matrix(1000, p, p));
    const RowMatrix queries = unit_rows(random_matrix(200, p, p + 1));
    const NnIndex index(pts);
    for (std::size_t alpha : {1, 5, 10}) {
      for (Eigen::Index q = 0; q < queries.rows(); ++q) {
        const double* y = queries.data() + q * p;
        expect_same(index.query({y, p}, alpha), brute_force_knn(pts, y, alpha));
      }
    }
  }
}

TEST(NnIndex, LinearScanAgreesWithTree) {
  const RowMatrix pts = unit_rows(random_matrix(500, 12, 3));
  IndexOptions scan;
  scan.brute_force_dims = 1;
  const NnIndex tree(pts), linear(pts, scan);
  EXPECT_FALSE(tree.uses_linear_scan());
  EXPECT_TRUE(linear.uses_linear_scan());
  for (Eigen::Index q = 0; q < 50; ++q) {
    const double* y = pts.data() + q * 12;
    expect_same(tree.query({y, 12}, 7), linear.query({y, 12}, 7));
  }
}

TEST(NnIndex, StoredPointFirstAndFullRanking) {
  const RowMatrix pts = unit_rows(random_matrix(60, 4, 8));
  const NnIndex index(pts, {.leaf_size = 3});
  for (Eigen::Index q = 0; q < pts.rows(); ++q) {
    const double* y = pts.data() + q * 4;
    auto nn = index.query({y, 4}, 60);
    ASSERT_EQ(nn.size(), 60u);
    EXPECT_EQ(nn[0].node, q);
    EXPECT_EQ(nn[0].distance_sq, 0.0);
    expect_same(nn, brute_force_knn(pts, y, 60));
  }
}

TEST(NnIndex, SinglePoint) {
  RowMatrix pts(1, 3);
  pts << 1, 0, 0;
  const NnIndex index(pts);
  const double y[] = {0, 1, 0};
  auto nn = index.query(y, 1);
  ASSERT_EQ(nn.size(), 1u);
  EXPECT_EQ(nn[0].node, 0u);
  EXPECT_DOUBLE_EQ(nn[0].distance_sq, 2.0);
}

TEST(NnIndex, DuplicatesAllRetrievable) {
  RowMatrix pts(40, 2);
  for (int i = 0; i < 40; ++i) pts.row(i) << (i == 17 || i == 31 ? 0.0 : 5.0 + i), 0.0;
  const NnIndex index(pts, {.leaf_size = 2});
  const double y[] = {0, 0};
  auto nn = index.query(y, 2);
  ASSERT_EQ(nn.size(), 2u);
  EXPECT_EQ(nn[0].node, 17u);
  EXPECT_EQ(nn[1].node, 31u);
  EXPECT_EQ(nn[0].distance_sq, 0.0);
  EXPECT_EQ(nn[1].distance_sq, 0.0);
}

TEST(NnIndex, TiesBrokenBySmallerId) {
  RowMatrix pts = RowMatrix::Zero(64, 3);  // all identical
  const NnIndex index(pts, {.leaf_size = 4});
  const double y[] = {1, 1, 1};
  auto nn = index.query(y, 5);
  for (std::size_t k = 0; k < nn.size(); ++k) EXPECT_EQ(nn[k].node, k);
}

TEST(NnIndex, RejectsBadQueries) {
  const NnIndex index(random_matrix(10, 4, 1));
  const double y[] = {0, 0, 0, 0};
  EXPECT_THROW(index.query(y, 0), std::invalid_argument);
  EXPECT_THROW(index.query(y, 11), std::invalid_argument);
  const double shorter[] = {0, 0, 0};
  EXPECT_THROW(index.query(shorter, 1), std::invalid_argument);
  EXPECT_THROW(NnIndex(RowMatrix(0, 3)), std::invalid_argument);
}

TEST(Align, SimilarityIsExpOfNegativeSquaredDistance) {
  RowMatrix y1(1, 2), y2(1, 2);
  y1 << 0, 0;
  y2 << std::sqrt(std::log(2.0)), 0;
  auto r = align(y1, y2);
  EXPECT_NEAR(r.candidates[0][0].similarity, 0.5, 1e-15);
}

TEST(Align, IdenticalEmbeddingsGiveIdentityMap) {
  const RowMatrix y = unit_rows(random_matrix(300, 8, 9));
  auto r = align(y, y, options(3));
  for (std::size_t u = 0; u < r.size(); ++u) {
    EXPECT_EQ(r.hard_map[u], u);
    EXPECT_EQ(r.candidates[u][0].similarity, 1.0);
  }
}

TEST(Align, CandidateListsAreMonotone) {
  const RowMatrix y1 = unit_rows(random_matrix(200, 6, 2));
  const RowMatrix y2 = unit_rows(random_matrix(250, 6, 3));
  auto r = align(y1, y2, options(10));
  for (const auto& list : r.candidates) {
    ASSERT_EQ(list.size(), 10u);
    for (std::size_t k = 1; k < list.size(); ++k) {
      EXPECT_GE(list[k - 1].similarity, list[k].similarity);
      EXPECT_GT(list[k].similarity, 0.0);
      EXPECT_LE(list[k].similarity, 1.0);
    }
  }
}

TEST(Align, ThreadCountDoesNotChangeResults) {
  const RowMatrix y1 = unit_rows(random_matrix(400, 5, 4));
  const RowMatrix y2 = unit_rows(random_matrix(400, 5, 5));
  auto a = align(y1, y2, options(4, MatchMode::per_node, 1));
  auto b = align(y1, y2, options(4, MatchMode::per_node, 3));
  EXPECT_EQ(a.hard_map, b.hard_map);
  for (std::size_t u = 0; u < a.size(); ++u)
    for (std::size_t k = 0; k < 4; ++k) {
      EXPECT_EQ(a.candidates[u][k].node, b.candidates[u][k].node);
      EXPECT_EQ(a.candidates[u][k].distance_sq, b.candidates[u][k].distance_sq);
    }
}

TEST(Align, OneToOneUsesEachTargetOnce) {
  // Every G1 node is closest to G2 node 0. Greedy then takes (2, 1) at
  // distance 0.64 before (1, 1) at 0.81.
  RowMatrix y1(3, 1), y2(3, 1);
  y1 << 0.0, 0.1, 0.2;
  y2 << 0.0, 1.0, 2.0;
  auto per = align(y1, y2, options(3));
  EXPECT_EQ(per.hard_map, (std::vector<NodeId>{0, 0, 0}));
  auto one = align(y1, y2, options(3, MatchMode::one_to_one));
  EXPECT_EQ(one.hard_map, (std::vector<NodeId>{0, 2, 1}));

  auto short_list = align(y1, y2, options(1, MatchMode::one_to_one));
  EXPECT_EQ(short_list.hard_map[0], 0u);
  EXPECT_EQ(short_list.hard_map[1], kUnmatched);
}

TEST(Align, RejectsMismatchAndAlpha) {
  const RowMatrix a = random_matrix(5, 3, 1), b = random_matrix(5, 4, 2);
  EXPECT_THROW(align(a, b), std::invalid_argument);
  EXPECT_THROW(align(a, a, options(0)), std::invalid_argument);
  EXPECT_THROW(align(a, a, options(6)), std::invalid_argument);
  EXPECT_NO_THROW(align(a, a, options(5)));
}

TEST(Align, CsvWriters) {
  RowMatrix y1(2, 1), y2(2, 1);
  y1 << 0.0, 1.0;
  y2 << 1.0, 0.0;
  auto r = align(y1, y2, options(2));
  std::ostringstream soft, hard;
  write_soft_alignment_csv(soft, r, "cfg");
  write_hard_map_csv(hard, r.hard_map);
  const double e1 = std::exp(-1.0);
  EXPECT_EQ(soft.str(), "# cfg\ng1_node,rank,g2_node,similarity\n0,1,1,1\n0,2,0," +
                            format_double(e1) + "\n1,1,0,1\n1,2,1," + format_double(e1) +
                            "\n");
  EXPECT_EQ(hard.str(), "g1_node,g2_node\n0,1\n1,0\n");

  std::vector<NodeId> partial{2, kUnmatched};
  std::ostringstream h2;
  write_hard_map_csv(h2, partial);
  EXPECT_EQ(h2.str(), "g1_node,g2_node\n0,2\n1,-1\n");
}

TEST(Pipeline, ZeroNoiseEmbeddingsCoincide) {
  const Graph g = generate_er(300, 6, 11);
  const auto inst = permute(g, nullptr, 12);
  PipelineConfig cfg;
  cfg.seed = 13;
  auto out = run_embedding(g, nullptr, inst.graph, nullptr, cfg);
  const auto& y = out.embedding;
  for (NodeId u = 0; u < g.node_count(); ++u)
    EXPECT_LE((y.first().row(u) - y.second().row(inst.truth(u))).norm(), 1e-6);
}

}  // namespace
}  // namespace xalign

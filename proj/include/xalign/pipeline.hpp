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

// End-to-end: identities -> landmark similarities -> embeddings -> matching.

#ifndef XALIGN_PIPELINE_HPP_
#define XALIGN_PIPELINE_HPP_

#include <optional>

#include "xalign/align.hpp"
#include "xalign/embedding.hpp"
#include "xalign/graph.hpp"
#include "xalign/identity.hpp"
#include "xalign/similarity.hpp"

namespace xalign {

struct PipelineConfig {
  IdentityParams identity;
  SimilarityParams similarity;
  double landmark_multiplier = 10.0;          // p = floor(t log2 n)
  std::optional<std::size_t> landmark_count;  // overrides the multiplier
  bool stratified_landmarks = false;
  double rank_tolerance = kDefaultRankTolerance;
  std::size_t alpha = 1;
  MatchMode match_mode = MatchMode::per_node;
  IndexOptions index;
  std::uint64_t seed = 0;  // landmark sampling
  unsigned threads = 1;
};

struct StageTimes {
  double identity = 0;
  double similarity = 0;
  double embed = 0;
  double align = 0;

  double total() const { return identity + similarity + embed + align; }
};

struct EmbedOutput {
  EmbeddingMatrix embedding;
  NodeFeatures features;
  LandmarkSet landmarks;
  std::size_t bucket_count = 0;
  std::size_t zero_degree_members = 0;
  StageTimes times;
};

struct AlignOutput {
  EmbedOutput embed;
  AlignmentResult alignment;
};

namespace detail {

inline std::optional<RowMatrix> stack_attributes(const AttributeTable* a1,
                                                 const AttributeTable* a2,
                                                 std::size_t n1, std::size_t n2) {
  if (!a1 && !a2) return std::nullopt;
  if (!a1 || !a2)
    throw std::invalid_argument("attributes must be given for both graphs or neither");
  if (a1->columns() != a2->columns())
    throw std::invalid_argument("attribute schemas of the two graphs differ");
  if (a1->node_count() != n1 || a2->node_count() != n2)
    throw std::invalid_argument("attribute rows do not match graph sizes");
  RowMatrix all(n1 + n2, a1->attr_count());
  all.topRows(n1) = a1->values();
  all.bottomRows(n2) = a2->values();
  return all;
}

}  // namespace detail

inline std::size_t resolve_landmark_count(const PipelineConfig& cfg, std::size_t n) {
  if (cfg.landmark_count) {
    if (*cfg.landmark_count < 1 || *cfg.landmark_count > n)
      throw std::invalid_argument("landmark count must lie in [1, n]");
    return *cfg.landmark_count;
  }
  return default_landmark_count(n, cfg.landmark_multiplier);
}

/// Joint embedding of both graphs. Attribute tables are optional but must be
/// supplied for both graphs together.
inline EmbedOutput run_embedding(const Graph& g1, const AttributeTable* attrs1,
                                 const Graph& g2, const AttributeTable* attrs2,
                                 const PipelineConfig& cfg) {
  cfg.identity.validate();
  cfg.similarity.validate();
  const std::size_t n1 = g1.node_count(), n2 = g2.node_count();
  if (n1 == 0 || n2 == 0) throw std::invalid_argument("graphs must be non-empty");

  EmbedOutput out;
  Stopwatch watch;
  out.bucket_count = bucket_count_for(std::max(g1.max_degree(), g2.max_degree()));
  auto id1 = node_identity(g1, cfg.identity, out.bucket_count, cfg.threads);
  auto id2 = node_identity(g2, cfg.identity, out.bucket_count, cfg.threads);
  out.zero_degree_members = id1.zero_degree_members + id2.zero_degree_members;
  out.features.identity.resize(n1 + n2, out.bucket_count);
  out.features.identity.topRows(n1) = id1.rows;
  out.features.identity.bottomRows(n2) = id2.rows;
  out.features.attributes = detail::stack_attributes(attrs1, attrs2, n1, n2);
  out.times.identity = watch.seconds();

  watch = Stopwatch();
  const std::size_t p = resolve_landmark_count(cfg, n1 + n2);
  out.landmarks = cfg.stratified_landmarks
                      ? choose_landmarks_stratified(n1, n2, p, cfg.seed)
                      : choose_landmarks(n1 + n2, p, cfg.seed);
  const auto slice =
      build_similarity_slice(out.features, out.landmarks, cfg.similarity, cfg.threads);
  out.times.similarity = watch.seconds();

  watch = Stopwatch();
  out.embedding = embed(slice, n1, cfg.rank_tolerance, cfg.threads);
  out.times.embed = watch.seconds();
  return out;
}

inline AlignOutput run_alignment(const Graph& g1, const AttributeTable* attrs1,
                                 const Graph& g2, const AttributeTable* attrs2,
                                 const PipelineConfig& cfg) {
  AlignOutput out;
  out.embed = run_embedding(g1, attrs1, g2, attrs2, cfg);
  Stopwatch watch;
  AlignOptions opts;
  opts.alpha = cfg.alpha;
  opts.mode = cfg.match_mode;
  opts.index = cfg.index;
  opts.threads = cfg.threads;
  out.alignment = align(out.embed.embedding.first(), out.embed.embedding.second(), opts);
  out.embed.times.align = watch.seconds();
  return out;
}

}  // namespace xalign

#endif  // XALIGN_PIPELINE_HPP_

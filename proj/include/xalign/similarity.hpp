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

#ifndef XALIGN_SIMILARITY_HPP_
#define XALIGN_SIMILARITY_HPP_

#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "xalign/graph.hpp"
#include "xalign/identity.hpp"

namespace xalign {

enum class AttributeDistance { categorical, euclidean, cosine };

struct SimilarityParams {
  double gamma_s = 1.0;
  double gamma_a = 1.0;
  AttributeDistance attr_distance = AttributeDistance::categorical;

  void validate() const {
    if (gamma_s < 0 || gamma_a < 0 || !(gamma_s + gamma_a > 0))
      throw std::invalid_argument("need gamma_s, gamma_a >= 0 with a positive sum");
  }
};

/// categorical: number of disagreeing positions; euclidean: squared
/// Euclidean distance; cosine: 1 - cosine similarity (0 for two zero
/// vectors, 1 if exactly one is zero).
inline double attribute_distance(std::span<const double> a,
                                 std::span<const double> b,
                                 AttributeDistance kind) {
  if (a.size() != b.size())
    throw std::invalid_argument("attribute rows differ in length");
  switch (kind) {
    case AttributeDistance::categorical: {
      double count = 0;
      for (std::size_t i = 0; i < a.size(); ++i) count += a[i] != b[i];
      return count;
    }
    case AttributeDistance::euclidean: {
      double sum = 0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
      }
      return sum;
    }
    case AttributeDistance::cosine: {
      double dot = 0, na = 0, nb = 0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
      }
      if (na == 0 && nb == 0) return 0.0;
      if (na == 0 || nb == 0) return 1.0;
      return std::max(0.0, 1.0 - dot / (std::sqrt(na) * std::sqrt(nb)));
    }
  }
  return 0.0;
}

inline double squared_distance(std::span<const double> a,
                               std::span<const double> b) {
  double sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

/// exp(-gamma_s ||d_u - d_v||^2 - gamma_a dist(f_u, f_v)). The attribute
/// term is skipped when either attribute row is empty. Values that would
/// underflow are clamped to the smallest normal double so every similarity
/// stays strictly positive.
inline double similarity(std::span<const double> du, std::span<const double> dv,
                         std::span<const double> fu, std::span<const double> fv,
                         const SimilarityParams& params) {
  if (du.size() != dv.size())
    throw std::invalid_argument("identity rows differ in length");
  double exponent = params.gamma_s * squared_distance(du, dv);
  if (!fu.empty() && !fv.empty() && params.gamma_a > 0)
    exponent += params.gamma_a * attribute_distance(fu, fv, params.attr_distance);
  return std::max(std::exp(-exponent), std::numeric_limits<double>::min());
}

/// Identity (and optional attribute) rows for the combined node set.
struct NodeFeatures {
  RowMatrix identity;                   // n x b
  std::optional<RowMatrix> attributes;  // n x F

  std::size_t size() const { return identity.rows(); }

  std::span<const double> identity_row(std::size_t i) const {
    return {identity.data() + i * identity.cols(),
            static_cast<std::size_t>(identity.cols())};
  }
  std::span<const double> attribute_row(std::size_t i) const {
    if (!attributes) return {};
    return {attributes->data() + i * attributes->cols(),
            static_cast<std::size_t>(attributes->cols())};
  }
};

struct LandmarkSet {
  std::vector<std::size_t> indices;  // sorted, unique combined ids

  std::size_t size() const { return indices.size(); }
};

/// floor(t * log2 n), clamped to [1, n].
inline std::size_t default_landmark_count(std::size_t n, double multiplier = 10.0) {
  if (n == 0) throw std::invalid_argument("no nodes");
  const double raw = std::floor(multiplier * std::log2(static_cast<double>(n)));
  return std::clamp<std::size_t>(raw < 1 ? 1 : static_cast<std::size_t>(raw), 1, n);
}

namespace detail {

// p distinct values of [0, n), uniform without replacement (partial
// Fisher-Yates), returned sorted.
inline std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                           std::size_t p,
                                                           Rng& rng) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < p; ++i) {
    const std::size_t j = i + rng.below(n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(p);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace detail

inline LandmarkSet choose_landmarks(std::size_t n, std::size_t p,
                                    std::uint64_t seed) {
  if (p < 1 || p > n)
    throw std::invalid_argument("landmark count must lie in [1, n]");
  Rng rng(seed);
  return {detail::sample_without_replacement(n, p, rng)};
}

/// Stratified variant: round(p * n1 / n) landmarks from G1 (at least one from
/// each non-empty graph when p >= 2), the rest from G2.
inline LandmarkSet choose_landmarks_stratified(std::size_t n1, std::size_t n2,
                                               std::size_t p,
                                               std::uint64_t seed) {
  const std::size_t n = n1 + n2;
  if (p < 1 || p > n)
    throw std::invalid_argument("landmark count must lie in [1, n]");
  std::size_t p1 = static_cast<std::size_t>(
      std::llround(static_cast<double>(p) * static_cast<double>(n1) / n));
  if (p >= 2 && n1 > 0 && n2 > 0) p1 = std::clamp<std::size_t>(p1, 1, p - 1);
  p1 = std::min(p1, n1);
  std::size_t p2 = p - p1;
  if (p2 > n2) {
    p1 += p2 - n2;
    p2 = n2;
  }
  Rng rng(seed);
  auto first = detail::sample_without_replacement(n1, p1, rng);
  auto second = detail::sample_without_replacement(n2, p2, rng);
  for (auto& v : second) v += n1;
  first.insert(first.end(), second.begin(), second.end());
  return {std::move(first)};
}

/// C (n x p) holds every node's similarity to each landmark; W is the
/// landmark rows of C.
struct SimilaritySlice {
  RowMatrix C;
  RowMatrix W;
};

inline SimilaritySlice build_similarity_slice(const NodeFeatures& features,
                                              const LandmarkSet& landmarks,
                                              const SimilarityParams& params,
                                              unsigned threads = 1) {
  params.validate();
  const std::size_t n = features.size();
  const std::size_t p = landmarks.size();
  for (auto l : landmarks.indices)
    if (l >= n) throw std::invalid_argument("landmark id out of range");
  SimilaritySlice slice;
  slice.C.resize(n, p);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        const std::size_t l = landmarks.indices[j];
        slice.C(i, j) =
            similarity(features.identity_row(i), features.identity_row(l),
                       features.attribute_row(i), features.attribute_row(l),
                       params);
      }
    }
  });
  slice.W.resize(p, p);
  for (std::size_t j = 0; j < p; ++j) slice.W.row(j) = slice.C.row(landmarks.indices[j]);
  return slice;
}

inline constexpr std::size_t kDenseOracleCap = 500;

/// Full n x n similarity matrix. Quadratic; guarded by `cap`.
inline RowMatrix dense_similarity_oracle(const NodeFeatures& features,
                                         const SimilarityParams& params,
                                         std::size_t cap = kDenseOracleCap) {
  params.validate();
  const std::size_t n = features.size();
  if (n > cap)
    throw std::invalid_argument("dense similarity limited to " +
                                std::to_string(cap) + " nodes");
  RowMatrix S(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      S(i, j) = similarity(features.identity_row(i), features.identity_row(j),
                           features.attribute_row(i), features.attribute_row(j),
                           params);
    }
  }
  return S;
}

}  // namespace xalign

#endif  // XALIGN_SIMILARITY_HPP_

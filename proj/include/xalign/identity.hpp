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

// Structural identity of a node: the degrees of its k-hop neighbors,
// log-binned and discounted by hop distance.

#ifndef XALIGN_IDENTITY_HPP_
#define XALIGN_IDENTITY_HPP_

#include <atomic>
#include <bit>
#include <ostream>
#include <vector>

#include "xalign/graph.hpp"

namespace xalign {

struct IdentityParams {
  int max_hops = 2;        // K >= 1
  double discount = 0.01;  // delta in (0, 1]

  void validate() const {
    if (max_hops < 1) throw std::invalid_argument("max hops must be >= 1");
    if (!(discount > 0.0 && discount <= 1.0))
      throw std::invalid_argument("discount must lie in (0, 1]");
  }
};

/// Log2 bucket of a degree. Degree 0 is assigned bucket 0.
inline std::size_t degree_bucket(std::size_t degree) {
  return degree == 0 ? 0 : static_cast<std::size_t>(std::bit_width(degree)) - 1;
}

/// Number of buckets needed so every degree up to max_degree has a slot:
/// floor(log2 D) + 1.
inline std::size_t bucket_count_for(std::size_t max_degree) {
  return degree_bucket(max_degree) + 1;
}

/// Reusable per-worker state for frontier expansion.
class NeighborhoodScratch {
 public:
  explicit NeighborhoodScratch(std::size_t n) : stamp_(n, 0) {}

  /// Fills hops[k-1] with the nodes at exact distance k from u, k = 1..K.
  /// Each level is built by joining the neighbor lists of the previous
  /// level and subtracting everything already reached.
  void expand(const Graph& g, NodeId u, int max_hops,
              std::vector<std::vector<NodeId>>& hops) {
    hops.resize(max_hops);
    for (auto& h : hops) h.clear();
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
    stamp_[u] = epoch_;
    for (NodeId v : g.neighbors(u)) {
      stamp_[v] = epoch_;
      hops[0].push_back(v);
    }
    for (int k = 1; k < max_hops; ++k) {
      for (NodeId v : hops[k - 1]) {
        for (NodeId w : g.neighbors(v)) {
          if (stamp_[w] != epoch_) {
            stamp_[w] = epoch_;
            hops[k].push_back(w);
          }
        }
      }
      if (hops[k].empty()) break;
      std::sort(hops[k].begin(), hops[k].end());
    }
  }

 private:
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

/// R_u^k for every node u and k = 1..K; result[u][k-1] is sorted.
inline std::vector<std::vector<std::vector<NodeId>>> khop_neighborhoods(
    const Graph& g, int max_hops) {
  if (max_hops < 1) throw std::invalid_argument("max hops must be >= 1");
  std::vector<std::vector<std::vector<NodeId>>> out(g.node_count());
  NeighborhoodScratch scratch(g.node_count());
  for (std::size_t u = 0; u < g.node_count(); ++u)
    scratch.expand(g, static_cast<NodeId>(u), max_hops, out[u]);
  return out;
}

/// Counts members per log2-degree bucket. Members with degree 0 land in
/// bucket 0 and are tallied in *zero_degree if given.
inline std::vector<double> degree_histogram(const Graph& g,
                                            std::span<const NodeId> nodes,
                                            std::size_t buckets,
                                            std::size_t* zero_degree = nullptr) {
  if (buckets == 0) throw std::invalid_argument("bucket count must be >= 1");
  std::vector<double> hist(buckets, 0.0);
  for (NodeId v : nodes) {
    const std::size_t deg = g.degree(v);
    if (deg == 0 && zero_degree) ++*zero_degree;
    const std::size_t b = degree_bucket(deg);
    if (b >= buckets) {
      throw std::invalid_argument("degree " + std::to_string(deg) +
                                  " exceeds bucket range");
    }
    hist[b] += 1.0;
  }
  return hist;
}

struct IdentityMatrix {
  RowMatrix rows;  // n x b
  std::size_t zero_degree_members = 0;

  std::size_t bucket_count() const { return rows.cols(); }
};

/// Row u = sum_k delta^(k-1) * histogram(R_u^k). `buckets` must cover the
/// largest degree in g; the pipeline passes the count for the union of both
/// graphs so rows are comparable across graphs.
inline IdentityMatrix node_identity(const Graph& g, const IdentityParams& params,
                                    std::size_t buckets, unsigned threads = 1) {
  params.validate();
  if (buckets < bucket_count_for(g.max_degree()))
    throw std::invalid_argument("bucket count too small for max degree");
  IdentityMatrix id;
  id.rows = RowMatrix::Zero(g.node_count(), buckets);
  std::atomic<std::size_t> zero_degree{0};

  parallel_for(g.node_count(), threads, [&](std::size_t begin, std::size_t end) {
    NeighborhoodScratch scratch(g.node_count());
    std::vector<std::vector<NodeId>> hops;
    std::size_t local_zero = 0;
    for (std::size_t u = begin; u < end; ++u) {
      scratch.expand(g, static_cast<NodeId>(u), params.max_hops, hops);
      double weight = 1.0;
      for (int k = 0; k < params.max_hops; ++k) {
        for (NodeId v : hops[k]) {
          const std::size_t deg = g.degree(v);
          if (deg == 0) ++local_zero;
          id.rows(u, degree_bucket(deg)) += weight;
        }
        weight *= params.discount;
      }
    }
    zero_degree += local_zero;
  });
  id.zero_degree_members = zero_degree;
  return id;
}

/// Debug dump: `node,b0,...,b{b-1}`.
inline void write_identity_csv(std::ostream& out, const IdentityMatrix& id) {
  out << "node";
  for (std::size_t j = 0; j < id.bucket_count(); ++j) out << ",b" << j;
  out << '\n';
  for (Eigen::Index i = 0; i < id.rows.rows(); ++i) {
    out << i;
    for (Eigen::Index j = 0; j < id.rows.cols(); ++j)
      out << ',' << format_double(id.rows(i, j));
    out << '\n';
  }
}

}  // namespace xalign

#endif  // XALIGN_IDENTITY_HPP_

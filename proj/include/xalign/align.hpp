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

#ifndef XALIGN_ALIGN_HPP_
#define XALIGN_ALIGN_HPP_

#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <span>
#include <vector>

#include "xalign/common.hpp"
#include "xalign/similarity.hpp"

namespace xalign {

struct Neighbor {
  NodeId node;
  double distance_sq;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Total order used for ranking: closer first, then smaller id.
inline bool closer(const Neighbor& a, const Neighbor& b) {
  return a.distance_sq < b.distance_sq ||
         (a.distance_sq == b.distance_sq && a.node < b.node);
}

struct IndexOptions {
  std::size_t leaf_size = 16;
  // Above this dimensionality queries use a linear scan. Results are exact
  // either way. Node embeddings have low intrinsic dimension, so the tree
  // wins even at a few hundred coordinates; by default it is always used.
  std::size_t brute_force_dims = std::numeric_limits<std::size_t>::max();
};

/// Exact k-nearest-neighbor index over a fixed point set (squared Euclidean
/// distance). Built as a k-d tree splitting at the median of the widest
/// dimension; queries prune with incremental box distances.
class NnIndex {
 public:
  explicit NnIndex(RowMatrix points, IndexOptions options = {})
      : points_(std::move(points)), options_(options) {
    if (points_.rows() == 0) throw std::invalid_argument("cannot index zero points");
    if (points_.cols() == 0) throw std::invalid_argument("points have no dimensions");
    if (options_.leaf_size == 0) options_.leaf_size = 1;
    order_.resize(points_.rows());
    std::iota(order_.begin(), order_.end(), NodeId{0});
    if (!uses_linear_scan()) {
      nodes_.reserve(2 * points_.rows() / options_.leaf_size + 1);
      build(0, order_.size());
    }
  }

  std::size_t size() const { return points_.rows(); }
  std::size_t dims() const { return points_.cols(); }
  bool uses_linear_scan() const { return dims() > options_.brute_force_dims; }

  /// The alpha nearest points, ascending by (distance, id).
  std::vector<Neighbor> query(std::span<const double> y, std::size_t alpha) const {
    if (y.size() != dims()) throw std::invalid_argument("query dimension mismatch");
    if (alpha < 1 || alpha > size())
      throw std::invalid_argument("alpha must lie in [1, index size]");
    Heap heap(closer);
    if (uses_linear_scan()) {
      for (NodeId i = 0; i < size(); ++i) offer(heap, alpha, {i, distance_to(y, i)});
    } else {
      std::vector<double> offsets(dims(), 0.0);
      search(0, y, alpha, heap, offsets, 0.0);
    }
    std::vector<Neighbor> out(heap.size());
    for (std::size_t i = out.size(); i-- > 0;) {
      out[i] = heap.top();
      heap.pop();
    }
    return out;
  }

 private:
  using Heap =
      std::priority_queue<Neighbor, std::vector<Neighbor>, decltype(&closer)>;

  struct Node {
    std::size_t begin, end;  // range into order_
    std::size_t left = 0, right = 0;
    std::size_t split_dim = 0;
    double split = 0;
    bool leaf() const { return left == 0; }
  };

  double distance_to(std::span<const double> y, NodeId i) const {
    return squared_distance(
        y, {points_.data() + static_cast<std::size_t>(i) * dims(), dims()});
  }

  static void offer(Heap& heap, std::size_t alpha, const Neighbor& cand) {
    if (heap.size() < alpha) {
      heap.push(cand);
    } else if (closer(cand, heap.top())) {
      heap.pop();
      heap.push(cand);
    }
  }

  std::size_t build(std::size_t begin, std::size_t end) {
    const std::size_t id = nodes_.size();
    nodes_.push_back({begin, end});
    if (end - begin <= options_.leaf_size) return id;

    std::size_t best_dim = 0;
    double best_spread = -1;
    for (std::size_t d = 0; d < dims(); ++d) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (std::size_t i = begin; i < end; ++i) {
        const double v = points_(order_[i], d);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi - lo > best_spread) {
        best_spread = hi - lo;
        best_dim = d;
      }
    }
    if (best_spread <= 0) return id;  // all points identical

    const std::size_t mid = begin + (end - begin) / 2;
    auto key = [&](NodeId a, NodeId b) {
      const double va = points_(a, best_dim), vb = points_(b, best_dim);
      return va < vb || (va == vb && a < b);
    };
    std::nth_element(order_.begin() + begin, order_.begin() + mid,
                     order_.begin() + end, key);
    const double split = points_(order_[mid], best_dim);
    const std::size_t left = build(begin, mid);
    const std::size_t right = build(mid, end);
    nodes_[id].left = left;
    nodes_[id].right = right;
    nodes_[id].split_dim = best_dim;
    nodes_[id].split = split;
    return id;
  }

  // `bound` is the squared distance from y to the cell of `node`, tracked
  // per dimension in `offsets`. Children hold values <= split (left) and
  // >= split (right).
  void search(std::size_t node_id, std::span<const double> y, std::size_t alpha,
              Heap& heap, std::vector<double>& offsets, double bound) const {
    const Node& node = nodes_[node_id];
    if (node.leaf()) {
      for (std::size_t i = node.begin; i < node.end; ++i)
        offer(heap, alpha, {order_[i], distance_to(y, order_[i])});
      return;
    }
    const std::size_t d = node.split_dim;
    const double diff = y[d] - node.split;
    const std::size_t near = diff < 0 ? node.left : node.right;
    const std::size_t far = diff < 0 ? node.right : node.left;
    search(near, y, alpha, heap, offsets, bound);

    const double old = offsets[d];
    const double far_bound = bound - old * old + diff * diff;
    // Equal-distance candidates can still win on id, so keep ties.
    if (heap.size() < alpha || far_bound <= heap.top().distance_sq) {
      offsets[d] = diff;
      search(far, y, alpha, heap, offsets, far_bound);
      offsets[d] = old;
    }
  }

  RowMatrix points_;
  IndexOptions options_;
  std::vector<NodeId> order_;
  std::vector<Node> nodes_;
};

inline NnIndex build_index(RowMatrix points, IndexOptions options = {}) {
  return NnIndex(std::move(points), options);
}

/// Alpha nearest rows of `index`, ascending by (distance, id).
inline std::vector<Neighbor> top_alpha(const NnIndex& index,
                                       std::span<const double> y,
                                       std::size_t alpha) {
  return index.query(y, alpha);
}

struct Match {
  NodeId node;
  double distance_sq;
  double similarity;  // exp(-distance_sq)
};

inline constexpr NodeId kUnmatched = std::numeric_limits<NodeId>::max();

enum class MatchMode {
  per_node,    // independent argmax per G1 node; many-to-one allowed
  one_to_one,  // global greedy over candidate pairs, each G2 node used once
};

struct AlignOptions {
  std::size_t alpha = 1;
  MatchMode mode = MatchMode::per_node;
  IndexOptions index;
  unsigned threads = 1;
};

/// Sparse soft alignment (top-alpha list per G1 node) and the hard map.
struct AlignmentResult {
  std::size_t alpha = 0;
  std::vector<std::vector<Match>> candidates;
  std::vector<NodeId> hard_map;  // kUnmatched only in one_to_one mode

  std::size_t size() const { return candidates.size(); }
};

namespace detail {

inline std::vector<NodeId> greedy_one_to_one(
    const std::vector<std::vector<Match>>& candidates, std::size_t n2) {
  struct Pair {
    double sim;
    NodeId u, v;
  };
  std::vector<Pair> pairs;
  for (std::size_t u = 0; u < candidates.size(); ++u)
    for (const auto& m : candidates[u])
      pairs.push_back({m.similarity, static_cast<NodeId>(u), m.node});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.sim != b.sim) return a.sim > b.sim;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });
  std::vector<NodeId> map(candidates.size(), kUnmatched);
  std::vector<bool> taken(n2, false);
  for (const auto& p : pairs) {
    if (map[p.u] != kUnmatched || taken[p.v]) continue;
    map[p.u] = p.v;
    taken[p.v] = true;
  }
  return map;
}

}  // namespace detail

/// Matches every row of Y1 to its alpha closest rows of Y2.
inline AlignmentResult align(const RowMatrix& Y1, const RowMatrix& Y2,
                             const AlignOptions& options = {}) {
  if (Y1.cols() != Y2.cols())
    throw std::invalid_argument("embedding dimensions differ: " +
                                std::to_string(Y1.cols()) + " vs " +
                                std::to_string(Y2.cols()));
  const NnIndex index(Y2, options.index);
  if (options.alpha < 1 || options.alpha > index.size())
    throw std::invalid_argument("alpha must lie in [1, n2]");

  AlignmentResult result;
  result.alpha = options.alpha;
  result.candidates.resize(Y1.rows());
  result.hard_map.resize(Y1.rows());
  const std::size_t p = Y1.cols();
  parallel_for(Y1.rows(), options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t u = begin; u < end; ++u) {
      auto nn = index.query({Y1.data() + u * p, p}, options.alpha);
      auto& list = result.candidates[u];
      list.reserve(nn.size());
      for (const auto& n : nn) list.push_back({n.node, n.distance_sq, std::exp(-n.distance_sq)});
      result.hard_map[u] = list.front().node;
    }
  });
  if (options.mode == MatchMode::one_to_one)
    result.hard_map = detail::greedy_one_to_one(result.candidates, index.size());
  return result;
}

inline void write_soft_alignment_csv(std::ostream& out, const AlignmentResult& r,
                                     const std::string& header_comment = {}) {
  if (!header_comment.empty()) out << "# " << header_comment << '\n';
  out << "g1_node,rank,g2_node,similarity\n";
  for (std::size_t u = 0; u < r.size(); ++u) {
    for (std::size_t k = 0; k < r.candidates[u].size(); ++k) {
      const auto& m = r.candidates[u][k];
      out << u << ',' << k + 1 << ',' << m.node << ',' << format_double(m.similarity) << '\n';
    }
  }
}

inline void write_hard_map_csv(std::ostream& out, std::span<const NodeId> map,
                               const std::string& header_comment = {}) {
  if (!header_comment.empty()) out << "# " << header_comment << '\n';
  out << "g1_node,g2_node\n";
  for (std::size_t u = 0; u < map.size(); ++u) {
    out << u << ',';
    if (map[u] == kUnmatched) out << "-1";
    else out << map[u];
    out << '\n';
  }
}

}  // namespace xalign

#endif  // XALIGN_ALIGN_HPP_

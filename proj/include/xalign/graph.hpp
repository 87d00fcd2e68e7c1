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

#ifndef XALIGN_GRAPH_HPP_
#define XALIGN_GRAPH_HPP_

#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "xalign/common.hpp"

namespace xalign {

using Edge = std::pair<NodeId, NodeId>;

/// Undirected, unweighted graph with dense node ids [0, n). Adjacency is
/// stored as sorted CSR rows; the graph is immutable once built.
class Graph {
 public:
  Graph() : offsets_(1, 0) {}

  /// Builds a graph on `node_count` nodes. Self-loops and duplicate edges
  /// (in either orientation) are dropped; every edge is stored both ways.
  static Graph from_edges(std::size_t node_count, std::span<const Edge> edges) {
    std::vector<Edge> canon;
    canon.reserve(edges.size());
    for (auto [u, v] : edges) {
      if (u >= node_count || v >= node_count) {
        throw std::invalid_argument("edge endpoint " +
                                    std::to_string(std::max(u, v)) +
                                    " out of range for " +
                                    std::to_string(node_count) + " nodes");
      }
      if (u == v) continue;
      canon.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(canon.begin(), canon.end());
    canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

    Graph g;
    g.offsets_.assign(node_count + 1, 0);
    for (auto [u, v] : canon) {
      ++g.offsets_[u + 1];
      ++g.offsets_[v + 1];
    }
    for (std::size_t i = 0; i < node_count; ++i)
      g.offsets_[i + 1] += g.offsets_[i];
    g.neighbors_.resize(2 * canon.size());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, v] : canon) {
      g.neighbors_[cursor[u]++] = v;
      g.neighbors_[cursor[v]++] = u;
    }
    for (std::size_t i = 0; i < node_count; ++i) {
      std::sort(g.neighbors_.begin() + g.offsets_[i],
                g.neighbors_.begin() + g.offsets_[i + 1]);
    }
    return g;
  }

  std::size_t node_count() const { return offsets_.size() - 1; }
  std::size_t edge_count() const { return neighbors_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId u) const {
    return {neighbors_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }
  std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }

  std::size_t max_degree() const {
    std::size_t best = 0;
    for (std::size_t u = 0; u < node_count(); ++u)
      best = std::max(best, degree(static_cast<NodeId>(u)));
    return best;
  }

  std::size_t min_degree() const {
    if (node_count() == 0) return 0;
    std::size_t best = SIZE_MAX;
    for (std::size_t u = 0; u < node_count(); ++u)
      best = std::min(best, degree(static_cast<NodeId>(u)));
    return best;
  }

  std::size_t isolated_count() const {
    std::size_t count = 0;
    for (std::size_t u = 0; u < node_count(); ++u)
      count += degree(static_cast<NodeId>(u)) == 0;
    return count;
  }

  bool has_edge(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// Edges as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (std::size_t u = 0; u < node_count(); ++u) {
      for (NodeId v : neighbors(static_cast<NodeId>(u)))
        if (u < v) out.emplace_back(static_cast<NodeId>(u), v);
    }
    return out;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> neighbors_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

// Splits on runs of blanks/tabs.
inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::vector<std::string_view> split_char(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view tok) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
  return value;
}

// Strips a trailing '#' comment and surrounding whitespace (handles CRLF).
inline std::string_view content_of(std::string_view line) {
  auto hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);
  return trim(line);
}

}  // namespace detail

enum class IndexBase { zero, one };

/// Reads a whitespace-separated edge list. Lines may carry `#` comments;
/// LF and CRLF line ends are accepted. Nodes are 0..max id.
inline Graph load_edge_list(std::istream& in, IndexBase base = IndexBase::zero) {
  std::vector<Edge> edges;
  std::uint64_t max_id = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = detail::content_of(line);
    if (body.empty()) continue;
    auto toks = detail::split_ws(body);
    if (toks.size() != 2) throw ParseError("expected two node ids", lineno);
    std::uint64_t ids[2];
    for (int i = 0; i < 2; ++i) {
      auto v = detail::parse_number<std::uint64_t>(toks[i]);
      if (!v) {
        throw ParseError("invalid node id '" + std::string(toks[i]) + "'",
                         lineno);
      }
      if (base == IndexBase::one) {
        if (*v == 0) throw ParseError("node id 0 in a one-indexed file", lineno);
        --*v;
      }
      if (*v >= UINT32_MAX) throw ParseError("node id too large", lineno);
      ids[i] = *v;
    }
    max_id = std::max({max_id, ids[0], ids[1]});
    edges.emplace_back(static_cast<NodeId>(ids[0]),
                       static_cast<NodeId>(ids[1]));
  }
  if (edges.empty()) throw ParseError("edge list is empty", 0);
  return Graph::from_edges(max_id + 1, edges);
}

/// Writes one `u v` line per undirected edge (u < v), zero-indexed.
inline void write_edge_list(std::ostream& out, const Graph& g) {
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

/// Graph read from a file whose node tokens are arbitrary strings.
/// labels[i] is the token that became node i (first-seen order).
struct LabeledGraph {
  Graph graph;
  std::vector<std::string> labels;
};

inline LabeledGraph load_labeled_edge_list(std::istream& in) {
  LabeledGraph result;
  std::unordered_map<std::string, NodeId> index;
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  auto id_of = [&](std::string_view tok) {
    auto [it, inserted] =
        index.try_emplace(std::string(tok), static_cast<NodeId>(index.size()));
    if (inserted) result.labels.emplace_back(tok);
    return it->second;
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto body = detail::content_of(line);
    if (body.empty()) continue;
    auto toks = detail::split_ws(body);
    if (toks.size() != 2) throw ParseError("expected two node labels", lineno);
    const NodeId u = id_of(toks[0]);
    const NodeId v = id_of(toks[1]);
    edges.emplace_back(u, v);
  }
  if (edges.empty()) throw ParseError("edge list is empty", 0);
  result.graph = Graph::from_edges(result.labels.size(), edges);
  return result;
}

/// Column type of a node attribute. Categorical values are integers in
/// [0, cardinality).
struct AttributeColumn {
  enum class Kind { categorical, real };
  Kind kind = Kind::categorical;
  int cardinality = 2;

  static AttributeColumn categorical(int k) { return {Kind::categorical, k}; }
  static AttributeColumn real() { return {Kind::real, 0}; }

  friend bool operator==(const AttributeColumn&,
                         const AttributeColumn&) = default;
};

/// Parses a kinds list such as "c2,c3,r" (c<k>: categorical with k values,
/// r: real).
inline std::vector<AttributeColumn> parse_column_kinds(std::string_view text) {
  std::vector<AttributeColumn> kinds;
  for (auto tok : detail::split_char(text, ',')) {
    if (tok == "r") {
      kinds.push_back(AttributeColumn::real());
    } else if (tok.size() >= 2 && tok[0] == 'c') {
      auto k = detail::parse_number<int>(tok.substr(1));
      if (!k || *k < 2) {
        throw std::invalid_argument("bad categorical kind '" +
                                    std::string(tok) + "'");
      }
      kinds.push_back(AttributeColumn::categorical(*k));
    } else {
      throw std::invalid_argument("bad attribute kind '" + std::string(tok) +
                                  "'");
    }
  }
  return kinds;
}

/// Per-node attribute rows (n x F). Categorical cells hold integral values.
class AttributeTable {
 public:
  AttributeTable() = default;
  AttributeTable(std::vector<AttributeColumn> columns, RowMatrix values)
      : columns_(std::move(columns)), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.cols()) != columns_.size())
      throw std::invalid_argument("attribute column count mismatch");
    validate();
  }

  std::size_t node_count() const { return values_.rows(); }
  std::size_t attr_count() const { return columns_.size(); }
  const std::vector<AttributeColumn>& columns() const { return columns_; }
  const RowMatrix& values() const { return values_; }

  std::span<const double> row(NodeId u) const {
    return {values_.data() + static_cast<std::size_t>(u) * values_.cols(),
            static_cast<std::size_t>(values_.cols())};
  }

  bool all_categorical() const {
    return std::all_of(columns_.begin(), columns_.end(), [](const auto& c) {
      return c.kind == AttributeColumn::Kind::categorical;
    });
  }

  friend bool operator==(const AttributeTable& a, const AttributeTable& b) {
    return a.columns_ == b.columns_ && a.values_ == b.values_;
  }

 private:
  void validate() const {
    for (Eigen::Index j = 0; j < values_.cols(); ++j) {
      const auto& col = columns_[j];
      for (Eigen::Index i = 0; i < values_.rows(); ++i) {
        const double v = values_(i, j);
        if (!std::isfinite(v))
          throw std::invalid_argument("attribute value is not finite");
        if (col.kind == AttributeColumn::Kind::categorical &&
            (v != std::floor(v) || v < 0 || v >= col.cardinality)) {
          throw std::invalid_argument("categorical value outside alphabet");
        }
      }
    }
  }

  std::vector<AttributeColumn> columns_;
  RowMatrix values_;
};

/// Reads `node,attr1,...,attrF` CSV (header row required). Every node of the
/// graph must appear exactly once.
inline AttributeTable load_attributes(std::istream& in, std::size_t node_count,
                                      std::vector<AttributeColumn> kinds) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> width;
  RowMatrix values(node_count, kinds.size());
  std::vector<bool> seen(node_count, false);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = detail::content_of(line);
    if (body.empty()) continue;
    auto cells = detail::split_char(body, ',');
    if (!width) {
      if (cells.empty() || cells[0] != "node")
        throw ParseError("attribute header must start with 'node'", lineno);
      width = cells.size();
      if (cells.size() - 1 != kinds.size()) {
        throw ParseError("header declares " + std::to_string(cells.size() - 1) +
                             " attributes but " + std::to_string(kinds.size()) +
                             " kinds were given",
                         lineno);
      }
      continue;
    }
    if (cells.size() != *width) throw ParseError("wrong column count", lineno);
    auto node = detail::parse_number<std::uint64_t>(cells[0]);
    if (!node) throw ParseError("invalid node id", lineno);
    if (*node >= node_count) throw ParseError("node id out of range", lineno);
    if (seen[*node]) throw ParseError("duplicate node row", lineno);
    seen[*node] = true;
    ++rows;
    for (std::size_t j = 0; j < kinds.size(); ++j) {
      auto v = detail::parse_number<double>(cells[j + 1]);
      if (!v) throw ParseError("non-numeric attribute value", lineno);
      if (!std::isfinite(*v))
        throw ParseError("attribute value must be finite", lineno);
      if (kinds[j].kind == AttributeColumn::Kind::categorical &&
          (*v != std::floor(*v) || *v < 0 || *v >= kinds[j].cardinality)) {
        throw ParseError("categorical value outside alphabet", lineno);
      }
      values(*node, j) = *v;
    }
  }
  if (!width) throw ParseError("attribute file is empty", 0);
  if (rows != node_count) {
    throw ParseError("attribute table has " + std::to_string(rows) +
                         " rows for a graph of " + std::to_string(node_count) +
                         " nodes",
                     0);
  }
  return AttributeTable(std::move(kinds), std::move(values));
}

inline void write_attributes(std::ostream& out, const AttributeTable& t) {
  out << "node";
  for (std::size_t j = 0; j < t.attr_count(); ++j) out << ",attr" << j + 1;
  out << '\n';
  for (std::size_t i = 0; i < t.node_count(); ++i) {
    out << i;
    for (double v : t.row(static_cast<NodeId>(i))) out << ',' << format_double(v);
    out << '\n';
  }
}

/// Disjoint-union indexing: G1 occupies [0, n1), G2 occupies [n1, n1 + n2).
class CombinedIndex {
 public:
  CombinedIndex(std::size_t n1, std::size_t n2) : n1_(n1), n2_(n2) {}

  std::size_t size() const { return n1_ + n2_; }
  std::size_t first_size() const { return n1_; }
  std::size_t second_size() const { return n2_; }

  /// graph is 0 for G1 and 1 for G2.
  std::size_t to_combined(int graph, NodeId local) const {
    return graph == 0 ? local : n1_ + local;
  }

  std::pair<int, NodeId> to_local(std::size_t combined) const {
    if (combined >= size()) throw std::out_of_range("combined id out of range");
    if (combined < n1_) return {0, static_cast<NodeId>(combined)};
    return {1, static_cast<NodeId>(combined - n1_)};
  }

 private:
  std::size_t n1_;
  std::size_t n2_;
};

inline CombinedIndex combine(const Graph& g1, const Graph& g2) {
  return {g1.node_count(), g2.node_count()};
}

}  // namespace xalign

#endif  // XALIGN_GRAPH_HPP_

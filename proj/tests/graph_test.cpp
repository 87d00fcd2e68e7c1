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

Graph parse(const std::string& text, IndexBase base = IndexBase::zero) {
  std::istringstream in(text);
  return load_edge_list(in, base);
}

TEST(EdgeList, PathGraph) {
  Graph g = parse("0 1\n1 2");
  ASSERT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.degree(0), 1u);
  EXPECT_EQ(g.degree(1), 2u);
  EXPECT_EQ(g.degree(2), 1u);
}

TEST(EdgeList, DropsDuplicatesAndSelfLoops) {
  Graph g = parse("0 1\n1 0\n0 0");
  EXPECT_EQ(g.node_count(), 2u);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_FALSE(g.has_edge(0, 0));
}

TEST(EdgeList, MalformedTokenReportsLine) {
  try {
    parse("0 x");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  try {
    parse("0 1\n# fine\n2 3 4\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(EdgeList, EmptyInputIsError) {
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("# only a comment\n\n"), ParseError);
}

TEST(EdgeList, CommentsCrlfAndOneIndexing) {
  Graph g = parse("# header\r\n1 2 # trailing\r\n2\t3\r\n", IndexBase::one);
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 2));
  EXPECT_THROW(parse("0 1\n", IndexBase::one), ParseError);
}

TEST(EdgeList, IsolatedNodesAreKept) {
  Graph g = parse("0 3\n");
  EXPECT_EQ(g.node_count(), 4u);
  EXPECT_EQ(g.isolated_count(), 2u);
}

TEST(EdgeList, ReserializationIsIdempotentOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Graph g = generate_er(60, 4.0, seed);
    std::ostringstream out;
    write_edge_list(out, g);
    Graph again = parse(out.str());
    EXPECT_EQ(again, g);
  }
}

TEST(GraphInvariants, SymmetryAndHandshake) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Graph g = generate_er(120, 6.0, 100 + seed);
    std::size_t degree_sum = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
      auto nb = g.neighbors(u);
      EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
      degree_sum += g.degree(u);
      for (NodeId v : nb) {
        EXPECT_LT(v, g.node_count());
        EXPECT_NE(u, v);
        EXPECT_TRUE(g.has_edge(v, u));
      }
    }
    EXPECT_EQ(degree_sum, 2 * g.edge_count());
  }
}

TEST(LabeledEdgeList, FirstSeenOrder) {
  std::istringstream in("alice bob\nbob carol\ncarol alice\n");
  auto lg = load_labeled_edge_list(in);
  ASSERT_EQ(lg.labels.size(), 3u);
  EXPECT_EQ(lg.labels[0], "alice");
  EXPECT_EQ(lg.labels[2], "carol");
  EXPECT_EQ(lg.graph.edge_count(), 3u);
}

AttributeTable parse_attrs(const std::string& text, std::size_t n, const std::string& kinds) {
  std::istringstream in(text);
  return load_attributes(in, n, parse_column_kinds(kinds));
}

TEST(Attributes, SingleBinaryColumn) {
  auto t = parse_attrs("node,attr1\n0,1\n1,0\n2,1\n", 3, "c2");
  EXPECT_EQ(t.attr_count(), 1u);
  EXPECT_EQ(t.row(0)[0], 1.0);
  EXPECT_EQ(t.row(1)[0], 0.0);
  EXPECT_EQ(t.row(2)[0], 1.0);
}

TEST(Attributes, RowCountMismatch) {
  EXPECT_THROW(parse_attrs("node,a\n0,1\n1,0\n", 3, "c2"), ParseError);
}

TEST(Attributes, NonFiniteReal) {
  EXPECT_THROW(parse_attrs("node,a\n0,1.5\n1,inf\n", 2, "r"), ParseError);
  EXPECT_THROW(parse_attrs("node,a\n0,abc\n1,2\n", 2, "r"), ParseError);
}

TEST(Attributes, CategoricalOutsideAlphabet) {
  EXPECT_THROW(parse_attrs("node,a\n0,2\n1,0\n", 2, "c2"), ParseError);
  EXPECT_THROW(parse_attrs("node,a\n0,0.5\n1,0\n", 2, "c2"), ParseError);
  auto t = parse_attrs("node,a,b\n1,2,0.25\n0,0,-3\n", 2, "c3,r");
  EXPECT_EQ(t.row(1)[0], 2.0);
  EXPECT_EQ(t.row(0)[1], -3.0);
}

TEST(Attributes, KindListParsing) {
  auto k = parse_column_kinds("c2,c5,r");
  ASSERT_EQ(k.size(), 3u);
  EXPECT_EQ(k[1], AttributeColumn::categorical(5));
  EXPECT_EQ(k[2].kind, AttributeColumn::Kind::real);
  EXPECT_THROW(parse_column_kinds("c1"), std::invalid_argument);
  EXPECT_THROW(parse_column_kinds("x"), std::invalid_argument);
}

TEST(Combine, Indexing) {
  Graph g1 = testing::path_graph(3), g2 = testing::path_graph(2);
  auto idx = combine(g1, g2);
  EXPECT_EQ(idx.size(), 5u);
  EXPECT_EQ(idx.to_local(4), std::make_pair(1, NodeId{1}));
  EXPECT_EQ(idx.to_combined(0, 0), 0u);
  EXPECT_THROW(idx.to_local(5), std::out_of_range);
}

TEST(Combine, RoundTripBothGraphs) {
  CombinedIndex idx(7, 11);
  for (int graph = 0; graph < 2; ++graph) {
    const std::size_t n = graph == 0 ? 7 : 11;
    for (NodeId u = 0; u < n; ++u) {
      auto back = idx.to_local(idx.to_combined(graph, u));
      EXPECT_EQ(back.first, graph);
      EXPECT_EQ(back.second, u);
    }
  }
}

}  // namespace
}  // namespace xalign

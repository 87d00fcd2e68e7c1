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

// Command-line front end: `embed`, `align`, `bench` and `oracle`.
// Exit codes: 0 success, 1 runtime or numerical failure, 2 usage or I/O error.

#ifndef XALIGN_CLI_HPP_
#define XALIGN_CLI_HPP_

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "xalign/harness.hpp"
#include "xalign/walk_oracle.hpp"

namespace xalign::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  // inputs
  std::string graph1, graph2, attrs1, attrs2, attr_kinds;
  std::string attr_distance = "categorical";
  bool one_indexed = false;
  // hyperparameters
  int k = 2;
  double delta = 0.01;
  double gamma_s = 1.0;
  double gamma_a = 1.0;
  double landmark_mult = 10.0;
  long long p = -1;  // -1: floor(landmark_mult * log2 n)
  std::size_t alpha = 1;
  std::uint64_t seed = 0;
  double rank_tol = kDefaultRankTolerance;
  bool stratified = false;
  bool one_to_one = false;
  std::size_t brute_force_dims = IndexOptions{}.brute_force_dims;
  unsigned threads = 1;
  // outputs
  std::string out_dir = ".";
  std::string format = "csv";
  std::string config;
  std::string identity_out;
  // align
  std::string emb1, emb2, truth;
  // bench
  std::string ps_grid = "0";
  std::string pa_grid = "0";
  std::size_t trials = 5;
  std::string er_n;
  double er_deg = 10.0;
  std::size_t synthetic_attrs = 0;
  std::string report_alphas = "1,5,10";
  // oracle
  std::size_t oracle_n = 20;
  std::string m_list = "100,1000,10000";
  std::size_t oracle_seeds = 10;
};

namespace detail {

inline std::ifstream open_in(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open '" + path + "'");
  return in;
}

inline std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  for (auto tok : xalign::detail::split_char(text, ',')) {
    auto v = xalign::detail::parse_number<T>(tok);
    if (!v) throw UsageError(std::string("bad value in ") + what + ": '" + std::string(tok) + "'");
    out.push_back(*v);
  }
  return out;
}

inline Graph load_graph(const std::string& path, const Options& o) {
  auto in = open_in(path);
  Graph g;
  try {
    g = load_edge_list(in, o.one_indexed ? IndexBase::one : IndexBase::zero);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
  if (g.isolated_count() > 0)
    std::cerr << "warning: " << path << " has " << g.isolated_count() << " isolated nodes\n";
  return g;
}

inline std::optional<AttributeTable> load_attrs(const std::string& path, const Graph& g,
                                                const Options& o) {
  if (path.empty()) return std::nullopt;
  if (o.attr_kinds.empty()) throw UsageError("--attr-kinds is required with attribute files");
  std::vector<AttributeColumn> kinds;
  try {
    kinds = parse_column_kinds(o.attr_kinds);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  auto in = open_in(path);
  try {
    return load_attributes(in, g.node_count(), std::move(kinds));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

inline AttributeDistance parse_distance(const std::string& s) {
  if (s == "categorical") return AttributeDistance::categorical;
  if (s == "euclidean") return AttributeDistance::euclidean;
  if (s == "cosine") return AttributeDistance::cosine;
  throw UsageError("unknown attribute distance '" + s + "'");
}

inline PipelineConfig pipeline_config(const Options& o) {
  if (o.p == 0 || o.p < -1) throw UsageError("--p must be a positive landmark count");
  if (o.alpha < 1) throw UsageError("--alpha must be >= 1");
  if (o.k < 1) throw UsageError("--k must be >= 1");
  if (!(o.delta > 0 && o.delta <= 1)) throw UsageError("--delta must lie in (0, 1]");
  if (o.gamma_s < 0 || o.gamma_a < 0 || !(o.gamma_s + o.gamma_a > 0))
    throw UsageError("--gamma-s/--gamma-a must be >= 0 with a positive sum");
  if (!(o.landmark_mult > 0)) throw UsageError("--landmark-mult must be positive");
  if (!(o.rank_tol >= 0 && o.rank_tol < 1)) throw UsageError("--rank-tol must lie in [0, 1)");
  PipelineConfig c;
  c.identity.max_hops = o.k;
  c.identity.discount = o.delta;
  c.similarity.gamma_s = o.gamma_s;
  c.similarity.gamma_a = o.gamma_a;
  c.similarity.attr_distance = parse_distance(o.attr_distance);
  c.landmark_multiplier = o.landmark_mult;
  if (o.p > 0) c.landmark_count = static_cast<std::size_t>(o.p);
  c.stratified_landmarks = o.stratified;
  c.rank_tolerance = o.rank_tol;
  c.alpha = o.alpha;
  c.match_mode = o.one_to_one ? MatchMode::one_to_one : MatchMode::per_node;
  c.index.brute_force_dims = o.brute_force_dims;
  c.seed = o.seed;
  c.threads = std::max(1u, o.threads);
  return c;
}

// Resolved configuration for output headers. Thread count and output
// location are excluded: they never change results.
inline std::string describe(const std::string& command, const Options& o) {
  std::ostringstream s;
  s << "xalign " << command << " k=" << o.k << " delta=" << format_double(o.delta)
    << " gamma_s=" << format_double(o.gamma_s) << " gamma_a=" << format_double(o.gamma_a)
    << " landmark_mult=" << format_double(o.landmark_mult)
    << " p=" << (o.p > 0 ? std::to_string(o.p) : std::string("auto")) << " alpha=" << o.alpha
    << " seed=" << o.seed << " rank_tol=" << format_double(o.rank_tol)
    << " attr_distance=" << o.attr_distance << " landmarks="
    << (o.stratified ? "stratified" : "uniform")
    << " match=" << (o.one_to_one ? "one_to_one" : "per_node");
  if (!o.graph1.empty()) s << " graph1=" << o.graph1;
  if (!o.graph2.empty()) s << " graph2=" << o.graph2;
  if (!o.attrs1.empty()) s << " attrs1=" << o.attrs1 << " attr_kinds=" << o.attr_kinds;
  if (!o.attrs2.empty()) s << " attrs2=" << o.attrs2;
  if (!o.emb1.empty()) s << " emb1=" << o.emb1;
  if (!o.emb2.empty()) s << " emb2=" << o.emb2;
  if (command == "bench") {
    s << " ps_grid=" << o.ps_grid << " pa_grid=" << o.pa_grid << " trials=" << o.trials
      << " report_alphas=" << o.report_alphas << " synthetic_attrs=" << o.synthetic_attrs;
    if (o.graph1.empty()) s << " er_n=" << o.er_n << " er_deg=" << format_double(o.er_deg);
  }
  return s.str();
}

inline std::filesystem::path output_dir(const Options& o) {
  std::filesystem::path dir(o.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + o.out_dir + "'");
  return dir;
}

inline void print_times(std::ostream& out, const StageTimes& t) {
  out << "time identity=" << t.identity << "s similarity=" << t.similarity
      << "s embed=" << t.embed << "s align=" << t.align << "s total=" << t.total() << "s\n";
}

inline std::vector<NodeId> read_truth(const std::string& path, std::size_t n1) {
  auto in = open_in(path);
  std::vector<NodeId> map(n1, kUnmatched);
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = xalign::detail::content_of(line);
    if (body.empty()) continue;
    auto cells = xalign::detail::split_char(body, ',');
    if (!header) {
      header = true;
      if (cells.size() == 2 && cells[0] == "g1_node") continue;
    }
    if (cells.size() != 2) throw ParseError(path + ": expected g1_node,g2_node", lineno);
    auto u = xalign::detail::parse_number<std::uint64_t>(cells[0]);
    auto v = xalign::detail::parse_number<std::uint64_t>(cells[1]);
    if (!u || !v || *u >= n1) throw ParseError(path + ": bad truth row", lineno);
    map[*u] = static_cast<NodeId>(*v);
  }
  for (auto v : map)
    if (v == kUnmatched) throw ParseError(path + ": truth does not cover every G1 node", 0);
  return map;
}

}  // namespace detail

inline void write_truth_csv(std::ostream& out, const GroundTruth& truth) {
  out << "g1_node,g2_node\n";
  for (std::size_t u = 0; u < truth.size(); ++u)
    out << u << ',' << truth(static_cast<NodeId>(u)) << '\n';
}

inline int cmd_embed(const Options& o, std::ostream& out) {
  if (o.graph1.empty() || o.graph2.empty()) throw UsageError("embed needs --graph1 and --graph2");
  if (o.format != "csv" && o.format != "bin") throw UsageError("--format must be csv or bin");
  auto cfg = detail::pipeline_config(o);
  const Graph g1 = detail::load_graph(o.graph1, o);
  const Graph g2 = detail::load_graph(o.graph2, o);
  auto a1 = detail::load_attrs(o.attrs1, g1, o);
  auto a2 = detail::load_attrs(o.attrs2, g2, o);
  if (cfg.landmark_count && *cfg.landmark_count > g1.node_count() + g2.node_count())
    throw UsageError("--p exceeds the combined node count");
  auto res = run_embedding(g1, a1 ? &*a1 : nullptr, g2, a2 ? &*a2 : nullptr, cfg);
  if (res.zero_degree_members > 0)
    std::cerr << "warning: " << res.zero_degree_members << " zero-degree neighbor entries\n";

  const auto dir = detail::output_dir(o);
  const std::string header = detail::describe("embed", o);
  if (o.format == "csv") {
    auto f = detail::open_out(dir / "embeddings.csv");
    write_embeddings_csv(f, res.embedding, header);
  } else {
    auto f1 = detail::open_out(dir / "embeddings_g1.bin", true);
    write_embeddings_binary(f1, res.embedding.first());
    auto f2 = detail::open_out(dir / "embeddings_g2.bin", true);
    write_embeddings_binary(f2, res.embedding.second());
  }
  if (!o.identity_out.empty()) {
    auto f = detail::open_out(o.identity_out);
    IdentityMatrix id{res.features.identity, res.zero_degree_members};
    write_identity_csv(f, id);
  }
  out << "# " << header << '\n';
  out << "n1=" << g1.node_count() << " n2=" << g2.node_count() << " p=" << res.landmarks.size()
      << " b=" << res.bucket_count << '\n';
  detail::print_times(out, res.times);
  return kExitOk;
}

namespace detail {

inline bool is_binary_embedding(const std::string& path) {
  auto in = open_in(path, true);
  char magic[4] = {};
  in.read(magic, 4);
  return in.gcount() == 4 && std::memcmp(magic, "XNMF", 4) == 0;
}

inline std::pair<RowMatrix, RowMatrix> load_embedding_pair(const Options& o) {
  auto read_csv = [](const std::string& path) {
    auto in = open_in(path);
    try {
      return read_embeddings_csv(in);
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what(), 0);
    }
  };
  auto read_bin = [](const std::string& path) {
    auto in = open_in(path, true);
    try {
      return read_embeddings_binary(in);
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what(), 0);
    }
  };
  RowMatrix y1, y2;
  if (is_binary_embedding(o.emb1)) {
    if (o.emb2.empty()) throw UsageError("binary embeddings need --emb1 and --emb2");
    y1 = read_bin(o.emb1);
  } else {
    auto [a, b] = read_csv(o.emb1);
    y1 = std::move(a);
    if (o.emb2.empty()) y2 = std::move(b);
  }
  if (!o.emb2.empty()) {
    if (is_binary_embedding(o.emb2)) {
      y2 = read_bin(o.emb2);
    } else {
      auto [a, b] = read_csv(o.emb2);
      y2 = b.rows() > 0 ? std::move(b) : std::move(a);
    }
  }
  if (y1.rows() == 0 || y2.rows() == 0) throw UsageError("embedding input lacks rows for a graph");
  if (y1.cols() != y2.cols())
    throw NumericalError("embedding dimensions differ: " + std::to_string(y1.cols()) + " vs " +
                         std::to_string(y2.cols()));
  return {std::move(y1), std::move(y2)};
}

}  // namespace detail

inline int cmd_align(const Options& o, std::ostream& out) {
  auto cfg = detail::pipeline_config(o);
  const bool from_graphs = !o.graph1.empty() || !o.graph2.empty();
  if (from_graphs == !o.emb1.empty())
    throw UsageError("align needs either --graph1/--graph2 or --emb1 [--emb2]");
  StageTimes times;
  AlignmentResult result;
  if (from_graphs) {
    if (o.graph1.empty() || o.graph2.empty()) throw UsageError("align needs both graphs");
    const Graph g1 = detail::load_graph(o.graph1, o);
    const Graph g2 = detail::load_graph(o.graph2, o);
    auto a1 = detail::load_attrs(o.attrs1, g1, o);
    auto a2 = detail::load_attrs(o.attrs2, g2, o);
    if (o.alpha > g2.node_count()) throw UsageError("--alpha exceeds the size of graph 2");
    if (cfg.landmark_count && *cfg.landmark_count > g1.node_count() + g2.node_count())
      throw UsageError("--p exceeds the combined node count");
    auto res = run_alignment(g1, a1 ? &*a1 : nullptr, g2, a2 ? &*a2 : nullptr, cfg);
    times = res.embed.times;
    result = std::move(res.alignment);
  } else {
    auto [y1, y2] = detail::load_embedding_pair(o);
    if (o.alpha > static_cast<std::size_t>(y2.rows()))
      throw UsageError("--alpha exceeds the size of graph 2");
    Stopwatch w;
    AlignOptions opts{cfg.alpha, cfg.match_mode, cfg.index, cfg.threads};
    result = align(y1, y2, opts);
    times.align = w.seconds();
  }

  const auto dir = detail::output_dir(o);
  const std::string header = detail::describe("align", o);
  {
    auto f = detail::open_out(dir / "alignment_soft.csv");
    write_soft_alignment_csv(f, result, header);
    auto h = detail::open_out(dir / "alignment_hard.csv");
    write_hard_map_csv(h, result.hard_map, header);
  }
  out << "# " << header << '\n';
  out << "aligned " << result.size() << " nodes, alpha=" << result.alpha << '\n';
  detail::print_times(out, times);
  if (!o.truth.empty()) {
    const GroundTruth truth(detail::read_truth(o.truth, result.size()));
    out << "accuracy=" << format_double(accuracy(result.hard_map, truth)) << '\n';
    out << "top" << result.alpha << "_accuracy="
        << format_double(top_alpha_accuracy(result, truth, result.alpha)) << '\n';
  }
  return kExitOk;
}

inline int cmd_bench(const Options& o, std::ostream& out) {
  auto cfg = detail::pipeline_config(o);
  const auto ps = detail::parse_list<double>(o.ps_grid, "--ps-grid");
  const auto pa = detail::parse_list<double>(o.pa_grid, "--pa-grid");
  const auto alphas = detail::parse_list<std::size_t>(o.report_alphas, "--report-alphas");
  for (double v : ps)
    if (!(v >= 0 && v < 1)) throw UsageError("--ps-grid values must lie in [0, 1)");
  for (double v : pa)
    if (!(v >= 0 && v <= 1)) throw UsageError("--pa-grid values must lie in [0, 1]");
  for (auto a : alphas)
    if (a < 1) throw UsageError("--report-alphas values must be >= 1");
  if (o.trials < 1) throw UsageError("--trials must be >= 1");

  struct Base {
    Graph graph;
    std::optional<AttributeTable> attrs;
  };
  std::vector<Base> bases;
  if (!o.graph1.empty()) {
    Base b{detail::load_graph(o.graph1, o), std::nullopt};
    b.attrs = detail::load_attrs(o.attrs1, b.graph, o);
    bases.push_back(std::move(b));
  } else {
    if (o.er_n.empty()) throw UsageError("bench needs --graph1 or --er-n");
    for (auto n : detail::parse_list<std::size_t>(o.er_n, "--er-n")) {
      if (n < 2 || !(o.er_deg > 0 && o.er_deg < static_cast<double>(n)))
        throw UsageError("--er-n/--er-deg out of range");
      bases.push_back({generate_er(n, o.er_deg, derive_seed(o.seed, seed_stream::kGenerator + n)),
                       std::nullopt});
    }
  }

  std::vector<ExperimentReport> reports;
  for (const auto& base : bases) {
    for (double s : ps) {
      for (double a : pa) {
        ExperimentConfig ec;
        ec.pipeline = cfg;
        ec.p_s = s;
        ec.p_a = a;
        ec.trials = o.trials;
        ec.seed = o.seed;
        ec.report_alphas = alphas;
        ec.synthetic_attributes = o.synthetic_attrs;
        reports.push_back(run_experiment(base.graph, base.attrs ? &*base.attrs : nullptr, ec));
      }
    }
  }

  const auto dir = detail::output_dir(o);
  const std::string header = detail::describe("bench", o);
  {
    auto f = detail::open_out(dir / "bench_report.csv");
    write_report_csv(f, reports, header);
    auto t = detail::open_out(dir / "bench_timings.csv");
    write_timings_csv(t, reports);
  }

  out << "# " << header << '\n';
  for (const auto& r : reports) {
    out << "n=" << r.node_count << " p_s=" << format_double(r.p_s)
        << " p_a=" << format_double(r.p_a) << " accuracy=" << r.mean_accuracy();
    for (std::size_t i = 0; i < alphas.size(); ++i)
      out << " top" << alphas[i] << '=' << r.mean_top(i);
    out << " time=" << r.mean_total_time() << "s\n";
  }
  // Scaling between consecutive graph sizes, at the first noise cell.
  const std::size_t cells = ps.size() * pa.size();
  for (std::size_t i = 1; i < bases.size(); ++i) {
    const auto& prev = reports[(i - 1) * cells];
    const auto& cur = reports[i * cells];
    const double ratio = cur.mean_total_time() / prev.mean_total_time();
    out << "scaling n=" << prev.node_count << "->" << cur.node_count << " time_ratio=" << ratio
        << (ratio >= 4.0 ? " FLAG: not sub-quadratic" : " ok") << '\n';
  }
  return kExitOk;
}

inline int cmd_oracle(const Options& o, std::ostream& out) {
  if (o.oracle_n < 1) throw UsageError("--n must be >= 1");
  if (o.oracle_seeds < 1) throw UsageError("--seeds must be >= 1");
  const auto ms = detail::parse_list<std::size_t>(o.m_list, "--m-list");
  for (auto m : ms)
    if (m < 1) throw UsageError("--m-list values must be >= 1");
  auto cfg = detail::pipeline_config(o);

  RowMatrix S;
  if (o.oracle_n == 1) {
    S = RowMatrix::Ones(1, 1);
  } else {
    const double deg = std::min(4.0, (o.oracle_n - 1) / 2.0);
    const Graph g = generate_er(o.oracle_n, deg, derive_seed(o.seed, seed_stream::kGenerator));
    NodeFeatures f;
    f.identity = node_identity(g, cfg.identity, bucket_count_for(g.max_degree())).rows;
    S = dense_similarity_oracle(f, cfg.similarity);
  }

  out << "# xalign oracle n=" << o.oracle_n << " seed=" << o.seed
      << " seeds=" << o.oracle_seeds << " k=" << o.k << " delta=" << format_double(o.delta)
      << " gamma_s=" << format_double(o.gamma_s) << '\n';
  out << "seed";
  for (auto m : ms) out << ",m=" << m;
  out << '\n';
  std::vector<double> mean(ms.size(), 0.0);
  std::size_t monotone = 0;
  for (std::size_t s = 0; s < o.oracle_seeds; ++s) {
    const std::uint64_t walk_seed = derive_seed(o.seed, 1000 + s);
    out << s;
    double prev = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const auto D = sample_cooccurrence(S, {ms[i], walk_seed}, cfg.threads);
      const double dev = convergence_check(D, S, ms[i]);
      mean[i] += dev / o.oracle_seeds;
      decreasing = decreasing && (dev < prev || dev == 0);
      prev = dev;
      out << ',' << format_double(dev);
    }
    monotone += decreasing;
    out << '\n';
  }
  out << "mean";
  for (double v : mean) out << ',' << format_double(v);
  out << '\n';
  out << "monotone_seeds=" << monotone << '/' << o.oracle_seeds << '\n';
  return kExitOk;
}

namespace detail {

inline void add_common(CLI::App* app, Options& o) {
  app->add_option("--graph1", o.graph1, "Edge list of graph 1");
  app->add_option("--graph2", o.graph2, "Edge list of graph 2");
  app->add_option("--attrs1", o.attrs1, "Attribute CSV for graph 1");
  app->add_option("--attrs2", o.attrs2, "Attribute CSV for graph 2");
  app->add_option("--attr-kinds", o.attr_kinds, "Column kinds, e.g. c2,c3,r");
  app->add_option("--attr-distance", o.attr_distance, "categorical | euclidean | cosine");
  app->add_flag("--one-indexed", o.one_indexed, "Edge-list ids start at 1");
  app->add_option("--k", o.k, "Maximum hop distance");
  app->add_option("--delta", o.delta, "Hop discount in (0, 1]");
  app->add_option("--gamma-s", o.gamma_s, "Structural weight");
  app->add_option("--gamma-a", o.gamma_a, "Attribute weight");
  app->add_option("--landmark-mult", o.landmark_mult, "t in p = floor(t log2 n)");
  app->add_option("--p", o.p, "Landmark count (overrides --landmark-mult)");
  app->add_option("--alpha", o.alpha, "Candidates kept per node");
  app->add_option("--seed", o.seed, "Master seed");
  app->add_option("--rank-tol", o.rank_tol, "Relative pseudoinverse cutoff");
  app->add_flag("--stratified", o.stratified, "Sample landmarks per graph");
  app->add_flag("--one-to-one", o.one_to_one, "Greedy one-to-one hard matching");
  app->add_option("--kd-max-dims", o.brute_force_dims,
                  "Use a linear-scan index above this dimensionality");
  app->add_option("--threads", o.threads, "Worker threads");
  app->add_option("--out-dir", o.out_dir, "Output directory");
  app->add_option("--config", o.config, "Flat key = value file of the options above");
}

// Expands every `--config FILE` into the equivalent flags, appended after the
// command line. Keys are option names without dashes (underscores allowed);
// `true`/`false` set or skip a flag. Options given explicitly win.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::set<std::string> explicit_keys;
  std::vector<std::string> files;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0) continue;
    const auto eq = a.find('=');
    const std::string key = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
    if (key == "config") {
      if (eq != std::string::npos) files.push_back(a.substr(eq + 1));
      else if (i + 1 < args.size()) files.push_back(args[i + 1]);
    } else {
      explicit_keys.insert(key);
    }
  }
  for (const auto& path : files) {
    auto in = open_in(path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto body = xalign::detail::content_of(line);
      if (body.empty()) continue;
      const auto eq = body.find('=');
      if (eq == std::string_view::npos)
        throw ParseError(path + ": expected key = value", lineno);
      std::string key(xalign::detail::trim(body.substr(0, eq)));
      std::string value(xalign::detail::trim(body.substr(eq + 1)));
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
        value = value.substr(1, value.size() - 2);
      std::replace(key.begin(), key.end(), '_', '-');
      if (key.empty() || key == "config")
        throw ParseError(path + ": bad key '" + key + "'", lineno);
      if (explicit_keys.count(key)) continue;
      if (value == "false") continue;
      args.push_back("--" + key);
      if (value != "true") args.push_back(value);
    }
  }
  return args;
}

}  // namespace detail

/// Parses argv and runs one subcommand. Never throws.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Cross-graph node alignment via implicit similarity factorization"};
  app.require_subcommand(1);

  auto* embed_cmd = app.add_subcommand("embed", "Embed two graphs into a shared space");
  detail::add_common(embed_cmd, o);
  embed_cmd->add_option("--format", o.format, "csv | bin");
  embed_cmd->add_option("--identity-out", o.identity_out, "Write identity matrix CSV");

  auto* align_cmd = app.add_subcommand("align", "Align two graphs or two embeddings");
  detail::add_common(align_cmd, o);
  align_cmd->add_option("--emb1", o.emb1, "Embeddings of graph 1 (csv or bin)");
  align_cmd->add_option("--emb2", o.emb2, "Embeddings of graph 2 (csv or bin)");
  align_cmd->add_option("--truth", o.truth, "Ground-truth CSV g1_node,g2_node");

  auto* bench_cmd = app.add_subcommand("bench", "Noise-robustness and scaling experiments");
  detail::add_common(bench_cmd, o);
  bench_cmd->add_option("--ps-grid", o.ps_grid, "Structural noise levels");
  bench_cmd->add_option("--pa-grid", o.pa_grid, "Attribute noise levels");
  bench_cmd->add_option("--trials", o.trials, "Trials per grid cell");
  bench_cmd->add_option("--er-n", o.er_n, "Erdos-Renyi sizes (comma list)");
  bench_cmd->add_option("--er-deg", o.er_deg, "Erdos-Renyi average degree");
  bench_cmd->add_option("--synthetic-attrs", o.synthetic_attrs,
                        "Binary attributes to generate when none are given");
  bench_cmd->add_option("--report-alphas", o.report_alphas, "Top-alpha accuracies to report");

  auto* oracle_cmd = app.add_subcommand("oracle", "Random-walk co-occurrence convergence");
  detail::add_common(oracle_cmd, o);
  oracle_cmd->add_option("--n", o.oracle_n, "Nodes in the random similarity graph");
  oracle_cmd->add_option("--m-list", o.m_list, "Walks per node to test");
  oracle_cmd->add_option("--seeds", o.oracle_seeds, "Sampling seeds");

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = detail::expand_config(std::move(args));
    args.erase(args.begin());
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (embed_cmd->parsed()) return cmd_embed(o, out);
    if (align_cmd->parsed()) return cmd_align(o, out);
    if (bench_cmd->parsed()) return cmd_bench(o, out);
    if (oracle_cmd->parsed()) return cmd_oracle(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace xalign::cli

#endif  // XALIGN_CLI_HPP_

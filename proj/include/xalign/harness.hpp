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

// Evaluation protocol: a graph is aligned against a randomly relabeled,
// noise-perturbed copy of itself and scored against the known relabeling.

#ifndef XALIGN_HARNESS_HPP_
#define XALIGN_HARNESS_HPP_

#include <cmath>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "xalign/pipeline.hpp"

namespace xalign {

/// Bijection from G1 local ids to G2 local ids.
class GroundTruth {
 public:
  GroundTruth() = default;
  explicit GroundTruth(std::vector<NodeId> forward) : forward_(std::move(forward)) {
    std::vector<bool> hit(forward_.size(), false);
    for (NodeId v : forward_) {
      if (v >= forward_.size() || hit[v])
        throw std::invalid_argument("ground truth is not a permutation");
      hit[v] = true;
    }
  }

  static GroundTruth identity(std::size_t n) {
    std::vector<NodeId> f(n);
    std::iota(f.begin(), f.end(), NodeId{0});
    return GroundTruth(std::move(f));
  }

  std::size_t size() const { return forward_.size(); }
  NodeId operator()(NodeId u) const { return forward_[u]; }
  const std::vector<NodeId>& forward() const { return forward_; }

  GroundTruth inverse() const {
    std::vector<NodeId> inv(forward_.size());
    for (std::size_t u = 0; u < forward_.size(); ++u) inv[forward_[u]] = static_cast<NodeId>(u);
    return GroundTruth(std::move(inv));
  }

 private:
  std::vector<NodeId> forward_;
};

inline GroundTruth random_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<NodeId> f(n);
  std::iota(f.begin(), f.end(), NodeId{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(f[i - 1], f[rng.below(i)]);
  return GroundTruth(std::move(f));
}

/// Node u of g becomes node pi(u).
inline Graph relabel(const Graph& g, const GroundTruth& pi) {
  if (pi.size() != g.node_count()) throw std::invalid_argument("permutation size mismatch");
  auto edges = g.edges();
  for (auto& [u, v] : edges) {
    u = pi(u);
    v = pi(v);
  }
  return Graph::from_edges(g.node_count(), edges);
}

inline AttributeTable relabel(const AttributeTable& t, const GroundTruth& pi) {
  if (pi.size() != t.node_count()) throw std::invalid_argument("permutation size mismatch");
  RowMatrix values(t.values().rows(), t.values().cols());
  for (std::size_t u = 0; u < t.node_count(); ++u) values.row(pi(u)) = t.values().row(u);
  return AttributeTable(t.columns(), std::move(values));
}

struct PermutedInstance {
  Graph graph;
  std::optional<AttributeTable> attributes;
  GroundTruth truth;
};

/// A' = P A P^T with a uniformly random P.
inline PermutedInstance permute(const Graph& g, const AttributeTable* attrs,
                                std::uint64_t seed) {
  PermutedInstance out;
  out.truth = random_permutation(g.node_count(), seed);
  out.graph = relabel(g, out.truth);
  if (attrs) out.attributes = relabel(*attrs, out.truth);
  return out;
}

/// Proposes each edge for removal with probability p_s, in sorted edge
/// order; a proposal is rejected if it would leave an endpoint isolated.
inline Graph add_structural_noise(const Graph& g, double p_s, std::uint64_t seed) {
  if (!(p_s >= 0 && p_s < 1)) throw std::invalid_argument("p_s must lie in [0, 1)");
  if (p_s == 0) return g;
  std::vector<std::size_t> degree(g.node_count());
  for (std::size_t u = 0; u < g.node_count(); ++u) degree[u] = g.degree(static_cast<NodeId>(u));
  Rng rng(seed);
  std::vector<Edge> kept;
  for (auto [u, v] : g.edges()) {
    if (rng.uniform01() < p_s && degree[u] > 1 && degree[v] > 1) {
      --degree[u];
      --degree[v];
    } else {
      kept.emplace_back(u, v);
    }
  }
  return Graph::from_edges(g.node_count(), kept);
}

/// Resamples each categorical cell with probability p_a, uniformly among the
/// other values of its column (a flip for binary columns).
inline AttributeTable add_attribute_noise(const AttributeTable& t, double p_a,
                                          std::uint64_t seed) {
  if (!(p_a >= 0 && p_a <= 1)) throw std::invalid_argument("p_a must lie in [0, 1]");
  if (!t.all_categorical())
    throw std::invalid_argument("attribute noise applies to categorical columns only");
  if (p_a == 0) return t;
  RowMatrix values = t.values();
  Rng rng(seed);
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (!(rng.uniform01() < p_a)) continue;
      const auto k = static_cast<std::uint64_t>(t.columns()[j].cardinality);
      const auto old = static_cast<std::uint64_t>(values(i, j));
      std::uint64_t r = rng.below(k - 1);
      if (r >= old) ++r;
      values(i, j) = static_cast<double>(r);
    }
  }
  return AttributeTable(t.columns(), std::move(values));
}

/// i.i.d. uniform binary attributes.
inline AttributeTable synthetic_binary_attributes(std::size_t n, std::size_t count,
                                                  std::uint64_t seed) {
  Rng rng(seed);
  RowMatrix values(n, count);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < count; ++j) values(i, j) = static_cast<double>(rng.below(2));
  return AttributeTable(std::vector<AttributeColumn>(count, AttributeColumn::categorical(2)),
                        std::move(values));
}

/// Fraction of G1 nodes u with map[u] == truth(u). Unmatched counts as wrong.
inline double accuracy(std::span<const NodeId> hard_map, const GroundTruth& truth) {
  if (hard_map.size() != truth.size()) throw std::invalid_argument("map/truth size mismatch");
  if (hard_map.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t u = 0; u < hard_map.size(); ++u)
    correct += hard_map[u] == truth(static_cast<NodeId>(u));
  return static_cast<double>(correct) / static_cast<double>(hard_map.size());
}

/// Fraction of G1 nodes whose true counterpart is among their first alpha
/// candidates.
inline double top_alpha_accuracy(const AlignmentResult& r, const GroundTruth& truth,
                                 std::size_t alpha) {
  if (alpha < 1 || alpha > r.alpha)
    throw std::invalid_argument("alpha exceeds the alignment's candidate count");
  if (r.size() != truth.size()) throw std::invalid_argument("result/truth size mismatch");
  if (r.size() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t u = 0; u < r.size(); ++u) {
    const auto& list = r.candidates[u];
    const NodeId want = truth(static_cast<NodeId>(u));
    const std::size_t upto = std::min(alpha, list.size());
    for (std::size_t k = 0; k < upto; ++k) {
      if (list[k].node == want) {
        ++correct;
        break;
      }
    }
  }
  return static_cast<double>(correct) / static_cast<double>(r.size());
}

/// G(n, q) with q = avg_degree / (n - 1), sampled by geometric skipping over
/// the pairs (w, v), w < v. Nodes left isolated get one uniform random edge.
inline Graph generate_er(std::size_t n, double avg_degree, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  if (!(avg_degree > 0 && avg_degree < static_cast<double>(n)))
    throw std::invalid_argument("average degree must lie in (0, n)");
  std::vector<Edge> edges;
  Rng rng(seed);
  if (n >= 2) {
    const double q = std::min(1.0, avg_degree / static_cast<double>(n - 1));
    edges.reserve(static_cast<std::size_t>(avg_degree * n / 2 * 1.1) + 16);
    if (q >= 1.0) {
      for (std::size_t v = 1; v < n; ++v)
        for (std::size_t w = 0; w < v; ++w)
          edges.emplace_back(static_cast<NodeId>(w), static_cast<NodeId>(v));
    } else {
      const double log_miss = std::log1p(-q);
      std::int64_t v = 1, w = -1;
      const auto nn = static_cast<std::int64_t>(n);
      while (v < nn) {
        const double skip = std::floor(std::log1p(-rng.uniform01()) / log_miss);
        w += 1 + static_cast<std::int64_t>(std::min(skip, 9.0e18));
        while (w >= v && v < nn) {
          w -= v;
          ++v;
        }
        if (v < nn) edges.emplace_back(static_cast<NodeId>(w), static_cast<NodeId>(v));
      }
    }
    std::vector<std::size_t> degree(n, 0);
    for (auto [a, b] : edges) {
      ++degree[a];
      ++degree[b];
    }
    for (std::size_t u = 0; u < n; ++u) {
      if (degree[u] != 0) continue;
      std::size_t other = rng.below(n - 1);
      if (other >= u) ++other;
      edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(other));
      ++degree[u];
      ++degree[other];
    }
  }
  return Graph::from_edges(n, edges);
}

// ---------------------------------------------------------------------------

struct ExperimentConfig {
  PipelineConfig pipeline;  // pipeline.seed is replaced per trial
  double p_s = 0;
  double p_a = 0;
  std::size_t trials = 5;
  std::uint64_t seed = 0;
  std::vector<std::size_t> report_alphas{1, 5, 10};
  // Binary attributes generated for a base graph that has none; 0 = none.
  std::size_t synthetic_attributes = 0;
};

struct TrialResult {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t landmarks = 0;
  std::size_t buckets = 0;
  std::size_t removed_edges = 0;
  double accuracy = 0;
  std::vector<double> top_alpha;  // parallel to report_alphas
  StageTimes times;
};

struct ExperimentReport {
  std::size_t node_count = 0;
  double p_s = 0;
  double p_a = 0;
  std::vector<std::size_t> report_alphas;
  std::vector<TrialResult> trials;

  template <typename Get>
  std::pair<double, double> mean_stdev(Get get) const {
    if (trials.empty()) return {0, 0};
    double mean = 0;
    for (const auto& t : trials) mean += get(t);
    mean /= trials.size();
    double var = 0;
    for (const auto& t : trials) var += (get(t) - mean) * (get(t) - mean);
    const double sd = trials.size() > 1 ? std::sqrt(var / (trials.size() - 1)) : 0.0;
    return {mean, sd};
  }

  double mean_accuracy() const {
    return mean_stdev([](const TrialResult& t) { return t.accuracy; }).first;
  }
  double mean_top(std::size_t i) const {
    return mean_stdev([i](const TrialResult& t) { return t.top_alpha[i]; }).first;
  }
  double mean_total_time() const {
    return mean_stdev([](const TrialResult& t) { return t.times.total(); }).first;
  }
};

namespace seed_stream {
inline constexpr std::uint64_t kPermutation = 1;
inline constexpr std::uint64_t kStructural = 2;
inline constexpr std::uint64_t kAttribute = 3;
inline constexpr std::uint64_t kLandmarks = 4;
inline constexpr std::uint64_t kSyntheticAttributes = 0x5A77;
inline constexpr std::uint64_t kGenerator = 0x6E4;
}  // namespace seed_stream

/// Seed of trial t: a fixed function of (master seed, t).
inline std::uint64_t trial_seed(std::uint64_t master, std::size_t t) {
  return derive_seed(master, 0x7121A1ULL + t);
}

/// Runs `trials` rounds of permute -> noise -> align -> score against `base`.
inline ExperimentReport run_experiment(const Graph& base, const AttributeTable* attrs,
                                       const ExperimentConfig& cfg) {
  if (cfg.trials == 0) throw std::invalid_argument("need at least one trial");
  if (cfg.report_alphas.empty()) throw std::invalid_argument("no report alphas");
  std::optional<AttributeTable> synthetic;
  if (!attrs && cfg.synthetic_attributes > 0) {
    synthetic = synthetic_binary_attributes(
        base.node_count(), cfg.synthetic_attributes,
        derive_seed(cfg.seed, seed_stream::kSyntheticAttributes));
    attrs = &*synthetic;
  }

  ExperimentReport report;
  report.node_count = base.node_count();
  report.p_s = cfg.p_s;
  report.p_a = cfg.p_a;
  report.report_alphas = cfg.report_alphas;
  const std::size_t max_alpha = std::min<std::size_t>(
      base.node_count(),
      std::max(cfg.pipeline.alpha,
               *std::max_element(cfg.report_alphas.begin(), cfg.report_alphas.end())));

  for (std::size_t t = 0; t < cfg.trials; ++t) {
    TrialResult trial;
    trial.trial = t;
    trial.seed = trial_seed(cfg.seed, t);
    try {
      auto inst = permute(base, attrs, derive_seed(trial.seed, seed_stream::kPermutation));
      Graph noisy = add_structural_noise(inst.graph, cfg.p_s,
                                         derive_seed(trial.seed, seed_stream::kStructural));
      trial.removed_edges = inst.graph.edge_count() - noisy.edge_count();
      if (inst.attributes && cfg.p_a > 0) {
        inst.attributes = add_attribute_noise(
            *inst.attributes, cfg.p_a, derive_seed(trial.seed, seed_stream::kAttribute));
      }
      PipelineConfig pc = cfg.pipeline;
      pc.seed = derive_seed(trial.seed, seed_stream::kLandmarks);
      pc.alpha = max_alpha;
      auto out = run_alignment(base, attrs, noisy,
                               inst.attributes ? &*inst.attributes : nullptr, pc);
      trial.landmarks = out.embed.landmarks.size();
      trial.buckets = out.embed.bucket_count;
      trial.times = out.embed.times;
      // The hard map is the per-node argmax even when the caller asked for a
      // larger alpha; accuracy is always top-1 of the chosen match mode.
      trial.accuracy = accuracy(out.alignment.hard_map, inst.truth);
      for (std::size_t a : cfg.report_alphas)
        trial.top_alpha.push_back(
            top_alpha_accuracy(out.alignment, inst.truth, std::min(a, max_alpha)));
    } catch (const NumericalError& e) {
      throw NumericalError("trial " + std::to_string(t) + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error("trial " + std::to_string(t) + ": " + e.what());
    }
    report.trials.push_back(std::move(trial));
  }
  return report;
}

/// One row per trial plus one summary row (means, with *_std columns) per
/// report. Wall-clock timings are written separately so this file is
/// reproducible byte for byte.
inline void write_report_csv(std::ostream& out, const std::vector<ExperimentReport>& reports,
                             const std::string& header_comment = {}) {
  if (!header_comment.empty()) out << "# " << header_comment << '\n';
  if (reports.empty()) return;
  const auto& alphas = reports.front().report_alphas;
  out << "kind,n,p_s,p_a,trial,seed,landmarks,buckets,removed_edges,accuracy,accuracy_std";
  for (auto a : alphas) out << ",top" << a << ",top" << a << "_std";
  out << '\n';
  for (const auto& r : reports) {
    const std::string prefix = std::to_string(r.node_count) + ',' + format_double(r.p_s) +
                               ',' + format_double(r.p_a) + ',';
    for (const auto& t : r.trials) {
      out << "trial," << prefix << t.trial << ',' << t.seed << ',' << t.landmarks << ','
          << t.buckets << ',' << t.removed_edges << ',' << format_double(t.accuracy) << ',';
      for (double v : t.top_alpha) out << ',' << format_double(v) << ',';
      out << '\n';
    }
    auto [acc, acc_sd] = r.mean_stdev([](const TrialResult& t) { return t.accuracy; });
    auto [rem, rem_sd] =
        r.mean_stdev([](const TrialResult& t) { return static_cast<double>(t.removed_edges); });
    (void)rem_sd;
    out << "summary," << prefix << ",,,," << format_double(rem) << ',' << format_double(acc)
        << ',' << format_double(acc_sd);
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      auto [m, sd] = r.mean_stdev([i](const TrialResult& t) { return t.top_alpha[i]; });
      out << ',' << format_double(m) << ',' << format_double(sd);
    }
    out << '\n';
  }
}

inline void write_timings_csv(std::ostream& out, const std::vector<ExperimentReport>& reports) {
  out << "n,p_s,p_a,trial,identity_s,similarity_s,embed_s,align_s,total_s\n";
  for (const auto& r : reports) {
    for (const auto& t : r.trials) {
      out << r.node_count << ',' << format_double(r.p_s) << ',' << format_double(r.p_a) << ','
          << t.trial << ',' << t.times.identity << ',' << t.times.similarity << ','
          << t.times.embed << ',' << t.times.align << ',' << t.times.total() << '\n';
    }
  }
}

}  // namespace xalign

#endif  // XALIGN_HARNESS_HPP_

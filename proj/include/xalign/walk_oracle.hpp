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

// Monte-Carlo check that co-occurrence counts gathered from m length-1
// random walks per node over a similarity graph approach m times its
// row-normalized transition matrix.

#ifndef XALIGN_WALK_ORACLE_HPP_
#define XALIGN_WALK_ORACLE_HPP_

#include <cmath>
#include <vector>

#include "xalign/common.hpp"

namespace xalign {

struct WalkConfig {
  std::size_t walks_per_node = 1;  // m
  std::uint64_t seed = 0;
};

using CountMatrix =
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline RowMatrix row_normalize(const RowMatrix& S) {
  if (S.rows() != S.cols()) throw std::invalid_argument("similarity matrix must be square");
  RowMatrix T(S.rows(), S.cols());
  for (Eigen::Index i = 0; i < S.rows(); ++i) {
    if ((S.row(i).array() < 0).any() || !S.row(i).allFinite())
      throw std::invalid_argument("similarities must be finite and nonnegative");
    const double sum = S.row(i).sum();
    if (!(sum > 0)) throw std::invalid_argument("row " + std::to_string(i) + " sums to zero");
    T.row(i) = S.row(i) / sum;
  }
  return T;
}

/// For each node u, m i.i.d. destinations drawn from row u of
/// row_normalize(S) by inverse CDF. Row u uses sub-seed derive_seed(seed, u).
inline CountMatrix sample_cooccurrence(const RowMatrix& S, const WalkConfig& cfg,
                                       unsigned threads = 1) {
  if (cfg.walks_per_node < 1) throw std::invalid_argument("need at least one walk per node");
  const RowMatrix T = row_normalize(S);
  const std::size_t n = T.rows();
  CountMatrix D = CountMatrix::Zero(n, n);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> cdf(n);
    for (std::size_t u = begin; u < end; ++u) {
      double acc = 0;
      for (std::size_t v = 0; v < n; ++v) cdf[v] = acc += T(u, v);
      const double total = cdf.back();
      Rng rng(derive_seed(cfg.seed, u));
      for (std::size_t w = 0; w < cfg.walks_per_node; ++w) {
        const double x = rng.uniform01() * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
        std::size_t v = std::min<std::size_t>(it - cdf.begin(), n - 1);
        ++D(u, v);
      }
    }
  });
  return D;
}

/// max_{u,v} |D_uv / m - T_uv| with T = row_normalize(S).
inline double convergence_check(const CountMatrix& D, const RowMatrix& S, std::size_t m) {
  if (D.rows() != S.rows() || D.cols() != S.cols())
    throw std::invalid_argument("count and similarity shapes differ");
  if (m == 0) throw std::invalid_argument("m must be positive");
  const RowMatrix T = row_normalize(S);
  double worst = 0;
  for (Eigen::Index i = 0; i < D.rows(); ++i)
    for (Eigen::Index j = 0; j < D.cols(); ++j)
      worst = std::max(worst, std::abs(static_cast<double>(D(i, j)) / m - T(i, j)));
  return worst;
}

}  // namespace xalign

#endif  // XALIGN_WALK_ORACLE_HPP_

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

// Implicit low-rank factorization of the node similarity matrix.
//
// With W^+ = U S V^T (SVD of the landmark pseudoinverse), the Nystrom
// approximation C W^+ C^T factors as (C U S^{1/2}) (C V S^{1/2})^T. The left
// factor, row-normalized, is the node embedding; the full similarity matrix
// is never formed.

#ifndef XALIGN_EMBEDDING_HPP_
#define XALIGN_EMBEDDING_HPP_

#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "xalign/similarity.hpp"

namespace xalign {

inline constexpr double kDefaultRankTolerance = 1e-10;
inline constexpr double kMinRowNorm = 1e-12;

/// SVD pieces of the landmark block.
struct LandmarkFactors {
  Eigen::MatrixXd pinv;   // W^+
  Eigen::MatrixXd U;      // left singular vectors of W^+
  Eigen::VectorXd sigma;  // singular values of W^+, descending
  Eigen::MatrixXd V;      // right singular vectors of W^+
};

namespace detail {

// Singular values of m kept by the relative cutoff.
inline Eigen::VectorXd inverted_singular_values(const Eigen::VectorXd& s,
                                                double rank_tolerance) {
  const double cutoff = s.size() > 0 ? rank_tolerance * s(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff && s(i) > 0) inv(i) = 1.0 / s(i);
  return inv;
}

}  // namespace detail

/// Moore-Penrose pseudoinverse via SVD; singular values below
/// rank_tolerance * sigma_max are treated as zero.
inline Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& m,
                                     double rank_tolerance = kDefaultRankTolerance) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto inv = detail::inverted_singular_values(svd.singularValues(), rank_tolerance);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

/// Pseudoinverse of W and the full SVD of W^+.
///
/// With W = P D Q^T, the SVD of W^+ is Q D^+ P^T: its singular values are the
/// reciprocals of the retained singular values of W, in descending order,
/// followed by zeros. Reading the factors off the SVD of W avoids a second
/// decomposition of the explicitly formed (and badly conditioned) W^+.
///
/// Each left singular vector is sign-flipped (with its right partner) so that
/// its largest-magnitude entry is nonnegative; earlier index wins ties.
inline LandmarkFactors factor_landmarks(const RowMatrix& W,
                                        double rank_tolerance = kDefaultRankTolerance) {
  if (W.rows() != W.cols() || W.rows() == 0)
    throw std::invalid_argument("landmark block must be square and non-empty");
  if (!(rank_tolerance >= 0 && rank_tolerance < 1))
    throw std::invalid_argument("rank tolerance must lie in [0, 1)");
  const Eigen::Index p = W.rows();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(W),
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto inv = detail::inverted_singular_values(svd.singularValues(), rank_tolerance);
  Eigen::Index rank = 0;
  while (rank < p && inv(rank) > 0) ++rank;

  LandmarkFactors f;
  f.pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
  f.U.resize(p, p);
  f.V.resize(p, p);
  f.sigma = Eigen::VectorXd::Zero(p);
  // Retained directions in reverse order (largest 1/s first), then the null
  // space in its original order.
  for (Eigen::Index j = 0; j < p; ++j) {
    const Eigen::Index src = j < rank ? rank - 1 - j : j;
    f.U.col(j) = svd.matrixV().col(src);
    f.V.col(j) = svd.matrixU().col(src);
    f.sigma(j) = inv(src);
  }
  for (Eigen::Index j = 0; j < p; ++j) {
    Eigen::Index arg = 0;
    double best = -1;
    for (Eigen::Index i = 0; i < p; ++i) {
      if (std::abs(f.U(i, j)) > best) {
        best = std::abs(f.U(i, j));
        arg = i;
      }
    }
    if (f.U(arg, j) < 0) {
      f.U.col(j) *= -1;
      f.V.col(j) *= -1;
    }
  }
  return f;
}

namespace detail {

// Row-at-a-time product so that equal rows of C give bitwise-equal output
// rows regardless of where they sit in the matrix. With `rescale`, each row
// of C is divided by its largest entry first (a positive factor, so the
// direction of the product is unchanged).
inline RowMatrix rowwise_product(const RowMatrix& C, const Eigen::MatrixXd& M,
                                 unsigned threads, bool rescale = false) {
  const RowMatrix right = M;
  RowMatrix out(C.rows(), right.cols());
  parallel_for(C.rows(), threads, [&](std::size_t begin, std::size_t end) {
    Eigen::RowVectorXd row;
    for (std::size_t i = begin; i < end; ++i) {
      row = C.row(i);
      if (rescale) {
        const double top = row.cwiseAbs().maxCoeff();
        if (top > 0) row /= top;
      }
      out.row(i).noalias() = row * right;
    }
  });
  return out;
}

}  // namespace detail

/// C U S^{1/2}, before normalization.
inline RowMatrix raw_embedding(const SimilaritySlice& slice,
                               const LandmarkFactors& f, unsigned threads = 1) {
  return detail::rowwise_product(
      slice.C, f.U * f.sigma.cwiseSqrt().asDiagonal(), threads);
}

/// C V S^{1/2}, the context factor. raw_embedding * raw_context^T = C W^+ C^T.
inline RowMatrix raw_context(const SimilaritySlice& slice,
                             const LandmarkFactors& f, unsigned threads = 1) {
  return detail::rowwise_product(
      slice.C, f.V * f.sigma.cwiseSqrt().asDiagonal(), threads);
}

/// Row-normalized embeddings for the combined node set; the first
/// `first_size` rows belong to G1.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(RowMatrix rows, std::size_t first_size)
      : rows_(std::move(rows)), first_size_(first_size) {
    if (first_size_ > static_cast<std::size_t>(rows_.rows()))
      throw std::invalid_argument("split point beyond embedding rows");
  }

  const RowMatrix& rows() const { return rows_; }
  std::size_t size() const { return rows_.rows(); }
  std::size_t dims() const { return rows_.cols(); }
  std::size_t first_size() const { return first_size_; }
  std::size_t second_size() const { return size() - first_size_; }

  RowMatrix first() const { return rows_.topRows(first_size_); }
  RowMatrix second() const { return rows_.bottomRows(second_size()); }

 private:
  RowMatrix rows_;
  std::size_t first_size_ = 0;
};

inline void normalize_rows(RowMatrix& Y) {
  for (Eigen::Index i = 0; i < Y.rows(); ++i) {
    const double norm = Y.row(i).norm();
    if (!(norm >= kMinRowNorm) || !std::isfinite(norm)) {
      throw NumericalError("embedding row " + std::to_string(i) +
                           " has norm " + format_double(norm));
    }
    Y.row(i) /= norm;
  }
}

inline EmbeddingMatrix embed(const SimilaritySlice& slice, std::size_t first_size,
                             double rank_tolerance = kDefaultRankTolerance,
                             unsigned threads = 1) {
  const auto factors = factor_landmarks(slice.W, rank_tolerance);
  // Nodes far from every landmark have similarities near the underflow
  // limit; scaling each row of C keeps the norm test meaningful and leaves
  // the normalized result unchanged.
  RowMatrix Y = detail::rowwise_product(
      slice.C, factors.U * factors.sigma.cwiseSqrt().asDiagonal(), threads, true);
  normalize_rows(Y);
  return {std::move(Y), first_size};
}

/// C W^+ C^T. Test-scale only.
///
/// Evaluated through the symmetric eigendecomposition W = Q L Q^T,
/// independently of the SVD used by factor_landmarks, as
/// (C Q |L+|^{1/2}) sign(L) (C Q |L+|^{1/2})^T. Eigenvalues with
/// |l| <= rank_tolerance * max|l| are dropped.
inline RowMatrix nystrom_reconstruct(const SimilaritySlice& slice,
                                     double rank_tolerance = kDefaultRankTolerance,
                                     std::size_t cap = kDenseOracleCap) {
  if (static_cast<std::size_t>(slice.C.rows()) > cap)
    throw std::invalid_argument("reconstruction limited to " +
                                std::to_string(cap) + " nodes");
  const Eigen::MatrixXd W = slice.W;
  if ((W - W.transpose()).cwiseAbs().maxCoeff() > 0)
    throw std::invalid_argument("landmark block is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(W);
  const auto& lambda = eig.eigenvalues();
  const double top = lambda.cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (std::abs(lambda(i)) > rank_tolerance * top) kept.push_back(i);
  Eigen::MatrixXd half(W.rows(), kept.size());
  Eigen::VectorXd sign(kept.size());
  for (std::size_t j = 0; j < kept.size(); ++j) {
    half.col(j) = eig.eigenvectors().col(kept[j]) / std::sqrt(std::abs(lambda(kept[j])));
    sign(j) = lambda(kept[j]) < 0 ? -1.0 : 1.0;
  }
  const Eigen::MatrixXd F = slice.C * half;
  return F * sign.asDiagonal() * F.transpose();
}

// ---------------------------------------------------------------------------
// Serialization. CSV rows: `node,graph,y0,...` with graph in {1, 2} and node
// the local id. Binary: "XNMF", uint64 n, uint64 p, then n*p doubles, all
// little-endian, row-major.

inline void write_embeddings_csv(std::ostream& out, const EmbeddingMatrix& e,
                                 const std::string& header_comment = {}) {
  if (!header_comment.empty()) out << "# " << header_comment << '\n';
  out << "node,graph";
  for (std::size_t j = 0; j < e.dims(); ++j) out << ",y" << j;
  out << '\n';
  for (std::size_t i = 0; i < e.size(); ++i) {
    const bool second = i >= e.first_size();
    out << (second ? i - e.first_size() : i) << ',' << (second ? 2 : 1);
    for (std::size_t j = 0; j < e.dims(); ++j)
      out << ',' << format_double(e.rows()(i, j));
    out << '\n';
  }
}

/// Reads the CSV written above back into per-graph matrices.
inline std::pair<RowMatrix, RowMatrix> read_embeddings_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> dims;
  std::vector<std::vector<double>> rows[2];
  while (std::getline(in, line)) {
    ++lineno;
    auto body = detail::content_of(line);
    if (body.empty()) continue;
    auto cells = detail::split_char(body, ',');
    if (!dims) {
      if (cells.size() < 3 || cells[0] != "node" || cells[1] != "graph")
        throw ParseError("embedding header must be node,graph,y0,...", lineno);
      dims = cells.size() - 2;
      continue;
    }
    if (cells.size() != *dims + 2) throw ParseError("wrong column count", lineno);
    auto node = detail::parse_number<std::uint64_t>(cells[0]);
    auto graph = detail::parse_number<int>(cells[1]);
    if (!node || !graph || (*graph != 1 && *graph != 2))
      throw ParseError("bad node/graph column", lineno);
    auto& target = rows[*graph - 1];
    if (*node != target.size())
      throw ParseError("embedding rows must be in node order", lineno);
    std::vector<double> r(*dims);
    for (std::size_t j = 0; j < *dims; ++j) {
      auto v = detail::parse_number<double>(cells[j + 2]);
      if (!v) throw ParseError("non-numeric embedding value", lineno);
      r[j] = *v;
    }
    target.push_back(std::move(r));
  }
  if (!dims) throw ParseError("embedding file is empty", 0);
  auto to_matrix = [&](const std::vector<std::vector<double>>& rs) {
    RowMatrix m(rs.size(), *dims);
    for (std::size_t i = 0; i < rs.size(); ++i)
      for (std::size_t j = 0; j < *dims; ++j) m(i, j) = rs[i][j];
    return m;
  };
  return {to_matrix(rows[0]), to_matrix(rows[1])};
}

namespace detail {

inline void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes;
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

inline std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size()))
    throw ParseError("truncated binary embedding", 0);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

}  // namespace detail

inline void write_embeddings_binary(std::ostream& out, const RowMatrix& Y) {
  out.write("XNMF", 4);
  detail::put_u64(out, static_cast<std::uint64_t>(Y.rows()));
  detail::put_u64(out, static_cast<std::uint64_t>(Y.cols()));
  for (Eigen::Index i = 0; i < Y.rows(); ++i)
    for (Eigen::Index j = 0; j < Y.cols(); ++j)
      detail::put_u64(out, std::bit_cast<std::uint64_t>(Y(i, j)));
}

inline RowMatrix read_embeddings_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "XNMF", 4) != 0)
    throw ParseError("missing XNMF magic", 0);
  const std::uint64_t n = detail::get_u64(in);
  const std::uint64_t p = detail::get_u64(in);
  if (p == 0 || n > (1ULL << 32) || p > (1ULL << 20))
    throw ParseError("implausible binary embedding header", 0);
  RowMatrix Y(n, p);
  for (std::uint64_t i = 0; i < n; ++i)
    for (std::uint64_t j = 0; j < p; ++j)
      Y(i, j) = std::bit_cast<double>(detail::get_u64(in));
  return Y;
}

}  // namespace xalign

#endif  // XALIGN_EMBEDDING_HPP_

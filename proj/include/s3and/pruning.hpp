// Copyright 2026 The s3and Authors.
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

// Filter predicates. Every predicate returning true ("prune") must be false
// for any (query vertex, data vertex) pair that occurs in some answer, and
// for any index node containing such a data vertex.

#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "s3and/index.hpp"
#include "s3and/semantics.hpp"
#include "s3and/signatures.hpp"

namespace s3and {

/// Signatures of a query graph under one SignatureConfig.
struct QuerySideData {
  SignatureConfig config;
  std::vector<GroupedBitVector> bv;                        // per query vertex
  std::vector<std::vector<GroupedBitVector>> neighbor_bv;  // bv of each query neighbor
  std::vector<std::uint32_t> degree;

  std::size_t size() const noexcept { return bv.size(); }
};

inline QuerySideData make_query_side_data(const QueryGraph& q, const SignatureConfig& cfg) {
  validate(cfg);
  QuerySideData out;
  out.config = cfg;
  const auto k = q.vertex_count();
  out.bv.reserve(k);
  for (VertexId j = 0; j < k; ++j) out.bv.push_back(build_bit_vectors(q.keywords(j), cfg));
  out.neighbor_bv.resize(k);
  out.degree.resize(k);
  for (VertexId j = 0; j < k; ++j) {
    for (auto l : q.neighbors(j)) out.neighbor_bv[j].push_back(out.bv[l]);
    out.degree[j] = static_cast<std::uint32_t>(q.degree(j));
  }
  return out;
}

/// Which predicates are active. Each level adds to the previous one.
enum class PruningLevel {
  Keyword,       // keyword signatures on vertices and nodes
  KeywordBasic,  // + degree-based ND bound on vertices
  Full,          // + signature-based ND bound on vertices and nodes
};

inline std::string_view to_string(PruningLevel p) {
  switch (p) {
    case PruningLevel::Keyword: return "ks";
    case PruningLevel::KeywordBasic: return "ks+lb";
    case PruningLevel::Full: return "ks+lb+tight";
  }
  return "?";
}

inline PruningLevel parse_pruning_level(std::string_view s) {
  if (s == "ks") return PruningLevel::Keyword;
  if (s == "ks+lb") return PruningLevel::KeywordBasic;
  if (s == "ks+lb+tight" || s == "full") return PruningLevel::Full;
  throw ValidationError("unknown pruning level '" + std::string(s) + "' (expected ks, ks+lb or ks+lb+tight)");
}

namespace detail {
inline void check_qj(const QuerySideData& q, VertexId qj) {
  S3AND_EXPECTS(qj < q.size(), "query vertex out of range");
}
}  // namespace detail

inline bool keyword_prune_vertex(const VertexAux& v, const QuerySideData& q, VertexId qj) {
  detail::check_qj(q, qj);
  return !v.bv.covers(q.bv[qj]);
}

inline Score lb_nd_basic(std::size_t qj_degree, std::size_t vi_degree) {
  return qj_degree > vi_degree ? static_cast<Score>(qj_degree - vi_degree) : 0;
}

namespace detail {
inline Score uncovered_neighbors(const QuerySideData& q, VertexId qj, const GroupedBitVector& nbv) {
  Score covered = 0;
  for (const auto& nb : q.neighbor_bv[qj])
    if (nbv.covers(nb)) ++covered;
  return q.degree[qj] - covered;
}
}  // namespace detail

/// Query neighbors of qj whose signature is not covered by v's neighbor signature.
inline Score lb_nd_tight(const QuerySideData& q, VertexId qj, const VertexAux& v) {
  detail::check_qj(q, qj);
  return detail::uncovered_neighbors(q, qj, v.nbv);
}

inline bool nd_prune(Score lb, double sigma) { return static_cast<double>(lb) > sigma; }

inline bool keyword_prune_node(const IndexNode& node, const QuerySideData& q, VertexId qj) {
  detail::check_qj(q, qj);
  return !node.agg_bv.covers(q.bv[qj]);
}

/// Lower bound on lb_nd_tight of every member of the node.
inline Score lb_nd_node(const IndexNode& node, const QuerySideData& q, VertexId qj) {
  detail::check_qj(q, qj);
  return detail::uncovered_neighbors(q, qj, node.agg_nbv);
}

/// Vertex filter at the given level, cheapest predicate first.
inline bool prune_vertex(PruningLevel level, const VertexAux& v, std::size_t v_degree,
                         const QuerySideData& q, VertexId qj, double sigma) {
  if (keyword_prune_vertex(v, q, qj)) return true;
  if (level == PruningLevel::Keyword) return false;
  if (nd_prune(lb_nd_basic(q.degree[qj], v_degree), sigma)) return true;
  if (level == PruningLevel::KeywordBasic) return false;
  return nd_prune(lb_nd_tight(q, qj, v), sigma);
}

/// Node filter at the given level. No degree information is stored per node,
/// so the degree bound has no node-level counterpart.
inline bool prune_node(PruningLevel level, const IndexNode& node, const QuerySideData& q,
                       VertexId qj, double sigma) {
  if (keyword_prune_node(node, q, qj)) return true;
  if (level != PruningLevel::Full) return false;
  return nd_prune(lb_nd_node(node, q, qj), sigma);
}

/// prune_vertex and prune_node at one level for one query. Query signatures
/// are kept sparse: only their nonzero words can fail a containment test.
/// Every signature passed in must have the shape of q.config; only debug
/// builds check this per call.
class QueryFilter {
 public:
  QueryFilter(PruningLevel level, const QuerySideData& q, double sigma)
      : level_(level), sigma_(sigma), words_(GroupedBitVector(q.config).words().size()), degree_(q.degree) {
    sig_begin_.push_back(0);
    for (VertexId j = 0; j < q.size(); ++j) {
      add(q.bv[j]);
      for (const auto& nb : q.neighbor_bv[j]) add(nb);
    }
    // Signature of qj is entry first_[qj]; its neighbors follow it.
    first_.resize(q.size());
    std::size_t e = 0;
    for (VertexId j = 0; j < q.size(); ++j) {
      first_[j] = e;
      e += 1 + q.neighbor_bv[j].size();
    }
  }

  std::size_t size() const noexcept { return degree_.size(); }

  bool prune_vertex(const VertexAux& v, std::size_t v_degree, VertexId qj) const {
    check(v.bv, qj);
    if (!covers(v.bv.words().data(), first_[qj])) return true;
    if (level_ == PruningLevel::Keyword) return false;
    if (nd_prune(lb_nd_basic(degree_[qj], v_degree), sigma_)) return true;
    if (level_ == PruningLevel::KeywordBasic) return false;
    return nd_prune(uncovered(v.nbv.words().data(), qj), sigma_);
  }

  bool prune_node(const IndexNode& node, VertexId qj) const {
    check(node.agg_bv, qj);
    return prune_node_words(node.agg_bv.words().data(), node.agg_nbv.words().data(), qj);
  }

  /// keep[i] = !prune_node(children[i], qj) for every child of an internal
  /// node, read from its packed child_words.
  void keep_children(const IndexNode& parent, VertexId qj, std::vector<std::uint8_t>& keep) const {
    const std::size_t c = parent.children.size();
    assert(qj < size() && parent.child_words.size() == 2 * words_ * c);
    keep.assign(c, 1);
    const std::uint64_t* base = parent.child_words.data();
    for (std::size_t i = sig_begin_[first_[qj]]; i < sig_begin_[first_[qj] + 1]; ++i) {
      const std::uint64_t* w = base + sig_[i].index * c;
      const std::uint64_t bits = sig_[i].bits;
      for (std::size_t j = 0; j < c; ++j) keep[j] &= static_cast<std::uint8_t>((w[j] & bits) == bits);
    }
    if (level_ != PruningLevel::Full) return;
    const std::uint64_t* nbv = base + words_ * c;
    for (std::size_t j = 0; j < c; ++j) {
      if (!keep[j]) continue;
      Score covered = 0;
      for (std::size_t l = 1; l <= degree_[qj]; ++l) {
        const auto e = first_[qj] + l;
        bool ok = true;
        for (std::size_t i = sig_begin_[e]; i < sig_begin_[e + 1] && ok; ++i)
          ok = (nbv[sig_[i].index * c + j] & sig_[i].bits) == sig_[i].bits;
        covered += ok;
      }
      keep[j] = !nd_prune(degree_[qj] - covered, sigma_);
    }
  }

 private:
  struct Word {
    std::uint32_t index;
    std::uint64_t bits;
  };

  void add(const GroupedBitVector& bv) {
    auto w = bv.words();
    S3AND_EXPECTS(w.size() == words_, "query signature shape mismatch");
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i]) sig_.push_back({static_cast<std::uint32_t>(i), w[i]});
    sig_begin_.push_back(sig_.size());
  }

  void check([[maybe_unused]] const GroupedBitVector& bv, [[maybe_unused]] VertexId qj) const {
    assert(qj < size() && bv.words().size() == words_);
  }

  bool prune_node_words(const std::uint64_t* bv, const std::uint64_t* nbv, VertexId qj) const {
    if (!covers(bv, first_[qj])) return true;
    if (level_ != PruningLevel::Full) return false;
    return nd_prune(uncovered(nbv, qj), sigma_);
  }

  bool covers(const std::uint64_t* have, std::size_t entry) const {
    for (std::size_t i = sig_begin_[entry]; i < sig_begin_[entry + 1]; ++i)
      if ((have[sig_[i].index] & sig_[i].bits) != sig_[i].bits) return false;
    return true;
  }

  Score uncovered(const std::uint64_t* nbv, VertexId qj) const {
    Score covered = 0;
    for (std::size_t l = 1; l <= degree_[qj]; ++l) covered += covers(nbv, first_[qj] + l);
    return degree_[qj] - covered;
  }

  PruningLevel level_;
  double sigma_;
  std::size_t words_;
  std::vector<std::uint32_t> degree_;
  std::vector<std::size_t> first_;
  std::vector<Word> sig_;                // nonzero words of every signature, back to back
  std::vector<std::size_t> sig_begin_;  // signature e spans sig_[sig_begin_[e], sig_begin_[e + 1])
};

}  // namespace s3and

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

// Immutable keyword-labeled undirected graph. Data graphs and query graphs
// share this representation; query graphs are additionally required to be
// connected (see require_query_graph).

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "s3and/error.hpp"

namespace s3and {

using VertexId = std::uint32_t;
using KeywordId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;

/// Bidirectional keyword string <-> dense id table. Ids are assigned in order
/// of first interning, so a given file always produces the same table.
class KeywordDictionary {
 public:
  KeywordId intern(std::string_view word) {
    auto it = ids_.find(std::string(word));
    if (it != ids_.end()) return it->second;
    auto id = static_cast<KeywordId>(names_.size());
    names_.emplace_back(word);
    ids_.emplace(names_.back(), id);
    return id;
  }

  std::optional<KeywordId> find(std::string_view word) const {
    auto it = ids_.find(std::string(word));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& name(KeywordId id) const {
    S3AND_EXPECTS(id < names_.size(), "keyword id out of range");
    return names_[id];
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  friend bool operator==(const KeywordDictionary& a, const KeywordDictionary& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, KeywordId> ids_;
};

/// Compressed adjacency + keyword storage. Adjacency lists and keyword sets are
/// sorted and duplicate-free.
class Graph {
 public:
  Graph() = default;

  /// Builds and validates a graph. Edges may come in any order and either
  /// orientation; self-loops and duplicates are rejected.
  static Graph from_parts(std::size_t vertex_count, std::span<const Edge> edges,
                          std::vector<std::vector<KeywordId>> keywords,
                          KeywordDictionary dictionary) {
    if (keywords.size() != vertex_count)
      throw ValidationError("keyword list count does not match vertex count");
    Graph g;
    g.dict_ = std::move(dictionary);
    g.offsets_.assign(vertex_count + 1, 0);
    for (auto [u, v] : edges) {
      if (u >= vertex_count || v >= vertex_count)
        throw ValidationError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                              ") references an unknown vertex");
      if (u == v) throw ValidationError("self-loop on vertex " + std::to_string(u));
      ++g.offsets_[u + 1];
      ++g.offsets_[v + 1];
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    g.adj_.resize(g.offsets_.back());
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, v] : edges) {
      g.adj_[fill[u]++] = v;
      g.adj_[fill[v]++] = u;
    }
    for (std::size_t v = 0; v < vertex_count; ++v) {
      auto first = g.adj_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
      auto last = g.adj_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
      std::sort(first, last);
      if (std::adjacent_find(first, last) != last)
        throw ValidationError("duplicate edge at vertex " + std::to_string(v));
    }
    g.kw_offsets_.reserve(vertex_count + 1);
    g.kw_offsets_.push_back(0);
    std::size_t domain = g.dict_.size();
    for (auto& ks : keywords) {
      std::sort(ks.begin(), ks.end());
      ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
      for (auto k : ks) {
        if (k >= domain) throw ValidationError("keyword id outside dictionary");
        g.kws_.push_back(k);
      }
      g.kw_offsets_.push_back(g.kws_.size());
    }
    return g;
  }

  std::size_t vertex_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return adj_.size() / 2; }
  std::size_t keyword_domain_size() const noexcept { return dict_.size(); }
  const KeywordDictionary& dictionary() const noexcept { return dict_; }

  std::span<const VertexId> neighbors(VertexId v) const {
    S3AND_EXPECTS(v < vertex_count(), "vertex id out of range");
    return {adj_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }

  std::size_t degree(VertexId v) const { return neighbors(v).size(); }

  std::span<const KeywordId> keywords(VertexId v) const {
    S3AND_EXPECTS(v < vertex_count(), "vertex id out of range");
    return {kws_.data() + kw_offsets_[v], kw_offsets_[v + 1] - kw_offsets_[v]};
  }

  bool adjacent(VertexId u, VertexId v) const {
    auto n = neighbors(u);
    return std::binary_search(n.begin(), n.end(), v);
  }

  /// All edges as (u, v) with u < v, in ascending order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (VertexId u = 0; u < vertex_count(); ++u)
      for (auto v : neighbors(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.offsets_ == b.offsets_ && a.adj_ == b.adj_ && a.kw_offsets_ == b.kw_offsets_ &&
           a.kws_ == b.kws_ && a.dict_ == b.dict_;
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> adj_;
  std::vector<std::size_t> kw_offsets_;
  std::vector<KeywordId> kws_;
  KeywordDictionary dict_;
};

using DataGraph = Graph;
using QueryGraph = Graph;

/// True iff `query` is a subset of `data`; both sorted.
inline bool keywords_contained(std::span<const KeywordId> query, std::span<const KeywordId> data) {
  return std::includes(data.begin(), data.end(), query.begin(), query.end());
}

/// Edges of g with both endpoints in vs, as (u, v) with u < v, ascending.
inline std::vector<Edge> induced_subgraph(const Graph& g, std::span<const VertexId> vs) {
  std::vector<VertexId> sorted(vs.begin(), vs.end());
  std::sort(sorted.begin(), sorted.end());
  for (auto v : sorted) S3AND_EXPECTS(v < g.vertex_count(), "vertex id out of range");
  std::vector<Edge> out;
  for (auto u : sorted)
    for (auto v : g.neighbors(u))
      if (u < v && std::binary_search(sorted.begin(), sorted.end(), v)) out.emplace_back(u, v);
  std::sort(out.begin(), out.end());
  return out;
}

/// True iff vs forms a single connected component under `edges`. The empty
/// set is not connected.
inline bool is_connected(std::span<const Edge> edges, std::span<const VertexId> vs) {
  if (vs.empty()) return false;
  std::vector<VertexId> sorted(vs.begin(), vs.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  auto slot = [&](VertexId v) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
    S3AND_EXPECTS(it != sorted.end() && *it == v, "edge endpoint outside vertex set");
    return static_cast<std::size_t>(it - sorted.begin());
  };
  std::vector<std::size_t> parent(sorted.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = sorted.size();
  for (auto [u, v] : edges) {
    auto a = find(slot(u)), b = find(slot(v));
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

/// True iff the vertex-induced subgraph of g on vs is connected.
inline bool induced_connected(const Graph& g, std::span<const VertexId> vs) {
  auto e = induced_subgraph(g, vs);
  return is_connected(e, vs);
}

/// Throws ValidationError unless g can serve as a query graph.
inline void require_query_graph(const Graph& g) {
  if (g.vertex_count() == 0) throw ValidationError("query graph has no vertices");
  std::vector<VertexId> all(g.vertex_count());
  std::iota(all.begin(), all.end(), 0);
  auto e = g.edges();
  if (!is_connected(e, all)) throw ValidationError("query graph is not connected");
}

}  // namespace s3and

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

// Ground-truth answer semantics: neighbor difference, its MAX/SUM
// aggregation, the answer predicate and an exhaustive reference search.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "s3and/graph.hpp"

namespace s3and {

enum class Aggregate { Max, Sum };

inline std::string_view to_string(Aggregate a) { return a == Aggregate::Max ? "max" : "sum"; }

/// Parses "max" or "sum". AVG is intentionally unsupported: run SUM with
/// sigma * |V(q)| instead, it yields the same answers.
inline Aggregate parse_aggregate(std::string_view s) {
  if (s == "max" || s == "MAX") return Aggregate::Max;
  if (s == "sum" || s == "SUM") return Aggregate::Sum;
  if (s == "avg" || s == "AVG")
    throw ValidationError("avg is not a separate mode; use --agg sum with sigma * |V(q)|");
  throw ValidationError("unknown aggregate '" + std::string(s) + "'");
}

/// image[j] is the data vertex that query vertex j maps to.
using Mapping = std::vector<VertexId>;
using Score = std::uint32_t;

struct QuerySpec {
  QueryGraph query;
  Aggregate aggregate = Aggregate::Max;
  double sigma = 0;
};

inline QuerySpec make_query_spec(QueryGraph q, Aggregate f, double sigma) {
  require_query_graph(q);
  if (!(sigma >= 0) || std::isnan(sigma)) throw ValidationError("sigma must be non-negative");
  return QuerySpec{std::move(q), f, sigma};
}

struct MatchAnswer {
  Mapping mapping;
  std::vector<VertexId> vertex_set;  // sorted image of the mapping
  Score score = 0;

  friend bool operator==(const MatchAnswer&, const MatchAnswer&) = default;
};

/// Answers ordered by (score, mapping), duplicate mappings removed.
using AnswerSet = std::vector<MatchAnswer>;

inline MatchAnswer make_answer(Mapping m, Score score) {
  MatchAnswer a;
  a.vertex_set = m;
  std::sort(a.vertex_set.begin(), a.vertex_set.end());
  a.mapping = std::move(m);
  a.score = score;
  return a;
}

inline void normalize(AnswerSet& answers) {
  auto key_less = [](const MatchAnswer& a, const MatchAnswer& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.mapping < b.mapping;
  };
  std::sort(answers.begin(), answers.end(), key_less);
  answers.erase(std::unique(answers.begin(), answers.end(),
                            [](const MatchAnswer& a, const MatchAnswer& b) {
                              return a.mapping == b.mapping;
                            }),
                answers.end());
}

inline std::size_t distinct_vertex_sets(const AnswerSet& answers) {
  std::vector<std::vector<VertexId>> sets;
  sets.reserve(answers.size());
  for (const auto& a : answers) sets.push_back(a.vertex_set);
  std::sort(sets.begin(), sets.end());
  return static_cast<std::size_t>(std::unique(sets.begin(), sets.end()) - sets.begin());
}

/// `a <score> 0:<v> 1:<v> ...`, one line per answer.
inline void write_answers(std::ostream& out, const AnswerSet& answers) {
  for (const auto& a : answers) {
    out << "a " << a.score;
    for (std::size_t j = 0; j < a.mapping.size(); ++j) out << ' ' << j << ':' << a.mapping[j];
    out << '\n';
  }
}

namespace detail {
inline void check_mapping(const QueryGraph& q, const DataGraph& g, std::span<const VertexId> m) {
  S3AND_EXPECTS(m.size() == q.vertex_count(), "mapping does not cover every query vertex");
  for (auto v : m) S3AND_EXPECTS(v < g.vertex_count(), "mapped vertex out of range");
}
}  // namespace detail

/// Number of q-neighbors of qj whose images are not adjacent to m[qj] in g.
inline Score neighbor_difference(const QueryGraph& q, const DataGraph& g,
                                 std::span<const VertexId> m, VertexId qj) {
  detail::check_mapping(q, g, m);
  S3AND_EXPECTS(qj < q.vertex_count(), "query vertex out of range");
  Score missing = 0;
  for (auto ql : q.neighbors(qj))
    if (!g.adjacent(m[qj], m[ql])) ++missing;
  return missing;
}

inline Score aggregated_neighbor_difference(const QueryGraph& q, const DataGraph& g,
                                            std::span<const VertexId> m, Aggregate f) {
  Score acc = 0;
  for (VertexId j = 0; j < q.vertex_count(); ++j) {
    auto nd = neighbor_difference(q, g, m, j);
    acc = f == Aggregate::Max ? std::max(acc, nd) : acc + nd;
  }
  return acc;
}

inline bool is_injective(std::span<const VertexId> m) {
  std::vector<VertexId> s(m.begin(), m.end());
  std::sort(s.begin(), s.end());
  return std::adjacent_find(s.begin(), s.end()) == s.end();
}

inline bool is_answer(const QuerySpec& spec, const DataGraph& g, std::span<const VertexId> m) {
  const auto& q = spec.query;
  detail::check_mapping(q, g, m);
  S3AND_EXPECTS(is_injective(m), "mapping is not injective");
  for (VertexId j = 0; j < q.vertex_count(); ++j)
    if (!keywords_contained(q.keywords(j), g.keywords(m[j]))) return false;
  if (!induced_connected(g, m)) return false;
  return aggregated_neighbor_difference(q, g, m, spec.aggregate) <= spec.sigma;
}

/// Calls `visit` on every injective mapping with exact keyword containment,
/// enumerating query vertices in id order.
inline void for_each_keyword_feasible_mapping(
    const QueryGraph& q, const DataGraph& g,
    const std::function<void(std::span<const VertexId>)>& visit) {
  const auto k = q.vertex_count();
  std::vector<std::vector<VertexId>> cands(k);
  for (VertexId j = 0; j < k; ++j) {
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (keywords_contained(q.keywords(j), g.keywords(v))) cands[j].push_back(v);
    if (cands[j].empty()) return;
  }
  Mapping m(k);
  std::vector<bool> used(g.vertex_count(), false);
  std::function<void(std::size_t)> rec = [&](std::size_t depth) {
    if (depth == k) {
      visit(m);
      return;
    }
    for (auto v : cands[depth]) {
      if (used[v]) continue;
      used[v] = true;
      m[depth] = v;
      rec(depth + 1);
      used[v] = false;
    }
  };
  rec(0);
}

/// Exhaustive reference search. Exponential in |V(q)|; for small instances.
inline AnswerSet oracle_search(const QuerySpec& spec, const DataGraph& g) {
  AnswerSet out;
  for_each_keyword_feasible_mapping(spec.query, g, [&](std::span<const VertexId> m) {
    if (is_answer(spec, g, m))
      out.push_back(make_answer(Mapping(m.begin(), m.end()),
                                aggregated_neighbor_difference(spec.query, g, m, spec.aggregate)));
  });
  normalize(out);
  return out;
}

}  // namespace s3and

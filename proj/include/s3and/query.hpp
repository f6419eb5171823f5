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

// Online query answering: filtered index traversal, exact keyword recheck,
// greedy query plan and backtracking refinement.

#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "s3and/graph.hpp"
#include "s3and/index.hpp"
#include "s3and/pruning.hpp"
#include "s3and/semantics.hpp"

namespace s3and {

/// cands[j] holds the data vertices still eligible for query vertex j, ascending.
using CandidateSets = std::vector<std::vector<VertexId>>;

/// Order in which refinement assigns query vertices.
using QueryPlan = std::vector<VertexId>;

enum class Traversal { MaxHeap, Fifo, Lifo };

inline std::string_view to_string(Traversal t) {
  switch (t) {
    case Traversal::MaxHeap: return "heap";
    case Traversal::Fifo: return "fifo";
    case Traversal::Lifo: return "lifo";
  }
  return "?";
}

inline Traversal parse_traversal(std::string_view s) {
  if (s == "heap" || s == "maxheap") return Traversal::MaxHeap;
  if (s == "fifo") return Traversal::Fifo;
  if (s == "lifo") return Traversal::Lifo;
  throw ValidationError("unknown traversal '" + std::string(s) + "' (expected heap, fifo or lifo)");
}

struct RefineOptions {
  bool lookahead = true;          // mapped vertex must touch M or a later candidate
  bool partial_and_bound = true;  // stop once the NDs already fixed exceed sigma
  bool distance_bound = true;     // every image lies within |V(q)|-1 hops of the first
};

struct EngineOptions {
  PruningLevel pruning = PruningLevel::Full;
  Traversal traversal = Traversal::MaxHeap;
  RefineOptions refine;
};

struct QueryStats {
  double pruning_power = 0;  // eliminated (query vertex, data vertex) pairs before the exact recheck
  std::size_t nodes_visited = 0;
  std::vector<std::size_t> candidates_per_qvertex;  // after the exact recheck
  double wall_ms = 0;
  std::size_t answers = 0;
  std::size_t distinct_vertex_sets = 0;
};

struct QueryResult {
  AnswerSet answers;
  QueryStats stats;
};

struct CandidateCollection {
  CandidateSets candidates;                // after exact recheck
  std::vector<std::size_t> filtered_sizes;  // before exact recheck
  std::size_t nodes_visited = 0;
};

namespace detail {

// One traversal for the query vertices [first, first + 64). Candidates are
// appended unsorted.
inline void collect_chunk(const TreeIndex& index, const DataGraph& g, const QueryFilter& filter, VertexId first,
                          Traversal traversal, CandidateCollection& out) {
  struct Entry {
    const IndexNode* node;
    std::uint32_t key;
    std::uint64_t order;
    std::uint64_t live;  // bit b: query vertex first + b
  };
  auto heap_less = [](const Entry& a, const Entry& b) {
    if (a.key != b.key) return a.key < b.key;
    return a.order > b.order;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(heap_less)> heap(heap_less);
  std::deque<Entry> queue;
  std::uint64_t pushed = 0;
  auto push = [&](const IndexNode* node, std::uint32_t key, std::uint64_t live) {
    Entry e{node, key, pushed++, live};
    if (traversal == Traversal::MaxHeap) heap.push(e);
    else queue.push_back(e);
  };
  auto empty = [&] { return traversal == Traversal::MaxHeap ? heap.empty() : queue.empty(); };
  auto pop = [&] {
    Entry e;
    if (traversal == Traversal::MaxHeap) {
      e = heap.top();
      heap.pop();
    } else if (traversal == Traversal::Fifo) {
      e = queue.front();
      queue.pop_front();
    } else {
      e = queue.back();
      queue.pop_back();
    }
    return e;
  };

  const std::size_t width = std::min<std::size_t>(64, filter.size() - first);
  push(&index.root, 0, width == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1);
  std::vector<std::uint8_t> keep;
  std::vector<std::uint64_t> live;
  while (!empty()) {
    const Entry e = pop();
    ++out.nodes_visited;
    const IndexNode& node = *e.node;
    if (node.leaf) {
      for (auto v : node.members) {
        const auto deg = g.degree(v);
        for (std::uint64_t bits = e.live; bits; bits &= bits - 1) {
          const auto j = first + static_cast<VertexId>(std::countr_zero(bits));
          if (!filter.prune_vertex(index.aux[v], deg, j)) out.candidates[j].push_back(v);
        }
      }
      continue;
    }
    const auto c = node.children.size();
    live.assign(c, 0);
    for (std::uint64_t bits = e.live; bits; bits &= bits - 1) {
      const auto b = std::countr_zero(bits);
      filter.keep_children(node, first + static_cast<VertexId>(b), keep);
      for (std::size_t i = 0; i < c; ++i) live[i] |= std::uint64_t{keep[i]} << b;
    }
    for (std::size_t i = 0; i < c; ++i)
      if (live[i]) push(&node.children[i], node.children[i].nk_max, live[i]);
  }
}

}  // namespace detail

/// Index traversal. Each entry carries the query vertices not yet pruned for
/// its node; children inherit the survivors and are dropped when none remain.
/// Queries over 64 vertices are traversed once per block of 64.
inline CandidateCollection collect_candidates(const TreeIndex& index, const DataGraph& g,
                                              const QuerySpec& spec, const QuerySideData& qs,
                                              PruningLevel level = PruningLevel::Full,
                                              Traversal traversal = Traversal::MaxHeap) {
  const auto k = spec.query.vertex_count();
  S3AND_EXPECTS(qs.size() == k, "query side data does not match query");
  if (!(qs.config == index.signature)) throw ConfigMismatch("query signatures built with a different config");
  S3AND_EXPECTS(index.aux.size() == g.vertex_count(), "index does not match graph");

  const QueryFilter filter(level, qs, spec.sigma);
  CandidateCollection out;
  out.candidates.assign(k, {});
  for (VertexId first = 0; first < k; first += 64) detail::collect_chunk(index, g, filter, first, traversal, out);

  out.filtered_sizes.resize(k);
  for (VertexId j = 0; j < k; ++j) {
    auto& c = out.candidates[j];
    std::sort(c.begin(), c.end());
    out.filtered_sizes[j] = c.size();
    std::erase_if(c, [&](VertexId v) { return !keywords_contained(spec.query.keywords(j), g.keywords(v)); });
  }
  return out;
}

/// First the query vertex with the fewest candidates, then repeatedly the
/// smallest-candidate vertex adjacent to the prefix. Ties go to the lower id.
inline QueryPlan make_query_plan(const QueryGraph& q, const CandidateSets& cands) {
  const auto k = q.vertex_count();
  S3AND_EXPECTS(cands.size() == k, "candidate sets do not match query");
  QueryPlan plan;
  std::vector<bool> placed(k, false), frontier(k, false);
  auto pick = [&](bool need_frontier) {
    VertexId best = static_cast<VertexId>(k);
    for (VertexId j = 0; j < k; ++j) {
      if (placed[j] || (need_frontier && !frontier[j])) continue;
      if (best == k || cands[j].size() < cands[best].size()) best = j;
    }
    return best;
  };
  for (std::size_t i = 0; i < k; ++i) {
    auto next = pick(i > 0);
    S3AND_EXPECTS(next < k, "query graph is not connected");
    placed[next] = true;
    plan.push_back(next);
    for (auto l : q.neighbors(next)) frontier[l] = true;
  }
  return plan;
}

/// A permutation of V(q) whose every prefix is connected in q.
inline bool is_valid_plan(const QueryGraph& q, const QueryPlan& plan) {
  const auto k = q.vertex_count();
  if (plan.size() != k) return false;
  std::vector<bool> placed(k, false);
  for (std::size_t i = 0; i < k; ++i) {
    auto j = plan[i];
    if (j >= k || placed[j]) return false;
    if (i > 0) {
      auto ns = q.neighbors(j);
      if (std::none_of(ns.begin(), ns.end(), [&](VertexId l) { return placed[l]; })) return false;
    }
    placed[j] = true;
  }
  return true;
}

namespace detail {

// Per-thread arrays indexed by data vertex, reused across queries on graphs of
// the same size. Between runs `used` is all zero and `maxpos` all -1.
struct RefineScratch {
  std::vector<std::uint8_t> used;
  std::vector<std::int64_t> maxpos;  // last plan position listing v as a candidate
  std::vector<std::uint32_t> ball;
  std::uint32_t epoch = 0;

  static RefineScratch& for_graph(std::size_t n) {
    thread_local RefineScratch s;
    if (s.used.size() != n) {
      s.used.assign(n, 0);
      s.maxpos.assign(n, -1);
      s.ball.assign(n, 0);
      s.epoch = 0;
    }
    return s;
  }
};

class Refiner {
 public:
  Refiner(const QuerySpec& spec, const DataGraph& g, const QueryPlan& plan, const CandidateSets& cands,
          const RefineOptions& opt)
      : spec_(spec), q_(spec.query), g_(g), plan_(plan), cands_(cands), opt_(opt),
        k_(q_.vertex_count()), mapping_(k_), nd_(k_, 0), scratch_(RefineScratch::for_graph(g.vertex_count())),
        used_(scratch_.used), maxpos_(scratch_.maxpos), ball_(scratch_.ball), epoch_(scratch_.epoch) {
    position_.assign(k_, 0);
    for (std::size_t i = 0; i < k_; ++i) position_[plan_[i]] = i;
    earlier_.resize(k_);
    for (std::size_t i = 0; i < k_; ++i)
      for (auto l : q_.neighbors(plan_[i]))
        if (position_[l] < i) earlier_[i].push_back(l);
    if (opt_.lookahead && k_ > 1)
      for (std::size_t i = 0; i < k_; ++i)
        for (auto v : cands_[plan_[i]]) maxpos_[v] = std::max(maxpos_[v], static_cast<std::int64_t>(i));
  }

  Refiner(const Refiner&) = delete;
  Refiner& operator=(const Refiner&) = delete;

  ~Refiner() {
    if (opt_.lookahead && k_ > 1)
      for (const auto& c : cands_)
        for (auto v : c) maxpos_[v] = -1;
  }

  AnswerSet run() {
    for (const auto& c : cands_)
      if (c.empty()) return {};
    extend(0);
    normalize(answers_);
    return std::move(answers_);
  }

 private:
  bool touches_mapped_or_later(VertexId v, std::size_t pos) const {
    for (auto u : g_.neighbors(v))
      if (used_[u] || maxpos_[u] > static_cast<std::int64_t>(pos)) return true;
    return false;
  }

  void mark_ball(VertexId root) {
    if (++epoch_ == 0) {
      std::fill(ball_.begin(), ball_.end(), 0);
      epoch_ = 1;
    }
    std::vector<VertexId> layer{root}, next;
    ball_[root] = epoch_;
    for (std::size_t d = 0; d + 1 < k_ && !layer.empty(); ++d) {
      next.clear();
      for (auto v : layer)
        for (auto u : g_.neighbors(v))
          if (ball_[u] != epoch_) {
            ball_[u] = epoch_;
            next.push_back(u);
          }
      layer.swap(next);
    }
  }

  // Adds the NDs fixed by mapping plan[pos] to v; returns false if they
  // already push the aggregate above sigma.
  bool account(std::size_t pos, VertexId v, std::vector<VertexId>& bumped) {
    const auto j = plan_[pos];
    for (auto l : earlier_[pos])
      if (!g_.adjacent(v, mapping_[l])) {
        ++nd_[j];
        ++nd_[l];
        bumped.push_back(l);
        partial_sum_ += 2;
      }
    if (!opt_.partial_and_bound) return true;
    if (spec_.aggregate == Aggregate::Sum) return partial_sum_ <= spec_.sigma;
    if (nd_[j] > spec_.sigma) return false;
    for (auto l : bumped)
      if (nd_[l] > spec_.sigma) return false;
    return true;
  }

  void unaccount(std::size_t pos, const std::vector<VertexId>& bumped) {
    const auto j = plan_[pos];
    for (auto l : bumped) {
      --nd_[j];
      --nd_[l];
      partial_sum_ -= 2;
    }
  }

  void extend(std::size_t pos) {
    if (pos == k_) {
      if (!induced_connected(g_, mapping_)) return;
      auto score = aggregated_neighbor_difference(q_, g_, mapping_, spec_.aggregate);
      if (score <= spec_.sigma) answers_.push_back(make_answer(mapping_, score));
      return;
    }
    const auto j = plan_[pos];
    std::vector<VertexId> bumped;
    for (auto v : cands_[j]) {
      if (used_[v]) continue;
      if (opt_.distance_bound && k_ > 1 && pos > 0 && ball_[v] != epoch_) continue;
      if (opt_.lookahead && k_ > 1 && !touches_mapped_or_later(v, pos)) continue;
      bumped.clear();
      mapping_[j] = v;
      if (account(pos, v, bumped)) {
        used_[v] = 1;
        if (opt_.distance_bound && k_ > 1 && pos == 0) mark_ball(v);
        extend(pos + 1);
        used_[v] = 0;
      }
      unaccount(pos, bumped);
    }
  }

  const QuerySpec& spec_;
  const QueryGraph& q_;
  const DataGraph& g_;
  const QueryPlan& plan_;
  const CandidateSets& cands_;
  RefineOptions opt_;
  std::size_t k_;
  Mapping mapping_;
  std::vector<std::size_t> position_;
  std::vector<std::vector<VertexId>> earlier_;  // query neighbors placed before each position
  std::vector<Score> nd_;
  std::uint64_t partial_sum_ = 0;
  RefineScratch& scratch_;
  std::vector<std::uint8_t>& used_;
  std::vector<std::int64_t>& maxpos_;
  std::vector<std::uint32_t>& ball_;
  std::uint32_t& epoch_;
  AnswerSet answers_;
};

}  // namespace detail

/// Exhaustive backtracking over the candidate sets in plan order. Returns
/// exactly the answers whose every image lies in its candidate set.
inline AnswerSet refine(const QuerySpec& spec, const DataGraph& g, const QueryPlan& plan,
                        const CandidateSets& cands, const RefineOptions& opt = {}) {
  S3AND_EXPECTS(is_valid_plan(spec.query, plan), "plan is not a connected-prefix order of V(q)");
  S3AND_EXPECTS(cands.size() == spec.query.vertex_count(), "candidate sets do not match query");
  for (const auto& c : cands)
    for (auto v : c) S3AND_EXPECTS(v < g.vertex_count(), "candidate vertex out of range");
  return detail::Refiner(spec, g, plan, cands, opt).run();
}

namespace detail {
inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

inline double pruning_power(std::span<const std::size_t> kept, std::size_t vertex_count) {
  if (kept.empty() || vertex_count == 0) return 1.0;
  double total = static_cast<double>(vertex_count) * static_cast<double>(kept.size());
  double sum = 0;
  for (auto c : kept) sum += static_cast<double>(c);
  return 1.0 - sum / total;
}

inline void finish_stats(QueryResult& r, const CandidateSets& cands) {
  r.stats.candidates_per_qvertex.clear();
  for (const auto& c : cands) r.stats.candidates_per_qvertex.push_back(c.size());
  r.stats.answers = r.answers.size();
  r.stats.distinct_vertex_sets = distinct_vertex_sets(r.answers);
}
}  // namespace detail

/// Throws ConfigMismatch unless the index was built over this graph.
inline void require_compatible(const TreeIndex& index, const DataGraph& g) {
  if (index.vertex_count != g.vertex_count())
    throw ConfigMismatch("index covers " + std::to_string(index.vertex_count) + " vertices, graph has " +
                         std::to_string(g.vertex_count()));
  if (!(index.dictionary == g.dictionary()))
    throw ConfigMismatch("index keyword table differs from the graph's");
}

inline QueryResult run_query(const TreeIndex& index, const DataGraph& g, const QuerySpec& spec,
                             const EngineOptions& opt = {}) {
  require_compatible(index, g);
  auto start = std::chrono::steady_clock::now();
  auto qs = make_query_side_data(spec.query, index.signature);
  auto coll = collect_candidates(index, g, spec, qs, opt.pruning, opt.traversal);
  QueryResult r;
  r.stats.nodes_visited = coll.nodes_visited;
  r.stats.pruning_power = detail::pruning_power(coll.filtered_sizes, g.vertex_count());
  auto plan = make_query_plan(spec.query, coll.candidates);
  r.answers = refine(spec, g, plan, coll.candidates, opt.refine);
  r.stats.wall_ms = detail::elapsed_ms(start);
  detail::finish_stats(r, coll.candidates);
  return r;
}

/// Exact keyword containment scan over every vertex, no index and no ND bounds.
inline CandidateSets exact_candidates(const QueryGraph& q, const DataGraph& g) {
  CandidateSets cands(q.vertex_count());
  for (VertexId j = 0; j < q.vertex_count(); ++j)
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (keywords_contained(q.keywords(j), g.keywords(v))) cands[j].push_back(v);
  return cands;
}

inline QueryResult run_baseline(const DataGraph& g, const QuerySpec& spec, const RefineOptions& opt = {}) {
  auto start = std::chrono::steady_clock::now();
  auto cands = exact_candidates(spec.query, g);
  QueryResult r;
  std::vector<std::size_t> sizes;
  for (const auto& c : cands) sizes.push_back(c.size());
  r.stats.pruning_power = detail::pruning_power(sizes, g.vertex_count());
  auto plan = make_query_plan(spec.query, cands);
  r.answers = refine(spec, g, plan, cands, opt);
  r.stats.wall_ms = detail::elapsed_ms(start);
  detail::finish_stats(r, cands);
  return r;
}

}  // namespace s3and

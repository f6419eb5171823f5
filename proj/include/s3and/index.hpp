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

// Balanced tree index over vertex signatures.
//
// Nodes are split top-down by a restarted, capacity-constrained center-based
// partitioning that minimizes
//
//   cost(P) = sum_i sum_{v in P_i} L1(v.bv, c_i) / (sum_{a<b} L1(c_a, c_b) + 1)
//
// where c_i is the mean bit vector of part i. Every node stores the OR of its
// members' bv and nbv and the max of their nk.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <iterator>
#include <numeric>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "s3and/graph.hpp"
#include "s3and/signatures.hpp"

namespace s3and {

struct IndexConfig {
  std::uint32_t fanout = 16;  // n
  double gamma = 0.2;         // balance slack
  std::uint32_t global_iter = 5;
  std::uint32_t local_iter = 20;
  std::uint64_t seed = 0;

  friend bool operator==(const IndexConfig&, const IndexConfig&) = default;
};

inline void validate(const IndexConfig& cfg) {
  if (cfg.fanout < 2) throw ValidationError("index fanout must be >= 2");
  if (!(cfg.gamma >= 0)) throw ValidationError("gamma must be non-negative");
  if (cfg.global_iter < 1 || cfg.local_iter < 1)
    throw ValidationError("iteration counts must be positive");
}

/// Mean bit values of a group of bit vectors, one double per (group, bit).
class Centroid {
 public:
  Centroid() = default;
  Centroid(std::uint32_t groups, std::uint32_t bits)
      : groups_(groups), bits_(bits), values_(static_cast<std::size_t>(groups) * bits, 0.0) {}

  static Centroid of(std::span<const GroupedBitVector* const> members) {
    S3AND_EXPECTS(!members.empty(), "centroid of an empty set");
    Centroid c(members.front()->groups(), members.front()->bits());
    for (const auto* bv : members) {
      S3AND_EXPECTS(bv->groups() == c.groups_ && bv->bits() == c.bits_, "bit vector shape mismatch");
      for (std::uint32_t x = 0; x < c.groups_; ++x)
        for (std::uint32_t e = 0; e < c.bits_; ++e)
          if (bv->test(x, e)) c.at(x, e) += 1.0;
    }
    for (auto& v : c.values_) v /= static_cast<double>(members.size());
    return c;
  }

  static Centroid of(const GroupedBitVector& bv) {
    const GroupedBitVector* p = &bv;
    return of(std::span<const GroupedBitVector* const>(&p, 1));
  }

  std::uint32_t groups() const noexcept { return groups_; }
  std::uint32_t bits() const noexcept { return bits_; }
  double& at(std::uint32_t group, std::uint32_t bit) {
    return values_[static_cast<std::size_t>(group) * bits_ + bit];
  }
  double at(std::uint32_t group, std::uint32_t bit) const {
    return values_[static_cast<std::size_t>(group) * bits_ + bit];
  }

 private:
  std::uint32_t groups_ = 0;
  std::uint32_t bits_ = 0;
  std::vector<double> values_;
};

inline double l1_distance(const GroupedBitVector& bv, const Centroid& c) {
  S3AND_EXPECTS(bv.groups() == c.groups() && bv.bits() == c.bits(), "dimension mismatch");
  double d = 0;
  for (std::uint32_t x = 0; x < c.groups(); ++x)
    for (std::uint32_t e = 0; e < c.bits(); ++e)
      d += std::abs((bv.test(x, e) ? 1.0 : 0.0) - c.at(x, e));
  return d;
}

inline double l1_distance(const Centroid& a, const Centroid& b) {
  S3AND_EXPECTS(a.groups() == b.groups() && a.bits() == b.bits(), "dimension mismatch");
  double d = 0;
  for (std::uint32_t x = 0; x < a.groups(); ++x)
    for (std::uint32_t e = 0; e < a.bits(); ++e) d += std::abs(a.at(x, e) - b.at(x, e));
  return d;
}

using Partition = std::vector<std::vector<VertexId>>;

/// Cost of a partitioning; empty parts contribute nothing.
inline double partition_cost(const Partition& parts, std::span<const VertexAux> aux) {
  S3AND_EXPECTS(!parts.empty(), "partition has no parts");
  std::vector<Centroid> centroids;
  double intra = 0;
  for (const auto& part : parts) {
    if (part.empty()) continue;
    std::vector<const GroupedBitVector*> bvs;
    for (auto v : part) {
      S3AND_EXPECTS(v < aux.size(), "vertex id out of range");
      bvs.push_back(&aux[v].bv);
    }
    centroids.push_back(Centroid::of(bvs));
    for (const auto* bv : bvs) intra += l1_distance(*bv, centroids.back());
  }
  double inter = 0;
  for (std::size_t a = 0; a < centroids.size(); ++a)
    for (std::size_t b = a + 1; b < centroids.size(); ++b) inter += l1_distance(centroids[a], centroids[b]);
  return intra / (inter + 1.0);
}

/// ceil((1 + gamma) * size / n)
inline std::size_t balance_bound(std::size_t size, std::uint32_t n, double gamma) {
  auto exact = (1.0 + gamma) * static_cast<double>(size) / static_cast<double>(n);
  auto bound = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  return std::max<std::size_t>(bound, 1);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace detail {

// Signatures of one member set re-indexed over the (group, bit) slots that are
// set in at least one member. Centroids are zero everywhere else, so all L1
// sums can be restricted to these slots.
class SlotSpace {
 public:
  SlotSpace(std::span<const VertexId> members, std::span<const VertexAux> aux) {
    std::vector<std::uint32_t> flat;
    offsets_.reserve(members.size() + 1);
    offsets_.push_back(0);
    for (auto v : members) {
      S3AND_EXPECTS(v < aux.size(), "vertex id out of range");
      const auto& bv = aux[v].bv;
      auto words = bv.words();
      for (std::uint32_t x = 0; x < bv.groups(); ++x)
        for (std::uint32_t w = 0; w < bv.words_per_group(); ++w) {
          auto word = words[static_cast<std::size_t>(x) * bv.words_per_group() + w];
          while (word) {
            auto bit = static_cast<std::uint32_t>(std::countr_zero(word));
            word &= word - 1;
            flat.push_back(x * bv.bits() + w * 64 + bit);
          }
        }
      offsets_.push_back(flat.size());
    }
    std::vector<std::uint32_t> uniq = flat;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    slot_count_ = uniq.size();
    slots_.resize(flat.size());
    for (std::size_t i = 0; i < flat.size(); ++i)
      slots_[i] = static_cast<std::uint32_t>(std::lower_bound(uniq.begin(), uniq.end(), flat[i]) - uniq.begin());
  }

  std::size_t size() const noexcept { return offsets_.size() - 1; }
  std::size_t slot_count() const noexcept { return slot_count_; }
  std::span<const std::uint32_t> slots(std::size_t i) const {
    return {slots_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> slots_;
  std::size_t slot_count_ = 0;
};

struct SlotCentroid {
  std::vector<double> value;  // per slot
  std::vector<double> gain;   // 1 - 2 * value
  double total = 0;           // sum of value
  bool empty = true;

  double distance(std::span<const std::uint32_t> member_slots) const {
    double d = total;
    for (auto s : member_slots) d += gain[s];
    return d;
  }
};

inline std::vector<SlotCentroid> centroids_from_labels(const SlotSpace& space,
                                                       std::span<const std::uint32_t> labels,
                                                       std::uint32_t parts) {
  std::vector<SlotCentroid> cs(parts);
  std::vector<std::size_t> sizes(parts, 0);
  for (auto& c : cs) c.value.assign(space.slot_count(), 0.0);
  for (std::size_t i = 0; i < space.size(); ++i) {
    ++sizes[labels[i]];
    for (auto s : space.slots(i)) cs[labels[i]].value[s] += 1.0;
  }
  for (std::uint32_t p = 0; p < parts; ++p) {
    auto& c = cs[p];
    c.empty = sizes[p] == 0;
    c.gain.resize(c.value.size());
    c.total = 0;
    for (std::size_t s = 0; s < c.value.size(); ++s) {
      if (!c.empty) c.value[s] /= static_cast<double>(sizes[p]);
      c.total += c.value[s];
      c.gain[s] = 1.0 - 2.0 * c.value[s];
    }
  }
  return cs;
}

inline double labels_cost(const SlotSpace& space, std::span<const std::uint32_t> labels,
                          std::uint32_t parts) {
  auto cs = centroids_from_labels(space, labels, parts);
  double intra = 0;
  for (std::size_t i = 0; i < space.size(); ++i) intra += cs[labels[i]].distance(space.slots(i));
  double inter = 0;
  for (std::uint32_t a = 0; a < parts; ++a) {
    if (cs[a].empty) continue;
    for (std::uint32_t b = a + 1; b < parts; ++b) {
      if (cs[b].empty) continue;
      for (std::size_t s = 0; s < space.slot_count(); ++s) inter += std::abs(cs[a].value[s] - cs[b].value[s]);
    }
  }
  return intra / (inter + 1.0);
}

// Each member, in order, joins the nearest part that still has room. Parts
// without a centroid are used only once every centered part is full.
inline std::vector<std::uint32_t> assign_balanced(const SlotSpace& space,
                                                  const std::vector<SlotCentroid>& cs,
                                                  std::size_t capacity) {
  const auto parts = static_cast<std::uint32_t>(cs.size());
  std::vector<std::uint32_t> labels(space.size());
  std::vector<std::size_t> fill(parts, 0);
  for (std::size_t i = 0; i < space.size(); ++i) {
    auto slots = space.slots(i);
    std::uint32_t best = parts;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::uint32_t p = 0; p < parts; ++p) {
      if (cs[p].empty || fill[p] >= capacity) continue;
      double d = cs[p].distance(slots);
      if (d < best_d) {
        best_d = d;
        best = p;
      }
    }
    if (best == parts)
      for (std::uint32_t p = 0; p < parts && best == parts; ++p)
        if (fill[p] < capacity) best = p;
    S3AND_EXPECTS(best < parts, "balanced assignment ran out of capacity");
    labels[i] = best;
    ++fill[best];
  }
  return labels;
}

}  // namespace detail

struct PartitionResult {
  Partition parts;               // non-empty parts, members ascending
  double cost = 0;               // cost of the returned strategy
  std::vector<double> initial_costs;  // cost of each restart's random-center strategy
  std::vector<double> final_costs;    // cost each restart ended with
};

/// Splits `members` into at most n parts of size <= min(capacity_limit,
/// ceil((1+gamma)|members|/n)), keeping the lowest-cost strategy over
/// cfg.global_iter random restarts. With |members| <= n every member becomes
/// its own part.
inline PartitionResult cm_partitioning_detailed(std::span<const VertexId> members, std::uint32_t n,
                                                const IndexConfig& cfg, std::span<const VertexAux> aux,
                                                std::uint64_t seed,
                                                std::size_t capacity_limit = std::numeric_limits<std::size_t>::max()) {
  S3AND_EXPECTS(n >= 1, "partition count must be positive");
  PartitionResult result;
  if (members.size() <= n) {
    for (auto v : members) result.parts.push_back({v});
    if (!result.parts.empty()) result.cost = partition_cost(result.parts, aux);
    return result;
  }
  const std::size_t capacity = std::min(balance_bound(members.size(), n, cfg.gamma), capacity_limit);
  S3AND_EXPECTS(capacity * n >= members.size(), "capacity too small for member count");

  detail::SlotSpace space(members, aux);
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> best_labels;
  double best_cost = std::numeric_limits<double>::infinity();

  for (std::uint32_t g = 0; g < cfg.global_iter; ++g) {
    // Random distinct centers; identical signatures may still be picked twice.
    std::vector<std::size_t> order(members.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::uint32_t i = 0; i < n; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
      std::swap(order[i], order[pick(rng)]);
    }
    std::vector<std::uint32_t> seed_labels(space.size(), 0);
    std::vector<std::uint32_t> seed_members;
    for (std::uint32_t i = 0; i < n; ++i) seed_members.push_back(static_cast<std::uint32_t>(order[i]));
    // Centroid of a single center vertex: its own 0/1 vector.
    std::vector<detail::SlotCentroid> centers(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      auto& c = centers[i];
      c.value.assign(space.slot_count(), 0.0);
      for (auto s : space.slots(seed_members[i])) c.value[s] = 1.0;
      c.gain.resize(c.value.size());
      c.total = 0;
      for (std::size_t s = 0; s < c.value.size(); ++s) {
        c.total += c.value[s];
        c.gain[s] = 1.0 - 2.0 * c.value[s];
      }
      c.empty = false;
    }
    auto local = detail::assign_balanced(space, centers, capacity);
    double local_cost = detail::labels_cost(space, local, n);
    result.initial_costs.push_back(local_cost);

    for (std::uint32_t j = 0; j < cfg.local_iter; ++j) {
      auto cs = detail::centroids_from_labels(space, local, n);
      auto next = detail::assign_balanced(space, cs, capacity);
      double next_cost = detail::labels_cost(space, next, n);
      if (next_cost < local_cost) {
        local = std::move(next);
        local_cost = next_cost;
      } else {
        break;  // the same centroids would be recomputed from the same strategy
      }
    }
    result.final_costs.push_back(local_cost);
    if (local_cost < best_cost) {
      best_cost = local_cost;
      best_labels = local;
    }
  }

  Partition parts(n);
  for (std::size_t i = 0; i < members.size(); ++i) parts[best_labels[i]].push_back(members[i]);
  for (auto& p : parts) std::sort(p.begin(), p.end());
  std::erase_if(parts, [](const auto& p) { return p.empty(); });
  result.parts = std::move(parts);
  result.cost = best_cost;
  return result;
}

inline Partition cm_partitioning(std::span<const VertexId> members, std::uint32_t n,
                                 const IndexConfig& cfg, std::span<const VertexAux> aux,
                                 std::uint64_t seed = 0) {
  return cm_partitioning_detailed(members, n, cfg, aux, seed).parts;
}

struct IndexNode {
  bool leaf = true;
  GroupedBitVector agg_bv;
  GroupedBitVector agg_nbv;
  std::uint32_t nk_max = 0;
  std::vector<IndexNode> children;  // internal nodes
  std::vector<VertexId> members;    // leaves
  // Internal nodes with c children: word i of child j's agg_bv at
  // [i * c + j], then agg_nbv likewise at offset words * c. Derived from
  // children by pack_children.
  std::vector<std::uint64_t> child_words;

  friend bool operator==(const IndexNode&, const IndexNode&) = default;
};

inline void pack_children(IndexNode& node) {
  node.child_words.clear();
  if (node.children.empty()) return;
  const auto c = node.children.size();
  const auto words = node.children[0].agg_bv.words().size();
  node.child_words.resize(2 * words * c);
  for (std::size_t j = 0; j < c; ++j)
    for (std::size_t i = 0; i < words; ++i) {
      node.child_words[i * c + j] = node.children[j].agg_bv.words()[i];
      node.child_words[(words + i) * c + j] = node.children[j].agg_nbv.words()[i];
    }
}

/// Smallest h with fanout^h >= vertex_count.
inline std::uint32_t tree_height(std::size_t vertex_count, std::uint32_t fanout) {
  std::uint32_t h = 0;
  std::size_t reach = 1;
  while (reach < vertex_count) {
    reach = reach > std::numeric_limits<std::size_t>::max() / fanout ? std::numeric_limits<std::size_t>::max()
                                                                      : reach * fanout;
    ++h;
  }
  return h;
}

namespace detail {

inline std::size_t saturating_pow(std::size_t base, std::uint32_t exp) {
  std::size_t r = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    if (r > std::numeric_limits<std::size_t>::max() / base) return std::numeric_limits<std::size_t>::max();
    r *= base;
  }
  return r;
}

class IndexBuilder {
 public:
  IndexBuilder(std::span<const VertexAux> aux, const SignatureConfig& sig, const IndexConfig& cfg,
               std::size_t vertex_count)
      : aux_(aux), sig_(sig), cfg_(cfg), height_(tree_height(vertex_count, cfg.fanout)) {}

  IndexNode build(std::vector<VertexId> members, std::uint32_t depth) {
    IndexNode node;
    node.agg_bv = GroupedBitVector(sig_);
    node.agg_nbv = GroupedBitVector(sig_);
    if (members.size() <= cfg_.fanout) {
      node.leaf = true;
      for (auto v : members) {
        node.agg_bv |= aux_[v].bv;
        node.agg_nbv |= aux_[v].nbv;
        node.nk_max = std::max(node.nk_max, aux_[v].nk);
      }
      node.members = std::move(members);
      return node;
    }
    node.leaf = false;
    // Children of a depth-d node hold at most fanout^(h-d) members, which
    // keeps every leaf at depth <= h.
    auto limit = saturating_pow(cfg_.fanout, height_ - depth);
    auto seed = splitmix64(cfg_.seed ^ splitmix64(counter_++));
    auto parts = cm_partitioning_detailed(members, cfg_.fanout, cfg_, aux_, seed, limit).parts;
    for (auto& part : parts) {
      auto child = build(std::move(part), depth + 1);
      node.agg_bv |= child.agg_bv;
      node.agg_nbv |= child.agg_nbv;
      node.nk_max = std::max(node.nk_max, child.nk_max);
      node.children.push_back(std::move(child));
    }
    pack_children(node);
    return node;
  }

 private:
  std::span<const VertexAux> aux_;
  SignatureConfig sig_;
  IndexConfig cfg_;
  std::uint32_t height_;
  std::uint64_t counter_ = 0;
};

}  // namespace detail

inline IndexNode build_index(const DataGraph& g, std::span<const VertexAux> aux,
                             const SignatureConfig& sig, const IndexConfig& cfg) {
  validate(cfg);
  S3AND_EXPECTS(aux.size() == g.vertex_count(), "aux does not match graph");
  std::vector<VertexId> all(g.vertex_count());
  std::iota(all.begin(), all.end(), 0);
  detail::IndexBuilder builder(aux, sig, cfg, g.vertex_count());
  return builder.build(std::move(all), 0);
}

/// Everything a query needs besides the graph itself.
struct TreeIndex {
  SignatureConfig signature;
  IndexConfig config;
  KeywordDictionary dictionary;
  std::size_t vertex_count = 0;
  std::vector<VertexAux> aux;
  IndexNode root;

  friend bool operator==(const TreeIndex&, const TreeIndex&) = default;
};

inline TreeIndex build_tree_index(const DataGraph& g, const SignatureConfig& sig, const IndexConfig& cfg) {
  TreeIndex idx;
  idx.signature = sig;
  idx.config = cfg;
  idx.dictionary = g.dictionary();
  idx.vertex_count = g.vertex_count();
  idx.aux = build_aux(g, sig);
  idx.root = build_index(g, idx.aux, sig, cfg);
  return idx;
}

// ---------------------------------------------------------------------------
// Persistence. Little-endian throughout:
//   magic "S3ANDIDX" + version byte 0x01
//   config: m u32, B u32, hash seed u64, fanout u32, gamma f64, global u32,
//           local u32, rng seed u64
//   intern table: count u64, then (len u32, bytes) per keyword
//   aux: vertex count u64, then per vertex bv words, nbv words, nk u32
//   nodes, preorder: kind u8 (0 leaf, 1 internal), nk_max u32, agg_bv words,
//           agg_nbv words, then leaf: count u64 + ids u32; internal: count u64

inline constexpr char kIndexMagic[8] = {'S', '3', 'A', 'N', 'D', 'I', 'D', 'X'};
inline constexpr std::uint8_t kIndexVersion = 1;

namespace detail {

class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    u64(bits);
  }
  void bytes(std::string_view s) { buf_.append(s); }
  void bits(const GroupedBitVector& bv) {
    for (auto w : bv.words()) u64(w);
  }
  const std::string& buffer() const noexcept { return buf_; }

 private:
  std::string buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  double f64() {
    auto bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  std::string_view bytes(std::size_t n) {
    need(n);
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  void bits(GroupedBitVector& bv) {
    for (auto& w : bv.words()) w = u64();
  }
  std::size_t count(std::size_t max_plausible) {
    auto n = u64();
    if (n > max_plausible) throw IntegrityError("index file: implausible element count");
    return static_cast<std::size_t>(n);
  }
  bool at_end() const noexcept { return pos_ == data_.size(); }
  std::size_t remaining() const noexcept { return data_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw IntegrityError("index file is truncated");
  }
  std::string_view data_;
  std::size_t pos_ = 0;
};

inline void write_node(ByteWriter& w, const IndexNode& node) {
  w.u8(node.leaf ? 0 : 1);
  w.u32(node.nk_max);
  w.bits(node.agg_bv);
  w.bits(node.agg_nbv);
  if (node.leaf) {
    w.u64(node.members.size());
    for (auto v : node.members) w.u32(v);
  } else {
    w.u64(node.children.size());
    for (const auto& c : node.children) write_node(w, c);
  }
}

inline IndexNode read_node(ByteReader& r, const SignatureConfig& sig, std::size_t vertex_count) {
  IndexNode node;
  auto kind = r.u8();
  if (kind > 1) throw IntegrityError("index file: bad node kind");
  node.leaf = kind == 0;
  node.nk_max = r.u32();
  node.agg_bv = GroupedBitVector(sig);
  node.agg_nbv = GroupedBitVector(sig);
  r.bits(node.agg_bv);
  r.bits(node.agg_nbv);
  auto n = r.count(r.remaining());
  if (node.leaf) {
    node.members.resize(n);
    for (auto& v : node.members) {
      v = r.u32();
      if (v >= vertex_count) throw IntegrityError("index file: member id out of range");
    }
  } else {
    node.children.reserve(n);
    for (std::size_t i = 0; i < n; ++i) node.children.push_back(read_node(r, sig, vertex_count));
    pack_children(node);
  }
  return node;
}

}  // namespace detail

inline std::string serialize_index(const TreeIndex& idx) {
  detail::ByteWriter w;
  w.bytes(std::string_view(kIndexMagic, sizeof kIndexMagic));
  w.u8(kIndexVersion);
  w.u32(idx.signature.groups);
  w.u32(idx.signature.bits);
  w.u64(idx.signature.seed);
  w.u32(idx.config.fanout);
  w.f64(idx.config.gamma);
  w.u32(idx.config.global_iter);
  w.u32(idx.config.local_iter);
  w.u64(idx.config.seed);
  w.u64(idx.dictionary.size());
  for (const auto& name : idx.dictionary.names()) {
    w.u32(static_cast<std::uint32_t>(name.size()));
    w.bytes(name);
  }
  w.u64(idx.vertex_count);
  for (const auto& a : idx.aux) {
    w.bits(a.bv);
    w.bits(a.nbv);
    w.u32(a.nk);
  }
  detail::write_node(w, idx.root);
  return w.buffer();
}

inline TreeIndex deserialize_index(std::string_view data) {
  detail::ByteReader r(data);
  if (data.size() < sizeof kIndexMagic + 1 ||
      data.substr(0, sizeof kIndexMagic) != std::string_view(kIndexMagic, sizeof kIndexMagic))
    throw FormatError("not an index file (bad magic)");
  r.bytes(sizeof kIndexMagic);
  if (auto version = r.u8(); version != kIndexVersion)
    throw FormatError("unsupported index version " + std::to_string(version));
  TreeIndex idx;
  idx.signature.groups = r.u32();
  idx.signature.bits = r.u32();
  idx.signature.seed = r.u64();
  if (idx.signature.groups < 1 || idx.signature.bits < 1 || idx.signature.groups > (1u << 20) ||
      idx.signature.bits > (1u << 24))
    throw IntegrityError("index file: invalid signature configuration");
  idx.config.fanout = r.u32();
  idx.config.gamma = r.f64();
  idx.config.global_iter = r.u32();
  idx.config.local_iter = r.u32();
  idx.config.seed = r.u64();
  auto words = r.count(r.remaining());
  for (std::size_t i = 0; i < words; ++i) {
    auto len = r.u32();
    auto name = r.bytes(len);
    if (idx.dictionary.intern(name) != i) throw IntegrityError("index file: duplicate keyword");
  }
  idx.vertex_count = r.count(r.remaining());
  idx.aux.resize(idx.vertex_count);
  for (auto& a : idx.aux) {
    a.bv = GroupedBitVector(idx.signature);
    a.nbv = GroupedBitVector(idx.signature);
    r.bits(a.bv);
    r.bits(a.nbv);
    a.nk = r.u32();
  }
  idx.root = detail::read_node(r, idx.signature, idx.vertex_count);
  if (!r.at_end()) throw IntegrityError("index file has trailing bytes");
  return idx;
}

inline void save_index(const std::string& path, const TreeIndex& idx) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write index file: " + path);
  auto data = serialize_index(idx);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("failed writing index file: " + path);
}

/// Loads an index. The file's configuration always wins; when `requested`
/// differs from it, a message is appended to `warnings`.
inline TreeIndex load_index(const std::string& path,
                            const std::optional<SignatureConfig>& requested = std::nullopt,
                            std::vector<std::string>* warnings = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open index file: " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  auto idx = deserialize_index(data);
  if (requested && !(*requested == idx.signature) && warnings) {
    warnings->push_back("requested signature config (m=" + std::to_string(requested->groups) +
                        ", B=" + std::to_string(requested->bits) + ") ignored; index file uses m=" +
                        std::to_string(idx.signature.groups) + ", B=" + std::to_string(idx.signature.bits));
  }
  return idx;
}

}  // namespace s3and

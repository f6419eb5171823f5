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

// Grouped keyword bit vectors and the per-vertex auxiliary signatures built
// from them. A keyword k lands in group (k mod m) at bit FNV-1a(k ^ seed) mod B.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "s3and/graph.hpp"

namespace s3and {

struct SignatureConfig {
  std::uint32_t groups = 5;     // m
  std::uint32_t bits = 64;      // B, bits per group
  std::uint64_t seed = 0;

  friend bool operator==(const SignatureConfig&, const SignatureConfig&) = default;
};

inline void validate(const SignatureConfig& cfg) {
  if (cfg.groups < 1) throw ValidationError("signature group count must be >= 1");
  if (cfg.bits < 1) throw ValidationError("signature bits per group must be >= 1");
}

/// m fixed-width bit arrays of B bits each. Shapes of up to kInlineWords
/// words are stored inline so arrays of vectors stay contiguous in memory.
class GroupedBitVector {
 public:
  static constexpr std::size_t kInlineWords = 8;

  GroupedBitVector() = default;
  GroupedBitVector(std::uint32_t groups, std::uint32_t bits)
      : groups_(groups), bits_(bits), words_per_group_((bits + 63) / 64),
        size_(static_cast<std::size_t>(groups) * ((bits + 63) / 64)) {
    if (size_ > kInlineWords) heap_.assign(size_, 0);
  }
  explicit GroupedBitVector(const SignatureConfig& cfg) : GroupedBitVector(cfg.groups, cfg.bits) {}

  std::uint32_t groups() const noexcept { return groups_; }
  std::uint32_t bits() const noexcept { return bits_; }
  std::uint32_t words_per_group() const noexcept { return words_per_group_; }
  std::span<const std::uint64_t> words() const noexcept { return {data(), size_}; }
  std::span<std::uint64_t> words() noexcept { return {data(), size_}; }

  void set(std::uint32_t group, std::uint32_t pos) {
    S3AND_EXPECTS(group < groups_ && pos < bits_, "bit position out of range");
    data()[word_index(group, pos)] |= std::uint64_t{1} << (pos % 64);
  }

  bool test(std::uint32_t group, std::uint32_t pos) const {
    S3AND_EXPECTS(group < groups_ && pos < bits_, "bit position out of range");
    return (data()[word_index(group, pos)] >> (pos % 64)) & 1U;
  }

  GroupedBitVector& operator|=(const GroupedBitVector& other) {
    require_same_shape(other);
    std::uint64_t* a = data();
    const std::uint64_t* o = other.data();
    for (std::size_t i = 0; i < size_; ++i) a[i] |= o[i];
    return *this;
  }

  friend GroupedBitVector operator|(GroupedBitVector a, const GroupedBitVector& b) {
    a |= b;
    return a;
  }

  /// For every group x: (*this)^(x) AND query^(x) == query^(x).
  bool covers(const GroupedBitVector& query) const {
    require_same_shape(query);
    const std::uint64_t* a = data();
    const std::uint64_t* q = query.data();
    for (std::size_t i = 0; i < size_; ++i)
      if ((a[i] & q[i]) != q[i]) return false;
    return true;
  }

  bool none() const noexcept {
    for (auto w : words())
      if (w) return false;
    return true;
  }

  std::size_t popcount() const noexcept {
    std::size_t c = 0;
    for (auto w : words()) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  // Unused inline words are always zero, so memberwise comparison is exact.
  friend bool operator==(const GroupedBitVector&, const GroupedBitVector&) = default;

 private:
  const std::uint64_t* data() const noexcept { return size_ > kInlineWords ? heap_.data() : inline_.data(); }
  std::uint64_t* data() noexcept { return size_ > kInlineWords ? heap_.data() : inline_.data(); }
  std::size_t word_index(std::uint32_t group, std::uint32_t pos) const {
    return static_cast<std::size_t>(group) * words_per_group_ + pos / 64;
  }
  void require_same_shape(const GroupedBitVector& o) const {
    S3AND_EXPECTS(groups_ == o.groups_ && bits_ == o.bits_, "bit vector shape mismatch");
  }

  std::uint32_t groups_ = 0;
  std::uint32_t bits_ = 0;
  std::uint32_t words_per_group_ = 0;
  std::size_t size_ = 0;
  std::array<std::uint64_t, kInlineWords> inline_{};
  std::vector<std::uint64_t> heap_;
};

struct VertexAux {
  GroupedBitVector bv;   // own keywords
  GroupedBitVector nbv;  // OR of neighbors' bv
  std::uint32_t nk = 0;  // distinct keywords over all neighbors

  friend bool operator==(const VertexAux&, const VertexAux&) = default;
};

inline std::uint32_t keyword_group(KeywordId k, const SignatureConfig& cfg) {
  return k % cfg.groups;
}

inline std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint32_t hash_keyword(KeywordId k, const SignatureConfig& cfg) {
  std::uint64_t x = static_cast<std::uint64_t>(k) ^ cfg.seed;
  unsigned char le[8];
  for (int i = 0; i < 8; ++i) le[i] = static_cast<unsigned char>(x >> (8 * i));
  return static_cast<std::uint32_t>(fnv1a64(le) % cfg.bits);
}

inline GroupedBitVector build_bit_vectors(std::span<const KeywordId> keywords,
                                          const SignatureConfig& cfg) {
  GroupedBitVector bv(cfg);
  for (auto k : keywords) bv.set(keyword_group(k, cfg), hash_keyword(k, cfg));
  return bv;
}

/// Per-vertex signatures for the whole graph.
inline std::vector<VertexAux> build_aux(const DataGraph& g, const SignatureConfig& cfg) {
  validate(cfg);
  const auto n = g.vertex_count();
  std::vector<VertexAux> aux(n);
  for (VertexId v = 0; v < n; ++v) aux[v].bv = build_bit_vectors(g.keywords(v), cfg);
  std::vector<KeywordId> scratch;
  for (VertexId v = 0; v < n; ++v) {
    aux[v].nbv = GroupedBitVector(cfg);
    scratch.clear();
    for (auto u : g.neighbors(v)) {
      aux[v].nbv |= aux[u].bv;
      auto ks = g.keywords(u);
      scratch.insert(scratch.end(), ks.begin(), ks.end());
    }
    std::sort(scratch.begin(), scratch.end());
    aux[v].nk = static_cast<std::uint32_t>(std::unique(scratch.begin(), scratch.end()) - scratch.begin());
  }
  return aux;
}

/// True iff the candidate signature may contain every keyword of the query
/// signature. Never false when the underlying sets satisfy containment.
inline bool containment_test(const GroupedBitVector& candidate, const GroupedBitVector& query) {
  return candidate.covers(query);
}

}  // namespace s3and

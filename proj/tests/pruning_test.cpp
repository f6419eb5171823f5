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

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace s3and {
namespace {

IndexNode leaf_of(std::vector<VertexId> members, const std::vector<VertexAux>& aux, const SignatureConfig& cfg) {
  IndexNode n;
  n.agg_bv = GroupedBitVector(cfg);
  n.agg_nbv = GroupedBitVector(cfg);
  for (auto v : members) {
    n.agg_bv |= aux[v].bv;
    n.agg_nbv |= aux[v].nbv;
    n.nk_max = std::max(n.nk_max, aux[v].nk);
  }
  n.members = std::move(members);
  return n;
}

TEST(PruningTest, BasicBound) {
  EXPECT_EQ(lb_nd_basic(3, 5), 0u);
  EXPECT_EQ(lb_nd_basic(4, 1), 3u);
  EXPECT_EQ(lb_nd_basic(2, 2), 0u);
}

TEST(PruningTest, ThresholdIsStrict) {
  EXPECT_FALSE(nd_prune(1, 1));
  EXPECT_TRUE(nd_prune(2, 1));
  EXPECT_FALSE(nd_prune(0, 0));
  EXPECT_TRUE(nd_prune(2, 1.5));
}

TEST(PruningTest, RunningExampleTightBounds) {
  auto f = testing::load_running_example();
  SignatureConfig cfg;
  auto aux = build_aux(f.g, cfg);
  auto qs = make_query_side_data(f.q, cfg);
  EXPECT_EQ(lb_nd_tight(qs, 0, aux[0]), 1u);
  EXPECT_EQ(lb_nd_tight(qs, 0, aux[11]), 2u);
  auto n1 = leaf_of({0, 11}, aux, cfg);
  EXPECT_LE(lb_nd_node(n1, qs, 0), 1u);
}

TEST(PruningTest, RunningExampleKeywordPruning) {
  auto f = testing::load_running_example();
  SignatureConfig cfg;
  auto aux = build_aux(f.g, cfg);
  auto qs = make_query_side_data(f.q, cfg);
  // v7 (marketing) and v10 (sales) share no keyword with the query.
  auto n4 = leaf_of({6, 9}, aux, cfg);
  for (VertexId j = 0; j < 5; ++j) {
    EXPECT_TRUE(keyword_prune_vertex(aux[6], qs, j));
    EXPECT_TRUE(keyword_prune_vertex(aux[9], qs, j));
    EXPECT_TRUE(keyword_prune_node(n4, qs, j));
  }
  // v1 matches q1 exactly.
  EXPECT_FALSE(keyword_prune_vertex(aux[0], qs, 0));
}

TEST(PruningTest, EmptyQueryKeywordsNeverPrune) {
  auto g = graph_from_keyword_strings(2, std::vector<Edge>{{0, 1}}, {{"a"}, {"b"}});
  auto q = graph_from_keyword_strings(2, std::vector<Edge>{{0, 1}}, {{}, {}}, g.dictionary());
  SignatureConfig cfg;
  auto aux = build_aux(g, cfg);
  auto qs = make_query_side_data(q, cfg);
  for (VertexId v = 0; v < 2; ++v)
    for (VertexId j = 0; j < 2; ++j) {
      EXPECT_FALSE(keyword_prune_vertex(aux[v], qs, j));
      EXPECT_EQ(lb_nd_tight(qs, j, aux[v]), 0u);
    }
}

TEST(PruningTest, LevelsAreNested) {
  EXPECT_EQ(parse_pruning_level("ks"), PruningLevel::Keyword);
  EXPECT_EQ(parse_pruning_level("ks+lb"), PruningLevel::KeywordBasic);
  EXPECT_EQ(parse_pruning_level("ks+lb+tight"), PruningLevel::Full);
  EXPECT_THROW(parse_pruning_level("tight"), ValidationError);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto inst = testing::random_instance(seed);
    auto qs = make_query_side_data(inst.q, inst.sig);
    for (VertexId v = 0; v < inst.g.vertex_count(); ++v)
      for (VertexId j = 0; j < inst.q.vertex_count(); ++j) {
        bool ks = prune_vertex(PruningLevel::Keyword, inst.index.aux[v], inst.g.degree(v), qs, j, inst.sigma);
        bool lb = prune_vertex(PruningLevel::KeywordBasic, inst.index.aux[v], inst.g.degree(v), qs, j, inst.sigma);
        bool full = prune_vertex(PruningLevel::Full, inst.index.aux[v], inst.g.degree(v), qs, j, inst.sigma);
        EXPECT_LE(ks, lb);
        EXPECT_LE(lb, full);
      }
  }
}

TEST(PruningTest, MismatchedSignatureShapeIsContractViolation) {
  auto f = testing::load_running_example();
  auto aux = build_aux(f.g, SignatureConfig{});
  auto qs = make_query_side_data(f.q, SignatureConfig{4, 64, 0});
  EXPECT_THROW(keyword_prune_vertex(aux[0], qs, 0), ContractViolation);
  EXPECT_THROW(keyword_prune_vertex(aux[0], qs, 9), ContractViolation);
}

// Every bound is at most the true ND under every keyword-feasible mapping.
TEST(PruningTest, BoundsNeverExceedNeighborDifference) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto inst = testing::random_instance(seed);
    auto qs = make_query_side_data(inst.q, inst.sig);
    for_each_keyword_feasible_mapping(inst.q, inst.g, [&](std::span<const VertexId> m) {
      for (VertexId j = 0; j < inst.q.vertex_count(); ++j) {
        auto nd = neighbor_difference(inst.q, inst.g, m, j);
        ASSERT_LE(lb_nd_basic(inst.q.degree(j), inst.g.degree(m[j])), nd) << inst.describe();
        ASSERT_LE(lb_nd_tight(qs, j, inst.index.aux[m[j]]), nd) << inst.describe();
      }
    });
  }
}

// Filters never fire on a pair that occurs in an answer, at vertex or node level.
TEST(PruningTest, FiltersAreSoundAgainstOracle) {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    auto inst = testing::random_instance(seed);
    auto qs = make_query_side_data(inst.q, inst.sig);
    auto answers = oracle_search(make_query_spec(inst.q, inst.agg, inst.sigma), inst.g);
    std::vector<std::vector<bool>> pair(inst.q.vertex_count(), std::vector<bool>(inst.g.vertex_count(), false));
    for (const auto& a : answers)
      for (VertexId j = 0; j < a.mapping.size(); ++j) pair[j][a.mapping[j]] = true;
    for (VertexId j = 0; j < inst.q.vertex_count(); ++j)
      for (VertexId v = 0; v < inst.g.vertex_count(); ++v)
        if (pair[j][v]) {
          ASSERT_FALSE(prune_vertex(PruningLevel::Full, inst.index.aux[v], inst.g.degree(v), qs, j, inst.sigma));
        }
    auto walk = [&](auto&& self, const IndexNode& n) -> std::vector<VertexId> {
      std::vector<VertexId> members = n.members;
      for (const auto& c : n.children) {
        auto sub = self(self, c);
        members.insert(members.end(), sub.begin(), sub.end());
      }
      for (VertexId j = 0; j < inst.q.vertex_count(); ++j)
        for (auto v : members)
          if (pair[j][v]) {
            EXPECT_FALSE(prune_node(PruningLevel::Full, n, qs, j, inst.sigma)) << inst.describe();
          }
      return members;
    };
    walk(walk, inst.index.root);
  }
}

TEST(PruningTest, NodeBoundDominatedByMembers) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto inst = testing::random_instance(seed);
    auto qs = make_query_side_data(inst.q, inst.sig);
    auto walk = [&](auto&& self, const IndexNode& n) -> std::vector<VertexId> {
      std::vector<VertexId> members = n.members;
      for (const auto& c : n.children) {
        auto sub = self(self, c);
        members.insert(members.end(), sub.begin(), sub.end());
      }
      for (VertexId j = 0; j < inst.q.vertex_count(); ++j) {
        auto bound = lb_nd_node(n, qs, j);
        bool pruned = keyword_prune_node(n, qs, j);
        for (auto v : members) {
          EXPECT_LE(bound, lb_nd_tight(qs, j, inst.index.aux[v]));
          if (pruned) {
            EXPECT_TRUE(keyword_prune_vertex(inst.index.aux[v], qs, j));
          }
        }
        if (n.leaf && members.size() == 1) {
          EXPECT_EQ(bound, lb_nd_tight(qs, j, inst.index.aux[members[0]]));
        }
      }
      return members;
    };
    walk(walk, inst.index.root);
  }
}

TEST(PruningTest, QueryFilterAgreesWithReferencePredicates) {
  for (std::uint64_t seed = 300; seed < 340; ++seed) {
    auto inst = testing::random_instance(seed);
    auto qs = make_query_side_data(inst.q, inst.sig);
    for (auto level : {PruningLevel::Keyword, PruningLevel::KeywordBasic, PruningLevel::Full}) {
      const QueryFilter filter(level, qs, inst.sigma);
      for (VertexId j = 0; j < inst.q.vertex_count(); ++j)
        for (VertexId v = 0; v < inst.g.vertex_count(); ++v)
          ASSERT_EQ(filter.prune_vertex(inst.index.aux[v], inst.g.degree(v), j),
                    prune_vertex(level, inst.index.aux[v], inst.g.degree(v), qs, j, inst.sigma));
      auto walk = [&](auto&& self, const IndexNode& n) -> void {
        for (VertexId j = 0; j < inst.q.vertex_count(); ++j) {
          ASSERT_EQ(filter.prune_node(n, j), prune_node(level, n, qs, j, inst.sigma));
          std::vector<std::uint8_t> keep;
          if (!n.leaf) filter.keep_children(n, j, keep);
          for (std::size_t i = 0; i < n.children.size(); ++i)
            ASSERT_EQ(keep[i] == 0, prune_node(level, n.children[i], qs, j, inst.sigma));
        }
        for (const auto& c : n.children) self(self, c);
      };
      walk(walk, inst.index.root);
    }
  }
}

}  // namespace
}  // namespace s3and

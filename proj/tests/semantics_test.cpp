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

#include <sstream>

#include "test_util.hpp"

namespace s3and {
namespace {

const Mapping kIdentity{0, 1, 2, 3, 4};

TEST(SemanticsTest, RunningExampleNeighborDifferences) {
  auto f = testing::load_running_example();
  std::vector<Score> nds;
  for (VertexId j = 0; j < 5; ++j) nds.push_back(neighbor_difference(f.q, f.g, kIdentity, j));
  EXPECT_EQ(nds, (std::vector<Score>{1, 0, 2, 0, 1}));
  EXPECT_EQ(aggregated_neighbor_difference(f.q, f.g, kIdentity, Aggregate::Max), 2u);
  EXPECT_EQ(aggregated_neighbor_difference(f.q, f.g, kIdentity, Aggregate::Sum), 4u);
}

TEST(SemanticsTest, RunningExampleIsAnswerAtThreshold) {
  auto f = testing::load_running_example();
  EXPECT_TRUE(is_answer(make_query_spec(f.q, Aggregate::Max, 2), f.g, kIdentity));
  EXPECT_FALSE(is_answer(make_query_spec(f.q, Aggregate::Max, 1), f.g, kIdentity));
  EXPECT_TRUE(is_answer(make_query_spec(f.q, Aggregate::Sum, 4), f.g, kIdentity));
  EXPECT_FALSE(is_answer(make_query_spec(f.q, Aggregate::Sum, 3.5), f.g, kIdentity));
}

TEST(SemanticsTest, NeighborDifferenceMatchesDenseRecount) {
  auto f = testing::load_running_example();
  testing::DenseGraph dq(f.q), dg(f.g);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<VertexId> pool(12);
    std::iota(pool.begin(), pool.end(), 0);
    std::shuffle(pool.begin(), pool.end(), rng);
    Mapping m(pool.begin(), pool.begin() + 5);
    for (VertexId j = 0; j < 5; ++j) EXPECT_EQ(neighbor_difference(f.q, f.g, m, j), testing::brute_nd(dq, dg, m, j));
  }
}

TEST(SemanticsTest, SumDominatesMaxAndBothVanishOnEmbeddings) {
  auto f = testing::load_running_example();
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<VertexId> pool(12);
    std::iota(pool.begin(), pool.end(), 0);
    std::shuffle(pool.begin(), pool.end(), rng);
    Mapping m(pool.begin(), pool.begin() + 5);
    auto mx = aggregated_neighbor_difference(f.q, f.g, m, Aggregate::Max);
    auto sm = aggregated_neighbor_difference(f.q, f.g, m, Aggregate::Sum);
    EXPECT_LE(mx, sm);
    EXPECT_LE(sm, mx * 5);
  }
  // A triangle mapped onto a triangle has no missing edges.
  std::vector<Edge> tri{{0, 1}, {1, 2}, {0, 2}};
  auto t = graph_from_keyword_strings(3, tri, {{"a"}, {"a"}, {"a"}});
  EXPECT_EQ(aggregated_neighbor_difference(t, t, Mapping{2, 0, 1}, Aggregate::Sum), 0u);
}

TEST(SemanticsTest, MappingContracts) {
  auto f = testing::load_running_example();
  auto spec = make_query_spec(f.q, Aggregate::Max, 2);
  EXPECT_THROW(is_answer(spec, f.g, Mapping{0, 1, 2}), ContractViolation);
  EXPECT_THROW(is_answer(spec, f.g, Mapping{0, 1, 2, 3, 3}), ContractViolation);
  EXPECT_THROW(is_answer(spec, f.g, Mapping{0, 1, 2, 3, 99}), ContractViolation);
}

TEST(SemanticsTest, AggregateParsing) {
  EXPECT_EQ(parse_aggregate("max"), Aggregate::Max);
  EXPECT_EQ(parse_aggregate("SUM"), Aggregate::Sum);
  try {
    parse_aggregate("avg");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("sum"), std::string::npos);
  }
  auto f = testing::load_running_example();
  EXPECT_THROW(make_query_spec(f.q, Aggregate::Max, -1), ValidationError);
}

TEST(SemanticsTest, OracleContainsRunningExampleAnswer) {
  auto f = testing::load_running_example();
  auto answers = oracle_search(make_query_spec(f.q, Aggregate::Max, 2), f.g);
  auto it = std::find_if(answers.begin(), answers.end(), [](const MatchAnswer& a) { return a.mapping == kIdentity; });
  ASSERT_NE(it, answers.end());
  EXPECT_EQ(it->score, 2u);
  EXPECT_TRUE(std::is_sorted(answers.begin(), answers.end(), [](const MatchAnswer& a, const MatchAnswer& b) {
    return std::tie(a.score, a.mapping) < std::tie(b.score, b.mapping);
  }));
}

TEST(SemanticsTest, OracleMatchesDenseEnumeratorOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto inst = testing::random_instance(seed);
    auto lib = oracle_search(make_query_spec(inst.q, inst.agg, inst.sigma), inst.g);
    auto ref = testing::brute_answers(inst.q, inst.g, inst.agg == Aggregate::Sum, inst.sigma);
    ASSERT_EQ(testing::as_brute(lib), ref) << inst.describe();
  }
}

TEST(SemanticsTest, ZeroThresholdAnswersAreEmbeddings) {
  // q: path a-b-c. G: triangle a,b,c plus pendant. sigma=0 needs every q edge present.
  std::vector<Edge> qe{{0, 1}, {1, 2}};
  auto g = graph_from_keyword_strings(4, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}, {2, 3}},
                                      {{"a"}, {"b"}, {"c"}, {"a"}});
  auto q = graph_from_keyword_strings(3, qe, {{"a"}, {"b"}, {"c"}}, g.dictionary());
  auto answers = oracle_search(make_query_spec(q, Aggregate::Max, 0), g);
  ASSERT_EQ(answers.size(), 1u);
  EXPECT_EQ(answers[0].mapping, (Mapping{0, 1, 2}));
  // Vertex 3 carries "a" but is not adjacent to "b": ND(q0)=1.
  auto loose = oracle_search(make_query_spec(q, Aggregate::Max, 1), g);
  EXPECT_EQ(loose.size(), 2u);
  EXPECT_EQ(distinct_vertex_sets(loose), 2u);
}

TEST(SemanticsTest, DisconnectedImageIsNeverAnAnswer) {
  auto g = graph_from_keyword_strings(3, std::vector<Edge>{{0, 1}}, {{"a"}, {"b"}, {"c"}});
  auto q = graph_from_keyword_strings(2, std::vector<Edge>{{0, 1}}, {{"a"}, {"c"}}, g.dictionary());
  EXPECT_TRUE(oracle_search(make_query_spec(q, Aggregate::Sum, 10), g).empty());
}

TEST(SemanticsTest, AnswerFormat) {
  AnswerSet s{make_answer({4, 2}, 1), make_answer({1, 0}, 0), make_answer({4, 2}, 1)};
  normalize(s);
  std::ostringstream out;
  write_answers(out, s);
  EXPECT_EQ(out.str(), "a 0 0:1 1:0\na 1 0:4 1:2\n");
}

}  // namespace
}  // namespace s3and

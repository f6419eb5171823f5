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

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "s3and/json.hpp"
#include "test_util.hpp"

namespace s3and {
namespace {

TEST(WorkbenchTest, PureRingLattice) {
  SyntheticSpec s;
  s.vertex_count = 100;
  s.ring_k = 3;
  s.shortcut_p = 0;
  auto g = generate_graph(s);
  EXPECT_EQ(g.edge_count(), 300u);
  for (VertexId v = 0; v < 100; ++v) EXPECT_EQ(g.degree(v), 6u);
  EXPECT_TRUE(g.adjacent(0, 99));
  EXPECT_TRUE(g.adjacent(0, 97));
  EXPECT_FALSE(g.adjacent(0, 96));
}

TEST(WorkbenchTest, ShortcutsAddEdgesWithoutLoops) {
  SyntheticSpec s;
  s.vertex_count = 2000;
  s.shortcut_p = 1.0;
  auto g = generate_graph(s);
  EXPECT_GT(g.edge_count(), 2 * 2000u + 1900u);
  EXPECT_LE(g.edge_count(), 3 * 2000u);
}

TEST(WorkbenchTest, GenerationIsDeterministic) {
  SyntheticSpec s;
  s.vertex_count = 500;
  s.seed = 77;
  s.distribution = KeywordDistribution::Zipf;
  std::ostringstream a, b;
  write_graph(a, generate_graph(s));
  write_graph(b, generate_graph(s));
  EXPECT_EQ(a.str(), b.str());
  s.seed = 78;
  std::ostringstream c;
  write_graph(c, generate_graph(s));
  EXPECT_NE(a.str(), c.str());
}

TEST(WorkbenchTest, KeywordsDistinctPerVertex) {
  SyntheticSpec s;
  s.vertex_count = 300;
  s.keyword_domain = 5;
  s.keywords_per_vertex = 5;
  s.distribution = KeywordDistribution::Gaussian;
  auto g = generate_graph(s);
  for (VertexId v = 0; v < 300; ++v) EXPECT_EQ(g.keywords(v).size(), 5u);
}

TEST(WorkbenchTest, UniformFrequenciesWithinThreeSigma) {
  SyntheticSpec s;
  s.vertex_count = 20000;
  s.keyword_domain = 50;
  s.keywords_per_vertex = 3;
  s.seed = 4;
  auto g = generate_graph(s);
  std::vector<double> count(g.keyword_domain_size(), 0);
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    for (auto k : g.keywords(v)) ++count[k];
  ASSERT_EQ(count.size(), 50u);
  const double p = 3.0 / 50, n = 20000, mean = n * p, sd = std::sqrt(n * p * (1 - p));
  for (auto c : count) EXPECT_LT(std::abs(c - mean), 3 * sd + 1e-9);
}

TEST(WorkbenchTest, SkewedDistributionsFavorTheirMode) {
  SyntheticSpec s;
  s.vertex_count = 5000;
  s.keywords_per_vertex = 1;
  s.distribution = KeywordDistribution::Zipf;
  auto g = generate_graph(s);
  std::map<std::string, int> freq;
  for (VertexId v = 0; v < g.vertex_count(); ++v) ++freq[g.dictionary().name(g.keywords(v)[0])];
  EXPECT_GT(freq["w0"], freq["w1"]);
  EXPECT_GT(freq["w1"], freq["w5"]);
  s.distribution = KeywordDistribution::Gaussian;
  auto h = generate_graph(s);
  freq.clear();
  for (VertexId v = 0; v < h.vertex_count(); ++v) ++freq[h.dictionary().name(h.keywords(v)[0])];
  EXPECT_GT(freq["w25"], freq["w5"]);
  EXPECT_GT(freq["w25"], freq["w45"]);
}

TEST(WorkbenchTest, InfeasibleSpecsRejected) {
  SyntheticSpec s;
  s.keywords_per_vertex = 60;
  EXPECT_THROW(generate_graph(s), ValidationError);
  s = {};
  s.shortcut_p = 1.5;
  EXPECT_THROW(generate_graph(s), ValidationError);
  s = {};
  s.vertex_count = 4;
  EXPECT_THROW(generate_graph(s), ValidationError);
  EXPECT_THROW(parse_distribution("pareto"), ValidationError);
}

TEST(WorkbenchTest, WorkloadQueriesAreConnectedCopies) {
  SyntheticSpec s;
  s.vertex_count = 1000;
  auto g = generate_graph(s);
  WorkloadSpec w;
  w.query_count = 50;
  w.query_size = 6;
  w.seed = 3;
  auto qs = generate_workload(g, w);
  ASSERT_EQ(qs.size(), 50u);
  for (const auto& sq : qs) {
    EXPECT_EQ(sq.query.vertex_count(), 6u);
    EXPECT_NO_THROW(require_query_graph(sq.query));
    for (VertexId j = 0; j < 6; ++j) {
      auto qk = sq.query.keywords(j), gk = g.keywords(sq.source[j]);
      EXPECT_TRUE(std::equal(qk.begin(), qk.end(), gk.begin(), gk.end()));
    }
    for (auto [a, b] : sq.query.edges()) EXPECT_TRUE(g.adjacent(sq.source[a], sq.source[b]));
  }
}

TEST(WorkbenchTest, NoDropMeansSelfMatchAtZeroThreshold) {
  SyntheticSpec s;
  s.vertex_count = 400;
  auto g = generate_graph(s);
  auto idx = build_tree_index(g, SignatureConfig{}, IndexConfig{});
  WorkloadSpec w;
  w.query_count = 10;
  w.drop_p = 0;
  for (const auto& sq : generate_workload(g, w)) {
    EXPECT_EQ(sq.query.edge_count(), induced_subgraph(g, sq.source).size());
    auto r = run_query(idx, g, make_query_spec(sq.query, Aggregate::Max, 0));
    EXPECT_TRUE(std::any_of(r.answers.begin(), r.answers.end(),
                            [&](const MatchAnswer& a) { return a.mapping == sq.source; }));
  }
}

TEST(WorkbenchTest, SingleVertexQueriesAndFailures) {
  SyntheticSpec s;
  s.vertex_count = 50;
  auto g = generate_graph(s);
  WorkloadSpec w;
  w.query_size = 1;
  w.query_count = 5;
  for (const auto& sq : generate_workload(g, w)) EXPECT_EQ(sq.query.edge_count(), 0u);
  // Two isolated vertices cannot host a 2-vertex connected sample.
  auto iso = graph_from_keyword_strings(2, std::vector<Edge>{}, {{"a"}, {"b"}});
  WorkloadSpec w2;
  w2.query_size = 2;
  w2.max_retries = 20;
  EXPECT_THROW(generate_workload(iso, w2), GenerationError);
}

TEST(WorkbenchTest, CellsSweepOneParameterAtATime) {
  BenchConfig cfg;
  auto cells = make_cells(cfg);
  std::map<std::string, int> per;
  for (const auto& c : cells) ++per[c.param_name];
  EXPECT_EQ(per["sigma_max"], 4);
  EXPECT_EQ(per["sigma_sum"], 4);
  EXPECT_EQ(per["keywords_per_vertex"], 5);
  EXPECT_EQ(per["keyword_domain"], 4);
  EXPECT_EQ(per["query_size"], 4);
  EXPECT_EQ(per["ablation"], 3);
  for (std::size_t i = 0; i < cells.size(); ++i) EXPECT_EQ(cells[i].graph.seed, cfg.graph.seed + i);
  cfg.sweeps = {"bogus"};
  EXPECT_THROW(make_cells(cfg), ValidationError);
}

TEST(WorkbenchTest, SmallBenchmarkMatchesBaselineAndIsThreadIndependent) {
  BenchConfig cfg;
  cfg.graph.vertex_count = 600;
  cfg.workload.query_count = 4;
  cfg.sweeps = {"sigma_sum", "ablation"};
  cfg.threads = 1;
  auto one = run_benchmark(cfg);
  cfg.threads = 3;
  auto three = run_benchmark(cfg);
  ASSERT_EQ(one.size(), 7u);
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_TRUE(one[i].baseline_match);
    EXPECT_GE(one[i].pruning_power, 0.0);
    EXPECT_LE(one[i].pruning_power, 1.0);
    EXPECT_DOUBLE_EQ(one[i].pruning_power, three[i].pruning_power);
    EXPECT_DOUBLE_EQ(one[i].answers, three[i].answers);
    double mean = 0;
    for (const auto& q : one[i].queries) mean += q.pruning_power / one[i].queries.size();
    EXPECT_NEAR(mean, one[i].pruning_power, 1e-12);
  }
  std::ostringstream csv;
  write_bench_csv(csv, one);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), kBenchCsvHeader);
  nlohmann::json j = one;
  EXPECT_EQ(j.size(), 7u);
}

TEST(WorkbenchTest, ThreadCapFromEnvironment) {
  setenv("S3AND_THREADS", "2", 1);
  EXPECT_EQ(worker_count(8, 100), 2u);
  EXPECT_EQ(worker_count(1, 100), 1u);
  unsetenv("S3AND_THREADS");
  EXPECT_EQ(worker_count(8, 3), 3u);
}

}  // namespace
}  // namespace s3and

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

// Command line front end: gen, workload, index, query, baseline, bench, oracle.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "s3and/json.hpp"
#include "s3and/s3and.hpp"

namespace {

using namespace s3and;

struct QueryArgs {
  std::string graph;
  std::string query;
  std::string agg = "max";
  double sigma = 1;
  std::string stats_json;
};

void add_query_args(CLI::App* cmd, QueryArgs& a) {
  cmd->add_option("--graph", a.graph, "data graph file")->required();
  cmd->add_option("--query", a.query, "query graph file")->required();
  cmd->add_option("--agg", a.agg, "aggregate: max or sum")->capture_default_str();
  cmd->add_option("--sigma", a.sigma, "AND threshold")->capture_default_str();
  cmd->add_option("--stats-json", a.stats_json, "write query statistics as JSON to this path");
}

void write_stats(const std::string& path, const QueryStats& stats) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write stats file: " + path);
  out << nlohmann::json(stats).dump(2) << '\n';
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Keyword-labeled subgraph similarity search under aggregated neighbor difference"};
  app.require_subcommand(1);

  // gen
  SyntheticSpec gen_spec;
  std::string gen_dist = "uniform", gen_out;
  auto* gen = app.add_subcommand("gen", "generate a Newman-Watts-Strogatz keyword graph");
  gen->add_option("--vertices", gen_spec.vertex_count, "|V(G)|")->capture_default_str();
  gen->add_option("--ring-k", gen_spec.ring_k, "lattice neighbors per side")->capture_default_str();
  gen->add_option("--shortcut-p", gen_spec.shortcut_p, "per-vertex shortcut probability")->capture_default_str();
  gen->add_option("--domain", gen_spec.keyword_domain, "keyword domain size")->capture_default_str();
  gen->add_option("--keywords", gen_spec.keywords_per_vertex, "keywords per vertex")->capture_default_str();
  gen->add_option("--dist", gen_dist, "uniform, gaussian or zipf")->capture_default_str();
  gen->add_option("--seed", gen_spec.seed, "rng seed")->capture_default_str();
  gen->add_option("--out", gen_out, "output file (default stdout)");

  // workload
  WorkloadSpec wl_spec;
  std::string wl_graph, wl_out;
  auto* wl = app.add_subcommand("workload", "sample connected query graphs from a data graph");
  wl->add_option("--graph", wl_graph, "data graph file")->required();
  wl->add_option("--count", wl_spec.query_count, "number of queries")->capture_default_str();
  wl->add_option("--size", wl_spec.query_size, "|V(q)|")->capture_default_str();
  wl->add_option("--drop-p", wl_spec.drop_p, "edge drop probability")->capture_default_str();
  wl->add_option("--seed", wl_spec.seed, "rng seed")->capture_default_str();
  wl->add_option("--out", wl_out, "output directory, one q<i>.txt per query")->required();

  // index
  SignatureConfig idx_sig;
  IndexConfig idx_cfg;
  std::string idx_graph, idx_out;
  auto* idx = app.add_subcommand("index", "build and save the tree index");
  idx->add_option("--graph", idx_graph, "data graph file")->required();
  idx->add_option("--out", idx_out, "index file")->required();
  idx->add_option("--groups,--m", idx_sig.groups, "keyword groups m")->capture_default_str();
  idx->add_option("--bits", idx_sig.bits, "bits per group B")->capture_default_str();
  idx->add_option("--hash-seed", idx_sig.seed, "keyword hash seed")->capture_default_str();
  idx->add_option("--fanout", idx_cfg.fanout, "partitions per node")->capture_default_str();
  idx->add_option("--gamma", idx_cfg.gamma, "balance slack")->capture_default_str();
  idx->add_option("--global-iter", idx_cfg.global_iter, "partitioning restarts")->capture_default_str();
  idx->add_option("--local-iter", idx_cfg.local_iter, "refinement rounds per restart")->capture_default_str();
  idx->add_option("--seed", idx_cfg.seed, "partitioning rng seed")->capture_default_str();

  // query
  QueryArgs q_args;
  std::string q_index, q_ablation = "ks+lb+tight", q_traversal = "heap";
  std::optional<std::uint32_t> q_groups;
  auto* query = app.add_subcommand("query", "answer one query through the index");
  query->add_option("--index", q_index, "index file")->required();
  add_query_args(query, q_args);
  query->add_option("--ablation", q_ablation, "ks, ks+lb or ks+lb+tight")->capture_default_str();
  query->add_option("--traversal", q_traversal, "heap, fifo or lifo")->capture_default_str();
  query->add_option("--groups,--m", q_groups, "expected keyword groups m; the index file's value wins");

  // baseline
  QueryArgs b_args;
  auto* baseline = app.add_subcommand("baseline", "answer one query by exact scan, no index");
  add_query_args(baseline, b_args);

  // oracle
  QueryArgs o_args;
  auto* oracle = app.add_subcommand("oracle", "answer one query by exhaustive enumeration (small inputs)");
  add_query_args(oracle, o_args);

  // bench
  BenchConfig bench_cfg;
  std::string bench_dist = "uniform", bench_csv, bench_json;
  std::vector<std::string> bench_sweeps;
  auto* bench = app.add_subcommand("bench", "one-at-a-time parameter sweeps, engine vs baseline");
  bench->add_option("--vertices", bench_cfg.graph.vertex_count, "default |V(G)|")->capture_default_str();
  bench->add_option("--vertex-counts", bench_cfg.vertex_counts, "|V(G)| sweep values");
  bench->add_option("--queries", bench_cfg.workload.query_count, "queries per cell")->capture_default_str();
  bench->add_option("--ring-k", bench_cfg.graph.ring_k, "lattice neighbors per side")->capture_default_str();
  bench->add_option("--shortcut-p", bench_cfg.graph.shortcut_p, "shortcut probability")->capture_default_str();
  bench->add_option("--dist", bench_dist, "uniform, gaussian or zipf")->capture_default_str();
  bench->add_option("--bits", bench_cfg.signature.bits, "bits per group B")->capture_default_str();
  bench->add_option("--seed", bench_cfg.graph.seed, "base seed")->capture_default_str();
  bench->add_option("--sweep", bench_sweeps,
                    "sigma_max, sigma_sum, keywords_per_vertex, keyword_domain, query_size, vertex_count, ablation");
  bench->add_flag("!--no-baseline", bench_cfg.baseline, "skip the baseline runs");
  bench->add_option("--threads", bench_cfg.threads, "workers (0: all cores; S3AND_THREADS caps)");
  bench->add_option("--csv", bench_csv, "CSV output (default stdout)");
  bench->add_option("--json", bench_json, "JSON report with per-query rows and config echo");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      gen_spec.distribution = parse_distribution(gen_dist);
      auto g = generate_graph(gen_spec);
      std::ofstream file;
      write_graph(open_output(gen_out, file), g);
    } else if (*wl) {
      auto g = load_graph_file(wl_graph);
      auto queries = generate_workload(g, wl_spec);
      std::filesystem::create_directories(wl_out);
      for (std::size_t i = 0; i < queries.size(); ++i) {
        auto path = std::filesystem::path(wl_out) / ("q" + std::to_string(i) + ".txt");
        save_graph_file(path.string(), queries[i].query);
      }
      std::cerr << "wrote " << queries.size() << " queries to " << wl_out << '\n';
    } else if (*idx) {
      auto g = load_graph_file(idx_graph);
      save_index(idx_out, build_tree_index(g, idx_sig, idx_cfg));
    } else if (*query) {
      auto g = load_graph_file(q_args.graph);
      std::vector<std::string> warnings;
      auto index = load_index(q_index);
      if (q_groups && *q_groups != index.signature.groups)
        warnings.push_back("requested m=" + std::to_string(*q_groups) + " ignored; index file uses m=" +
                           std::to_string(index.signature.groups));
      for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
      auto spec = make_query_spec(load_query_file(q_args.query, g.dictionary()), parse_aggregate(q_args.agg),
                                  q_args.sigma);
      EngineOptions opt;
      opt.pruning = parse_pruning_level(q_ablation);
      opt.traversal = parse_traversal(q_traversal);
      auto result = run_query(index, g, spec, opt);
      write_answers(std::cout, result.answers);
      write_stats(q_args.stats_json, result.stats);
    } else if (*baseline || *oracle) {
      auto& a = *baseline ? b_args : o_args;
      auto g = load_graph_file(a.graph);
      auto spec = make_query_spec(load_query_file(a.query, g.dictionary()), parse_aggregate(a.agg), a.sigma);
      if (*baseline) {
        auto result = run_baseline(g, spec);
        write_answers(std::cout, result.answers);
        write_stats(a.stats_json, result.stats);
      } else {
        write_answers(std::cout, oracle_search(spec, g));
      }
    } else if (*bench) {
      bench_cfg.graph.distribution = parse_distribution(bench_dist);
      bench_cfg.workload.seed = bench_cfg.graph.seed;
      if (!bench_sweeps.empty()) bench_cfg.sweeps = bench_sweeps;
      auto rows = run_benchmark(bench_cfg);
      std::ofstream file;
      write_bench_csv(open_output(bench_csv, file), rows);
      if (!bench_json.empty()) {
        nlohmann::json report{{"signature", {{"m", bench_cfg.signature.groups},
                                             {"B", bench_cfg.signature.bits},
                                             {"seed", bench_cfg.signature.seed}}},
                              {"index", {{"fanout", bench_cfg.index.fanout},
                                         {"gamma", bench_cfg.index.gamma},
                                         {"global_iter", bench_cfg.index.global_iter},
                                         {"local_iter", bench_cfg.index.local_iter}}},
                              {"rows", rows}};
        std::ofstream out(bench_json);
        out << report.dump(2) << '\n';
      }
      bool all_match = true;
      for (const auto& r : rows) all_match = all_match && r.baseline_match;
      if (!all_match) {
        std::cerr << "error: engine and baseline answers differ in at least one cell\n";
        return 3;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

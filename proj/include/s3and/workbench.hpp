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

// Synthetic small-world graphs, sampled query workloads and the parameter
// sweep harness comparing the engine against the index-free baseline.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_set>
#include <vector>

#include "s3and/graph.hpp"
#include "s3and/graph_io.hpp"
#include "s3and/index.hpp"
#include "s3and/query.hpp"
#include "s3and/semantics.hpp"

namespace s3and {

enum class KeywordDistribution { Uniform, Gaussian, Zipf };

inline std::string_view to_string(KeywordDistribution d) {
  switch (d) {
    case KeywordDistribution::Uniform: return "uniform";
    case KeywordDistribution::Gaussian: return "gaussian";
    case KeywordDistribution::Zipf: return "zipf";
  }
  return "?";
}

inline KeywordDistribution parse_distribution(std::string_view s) {
  if (s == "uniform") return KeywordDistribution::Uniform;
  if (s == "gaussian") return KeywordDistribution::Gaussian;
  if (s == "zipf") return KeywordDistribution::Zipf;
  throw ValidationError("unknown keyword distribution '" + std::string(s) + "'");
}

inline constexpr double kZipfExponent = 1.5;

struct SyntheticSpec {
  std::size_t vertex_count = 50000;
  std::uint32_t ring_k = 2;      // lattice neighbors per side
  double shortcut_p = 0.1;
  std::uint32_t keyword_domain = 50;
  std::uint32_t keywords_per_vertex = 3;
  KeywordDistribution distribution = KeywordDistribution::Uniform;
  std::uint64_t seed = 0;
};

inline void validate(const SyntheticSpec& s) {
  if (s.vertex_count < 1) throw ValidationError("vertex count must be positive");
  if (s.keyword_domain < 1) throw ValidationError("keyword domain must be non-empty");
  if (s.keywords_per_vertex > s.keyword_domain)
    throw ValidationError("keywords per vertex exceeds the keyword domain");
  if (!(s.shortcut_p >= 0 && s.shortcut_p <= 1)) throw ValidationError("shortcut probability must be in [0,1]");
  if (s.vertex_count > 1 && 2 * static_cast<std::size_t>(s.ring_k) >= s.vertex_count)
    throw ValidationError("ring lattice needs more than 2k vertices");
}

/// Relative weight of keyword id i in a domain of `domain` keywords.
inline std::vector<double> keyword_weights(KeywordDistribution d, std::uint32_t domain) {
  std::vector<double> w(domain, 1.0);
  if (d == KeywordDistribution::Gaussian) {
    const double mean = domain / 2.0, sd = std::max(domain / 6.0, 1e-9);
    for (std::uint32_t i = 0; i < domain; ++i) w[i] = std::exp(-0.5 * std::pow((i - mean) / sd, 2));
  } else if (d == KeywordDistribution::Zipf) {
    for (std::uint32_t i = 0; i < domain; ++i) w[i] = 1.0 / std::pow(i + 1.0, kZipfExponent);
  }
  return w;
}

inline std::string synthetic_keyword(std::uint32_t i) { return "w" + std::to_string(i); }

/// Newman-Watts-Strogatz graph: ring lattice plus at most one random shortcut
/// per vertex, keywords drawn without replacement by successive weighted draws.
inline DataGraph generate_graph(const SyntheticSpec& spec) {
  validate(spec);
  const auto n = spec.vertex_count;
  std::mt19937_64 rng(spec.seed);
  std::unordered_set<std::uint64_t> present;
  std::vector<Edge> edges;
  auto add = [&](VertexId a, VertexId b) {
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    if (!present.insert((static_cast<std::uint64_t>(a) << 32) | b).second) return false;
    edges.emplace_back(a, b);
    return true;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::uint32_t d = 1; d <= spec.ring_k && n > 1; ++d)
      add(static_cast<VertexId>(i), static_cast<VertexId>((i + d) % n));
  std::bernoulli_distribution coin(spec.shortcut_p);
  std::uniform_int_distribution<std::size_t> any(0, n - 1);
  for (std::size_t i = 0; i < n && n > 1; ++i) {
    if (!coin(rng)) continue;
    for (int attempt = 0; attempt < 32; ++attempt)
      if (add(static_cast<VertexId>(i), static_cast<VertexId>(any(rng)))) break;
  }

  const auto base = keyword_weights(spec.distribution, spec.keyword_domain);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<std::string>> words(n);
  std::vector<double> w;
  for (std::size_t v = 0; v < n; ++v) {
    w = base;
    double total = 0;
    for (auto x : w) total += x;
    for (std::uint32_t t = 0; t < spec.keywords_per_vertex; ++t) {
      double r = unit(rng) * total;
      std::uint32_t pick = spec.keyword_domain;
      for (std::uint32_t i = 0; i < spec.keyword_domain; ++i) {
        if (w[i] <= 0) continue;
        pick = i;
        if (r < w[i]) break;
        r -= w[i];
      }
      words[v].push_back(synthetic_keyword(pick));
      total -= w[pick];
      w[pick] = 0;
    }
    if (words[v].empty()) words[v].emplace_back(kDummyKeyword);
  }
  return graph_from_keyword_strings(n, edges, words);
}

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WorkloadSpec {
  std::size_t query_count = 100;
  std::size_t query_size = 5;
  double drop_p = 0.3;
  std::uint64_t seed = 0;
  std::size_t max_retries = 1000;  // per query
};

struct SampledQuery {
  QueryGraph query;
  std::vector<VertexId> source;  // source[j] is the data vertex query vertex j was copied from
};

/// Random-walk samples of connected induced subgraphs, relabeled in discovery
/// order, with each edge dropped with probability drop_p unless that would
/// disconnect the query.
inline std::vector<SampledQuery> generate_workload(const DataGraph& g, const WorkloadSpec& spec) {
  if (spec.query_size < 1) throw ValidationError("query size must be positive");
  if (!(spec.drop_p >= 0 && spec.drop_p <= 1)) throw ValidationError("drop probability must be in [0,1]");
  if (g.vertex_count() < spec.query_size) throw GenerationError("graph has fewer vertices than the query size");
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<VertexId> start_dist(0, static_cast<VertexId>(g.vertex_count() - 1));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<SampledQuery> out;
  out.reserve(spec.query_count);

  for (std::size_t qi = 0; qi < spec.query_count; ++qi) {
    std::vector<VertexId> found;
    for (std::size_t attempt = 0; attempt < spec.max_retries && found.size() < spec.query_size; ++attempt) {
      found.assign(1, start_dist(rng));
      VertexId cur = found[0];
      for (std::size_t step = 0; step < 50 * spec.query_size && found.size() < spec.query_size; ++step) {
        auto ns = g.neighbors(cur);
        if (ns.empty()) break;
        cur = ns[std::uniform_int_distribution<std::size_t>(0, ns.size() - 1)(rng)];
        if (std::find(found.begin(), found.end(), cur) == found.end()) found.push_back(cur);
      }
    }
    if (found.size() < spec.query_size)
      throw GenerationError("no connected " + std::to_string(spec.query_size) + "-vertex sample after " +
                            std::to_string(spec.max_retries) + " attempts");

    std::vector<Edge> edges;
    for (VertexId a = 0; a < found.size(); ++a)
      for (VertexId b = a + 1; b < found.size(); ++b)
        if (g.adjacent(found[a], found[b])) edges.emplace_back(a, b);
    std::vector<VertexId> all(found.size());
    std::iota(all.begin(), all.end(), 0);
    for (std::size_t i = 0; i < edges.size();) {
      if (unit(rng) < spec.drop_p) {
        auto removed = edges[i];
        edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(i));
        if (is_connected(edges, all)) continue;
        edges.insert(edges.begin() + static_cast<std::ptrdiff_t>(i), removed);
      }
      ++i;
    }
    std::vector<std::vector<std::string>> words(found.size());
    for (std::size_t j = 0; j < found.size(); ++j)
      for (auto k : g.keywords(found[j])) words[j].push_back(g.dictionary().name(k));
    SampledQuery sq{graph_from_keyword_strings(found.size(), edges, words, g.dictionary()), found};
    require_query_graph(sq.query);
    out.push_back(std::move(sq));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Benchmark harness

struct BenchConfig {
  SyntheticSpec graph{.vertex_count = 10000};
  WorkloadSpec workload{.query_count = 20};
  SignatureConfig signature;
  IndexConfig index;
  double sigma_max = 1;
  double sigma_sum = 3;
  std::vector<std::string> sweeps = {"sigma_max", "sigma_sum", "keywords_per_vertex", "keyword_domain",
                                     "query_size", "vertex_count", "ablation"};
  std::vector<std::size_t> vertex_counts = {10000, 25000, 50000};
  bool baseline = true;
  unsigned threads = 0;  // 0: hardware concurrency; S3AND_THREADS caps either way
};

struct BenchCell {
  std::string param_name;
  std::string param_value;
  SyntheticSpec graph;
  WorkloadSpec workload;
  Aggregate aggregate = Aggregate::Max;
  double sigma = 1;
  PruningLevel pruning = PruningLevel::Full;
};

struct BenchQueryRow {
  double pruning_power = 0;
  double wall_ms_engine = 0;
  double wall_ms_baseline = 0;
  std::size_t answers = 0;
};

struct BenchRow {
  BenchCell cell;
  double pruning_power = 0;  // means over the workload
  double wall_ms_engine = 0;
  double wall_ms_baseline = 0;
  double answers = 0;
  bool baseline_match = true;
  std::vector<BenchQueryRow> queries;
};

inline std::string format_number(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

/// One cell per swept value; every other parameter stays at its default.
/// Cell i draws graph and workload seeds from base seed + i.
inline std::vector<BenchCell> make_cells(const BenchConfig& cfg) {
  std::vector<BenchCell> cells;
  auto base = [&](std::string name, std::string value) {
    BenchCell c;
    c.param_name = std::move(name);
    c.param_value = std::move(value);
    c.graph = cfg.graph;
    c.workload = cfg.workload;
    c.sigma = cfg.sigma_max;
    return c;
  };
  for (const auto& sweep : cfg.sweeps) {
    if (sweep == "sigma_max") {
      for (double s : {1.0, 2.0, 3.0, 4.0}) {
        auto c = base(sweep, format_number(s));
        c.sigma = s;
        cells.push_back(c);
      }
    } else if (sweep == "sigma_sum") {
      for (double s : {2.0, 3.0, 4.0, 5.0}) {
        auto c = base(sweep, format_number(s));
        c.aggregate = Aggregate::Sum;
        c.sigma = s;
        cells.push_back(c);
      }
    } else if (sweep == "keywords_per_vertex") {
      for (std::uint32_t w : {1u, 2u, 3u, 4u, 5u}) {
        auto c = base(sweep, std::to_string(w));
        c.graph.keywords_per_vertex = w;
        cells.push_back(c);
      }
    } else if (sweep == "keyword_domain") {
      for (std::uint32_t d : {10u, 20u, 50u, 80u}) {
        auto c = base(sweep, std::to_string(d));
        c.graph.keyword_domain = d;
        cells.push_back(c);
      }
    } else if (sweep == "query_size") {
      for (std::size_t k : {3u, 5u, 8u, 10u}) {
        auto c = base(sweep, std::to_string(k));
        c.workload.query_size = k;
        cells.push_back(c);
      }
    } else if (sweep == "vertex_count") {
      for (auto n : cfg.vertex_counts) {
        auto c = base(sweep, std::to_string(n));
        c.graph.vertex_count = n;
        cells.push_back(c);
      }
    } else if (sweep == "ablation") {
      for (auto p : {PruningLevel::Keyword, PruningLevel::KeywordBasic, PruningLevel::Full}) {
        auto c = base(sweep, std::string(to_string(p)));
        c.pruning = p;
        cells.push_back(c);
      }
    } else {
      throw ValidationError("unknown sweep '" + sweep + "'");
    }
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    cells[i].graph.seed = cfg.graph.seed + i;
    cells[i].workload.seed = cfg.workload.seed + i;
  }
  return cells;
}

inline BenchRow run_cell(const BenchCell& cell, const BenchConfig& cfg) {
  auto g = generate_graph(cell.graph);
  auto index = build_tree_index(g, cfg.signature, cfg.index);
  auto workload = generate_workload(g, cell.workload);
  BenchRow row;
  row.cell = cell;
  EngineOptions opt;
  opt.pruning = cell.pruning;
  for (const auto& sq : workload) {
    auto spec = make_query_spec(sq.query, cell.aggregate, cell.sigma);
    auto engine = run_query(index, g, spec, opt);
    BenchQueryRow q;
    q.pruning_power = engine.stats.pruning_power;
    q.wall_ms_engine = engine.stats.wall_ms;
    q.answers = engine.answers.size();
    if (cfg.baseline) {
      auto base = run_baseline(g, spec);
      q.wall_ms_baseline = base.stats.wall_ms;
      if (base.answers != engine.answers) row.baseline_match = false;
    }
    row.queries.push_back(q);
  }
  const double count = static_cast<double>(std::max<std::size_t>(row.queries.size(), 1));
  for (const auto& q : row.queries) {
    row.pruning_power += q.pruning_power / count;
    row.wall_ms_engine += q.wall_ms_engine / count;
    row.wall_ms_baseline += q.wall_ms_baseline / count;
    row.answers += static_cast<double>(q.answers) / count;
  }
  return row;
}

/// Worker count: `requested` (or hardware concurrency when 0), capped by the
/// S3AND_THREADS environment variable and by `jobs`.
inline unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("S3AND_THREADS")) {
    char* end = nullptr;
    auto cap = std::strtoul(env, &end, 10);
    if (end != env && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, jobs)));
}

/// Runs every cell; rows come back in cell order regardless of worker count.
inline std::vector<BenchRow> run_benchmark(const BenchConfig& cfg) {
  auto cells = make_cells(cfg);
  std::vector<BenchRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) {
      try {
        rows[i] = run_cell(cells[i], cfg);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  auto workers = worker_count(cfg.threads, cells.size());
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

inline constexpr std::string_view kBenchCsvHeader =
    "param_name,param_value,agg,sigma,pruning_power,wall_ms_engine,wall_ms_baseline,answers";

inline void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << kBenchCsvHeader << '\n';
  for (const auto& r : rows)
    out << r.cell.param_name << ',' << r.cell.param_value << ',' << to_string(r.cell.aggregate) << ','
        << r.cell.sigma << ',' << r.pruning_power << ',' << r.wall_ms_engine << ',' << r.wall_ms_baseline << ','
        << r.answers << '\n';
}

}  // namespace s3and

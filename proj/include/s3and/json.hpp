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

// nlohmann::json conversions. Kept apart so the core headers need no JSON
// dependency.

#pragma once

#include <json.hpp>

#include "s3and/query.hpp"
#include "s3and/workbench.hpp"

namespace s3and {

inline void to_json(nlohmann::json& j, const QueryStats& s) {
  j = nlohmann::json{{"pruning_power", s.pruning_power},
                     {"nodes_visited", s.nodes_visited},
                     {"candidates_per_qvertex", s.candidates_per_qvertex},
                     {"wall_ms", s.wall_ms},
                     {"answers", s.answers},
                     {"distinct_vertex_sets", s.distinct_vertex_sets}};
}

inline void to_json(nlohmann::json& j, const SyntheticSpec& s) {
  j = nlohmann::json{{"vertex_count", s.vertex_count},
                     {"ring_k", s.ring_k},
                     {"shortcut_p", s.shortcut_p},
                     {"keyword_domain", s.keyword_domain},
                     {"keywords_per_vertex", s.keywords_per_vertex},
                     {"distribution", to_string(s.distribution)},
                     {"gaussian_sd", "domain/6"},
                     {"zipf_exponent", kZipfExponent},
                     {"seed", s.seed}};
}

inline void to_json(nlohmann::json& j, const BenchRow& r) {
  nlohmann::json queries = nlohmann::json::array();
  for (const auto& q : r.queries)
    queries.push_back({{"pruning_power", q.pruning_power},
                       {"wall_ms_engine", q.wall_ms_engine},
                       {"wall_ms_baseline", q.wall_ms_baseline},
                       {"answers", q.answers}});
  j = nlohmann::json{{"param_name", r.cell.param_name},
                     {"param_value", r.cell.param_value},
                     {"agg", to_string(r.cell.aggregate)},
                     {"sigma", r.cell.sigma},
                     {"pruning", to_string(r.cell.pruning)},
                     {"graph", r.cell.graph},
                     {"query_size", r.cell.workload.query_size},
                     {"query_count", r.cell.workload.query_count},
                     {"drop_p", r.cell.workload.drop_p},
                     {"pruning_power", r.pruning_power},
                     {"wall_ms_engine", r.wall_ms_engine},
                     {"wall_ms_baseline", r.wall_ms_baseline},
                     {"answers", r.answers},
                     {"baseline_match", r.baseline_match},
                     {"queries", queries}};
}

}  // namespace s3and

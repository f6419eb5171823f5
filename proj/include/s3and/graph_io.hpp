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

// Line-based graph text format:
//
//   t <|V|> <|E|>
//   v <id> <kw1>,<kw2>,...      (keyword list may be empty)
//   e <u> <v>                   (u < v)
//
// Blank lines and lines starting with '#' are ignored. Keyword strings are
// interned in ascending vertex-id order, so the intern table does not depend
// on the order of the vertex lines.

#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "s3and/graph.hpp"

namespace s3and {

/// Keyword assigned to data vertices that declare no keywords.
inline constexpr std::string_view kDummyKeyword = "0";

/// Interns per-vertex keyword strings in vertex order on top of `base` and
/// builds the graph.
inline Graph graph_from_keyword_strings(std::size_t vertex_count, std::span<const Edge> edges,
                                        const std::vector<std::vector<std::string>>& words,
                                        KeywordDictionary base = {}) {
  std::vector<std::vector<KeywordId>> ids(words.size());
  for (std::size_t v = 0; v < words.size(); ++v)
    for (const auto& w : words[v]) ids[v].push_back(base.intern(w));
  return Graph::from_parts(vertex_count, edges, std::move(ids), std::move(base));
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::uint64_t parse_count(std::string_view tok, std::size_t line_no, const char* what) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line_no, std::string("invalid ") + what + " '" + std::string(tok) + "'");
  return value;
}

struct RawGraph {
  std::size_t vertex_count = 0;
  std::size_t declared_edges = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<std::string>> words;
};

inline RawGraph parse_raw(std::istream& in) {
  RawGraph raw;
  std::vector<bool> seen;
  bool header = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto toks = split_ws(line);
    if (toks.empty() || toks[0].front() == '#') continue;
    auto tag = toks[0];
    if (tag == "t") {
      if (header) throw ParseError(line_no, "duplicate header line");
      if (toks.size() != 3) throw ParseError(line_no, "header must be 't <|V|> <|E|>'");
      raw.vertex_count = parse_count(toks[1], line_no, "vertex count");
      raw.declared_edges = parse_count(toks[2], line_no, "edge count");
      raw.words.assign(raw.vertex_count, {});
      seen.assign(raw.vertex_count, false);
      header = true;
    } else if (!header) {
      throw ParseError(line_no, "expected header line 't <|V|> <|E|>'");
    } else if (tag == "v") {
      if (toks.size() < 2 || toks.size() > 3)
        throw ParseError(line_no, "vertex line must be 'v <id> [kw1,kw2,...]'");
      auto id = parse_count(toks[1], line_no, "vertex id");
      if (id >= raw.vertex_count)
        throw ValidationError("line " + std::to_string(line_no) + ": vertex id " +
                              std::to_string(id) + " out of range");
      if (seen[id])
        throw ValidationError("line " + std::to_string(line_no) + ": duplicate vertex id " +
                              std::to_string(id));
      seen[id] = true;
      if (toks.size() == 3) {
        std::string_view list = toks[2];
        std::size_t start = 0;
        while (true) {
          auto comma = list.find(',', start);
          auto word = list.substr(start, comma == std::string_view::npos ? comma : comma - start);
          if (word.empty()) throw ParseError(line_no, "empty keyword in list");
          raw.words[id].emplace_back(word);
          if (comma == std::string_view::npos) break;
          start = comma + 1;
        }
      }
    } else if (tag == "e") {
      if (toks.size() != 3) throw ParseError(line_no, "edge line must be 'e <u> <v>'");
      auto u = parse_count(toks[1], line_no, "vertex id");
      auto v = parse_count(toks[2], line_no, "vertex id");
      if (u >= raw.vertex_count || v >= raw.vertex_count)
        throw ValidationError("line " + std::to_string(line_no) + ": edge references unknown vertex");
      if (u == v)
        throw ValidationError("line " + std::to_string(line_no) + ": self-loop");
      if (u > v) throw ParseError(line_no, "edge endpoints must satisfy u < v");
      raw.edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
    } else {
      throw ParseError(line_no, "unknown line tag '" + std::string(tag) +
                                    "' (only undirected 't', 'v', 'e' lines are supported)");
    }
  }
  if (!header) throw ParseError(line_no, "missing header line");
  for (std::size_t v = 0; v < raw.vertex_count; ++v)
    if (!seen[v]) throw ValidationError("vertex " + std::to_string(v) + " is not declared");
  if (raw.edges.size() != raw.declared_edges)
    throw ValidationError("header declares " + std::to_string(raw.declared_edges) +
                          " edges, found " + std::to_string(raw.edges.size()));
  return raw;
}

}  // namespace detail

/// Reads a data graph. Vertices with an empty keyword list receive the dummy
/// keyword "0".
inline DataGraph read_graph(std::istream& in) {
  auto raw = detail::parse_raw(in);
  for (auto& ws : raw.words)
    if (ws.empty()) ws.emplace_back(kDummyKeyword);
  return graph_from_keyword_strings(raw.vertex_count, raw.edges, raw.words);
}

/// Reads a query graph whose keyword ids live in the id space of `data_dictionary`.
/// Keywords unknown to the data graph get fresh ids past its domain. Empty
/// keyword lists stay empty (they match any data vertex).
inline QueryGraph read_query(std::istream& in, const KeywordDictionary& data_dictionary) {
  auto raw = detail::parse_raw(in);
  auto q = graph_from_keyword_strings(raw.vertex_count, raw.edges, raw.words, data_dictionary);
  require_query_graph(q);
  return q;
}

inline void write_graph(std::ostream& out, const Graph& g) {
  out << "t " << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    out << "v " << v;
    auto ks = g.keywords(v);
    for (std::size_t i = 0; i < ks.size(); ++i)
      out << (i == 0 ? ' ' : ',') << g.dictionary().name(ks[i]);
    out << '\n';
  }
  for (auto [u, v] : g.edges()) out << "e " << u << ' ' << v << '\n';
}

inline DataGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  return read_graph(in);
}

inline QueryGraph load_query_file(const std::string& path, const KeywordDictionary& dict) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open query file: " + path);
  return read_query(in, dict);
}

inline void save_graph_file(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file: " + path);
  write_graph(out, g);
}

}  // namespace s3and

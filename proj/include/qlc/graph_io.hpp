// Copyright 2026 The qlc Authors
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
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qlc/graph.hpp"

namespace qlc {

enum class GraphFormat { edge_list, graph6, json };

/// A graph plus the optional metadata the file formats can carry.
struct GraphFile {
    Graph graph;
    /// Original vertex labels when the input used non-integer names;
    /// labels[i] is the name of vertex i (first-seen order).
    std::vector<std::string> labels;
    /// Edge whose energy is the objective of a tree-like instance.
    std::optional<EdgeId> root_edge;
};

/// Edge-list text: one `u v [w]` per line, `#` starts a comment. Two comment
/// directives are recognized: `# n: N` fixes the vertex count and
/// `# root-edge: E` marks the objective edge. If any vertex token is not a
/// non-negative integer, every token is treated as a label and mapped to an
/// index in first-seen order.
GraphFile read_edge_list(std::istream &in);
void write_edge_list(std::ostream &out, const GraphFile &file);

/// One graph6 string (an optional `>>graph6<<` header is accepted).
Graph graph6_decode(std::string_view text);
/// Throws InvalidGraph for weighted graphs; graph6 only carries unit weights.
std::string graph6_encode(const Graph &g);
/// One graph per non-empty line.
std::vector<Graph> read_graph6_collection(std::istream &in);

/// `{"n": N, "edges": [[u, v, w], ...]}` with optional "labels" and
/// "root_edge"; `[u, v]` entries get unit weight.
GraphFile graph_from_json(const nlohmann::json &doc);
nlohmann::json graph_to_json(const GraphFile &file);

GraphFile load_graph(std::istream &in, GraphFormat format);
void save_graph(std::ostream &out, const GraphFile &file, GraphFormat format);

/// Format from the file extension: .g6/.graph6 -> graph6, .json -> json,
/// anything else -> edge list.
GraphFormat format_for_path(const std::filesystem::path &path);

/// Reads a file; a graph6 file with several lines yields its first graph.
GraphFile load_graph_file(const std::filesystem::path &path,
                          std::optional<GraphFormat> format = std::nullopt);

/// Every graph in a file: all lines of a graph6 collection, or the single
/// graph of the other formats.
std::vector<GraphFile>
load_graph_collection(const std::filesystem::path &path,
                      std::optional<GraphFormat> format = std::nullopt);

void save_graph_file(const std::filesystem::path &path, const GraphFile &file,
                     std::optional<GraphFormat> format = std::nullopt);

} // namespace qlc

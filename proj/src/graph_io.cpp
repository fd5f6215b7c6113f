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
#include "qlc/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "qlc/error.hpp"

namespace qlc {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) {
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') {
            ++j;
        }
        if (j > i) {
            out.push_back(s.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

std::optional<std::uint64_t> parse_uint(std::string_view s) {
    std::uint64_t value = 0;
    const auto *end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, value);
    if (res.ec != std::errc() || res.ptr != end) {
        return std::nullopt;
    }
    return value;
}

std::optional<double> parse_double(std::string_view s) {
    // std::from_chars for double is not available on every toolchain we
    // target; strtod on a bounded copy is.
    const std::string copy(s);
    char *end = nullptr;
    const double v = std::strtod(copy.c_str(), &end);
    if (end != copy.c_str() + copy.size() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct RawEdge {
    std::string_view a, b;
    double w;
    std::size_t line;
};

} // namespace

GraphFile read_edge_list(std::istream &in) {
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        lines.push_back(std::move(line));
    }

    std::optional<std::size_t> declared_n;
    std::optional<EdgeId> root_edge;
    std::vector<RawEdge> raw;
    bool label_mode = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        std::string_view line = lines[i];
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            const auto comment = trim(line.substr(hash + 1));
            auto directive = [&](std::string_view key)
                -> std::optional<std::uint64_t> {
                if (comment.substr(0, key.size()) != key) {
                    return std::nullopt;
                }
                const auto value = parse_uint(trim(comment.substr(key.size())));
                if (!value) {
                    throw ParseError("bad value in '" + std::string(comment) +
                                         "'",
                                     lineno);
                }
                return value;
            };
            if (auto n = directive("n:")) {
                declared_n = *n;
            } else if (auto r = directive("root-edge:")) {
                root_edge = static_cast<EdgeId>(*r);
            }
            line = line.substr(0, hash);
        }
        const auto tokens = split_ws(line);
        if (tokens.empty()) {
            continue;
        }
        if (tokens.size() != 2 && tokens.size() != 3) {
            throw ParseError("expected 'u v [w]'", lineno);
        }
        double w = 1.0;
        if (tokens.size() == 3) {
            const auto parsed = parse_double(tokens[2]);
            if (!parsed) {
                throw ParseError("bad weight '" + std::string(tokens[2]) + "'",
                                 lineno);
            }
            w = *parsed;
        }
        if (!parse_uint(tokens[0]) || !parse_uint(tokens[1])) {
            label_mode = true;
        }
        raw.push_back({tokens[0], tokens[1], w, lineno});
    }

    GraphFile out;
    std::vector<Edge> edges;
    edges.reserve(raw.size());
    std::size_t n = 0;
    if (label_mode) {
        std::unordered_map<std::string_view, Vertex> index;
        auto lookup = [&](std::string_view name) {
            auto [it, inserted] =
                index.emplace(name, static_cast<Vertex>(out.labels.size()));
            if (inserted) {
                out.labels.emplace_back(name);
            }
            return it->second;
        };
        for (const auto &r : raw) {
            const Vertex u = lookup(r.a);
            const Vertex v = lookup(r.b);
            edges.push_back({u, v, r.w});
        }
        n = out.labels.size();
        if (declared_n && *declared_n < n) {
            throw ParseError("more labels than the declared n", 1);
        }
        if (declared_n) {
            n = *declared_n;
        }
    } else {
        for (const auto &r : raw) {
            const auto u = *parse_uint(r.a);
            const auto v = *parse_uint(r.b);
            if (declared_n && (u >= *declared_n || v >= *declared_n)) {
                throw ParseError("vertex index >= n", r.line);
            }
            if (u > UINT32_MAX || v > UINT32_MAX) {
                throw ParseError("vertex index too large", r.line);
            }
            n = std::max<std::size_t>(n, std::max(u, v) + 1);
            edges.push_back(
                {static_cast<Vertex>(u), static_cast<Vertex>(v), r.w});
        }
        if (declared_n) {
            n = *declared_n;
        }
    }
    // Report the offending line for the invariant violations.
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i].u == edges[i].v) {
            throw ParseError("self-loop", raw[i].line);
        }
    }
    {
        std::unordered_map<std::uint64_t, std::size_t> seen;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const auto lo = std::min(edges[i].u, edges[i].v);
            const auto hi = std::max(edges[i].u, edges[i].v);
            const auto key = (std::uint64_t{lo} << 32) | hi;
            if (!seen.emplace(key, i).second) {
                throw ParseError("duplicate edge", raw[i].line);
            }
        }
    }
    out.graph = Graph(n, std::move(edges));
    if (root_edge && *root_edge >= out.graph.num_edges()) {
        throw ParseError("root-edge out of range", 1);
    }
    out.root_edge = root_edge;
    return out;
}

void write_edge_list(std::ostream &out, const GraphFile &file) {
    const Graph &g = file.graph;
    out << "# n: " << g.num_vertices() << '\n';
    if (file.root_edge) {
        out << "# root-edge: " << *file.root_edge << '\n';
    }
    const bool labelled = file.labels.size() == g.num_vertices() &&
                          !file.labels.empty();
    for (const auto &e : g.edges()) {
        if (labelled) {
            out << file.labels[e.u] << ' ' << file.labels[e.v];
        } else {
            out << e.u << ' ' << e.v;
        }
        if (e.w != 1.0) {
            out << ' ' << format_double(e.w);
        }
        out << '\n';
    }
}

Graph graph6_decode(std::string_view text) {
    text = trim(text);
    constexpr std::string_view header = ">>graph6<<";
    std::size_t base = 0;
    if (text.substr(0, header.size()) == header) {
        text.remove_prefix(header.size());
        base = header.size();
    }
    std::size_t pos = 0;
    auto next = [&]() -> std::uint32_t {
        if (pos >= text.size()) {
            throw ParseError("graph6 string truncated", base + pos);
        }
        const auto c = static_cast<unsigned char>(text[pos]);
        if (c < 63 || c > 126) {
            throw ParseError("graph6 byte out of range", base + pos);
        }
        ++pos;
        return c - 63U;
    };

    std::uint64_t n = next();
    if (n == 63) {
        n = 0;
        std::uint64_t first = next();
        if (first == 63) {
            for (int i = 0; i < 6; ++i) {
                n = (n << 6) | next();
            }
        } else {
            n = first;
            for (int i = 0; i < 2; ++i) {
                n = (n << 6) | next();
            }
        }
    }
    if (n > UINT32_MAX) {
        throw ParseError("graph6 vertex count too large", base);
    }

    std::vector<Edge> edges;
    std::uint32_t chunk = 0;
    int bits_left = 0;
    for (std::uint64_t j = 1; j < n; ++j) {
        for (std::uint64_t i = 0; i < j; ++i) {
            if (bits_left == 0) {
                chunk = next();
                bits_left = 6;
            }
            --bits_left;
            if ((chunk >> bits_left) & 1U) {
                edges.push_back(
                    {static_cast<Vertex>(i), static_cast<Vertex>(j), 1.0});
            }
        }
    }
    if (pos != text.size()) {
        throw ParseError("trailing bytes after graph6 payload", base + pos);
    }
    return Graph(n, std::move(edges));
}

std::string graph6_encode(const Graph &g) {
    if (!g.is_unweighted()) {
        throw InvalidGraph("graph6 cannot represent edge weights");
    }
    const std::uint64_t n = g.num_vertices();
    std::string out;
    if (n < 63) {
        out.push_back(static_cast<char>(63 + n));
    } else if (n < 258048) {
        out.push_back(126);
        for (int s = 12; s >= 0; s -= 6) {
            out.push_back(static_cast<char>(63 + ((n >> s) & 63U)));
        }
    } else {
        out.push_back(126);
        out.push_back(126);
        for (int s = 30; s >= 0; s -= 6) {
            out.push_back(static_cast<char>(63 + ((n >> s) & 63U)));
        }
    }
    std::uint32_t chunk = 0;
    int filled = 0;
    for (std::uint64_t j = 1; j < n; ++j) {
        for (std::uint64_t i = 0; i < j; ++i) {
            chunk = (chunk << 1) |
                    (g.has_edge(static_cast<Vertex>(i), static_cast<Vertex>(j))
                         ? 1U
                         : 0U);
            if (++filled == 6) {
                out.push_back(static_cast<char>(63 + chunk));
                chunk = 0;
                filled = 0;
            }
        }
    }
    if (filled > 0) {
        out.push_back(static_cast<char>(63 + (chunk << (6 - filled))));
    }
    return out;
}

std::vector<Graph> read_graph6_collection(std::istream &in) {
    std::vector<Graph> out;
    std::size_t offset = 0;
    for (std::string line; std::getline(in, line);) {
        const auto len = line.size() + 1;
        if (!trim(line).empty()) {
            try {
                out.push_back(graph6_decode(line));
            } catch (const ParseError &e) {
                throw ParseError(std::string("graph6 line ") +
                                     std::to_string(out.size() + 1) + ": " +
                                     e.what(),
                                 offset + e.position());
            }
        }
        offset += len;
    }
    return out;
}

GraphFile graph_from_json(const nlohmann::json &doc) {
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("edges")) {
        throw ParseError("graph JSON needs 'n' and 'edges'", 0);
    }
    if (!doc["n"].is_number_unsigned()) {
        throw ParseError("'n' must be a non-negative integer", 0);
    }
    const auto n = doc["n"].get<std::uint64_t>();
    std::vector<Edge> edges;
    const auto &list = doc["edges"];
    if (!list.is_array()) {
        throw ParseError("'edges' must be an array", 0);
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
        const auto &item = list[i];
        if (!item.is_array() || (item.size() != 2 && item.size() != 3) ||
            !item[0].is_number_unsigned() || !item[1].is_number_unsigned() ||
            (item.size() == 3 && !item[2].is_number())) {
            throw ParseError("edge entry must be [u, v] or [u, v, w]", i);
        }
        const auto u = item[0].get<std::uint64_t>();
        const auto v = item[1].get<std::uint64_t>();
        if (u >= n || v >= n) {
            throw ParseError("vertex index >= n in edge entry", i);
        }
        const double w = item.size() == 3 ? item[2].get<double>() : 1.0;
        edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), w});
    }
    GraphFile out;
    try {
        out.graph = Graph(n, std::move(edges));
    } catch (const InvalidGraph &e) {
        throw ParseError(e.what(), 0);
    }
    if (doc.contains("labels")) {
        out.labels = doc["labels"].get<std::vector<std::string>>();
        if (out.labels.size() != n) {
            throw ParseError("'labels' length differs from n", 0);
        }
    }
    if (doc.contains("root_edge") && !doc["root_edge"].is_null()) {
        const auto r = doc["root_edge"].get<std::uint64_t>();
        if (r >= out.graph.num_edges()) {
            throw ParseError("'root_edge' out of range", 0);
        }
        out.root_edge = static_cast<EdgeId>(r);
    }
    return out;
}

nlohmann::json graph_to_json(const GraphFile &file) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto &e : file.graph.edges()) {
        edges.push_back({e.u, e.v, e.w});
    }
    nlohmann::json doc = {{"n", file.graph.num_vertices()}, {"edges", edges}};
    if (!file.labels.empty()) {
        doc["labels"] = file.labels;
    }
    if (file.root_edge) {
        doc["root_edge"] = *file.root_edge;
    }
    return doc;
}

GraphFile load_graph(std::istream &in, GraphFormat format) {
    switch (format) {
    case GraphFormat::edge_list:
        return read_edge_list(in);
    case GraphFormat::graph6: {
        std::string line;
        while (std::getline(in, line)) {
            if (!trim(line).empty()) {
                return {graph6_decode(line), {}, std::nullopt};
            }
        }
        throw ParseError("empty graph6 input", 0);
    }
    case GraphFormat::json: {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error &e) {
            throw ParseError(e.what(), e.byte);
        }
        return graph_from_json(doc);
    }
    }
    throw Error("unknown graph format");
}

void save_graph(std::ostream &out, const GraphFile &file, GraphFormat format) {
    switch (format) {
    case GraphFormat::edge_list:
        write_edge_list(out, file);
        return;
    case GraphFormat::graph6:
        out << graph6_encode(file.graph) << '\n';
        return;
    case GraphFormat::json:
        out << graph_to_json(file).dump() << '\n';
        return;
    }
}

GraphFormat format_for_path(const std::filesystem::path &path) {
    const auto ext = path.extension().string();
    if (ext == ".g6" || ext == ".graph6") {
        return GraphFormat::graph6;
    }
    if (ext == ".json") {
        return GraphFormat::json;
    }
    return GraphFormat::edge_list;
}

GraphFile load_graph_file(const std::filesystem::path &path,
                          std::optional<GraphFormat> format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open graph file '" + path.string() + "'");
    }
    return load_graph(in, format.value_or(format_for_path(path)));
}

std::vector<GraphFile>
load_graph_collection(const std::filesystem::path &path,
                      std::optional<GraphFormat> format) {
    const auto fmt = format.value_or(format_for_path(path));
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open graph file '" + path.string() + "'");
    }
    std::vector<GraphFile> out;
    if (fmt == GraphFormat::graph6) {
        for (auto &g : read_graph6_collection(in)) {
            out.push_back({std::move(g), {}, std::nullopt});
        }
    } else {
        out.push_back(load_graph(in, fmt));
    }
    return out;
}

void save_graph_file(const std::filesystem::path &path, const GraphFile &file,
                     std::optional<GraphFormat> format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write graph file '" + path.string() + "'");
    }
    save_graph(out, file, format.value_or(format_for_path(path)));
}

} // namespace qlc

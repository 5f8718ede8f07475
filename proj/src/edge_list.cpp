#include "latentbench/edge_list.hpp"

#include "latentbench/csv.hpp"
#include "latentbench/errors.hpp"

#include <algorithm>
#include <charconv>

namespace latentbench {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

int parse_vertex(std::string_view token, std::size_t line) {
    int v = -1;
    auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size() || v < 0)
        throw ParseError(line, "bad vertex index '" + std::string(token) + "'");
    return v;
}

std::vector<int> parse_index_list(std::string_view value, std::size_t line) {
    std::vector<int> out;
    for (auto token : split_ws(value)) out.push_back(parse_vertex(token, line));
    return out;
}

std::string join(const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += ' ';
        out += std::to_string(values[i]);
    }
    return out;
}

std::string meta_lines(const std::map<std::string, std::string>& meta) {
    std::string out;
    for (const auto& [key, value] : meta) out += "# " + key + ": " + value + "\n";
    return out;
}

}  // namespace

EdgeList parse_edge_list(std::string_view text) {
    EdgeList out;
    bool have_vertices = false;
    int max_index = -1;
    std::size_t line_no = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        auto line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty()) continue;
        if (line.front() == '#') {
            auto body = trim(line.substr(1));
            auto colon = body.find(':');
            if (colon == std::string_view::npos) continue;
            auto key = std::string(trim(body.substr(0, colon)));
            auto value = trim(body.substr(colon + 1));
            if (key == "vertices") {
                out.vertices = parse_vertex(value, line_no);
                have_vertices = true;
            } else if (key == "hidden") {
                out.hidden = parse_index_list(value, line_no);
            } else if (key == "macro") {
                out.macro = parse_index_list(value, line_no);
            } else {
                out.meta[key] = std::string(value);
            }
            continue;
        }
        auto tokens = split_ws(line);
        if (tokens.size() < 3) throw ParseError(line_no, "expected 'u -> v [w]' or 'u <-> v'");
        int u = parse_vertex(tokens[0], line_no);
        int v = parse_vertex(tokens[2], line_no);
        max_index = std::max({max_index, u, v});
        if (tokens[1] == "->") {
            if (tokens.size() > 4) throw ParseError(line_no, "trailing tokens after weight");
            double w = 1.0;
            if (tokens.size() == 4) {
                try {
                    w = parse_double(tokens[3]);
                } catch (const InvalidRange& e) {
                    throw ParseError(line_no, e.what());
                }
            }
            out.directed.push_back({{u, v}, w});
        } else if (tokens[1] == "<->") {
            if (tokens.size() != 3) throw ParseError(line_no, "bidirected edges carry no weight");
            out.bidirected.emplace_back(u, v);
        } else {
            throw ParseError(line_no, "unknown edge mark '" + std::string(tokens[1]) + "'");
        }
    }
    for (int h : out.hidden) max_index = std::max(max_index, h);
    if (!have_vertices) out.vertices = std::max<int>(max_index + 1, static_cast<int>(out.macro.size()));
    if (max_index >= out.vertices)
        throw ParseError(line_no, "vertex index exceeds declared vertex count");
    if (!out.macro.empty() && static_cast<int>(out.macro.size()) != out.vertices)
        throw ParseError(line_no, "macro line length does not match vertex count");
    return out;
}

Dag EdgeList::to_dag() const {
    if (!bidirected.empty()) throw InvariantViolation("a DAG cannot carry bidirected edges");
    Matrix w = Matrix::Zero(vertices, vertices);
    for (const auto& e : directed) w(e.edge.head, e.edge.tail) = e.weight;
    std::vector<VertexLabel> labels(vertices);
    for (int v = 0; v < vertices && v < static_cast<int>(macro.size()); ++v) labels[v].macro_id = macro[v];
    for (int h : hidden) labels[h].hidden = true;
    return Dag(std::move(w), std::move(labels));
}

Admg EdgeList::to_admg() const {
    std::vector<Edge> d;
    d.reserve(directed.size());
    for (const auto& e : directed) d.push_back(e.edge);
    return Admg(vertices, std::move(d), bidirected);
}

std::string format_dag(const Dag& dag, const std::map<std::string, std::string>& meta) {
    std::string out = "# vertices: " + std::to_string(dag.size()) + "\n";
    out += "# hidden:" + join(members(dag.hidden_set())) + "\n";
    std::vector<int> macro;
    for (const auto& l : dag.labels()) macro.push_back(l.macro_id);
    out += "# macro:" + join(macro) + "\n";
    out += meta_lines(meta);
    for (const auto& e : dag.edges())
        out += std::to_string(e.tail) + " -> " + std::to_string(e.head) + " " +
               format_double(dag.weight(e.tail, e.head)) + "\n";
    return out;
}

std::string format_admg(const Admg& g, const std::map<std::string, std::string>& meta) {
    std::string out = "# vertices: " + std::to_string(g.size()) + "\n";
    out += meta_lines(meta);
    for (const auto& e : g.directed())
        out += std::to_string(e.tail) + " -> " + std::to_string(e.head) + "\n";
    for (const auto& e : g.bidirected())
        out += std::to_string(e.first) + " <-> " + std::to_string(e.second) + "\n";
    return out;
}

}  // namespace latentbench

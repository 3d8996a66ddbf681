#include "cvdp/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "cvdp/common.hpp"

namespace cvdp {

namespace {

constexpr std::array<const char*, 4> kKindNames = {"class", "interface", "enum", "annotation"};
constexpr std::array<const char*, kEdgeTypeCount> kEdgeNames = {"E",  "I", "R", "V",   "CM",
                                                               "OI", "A", "P", "SCM", "SMC"};

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& msg) {
    throw Error(ErrorKind::Parse, path + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

const char* type_kind_name(TypeKind k) {
    return kKindNames[static_cast<std::size_t>(k)];
}

std::optional<TypeKind> parse_type_kind(std::string_view token) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i)
        if (token == kKindNames[i]) return static_cast<TypeKind>(i);
    return std::nullopt;
}

const char* edge_type_name(EdgeType t) {
    return kEdgeNames[static_cast<std::size_t>(t)];
}

std::optional<EdgeType> parse_edge_type(std::string_view token) {
    for (std::size_t i = 0; i < kEdgeNames.size(); ++i)
        if (token == kEdgeNames[i]) return static_cast<EdgeType>(i);
    return std::nullopt;
}

CdnGraph::CdnGraph(std::vector<CdnNode> nodes, std::vector<CdnEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
    for (std::size_t i = 1; i < nodes_.size(); ++i)
        if (nodes_[i].name == nodes_[i - 1].name)
            throw Error(ErrorKind::InvalidArgument, "duplicate node name: " + nodes_[i].name);
    for (const auto& e : edges_) {
        if (e.from == e.to)
            throw Error(ErrorKind::InvalidArgument, "self-loop on node: " + e.from);
        if (!has_node(e.from) || !has_node(e.to))
            throw Error(ErrorKind::InvalidArgument,
                        "edge references unknown node: " + e.from + " -> " + e.to);
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool CdnGraph::has_node(std::string_view name) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), name,
                               [](const CdnNode& n, std::string_view v) { return n.name < v; });
    return it != nodes_.end() && it->name == name;
}

SimpleDigraph::SimpleDigraph(std::vector<std::string> names,
                             std::vector<std::pair<int, int>> edges) {
    std::vector<int> order(names.size());
    std::vector<std::size_t> idx(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return names[a] < names[b]; });
    names_.reserve(names.size());
    for (std::size_t rank = 0; rank < idx.size(); ++rank) {
        if (rank > 0 && names[idx[rank]] == names_[rank - 1])
            throw Error(ErrorKind::InvalidArgument, "duplicate node name: " + names[idx[rank]]);
        order[idx[rank]] = static_cast<int>(rank);
        names_.push_back(std::move(names[idx[rank]]));
    }
    out_.assign(names_.size(), {});
    in_.assign(names_.size(), {});
    for (auto [f, t] : edges) {
        if (f < 0 || t < 0 || f >= static_cast<int>(names_.size()) ||
            t >= static_cast<int>(names_.size()))
            throw Error(ErrorKind::InvalidArgument, "edge index out of range");
        if (f == t) throw Error(ErrorKind::InvalidArgument, "self-loop rejected");
        out_[order[f]].push_back(order[t]);
        in_[order[t]].push_back(order[f]);
    }
    for (auto& v : out_) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        edge_count_ += v.size();
    }
    for (auto& v : in_) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
}

bool SimpleDigraph::has_edge(int from, int to) const {
    const auto& o = out_[from];
    return std::binary_search(o.begin(), o.end(), to);
}

int SimpleDigraph::index_of(std::string_view name) const {
    auto it = std::lower_bound(names_.begin(), names_.end(), name);
    if (it == names_.end() || *it != name) return -1;
    return static_cast<int>(it - names_.begin());
}

SimpleDigraph strip(const CdnGraph& g) {
    std::unordered_map<std::string_view, int> index;
    std::vector<std::string> names;
    names.reserve(g.nodes().size());
    for (const auto& n : g.nodes()) {
        index.emplace(n.name, static_cast<int>(names.size()));
        names.push_back(n.name);
    }
    std::vector<std::pair<int, int>> edges;
    edges.reserve(g.edges().size());
    for (const auto& e : g.edges()) edges.emplace_back(index.at(e.from), index.at(e.to));
    return SimpleDigraph(std::move(names), std::move(edges));
}

std::string cdn_to_string(const CdnGraph& g) {
    std::ostringstream out;
    out << "cdn v1\n";
    for (const auto& n : g.nodes()) out << "N " << n.name << ' ' << type_kind_name(n.kind) << '\n';
    for (const auto& e : g.edges())
        out << "E " << e.from << ' ' << e.to << ' ' << edge_type_name(e.type) << '\n';
    return out.str();
}

std::string digraph_to_string(const SimpleDigraph& g) {
    std::ostringstream out;
    out << "digraph v1\n";
    for (const auto& n : g.names()) out << "N " << n << '\n';
    for (std::size_t u = 0; u < g.node_count(); ++u)
        for (int v : g.out_neighbors(static_cast<int>(u)))
            out << "E " << g.names()[u] << ' ' << g.names()[v] << '\n';
    return out.str();
}

namespace {

void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open for writing: " + path);
    out << body;
    if (!out) throw Error(ErrorKind::Io, "write failed: " + path);
}

struct GraphLines {
    std::string header;
    // (line number, fields) for every non-comment record
    std::vector<std::pair<int, std::vector<std::string>>> records;
};

GraphLines read_graph_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open graph file: " + path);
    GraphLines result;
    std::string line;
    int lineno = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        auto fields = split_ws(line);
        if (fields.empty()) continue;
        if (!saw_header) {
            if (fields.size() != 2 || fields[1] != "v1")
                parse_fail(path, lineno, "expected header '<format> v1'");
            result.header = fields[0];
            saw_header = true;
            continue;
        }
        result.records.emplace_back(lineno, std::move(fields));
    }
    if (!saw_header) parse_fail(path, lineno == 0 ? 1 : lineno, "missing header line");
    return result;
}

CdnGraph cdn_from_lines(const std::string& path, const GraphLines& lines) {
    std::vector<CdnNode> nodes;
    std::vector<CdnEdge> edges;
    for (const auto& [lineno, f] : lines.records) {
        if (f[0] == "N") {
            if (f.size() != 3) parse_fail(path, lineno, "node record needs '<fqn> <kind>'");
            auto kind = parse_type_kind(f[2]);
            if (!kind) parse_fail(path, lineno, "unknown type kind '" + f[2] + "'");
            nodes.push_back({f[1], *kind});
        } else if (f[0] == "E") {
            if (f.size() != 4) parse_fail(path, lineno, "edge record needs '<from> <to> <type>'");
            auto type = parse_edge_type(f[3]);
            if (!type) parse_fail(path, lineno, "unknown edge type '" + f[3] + "'");
            edges.push_back({f[1], f[2], *type});
        } else {
            parse_fail(path, lineno, "unknown record '" + f[0] + "'");
        }
    }
    try {
        return CdnGraph(std::move(nodes), std::move(edges));
    } catch (const Error& e) {
        throw Error(ErrorKind::Parse, path + ": " + e.what());
    }
}

SimpleDigraph digraph_from_lines(const std::string& path, const GraphLines& lines) {
    std::vector<std::string> names;
    std::unordered_map<std::string, int> index;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::pair<int, std::pair<std::string, std::string>>> raw_edges;
    for (const auto& [lineno, f] : lines.records) {
        if (f[0] == "N") {
            if (f.size() != 2) parse_fail(path, lineno, "node record needs '<fqn>'");
            if (!index.emplace(f[1], static_cast<int>(names.size())).second)
                parse_fail(path, lineno, "duplicate node '" + f[1] + "'");
            names.push_back(f[1]);
        } else if (f[0] == "E") {
            if (f.size() != 3) parse_fail(path, lineno, "edge record needs '<from> <to>'");
            raw_edges.emplace_back(lineno, std::make_pair(f[1], f[2]));
        } else {
            parse_fail(path, lineno, "unknown record '" + f[0] + "'");
        }
    }
    for (const auto& [lineno, e] : raw_edges) {
        auto fit = index.find(e.first);
        auto tit = index.find(e.second);
        if (fit == index.end()) parse_fail(path, lineno, "edge references unknown node '" + e.first + "'");
        if (tit == index.end()) parse_fail(path, lineno, "edge references unknown node '" + e.second + "'");
        if (fit->second == tit->second) parse_fail(path, lineno, "self-loop on '" + e.first + "'");
        edges.emplace_back(fit->second, tit->second);
    }
    return SimpleDigraph(std::move(names), std::move(edges));
}

}  // namespace

void write_cdn_file(const CdnGraph& g, const std::string& path) {
    write_text_file(path, cdn_to_string(g));
}

void write_digraph_file(const SimpleDigraph& g, const std::string& path) {
    write_text_file(path, digraph_to_string(g));
}

CdnGraph read_cdn_file(const std::string& path) {
    auto lines = read_graph_lines(path);
    if (lines.header != "cdn")
        throw Error(ErrorKind::Parse, path + ": expected 'cdn v1' header, got '" + lines.header + "'");
    return cdn_from_lines(path, lines);
}

SimpleDigraph read_digraph_file(const std::string& path) {
    auto lines = read_graph_lines(path);
    if (lines.header != "digraph")
        throw Error(ErrorKind::Parse,
                    path + ": expected 'digraph v1' header, got '" + lines.header + "'");
    return digraph_from_lines(path, lines);
}

std::variant<CdnGraph, SimpleDigraph> read_graph_file(const std::string& path) {
    auto lines = read_graph_lines(path);
    if (lines.header == "cdn") return cdn_from_lines(path, lines);
    if (lines.header == "digraph") return digraph_from_lines(path, lines);
    throw Error(ErrorKind::Parse, path + ": unknown graph format '" + lines.header + "'");
}

SimpleDigraph load_digraph(const std::string& path) {
    auto g = read_graph_file(path);
    if (std::holds_alternative<SimpleDigraph>(g)) return std::get<SimpleDigraph>(std::move(g));
    return strip(std::get<CdnGraph>(g));
}

}  // namespace cvdp

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cvdp {

enum class TypeKind : std::uint8_t { Class, Interface, Enum, Annotation };

const char* type_kind_name(TypeKind k);
std::optional<TypeKind> parse_type_kind(std::string_view token);

/// The ten source-level relation kinds a class dependency edge can carry.
enum class EdgeType : std::uint8_t {
    Extends,            // E
    Implements,         // I
    ReturnType,         // R
    Variable,           // V
    ClassMember,        // CM
    ObjectInstantiation,// OI
    Annotation,         // A
    Parameter,          // P
    StaticClassMember,  // SCM
    StaticMethodCall,   // SMC
};

inline constexpr int kEdgeTypeCount = 10;

const char* edge_type_name(EdgeType t);
std::optional<EdgeType> parse_edge_type(std::string_view token);

struct CdnNode {
    std::string name;  // fully-qualified type name; nested types use '.'
    TypeKind kind = TypeKind::Class;

    auto operator<=>(const CdnNode&) const = default;
};

struct CdnEdge {
    std::string from;
    std::string to;
    EdgeType type = EdgeType::Extends;

    auto operator<=>(const CdnEdge&) const = default;
};

/// Directed typed dependency graph of a source tree. Parallel edges between an
/// ordered node pair carry distinct types; self-loops are never stored.
class CdnGraph {
public:
    CdnGraph() = default;
    CdnGraph(std::vector<CdnNode> nodes, std::vector<CdnEdge> edges);

    const std::vector<CdnNode>& nodes() const { return nodes_; }
    const std::vector<CdnEdge>& edges() const { return edges_; }
    bool has_node(std::string_view name) const;

    bool operator==(const CdnGraph&) const = default;

private:
    std::vector<CdnNode> nodes_;  // sorted by name
    std::vector<CdnEdge> edges_;  // sorted by (from, to, type), deduplicated
};

/// Unweighted simple digraph: at most one edge per ordered pair, antiparallel
/// pairs allowed. Node order is the canonical (sorted) name order.
class SimpleDigraph {
public:
    SimpleDigraph() = default;
    SimpleDigraph(std::vector<std::string> names, std::vector<std::pair<int, int>> edges);

    const std::vector<std::string>& names() const { return names_; }
    std::size_t node_count() const { return names_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    const std::vector<int>& out_neighbors(int node) const { return out_[node]; }
    const std::vector<int>& in_neighbors(int node) const { return in_[node]; }
    bool has_edge(int from, int to) const;
    int index_of(std::string_view name) const;  // -1 when absent
    int degree(int node) const { return static_cast<int>(out_[node].size() + in_[node].size()); }

    bool operator==(const SimpleDigraph& other) const {
        return names_ == other.names_ && out_ == other.out_;
    }

private:
    std::vector<std::string> names_;
    std::vector<std::vector<int>> out_;  // sorted successor indices
    std::vector<std::vector<int>> in_;   // sorted predecessor indices
    std::size_t edge_count_ = 0;
};

/// Collapses typed parallel edges onto single directed connections; node set
/// is preserved exactly, including isolated nodes.
SimpleDigraph strip(const CdnGraph& g);

void write_cdn_file(const CdnGraph& g, const std::string& path);
void write_digraph_file(const SimpleDigraph& g, const std::string& path);
CdnGraph read_cdn_file(const std::string& path);
SimpleDigraph read_digraph_file(const std::string& path);

/// Reads either graph flavor, dispatching on the header line.
std::variant<CdnGraph, SimpleDigraph> read_graph_file(const std::string& path);

/// Reads whichever flavor `path` holds and returns the stripped digraph.
SimpleDigraph load_digraph(const std::string& path);

std::string cdn_to_string(const CdnGraph& g);
std::string digraph_to_string(const SimpleDigraph& g);

}  // namespace cvdp

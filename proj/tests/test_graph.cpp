#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "cvdp/common.hpp"
#include "cvdp/graph.hpp"

using namespace cvdp;

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
}

CdnGraph fig_cdn() {
    std::vector<CdnNode> nodes = {
        {"Ac", TypeKind::Class},
        {"Bc", TypeKind::Class},
        {"Cc", TypeKind::Class},
        {"Ifc", TypeKind::Interface},
    };
    std::vector<CdnEdge> edges = {
        {"Ac", "Ifc", EdgeType::Implements},
        {"Ac", "Cc", EdgeType::ClassMember},
        {"Ac", "Cc", EdgeType::ObjectInstantiation},
        {"Bc", "Ac", EdgeType::Extends},
        {"Bc", "Cc", EdgeType::ReturnType},
        {"Bc", "Cc", EdgeType::Parameter},
        {"Bc", "Ifc", EdgeType::Parameter},
    };
    return CdnGraph(std::move(nodes), std::move(edges));
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("stripping the four-class example yields five directed edges") {
    SimpleDigraph d = strip(fig_cdn());
    CHECK(d.node_count() == 4);
    CHECK(d.edge_count() == 5);
    auto at = [&](const char* n) { return d.index_of(n); };
    CHECK(d.has_edge(at("Ac"), at("Ifc")));
    CHECK(d.has_edge(at("Ac"), at("Cc")));
    CHECK(d.has_edge(at("Bc"), at("Ac")));
    CHECK(d.has_edge(at("Bc"), at("Cc")));
    CHECK(d.has_edge(at("Bc"), at("Ifc")));
    CHECK(!d.has_edge(at("Cc"), at("Ac")));
}

TEST_CASE("parallel typed edges collapse to a single connection") {
    CdnGraph g({{"A", TypeKind::Class}, {"B", TypeKind::Class}},
               {{"A", "B", EdgeType::ClassMember}, {"A", "B", EdgeType::ObjectInstantiation}});
    SimpleDigraph d = strip(g);
    CHECK(d.edge_count() == 1);
    CHECK(d.has_edge(d.index_of("A"), d.index_of("B")));
}

TEST_CASE("antiparallel edges survive stripping") {
    CdnGraph g({{"A", TypeKind::Class}, {"B", TypeKind::Class}},
               {{"A", "B", EdgeType::Variable}, {"B", "A", EdgeType::Variable}});
    SimpleDigraph d = strip(g);
    CHECK(d.edge_count() == 2);
    CHECK(d.has_edge(d.index_of("A"), d.index_of("B")));
    CHECK(d.has_edge(d.index_of("B"), d.index_of("A")));
}

TEST_CASE("isolated nodes are preserved by stripping") {
    CdnGraph g({{"A", TypeKind::Class}, {"B", TypeKind::Enum}}, {});
    SimpleDigraph d = strip(g);
    CHECK(d.node_count() == 2);
    CHECK(d.edge_count() == 0);
}

TEST_CASE("cdn file round-trip is identity") {
    CdnGraph g = fig_cdn();
    auto path = temp_path("cvdp_test_roundtrip.cdn");
    write_cdn_file(g, path);
    CdnGraph back = read_cdn_file(path);
    CHECK(back == g);
    std::remove(path.c_str());
}

TEST_CASE("digraph file round-trip is identity") {
    SimpleDigraph d = strip(fig_cdn());
    auto path = temp_path("cvdp_test_roundtrip.dg");
    write_digraph_file(d, path);
    SimpleDigraph back = read_digraph_file(path);
    CHECK(back == d);
    std::remove(path.c_str());
}

TEST_CASE("empty graph writes a header-only file and reads back empty") {
    CdnGraph g;
    auto path = temp_path("cvdp_test_empty.cdn");
    write_cdn_file(g, path);
    {
        std::ifstream in(path);
        std::string line;
        std::getline(in, line);
        CHECK(line == "cdn v1");
        CHECK(!std::getline(in, line));
    }
    CdnGraph back = read_cdn_file(path);
    CHECK(back.nodes().empty());
    CHECK(back.edges().empty());
    std::remove(path.c_str());
}

TEST_CASE("unknown edge-type token reports the token and line") {
    auto path = temp_path("cvdp_test_badtype.cdn");
    write_file(path, "cdn v1\nN A class\nN B class\nE A B XX\n");
    try {
        read_cdn_file(path);
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        std::string msg = e.what();
        CHECK(msg.find("XX") != std::string::npos);
        CHECK(msg.find(":4") != std::string::npos);
    }
    std::remove(path.c_str());
}

TEST_CASE("malformed records fail with line numbers") {
    auto path = temp_path("cvdp_test_badrec.cdn");
    SUBCASE("unknown record tag") {
        write_file(path, "cdn v1\nQ A class\n");
    }
    SUBCASE("wrong field count") {
        write_file(path, "cdn v1\nN A\n");
    }
    SUBCASE("bad kind") {
        write_file(path, "cdn v1\nN A struct\n");
    }
    CHECK_THROWS_WITH_AS(read_cdn_file(path), doctest::Contains(":2"), Error);
    std::remove(path.c_str());
}

TEST_CASE("digraph reader rejects duplicates, self-loops, unknown endpoints") {
    auto path = temp_path("cvdp_test_baddg.dg");
    SUBCASE("duplicate node") {
        write_file(path, "digraph v1\nN A\nN A\n");
        CHECK_THROWS_WITH_AS(read_digraph_file(path), doctest::Contains("duplicate"), Error);
    }
    SUBCASE("self-loop") {
        write_file(path, "digraph v1\nN A\nE A A\n");
        CHECK_THROWS_WITH_AS(read_digraph_file(path), doctest::Contains("self-loop"), Error);
    }
    SUBCASE("unknown endpoint") {
        write_file(path, "digraph v1\nN A\nE A B\n");
        CHECK_THROWS_WITH_AS(read_digraph_file(path), doctest::Contains("unknown node"), Error);
    }
    std::remove(path.c_str());
}

TEST_CASE("comments, blank lines, and CRLF are tolerated") {
    auto path = temp_path("cvdp_test_comments.cdn");
    write_file(path,
               "# leading comment\n"
               "cdn v1\r\n"
               "\n"
               "N A class  # trailing comment\n"
               "N B interface\n"
               "E A B I\n");
    CdnGraph g = read_cdn_file(path);
    CHECK(g.nodes().size() == 2);
    CHECK(g.edges().size() == 1);
    CHECK(g.edges()[0].type == EdgeType::Implements);
    std::remove(path.c_str());
}

TEST_CASE("read_graph_file dispatches on the header") {
    auto cdn_path = temp_path("cvdp_test_dispatch.cdn");
    auto dg_path = temp_path("cvdp_test_dispatch.dg");
    write_cdn_file(fig_cdn(), cdn_path);
    write_digraph_file(strip(fig_cdn()), dg_path);
    CHECK(std::holds_alternative<CdnGraph>(read_graph_file(cdn_path)));
    CHECK(std::holds_alternative<SimpleDigraph>(read_graph_file(dg_path)));
    CHECK(load_digraph(cdn_path) == strip(fig_cdn()));
    CHECK(load_digraph(dg_path) == strip(fig_cdn()));
    std::remove(cdn_path.c_str());
    std::remove(dg_path.c_str());
}

TEST_CASE("self-loops and unknown endpoints are rejected at construction") {
    CHECK_THROWS_AS(CdnGraph({{"A", TypeKind::Class}}, {{"A", "A", EdgeType::Extends}}), Error);
    CHECK_THROWS_AS(CdnGraph({{"A", TypeKind::Class}}, {{"A", "B", EdgeType::Extends}}), Error);
}

TEST_CASE("strip on random multigraphs matches a brute-force pair count") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 2 + static_cast<int>(rng() % 8);
        std::vector<CdnNode> nodes;
        for (int i = 0; i < n; ++i)
            nodes.push_back({"n" + std::to_string(i), TypeKind::Class});
        int m = static_cast<int>(rng() % 40);
        std::vector<CdnEdge> edges;
        std::set<std::pair<std::string, std::string>> pairs;
        for (int e = 0; e < m; ++e) {
            int u = static_cast<int>(rng() % n);
            int v = static_cast<int>(rng() % n);
            if (u == v) continue;
            auto type = static_cast<EdgeType>(rng() % kEdgeTypeCount);
            edges.push_back({nodes[u].name, nodes[v].name, type});
            pairs.insert({nodes[u].name, nodes[v].name});
        }
        CdnGraph g(nodes, edges);
        SimpleDigraph d = strip(g);
        CHECK(d.edge_count() == pairs.size());
        CHECK(d.edge_count() <= g.edges().size());
        // per-node degree against brute force
        for (int i = 0; i < n; ++i) {
            std::size_t expect = 0;
            for (const auto& p : pairs)
                if (p.first == nodes[i].name || p.second == nodes[i].name) ++expect;
            int idx = d.index_of(nodes[i].name);
            REQUIRE(idx >= 0);
            CHECK(static_cast<std::size_t>(d.degree(idx)) == expect);
        }
        // stripping is stable: serializing and reloading changes nothing
        auto path = temp_path("cvdp_test_strip_prop.dg");
        write_digraph_file(d, path);
        CHECK(read_digraph_file(path) == d);
        std::remove(path.c_str());
    }
}

TEST_CASE("equality iff no parallel edges") {
    CdnGraph no_parallel({{"A", TypeKind::Class}, {"B", TypeKind::Class}},
                         {{"A", "B", EdgeType::Extends}, {"B", "A", EdgeType::Variable}});
    CHECK(strip(no_parallel).edge_count() == no_parallel.edges().size());
    CdnGraph with_parallel({{"A", TypeKind::Class}, {"B", TypeKind::Class}},
                           {{"A", "B", EdgeType::Extends}, {"A", "B", EdgeType::Variable}});
    CHECK(strip(with_parallel).edge_count() < with_parallel.edges().size());
}

}  // TEST_SUITE

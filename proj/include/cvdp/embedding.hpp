#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cvdp/common.hpp"
#include "cvdp/graph.hpp"

namespace cvdp {

struct Node2vecParams {
    double p = 1.0;
    double q = 1.0;
    int walks_per_node = 10;
    int walk_length = 80;
    int window = 10;
    int negatives = 5;
    int epochs = 1;
    double learning_rate = 0.025;
};

struct Line2Params {
    int negatives = 5;
    long long sample_count = -1;  // -1 = 100 * |E|
    double learning_rate = 0.025;
};

struct EmbedConfig {
    std::string algorithm = "node2vec";  // node2vec | line2
    int dim = 32;
    Node2vecParams node2vec;
    Line2Params line2;
    std::uint64_t seed = 0;

    void validate() const;  // throws Error(Config)
};

/// Per-node embedding vectors; node_ids are sorted and unique.
struct EmbeddingMatrix {
    std::vector<std::string> node_ids;
    std::vector<std::vector<double>> vectors;  // parallel to node_ids, each dim long
    int dim = 0;
    std::string algorithm;
    std::uint64_t seed = 0;

    int index_of(std::string_view name) const;  // -1 when absent
    const std::vector<double>* vector_of(std::string_view name) const;
};

/// node2vec biased second-order walks: r walks from every node, truncated at
/// sinks. Bias: weight 1/p back to the previous node, 1 to out-neighbors of
/// the previous node, 1/q otherwise; first steps are uniform.
std::vector<std::vector<int>> sample_walks(const SimpleDigraph& g, const Node2vecParams& params,
                                           std::uint64_t seed, int workers = 1);

/// Skip-gram with negative sampling over walk windows. Deterministic for a
/// fixed seed in single-worker mode.
EmbeddingMatrix train_skipgram(const std::vector<std::vector<int>>& walks,
                               const std::vector<std::string>& names, const EmbedConfig& cfg,
                               std::uint64_t seed, int workers = 1);

/// LINE second-order proximity by uniform edge sampling; returns the vertex
/// vectors.
EmbeddingMatrix train_line2(const SimpleDigraph& g, const EmbedConfig& cfg, std::uint64_t seed,
                            int workers = 1);

/// Dispatches on cfg.algorithm and drops nodes without incident edges.
EmbeddingMatrix embed(const SimpleDigraph& g, const EmbedConfig& cfg, int workers = 1);

void write_embedding_file(const EmbeddingMatrix& m, const std::string& path);
EmbeddingMatrix read_embedding_file(const std::string& path);

}  // namespace cvdp

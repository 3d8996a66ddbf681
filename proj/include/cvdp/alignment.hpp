#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cvdp/common.hpp"
#include "cvdp/embedding.hpp"
#include "cvdp/graph.hpp"

namespace cvdp {

struct AnchorPair {
    std::string name;
    double score = 0.0;
};

/// Anchors shared by two versions, sorted by score descending with
/// lexicographic tie-breaks.
struct AnchorSet {
    std::vector<AnchorPair> pairs;
    std::string strategy;  // knn | gns | random
    int requested = 0;
};

struct AlignmentTransform {
    Eigen::MatrixXd matrix;  // d x d, maps new-version vectors into the old space
    std::string method;      // orthogonal | linear
};

/// Fraction of node's k nearest neighbors (Euclidean, excluding self) shared
/// between the two embeddings.
double score_knn_anchor(const EmbeddingMatrix& emb0, const EmbeddingMatrix& emb1,
                        const std::string& node, int k);

/// |M0 ∩ M1|^2 / |M0 ∪ M1| over the union of in- and out-neighbors in each
/// graph; 0 when the union is empty.
double score_gns_anchor(const SimpleDigraph& g0, const SimpleDigraph& g1,
                        const std::string& node);

/// Sorted intersection of the two embeddings' node sets.
std::vector<std::string> candidate_nodes(const EmbeddingMatrix& emb0,
                                         const EmbeddingMatrix& emb1);

/// Top-N candidates by scorer for knn/gns, or a seeded uniform sample without
/// replacement for the random strategy.
AnchorSet select_anchors(const std::vector<std::string>& candidates,
                         const std::function<double(const std::string&)>& scorer,
                         const std::string& strategy, int n, std::uint64_t seed);

/// Orthogonal Procrustes: T = U V^T from the SVD of Y X^T; minimizes
/// ||Y - T X||_F over orthogonal T.
AlignmentTransform fit_orthogonal(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

/// Unconstrained least squares per output dimension, minimum-norm when X is
/// rank deficient (with a warning).
AlignmentTransform fit_linear(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                              std::vector<Diagnostic>* diags = nullptr);

/// Replaces every vector v by T v; node set unchanged.
EmbeddingMatrix apply_transform(const AlignmentTransform& t, const EmbeddingMatrix& emb);

/// Columns of X/Y are the anchors' vectors: X from the new version, Y from the
/// old one. Anchors missing from either embedding are an error.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> anchor_matrices(const AnchorSet& anchors,
                                                            const EmbeddingMatrix& emb_old,
                                                            const EmbeddingMatrix& emb_new);

void write_transform_file(const AlignmentTransform& t, const std::string& path);
AlignmentTransform read_transform_file(const std::string& path);
void write_anchor_file(const AnchorSet& a, const std::string& path);
AnchorSet read_anchor_file(const std::string& path);

}  // namespace cvdp

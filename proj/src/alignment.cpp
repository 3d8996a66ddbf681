#include "cvdp/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

namespace cvdp {

namespace {

/// Names of node's k nearest neighbors, ties broken by (distance, name).
std::set<std::string> knn_set(const EmbeddingMatrix& emb, int node_idx, int k) {
    std::vector<std::pair<double, std::string_view>> dist;
    dist.reserve(emb.node_ids.size() - 1);
    const auto& center = emb.vectors[node_idx];
    for (std::size_t i = 0; i < emb.node_ids.size(); ++i) {
        if (static_cast<int>(i) == node_idx) continue;
        double d2 = 0.0;
        for (std::size_t j = 0; j < center.size(); ++j) {
            double diff = emb.vectors[i][j] - center[j];
            d2 += diff * diff;
        }
        dist.emplace_back(d2, emb.node_ids[i]);
    }
    std::sort(dist.begin(), dist.end());
    std::set<std::string> out;
    for (int i = 0; i < k; ++i) out.emplace(dist[i].second);
    return out;
}

}  // namespace

double score_knn_anchor(const EmbeddingMatrix& emb0, const EmbeddingMatrix& emb1,
                        const std::string& node, int k) {
    if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
    int i0 = emb0.index_of(node);
    int i1 = emb1.index_of(node);
    if (i0 < 0 || i1 < 0)
        throw Error(ErrorKind::InvalidArgument, "node '" + node + "' missing from an embedding");
    if (k >= static_cast<int>(emb0.node_ids.size()) ||
        k >= static_cast<int>(emb1.node_ids.size()))
        throw Error(ErrorKind::InvalidArgument, "k must be smaller than the embedding size");

    auto n0 = knn_set(emb0, i0, k);
    auto n1 = knn_set(emb1, i1, k);
    std::size_t shared = 0;
    for (const auto& name : n0) shared += n1.count(name);
    return static_cast<double>(shared) / static_cast<double>(k);
}

double score_gns_anchor(const SimpleDigraph& g0, const SimpleDigraph& g1,
                        const std::string& node) {
    int i0 = g0.index_of(node);
    int i1 = g1.index_of(node);
    if (i0 < 0 || i1 < 0)
        throw Error(ErrorKind::InvalidArgument, "node '" + node + "' missing from a graph");

    auto group = [](const SimpleDigraph& g, int idx) {
        std::set<std::string> m;
        for (int v : g.out_neighbors(idx)) m.insert(g.names()[v]);
        for (int v : g.in_neighbors(idx)) m.insert(g.names()[v]);
        return m;
    };
    auto m0 = group(g0, i0);
    auto m1 = group(g1, i1);

    std::size_t inter = 0;
    for (const auto& name : m0) inter += m1.count(name);
    std::size_t uni = m0.size() + m1.size() - inter;
    if (uni == 0) return 0.0;
    return static_cast<double>(inter) * static_cast<double>(inter) /
           static_cast<double>(uni);
}

std::vector<std::string> candidate_nodes(const EmbeddingMatrix& emb0,
                                         const EmbeddingMatrix& emb1) {
    std::vector<std::string> out;
    std::set_intersection(emb0.node_ids.begin(), emb0.node_ids.end(), emb1.node_ids.begin(),
                          emb1.node_ids.end(), std::back_inserter(out));
    return out;
}

AnchorSet select_anchors(const std::vector<std::string>& candidates,
                         const std::function<double(const std::string&)>& scorer,
                         const std::string& strategy, int n, std::uint64_t seed) {
    if (candidates.empty()) throw Error(ErrorKind::State, "no shared modules");
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "anchor count must be >= 1");
    if (strategy != "knn" && strategy != "gns" && strategy != "random")
        throw Error(ErrorKind::Config, "unknown anchor strategy '" + strategy + "'");

    AnchorSet out;
    out.strategy = strategy;
    out.requested = n;
    std::size_t take = std::min<std::size_t>(n, candidates.size());

    if (strategy == "random") {
        std::vector<std::string> pool = candidates;
        std::mt19937_64 rng(mix_seed(seed, "anchors"));
        for (std::size_t i = 0; i < take; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
            std::swap(pool[i], pool[pick(rng)]);
        }
        pool.resize(take);
        std::sort(pool.begin(), pool.end());
        for (auto& name : pool) out.pairs.push_back({std::move(name), 0.0});
        return out;
    }

    std::vector<AnchorPair> scored;
    scored.reserve(candidates.size());
    for (const auto& name : candidates) scored.push_back({name, scorer(name)});
    std::sort(scored.begin(), scored.end(), [](const AnchorPair& a, const AnchorPair& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.name < b.name;
    });
    scored.resize(take);
    out.pairs = std::move(scored);
    return out;
}

AlignmentTransform fit_orthogonal(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    if (x.rows() == 0 || x.cols() == 0)
        throw Error(ErrorKind::InvalidArgument, "empty anchor matrix");
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw Error(ErrorKind::InvalidArgument, "anchor matrices must have matching shapes");

    Eigen::MatrixXd m = y * x.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    AlignmentTransform t;
    t.matrix = svd.matrixU() * svd.matrixV().transpose();
    t.method = "orthogonal";
    return t;
}

AlignmentTransform fit_linear(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                              std::vector<Diagnostic>* diags) {
    if (x.rows() == 0 || x.cols() == 0)
        throw Error(ErrorKind::InvalidArgument, "empty anchor matrix");
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw Error(ErrorKind::InvalidArgument, "anchor matrices must have matching shapes");

    // T X = Y row by row: X^T t_r^T = y_r^T, minimum-norm when underdetermined
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(x.transpose());
    if (cod.rank() < x.rows() && diags)
        diags->push_back(Diagnostic{Severity::Warning, "", 0,
                                    "rank-deficient anchor matrix (rank " +
                                        std::to_string(cod.rank()) + " of " +
                                        std::to_string(x.rows()) +
                                        "), using the minimum-norm solution"});
    AlignmentTransform t;
    t.matrix = cod.solve(y.transpose()).transpose();
    t.method = "linear";
    return t;
}

EmbeddingMatrix apply_transform(const AlignmentTransform& t, const EmbeddingMatrix& emb) {
    if (t.matrix.rows() != emb.dim || t.matrix.cols() != emb.dim)
        throw Error(ErrorKind::InvalidArgument,
                    "transform dimension " + std::to_string(t.matrix.rows()) +
                        " does not match embedding dimension " + std::to_string(emb.dim));
    EmbeddingMatrix out = emb;
    Eigen::VectorXd v(emb.dim);
    for (auto& vec : out.vectors) {
        for (int i = 0; i < emb.dim; ++i) v[i] = vec[i];
        Eigen::VectorXd mapped = t.matrix * v;
        for (int i = 0; i < emb.dim; ++i) vec[i] = mapped[i];
    }
    return out;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> anchor_matrices(const AnchorSet& anchors,
                                                            const EmbeddingMatrix& emb_old,
                                                            const EmbeddingMatrix& emb_new) {
    if (anchors.pairs.empty()) throw Error(ErrorKind::InvalidArgument, "empty anchor set");
    if (emb_old.dim != emb_new.dim)
        throw Error(ErrorKind::InvalidArgument, "embedding dimensions differ");
    const int d = emb_old.dim;
    const int n = static_cast<int>(anchors.pairs.size());
    Eigen::MatrixXd x(d, n), y(d, n);
    for (int c = 0; c < n; ++c) {
        const auto& name = anchors.pairs[c].name;
        const auto* vo = emb_old.vector_of(name);
        const auto* vn = emb_new.vector_of(name);
        if (!vo || !vn)
            throw Error(ErrorKind::InvalidArgument,
                        "anchor '" + name + "' missing from an embedding");
        for (int r = 0; r < d; ++r) {
            x(r, c) = (*vn)[r];
            y(r, c) = (*vo)[r];
        }
    }
    return {std::move(x), std::move(y)};
}

void write_transform_file(const AlignmentTransform& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open for writing: " + path);
    const int d = static_cast<int>(t.matrix.rows());
    out << "transform v1 " << t.method << ' ' << d << '\n';
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            if (c) out << ' ';
            out << format_double(t.matrix(r, c));
        }
        out << '\n';
    }
    if (!out) throw Error(ErrorKind::Io, "write failed: " + path);
}

AlignmentTransform read_transform_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open transform file: " + path);
    auto fail = [&](int line, const std::string& msg) -> Error {
        return Error(ErrorKind::Parse, path + ":" + std::to_string(line) + ": " + msg);
    };

    std::string line;
    if (!std::getline(in, line)) throw fail(1, "missing header");
    auto head = split_ws(line);
    if (head.size() != 4 || head[0] != "transform" || head[1] != "v1")
        throw fail(1, "expected header 'transform v1 <method> <d>'");
    AlignmentTransform t;
    t.method = head[2];
    if (t.method != "orthogonal" && t.method != "linear")
        throw fail(1, "unknown method '" + t.method + "'");
    int d = static_cast<int>(parse_int(head[3], "dimension"));
    if (d < 1) throw fail(1, "dimension must be >= 1");
    t.matrix.resize(d, d);

    int lineno = 1;
    for (int r = 0; r < d; ++r) {
        if (!std::getline(in, line)) throw fail(lineno + 1, "missing matrix row");
        ++lineno;
        auto fields = split_ws(line);
        if (fields.size() != static_cast<std::size_t>(d))
            throw fail(lineno, "expected " + std::to_string(d) + " values");
        for (int c = 0; c < d; ++c) {
            try {
                t.matrix(r, c) = parse_double(fields[c], "matrix value");
            } catch (const Error&) {
                throw fail(lineno, "bad matrix value '" + fields[c] + "'");
            }
        }
    }
    return t;
}

void write_anchor_file(const AnchorSet& a, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open for writing: " + path);
    out << "anchors v1 " << a.strategy << ' ' << a.requested << '\n';
    for (const auto& p : a.pairs) out << p.name << ' ' << format_double(p.score) << '\n';
    if (!out) throw Error(ErrorKind::Io, "write failed: " + path);
}

AnchorSet read_anchor_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open anchor file: " + path);
    auto fail = [&](int line, const std::string& msg) -> Error {
        return Error(ErrorKind::Parse, path + ":" + std::to_string(line) + ": " + msg);
    };

    std::string line;
    if (!std::getline(in, line)) throw fail(1, "missing header");
    auto head = split_ws(line);
    if (head.size() != 4 || head[0] != "anchors" || head[1] != "v1")
        throw fail(1, "expected header 'anchors v1 <strategy> <N>'");
    AnchorSet a;
    a.strategy = head[2];
    a.requested = static_cast<int>(parse_int(head[3], "anchor count"));

    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        auto fields = split_ws(line);
        if (fields.empty()) continue;
        if (fields.size() != 2) throw fail(lineno, "expected '<name> <score>'");
        double score;
        try {
            score = parse_double(fields[1], "score");
        } catch (const Error&) {
            throw fail(lineno, "bad score '" + fields[1] + "'");
        }
        a.pairs.push_back({std::move(fields[0]), score});
    }
    return a;
}

}  // namespace cvdp

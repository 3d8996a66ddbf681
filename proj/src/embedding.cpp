#include "cvdp/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

namespace cvdp {

void EmbedConfig::validate() const {
    if (algorithm != "node2vec" && algorithm != "line2")
        throw Error(ErrorKind::Config, "unknown embedding algorithm '" + algorithm + "'");
    if (dim < 1) throw Error(ErrorKind::Config, "embedding dim must be >= 1");
    if (!(node2vec.p > 0.0) || !(node2vec.q > 0.0))
        throw Error(ErrorKind::Config, "node2vec p and q must be positive");
    if (node2vec.walks_per_node < 1 || node2vec.walk_length < 1 || node2vec.window < 1 ||
        node2vec.negatives < 1 || node2vec.epochs < 1)
        throw Error(ErrorKind::Config, "node2vec counts must be >= 1");
    if (!(node2vec.learning_rate > 0.0) || !(line2.learning_rate > 0.0))
        throw Error(ErrorKind::Config, "learning rate must be positive");
    if (line2.negatives < 1)
        throw Error(ErrorKind::Config, "line2 negatives must be >= 1");
    if (line2.sample_count < -1)
        throw Error(ErrorKind::Config, "line2 sample_count must be >= 0 (or -1 for default)");
}

int EmbeddingMatrix::index_of(std::string_view name) const {
    auto it = std::lower_bound(node_ids.begin(), node_ids.end(), name);
    if (it == node_ids.end() || *it != name) return -1;
    return static_cast<int>(it - node_ids.begin());
}

const std::vector<double>* EmbeddingMatrix::vector_of(std::string_view name) const {
    int i = index_of(name);
    return i < 0 ? nullptr : &vectors[i];
}

namespace {

double uniform01(std::mt19937_64& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

/// Samples an index proportional to weights; total is their sum.
int pick_weighted(const std::vector<double>& weights, double total, std::mt19937_64& rng) {
    double r = uniform01(rng) * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        acc += weights[i];
        if (r < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
}

double sigmoid(double x) {
    return 1.0 / (1.0 + std::exp(-x));
}

/// Cumulative sampling table over arbitrary positive weights.
class CumulativeTable {
public:
    explicit CumulativeTable(const std::vector<double>& weights) {
        cum_.reserve(weights.size());
        double acc = 0.0;
        for (double w : weights) {
            acc += w;
            cum_.push_back(acc);
        }
        total_ = acc;
    }

    bool empty() const { return total_ <= 0.0; }

    int sample(std::mt19937_64& rng) const {
        double r = uniform01(rng) * total_;
        auto it = std::upper_bound(cum_.begin(), cum_.end(), r);
        if (it == cum_.end()) --it;
        return static_cast<int>(it - cum_.begin());
    }

private:
    std::vector<double> cum_;
    double total_ = 0.0;
};

std::vector<double> init_rows(std::size_t rows, int dim, std::uint64_t seed) {
    std::vector<double> w(rows * static_cast<std::size_t>(dim));
    std::mt19937_64 rng(mix_seed(seed, "init"));
    std::uniform_real_distribution<double> u(-0.5 / dim, 0.5 / dim);
    for (auto& x : w) x = u(rng);
    return w;
}

/// One SGNS step for the pair (in_row, out_row) plus its negatives; the input
/// row is adjusted once after the whole group, as in the reference trainer.
struct SgnsTrainer {
    std::vector<double>& w;
    std::vector<double>& c;
    int dim;

    void pair_update(int in_row, int out_row, int negatives, const CumulativeTable& table,
                     double lr, std::mt19937_64& rng, std::vector<double>& err) {
        std::fill(err.begin(), err.end(), 0.0);
        double* wi = w.data() + static_cast<std::size_t>(in_row) * dim;
        step(wi, out_row, 1.0, lr, err);
        for (int s = 0; s < negatives; ++s) {
            int neg = table.sample(rng);
            if (neg == out_row) continue;
            step(wi, neg, 0.0, lr, err);
        }
        for (int k = 0; k < dim; ++k) wi[k] += err[k];
    }

private:
    void step(const double* wi, int out_row, double label, double lr, std::vector<double>& err) {
        double* co = c.data() + static_cast<std::size_t>(out_row) * dim;
        double f = 0.0;
        for (int k = 0; k < dim; ++k) f += wi[k] * co[k];
        double g = lr * (label - sigmoid(f));
        for (int k = 0; k < dim; ++k) err[k] += g * co[k];
        for (int k = 0; k < dim; ++k) co[k] += g * wi[k];
    }
};

}  // namespace

std::vector<std::vector<int>> sample_walks(const SimpleDigraph& g, const Node2vecParams& params,
                                           std::uint64_t seed, int workers) {
    if (g.node_count() == 0) throw Error(ErrorKind::InvalidArgument, "empty graph");
    const int n = static_cast<int>(g.node_count());
    const int r = params.walks_per_node;
    const int l = params.walk_length;
    const double inv_p = 1.0 / params.p;
    const double inv_q = 1.0 / params.q;

    std::vector<std::vector<int>> walks(static_cast<std::size_t>(n) * r);
    parallel_for(walks.size(), workers, [&](std::size_t wi) {
        int start = static_cast<int>(wi) / r;
        std::mt19937_64 rng(mix_seed(seed, "walk", wi));
        auto& walk = walks[wi];
        walk.reserve(l);
        walk.push_back(start);
        while (static_cast<int>(walk.size()) < l) {
            int cur = walk.back();
            const auto& nbrs = g.out_neighbors(cur);
            if (nbrs.empty()) break;
            int next;
            if (walk.size() == 1) {
                next = nbrs[static_cast<std::size_t>(uniform01(rng) * nbrs.size()) %
                            nbrs.size()];
            } else {
                int prev = walk[walk.size() - 2];
                std::vector<double> weights(nbrs.size());
                double total = 0.0;
                for (std::size_t i = 0; i < nbrs.size(); ++i) {
                    int x = nbrs[i];
                    double wgt = x == prev ? inv_p : (g.has_edge(prev, x) ? 1.0 : inv_q);
                    weights[i] = wgt;
                    total += wgt;
                }
                next = nbrs[pick_weighted(weights, total, rng)];
            }
            walk.push_back(next);
        }
    });
    return walks;
}

EmbeddingMatrix train_skipgram(const std::vector<std::vector<int>>& walks,
                               const std::vector<std::string>& names, const EmbedConfig& cfg,
                               std::uint64_t seed, int workers) {
    if (walks.empty()) throw Error(ErrorKind::InvalidArgument, "no walks to train on");
    const auto& par = cfg.node2vec;
    const int d = cfg.dim;

    std::vector<long long> occurrences(names.size(), 0);
    for (const auto& walk : walks)
        for (int v : walk) {
            if (v < 0 || v >= static_cast<int>(names.size()))
                throw Error(ErrorKind::InvalidArgument, "walk node out of range");
            ++occurrences[v];
        }

    // vocabulary rows are sorted by node name so initialization does not
    // depend on walk order
    std::vector<std::pair<std::string, int>> order;
    for (std::size_t i = 0; i < names.size(); ++i)
        if (occurrences[i] > 0) order.emplace_back(names[i], static_cast<int>(i));
    std::sort(order.begin(), order.end());

    const int vocab = static_cast<int>(order.size());
    std::vector<int> row_of(names.size(), -1);
    for (int row = 0; row < vocab; ++row) row_of[order[row].second] = row;

    std::vector<double> w = init_rows(vocab, d, seed);
    std::vector<double> c(static_cast<std::size_t>(vocab) * d, 0.0);

    std::vector<double> neg_weights(vocab);
    for (int row = 0; row < vocab; ++row)
        neg_weights[row] = std::pow(static_cast<double>(occurrences[order[row].second]), 0.75);
    CumulativeTable table(neg_weights);

    // token prefix sums give every walk a fixed slot in the decay schedule,
    // so the learning rate is independent of worker interleaving
    std::vector<long long> prefix(walks.size() + 1, 0);
    for (std::size_t i = 0; i < walks.size(); ++i)
        prefix[i + 1] = prefix[i] + static_cast<long long>(walks[i].size());
    const long long tokens_per_epoch = prefix.back();
    const long long total_tokens = tokens_per_epoch * par.epochs;
    const double lr0 = par.learning_rate;
    const double lr_min = lr0 * 1e-4;

    SgnsTrainer trainer{w, c, d};
    for (int epoch = 0; epoch < par.epochs; ++epoch) {
        parallel_for(walks.size(), workers, [&](std::size_t wi) {
            const auto& walk = walks[wi];
            std::mt19937_64 rng(
                mix_seed(seed, "sgns", static_cast<std::uint64_t>(epoch) * walks.size() + wi));
            std::vector<double> err(d);
            for (std::size_t i = 0; i < walk.size(); ++i) {
                long long done =
                    static_cast<long long>(epoch) * tokens_per_epoch + prefix[wi] +
                    static_cast<long long>(i);
                double lr =
                    std::max(lr_min, lr0 * (1.0 - static_cast<double>(done) /
                                                      static_cast<double>(total_tokens)));
                int center = row_of[walk[i]];
                std::size_t lo = i >= static_cast<std::size_t>(par.window)
                                     ? i - static_cast<std::size_t>(par.window)
                                     : 0;
                std::size_t hi = std::min(walk.size(), i + static_cast<std::size_t>(par.window) + 1);
                for (std::size_t j = lo; j < hi; ++j) {
                    if (j == i) continue;
                    trainer.pair_update(center, row_of[walk[j]], par.negatives, table, lr, rng,
                                        err);
                }
            }
        });
    }

    EmbeddingMatrix m;
    m.dim = d;
    m.algorithm = "node2vec";
    m.seed = seed;
    m.node_ids.reserve(vocab);
    m.vectors.reserve(vocab);
    for (int row = 0; row < vocab; ++row) {
        m.node_ids.push_back(order[row].first);
        m.vectors.emplace_back(w.begin() + static_cast<std::size_t>(row) * d,
                               w.begin() + static_cast<std::size_t>(row + 1) * d);
    }
    return m;
}

EmbeddingMatrix train_line2(const SimpleDigraph& g, const EmbedConfig& cfg, std::uint64_t seed,
                            int workers) {
    const int d = cfg.dim;
    const auto& par = cfg.line2;

    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < static_cast<int>(g.node_count()); ++u)
        for (int v : g.out_neighbors(u)) edges.emplace_back(u, v);
    if (edges.empty()) throw Error(ErrorKind::InvalidArgument, "empty edge set");

    const int n = static_cast<int>(g.node_count());
    std::vector<double> w = init_rows(n, d, seed);
    std::vector<double> c(static_cast<std::size_t>(n) * d, 0.0);

    // negatives follow total degree (in plus out) raised to 0.75
    std::vector<double> neg_weights(n);
    for (int i = 0; i < n; ++i)
        neg_weights[i] = std::pow(static_cast<double>(g.degree(i)), 0.75);
    CumulativeTable table(neg_weights);

    long long samples = par.sample_count >= 0
                            ? par.sample_count
                            : 100LL * static_cast<long long>(edges.size());
    const double lr0 = par.learning_rate;
    const double lr_min = lr0 * 1e-4;

    // fixed-size blocks keep the single-worker path strictly sequential while
    // letting extra workers share the weight arrays hogwild-style
    const long long blocks = workers <= 1 ? 1 : static_cast<long long>(workers) * 4;
    SgnsTrainer trainer{w, c, d};
    if (samples > 0) {
        parallel_for(static_cast<std::size_t>(blocks), workers, [&](std::size_t b) {
            long long lo = samples * static_cast<long long>(b) / blocks;
            long long hi = samples * static_cast<long long>(b + 1) / blocks;
            std::mt19937_64 rng(mix_seed(seed, "line2", b));
            std::vector<double> err(d);
            for (long long s = lo; s < hi; ++s) {
                double lr = std::max(
                    lr_min, lr0 * (1.0 - static_cast<double>(s) / static_cast<double>(samples)));
                const auto& [u, v] =
                    edges[std::min<std::size_t>(static_cast<std::size_t>(uniform01(rng) *
                                                                        edges.size()),
                                                edges.size() - 1)];
                trainer.pair_update(u, v, par.negatives, table, lr, rng, err);
            }
        });
    }

    EmbeddingMatrix m;
    m.dim = d;
    m.algorithm = "line2";
    m.seed = seed;
    m.node_ids = g.names();
    m.vectors.reserve(n);
    for (int i = 0; i < n; ++i)
        m.vectors.emplace_back(w.begin() + static_cast<std::size_t>(i) * d,
                               w.begin() + static_cast<std::size_t>(i + 1) * d);
    return m;
}

EmbeddingMatrix embed(const SimpleDigraph& g, const EmbedConfig& cfg, int workers) {
    cfg.validate();

    // nodes without incident edges receive no embedding
    std::vector<std::string> keep_names;
    std::vector<int> new_index(g.node_count(), -1);
    for (int i = 0; i < static_cast<int>(g.node_count()); ++i) {
        if (g.degree(i) == 0) continue;
        new_index[i] = static_cast<int>(keep_names.size());
        keep_names.push_back(g.names()[i]);
    }
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < static_cast<int>(g.node_count()); ++u)
        for (int v : g.out_neighbors(u)) edges.emplace_back(new_index[u], new_index[v]);
    SimpleDigraph h(std::move(keep_names), std::move(edges));

    EmbeddingMatrix m;
    if (cfg.algorithm == "node2vec") {
        auto walks = sample_walks(h, cfg.node2vec, cfg.seed, workers);
        m = train_skipgram(walks, h.names(), cfg, cfg.seed, workers);
    } else {
        m = train_line2(h, cfg, cfg.seed, workers);
    }
    m.seed = cfg.seed;
    return m;
}

void write_embedding_file(const EmbeddingMatrix& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open for writing: " + path);
    out << "emb v1 " << m.dim << ' ' << m.algorithm << ' ' << m.seed << '\n';
    for (std::size_t i = 0; i < m.node_ids.size(); ++i) {
        out << m.node_ids[i];
        for (double v : m.vectors[i]) out << ' ' << format_double(v);
        out << '\n';
    }
    if (!out) throw Error(ErrorKind::Io, "write failed: " + path);
}

EmbeddingMatrix read_embedding_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open embedding file: " + path);

    auto fail = [&](int line, const std::string& msg) -> Error {
        return Error(ErrorKind::Parse, path + ":" + std::to_string(line) + ": " + msg);
    };

    std::string line;
    if (!std::getline(in, line)) throw fail(1, "missing header");
    auto head = split_ws(line);
    if (head.size() != 5 || head[0] != "emb" || head[1] != "v1")
        throw fail(1, "expected header 'emb v1 <dim> <algorithm> <seed>'");

    EmbeddingMatrix m;
    m.dim = static_cast<int>(parse_int(head[2], "dim"));
    if (m.dim < 1) throw fail(1, "dim must be >= 1");
    m.algorithm = head[3];
    m.seed = parse_uint64(head[4], "seed");

    std::vector<std::pair<std::string, std::vector<double>>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        auto fields = split_ws(line);
        if (fields.empty()) continue;
        if (fields.size() != static_cast<std::size_t>(m.dim) + 1)
            throw fail(lineno, "expected a name and " + std::to_string(m.dim) + " values");
        std::vector<double> vec(m.dim);
        for (int k = 0; k < m.dim; ++k) {
            try {
                vec[k] = parse_double(fields[k + 1], "embedding value");
            } catch (const Error&) {
                throw fail(lineno, "bad embedding value '" + fields[k + 1] + "'");
            }
            if (!std::isfinite(vec[k])) throw fail(lineno, "non-finite embedding value");
        }
        rows.emplace_back(std::move(fields[0]), std::move(vec));
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
        if (rows[i].first == rows[i + 1].first)
            throw Error(ErrorKind::Parse, path + ": duplicate node '" + rows[i].first + "'");
    for (auto& [name, vec] : rows) {
        m.node_ids.push_back(std::move(name));
        m.vectors.push_back(std::move(vec));
    }
    return m;
}

}  // namespace cvdp

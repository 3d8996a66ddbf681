#include "cvdp/learner.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

namespace cvdp {

namespace {

double gini(long long c0, long long c1) {
    long long n = c0 + c1;
    if (n == 0) return 0.0;
    double p0 = static_cast<double>(c0) / n;
    double p1 = static_cast<double>(c1) / n;
    return 1.0 - p0 * p0 - p1 * p1;
}

double sigmoid(double x) {
    return 1.0 / (1.0 + std::exp(-x));
}

double softplus(double x) {
    return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

constexpr double kMetaLambda = 1e-6;

struct BuildItem {
    std::vector<int> samples;  // row indices with bootstrap multiplicity
    int node;
    int depth;
};

class TreeBuilder {
public:
    TreeBuilder(const FeatureTable& table, const ForestConfig& cfg, int mtry,
                std::mt19937_64& rng)
        : table_(table), cfg_(cfg), mtry_(mtry), rng_(rng) {
        feature_pool_.resize(table.feature_names.size());
        for (std::size_t i = 0; i < feature_pool_.size(); ++i)
            feature_pool_[i] = static_cast<int>(i);
    }

    DecisionTree build(std::vector<int> samples) {
        DecisionTree tree;
        tree.nodes.push_back({});
        std::vector<BuildItem> stack;
        stack.push_back({std::move(samples), 0, 0});
        while (!stack.empty()) {
            BuildItem item = std::move(stack.back());
            stack.pop_back();
            grow(tree, item, stack);
        }
        return tree;
    }

private:
    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double gain = 0.0;
    };

    void grow(DecisionTree& tree, BuildItem& item, std::vector<BuildItem>& stack) {
        long long c0 = 0, c1 = 0;
        for (int s : item.samples) (table_.rows[s].label ? c1 : c0)++;
        TreeNode& node = tree.nodes[item.node];
        node.count0 = c0;
        node.count1 = c1;

        bool can_split = c0 > 0 && c1 > 0 &&
                         static_cast<int>(item.samples.size()) >= 2 * cfg_.min_samples_leaf &&
                         (cfg_.max_depth < 0 || item.depth < cfg_.max_depth);
        Split best;
        if (can_split) best = find_split(item.samples, c0, c1);
        if (best.feature < 0) return;  // leaf

        std::vector<int> left, right;
        for (int s : item.samples) {
            if (table_.rows[s].features[best.feature] <= best.threshold)
                left.push_back(s);
            else
                right.push_back(s);
        }

        int left_id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({});
        int right_id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({});
        TreeNode& parent = tree.nodes[item.node];  // fresh reference after growth
        parent.feature = best.feature;
        parent.threshold = best.threshold;
        parent.left = left_id;
        parent.right = right_id;
        stack.push_back({std::move(right), right_id, item.depth + 1});
        stack.push_back({std::move(left), left_id, item.depth + 1});
    }

    Split find_split(const std::vector<int>& samples, long long c0, long long c1) {
        const long long n = static_cast<long long>(samples.size());
        const double parent = gini(c0, c1);
        const int f_total = static_cast<int>(feature_pool_.size());

        // random feature subset by partial shuffle
        for (int i = 0; i < mtry_; ++i) {
            std::uniform_int_distribution<int> pick(i, f_total - 1);
            std::swap(feature_pool_[i], feature_pool_[pick(rng_)]);
        }

        Split best;
        std::vector<std::pair<double, int>> values(samples.size());  // (value, label)
        for (int fi = 0; fi < mtry_; ++fi) {
            int feature = feature_pool_[fi];
            for (std::size_t i = 0; i < samples.size(); ++i) {
                const auto& row = table_.rows[samples[i]];
                values[i] = {row.features[feature], row.label};
            }
            std::sort(values.begin(), values.end());

            long long l0 = 0, l1 = 0;
            for (std::size_t i = 0; i + 1 < values.size(); ++i) {
                (values[i].second ? l1 : l0)++;
                if (values[i].first == values[i + 1].first) continue;
                long long nl = l0 + l1;
                long long nr = n - nl;
                if (nl < cfg_.min_samples_leaf || nr < cfg_.min_samples_leaf) continue;
                double child = (nl * gini(l0, l1) + nr * gini(c0 - l0, c1 - l1)) /
                               static_cast<double>(n);
                double gain = parent - child;
                if (gain > best.gain + 1e-12) {
                    double a = values[i].first;
                    double b = values[i + 1].first;
                    best = {feature, a + (b - a) / 2.0, gain};
                }
            }
        }
        return best;
    }

    const FeatureTable& table_;
    const ForestConfig& cfg_;
    int mtry_;
    std::mt19937_64& rng_;
    std::vector<int> feature_pool_;
};

double tree_fraction(const DecisionTree& tree, const std::vector<double>& row) {
    int node = 0;
    while (tree.nodes[node].feature >= 0) {
        const TreeNode& t = tree.nodes[node];
        node = row[t.feature] <= t.threshold ? t.left : t.right;
    }
    const TreeNode& leaf = tree.nodes[node];
    return static_cast<double>(leaf.count1) / static_cast<double>(leaf.count0 + leaf.count1);
}

void check_row_width(const ForestModel& m, const std::vector<double>& row) {
    if (row.size() != m.feature_names.size())
        throw Error(ErrorKind::InvalidArgument,
                    "feature row has " + std::to_string(row.size()) + " values, model expects " +
                        std::to_string(m.feature_names.size()));
}

}  // namespace

ForestModel train_forest(const FeatureTable& table, ForestConfig cfg, int workers) {
    const std::size_t n = table.rows.size();
    const std::size_t f = table.feature_names.size();
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "need at least 2 training rows");
    if (f == 0) throw Error(ErrorKind::InvalidArgument, "no features");
    if (cfg.n_trees < 1) throw Error(ErrorKind::Config, "n_trees must be >= 1");
    if (cfg.min_samples_leaf < 1) throw Error(ErrorKind::Config, "min_samples_leaf must be >= 1");
    for (const auto& row : table.rows)
        if (row.features.size() != f)
            throw Error(ErrorKind::InvalidArgument, "ragged feature table");

    bool has0 = false, has1 = false;
    for (const auto& row : table.rows) (row.label ? has1 : has0) = true;
    if (!has0 || !has1) throw Error(ErrorKind::State, "degenerate labels");

    int mtry = cfg.max_features > 0
                   ? std::min(cfg.max_features, static_cast<int>(f))
                   : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(f))));

    ForestModel model;
    model.feature_names = table.feature_names;
    model.config = cfg;
    model.trees.resize(cfg.n_trees);
    model.oob_rows.resize(cfg.n_trees);

    parallel_for(static_cast<std::size_t>(cfg.n_trees), workers, [&](std::size_t t) {
        std::mt19937_64 rng(mix_seed(cfg.seed, "tree", t));
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::vector<int> samples(n);
        std::vector<char> in_bag(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t s = pick(rng);
            samples[i] = static_cast<int>(s);
            in_bag[s] = 1;
        }
        for (std::size_t i = 0; i < n; ++i)
            if (!in_bag[i]) model.oob_rows[t].push_back(static_cast<int>(i));

        TreeBuilder builder(table, cfg, mtry, rng);
        model.trees[t] = builder.build(std::move(samples));
    });
    return model;
}

std::vector<double> predict_proba(const ForestModel& m,
                                  const std::vector<std::vector<double>>& rows) {
    if (m.trees.empty()) throw Error(ErrorKind::State, "empty forest");
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        check_row_width(m, row);
        double sum = 0.0;
        for (const auto& tree : m.trees) sum += tree_fraction(tree, row);
        out.push_back(sum / static_cast<double>(m.trees.size()));
    }
    return out;
}

std::vector<double> predict_table(const ForestModel& m, const FeatureTable& table) {
    std::vector<std::vector<double>> rows;
    rows.reserve(table.rows.size());
    for (const auto& r : table.rows) rows.push_back(r.features);
    return predict_proba(m, rows);
}

std::vector<double> oob_predictions(const ForestModel& m, const FeatureTable& table) {
    if (m.trees.empty()) throw Error(ErrorKind::State, "empty forest");
    if (m.oob_rows.size() != m.trees.size())
        throw Error(ErrorKind::State, "model lacks out-of-bag bookkeeping");
    const std::size_t n = table.rows.size();
    std::vector<double> sum(n, 0.0);
    std::vector<int> votes(n, 0);
    for (std::size_t t = 0; t < m.trees.size(); ++t) {
        for (int r : m.oob_rows[t]) {
            if (r < 0 || static_cast<std::size_t>(r) >= n)
                throw Error(ErrorKind::State, "out-of-bag row index out of range");
            check_row_width(m, table.rows[r].features);
            sum[r] += tree_fraction(m.trees[t], table.rows[r].features);
            votes[r]++;
        }
    }
    std::vector<double> out(n);
    for (std::size_t r = 0; r < n; ++r) {
        if (votes[r] > 0) {
            out[r] = sum[r] / votes[r];
        } else {
            // in every bootstrap: fall back to the full forest
            out[r] = predict_proba(m, {table.rows[r].features})[0];
        }
    }
    return out;
}

double meta_objective(const std::array<double, 3>& w, const std::vector<double>& p_a,
                      const std::vector<double>& p_b, const std::vector<int>& labels) {
    double obj = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        double z = w[0] + w[1] * p_a[i] + w[2] * p_b[i];
        obj += softplus(z) - (labels[i] ? z : 0.0);
    }
    for (double x : w) obj += 0.5 * kMetaLambda * x * x;
    return obj;
}

std::array<double, 3> meta_gradient(const std::array<double, 3>& w,
                                    const std::vector<double>& p_a,
                                    const std::vector<double>& p_b,
                                    const std::vector<int>& labels) {
    std::array<double, 3> g{};
    for (std::size_t i = 0; i < labels.size(); ++i) {
        double z = w[0] + w[1] * p_a[i] + w[2] * p_b[i];
        double r = sigmoid(z) - labels[i];
        g[0] += r;
        g[1] += r * p_a[i];
        g[2] += r * p_b[i];
    }
    for (int k = 0; k < 3; ++k) g[k] += kMetaLambda * w[k];
    return g;
}

MetaModel train_meta(const std::vector<double>& p_a, const std::vector<double>& p_b,
                     const std::vector<int>& labels, std::vector<Diagnostic>* diags) {
    if (p_a.size() != labels.size() || p_b.size() != labels.size())
        throw Error(ErrorKind::InvalidArgument, "probability and label lengths differ");
    if (labels.empty()) throw Error(ErrorKind::InvalidArgument, "no training rows");
    bool has0 = false, has1 = false;
    for (int y : labels) (y ? has1 : has0) = true;
    if (!has0 || !has1) throw Error(ErrorKind::State, "degenerate labels");

    std::array<double, 3> w{};
    MetaModel model;
    for (int iter = 0; iter < 1000; ++iter) {
        auto g = meta_gradient(w, p_a, p_b, labels);
        Eigen::Matrix3d h = Eigen::Matrix3d::Identity() * kMetaLambda;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            double z = w[0] + w[1] * p_a[i] + w[2] * p_b[i];
            double s = sigmoid(z);
            double v = s * (1.0 - s);
            Eigen::Vector3d zi(1.0, p_a[i], p_b[i]);
            h += v * zi * zi.transpose();
        }
        Eigen::Vector3d step = h.ldlt().solve(Eigen::Vector3d(-g[0], -g[1], -g[2]));

        double before = meta_objective(w, p_a, p_b, labels);
        double scale = 1.0;
        std::array<double, 3> next = w;
        for (int back = 0; back < 40; ++back) {
            for (int k = 0; k < 3; ++k) next[k] = w[k] + scale * step[k];
            if (meta_objective(next, p_a, p_b, labels) <= before) break;
            scale *= 0.5;
        }
        double delta = 0.0;
        for (int k = 0; k < 3; ++k) delta += (next[k] - w[k]) * (next[k] - w[k]);
        w = next;
        if (std::sqrt(delta) < 1e-8) {
            model.converged = true;
            break;
        }
    }
    if (!model.converged && diags)
        diags->push_back(Diagnostic{Severity::Warning, "", 0,
                                    "meta-model stopped at the iteration cap without "
                                    "converging (separable inputs?)"});
    model.intercept = w[0];
    model.w_a = w[1];
    model.w_b = w[2];
    return model;
}

std::vector<double> predict_meta(const MetaModel& m, const std::vector<double>& p_a,
                                 const std::vector<double>& p_b) {
    if (p_a.size() != p_b.size())
        throw Error(ErrorKind::InvalidArgument, "probability lengths differ");
    std::vector<double> out;
    out.reserve(p_a.size());
    for (std::size_t i = 0; i < p_a.size(); ++i)
        out.push_back(sigmoid(m.intercept + m.w_a * p_a[i] + m.w_b * p_b[i]));
    return out;
}

void write_forest_file(const ForestModel& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open for writing: " + path);
    out << "forest v1 " << m.trees.size() << ' ' << m.feature_names.size() << '\n';
    out << "config " << m.config.n_trees << ' ' << m.config.max_features << ' '
        << m.config.min_samples_leaf << ' ' << m.config.max_depth << ' ' << m.config.seed
        << '\n';
    out << "features";
    for (const auto& f : m.feature_names) out << ' ' << f;
    out << '\n';
    for (const auto& tree : m.trees) {
        out << "tree " << tree.nodes.size() << '\n';
        for (const auto& n : tree.nodes)
            out << n.feature << ' ' << format_double(n.threshold) << ' ' << n.left << ' '
                << n.right << ' ' << n.count0 << ' ' << n.count1 << '\n';
    }
    if (!out) throw Error(ErrorKind::Io, "write failed: " + path);
}

ForestModel read_forest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open model file: " + path);
    int lineno = 0;
    auto fail = [&](const std::string& msg) -> Error {
        return Error(ErrorKind::Parse, path + ":" + std::to_string(lineno) + ": " + msg);
    };
    auto next_line = [&](std::string& line) {
        if (!std::getline(in, line)) throw fail("unexpected end of file");
        ++lineno;
    };

    std::string line;
    next_line(line);
    auto head = split_ws(line);
    if (head.size() != 4 || head[0] != "forest" || head[1] != "v1")
        throw fail("expected header 'forest v1 <trees> <features>'");
    std::size_t n_trees = static_cast<std::size_t>(parse_int(head[2], "tree count"));
    std::size_t n_features = static_cast<std::size_t>(parse_int(head[3], "feature count"));

    ForestModel m;
    next_line(line);
    auto cfg_fields = split_ws(line);
    if (cfg_fields.size() != 6 || cfg_fields[0] != "config")
        throw fail("expected a config line");
    m.config.n_trees = static_cast<int>(parse_int(cfg_fields[1], "n_trees"));
    m.config.max_features = static_cast<int>(parse_int(cfg_fields[2], "max_features"));
    m.config.min_samples_leaf = static_cast<int>(parse_int(cfg_fields[3], "min_samples_leaf"));
    m.config.max_depth = static_cast<int>(parse_int(cfg_fields[4], "max_depth"));
    m.config.seed = parse_uint64(cfg_fields[5], "seed");

    next_line(line);
    auto feat_fields = split_ws(line);
    if (feat_fields.empty() || feat_fields[0] != "features")
        throw fail("expected a features line");
    if (feat_fields.size() != n_features + 1) throw fail("feature count mismatch");
    m.feature_names.assign(feat_fields.begin() + 1, feat_fields.end());

    for (std::size_t t = 0; t < n_trees; ++t) {
        next_line(line);
        auto tree_head = split_ws(line);
        if (tree_head.size() != 2 || tree_head[0] != "tree")
            throw fail("expected 'tree <nodes>'");
        std::size_t n_nodes = static_cast<std::size_t>(parse_int(tree_head[1], "node count"));
        if (n_nodes == 0) throw fail("empty tree");
        DecisionTree tree;
        tree.nodes.resize(n_nodes);
        for (std::size_t i = 0; i < n_nodes; ++i) {
            next_line(line);
            auto f = split_ws(line);
            if (f.size() != 6) throw fail("expected 6 node fields");
            TreeNode& n = tree.nodes[i];
            n.feature = static_cast<int>(parse_int(f[0], "feature"));
            n.threshold = parse_double(f[1], "threshold");
            n.left = static_cast<int>(parse_int(f[2], "left"));
            n.right = static_cast<int>(parse_int(f[3], "right"));
            n.count0 = parse_int(f[4], "count0");
            n.count1 = parse_int(f[5], "count1");
            if (n.feature >= static_cast<int>(n_features)) throw fail("feature index out of range");
            if (n.feature >= 0 &&
                (n.left < 0 || n.right < 0 || n.left >= static_cast<int>(n_nodes) ||
                 n.right >= static_cast<int>(n_nodes)))
                throw fail("child index out of range");
            if (n.feature < 0 && n.count0 + n.count1 <= 0) throw fail("empty leaf");
        }
        m.trees.push_back(std::move(tree));
    }
    return m;
}

void write_meta_file(const MetaModel& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open for writing: " + path);
    out << "meta v1 " << format_double(m.intercept) << ' ' << format_double(m.w_a) << ' '
        << format_double(m.w_b) << ' ' << (m.converged ? 1 : 0) << '\n';
    if (!out) throw Error(ErrorKind::Io, "write failed: " + path);
}

MetaModel read_meta_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open model file: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorKind::Parse, path + ":1: missing header");
    auto f = split_ws(line);
    if (f.size() != 6 || f[0] != "meta" || f[1] != "v1")
        throw Error(ErrorKind::Parse,
                    path + ":1: expected 'meta v1 <intercept> <w_a> <w_b> <converged>'");
    MetaModel m;
    m.intercept = parse_double(f[2], "intercept");
    m.w_a = parse_double(f[3], "w_a");
    m.w_b = parse_double(f[4], "w_b");
    m.converged = parse_int(f[5], "converged") != 0;
    return m;
}

}  // namespace cvdp

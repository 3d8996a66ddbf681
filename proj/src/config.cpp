#include "cvdp/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace cvdp {

namespace {

void warn_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                       const std::string& ctx, std::vector<Diagnostic>* diags) {
    if (!diags) return;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = std::any_of(allowed.begin(), allowed.end(),
                                 [&](const char* k) { return it.key() == k; });
        if (!known)
            diags->push_back({Severity::Warning, "", 0, ctx + ": unknown key '" + it.key() + "'"});
    }
}

const json* find(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

void require_object(const json& v, const std::string& ctx) {
    if (!v.is_object()) throw Error(ErrorKind::Config, ctx + ": expected an object");
}

std::string get_string(const json& obj, const char* key, const std::string& dflt,
                       const std::string& ctx) {
    const json* v = find(obj, key);
    if (!v) return dflt;
    if (!v->is_string()) throw Error(ErrorKind::Config, ctx + "." + key + ": expected a string");
    return v->get<std::string>();
}

double get_double(const json& obj, const char* key, double dflt, const std::string& ctx) {
    const json* v = find(obj, key);
    if (!v) return dflt;
    if (!v->is_number()) throw Error(ErrorKind::Config, ctx + "." + key + ": expected a number");
    return v->get<double>();
}

long long get_int(const json& obj, const char* key, long long dflt, const std::string& ctx) {
    const json* v = find(obj, key);
    if (!v) return dflt;
    if (!v->is_number_integer())
        throw Error(ErrorKind::Config, ctx + "." + key + ": expected an integer");
    return v->get<long long>();
}

std::uint64_t get_seed(const json& obj, const char* key, std::uint64_t dflt,
                       const std::string& ctx) {
    const json* v = find(obj, key);
    if (!v) return dflt;
    if (v->is_number_unsigned()) return v->get<std::uint64_t>();
    if (v->is_number_integer() && v->get<long long>() >= 0)
        return static_cast<std::uint64_t>(v->get<long long>());
    throw Error(ErrorKind::Config, ctx + "." + key + ": expected a non-negative integer");
}

VersionConfig parse_version(const json& v, const std::string& ctx,
                            std::vector<Diagnostic>* diags) {
    require_object(v, ctx);
    warn_unknown_keys(v, {"src", "graph", "metrics"}, ctx, diags);
    VersionConfig out;
    out.src_dir = get_string(v, "src", "", ctx);
    out.graph_file = get_string(v, "graph", "", ctx);
    out.metrics_csv = get_string(v, "metrics", "", ctx);
    return out;
}

Node2vecParams parse_node2vec(const json& v, const std::string& ctx,
                              std::vector<Diagnostic>* diags) {
    require_object(v, ctx);
    warn_unknown_keys(v,
                      {"p", "q", "walks_per_node", "walk_length", "window", "negatives", "epochs",
                       "learning_rate"},
                      ctx, diags);
    Node2vecParams p;
    p.p = get_double(v, "p", p.p, ctx);
    p.q = get_double(v, "q", p.q, ctx);
    p.walks_per_node = static_cast<int>(get_int(v, "walks_per_node", p.walks_per_node, ctx));
    p.walk_length = static_cast<int>(get_int(v, "walk_length", p.walk_length, ctx));
    p.window = static_cast<int>(get_int(v, "window", p.window, ctx));
    p.negatives = static_cast<int>(get_int(v, "negatives", p.negatives, ctx));
    p.epochs = static_cast<int>(get_int(v, "epochs", p.epochs, ctx));
    p.learning_rate = get_double(v, "learning_rate", p.learning_rate, ctx);
    return p;
}

Line2Params parse_line2(const json& v, const std::string& ctx, std::vector<Diagnostic>* diags) {
    require_object(v, ctx);
    warn_unknown_keys(v, {"negatives", "sample_count", "learning_rate"}, ctx, diags);
    Line2Params p;
    p.negatives = static_cast<int>(get_int(v, "negatives", p.negatives, ctx));
    p.sample_count = get_int(v, "sample_count", p.sample_count, ctx);
    p.learning_rate = get_double(v, "learning_rate", p.learning_rate, ctx);
    return p;
}

}  // namespace

std::vector<long long> ExperimentConfig::resolved_sweep() const {
    if (!alignment.n_sweep.empty()) return alignment.n_sweep;
    return {dim, 2LL * dim, 4LL * dim, -1};
}

EmbedConfig ExperimentConfig::embed_config(const std::string& algorithm) const {
    EmbedConfig cfg;
    cfg.algorithm = algorithm;
    cfg.dim = dim;
    cfg.node2vec = node2vec;
    cfg.line2 = line2;
    return cfg;
}

ExperimentConfig parse_experiment_config(const std::string& json_text, const std::string& name,
                                         std::vector<Diagnostic>* diags) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Parse, name + ": " + e.what());
    }
    require_object(root, name);
    warn_unknown_keys(root,
                      {"pairs", "embedding", "alignment", "learner", "evaluation", "scenarios"},
                      name, diags);

    ExperimentConfig cfg;

    if (const json* pairs = find(root, "pairs")) {
        if (!pairs->is_array()) throw Error(ErrorKind::Config, name + ".pairs: expected an array");
        int idx = 0;
        for (const auto& p : *pairs) {
            ++idx;
            std::string ctx = name + ".pairs[" + std::to_string(idx - 1) + "]";
            require_object(p, ctx);
            warn_unknown_keys(p, {"id", "old", "new"}, ctx, diags);
            PairConfig pair;
            pair.id = get_string(p, "id", "pair" + std::to_string(idx), ctx);
            const json* old_v = find(p, "old");
            const json* new_v = find(p, "new");
            if (!old_v || !new_v)
                throw Error(ErrorKind::Config, ctx + ": needs both 'old' and 'new' versions");
            pair.old_version = parse_version(*old_v, ctx + ".old", diags);
            pair.new_version = parse_version(*new_v, ctx + ".new", diags);
            cfg.pairs.push_back(std::move(pair));
        }
    }

    if (const json* emb = find(root, "embedding")) {
        std::string ctx = name + ".embedding";
        require_object(*emb, ctx);
        warn_unknown_keys(*emb, {"dim", "algorithms", "node2vec", "line2"}, ctx, diags);
        cfg.dim = static_cast<int>(get_int(*emb, "dim", cfg.dim, ctx));
        if (const json* algos = find(*emb, "algorithms")) {
            if (!algos->is_array())
                throw Error(ErrorKind::Config, ctx + ".algorithms: expected an array");
            cfg.algorithms.clear();
            for (const auto& a : *algos) {
                if (!a.is_string())
                    throw Error(ErrorKind::Config, ctx + ".algorithms: expected strings");
                cfg.algorithms.push_back(a.get<std::string>());
            }
        }
        if (const json* nv = find(*emb, "node2vec"))
            cfg.node2vec = parse_node2vec(*nv, ctx + ".node2vec", diags);
        if (const json* l2 = find(*emb, "line2"))
            cfg.line2 = parse_line2(*l2, ctx + ".line2", diags);
    }

    if (const json* al = find(root, "alignment")) {
        std::string ctx = name + ".alignment";
        require_object(*al, ctx);
        warn_unknown_keys(*al, {"strategy", "method", "k", "n_sweep"}, ctx, diags);
        cfg.alignment.strategy = get_string(*al, "strategy", cfg.alignment.strategy, ctx);
        cfg.alignment.method = get_string(*al, "method", cfg.alignment.method, ctx);
        cfg.alignment.k = static_cast<int>(get_int(*al, "k", cfg.alignment.k, ctx));
        if (const json* sweep = find(*al, "n_sweep")) {
            if (!sweep->is_array())
                throw Error(ErrorKind::Config, ctx + ".n_sweep: expected an array");
            for (const auto& v : *sweep) {
                if (v.is_string() && v.get<std::string>() == "all")
                    cfg.alignment.n_sweep.push_back(-1);
                else if (v.is_number_integer())
                    cfg.alignment.n_sweep.push_back(v.get<long long>());
                else
                    throw Error(ErrorKind::Config,
                                ctx + ".n_sweep: entries must be integers or \"all\"");
            }
        }
    }

    if (const json* le = find(root, "learner")) {
        std::string ctx = name + ".learner";
        require_object(*le, ctx);
        warn_unknown_keys(*le, {"n_trees", "max_features", "min_samples_leaf", "max_depth"}, ctx,
                          diags);
        cfg.learner.n_trees = static_cast<int>(get_int(*le, "n_trees", cfg.learner.n_trees, ctx));
        cfg.learner.max_features =
            static_cast<int>(get_int(*le, "max_features", cfg.learner.max_features, ctx));
        cfg.learner.min_samples_leaf =
            static_cast<int>(get_int(*le, "min_samples_leaf", cfg.learner.min_samples_leaf, ctx));
        cfg.learner.max_depth =
            static_cast<int>(get_int(*le, "max_depth", cfg.learner.max_depth, ctx));
    }

    if (const json* ev = find(root, "evaluation")) {
        std::string ctx = name + ".evaluation";
        require_object(*ev, ctx);
        warn_unknown_keys(*ev, {"repetitions", "base_seed"}, ctx, diags);
        cfg.evaluation.repetitions =
            static_cast<int>(get_int(*ev, "repetitions", cfg.evaluation.repetitions, ctx));
        cfg.evaluation.base_seed = get_seed(*ev, "base_seed", cfg.evaluation.base_seed, ctx);
    }

    if (const json* sc = find(root, "scenarios")) {
        if (!sc->is_array())
            throw Error(ErrorKind::Config, name + ".scenarios: expected an array");
        for (const auto& s : *sc) {
            if (!s.is_string())
                throw Error(ErrorKind::Config, name + ".scenarios: expected strings");
            cfg.scenarios.push_back(s.get<std::string>());
        }
    } else {
        cfg.scenarios.assign(std::begin(kScenarioNames), std::end(kScenarioNames));
    }

    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path,
                                        std::vector<Diagnostic>* diags) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_experiment_config(ss.str(), path, diags);
}

namespace {

bool known_scenario(const std::string& s) {
    return std::any_of(std::begin(kScenarioNames), std::end(kScenarioNames),
                       [&](const char* k) { return s == k; });
}

bool scenario_needs_graphs(const std::string& s) { return s != "static_only"; }

void check_version_paths(const VersionConfig& v, const std::string& ctx, bool graphs_needed,
                         std::vector<Diagnostic>& out) {
    if (v.metrics_csv.empty())
        out.push_back({Severity::Fatal, "", 0, ctx + ": missing metrics file"});
    else if (!fs::is_regular_file(v.metrics_csv))
        out.push_back({Severity::Fatal, "", 0, ctx + ": metrics file not found: " + v.metrics_csv});

    if (!v.src_dir.empty() && !v.graph_file.empty())
        out.push_back({Severity::Fatal, "", 0,
                       ctx + ": give either a source directory or a graph file, not both"});
    else if (graphs_needed && v.src_dir.empty() && v.graph_file.empty())
        out.push_back({Severity::Fatal, "", 0,
                       ctx + ": needs a source directory or graph file for embedding scenarios"});

    if (!v.src_dir.empty() && !fs::is_directory(v.src_dir))
        out.push_back({Severity::Fatal, "", 0, ctx + ": source directory not found: " + v.src_dir});
    if (!v.graph_file.empty() && !fs::is_regular_file(v.graph_file))
        out.push_back({Severity::Fatal, "", 0, ctx + ": graph file not found: " + v.graph_file});
}

}  // namespace

std::vector<Diagnostic> validate_config(const ExperimentConfig& cfg) {
    std::vector<Diagnostic> out;
    auto fatal = [&](std::string msg) { out.push_back({Severity::Fatal, "", 0, std::move(msg)}); };
    auto warn = [&](std::string msg) { out.push_back({Severity::Warning, "", 0, std::move(msg)}); };

    if (cfg.scenarios.empty()) fatal("scenarios list is empty");
    bool graphs_needed = false;
    for (const auto& s : cfg.scenarios) {
        if (!known_scenario(s))
            fatal("unknown scenario '" + s +
                  "' (expected static_only, emb_no_align, emb_random_anchor, emb_knn_anchor, "
                  "emb_gns_anchor or meta)");
        else if (scenario_needs_graphs(s))
            graphs_needed = true;
    }

    if (cfg.pairs.empty()) fatal("no version pairs configured");
    std::set<std::string> ids;
    for (const auto& pair : cfg.pairs) {
        if (!ids.insert(pair.id).second) fatal("duplicate pair id '" + pair.id + "'");
        check_version_paths(pair.old_version, "pair '" + pair.id + "' old version", graphs_needed,
                            out);
        check_version_paths(pair.new_version, "pair '" + pair.id + "' new version", graphs_needed,
                            out);
    }

    if (cfg.dim < 1) fatal("embedding.dim must be >= 1");
    if (cfg.algorithms.empty()) fatal("embedding.algorithms is empty");
    std::set<std::string> seen_algos;
    for (const auto& a : cfg.algorithms) {
        if (a != "node2vec" && a != "line2")
            fatal("unknown embedding algorithm '" + a + "' (expected node2vec or line2)");
        if (!seen_algos.insert(a).second) fatal("duplicate embedding algorithm '" + a + "'");
    }
    if (!(cfg.node2vec.p > 0)) fatal("embedding.node2vec.p must be > 0");
    if (!(cfg.node2vec.q > 0)) fatal("embedding.node2vec.q must be > 0");
    if (cfg.node2vec.walks_per_node < 1) fatal("embedding.node2vec.walks_per_node must be >= 1");
    if (cfg.node2vec.walk_length < 1) fatal("embedding.node2vec.walk_length must be >= 1");
    if (cfg.node2vec.window < 1) fatal("embedding.node2vec.window must be >= 1");
    if (cfg.node2vec.negatives < 0) fatal("embedding.node2vec.negatives must be >= 0");
    if (cfg.node2vec.epochs < 1) fatal("embedding.node2vec.epochs must be >= 1");
    if (!(cfg.node2vec.learning_rate > 0)) fatal("embedding.node2vec.learning_rate must be > 0");
    if (cfg.line2.negatives < 0) fatal("embedding.line2.negatives must be >= 0");
    if (cfg.line2.sample_count < -1) fatal("embedding.line2.sample_count must be >= -1");
    if (!(cfg.line2.learning_rate > 0)) fatal("embedding.line2.learning_rate must be > 0");

    if (cfg.alignment.strategy != "knn" && cfg.alignment.strategy != "gns" &&
        cfg.alignment.strategy != "random")
        fatal("unknown anchor strategy '" + cfg.alignment.strategy +
              "' (expected knn, gns or random)");
    if (cfg.alignment.method != "orthogonal" && cfg.alignment.method != "linear")
        fatal("unknown alignment method '" + cfg.alignment.method +
              "' (expected orthogonal or linear)");
    if (cfg.alignment.k < 1) fatal("alignment.k must be >= 1");
    for (long long n : cfg.resolved_sweep()) {
        if (n != -1 && n < 1)
            fatal("alignment.n_sweep: anchor counts must be >= 1 (or \"all\"), got " +
                  std::to_string(n));
        else if (n != -1 && n < cfg.dim)
            warn("alignment.n_sweep: N=" + std::to_string(n) + " is below embedding dimension d=" +
                 std::to_string(cfg.dim) + "; the fitted transform is under-determined");
    }

    if (cfg.learner.n_trees < 1) fatal("learner.n_trees must be >= 1");
    if (cfg.learner.max_features != -1 && cfg.learner.max_features < 1)
        fatal("learner.max_features must be >= 1 or -1 for ceil(sqrt(F))");
    if (cfg.learner.min_samples_leaf < 1) fatal("learner.min_samples_leaf must be >= 1");
    if (cfg.learner.max_depth != -1 && cfg.learner.max_depth < 1)
        fatal("learner.max_depth must be >= 1 or -1 for unlimited");

    if (cfg.evaluation.repetitions < 1) fatal("evaluation.repetitions must be >= 1");

    return out;
}

bool has_fatal(const std::vector<Diagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Fatal; });
}

}  // namespace cvdp

#include "cvdp/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>

#include "cvdp/alignment.hpp"
#include "cvdp/cache.hpp"
#include "cvdp/dataset.hpp"
#include "cvdp/embedding.hpp"
#include "cvdp/extract.hpp"
#include "cvdp/graph.hpp"
#include "cvdp/learner.hpp"
#include "cvdp/metrics.hpp"

namespace fs = std::filesystem;

namespace cvdp {

namespace {

std::string n2v_fingerprint(const Node2vecParams& p) {
    std::ostringstream ss;
    ss << "p=" << format_double(p.p) << ",q=" << format_double(p.q) << ",r=" << p.walks_per_node
       << ",l=" << p.walk_length << ",w=" << p.window << ",neg=" << p.negatives
       << ",epochs=" << p.epochs << ",lr=" << format_double(p.learning_rate);
    return ss.str();
}

std::string line2_fingerprint(const Line2Params& p) {
    std::ostringstream ss;
    ss << "neg=" << p.negatives << ",samples=" << p.sample_count
       << ",lr=" << format_double(p.learning_rate);
    return ss.str();
}

bool anchor_scenario(const std::string& base) {
    return base == "emb_random_anchor" || base == "emb_knn_anchor" || base == "emb_gns_anchor" ||
           base == "meta";
}

struct CellSpec {
    int pair_idx = 0;
    std::string base;
    std::string algo;         // empty for static_only and meta
    long long n = 0;          // requested anchors; -1 = all; 0 = not applicable
    int rep = 0;
    std::string decorated;    // scenario id as reported
    std::string sweep_label;  // base[:algo] for anchor scenarios, else empty
};

struct VersionData {
    std::shared_ptr<const SimpleDigraph> graph;
    std::string graph_hash;
    std::shared_ptr<const std::vector<ModuleRecord>> records;
};

struct EmbRef {
    std::shared_ptr<const EmbeddingMatrix> emb;
    std::string key;
};

struct Tables {
    FeatureTable old_table;
    FeatureTable new_table;
    long long anchors = -1;
};

class Engine {
public:
    Engine(const ExperimentConfig& cfg, const std::string& workspace, int workers,
           bool deterministic)
        : cfg_(cfg), cache_(workspace), workers_(deterministic ? 1 : std::max(1, workers)) {}

    std::vector<CellResult> run_cells(const std::vector<CellSpec>& specs) {
        std::vector<CellResult> results(specs.size());
        parallel_for(specs.size(), workers_, [&](std::size_t i) {
            const CellSpec& spec = specs[i];
            CellResult& r = results[i];
            r.pair = cfg_.pairs[spec.pair_idx].id;
            r.scenario = spec.decorated;
            r.rep = spec.rep;
            try {
                run_cell(spec, r);
                r.ok = true;
            } catch (const std::exception& e) {
                r.ok = false;
                r.error = e.what();
            }
        });
        return results;
    }

    std::vector<Diagnostic> take_diagnostics() {
        std::scoped_lock lock(mu_);
        return std::move(diags_);
    }

private:
    std::shared_ptr<const std::vector<ModuleRecord>> records_for(int pair_idx, bool old_side) {
        std::scoped_lock lock(mu_);
        const PairConfig& pair = cfg_.pairs[pair_idx];
        std::string key = pair.id + (old_side ? "/old" : "/new");
        auto it = records_memo_.find(key);
        if (it != records_memo_.end()) return it->second;
        const VersionConfig& vc = old_side ? pair.old_version : pair.new_version;
        std::vector<Diagnostic> local;
        auto records = std::make_shared<const std::vector<ModuleRecord>>(
            load_metrics_csv(vc.metrics_csv, &local));
        diags_.insert(diags_.end(), local.begin(), local.end());
        records_memo_[key] = records;
        return records;
    }

    VersionData version_data(int pair_idx, bool old_side) {
        VersionData v;
        v.records = records_for(pair_idx, old_side);
        std::scoped_lock lock(mu_);
        const PairConfig& pair = cfg_.pairs[pair_idx];
        std::string key = pair.id + (old_side ? "/old" : "/new");
        auto it = graph_memo_.find(key);
        if (it == graph_memo_.end()) {
            const VersionConfig& vc = old_side ? pair.old_version : pair.new_version;
            auto sp = std::make_shared<const SimpleDigraph>(load_version_graph(vc));
            it = graph_memo_.emplace(key, sp).first;
            graph_hash_memo_[key] = sha256_hex(digraph_to_string(*sp));
        }
        v.graph = it->second;
        v.graph_hash = graph_hash_memo_[key];
        return v;
    }

    // Called with mu_ held. Source trees go through the content-addressed
    // extraction cache; prebuilt graph files are loaded directly.
    SimpleDigraph load_version_graph(const VersionConfig& vc) {
        if (!vc.graph_file.empty()) return load_digraph(vc.graph_file);
        if (vc.src_dir.empty())
            throw Error(ErrorKind::Config, "no source directory or graph file configured");

        std::vector<std::string> parts{"extract-src"};
        std::vector<std::pair<std::string, std::string>> files;  // (relpath, abspath)
        for (const auto& entry : fs::recursive_directory_iterator(vc.src_dir)) {
            if (!entry.is_regular_file() || entry.path().extension() != ".java") continue;
            files.emplace_back(fs::relative(entry.path(), vc.src_dir).generic_string(),
                               entry.path().string());
        }
        std::sort(files.begin(), files.end());
        for (const auto& [rel, abs] : files) {
            parts.push_back(rel);
            parts.push_back(sha256_file(abs));
        }
        std::string key = cache_key(parts);
        std::string path = cache_.ensure("extract", key, [&](const std::string& tmp) {
            ExtractResult res = extract_directory(vc.src_dir, 1);
            diags_.insert(diags_.end(), res.diagnostics.begin(), res.diagnostics.end());
            write_cdn_file(res.graph, tmp);
        });
        return strip(read_cdn_file(path));
    }

    EmbRef embedding_for(const VersionData& v, const std::string& algo, std::uint64_t seed) {
        std::string fingerprint =
            algo == "node2vec" ? n2v_fingerprint(cfg_.node2vec) : line2_fingerprint(cfg_.line2);
        std::string key = cache_key(
            {"embed", v.graph_hash, algo, fingerprint, std::to_string(cfg_.dim),
             std::to_string(seed)});
        {
            std::scoped_lock lock(mu_);
            auto it = emb_memo_.find(key);
            if (it != emb_memo_.end()) return {it->second, key};
        }
        std::string path = cache_.ensure("embed", key, [&](const std::string& tmp) {
            EmbedConfig ec = cfg_.embed_config(algo);
            ec.seed = seed;
            write_embedding_file(embed(*v.graph, ec, 1), tmp);
        });
        auto sp = std::make_shared<const EmbeddingMatrix>(read_embedding_file(path));
        std::scoped_lock lock(mu_);
        return {emb_memo_.emplace(key, sp).first->second, key};
    }

    struct Aligned {
        std::shared_ptr<const EmbeddingMatrix> emb;
        long long anchors = 0;
    };

    Aligned aligned_embedding(const VersionData& vold, const VersionData& vnew, const EmbRef& e1,
                              const EmbRef& e2, const std::string& strategy, long long requested,
                              std::uint64_t rep_seed) {
        std::uint64_t anchor_seed = mix_seed(rep_seed, "anchors");
        std::string memo_key = cache_key(
            {"align", e1.key, e2.key, strategy, cfg_.alignment.method, std::to_string(requested),
             std::to_string(cfg_.alignment.k), std::to_string(anchor_seed)});
        std::scoped_lock lock(mu_);
        auto it = aligned_memo_.find(memo_key);
        if (it != aligned_memo_.end()) return it->second;

        auto candidates = candidate_nodes(*e1.emb, *e2.emb);
        long long n = requested == -1 ? static_cast<long long>(candidates.size()) : requested;
        std::function<double(const std::string&)> scorer = [](const std::string&) { return 0.0; };
        if (strategy == "knn")
            scorer = [&](const std::string& node) {
                return score_knn_anchor(*e1.emb, *e2.emb, node, cfg_.alignment.k);
            };
        else if (strategy == "gns")
            scorer = [&](const std::string& node) {
                return score_gns_anchor(*vold.graph, *vnew.graph, node);
            };
        AnchorSet anchors =
            select_anchors(candidates, scorer, strategy, static_cast<int>(n), anchor_seed);
        auto [x, y] = anchor_matrices(anchors, *e1.emb, *e2.emb);
        std::vector<Diagnostic> local;
        AlignmentTransform t = cfg_.alignment.method == "orthogonal"
                                   ? fit_orthogonal(x, y)
                                   : fit_linear(x, y, &local);
        diags_.insert(diags_.end(), local.begin(), local.end());
        Aligned out{std::make_shared<const EmbeddingMatrix>(apply_transform(t, *e2.emb)),
                    static_cast<long long>(anchors.pairs.size())};
        aligned_memo_[memo_key] = out;
        return out;
    }

    Tables scenario_tables(const VersionData& vold, const VersionData& vnew,
                           const std::string& algo, const std::string& strategy,
                           long long requested, std::uint64_t rep_seed) {
        EmbRef e1 = embedding_for(vold, algo, mix_seed(rep_seed, "embed-old"));
        EmbRef e2 = embedding_for(vnew, algo, mix_seed(rep_seed, "embed-new"));
        Tables t;
        std::shared_ptr<const EmbeddingMatrix> mapped = e2.emb;
        if (!strategy.empty()) {
            Aligned a = aligned_embedding(vold, vnew, e1, e2, strategy, requested, rep_seed);
            mapped = a.emb;
            t.anchors = a.anchors;
        }
        t.old_table = join_features(*vold.records, *e1.emb);
        t.new_table = join_features(*vnew.records, *mapped);
        return t;
    }

    void run_cell(const CellSpec& spec, CellResult& out) {
        std::uint64_t rep_seed = cfg_.evaluation.base_seed + static_cast<std::uint64_t>(spec.rep);
        FeatureTable new_table;
        std::vector<double> probs;

        if (spec.base == "static_only") {
            auto old_records = records_for(spec.pair_idx, true);
            auto new_records = records_for(spec.pair_idx, false);
            FeatureTable old_table = metrics_table(*old_records);
            new_table = metrics_table(*new_records);
            ForestConfig fc = cfg_.learner;
            fc.seed = mix_seed(rep_seed, "forest-static");
            ForestModel model = train_forest(old_table, fc, 1);
            probs = predict_table(model, new_table);
        } else if (spec.base == "meta") {
            VersionData vold = version_data(spec.pair_idx, true);
            VersionData vnew = version_data(spec.pair_idx, false);
            const char* algos[2] = {"line2", "node2vec"};
            std::vector<double> oob[2], test[2];
            std::vector<int> labels;
            std::vector<std::string> train_names, test_names;
            for (int a = 0; a < 2; ++a) {
                Tables t = scenario_tables(vold, vnew, algos[a], cfg_.alignment.strategy, spec.n,
                                           rep_seed);
                out.anchors = t.anchors;
                ForestConfig fc = cfg_.learner;
                fc.seed = mix_seed(rep_seed, std::string("forest-") + algos[a]);
                ForestModel model = train_forest(t.old_table, fc, 1);
                oob[a] = oob_predictions(model, t.old_table);
                test[a] = predict_table(model, t.new_table);
                if (a == 0) {
                    for (const auto& row : t.old_table.rows) {
                        labels.push_back(row.label);
                        train_names.push_back(row.name);
                    }
                    for (const auto& row : t.new_table.rows) test_names.push_back(row.name);
                    new_table = std::move(t.new_table);
                } else {
                    bool same = t.old_table.rows.size() == train_names.size() &&
                                t.new_table.rows.size() == test_names.size();
                    for (std::size_t i = 0; same && i < train_names.size(); ++i)
                        same = t.old_table.rows[i].name == train_names[i];
                    for (std::size_t i = 0; same && i < test_names.size(); ++i)
                        same = t.new_table.rows[i].name == test_names[i];
                    if (!same)
                        throw Error(ErrorKind::Internal,
                                    "meta pipelines disagree on joined modules");
                }
            }
            std::vector<Diagnostic> local;
            MetaModel meta = train_meta(oob[0], oob[1], labels, &local);
            {
                std::scoped_lock lock(mu_);
                diags_.insert(diags_.end(), local.begin(), local.end());
            }
            probs = predict_meta(meta, test[0], test[1]);
        } else {
            VersionData vold = version_data(spec.pair_idx, true);
            VersionData vnew = version_data(spec.pair_idx, false);
            std::string strategy;
            if (spec.base == "emb_random_anchor") strategy = "random";
            else if (spec.base == "emb_knn_anchor") strategy = "knn";
            else if (spec.base == "emb_gns_anchor") strategy = "gns";
            Tables t = scenario_tables(vold, vnew, spec.algo, strategy, spec.n, rep_seed);
            out.anchors = t.anchors;
            ForestConfig fc = cfg_.learner;
            fc.seed = mix_seed(rep_seed, "forest-" + spec.algo);
            ForestModel model = train_forest(t.old_table, fc, 1);
            new_table = std::move(t.new_table);
            probs = predict_table(model, new_table);
        }

        std::vector<int> labels;
        labels.reserve(new_table.rows.size());
        for (const auto& row : new_table.rows) labels.push_back(row.label);
        out.auc = auc(probs, labels);
        out.f1 = f1(threshold_predictions(probs), labels);
    }

    const ExperimentConfig& cfg_;
    ArtifactCache cache_;
    int workers_;
    std::mutex mu_;
    std::vector<Diagnostic> diags_;
    std::map<std::string, std::shared_ptr<const std::vector<ModuleRecord>>> records_memo_;
    std::map<std::string, std::shared_ptr<const SimpleDigraph>> graph_memo_;
    std::map<std::string, std::string> graph_hash_memo_;
    std::map<std::string, std::shared_ptr<const EmbeddingMatrix>> emb_memo_;
    std::map<std::string, Aligned> aligned_memo_;
};

double mean_of(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double s = 0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

std::string n_label(long long n) { return n == -1 ? std::string("all") : std::to_string(n); }

void aggregate(ExperimentReport& report, const std::vector<CellSpec>& specs) {
    // Summaries, grouped by (pair, scenario) in first-appearance order.
    std::vector<std::pair<std::string, std::string>> order;
    std::map<std::pair<std::string, std::string>, std::pair<std::vector<double>, std::vector<double>>>
        groups;
    for (const auto& cell : report.cells) {
        auto key = std::make_pair(cell.pair, cell.scenario);
        auto it = groups.find(key);
        if (it == groups.end()) {
            order.push_back(key);
            it = groups.emplace(key, std::pair<std::vector<double>, std::vector<double>>{}).first;
        }
        if (cell.ok) {
            it->second.first.push_back(cell.auc);
            it->second.second.push_back(cell.f1);
        }
    }
    for (const auto& key : order) {
        const auto& [aucs, f1s] = groups[key];
        ScenarioSummary s;
        s.pair = key.first;
        s.scenario = key.second;
        s.mean_auc = mean_of(aucs);
        s.std_auc = stddev_of(aucs, s.mean_auc);
        s.mean_f1 = mean_of(f1s);
        s.std_f1 = stddev_of(f1s, s.mean_f1);
        s.repetitions = static_cast<int>(aucs.size());
        report.summaries.push_back(s);
    }

    // Anchor sweep points, grouped by (pair, base[:algo], requested N).
    struct SweepAcc {
        std::vector<double> aucs, f1s;
        long long anchors = 0;
    };
    std::vector<std::tuple<std::string, std::string, long long>> sweep_order;
    std::map<std::tuple<std::string, std::string, long long>, SweepAcc> sweep_groups;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const CellSpec& spec = specs[i];
        const CellResult& cell = report.cells[i];
        if (spec.sweep_label.empty() || !cell.ok) continue;
        auto key = std::make_tuple(cell.pair, spec.sweep_label, spec.n);
        auto it = sweep_groups.find(key);
        if (it == sweep_groups.end()) {
            sweep_order.push_back(key);
            it = sweep_groups.emplace(key, SweepAcc{}).first;
        }
        it->second.aucs.push_back(cell.auc);
        it->second.f1s.push_back(cell.f1);
        it->second.anchors = cell.anchors;
    }
    for (const auto& key : sweep_order) {
        const SweepAcc& acc = sweep_groups[key];
        SweepPoint p;
        p.pair = std::get<0>(key);
        p.scenario = std::get<1>(key);
        p.requested = std::get<2>(key);
        p.anchors = acc.anchors;
        p.mean_auc = mean_of(acc.aucs);
        p.mean_f1 = mean_of(acc.f1s);
        report.sweep.push_back(p);
    }

    // Pairwise scenario comparisons over per-(pair, rep) AUC samples.
    std::vector<std::string> scenario_ids;
    for (const auto& cell : report.cells)
        if (std::find(scenario_ids.begin(), scenario_ids.end(), cell.scenario) ==
            scenario_ids.end())
            scenario_ids.push_back(cell.scenario);
    std::map<std::tuple<std::string, std::string, int>, const CellResult*> by_key;
    for (const auto& cell : report.cells)
        if (cell.ok) by_key[{cell.pair, cell.scenario, cell.rep}] = &cell;
    std::vector<std::pair<std::string, int>> sample_keys;  // (pair, rep) enumeration order
    for (const auto& cell : report.cells) {
        auto key = std::make_pair(cell.pair, cell.rep);
        if (std::find(sample_keys.begin(), sample_keys.end(), key) == sample_keys.end())
            sample_keys.push_back(key);
    }
    for (std::size_t i = 0; i < scenario_ids.size(); ++i) {
        for (std::size_t j = i + 1; j < scenario_ids.size(); ++j) {
            std::vector<double> a, b;
            for (const auto& [pair_id, rep] : sample_keys) {
                auto ia = by_key.find({pair_id, scenario_ids[i], rep});
                auto ib = by_key.find({pair_id, scenario_ids[j], rep});
                if (ia == by_key.end() || ib == by_key.end()) continue;
                a.push_back(ia->second->auc);
                b.push_back(ib->second->auc);
            }
            ScenarioComparison c;
            c.scenario_a = scenario_ids[i];
            c.scenario_b = scenario_ids[j];
            try {
                WilcoxonResult w = wilcoxon_signed_rank(a, b);
                c.n = w.n;
                c.w = w.w;
                c.p_value = w.p_value;
                c.ok = true;
            } catch (const std::exception& e) {
                c.n = a.size();
                c.ok = false;
                c.error = e.what();
            }
            report.comparisons.push_back(c);
        }
    }
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

std::vector<CellSpec> enumerate_cells(const ExperimentConfig& cfg) {
    std::vector<CellSpec> specs;
    const auto sweep = cfg.resolved_sweep();
    bool multi_algo = cfg.algorithms.size() > 1;
    bool multi_n = sweep.size() > 1;

    for (int pi = 0; pi < static_cast<int>(cfg.pairs.size()); ++pi) {
        for (const auto& base : cfg.scenarios) {
            struct Variant {
                std::string algo;
                long long n;
            };
            std::vector<Variant> variants;
            if (base == "static_only") {
                variants.push_back({"", 0});
            } else if (base == "emb_no_align") {
                for (const auto& a : cfg.algorithms) variants.push_back({a, 0});
            } else if (base == "meta") {
                for (long long n : sweep) variants.push_back({"", n});
            } else {
                for (const auto& a : cfg.algorithms)
                    for (long long n : sweep) variants.push_back({a, n});
            }
            for (const auto& v : variants) {
                std::string decorated = base;
                std::string sweep_label;
                if (!v.algo.empty() && multi_algo) decorated += ":" + v.algo;
                if (anchor_scenario(base)) {
                    sweep_label = decorated;
                    if (multi_n) decorated += "[n=" + n_label(v.n) + "]";
                }
                for (int rep = 0; rep < cfg.evaluation.repetitions; ++rep)
                    specs.push_back({pi, base, v.algo, v.n, rep, decorated, sweep_label});
            }
        }
    }
    return specs;
}

}  // namespace

bool ExperimentReport::partial_failures() const {
    return std::any_of(cells.begin(), cells.end(), [](const CellResult& c) { return !c.ok; });
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const std::string& workspace,
                                int workers, bool deterministic) {
    auto diags = validate_config(cfg);
    if (has_fatal(diags)) {
        std::string msg = "invalid experiment config:";
        for (const auto& d : diags)
            if (d.severity == Severity::Fatal) msg += "\n  " + d.message;
        throw Error(ErrorKind::Config, msg);
    }

    ExperimentReport report;
    report.diagnostics = std::move(diags);

    std::vector<CellSpec> specs = enumerate_cells(cfg);
    Engine engine(cfg, workspace, workers, deterministic);
    report.cells = engine.run_cells(specs);
    auto extra = engine.take_diagnostics();
    report.diagnostics.insert(report.diagnostics.end(), extra.begin(), extra.end());

    aggregate(report, specs);
    return report;
}

std::vector<CellResult> run_scenario(const ExperimentConfig& cfg, const PairConfig& pair,
                                     const std::string& scenario, int repetitions,
                                     std::uint64_t base_seed, const std::string& workspace,
                                     int workers) {
    ExperimentConfig local = cfg;
    local.pairs = {pair};
    local.scenarios = {scenario};
    local.evaluation.repetitions = repetitions;
    local.evaluation.base_seed = base_seed;
    return run_experiment(local, workspace, workers, false).cells;
}

void write_report_files(const ExperimentReport& report, const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create report directory: " + out_dir);
    auto open = [&](const char* name) {
        std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
        if (!out) throw Error(ErrorKind::Io, std::string("cannot write report file: ") + name);
        return out;
    };

    {
        auto out = open("report.csv");
        out << "pair,scenario,rep,auc,f1\n";
        for (const auto& c : report.cells)
            if (c.ok)
                out << csv_quote(c.pair) << ',' << csv_quote(c.scenario) << ',' << c.rep << ','
                    << format_double(c.auc) << ',' << format_double(c.f1) << '\n';
    }
    {
        auto out = open("summary.csv");
        out << "pair,scenario,mean_auc,std_auc,mean_f1,std_f1,repetitions\n";
        for (const auto& s : report.summaries)
            out << csv_quote(s.pair) << ',' << csv_quote(s.scenario) << ','
                << format_double(s.mean_auc) << ',' << format_double(s.std_auc) << ','
                << format_double(s.mean_f1) << ',' << format_double(s.std_f1) << ','
                << s.repetitions << '\n';
    }
    {
        auto out = open("comparisons.csv");
        out << "scenario_a,scenario_b,n,w,p_value\n";
        for (const auto& c : report.comparisons) {
            out << csv_quote(c.scenario_a) << ',' << csv_quote(c.scenario_b) << ',' << c.n << ',';
            if (c.ok) out << format_double(c.w) << ',' << format_double(c.p_value);
            else out << ',';
            out << '\n';
        }
    }
    {
        auto out = open("anchor_sweep.csv");
        out << "pair,scenario,requested_n,anchors,mean_auc,mean_f1\n";
        for (const auto& p : report.sweep)
            out << csv_quote(p.pair) << ',' << csv_quote(p.scenario) << ',' << n_label(p.requested)
                << ',' << p.anchors << ',' << format_double(p.mean_auc) << ','
                << format_double(p.mean_f1) << '\n';
    }

    fs::path errors_path = fs::path(out_dir) / "errors.csv";
    if (report.partial_failures()) {
        std::ofstream out(errors_path, std::ios::binary);
        if (!out) throw Error(ErrorKind::Io, "cannot write report file: errors.csv");
        out << "pair,scenario,rep,error\n";
        for (const auto& c : report.cells)
            if (!c.ok)
                out << csv_quote(c.pair) << ',' << csv_quote(c.scenario) << ',' << c.rep << ','
                    << csv_quote(c.error) << '\n';
    } else {
        fs::remove(errors_path, ec);
    }
}

}  // namespace cvdp

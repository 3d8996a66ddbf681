#include "cvdp.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <variant>

#include "cvdp/alignment.hpp"
#include "cvdp/common.hpp"
#include "cvdp/config.hpp"
#include "cvdp/dataset.hpp"
#include "cvdp/embedding.hpp"
#include "cvdp/extract.hpp"
#include "cvdp/graph.hpp"
#include "cvdp/learner.hpp"
#include "cvdp/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

thread_local std::string g_last_error;

cvdp_status status_of(cvdp::ErrorKind kind) {
    switch (kind) {
        case cvdp::ErrorKind::InvalidArgument: return CVDP_ERR_INVALID_ARGUMENT;
        case cvdp::ErrorKind::Parse: return CVDP_ERR_PARSE;
        case cvdp::ErrorKind::Io: return CVDP_ERR_IO;
        case cvdp::ErrorKind::Config: return CVDP_ERR_CONFIG;
        case cvdp::ErrorKind::State: return CVDP_ERR_STATE;
        case cvdp::ErrorKind::Internal: return CVDP_ERR_INTERNAL;
    }
    return CVDP_ERR_INTERNAL;
}

template <typename Fn>
cvdp_status guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        return fn();
    } catch (const cvdp::Error& e) {
        g_last_error = e.what();
        return status_of(e.kind());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CVDP_ERR_INTERNAL;
    }
}

void require(bool ok, const char* message) {
    if (!ok) throw cvdp::Error(cvdp::ErrorKind::InvalidArgument, message);
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::string join_diagnostics(const std::vector<cvdp::Diagnostic>& diags) {
    std::string out;
    for (const auto& d : diags) {
        out += cvdp::format_diagnostic(d);
        out += '\n';
    }
    return out;
}

}  // namespace

struct cvdp_graph {
    std::variant<cvdp::CdnGraph, cvdp::SimpleDigraph> graph;
    std::string diag_text;
};

struct cvdp_embedding {
    cvdp::EmbeddingMatrix matrix;
};

extern "C" {

const char* cvdp_last_error(void) { return g_last_error.c_str(); }

void cvdp_string_free(char* s) { std::free(s); }

cvdp_status cvdp_graph_extract(const char* src_dir, int workers, cvdp_graph** out) {
    if (out) *out = nullptr;
    return guarded([&]() -> cvdp_status {
        require(src_dir && out, "src_dir and out must not be null");
        cvdp::ExtractResult res = cvdp::extract_directory(src_dir, workers);
        auto* g = new cvdp_graph{std::move(res.graph), join_diagnostics(res.diagnostics)};
        *out = g;
        return CVDP_OK;
    });
}

cvdp_status cvdp_graph_read(const char* path, cvdp_graph** out) {
    if (out) *out = nullptr;
    return guarded([&]() -> cvdp_status {
        require(path && out, "path and out must not be null");
        *out = new cvdp_graph{cvdp::read_graph_file(path), ""};
        return CVDP_OK;
    });
}

cvdp_status cvdp_graph_write_cdn(const cvdp_graph* g, const char* path) {
    return guarded([&]() -> cvdp_status {
        require(g && path, "graph and path must not be null");
        const auto* cdn = std::get_if<cvdp::CdnGraph>(&g->graph);
        if (!cdn)
            throw cvdp::Error(cvdp::ErrorKind::State,
                              "not a typed dependency graph; it was loaded stripped");
        cvdp::write_cdn_file(*cdn, path);
        return CVDP_OK;
    });
}

cvdp_status cvdp_graph_write_stripped(const cvdp_graph* g, const char* path) {
    return guarded([&]() -> cvdp_status {
        require(g && path, "graph and path must not be null");
        if (const auto* cdn = std::get_if<cvdp::CdnGraph>(&g->graph))
            cvdp::write_digraph_file(cvdp::strip(*cdn), path);
        else
            cvdp::write_digraph_file(std::get<cvdp::SimpleDigraph>(g->graph), path);
        return CVDP_OK;
    });
}

size_t cvdp_graph_node_count(const cvdp_graph* g) {
    if (!g) return 0;
    if (const auto* cdn = std::get_if<cvdp::CdnGraph>(&g->graph)) return cdn->nodes().size();
    return std::get<cvdp::SimpleDigraph>(g->graph).node_count();
}

size_t cvdp_graph_edge_count(const cvdp_graph* g) {
    if (!g) return 0;
    if (const auto* cdn = std::get_if<cvdp::CdnGraph>(&g->graph)) return cdn->edges().size();
    return std::get<cvdp::SimpleDigraph>(g->graph).edge_count();
}

const char* cvdp_graph_diagnostics(const cvdp_graph* g) {
    return g ? g->diag_text.c_str() : "";
}

void cvdp_graph_free(cvdp_graph* g) { delete g; }

cvdp_embed_options cvdp_embed_options_default(void) {
    cvdp::EmbedConfig e;
    cvdp_embed_options o{};
    o.algorithm = "node2vec";
    o.dim = e.dim;
    o.seed = 0;
    o.workers = 1;
    o.deterministic = 0;
    o.p = e.node2vec.p;
    o.q = e.node2vec.q;
    o.walks_per_node = e.node2vec.walks_per_node;
    o.walk_length = e.node2vec.walk_length;
    o.window = e.node2vec.window;
    o.negatives = e.node2vec.negatives;
    o.epochs = e.node2vec.epochs;
    o.learning_rate = e.node2vec.learning_rate;
    o.line_negatives = e.line2.negatives;
    o.line_sample_count = e.line2.sample_count;
    o.line_learning_rate = e.line2.learning_rate;
    return o;
}

cvdp_status cvdp_graph_embed(const cvdp_graph* g, const cvdp_embed_options* opts,
                             cvdp_embedding** out) {
    if (out) *out = nullptr;
    return guarded([&]() -> cvdp_status {
        require(g && out, "graph and out must not be null");
        cvdp_embed_options o = opts ? *opts : cvdp_embed_options_default();
        cvdp::EmbedConfig ec;
        ec.algorithm = o.algorithm ? o.algorithm : "node2vec";
        ec.dim = o.dim;
        ec.seed = o.seed;
        ec.node2vec = {o.p,       o.q,         o.walks_per_node, o.walk_length,
                       o.window,  o.negatives, o.epochs,         o.learning_rate};
        ec.line2 = {o.line_negatives, o.line_sample_count, o.line_learning_rate};
        int workers = o.deterministic ? 1 : (o.workers > 0 ? o.workers : 1);

        cvdp::SimpleDigraph stripped;
        const cvdp::SimpleDigraph* dg;
        if (const auto* cdn = std::get_if<cvdp::CdnGraph>(&g->graph)) {
            stripped = cvdp::strip(*cdn);
            dg = &stripped;
        } else {
            dg = &std::get<cvdp::SimpleDigraph>(g->graph);
        }
        *out = new cvdp_embedding{cvdp::embed(*dg, ec, workers)};
        return CVDP_OK;
    });
}

cvdp_status cvdp_embedding_read(const char* path, cvdp_embedding** out) {
    if (out) *out = nullptr;
    return guarded([&]() -> cvdp_status {
        require(path && out, "path and out must not be null");
        *out = new cvdp_embedding{cvdp::read_embedding_file(path)};
        return CVDP_OK;
    });
}

cvdp_status cvdp_embedding_write(const cvdp_embedding* e, const char* path) {
    return guarded([&]() -> cvdp_status {
        require(e && path, "embedding and path must not be null");
        cvdp::write_embedding_file(e->matrix, path);
        return CVDP_OK;
    });
}

size_t cvdp_embedding_node_count(const cvdp_embedding* e) {
    return e ? e->matrix.node_ids.size() : 0;
}

int cvdp_embedding_dim(const cvdp_embedding* e) { return e ? e->matrix.dim : 0; }

void cvdp_embedding_free(cvdp_embedding* e) { delete e; }

cvdp_align_options cvdp_align_options_default(void) {
    cvdp_align_options o{};
    o.strategy = "knn";
    o.method = "orthogonal";
    o.n = -1;
    o.k = 10;
    o.seed = 0;
    return o;
}

cvdp_status cvdp_align_files(const char* old_emb_path, const char* new_emb_path,
                             const char* old_graph_path, const char* new_graph_path,
                             const cvdp_align_options* opts, const char* out_transform,
                             const char* out_anchors) {
    return guarded([&]() -> cvdp_status {
        require(old_emb_path && new_emb_path && out_transform,
                "embedding paths and out_transform must not be null");
        cvdp_align_options o = opts ? *opts : cvdp_align_options_default();
        std::string strategy = o.strategy ? o.strategy : "knn";
        std::string method = o.method ? o.method : "orthogonal";
        if (strategy != "knn" && strategy != "gns" && strategy != "random")
            throw cvdp::Error(cvdp::ErrorKind::Config,
                              "unknown anchor strategy '" + strategy + "'");
        if (method != "orthogonal" && method != "linear")
            throw cvdp::Error(cvdp::ErrorKind::Config, "unknown alignment method '" + method + "'");

        cvdp::EmbeddingMatrix e0 = cvdp::read_embedding_file(old_emb_path);
        cvdp::EmbeddingMatrix e1 = cvdp::read_embedding_file(new_emb_path);
        if (e0.dim != e1.dim)
            throw cvdp::Error(cvdp::ErrorKind::InvalidArgument,
                              "embedding dimensions differ: " + std::to_string(e0.dim) + " vs " +
                                  std::to_string(e1.dim));

        cvdp::SimpleDigraph g0, g1;
        if (strategy == "gns") {
            if (!old_graph_path || !new_graph_path)
                throw cvdp::Error(cvdp::ErrorKind::Config,
                                  "the gns strategy needs both version graphs");
            g0 = cvdp::load_digraph(old_graph_path);
            g1 = cvdp::load_digraph(new_graph_path);
        }

        auto candidates = cvdp::candidate_nodes(e0, e1);
        long long n = o.n == -1 ? static_cast<long long>(candidates.size()) : o.n;
        if (n < 1)
            throw cvdp::Error(cvdp::ErrorKind::InvalidArgument, "anchor count must be >= 1");
        std::function<double(const std::string&)> scorer = [](const std::string&) { return 0.0; };
        if (strategy == "knn")
            scorer = [&](const std::string& node) {
                return cvdp::score_knn_anchor(e0, e1, node, o.k);
            };
        else if (strategy == "gns")
            scorer = [&](const std::string& node) { return cvdp::score_gns_anchor(g0, g1, node); };

        cvdp::AnchorSet anchors =
            cvdp::select_anchors(candidates, scorer, strategy, static_cast<int>(n), o.seed);
        auto [x, y] = cvdp::anchor_matrices(anchors, e0, e1);
        cvdp::AlignmentTransform t =
            method == "orthogonal" ? cvdp::fit_orthogonal(x, y) : cvdp::fit_linear(x, y);
        cvdp::write_transform_file(t, out_transform);
        if (out_anchors) cvdp::write_anchor_file(anchors, out_anchors);
        return CVDP_OK;
    });
}

cvdp_forest_options cvdp_forest_options_default(void) {
    cvdp::ForestConfig c;
    cvdp_forest_options o{};
    o.n_trees = c.n_trees;
    o.max_features = c.max_features;
    o.min_samples_leaf = c.min_samples_leaf;
    o.max_depth = c.max_depth;
    o.seed = 0;
    o.workers = 1;
    return o;
}

cvdp_status cvdp_train_forest_csv(const char* features_csv, const cvdp_forest_options* opts,
                                  const char* model_path) {
    return guarded([&]() -> cvdp_status {
        require(features_csv && model_path, "features_csv and model_path must not be null");
        cvdp_forest_options o = opts ? *opts : cvdp_forest_options_default();
        cvdp::FeatureTable table = cvdp::read_feature_csv(features_csv);
        cvdp::ForestConfig fc;
        fc.n_trees = o.n_trees;
        fc.max_features = o.max_features;
        fc.min_samples_leaf = o.min_samples_leaf;
        fc.max_depth = o.max_depth;
        fc.seed = o.seed;
        cvdp::ForestModel model = cvdp::train_forest(table, fc, o.workers > 0 ? o.workers : 1);
        cvdp::write_forest_file(model, model_path);
        return CVDP_OK;
    });
}

cvdp_status cvdp_predict_csv(const char* model_path, const char* features_csv,
                             const char* out_csv) {
    return guarded([&]() -> cvdp_status {
        require(model_path && features_csv && out_csv,
                "model_path, features_csv and out_csv must not be null");
        cvdp::ForestModel model = cvdp::read_forest_file(model_path);
        cvdp::FeatureTable table = cvdp::read_feature_csv(features_csv);
        if (table.feature_names != model.feature_names)
            throw cvdp::Error(cvdp::ErrorKind::InvalidArgument,
                              "feature columns do not match the model");
        std::vector<double> probs = cvdp::predict_table(model, table);
        std::ofstream out(out_csv, std::ios::binary);
        if (!out) throw cvdp::Error(cvdp::ErrorKind::Io,
                                    std::string("cannot open for writing: ") + out_csv);
        out << "name,probability\n";
        for (std::size_t i = 0; i < table.rows.size(); ++i)
            out << table.rows[i].name << ',' << cvdp::format_double(probs[i]) << '\n';
        if (!out) throw cvdp::Error(cvdp::ErrorKind::Io,
                                    std::string("write failed: ") + out_csv);
        return CVDP_OK;
    });
}

cvdp_pipeline_options cvdp_pipeline_options_default(void) {
    cvdp_pipeline_options o{};
    o.workspace = "workspace";
    o.out_dir = nullptr;
    o.workers = 1;
    o.deterministic = 0;
    o.has_seed_override = 0;
    o.seed_override = 0;
    return o;
}

cvdp_status cvdp_pipeline_run(const char* config_path, const cvdp_pipeline_options* opts,
                              char** out_text) {
    if (out_text) *out_text = nullptr;
    return guarded([&]() -> cvdp_status {
        require(config_path, "config_path must not be null");
        cvdp_pipeline_options o = opts ? *opts : cvdp_pipeline_options_default();
        std::string workspace = o.workspace ? o.workspace : "workspace";
        std::string out_dir =
            o.out_dir ? o.out_dir : (fs::path(workspace) / "reports").string();

        std::vector<cvdp::Diagnostic> parse_diags;
        cvdp::ExperimentConfig cfg = cvdp::load_experiment_config(config_path, &parse_diags);
        if (o.has_seed_override) cfg.evaluation.base_seed = o.seed_override;

        cvdp::ExperimentReport report =
            cvdp::run_experiment(cfg, workspace, o.workers > 0 ? o.workers : 1,
                                 o.deterministic != 0);
        cvdp::write_report_files(report, out_dir);

        if (out_text) {
            std::ostringstream ss;
            ss << join_diagnostics(parse_diags) << join_diagnostics(report.diagnostics);
            std::size_t failed = 0;
            for (const auto& c : report.cells) failed += !c.ok;
            ss << report.cells.size() << " cells run, " << failed << " failed; reports in "
               << out_dir << '\n';
            *out_text = dup_string(ss.str());
        }
        return report.partial_failures() ? CVDP_ERR_PARTIAL : CVDP_OK;
    });
}

cvdp_status cvdp_validate_config(const char* config_path, char** out_report) {
    if (out_report) *out_report = nullptr;
    return guarded([&]() -> cvdp_status {
        require(config_path, "config_path must not be null");
        std::vector<cvdp::Diagnostic> diags;
        cvdp::ExperimentConfig cfg = cvdp::load_experiment_config(config_path, &diags);
        auto semantic = cvdp::validate_config(cfg);
        diags.insert(diags.end(), semantic.begin(), semantic.end());
        if (out_report) *out_report = dup_string(join_diagnostics(diags));
        return cvdp::has_fatal(diags) ? CVDP_ERR_CONFIG : CVDP_OK;
    });
}

}  // extern "C"

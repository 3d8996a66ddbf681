#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>

#include "CLI11.hpp"
#include "cvdp.h"

namespace {

struct GlobalOpts {
    std::string workspace = "workspace";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int workers = 1;
    bool deterministic = false;
};

int finish(cvdp_status status) {
    if (status == CVDP_OK) return 0;
    std::fprintf(stderr, "error: %s\n", cvdp_last_error());
    return status == CVDP_ERR_PARTIAL ? 2 : 1;
}

long long parse_anchor_count(const std::string& text) {
    if (text == "all") return -1;
    try {
        std::size_t pos = 0;
        long long value = std::stoll(text, &pos);
        if (pos == text.size()) return value;
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError("--n", "expected a positive integer or 'all'");
}

struct ExtractArgs {
    std::string src, out, diagnostics;
    bool stripped = false;
};

int do_extract(const GlobalOpts& g, const ExtractArgs& a) {
    cvdp_graph* graph = nullptr;
    cvdp_status status = cvdp_graph_extract(a.src.c_str(), g.workers, &graph);
    if (status != CVDP_OK) return finish(status);
    const char* diag = cvdp_graph_diagnostics(graph);
    if (!a.diagnostics.empty()) {
        std::ofstream out(a.diagnostics, std::ios::binary);
        out << diag;
    } else if (*diag) {
        std::fputs(diag, stderr);
    }
    status = a.stripped ? cvdp_graph_write_stripped(graph, a.out.c_str())
                        : cvdp_graph_write_cdn(graph, a.out.c_str());
    if (status == CVDP_OK)
        std::printf("%zu modules, %zu dependencies -> %s\n", cvdp_graph_node_count(graph),
                    cvdp_graph_edge_count(graph), a.out.c_str());
    cvdp_graph_free(graph);
    return finish(status);
}

struct EmbedArgs {
    std::string graph, out;
    cvdp_embed_options opts = cvdp_embed_options_default();
    std::string algorithm = "node2vec";
};

int do_embed(const GlobalOpts& g, EmbedArgs& a) {
    cvdp_graph* graph = nullptr;
    cvdp_status status = cvdp_graph_read(a.graph.c_str(), &graph);
    if (status != CVDP_OK) return finish(status);
    a.opts.algorithm = a.algorithm.c_str();
    a.opts.seed = g.seed;
    a.opts.workers = g.workers;
    a.opts.deterministic = g.deterministic ? 1 : 0;
    cvdp_embedding* emb = nullptr;
    status = cvdp_graph_embed(graph, &a.opts, &emb);
    cvdp_graph_free(graph);
    if (status != CVDP_OK) return finish(status);
    status = cvdp_embedding_write(emb, a.out.c_str());
    if (status == CVDP_OK)
        std::printf("%zu vectors of dimension %d -> %s\n", cvdp_embedding_node_count(emb),
                    cvdp_embedding_dim(emb), a.out.c_str());
    cvdp_embedding_free(emb);
    return finish(status);
}

struct AlignArgs {
    std::string old_emb, new_emb, old_graph, new_graph;
    std::string strategy = "knn", method = "orthogonal", n = "all";
    int k = 10;
    std::string out_transform, out_anchors;
};

int do_align(const GlobalOpts& g, const AlignArgs& a) {
    cvdp_align_options opts = cvdp_align_options_default();
    opts.strategy = a.strategy.c_str();
    opts.method = a.method.c_str();
    opts.n = parse_anchor_count(a.n);
    opts.k = a.k;
    opts.seed = g.seed;
    cvdp_status status = cvdp_align_files(
        a.old_emb.c_str(), a.new_emb.c_str(), a.old_graph.empty() ? nullptr : a.old_graph.c_str(),
        a.new_graph.empty() ? nullptr : a.new_graph.c_str(), &opts, a.out_transform.c_str(),
        a.out_anchors.empty() ? nullptr : a.out_anchors.c_str());
    if (status == CVDP_OK) std::printf("transform -> %s\n", a.out_transform.c_str());
    return finish(status);
}

struct TrainArgs {
    std::string features, model;
    cvdp_forest_options opts = cvdp_forest_options_default();
};

int do_train(const GlobalOpts& g, TrainArgs& a) {
    a.opts.seed = g.seed;
    a.opts.workers = g.workers;
    cvdp_status status = cvdp_train_forest_csv(a.features.c_str(), &a.opts, a.model.c_str());
    if (status == CVDP_OK) std::printf("model -> %s\n", a.model.c_str());
    return finish(status);
}

struct PredictArgs {
    std::string model, features, out;
};

int do_predict(const PredictArgs& a) {
    cvdp_status status = cvdp_predict_csv(a.model.c_str(), a.features.c_str(), a.out.c_str());
    if (status == CVDP_OK) std::printf("predictions -> %s\n", a.out.c_str());
    return finish(status);
}

int do_pipeline(const GlobalOpts& g, const std::string& config, const std::string& out_dir) {
    cvdp_pipeline_options opts = cvdp_pipeline_options_default();
    opts.workspace = g.workspace.c_str();
    opts.out_dir = out_dir.empty() ? nullptr : out_dir.c_str();
    opts.workers = g.workers;
    opts.deterministic = g.deterministic ? 1 : 0;
    opts.has_seed_override = g.seed_given ? 1 : 0;
    opts.seed_override = g.seed;
    char* text = nullptr;
    cvdp_status status = cvdp_pipeline_run(config.c_str(), &opts, &text);
    if (text) {
        std::fputs(text, stdout);
        cvdp_string_free(text);
    }
    if (status == CVDP_ERR_PARTIAL) {
        std::fprintf(stderr, "warning: some cells failed; see errors.csv\n");
        return 2;
    }
    return finish(status);
}

int do_validate(const std::string& config) {
    char* report = nullptr;
    cvdp_status status = cvdp_validate_config(config.c_str(), &report);
    if (report) {
        std::fputs(report, stdout);
        cvdp_string_free(report);
    }
    if (status == CVDP_OK) {
        std::printf("ok\n");
        return 0;
    }
    return finish(status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cross-version defect prediction toolchain"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--workspace", g.workspace, "Artifact cache directory")->capture_default_str();
    auto* seed_opt = app.add_option("--seed", g.seed, "Base random seed");
    app.add_option("--workers", g.workers, "Worker thread count")->capture_default_str();
    app.add_flag("--deterministic", g.deterministic,
                 "Single-worker training for byte-stable outputs");

    int rc = 0;

    auto* extract = app.add_subcommand("extract", "Parse a Java source tree into a typed graph");
    ExtractArgs extract_args;
    extract->add_option("--src", extract_args.src, "Source directory")->required();
    extract->add_option("--out", extract_args.out, "Output graph file")->required();
    extract->add_flag("--stripped", extract_args.stripped, "Write the untyped digraph");
    extract->add_option("--diagnostics", extract_args.diagnostics, "Write parse warnings here");
    extract->callback([&] { rc = do_extract(g, extract_args); });

    auto* embed = app.add_subcommand("embed", "Embed a dependency graph");
    EmbedArgs embed_args;
    embed->add_option("--graph", embed_args.graph, "Graph file")->required();
    embed->add_option("--out", embed_args.out, "Output embedding file")->required();
    embed->add_option("--algorithm", embed_args.algorithm, "node2vec or line2")
        ->capture_default_str();
    embed->add_option("--dim", embed_args.opts.dim, "Vector dimension")->capture_default_str();
    embed->add_option("--p", embed_args.opts.p, "Return parameter")->capture_default_str();
    embed->add_option("--q", embed_args.opts.q, "In-out parameter")->capture_default_str();
    embed->add_option("--walks", embed_args.opts.walks_per_node, "Walks per node")
        ->capture_default_str();
    embed->add_option("--length", embed_args.opts.walk_length, "Walk length")
        ->capture_default_str();
    embed->add_option("--window", embed_args.opts.window, "Context window")
        ->capture_default_str();
    embed->add_option("--negatives", embed_args.opts.negatives, "Negative samples")
        ->capture_default_str();
    embed->add_option("--epochs", embed_args.opts.epochs, "Training epochs")
        ->capture_default_str();
    embed->add_option("--learning-rate", embed_args.opts.learning_rate, "Initial learning rate")
        ->capture_default_str();
    embed->add_option("--line-negatives", embed_args.opts.line_negatives,
                      "Negative samples (line2)")
        ->capture_default_str();
    embed->add_option("--line-samples", embed_args.opts.line_sample_count,
                      "Edge samples (line2); -1 = 100 x edge count")
        ->capture_default_str();
    embed->add_option("--line-learning-rate", embed_args.opts.line_learning_rate,
                      "Initial learning rate (line2)")
        ->capture_default_str();
    embed->callback([&] { rc = do_embed(g, embed_args); });

    auto* align = app.add_subcommand("align", "Fit a transform between two version embeddings");
    AlignArgs align_args;
    align->add_option("--old-emb", align_args.old_emb, "Old-version embedding")->required();
    align->add_option("--new-emb", align_args.new_emb, "New-version embedding")->required();
    align->add_option("--old-graph", align_args.old_graph, "Old-version graph (gns only)");
    align->add_option("--new-graph", align_args.new_graph, "New-version graph (gns only)");
    align->add_option("--strategy", align_args.strategy, "knn, gns or random")
        ->capture_default_str();
    align->add_option("--method", align_args.method, "orthogonal or linear")
        ->capture_default_str();
    align->add_option("--n", align_args.n, "Anchor count or 'all'")->capture_default_str();
    align->add_option("--k", align_args.k, "Neighborhood size for knn scoring")
        ->capture_default_str();
    align->add_option("--out-transform", align_args.out_transform, "Output transform file")
        ->required();
    align->add_option("--out-anchors", align_args.out_anchors, "Output anchor list");
    align->callback([&] { rc = do_align(g, align_args); });

    auto* train = app.add_subcommand("train", "Train a random forest on a feature CSV");
    TrainArgs train_args;
    train->add_option("--features", train_args.features, "name,label,features CSV")->required();
    train->add_option("--model", train_args.model, "Output model file")->required();
    train->add_option("--trees", train_args.opts.n_trees, "Tree count")->capture_default_str();
    train->add_option("--max-features", train_args.opts.max_features,
                      "Features per split; -1 = ceil(sqrt(F))")
        ->capture_default_str();
    train->add_option("--min-samples-leaf", train_args.opts.min_samples_leaf,
                      "Minimum samples per leaf")
        ->capture_default_str();
    train->add_option("--max-depth", train_args.opts.max_depth, "Depth limit; -1 = unlimited")
        ->capture_default_str();
    train->callback([&] { rc = do_train(g, train_args); });

    auto* predict = app.add_subcommand("predict", "Score a feature CSV with a trained model");
    PredictArgs predict_args;
    predict->add_option("--model", predict_args.model, "Model file")->required();
    predict->add_option("--features", predict_args.features, "name,label,features CSV")
        ->required();
    predict->add_option("--out", predict_args.out, "Output name,probability CSV")->required();
    predict->callback([&] { rc = do_predict(predict_args); });

    auto* evaluate = app.add_subcommand("evaluate", "Run an experiment config and write reports");
    std::string eval_config, eval_out;
    evaluate->add_option("--config", eval_config, "Experiment config file")->required();
    evaluate->add_option("--out", eval_out, "Report directory")->required();
    evaluate->callback([&] {
        g.seed_given = seed_opt->count() > 0;
        rc = do_pipeline(g, eval_config, eval_out);
    });

    auto* pipeline = app.add_subcommand("pipeline", "Run an experiment config end to end");
    std::string pipe_config, pipe_out;
    pipeline->add_option("--config", pipe_config, "Experiment config file")->required();
    pipeline->add_option("--out", pipe_out, "Report directory; default <workspace>/reports");
    pipeline->callback([&] {
        g.seed_given = seed_opt->count() > 0;
        rc = do_pipeline(g, pipe_config, pipe_out);
    });

    auto* validate = app.add_subcommand("validate", "Check an experiment config");
    std::string validate_config;
    validate->add_option("--config", validate_config, "Experiment config file")->required();
    validate->callback([&] { rc = do_validate(validate_config); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    return rc;
}

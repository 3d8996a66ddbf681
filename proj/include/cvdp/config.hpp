#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cvdp/common.hpp"
#include "cvdp/embedding.hpp"
#include "cvdp/learner.hpp"

namespace cvdp {

inline constexpr const char* kScenarioNames[] = {
    "static_only", "emb_no_align", "emb_random_anchor",
    "emb_knn_anchor", "emb_gns_anchor", "meta",
};

/// One side of a version pair: either a source tree or a prebuilt graph file,
/// plus the static-metrics CSV. Graphs are optional for metrics-only runs.
struct VersionConfig {
    std::string src_dir;
    std::string graph_file;
    std::string metrics_csv;
};

struct PairConfig {
    std::string id;
    VersionConfig old_version;
    VersionConfig new_version;
};

struct AlignmentSettings {
    std::string strategy = "knn";     // knn | gns | random
    std::string method = "orthogonal";  // orthogonal | linear
    int k = 10;
    // Anchor counts to sweep; -1 means "all candidates". Empty = default
    // {d, 2d, 4d, all}.
    std::vector<long long> n_sweep;
};

struct EvaluationSettings {
    int repetitions = 30;
    std::uint64_t base_seed = 0;
};

struct ExperimentConfig {
    std::vector<PairConfig> pairs;
    int dim = 32;
    std::vector<std::string> algorithms = {"node2vec", "line2"};
    Node2vecParams node2vec;
    Line2Params line2;
    AlignmentSettings alignment;
    ForestConfig learner;
    EvaluationSettings evaluation;
    std::vector<std::string> scenarios;  // all six when the key is absent

    std::vector<long long> resolved_sweep() const;
    EmbedConfig embed_config(const std::string& algorithm) const;
};

/// Parses the JSON experiment file. Type/shape problems throw; unknown keys
/// are reported as warnings when diags is given.
ExperimentConfig parse_experiment_config(const std::string& json_text, const std::string& name,
                                         std::vector<Diagnostic>* diags = nullptr);
ExperimentConfig load_experiment_config(const std::string& path,
                                        std::vector<Diagnostic>* diags = nullptr);

/// Semantic checks: paths, ranges, enum names. Returns every problem at once;
/// Severity::Fatal entries abort a run.
std::vector<Diagnostic> validate_config(const ExperimentConfig& cfg);

bool has_fatal(const std::vector<Diagnostic>& diags);

}  // namespace cvdp

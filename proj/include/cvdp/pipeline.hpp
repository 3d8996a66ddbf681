#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cvdp/common.hpp"
#include "cvdp/config.hpp"

namespace cvdp {

/// One (pair, scenario, repetition) job. `scenario` is the report id: the
/// base name plus `:<algorithm>` when several algorithms run and `[n=<N>]`
/// when the anchor sweep has more than one entry.
struct CellResult {
    std::string pair;
    std::string scenario;
    int rep = 0;
    double auc = 0.0;
    double f1 = 0.0;
    long long anchors = -1;  // resolved anchor count, -1 when not applicable
    bool ok = false;
    std::string error;
};

struct ScenarioSummary {
    std::string pair;
    std::string scenario;
    double mean_auc = 0.0;
    double std_auc = 0.0;
    double mean_f1 = 0.0;
    double std_f1 = 0.0;
    int repetitions = 0;  // successful repetitions aggregated
};

/// Paired two-sided Wilcoxon over per-(pair, repetition) AUC values.
struct ScenarioComparison {
    std::string scenario_a;
    std::string scenario_b;
    std::size_t n = 0;
    double w = 0.0;
    double p_value = 1.0;
    bool ok = false;
    std::string error;
};

/// One anchor-sweep plot point: mean metrics at a requested anchor count.
struct SweepPoint {
    std::string pair;
    std::string scenario;     // base id without the [n=...] suffix
    long long requested = 0;  // -1 = all candidates
    long long anchors = 0;    // resolved count
    double mean_auc = 0.0;
    double mean_f1 = 0.0;
};

struct ExperimentReport {
    std::vector<CellResult> cells;
    std::vector<ScenarioSummary> summaries;
    std::vector<ScenarioComparison> comparisons;
    std::vector<SweepPoint> sweep;
    std::vector<Diagnostic> diagnostics;

    bool partial_failures() const;
};

/// Runs every (pair, scenario, repetition) cell, reusing content-addressed
/// artifacts cached under <workspace>/cache. Cell errors are recorded and do
/// not stop other cells; a fatal config problem throws ErrorKind::Config.
/// Cells are internally single threaded, so reports are byte-stable for any
/// worker count; `deterministic` additionally pins the pool to one worker.
ExperimentReport run_experiment(const ExperimentConfig& cfg, const std::string& workspace,
                                int workers = 1, bool deterministic = false);

/// Single pair and scenario, overriding the config's repetitions and seed.
std::vector<CellResult> run_scenario(const ExperimentConfig& cfg, const PairConfig& pair,
                                     const std::string& scenario, int repetitions,
                                     std::uint64_t base_seed, const std::string& workspace,
                                     int workers = 1);

/// Writes report.csv, summary.csv, comparisons.csv, anchor_sweep.csv and,
/// when cells failed, errors.csv under out_dir.
void write_report_files(const ExperimentReport& report, const std::string& out_dir);

}  // namespace cvdp

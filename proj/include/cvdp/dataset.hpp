#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "cvdp/common.hpp"
#include "cvdp/embedding.hpp"

namespace cvdp {

inline constexpr std::array<const char*, 20> kMetricNames = {
    "wmc", "dit", "noc", "cbo", "rfc",    "lcom",   "lcom3", "npm", "dam", "moa",
    "mfa", "cam", "ic",  "cbm", "amc",    "ca",     "ce",    "avg_cc", "max_cc", "loc",
};

struct ModuleRecord {
    std::string name;  // normalized fully-qualified type name
    std::array<double, 20> metrics{};
    long long bug_count = 0;
};

struct FeatureRow {
    std::string name;
    std::vector<double> features;
    int label = 0;
};

struct FeatureTable {
    std::vector<std::string> feature_names;
    std::vector<FeatureRow> rows;

    double defect_rate() const;
};

int binarize_label(long long bug_count);

/// `$` nested-class separators become `.`; everything else is untouched.
std::string normalize_module_name(std::string_view raw);

/// PROMISE ck-metrics CSV: header-mapped columns, module name from the last
/// `name` column (`name.1` / `version` are bookkeeping), label from `bug`.
/// Duplicate module rows keep the first occurrence.
std::vector<ModuleRecord> load_metrics_csv(const std::string& path,
                                           std::vector<Diagnostic>* diags = nullptr);

struct JoinStats {
    std::size_t matched = 0;
    std::size_t records_dropped = 0;
    std::size_t vectors_dropped = 0;
};

/// Inner join on normalized names: 20 metrics ++ d embedding components.
FeatureTable join_features(const std::vector<ModuleRecord>& records,
                           const EmbeddingMatrix& emb, JoinStats* stats = nullptr);

/// Metrics-only table (static_only scenario): all records, 20 columns.
FeatureTable metrics_table(const std::vector<ModuleRecord>& records);

/// Sorted intersection of normalized name sets.
std::vector<std::string> match_modules(const std::vector<std::string>& names0,
                                       const std::vector<std::string>& names1);

void write_feature_csv(const FeatureTable& table, const std::string& path);
FeatureTable read_feature_csv(const std::string& path);

}  // namespace cvdp

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cvdp/common.hpp"
#include "cvdp/dataset.hpp"

namespace cvdp {

struct ForestConfig {
    int n_trees = 100;
    int max_features = -1;     // -1 = ceil(sqrt(F))
    int min_samples_leaf = 1;
    int max_depth = -1;        // -1 = unlimited
    std::uint64_t seed = 0;
};

/// Axis-aligned binary split; feature < 0 marks a leaf holding class counts.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    long long count0 = 0;
    long long count1 = 0;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct ForestModel {
    std::vector<DecisionTree> trees;
    std::vector<std::string> feature_names;
    ForestConfig config;
    // per tree, the training rows left out of its bootstrap sample
    std::vector<std::vector<int>> oob_rows;
};

/// Logistic regression over two probability inputs.
struct MetaModel {
    double intercept = 0.0;
    double w_a = 0.0;
    double w_b = 0.0;
    bool converged = false;
};

/// 100 bootstrap trees by default, Gini impurity, random feature subsets per
/// split. Deterministic for a fixed seed at any worker count.
ForestModel train_forest(const FeatureTable& table, ForestConfig cfg, int workers = 1);

/// Mean over trees of the leaf's positive-class fraction.
std::vector<double> predict_proba(const ForestModel& m,
                                  const std::vector<std::vector<double>>& rows);
std::vector<double> predict_table(const ForestModel& m, const FeatureTable& table);

/// Out-of-bag probability per training row; rows in every bootstrap fall back
/// to the full-forest prediction.
std::vector<double> oob_predictions(const ForestModel& m, const FeatureTable& table);

MetaModel train_meta(const std::vector<double>& p_a, const std::vector<double>& p_b,
                     const std::vector<int>& labels, std::vector<Diagnostic>* diags = nullptr);
std::vector<double> predict_meta(const MetaModel& m, const std::vector<double>& p_a,
                                 const std::vector<double>& p_b);

/// Penalized negative log-likelihood and its gradient, exposed so tests can
/// check the trainer against finite differences. w = (intercept, w_a, w_b).
double meta_objective(const std::array<double, 3>& w, const std::vector<double>& p_a,
                      const std::vector<double>& p_b, const std::vector<int>& labels);
std::array<double, 3> meta_gradient(const std::array<double, 3>& w,
                                    const std::vector<double>& p_a,
                                    const std::vector<double>& p_b,
                                    const std::vector<int>& labels);

void write_forest_file(const ForestModel& m, const std::string& path);
ForestModel read_forest_file(const std::string& path);
void write_meta_file(const MetaModel& m, const std::string& path);
MetaModel read_meta_file(const std::string& path);

}  // namespace cvdp

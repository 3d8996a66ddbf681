#pragma once

#include <cstddef>
#include <vector>

#include "cvdp/common.hpp"

namespace cvdp {

/// Mann-Whitney AUC with half-credit for tied scores. Labels are 0/1; both
/// classes must be present.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

/// 2PR/(P+R) with the defective class positive; 0 when P+R is 0.
double f1(const std::vector<int>& predictions, const std::vector<int>& labels);

/// Label 1 iff probability >= t.
std::vector<int> threshold_predictions(const std::vector<double>& probabilities,
                                       double t = 0.5);

struct WilcoxonResult {
    double w = 0;        // min(W+, W-) with average ranks
    double p_value = 1;  // two-sided
    std::size_t n = 0;   // pairs remaining after dropping zero differences
    bool exact = false;  // exact null enumeration (n <= 25) vs normal approx
};

/// Two-sided Wilcoxon signed-rank test on paired samples. Zero differences
/// are dropped; tied magnitudes get average ranks. Exact distribution up to
/// n = 25, normal approximation with tie and continuity correction beyond.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a,
                                    const std::vector<double>& b);

}  // namespace cvdp

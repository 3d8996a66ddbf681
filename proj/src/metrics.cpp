#include "cvdp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace cvdp {

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw Error(ErrorKind::InvalidArgument, "auc: scores and labels differ in length");
    std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (int y : labels) n_pos += y != 0;
    std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw Error(ErrorKind::InvalidArgument, "auc: both classes must be present");

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // average ranks over tie groups, summed for the positive class
    double rank_sum_pos = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[idx[j]] == scores[idx[i]]) ++j;
        double avg_rank = (static_cast<double>(i) + static_cast<double>(j) + 1.0) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (labels[idx[k]] != 0) rank_sum_pos += avg_rank;
        i = j;
    }
    double u = rank_sum_pos - static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1) / 2;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double f1(const std::vector<int>& predictions, const std::vector<int>& labels) {
    if (predictions.size() != labels.size())
        throw Error(ErrorKind::InvalidArgument, "f1: predictions and labels differ in length");
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        bool p = predictions[i] != 0;
        bool y = labels[i] != 0;
        if (p && y) ++tp;
        else if (p && !y) ++fp;
        else if (!p && y) ++fn;
    }
    double precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
    double recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
    if (precision + recall == 0) return 0.0;
    return 2 * precision * recall / (precision + recall);
}

std::vector<int> threshold_predictions(const std::vector<double>& probabilities, double t) {
    std::vector<int> out(probabilities.size());
    for (std::size_t i = 0; i < probabilities.size(); ++i) out[i] = probabilities[i] >= t;
    return out;
}

namespace {

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a,
                                    const std::vector<double>& b) {
    if (a.size() != b.size())
        throw Error(ErrorKind::InvalidArgument, "wilcoxon: samples differ in length");

    std::vector<double> diffs;
    diffs.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) diffs.push_back(a[i] - b[i]);
    if (diffs.empty())
        throw Error(ErrorKind::InvalidArgument, "wilcoxon: degenerate comparison");
    if (diffs.size() < 5)
        throw Error(ErrorKind::InvalidArgument,
                    "wilcoxon: fewer than 5 nonzero differences");

    std::size_t n = diffs.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
        return std::abs(diffs[x]) < std::abs(diffs[y]);
    });

    // doubled average ranks are integers even across tie groups
    std::vector<long long> rank2(n);
    double tie_correction = 0;  // sum of (t^3 - t) over tie groups
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && std::abs(diffs[idx[j]]) == std::abs(diffs[idx[i]])) ++j;
        long long doubled = static_cast<long long>(i) + static_cast<long long>(j) + 1;
        for (std::size_t k = i; k < j; ++k) rank2[idx[k]] = doubled;
        double t = static_cast<double>(j - i);
        tie_correction += t * t * t - t;
        i = j;
    }

    long long w_pos2 = 0, w_neg2 = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (diffs[k] > 0) w_pos2 += rank2[k];
        else w_neg2 += rank2[k];
    }
    long long w_min2 = std::min(w_pos2, w_neg2);

    WilcoxonResult result;
    result.w = static_cast<double>(w_min2) / 2.0;
    result.n = n;

    if (n <= 25) {
        result.exact = true;
        // subset-sum over doubled ranks: ways[s] = #sign assignments with
        // doubled W+ equal to s
        long long total = 0;
        for (std::size_t k = 0; k < n; ++k) total += rank2[k];
        std::vector<double> ways(static_cast<std::size_t>(total) + 1, 0.0);
        ways[0] = 1.0;
        long long reached = 0;
        for (std::size_t k = 0; k < n; ++k) {
            long long r = rank2[k];
            reached += r;
            for (long long s = reached; s >= r; --s)
                ways[static_cast<std::size_t>(s)] += ways[static_cast<std::size_t>(s - r)];
        }
        double below = 0;
        for (long long s = 0; s <= w_min2; ++s) below += ways[static_cast<std::size_t>(s)];
        double p = 2.0 * below / std::ldexp(1.0, static_cast<int>(n));
        result.p_value = std::min(1.0, p);
    } else {
        double dn = static_cast<double>(n);
        double mean = dn * (dn + 1) / 4;
        double var = dn * (dn + 1) * (2 * dn + 1) / 24 - tie_correction / 48;
        double sd = std::sqrt(var);
        double z = (result.w + 0.5 - mean) / sd;  // continuity correction toward the mean
        result.p_value = std::min(1.0, 2.0 * normal_cdf(z));
    }
    return result;
}

}  // namespace cvdp

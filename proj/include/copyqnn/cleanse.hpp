#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include "copyqnn/qnnaas.hpp"

namespace copyqnn::cleanse {

struct VarianceScore {
    int sample_index = 0;
    double score = 0.0;
};

/// Softmax of the round-mean raw scores; argmax ties break toward the
/// lowest class index.
std::pair<int, std::vector<double>> derive_label(const service::QueryTensor &tensor,
                                                 int sample_index);

std::vector<double> softmax(const std::vector<double> &scores);

/// Per-sample cross-round variance: population variance (divide by m) of
/// each class's m responses, averaged over the d classes.
std::vector<VarianceScore> variance_scores(const service::QueryTensor &tensor);

/// Indices retained by the Remember Ratio: rank by variance descending
/// (ties by ascending sample index), keep k = max(1, round(rr * n)).
struct Retention {
    std::vector<int> retained; // by original sample index, rank order
    std::vector<int> dropped;
    double rr = 1.0;
};

Retention rr_filter(const std::vector<VarianceScore> &scores, double rr);

/// One cleaned training sample: queried image plus its derived labels.
struct CleanedSample {
    int sample_index = 0;
    std::vector<double> soft_label;
    int hard_label = 0;
    double score = 0.0;
};

struct CleanedDataset {
    std::vector<CleanedSample> retained;
    double rr = 1.0;
    int dropped_count = 0;
};

CleanedDataset clean(const service::QueryTensor &tensor, double rr);

/// Fraction of retained hard labels that agree with ground truth
/// (evaluation-only; the attacker never sees these).
double clean_fraction(const std::vector<CleanedSample> &retained,
                      const std::vector<int> &ground_truth);

/// CSV report: sample_index, score, hard_label, retained_flag,
/// ground_truth (blank when unknown).
void write_cleaning_report(const service::QueryTensor &tensor, const Retention &ret,
                           const std::vector<int> *ground_truth,
                           const std::filesystem::path &path);

} // namespace copyqnn::cleanse

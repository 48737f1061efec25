#include "copyqnn/cleanse.hpp"

#include <algorithm>
#include <cmath>

#include "copyqnn/csv.hpp"
#include "copyqnn/errors.hpp"

namespace copyqnn::cleanse {

std::vector<double> softmax(const std::vector<double> &scores) {
    const double m = *std::max_element(scores.begin(), scores.end());
    std::vector<double> out(scores.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out[i] = std::exp(scores[i] - m);
        sum += out[i];
    }
    for (double &v : out) v /= sum;
    return out;
}

std::pair<int, std::vector<double>> derive_label(const service::QueryTensor &tensor,
                                                 int sample_index) {
    if (sample_index < 0 || sample_index >= tensor.samples)
        throw RangeError("sample index out of range");
    std::vector<double> mean(tensor.classes, 0.0);
    for (int t = 0; t < tensor.rounds; ++t)
        for (int j = 0; j < tensor.classes; ++j)
            mean[j] += tensor.at(t, sample_index, j);
    for (double &v : mean) v /= tensor.rounds;

    const std::vector<double> soft = softmax(mean);
    int hard = 0;
    for (int j = 1; j < tensor.classes; ++j)
        if (soft[j] > soft[hard]) hard = j; // strict: ties keep the lowest index
    return {hard, soft};
}

std::vector<VarianceScore> variance_scores(const service::QueryTensor &tensor) {
    if (tensor.rounds < 2)
        throw ArgumentError("round variance is undefined for fewer than 2 rounds");
    std::vector<VarianceScore> scores(tensor.samples);
    for (int i = 0; i < tensor.samples; ++i) {
        double avg_var = 0.0;
        for (int j = 0; j < tensor.classes; ++j) {
            double mean = 0.0;
            for (int t = 0; t < tensor.rounds; ++t) mean += tensor.at(t, i, j);
            mean /= tensor.rounds;
            double var = 0.0;
            for (int t = 0; t < tensor.rounds; ++t) {
                const double d = tensor.at(t, i, j) - mean;
                var += d * d;
            }
            avg_var += var / tensor.rounds; // population variance
        }
        scores[i] = {i, avg_var / tensor.classes};
    }
    return scores;
}

Retention rr_filter(const std::vector<VarianceScore> &scores, double rr) {
    if (!(rr > 0.0 && rr <= 1.0)) throw ArgumentError("rr must lie in (0, 1]");
    const int n = static_cast<int>(scores.size());
    if (n == 0) throw ArgumentError("nothing to filter");

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (scores[a].score != scores[b].score) return scores[a].score > scores[b].score;
        return scores[a].sample_index < scores[b].sample_index;
    });

    const int keep = std::max(1, static_cast<int>(std::floor(rr * n + 0.5)));
    Retention ret;
    ret.rr = rr;
    for (int i = 0; i < n; ++i) {
        const int idx = scores[order[i]].sample_index;
        (i < keep ? ret.retained : ret.dropped).push_back(idx);
    }
    return ret;
}

CleanedDataset clean(const service::QueryTensor &tensor, double rr) {
    const std::vector<VarianceScore> scores = variance_scores(tensor);
    const Retention ret = rr_filter(scores, rr);

    CleanedDataset out;
    out.rr = rr;
    out.dropped_count = static_cast<int>(ret.dropped.size());
    for (int idx : ret.retained) {
        auto [hard, soft] = derive_label(tensor, idx);
        out.retained.push_back({idx, std::move(soft), hard, scores[idx].score});
    }
    return out;
}

double clean_fraction(const std::vector<CleanedSample> &retained,
                      const std::vector<int> &ground_truth) {
    if (retained.empty()) return 0.0;
    long correct = 0;
    for (const CleanedSample &s : retained) {
        if (s.sample_index < 0 || s.sample_index >= static_cast<int>(ground_truth.size()))
            throw RangeError("ground truth missing for sample " +
                             std::to_string(s.sample_index));
        if (s.hard_label == ground_truth[s.sample_index]) ++correct;
    }
    return static_cast<double>(correct) / retained.size();
}

void write_cleaning_report(const service::QueryTensor &tensor, const Retention &ret,
                           const std::vector<int> *ground_truth,
                           const std::filesystem::path &path) {
    const std::vector<VarianceScore> scores = variance_scores(tensor);
    std::vector<bool> kept(tensor.samples, false);
    for (int idx : ret.retained) kept[idx] = true;

    csv::Writer w(path);
    w.row({"sample_index", "score", "hard_label", "retained_flag", "ground_truth"});
    for (int i = 0; i < tensor.samples; ++i) {
        auto [hard, soft] = derive_label(tensor, i);
        (void)soft;
        std::string gt;
        if (ground_truth && i < static_cast<int>(ground_truth->size()))
            gt = std::to_string((*ground_truth)[i]);
        w.row({std::to_string(i), csv::format_double(scores[i].score),
               std::to_string(hard), kept[i] ? "1" : "0", gt});
    }
}

} // namespace copyqnn::cleanse

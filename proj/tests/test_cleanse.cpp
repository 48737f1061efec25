#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "copyqnn/cleanse.hpp"
#include "copyqnn/csv.hpp"
#include "copyqnn/errors.hpp"

using namespace copyqnn;
using service::QueryTensor;

namespace {

QueryTensor random_tensor(int m, int n, int d, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    QueryTensor t(m, n, d);
    for (double &p : t.probs) p = uni(gen);
    return t;
}

/// Brute-force Eq. 3: explicit triple loop, no shared code with the library.
std::vector<double> brute_force_variance(const QueryTensor &t) {
    std::vector<double> scores(t.samples, 0.0);
    for (int i = 0; i < t.samples; ++i) {
        double total = 0.0;
        for (int j = 0; j < t.classes; ++j) {
            double mean = 0.0;
            for (int r = 0; r < t.rounds; ++r) mean += t.at(r, i, j);
            mean /= t.rounds;
            double var = 0.0;
            for (int r = 0; r < t.rounds; ++r)
                var += (t.at(r, i, j) - mean) * (t.at(r, i, j) - mean);
            total += var / t.rounds;
        }
        scores[i] = total / t.classes;
    }
    return scores;
}

} // namespace

TEST_CASE("derive_label") {
    SUBCASE("identical rounds") {
        QueryTensor t(3, 1, 2);
        for (int r = 0; r < 3; ++r) {
            t.at(r, 0, 0) = 0.9;
            t.at(r, 0, 1) = 0.1;
        }
        const auto [hard, soft] = cleanse::derive_label(t, 0);
        CHECK(hard == 0);
        const double e0 = std::exp(0.9), e1 = std::exp(0.1);
        CHECK(soft[0] == doctest::Approx(e0 / (e0 + e1)).epsilon(1e-12));
        CHECK(soft[1] == doctest::Approx(e1 / (e0 + e1)).epsilon(1e-12));
    }

    SUBCASE("argmax of softmax equals argmax of raw scores") {
        std::mt19937_64 gen(5);
        for (int trial = 0; trial < 100; ++trial) {
            const QueryTensor t = random_tensor(4, 3, 3, gen());
            for (int i = 0; i < t.samples; ++i) {
                std::vector<double> mean(t.classes, 0.0);
                for (int r = 0; r < t.rounds; ++r)
                    for (int j = 0; j < t.classes; ++j) mean[j] += t.at(r, i, j);
                int raw_arg = 0;
                for (int j = 1; j < t.classes; ++j)
                    if (mean[j] > mean[raw_arg]) raw_arg = j;
                CHECK(cleanse::derive_label(t, i).first == raw_arg);
            }
        }
    }

    SUBCASE("hand-computed round mean") {
        QueryTensor t(2, 1, 2);
        t.at(0, 0, 0) = 0.2;
        t.at(0, 0, 1) = 0.8;
        t.at(1, 0, 0) = 0.4;
        t.at(1, 0, 1) = 0.6;
        CHECK(cleanse::derive_label(t, 0).first == 1); // mean [0.3, 0.7]
    }

    SUBCASE("hard labels are invariant to constant score shifts") {
        QueryTensor t = random_tensor(5, 4, 2, 11);
        QueryTensor shifted = t;
        for (int r = 0; r < t.rounds; ++r)
            for (int i = 0; i < t.samples; ++i)
                for (int j = 0; j < t.classes; ++j) shifted.at(r, i, j) += 0.17;
        for (int i = 0; i < t.samples; ++i)
            CHECK(cleanse::derive_label(t, i).first == cleanse::derive_label(shifted, i).first);
    }
}

TEST_CASE("variance_scores") {
    SUBCASE("identical rounds score zero") {
        QueryTensor t(4, 2, 2);
        for (int r = 0; r < 4; ++r)
            for (int i = 0; i < 2; ++i) {
                t.at(r, i, 0) = 0.7;
                t.at(r, i, 1) = 0.3;
            }
        for (const auto &s : cleanse::variance_scores(t)) CHECK(s.score == 0.0);
    }

    SUBCASE("worked two-round example under population variance") {
        QueryTensor t(2, 1, 2);
        t.at(0, 0, 0) = 0.8;
        t.at(0, 0, 1) = 0.2;
        t.at(1, 0, 0) = 0.6;
        t.at(1, 0, 1) = 0.4;
        const auto scores = cleanse::variance_scores(t);
        CHECK(scores[0].score == doctest::Approx(0.01).epsilon(1e-12));
    }

    SUBCASE("batched equals the brute-force triple loop") {
        std::mt19937_64 gen(13);
        for (int trial = 0; trial < 200; ++trial) {
            const int m = 2 + static_cast<int>(gen() % 6);
            const int n = 1 + static_cast<int>(gen() % 12);
            const int d = 2 + static_cast<int>(gen() % 3);
            const QueryTensor t = random_tensor(m, n, d, gen());
            const auto fast = cleanse::variance_scores(t);
            const auto slow = brute_force_variance(t);
            for (int i = 0; i < n; ++i) CHECK(std::abs(fast[i].score - slow[i]) < 1e-12);
        }
    }

    SUBCASE("single round is rejected") {
        const QueryTensor t = random_tensor(1, 3, 2, 17);
        CHECK_THROWS_AS(cleanse::variance_scores(t), ArgumentError);
    }
}

TEST_CASE("rr_filter") {
    const std::vector<cleanse::VarianceScore> scores = {
        {0, 0.5}, {1, 0.1}, {2, 0.4}, {3, 0.3}, {4, 0.2}};

    SUBCASE("rr = 1 keeps everything") {
        const auto ret = cleanse::rr_filter(scores, 1.0);
        CHECK(ret.retained.size() == 5);
        CHECK(ret.dropped.empty());
    }

    SUBCASE("hand-sorted example at rr = 0.6") {
        const auto ret = cleanse::rr_filter(scores, 0.6);
        CHECK(ret.retained == std::vector<int>{0, 2, 3});
        CHECK(ret.dropped.size() == 2);
    }

    SUBCASE("paper-sized split: rr = 0.2 of 40 keeps 8") {
        std::vector<cleanse::VarianceScore> forty;
        for (int i = 0; i < 40; ++i) forty.push_back({i, 0.01 * i});
        CHECK(cleanse::rr_filter(forty, 0.2).retained.size() == 8);
    }

    SUBCASE("invalid ratios are rejected") {
        CHECK_THROWS_AS(cleanse::rr_filter(scores, 0.0), ArgumentError);
        CHECK_THROWS_AS(cleanse::rr_filter(scores, 1.2), ArgumentError);
        CHECK_THROWS_AS(cleanse::rr_filter(scores, -0.5), ArgumentError);
    }

    SUBCASE("retention is monotone in rr and never reorders content") {
        std::mt19937_64 gen(23);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::vector<cleanse::VarianceScore> random_scores;
        for (int i = 0; i < 30; ++i) random_scores.push_back({i, uni(gen)});
        std::vector<int> previous;
        for (double rr : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
            const auto ret = cleanse::rr_filter(random_scores, rr);
            // every previously retained index is still retained
            for (int idx : previous)
                CHECK(std::find(ret.retained.begin(), ret.retained.end(), idx) !=
                      ret.retained.end());
            previous = ret.retained;
            // retained scores dominate dropped scores
            double min_kept = 2.0;
            for (int idx : ret.retained) min_kept = std::min(min_kept, random_scores[idx].score);
            for (int idx : ret.dropped) CHECK(random_scores[idx].score <= min_kept);
        }
    }

    SUBCASE("tiny rr still keeps one sample") {
        const auto ret = cleanse::rr_filter(scores, 0.01);
        CHECK(ret.retained.size() == 1);
        CHECK(ret.retained[0] == 0); // the highest-variance sample
    }
}

TEST_CASE("clean and clean_fraction") {
    SUBCASE("all correct / none correct") {
        QueryTensor t(2, 4, 2);
        for (int r = 0; r < 2; ++r)
            for (int i = 0; i < 4; ++i) {
                t.at(r, i, 0) = 0.9;
                t.at(r, i, 1) = 0.1;
            }
        const auto cleaned = cleanse::clean(t, 1.0);
        CHECK(cleanse::clean_fraction(cleaned.retained, {0, 0, 0, 0}) == 1.0);
        CHECK(cleanse::clean_fraction(cleaned.retained, {1, 1, 1, 1}) == 0.0);
    }

    SUBCASE("corruption planted in low-variance samples is filtered") {
        // samples 0..9: wrong label, almost no cross-round variance;
        // samples 10..39: correct label, visible drift
        std::mt19937_64 gen(31);
        std::uniform_real_distribution<double> drift(-0.2, 0.2);
        QueryTensor t(5, 40, 2);
        std::vector<int> truth(40, 0);
        for (int i = 0; i < 40; ++i) {
            const bool corrupted = i < 10;
            for (int r = 0; r < 5; ++r) {
                const double wobble = corrupted ? 0.001 * r : drift(gen);
                const double p0 = corrupted ? 0.2 + wobble : 0.7 + wobble;
                t.at(r, i, 0) = std::clamp(p0, 0.0, 1.0);
                t.at(r, i, 1) = 1.0 - t.at(r, i, 0);
            }
        }
        const auto all = cleanse::clean(t, 1.0);
        const auto filtered = cleanse::clean(t, 0.6);
        CHECK(filtered.retained.size() == 24);
        CHECK(filtered.dropped_count == 16);
        CHECK(cleanse::clean_fraction(filtered.retained, truth) >
              cleanse::clean_fraction(all.retained, truth));
    }

    SUBCASE("filtering never alters retained content") {
        const QueryTensor t = random_tensor(5, 12, 2, 37);
        const auto all = cleanse::clean(t, 1.0);
        const auto some = cleanse::clean(t, 0.5);
        for (const auto &s : some.retained) {
            const auto match = std::find_if(all.retained.begin(), all.retained.end(),
                                            [&](const auto &o) {
                                                return o.sample_index == s.sample_index;
                                            });
            REQUIRE(match != all.retained.end());
            CHECK(match->hard_label == s.hard_label);
            CHECK(match->soft_label == s.soft_label);
            CHECK(match->score == s.score);
        }
    }
}

TEST_CASE("cleaning report CSV") {
    const QueryTensor t = random_tensor(5, 6, 2, 41);
    const auto ret = cleanse::rr_filter(cleanse::variance_scores(t), 0.5);
    const std::vector<int> truth = {0, 1, 0, 1, 0, 1};
    const auto path = std::filesystem::temp_directory_path() / "copyqnn_cleanse_test.csv";
    cleanse::write_cleaning_report(t, ret, &truth, path);

    const auto rows = csv::read_rows(path);
    REQUIRE(rows.size() == 7);
    CHECK(rows[0] == std::vector<std::string>{"sample_index", "score", "hard_label",
                                              "retained_flag", "ground_truth"});
    int retained_count = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) retained_count += rows[i][3] == "1";
    CHECK(retained_count == 3);
    std::filesystem::remove(path);
}

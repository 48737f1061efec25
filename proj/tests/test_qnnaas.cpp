#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "copyqnn/csv.hpp"
#include "copyqnn/errors.hpp"
#include "copyqnn/qnnaas.hpp"
#include "copyqnn/synth.hpp"
#include "copyqnn/tasks.hpp"
#include "oracles.hpp"

using namespace copyqnn;
using service::QueryLedger;
using service::QueryTensor;
using service::VictimModel;

namespace {

VictimModel random_trained_victim(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    VictimModel v = VictimModel::untrained(4, 2, 2);
    std::uniform_real_distribution<double> uni(-1.5, 1.5);
    for (double &t : v.circuit.thetas) t = uni(gen);
    v.trained = true;
    return v;
}

std::vector<std::vector<double>> random_inputs(int n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::vector<std::vector<double>> xs;
    for (int i = 0; i < n; ++i) xs.push_back(oracle::random_amplitude_input(4, gen));
    return xs;
}

} // namespace

TEST_CASE("serve_query") {
    const VictimModel victim = random_trained_victim(3);
    const noise::NoiseSchedule zero = noise::NoiseSchedule::zero(4);
    QueryLedger ledger;
    const std::vector<double> x = {0.3, 0.1, 0.9, 0.2, 0.1, 0.5, 0.2, 0.8,
                                   0.3, 0.1, 0.9, 0.2, 0.1, 0.5, 0.2, 0.8};

    SUBCASE("untrained victim is refused") {
        VictimModel raw = VictimModel::untrained(4, 2, 2);
        CHECK_THROWS_AS(service::serve_query(raw, x, 0.0, zero, 0, ledger), ServiceError);
    }

    SUBCASE("zero noise analytic equals the noiseless forward") {
        const std::vector<double> scores = service::serve_query(victim, x, 7.5, zero, 0, ledger);
        const std::vector<double> z = sim::forward_features(x, victim.circuit);
        REQUIRE(scores.size() == 2);
        for (int j = 0; j < 2; ++j)
            CHECK(scores[j] == doctest::Approx((1.0 + z[j]) / 2.0).epsilon(1e-10));
        CHECK(ledger.entries.size() == 1);
        CHECK(ledger.total_labels == 1);
    }

    SUBCASE("every query appends exactly one ledger entry") {
        for (int i = 0; i < 5; ++i) service::serve_query(victim, x, 1.0, zero, 0, ledger, 0, i);
        CHECK(ledger.entries.size() == 5);
        CHECK(ledger.total_labels == 5);
    }
}

TEST_CASE("multi_round_query") {
    const VictimModel victim = random_trained_victim(5);
    const noise::NoiseSchedule zero = noise::NoiseSchedule::zero(4);

    SUBCASE("m=5 query hours") {
        const std::vector<double> hours = service::query_hours(5);
        const std::vector<double> expect = {0.0, 4.8, 9.6, 14.4, 19.2};
        REQUIRE(hours.size() == 5);
        for (int t = 0; t < 5; ++t) CHECK(hours[t] == doctest::Approx(expect[t]));
        // cyclic gap is exactly 24/m
        for (int t = 1; t < 5; ++t) CHECK(hours[t] - hours[t - 1] == doctest::Approx(4.8));
        CHECK(24.0 - hours.back() == doctest::Approx(4.8));
    }

    SUBCASE("paper-shaped run: 5 rounds x 40 samples = 200 ledger labels") {
        QueryLedger ledger;
        const auto samples = random_inputs(40, 11);
        const QueryTensor tensor =
            service::multi_round_query(victim, samples, 5, zero, 0, ledger);
        CHECK(tensor.rounds == 5);
        CHECK(tensor.samples == 40);
        CHECK(tensor.classes == 2);
        CHECK(ledger.total_labels == 200);
        CHECK(ledger.entries.size() == 200);
    }

    SUBCASE("zero noise makes all rounds identical") {
        QueryLedger ledger;
        const auto samples = random_inputs(6, 13);
        const QueryTensor tensor =
            service::multi_round_query(victim, samples, 4, zero, 0, ledger);
        for (int i = 0; i < tensor.samples; ++i)
            for (int j = 0; j < tensor.classes; ++j)
                for (int t = 1; t < tensor.rounds; ++t)
                    CHECK(tensor.at(t, i, j) == doctest::Approx(tensor.at(0, i, j)).epsilon(1e-12));
    }

    SUBCASE("identical seeds reproduce the tensor bit-exactly") {
        const noise::NoiseSchedule sched = noise::desk_schedule(4, 0.05, 77);
        const auto samples = random_inputs(8, 17);
        QueryLedger l1, l2;
        const QueryTensor a = service::multi_round_query(victim, samples, 3, sched, 256, l1);
        const QueryTensor b = service::multi_round_query(victim, samples, 3, sched, 256, l2);
        CHECK(a.probs == b.probs);
    }

    SUBCASE("fewer than two rounds is rejected") {
        QueryLedger ledger;
        const auto samples = random_inputs(3, 19);
        CHECK_THROWS_AS(service::multi_round_query(victim, samples, 1, zero, 0, ledger),
                        ArgumentError);
    }

    SUBCASE("raw responses are probabilities") {
        const noise::NoiseSchedule sched = noise::desk_schedule(4, 0.05, 31);
        QueryLedger ledger;
        const auto samples = random_inputs(10, 23);
        const QueryTensor tensor =
            service::multi_round_query(victim, samples, 5, sched, 128, ledger);
        for (double p : tensor.probs) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
    }
}

TEST_CASE("fluctuation study") {
    const VictimModel victim = random_trained_victim(29);
    const std::vector<data::ImageSample> imgs = data::synth_corpus(data::SynthKind::Digits, 60, 5);
    const std::vector<std::vector<double>> inputs = data::resized_inputs(imgs, 4);
    std::vector<int> labels;
    for (const auto &img : imgs) labels.push_back(*img.label % 2);
    const std::vector<double> hours = {0.0, 4.8, 9.6, 14.4, 19.2};

    SUBCASE("zero noise gives identical accuracy at every hour") {
        const noise::NoiseSchedule zero = noise::NoiseSchedule::zero(4);
        const std::vector<double> acc =
            service::fluctuation_study(victim, inputs, labels, zero, hours);
        for (double a : acc) CHECK(a == doctest::Approx(acc.front()).epsilon(1e-15));
    }

    SUBCASE("drifting noise moves accuracy across hours") {
        const noise::NoiseSchedule sched = noise::desk_schedule(4, 0.0, 41);
        const std::vector<double> acc =
            service::fluctuation_study(victim, inputs, labels, sched, hours);
        bool constant = true;
        for (double a : acc) constant = constant && a == acc.front();
        CHECK_FALSE(constant);
    }
}

TEST_CASE("ledger CSV export") {
    const VictimModel victim = random_trained_victim(43);
    const noise::NoiseSchedule zero = noise::NoiseSchedule::zero(4);
    QueryLedger ledger;
    const auto samples = random_inputs(4, 47);
    service::multi_round_query(victim, samples, 2, zero, 0, ledger);

    const auto path = std::filesystem::temp_directory_path() / "copyqnn_ledger_test.csv";
    ledger.export_csv(path);
    const auto rows = csv::read_rows(path);
    REQUIRE(rows.size() == 9); // header + 8 entries
    CHECK(rows[0] == std::vector<std::string>{"round", "sample_index", "hour", "shots",
                                              "score_0", "score_1"});
    CHECK(rows[1][0] == "0");
    std::filesystem::remove(path);
}

TEST_CASE("victim checkpoint round trip") {
    const VictimModel victim = random_trained_victim(53);
    const auto path = std::filesystem::temp_directory_path() / "copyqnn_victim_test.json";
    service::save_victim(victim, path);
    const VictimModel back = service::load_victim(path);
    CHECK(back.circuit.thetas == victim.circuit.thetas);
    CHECK(back.class_qubits == victim.class_qubits);
    CHECK(back.trained);
    std::filesystem::remove(path);
}

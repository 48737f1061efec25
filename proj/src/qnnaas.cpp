#include "copyqnn/qnnaas.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "copyqnn/checkpoint.hpp"
#include "copyqnn/csv.hpp"
#include "copyqnn/errors.hpp"
#include "copyqnn/noisy_executor.hpp"
#include "copyqnn/rng.hpp"

namespace copyqnn::service {

VictimModel VictimModel::untrained(int num_qubits, int num_layers, int num_classes) {
    VictimModel v;
    v.circuit = sim::ParamCircuit(num_qubits, num_layers, sim::Encoding::Amplitude);
    v.num_classes = num_classes;
    for (int j = 0; j < num_classes; ++j) v.class_qubits.push_back(j);
    return v;
}

void QueryLedger::export_csv(const std::filesystem::path &path) const {
    csv::Writer w(path);
    std::vector<std::string> header = {"round", "sample_index", "hour", "shots"};
    const int d = entries.empty() ? 0 : static_cast<int>(entries.front().scores.size());
    for (int j = 0; j < d; ++j) header.push_back("score_" + std::to_string(j));
    w.row(header);
    for (const Entry &e : entries) {
        std::vector<std::string> row = {std::to_string(e.round),
                                        std::to_string(e.sample_index),
                                        csv::format_double(e.hour), std::to_string(e.shots)};
        for (double s : e.scores) row.push_back(csv::format_double(s));
        w.row(row);
    }
}

std::vector<double> query_hours(int rounds, double phase) {
    std::vector<double> hours(rounds);
    for (int t = 0; t < rounds; ++t)
        hours[t] = std::fmod(t * 24.0 / rounds + phase, 24.0);
    return hours;
}

std::vector<double> serve_query(const VictimModel &victim, std::span<const double> x,
                                double hour, const noise::NoiseSchedule &schedule,
                                long shots, QueryLedger &ledger, int round,
                                int sample_index) {
    if (!victim.trained) throw ServiceError("victim model is not trained");
    if (shots < 0) throw ArgumentError("shots must be >= 1, or 0 for analytic mode");

    const noise::NoiseProfile profile = noise::profile_at(schedule, hour);
    std::vector<double> raw;
    if (shots == 0) {
        raw = noise::noisy_execute_analytic(x, victim.circuit, profile);
    } else {
        auto gen = rng::engine(schedule.rng_seed, "query",
                               {static_cast<std::uint64_t>(round),
                                static_cast<std::uint64_t>(sample_index)});
        raw = noise::noisy_execute(x, victim.circuit, profile, shots, gen);
    }

    std::vector<double> scores(victim.num_classes);
    for (int j = 0; j < victim.num_classes; ++j) scores[j] = raw[victim.class_qubits[j]];

    ledger.entries.push_back({round, sample_index, hour, shots, scores});
    ledger.total_labels += 1;
    return scores;
}

QueryTensor multi_round_query(const VictimModel &victim,
                              const std::vector<std::vector<double>> &samples, int rounds,
                              const noise::NoiseSchedule &schedule, long shots,
                              QueryLedger &ledger, double phase) {
    if (rounds < 2)
        throw ArgumentError("multi-round query needs m >= 2 (round variance is "
                            "undefined otherwise)");
    if (samples.empty()) throw ArgumentError("no samples to query");

    QueryTensor tensor(rounds, static_cast<int>(samples.size()), victim.num_classes);
    const std::vector<double> hours = query_hours(rounds, phase);
    for (int t = 0; t < rounds; ++t) {
        for (int i = 0; i < static_cast<int>(samples.size()); ++i) {
            const std::vector<double> scores =
                serve_query(victim, samples[i], hours[t], schedule, shots, ledger, t, i);
            for (int j = 0; j < victim.num_classes; ++j) tensor.at(t, i, j) = scores[j];
        }
    }
    return tensor;
}

namespace {

int argmax(const std::vector<double> &v) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

} // namespace

int classify_noisy(const VictimModel &victim, std::span<const double> x, double hour,
                   const noise::NoiseSchedule &schedule) {
    if (!victim.trained) throw ServiceError("victim model is not trained");
    const noise::NoiseProfile profile = noise::profile_at(schedule, hour);
    const std::vector<double> raw =
        noise::noisy_execute_analytic(x, victim.circuit, profile);
    std::vector<double> scores(victim.num_classes);
    for (int j = 0; j < victim.num_classes; ++j) scores[j] = raw[victim.class_qubits[j]];
    return argmax(scores); // softmax is monotone, argmax of scores suffices
}

int classify_ideal(const VictimModel &victim, std::span<const double> x) {
    if (!victim.trained) throw ServiceError("victim model is not trained");
    const std::vector<double> z = sim::forward_features(x, victim.circuit);
    std::vector<double> scores(victim.num_classes);
    for (int j = 0; j < victim.num_classes; ++j)
        scores[j] = (1.0 + z[victim.class_qubits[j]]) / 2.0;
    return argmax(scores);
}

std::vector<double> fluctuation_study(const VictimModel &victim,
                                      const std::vector<std::vector<double>> &test_inputs,
                                      const std::vector<int> &test_labels,
                                      const noise::NoiseSchedule &schedule,
                                      const std::vector<double> &hours) {
    if (!victim.trained) throw ServiceError("victim model is not trained");
    if (test_inputs.empty() || test_inputs.size() != test_labels.size())
        throw ArgumentError("fluctuation study needs a labeled, nonempty test set");

    std::vector<double> accuracy(hours.size(), 0.0);
    for (std::size_t h = 0; h < hours.size(); ++h) {
        long correct = 0;
        for (std::size_t i = 0; i < test_inputs.size(); ++i)
            if (classify_noisy(victim, test_inputs[i], hours[h], schedule) ==
                test_labels[i])
                ++correct;
        accuracy[h] = static_cast<double>(correct) / test_inputs.size();
    }
    return accuracy;
}

void save_victim(const VictimModel &victim, const std::filesystem::path &path) {
    nlohmann::json j = sim::circuit_to_json(victim.circuit);
    j["class_qubits"] = victim.class_qubits;
    j["num_classes"] = victim.num_classes;
    j["trained"] = victim.trained;
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << j.dump(2) << "\n";
}

VictimModel load_victim(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    nlohmann::json j;
    in >> j;
    VictimModel v;
    v.circuit = sim::circuit_from_json(j);
    v.class_qubits = j.at("class_qubits").get<std::vector<int>>();
    v.num_classes = j.at("num_classes").get<int>();
    v.trained = j.at("trained").get<bool>();
    return v;
}

} // namespace copyqnn::service

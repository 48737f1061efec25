#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "copyqnn/circuit.hpp"
#include "copyqnn/noise_profile.hpp"

namespace copyqnn::service {

/// The cloud-hosted model under attack. Class j's raw score is the noisy
/// P(read 0) of qubit class_qubits[j].
struct VictimModel {
    sim::ParamCircuit circuit;
    int num_classes = 2;
    std::vector<int> class_qubits;
    bool trained = false;

    static VictimModel untrained(int num_qubits, int num_layers, int num_classes);
};

/// Append-only record of every answered query.
struct QueryLedger {
    struct Entry {
        int round;
        int sample_index;
        double hour;
        long shots; // 0 marks an analytic (infinite-shot) execution
        std::vector<double> scores;
    };
    std::vector<Entry> entries;
    long total_labels = 0;

    void export_csv(const std::filesystem::path &path) const;
};

/// Raw responses p[t][i][j] from m rounds over n samples and d classes.
struct QueryTensor {
    int rounds = 0;  // m
    int samples = 0; // n
    int classes = 0; // d
    std::vector<double> probs; // (t, i, j) row-major

    QueryTensor() = default;
    QueryTensor(int m, int n, int d)
        : rounds(m), samples(n), classes(d),
          probs(static_cast<std::size_t>(m) * n * d, 0.0) {}

    double &at(int t, int i, int j) {
        return probs[(static_cast<std::size_t>(t) * samples + i) * classes + j];
    }
    double at(int t, int i, int j) const {
        return probs[(static_cast<std::size_t>(t) * samples + i) * classes + j];
    }
};

/// Per-round query hours: round t (0-based) runs at t * 24/m + phase,
/// wrapped into [0, 24).
std::vector<double> query_hours(int rounds, double phase = 0.0);

/// Answers one query at the given hour: samples the instantaneous noise
/// profile, executes the victim, appends a ledger entry. shots == 0 selects
/// the analytic (infinite-shot) path; the per-shot generator stream is
/// derived from (schedule seed, round, sample_index).
std::vector<double> serve_query(const VictimModel &victim, std::span<const double> x,
                                double hour, const noise::NoiseSchedule &schedule,
                                long shots, QueryLedger &ledger, int round = 0,
                                int sample_index = 0);

/// Schedules the n samples over m rounds spread across the 24-hour noise
/// cycle and collects the m x n x d response tensor. m must be >= 2 so the
/// per-sample round variance downstream is defined.
QueryTensor multi_round_query(const VictimModel &victim,
                              const std::vector<std::vector<double>> &samples, int rounds,
                              const noise::NoiseSchedule &schedule, long shots,
                              QueryLedger &ledger, double phase = 0.0);

/// Softmax + argmax classification of the victim's raw scores for x under
/// analytic noise at `hour`.
int classify_noisy(const VictimModel &victim, std::span<const double> x, double hour,
                   const noise::NoiseSchedule &schedule);

/// Noiseless classification through the statevector path.
int classify_ideal(const VictimModel &victim, std::span<const double> x);

/// Victim accuracy at each hour, analytic noise (the accuracy-fluctuation
/// experiment).
std::vector<double> fluctuation_study(const VictimModel &victim,
                                      const std::vector<std::vector<double>> &test_inputs,
                                      const std::vector<int> &test_labels,
                                      const noise::NoiseSchedule &schedule,
                                      const std::vector<double> &hours);

/// Victim checkpoint: the circuit JSON plus class_qubits.
void save_victim(const VictimModel &victim, const std::filesystem::path &path);
VictimModel load_victim(const std::filesystem::path &path);

} // namespace copyqnn::service

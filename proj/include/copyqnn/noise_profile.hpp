#pragma once

#include <cstdint>
#include <filesystem>
#include <nlohmann/json_fwd.hpp>
#include <vector>

namespace copyqnn::noise {

/// Instantaneous device error rates. Readout entries are per qubit.
struct NoiseProfile {
    double p1q = 0.0; // depolarizing probability after each 1-qubit gate
    double p2q = 0.0; // depolarizing probability after each entangler
    std::vector<double> readout_01; // P(read 1 | prepared 0)
    std::vector<double> readout_10; // P(read 0 | prepared 1)
    std::vector<double> spam_prep;  // state-prep flip probability

    static NoiseProfile zero(int num_qubits);
    int num_qubits() const { return static_cast<int>(readout_01.size()); }
    bool is_zero() const;
    /// Probabilities in range and channel parameters completely positive
    /// (p1q <= 4/3, p2q <= 16/15).
    void validate() const;
};

/// Coherence times carried along for provenance; they are not simulated as
/// relaxation channels (decoherence is folded into the depolarizing rates).
struct CoherenceTimes {
    std::vector<double> t1_us;
    std::vector<double> t2_us;
};

/// Two daily snapshots plus a smooth periodic interpolation between them.
/// Hour 6 returns anchor_a exactly, hour 18 anchor_b exactly (jitter 0).
struct NoiseSchedule {
    NoiseProfile anchor_a; // hour 6.0
    NoiseProfile anchor_b; // hour 18.0
    CoherenceTimes coherence_a;
    CoherenceTimes coherence_b;
    double jitter_sigma = 0.0; // multiplicative log-normal std per sampled rate
    std::uint64_t rng_seed = 0;

    static NoiseSchedule zero(int num_qubits);
    int num_qubits() const { return anchor_a.num_qubits(); }
    bool is_zero() const { return anchor_a.is_zero() && anchor_b.is_zero(); }
};

/// Rate at `hour`: cosine interpolation between the anchors,
/// r = r_a + (r_b - r_a) * (1 - cos(2*pi*(hour - 6)/24)) / 2,
/// then multiplied by exp(N(0, jitter_sigma^2)) from a generator derived
/// from (rng_seed, hour), and clamped to [0, 1]. Pure in (schedule, hour).
NoiseProfile profile_at(const NoiseSchedule &schedule, double hour);

/// JSON schema: per-qubit arrays t1_us, t2_us, readout, err_1q, err_2q,
/// prob_meas0_prep1, prob_meas1_prep0 under "anchor_a"/"anchor_b", plus
/// jitter_sigma and seed. err_1q/err_2q are scalars.
nlohmann::json schedule_to_json(const NoiseSchedule &s);
NoiseSchedule schedule_from_json(const nlohmann::json &j);
NoiseSchedule load_schedule(const std::filesystem::path &path);

/// The published IBM_Brisbane snapshots (qubits 2/3 at 06:00 and 18:00),
/// tiled across `num_qubits` qubits: even qubits take the qubit-2 column,
/// odd qubits the qubit-3 column.
NoiseSchedule brisbane_schedule(int num_qubits, double jitter_sigma, std::uint64_t seed);

/// Desk-scale drifting schedule used as the experiment default: the same
/// drift shape as the published snapshots but with rates amplified so that
/// 1024-shot queries of a small victim produce label-noise levels worth
/// cleaning. Calibrated, not measured.
NoiseSchedule desk_schedule(int num_qubits, double jitter_sigma, std::uint64_t seed);

} // namespace copyqnn::noise

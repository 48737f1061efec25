#include "copyqnn/noise_profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <random>

#include "copyqnn/errors.hpp"
#include "copyqnn/rng.hpp"

namespace copyqnn::noise {

NoiseProfile NoiseProfile::zero(int num_qubits) {
    NoiseProfile p;
    p.readout_01.assign(num_qubits, 0.0);
    p.readout_10.assign(num_qubits, 0.0);
    p.spam_prep.assign(num_qubits, 0.0);
    return p;
}

bool NoiseProfile::is_zero() const {
    auto all0 = [](const std::vector<double> &v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
    };
    return p1q == 0.0 && p2q == 0.0 && all0(readout_01) && all0(readout_10) &&
           all0(spam_prep);
}

void NoiseProfile::validate() const {
    auto in01 = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (p1q < 0.0 || p1q > 4.0 / 3.0)
        throw RangeError("p1q outside the completely positive range [0, 4/3]");
    if (p2q < 0.0 || p2q > 16.0 / 15.0)
        throw RangeError("p2q outside the completely positive range [0, 16/15]");
    if (readout_01.size() != readout_10.size() || readout_01.size() != spam_prep.size())
        throw DimensionError("per-qubit noise arrays have unequal lengths");
    for (std::size_t q = 0; q < readout_01.size(); ++q)
        if (!in01(readout_01[q]) || !in01(readout_10[q]) || !in01(spam_prep[q]))
            throw RangeError("readout/SPAM probability outside [0, 1]");
}

NoiseSchedule NoiseSchedule::zero(int num_qubits) {
    NoiseSchedule s;
    s.anchor_a = NoiseProfile::zero(num_qubits);
    s.anchor_b = NoiseProfile::zero(num_qubits);
    s.coherence_a.t1_us.assign(num_qubits, 0.0);
    s.coherence_a.t2_us.assign(num_qubits, 0.0);
    s.coherence_b = s.coherence_a;
    return s;
}

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

} // namespace

NoiseProfile profile_at(const NoiseSchedule &schedule, double hour) {
    const int nq = schedule.num_qubits();
    const double w =
        (1.0 - std::cos(2.0 * std::numbers::pi * (hour - 6.0) / 24.0)) / 2.0;

    auto mix = [&](double a, double b) { return a + (b - a) * w; };

    NoiseProfile p = NoiseProfile::zero(nq);
    p.p1q = mix(schedule.anchor_a.p1q, schedule.anchor_b.p1q);
    p.p2q = mix(schedule.anchor_a.p2q, schedule.anchor_b.p2q);
    for (int q = 0; q < nq; ++q) {
        p.readout_01[q] = mix(schedule.anchor_a.readout_01[q], schedule.anchor_b.readout_01[q]);
        p.readout_10[q] = mix(schedule.anchor_a.readout_10[q], schedule.anchor_b.readout_10[q]);
        p.spam_prep[q] = mix(schedule.anchor_a.spam_prep[q], schedule.anchor_b.spam_prep[q]);
    }

    if (schedule.jitter_sigma > 0.0) {
        auto gen = rng::engine(schedule.rng_seed, "profile", {rng::bits_of(hour)});
        std::normal_distribution<double> normal(0.0, schedule.jitter_sigma);
        auto jitter = [&](double r) { return clamp01(r * std::exp(normal(gen))); };
        p.p1q = jitter(p.p1q);
        p.p2q = jitter(p.p2q);
        for (int q = 0; q < nq; ++q) {
            p.readout_01[q] = jitter(p.readout_01[q]);
            p.readout_10[q] = jitter(p.readout_10[q]);
            p.spam_prep[q] = jitter(p.spam_prep[q]);
        }
    } else {
        p.p1q = clamp01(p.p1q);
        p.p2q = clamp01(p.p2q);
        for (int q = 0; q < nq; ++q) {
            p.readout_01[q] = clamp01(p.readout_01[q]);
            p.readout_10[q] = clamp01(p.readout_10[q]);
            p.spam_prep[q] = clamp01(p.spam_prep[q]);
        }
    }
    return p;
}

namespace {

nlohmann::json anchor_to_json(const NoiseProfile &p, const CoherenceTimes &c) {
    return nlohmann::json{{"t1_us", c.t1_us},
                          {"t2_us", c.t2_us},
                          {"readout", p.readout_01},
                          {"err_1q", p.p1q},
                          {"err_2q", p.p2q},
                          {"prob_meas0_prep1", p.readout_10},
                          {"prob_meas1_prep0", p.spam_prep}};
}

void anchor_from_json(const nlohmann::json &j, NoiseProfile &p, CoherenceTimes &c) {
    c.t1_us = j.at("t1_us").get<std::vector<double>>();
    c.t2_us = j.at("t2_us").get<std::vector<double>>();
    p.readout_01 = j.at("readout").get<std::vector<double>>();
    p.p1q = j.at("err_1q").get<double>();
    p.p2q = j.at("err_2q").get<double>();
    p.readout_10 = j.at("prob_meas0_prep1").get<std::vector<double>>();
    p.spam_prep = j.at("prob_meas1_prep0").get<std::vector<double>>();
    p.validate();
}

} // namespace

nlohmann::json schedule_to_json(const NoiseSchedule &s) {
    return nlohmann::json{{"anchor_a", anchor_to_json(s.anchor_a, s.coherence_a)},
                          {"anchor_b", anchor_to_json(s.anchor_b, s.coherence_b)},
                          {"jitter_sigma", s.jitter_sigma},
                          {"seed", s.rng_seed}};
}

NoiseSchedule schedule_from_json(const nlohmann::json &j) {
    NoiseSchedule s;
    anchor_from_json(j.at("anchor_a"), s.anchor_a, s.coherence_a);
    anchor_from_json(j.at("anchor_b"), s.anchor_b, s.coherence_b);
    s.jitter_sigma = j.at("jitter_sigma").get<double>();
    s.rng_seed = j.at("seed").get<std::uint64_t>();
    if (s.anchor_a.num_qubits() != s.anchor_b.num_qubits())
        throw DimensionError("schedule anchors have different qubit counts");
    return s;
}

NoiseSchedule load_schedule(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    nlohmann::json j;
    in >> j;
    return schedule_from_json(j);
}

namespace {

// IBM_Brisbane qubits 2/3 at 06:00 and 18:00 (June 30, 2024).
struct Snapshot {
    double t1[2], t2[2], readout[2], err1q[2], err2q;
    double meas0prep1[2], meas1prep0[2];
};

constexpr Snapshot kBrisbane0600{{223.5, 137.5}, {220.1, 139.8}, {0.0123, 0.0144},
                                 {1.973e-4, 2.144e-4}, 4.56e-3,
                                 {0.0124, 0.0082}, {0.0074, 0.0078}};
constexpr Snapshot kBrisbane1800{{219.8, 140.6}, {223.8, 138.5}, {0.0142, 0.0091},
                                 {1.786e-4, 2.36e-4}, 4.98e-3,
                                 {0.0168, 0.0100}, {0.0116, 0.0100}};

void fill_anchor(const Snapshot &snap, int nq, NoiseProfile &p, CoherenceTimes &c) {
    p = NoiseProfile::zero(nq);
    p.p1q = (snap.err1q[0] + snap.err1q[1]) / 2.0;
    p.p2q = snap.err2q;
    c.t1_us.resize(nq);
    c.t2_us.resize(nq);
    for (int q = 0; q < nq; ++q) {
        const int col = q % 2;
        p.readout_01[q] = snap.readout[col];
        p.readout_10[q] = snap.meas0prep1[col];
        p.spam_prep[q] = snap.meas1prep0[col];
        c.t1_us[q] = snap.t1[col];
        c.t2_us[q] = snap.t2[col];
    }
}

} // namespace

NoiseSchedule brisbane_schedule(int num_qubits, double jitter_sigma, std::uint64_t seed) {
    NoiseSchedule s;
    fill_anchor(kBrisbane0600, num_qubits, s.anchor_a, s.coherence_a);
    fill_anchor(kBrisbane1800, num_qubits, s.anchor_b, s.coherence_b);
    s.jitter_sigma = jitter_sigma;
    s.rng_seed = seed;
    return s;
}

NoiseSchedule desk_schedule(int num_qubits, double jitter_sigma, std::uint64_t seed) {
    NoiseSchedule s = brisbane_schedule(num_qubits, jitter_sigma, seed);
    // Entangler depolarization dominates the drift: the cross-round spread
    // of a sample's responses grows with its readout magnitude, so barely
    // separated samples (the ones noise flips) sit at low variance.
    s.anchor_a.p1q = 1.0e-3;
    s.anchor_b.p1q = 3.0e-3;
    s.anchor_a.p2q = 0.02;
    s.anchor_b.p2q = 0.30;
    // Readout confusion is asymmetric across qubits: a standing bias large
    // enough to flip barely separated samples, small against wide margins.
    for (int q = 0; q < num_qubits; ++q) {
        const bool even = (q % 2) == 0;
        s.anchor_a.readout_01[q] = even ? 0.030 : 0.060;
        s.anchor_b.readout_01[q] = even ? 0.060 : 0.110;
        s.anchor_a.readout_10[q] = even ? 0.070 : 0.020;
        s.anchor_b.readout_10[q] = even ? 0.130 : 0.040;
        s.anchor_a.spam_prep[q] = 0.015;
        s.anchor_b.spam_prep[q] = 0.030;
    }
    return s;
}

} // namespace copyqnn::noise

#include "copyqnn/noisy_executor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "copyqnn/errors.hpp"

namespace copyqnn::noise {

DensityMatrix evolve_noisy(std::span<const double> x, const sim::ParamCircuit &circ,
                           const NoiseProfile &profile) {
    if (profile.num_qubits() != circ.num_qubits)
        throw DimensionError("noise profile qubit count does not match the circuit");
    profile.validate();

    DensityMatrix rho = DensityMatrix::zero_state(circ.num_qubits);
    for (int q = 0; q < circ.num_qubits; ++q) bit_flip(rho, q, profile.spam_prep[q]);

    if (circ.encoding == sim::Encoding::Amplitude) {
        apply_householder_encoding(rho, x);
    } else {
        if (x.size() != static_cast<std::size_t>(2 * circ.num_qubits))
            throw DimensionError("angle-pair input length must be 2 * num_qubits");
        for (double v : x)
            if (!(v >= -1.0 && v <= 1.0))
                throw RangeError("angle-pair feature outside [-1, 1]");
        for (int q = 0; q < circ.num_qubits; ++q) {
            apply_ry(rho, q, std::numbers::pi * x[2 * q]);
            depolarize_1q(rho, q, profile.p1q);
            apply_rz(rho, q, std::numbers::pi * x[2 * q + 1]);
            depolarize_1q(rho, q, profile.p1q);
        }
    }

    for (const sim::GateRef &g : sim::gate_sequence(circ)) {
        const double theta = circ.thetas[g.theta_index];
        switch (g.kind) {
        case sim::GateKind::RZ:
            apply_rz(rho, g.q0, theta);
            depolarize_1q(rho, g.q0, profile.p1q);
            break;
        case sim::GateKind::RY:
            apply_ry(rho, g.q0, theta);
            depolarize_1q(rho, g.q0, profile.p1q);
            break;
        case sim::GateKind::CRX:
            apply_crx(rho, g.q0, g.q1, theta);
            depolarize_2q(rho, g.q0, g.q1, profile.p2q);
            break;
        }
    }
    return rho;
}

std::vector<double> noisy_execute_analytic(std::span<const double> x,
                                           const sim::ParamCircuit &circ,
                                           const NoiseProfile &profile) {
    const DensityMatrix rho = evolve_noisy(x, circ, profile);
    std::vector<double> r = zero_prob_all(rho);
    for (int q = 0; q < circ.num_qubits; ++q) {
        const double t = r[q];
        r[q] = (1.0 - profile.readout_01[q]) * t + profile.readout_10[q] * (1.0 - t);
    }
    return r;
}

std::vector<double> noisy_execute(std::span<const double> x, const sim::ParamCircuit &circ,
                                  const NoiseProfile &profile, long shots,
                                  std::mt19937_64 &gen) {
    if (shots < 1) throw ArgumentError("shots must be >= 1");
    const DensityMatrix rho = evolve_noisy(x, circ, profile);
    const std::vector<double> diag = rho.diagonal_probabilities();

    // CDF sampling keeps the draw count per shot fixed (1 + num_qubits).
    std::vector<double> cdf(diag.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        acc += diag[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0;

    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<long> zeros(circ.num_qubits, 0);
    for (long s = 0; s < shots; ++s) {
        const double u = uni(gen);
        const std::size_t outcome =
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
        for (int q = 0; q < circ.num_qubits; ++q) {
            const bool one = (outcome >> q) & 1;
            const double flip = uni(gen);
            bool read_one = one;
            if (!one && flip < profile.readout_01[q]) read_one = true;
            if (one && flip < profile.readout_10[q]) read_one = false;
            if (!read_one) ++zeros[q];
        }
    }
    std::vector<double> r(circ.num_qubits);
    for (int q = 0; q < circ.num_qubits; ++q)
        r[q] = static_cast<double>(zeros[q]) / static_cast<double>(shots);
    return r;
}

} // namespace copyqnn::noise

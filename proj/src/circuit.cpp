#include "copyqnn/circuit.hpp"

#include <cmath>
#include <numbers>

#include "copyqnn/errors.hpp"

namespace copyqnn::sim {

std::string to_string(Encoding e) {
    return e == Encoding::Amplitude ? "amplitude" : "angle-pair";
}

Encoding encoding_from_string(const std::string &s) {
    if (s == "amplitude") return Encoding::Amplitude;
    if (s == "angle-pair") return Encoding::AnglePair;
    throw ArgumentError("unknown encoding '" + s + "'");
}

void ParamCircuit::validate() const {
    if (num_qubits < 1 || num_layers < 1)
        throw ArgumentError("circuit needs at least one qubit and one layer");
    const std::size_t expect = static_cast<std::size_t>(4) * num_qubits * num_layers;
    if (thetas.size() != expect)
        throw DimensionError("theta vector has " + std::to_string(thetas.size()) +
                             " entries, expected " + std::to_string(expect));
    for (double t : thetas)
        if (!std::isfinite(t)) throw RangeError("non-finite circuit angle");
}

std::vector<GateRef> gate_sequence(const ParamCircuit &circ) {
    std::vector<GateRef> gates;
    const int n = circ.num_qubits;
    gates.reserve(static_cast<std::size_t>(4) * n * circ.num_layers);
    for (int l = 0; l < circ.num_layers; ++l) {
        for (int q = 0; q < n; ++q)
            gates.push_back({GateKind::RZ, q, -1, circ.rz1_index(l, q)});
        for (int q = 0; q < n; ++q)
            gates.push_back({GateKind::RY, q, -1, circ.ry_index(l, q)});
        for (int q = 0; q < n; ++q)
            gates.push_back({GateKind::RZ, q, -1, circ.rz2_index(l, q)});
        if (n > 1) {
            for (int q = 0; q < n; ++q)
                gates.push_back({GateKind::CRX, q, (q + 1) % n, circ.crx_index(l, q)});
        }
    }
    return gates;
}

void apply_gate(StateVector &state, const GateRef &g, double theta) {
    switch (g.kind) {
    case GateKind::RZ: apply_rz(state, g.q0, theta); break;
    case GateKind::RY: apply_ry(state, g.q0, theta); break;
    case GateKind::CRX: apply_crx(state, g.q0, g.q1, theta); break;
    }
}

void apply_gate_inverse(StateVector &state, const GateRef &g, double theta) {
    apply_gate(state, g, -theta);
}

void apply_gate_derivative(StateVector &state, const GateRef &g, double theta) {
    const double c = std::cos(theta / 2.0) / 2.0;
    const double s = std::sin(theta / 2.0) / 2.0;
    switch (g.kind) {
    case GateKind::RZ: {
        // d/dt diag(e^{-it/2}, e^{it/2})
        const cplx d0 = cplx{0.0, -0.5} * std::polar(1.0, -theta / 2.0);
        const cplx d1 = cplx{0.0, 0.5} * std::polar(1.0, theta / 2.0);
        const std::size_t mask = std::size_t{1} << g.q0;
        for (std::size_t i = 0; i < state.dim(); ++i)
            state.amps[i] *= (i & mask) ? d1 : d0;
        break;
    }
    case GateKind::RY: {
        const cplx m[2][2] = {{-s, -c}, {c, -s}};
        apply_1q_matrix(state, g.q0, m);
        break;
    }
    case GateKind::CRX: {
        // derivative lives entirely in the control=|1> block
        const cplx m[2][2] = {{-s, cplx{0.0, -c}}, {cplx{0.0, -c}, -s}};
        apply_controlled_matrix_project(state, g.q0, g.q1, m);
        break;
    }
    }
}

StateVector amplitude_encode(std::span<const double> x, int num_qubits) {
    const std::size_t dim = std::size_t{1} << num_qubits;
    if (x.size() > dim)
        throw DimensionError("amplitude input of length " + std::to_string(x.size()) +
                             " exceeds 2^" + std::to_string(num_qubits));
    double sq = 0.0;
    for (double v : x) {
        if (!std::isfinite(v)) throw RangeError("non-finite amplitude input");
        sq += v * v;
    }
    if (sq == 0.0)
        throw DegenerateInputError("amplitude encoding of an all-zero vector");
    const double inv = 1.0 / std::sqrt(sq);
    StateVector state(num_qubits);
    for (std::size_t i = 0; i < x.size(); ++i) state.amps[i] = x[i] * inv;
    return state;
}

StateVector angle_pair_encode(std::span<const double> f, int num_qubits) {
    if (f.size() != static_cast<std::size_t>(2 * num_qubits))
        throw DimensionError("angle-pair input of length " + std::to_string(f.size()) +
                             ", expected " + std::to_string(2 * num_qubits));
    for (double v : f)
        if (!(v >= -1.0 && v <= 1.0))
            throw RangeError("angle-pair feature outside [-1, 1]");
    StateVector state = StateVector::zero_state(num_qubits);
    for (int q = 0; q < num_qubits; ++q) {
        apply_ry(state, q, std::numbers::pi * f[2 * q]);
        apply_rz(state, q, std::numbers::pi * f[2 * q + 1]);
    }
    return state;
}

StateVector encode(std::span<const double> x, const ParamCircuit &circ) {
    return circ.encoding == Encoding::Amplitude
               ? amplitude_encode(x, circ.num_qubits)
               : angle_pair_encode(x, circ.num_qubits);
}

void apply_vqc_inplace(StateVector &state, const ParamCircuit &circ) {
    if (state.num_qubits != circ.num_qubits)
        throw DimensionError("state has " + std::to_string(state.num_qubits) +
                             " qubits, circuit expects " + std::to_string(circ.num_qubits));
    for (const GateRef &g : gate_sequence(circ))
        apply_gate(state, g, circ.thetas[g.theta_index]);
}

StateVector apply_vqc(StateVector state, const ParamCircuit &circ) {
    apply_vqc_inplace(state, circ);
    return state;
}

std::vector<double> forward_features(std::span<const double> x, const ParamCircuit &circ) {
    StateVector state = encode(x, circ);
    apply_vqc_inplace(state, circ);
    return z_readout_all(state);
}

namespace {

/// H|psi> with H = sum_k c_k Z_k (diagonal).
StateVector apply_z_sum(const StateVector &state, std::span<const double> coeff) {
    StateVector out = state;
    for (std::size_t i = 0; i < out.dim(); ++i) {
        double h = 0.0;
        for (std::size_t k = 0; k < coeff.size(); ++k)
            h += ((i >> k) & 1) ? -coeff[k] : coeff[k];
        out.amps[i] *= h;
    }
    return out;
}

} // namespace

std::vector<double> gradient(std::span<const double> x, const ParamCircuit &circ,
                             std::span<const double> cotangent) {
    if (cotangent.size() != static_cast<std::size_t>(circ.num_qubits))
        throw DimensionError("cotangent length must equal the feature length");
    std::vector<double> grads(circ.param_count(), 0.0);

    StateVector phi = encode(x, circ);
    apply_vqc_inplace(phi, circ);
    StateVector lam = apply_z_sum(phi, cotangent);

    const std::vector<GateRef> gates = gate_sequence(circ);
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        const double theta = circ.thetas[it->theta_index];
        apply_gate_inverse(phi, *it, theta);
        StateVector mu = phi;
        apply_gate_derivative(mu, *it, theta);
        grads[it->theta_index] = 2.0 * inner_product(lam, mu).real();
        apply_gate_inverse(lam, *it, theta);
    }
    return grads;
}

std::pair<int, int> param_counts(int enc_layers, int clf_layers, int enc_qubits,
                                 int clf_qubits) {
    if (enc_layers < 1 || clf_layers < 1 || enc_qubits < 1 || clf_qubits < 1)
        throw ArgumentError("param_counts arguments must be positive");
    const int two_q = enc_qubits * enc_layers + clf_qubits * clf_layers;
    return {3 * two_q, two_q};
}

std::pair<int, int> ensemble_param_counts(int committee, int layers, int qubits) {
    if (committee < 1 || layers < 1 || qubits < 1)
        throw ArgumentError("ensemble_param_counts arguments must be positive");
    const int two_q = committee * qubits * layers;
    return {3 * two_q, two_q};
}

} // namespace copyqnn::sim

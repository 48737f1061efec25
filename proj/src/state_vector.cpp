#include "copyqnn/state_vector.hpp"

#include <cmath>

#include "copyqnn/errors.hpp"

namespace copyqnn::sim {

double StateVector::norm() const {
    double s = 0.0;
    for (const cplx &a : amps) s += std::norm(a);
    return std::sqrt(s);
}

namespace {

void check_qubit(const StateVector &state, int q) {
    if (q < 0 || q >= state.num_qubits)
        throw RangeError("qubit index " + std::to_string(q) + " out of range for " +
                         std::to_string(state.num_qubits) + " qubits");
}

} // namespace

void apply_1q_matrix(StateVector &state, int q, const cplx m[2][2]) {
    check_qubit(state, q);
    const std::size_t mask = std::size_t{1} << q;
    const std::size_t lo_mask = mask - 1;
    const std::size_t hi_mask = ~lo_mask;
    const std::size_t half = state.dim() >> 1;
    for (std::size_t i = 0; i < half; ++i) {
        const std::size_t i0 = ((i & hi_mask) << 1) | (i & lo_mask);
        const std::size_t i1 = i0 | mask;
        const cplx a0 = state.amps[i0];
        const cplx a1 = state.amps[i1];
        state.amps[i0] = m[0][0] * a0 + m[0][1] * a1;
        state.amps[i1] = m[1][0] * a0 + m[1][1] * a1;
    }
}

void apply_rz(StateVector &state, int q, double theta) {
    check_qubit(state, q);
    const cplx e0 = std::polar(1.0, -theta / 2.0);
    const cplx e1 = std::polar(1.0, theta / 2.0);
    const std::size_t mask = std::size_t{1} << q;
    for (std::size_t i = 0; i < state.dim(); ++i)
        state.amps[i] *= (i & mask) ? e1 : e0;
}

void apply_ry(StateVector &state, int q, double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const cplx m[2][2] = {{c, -s}, {s, c}};
    apply_1q_matrix(state, q, m);
}

void apply_crx(StateVector &state, int control, int target, double theta) {
    check_qubit(state, control);
    check_qubit(state, target);
    if (control == target) throw RangeError("CRX control equals target");
    const double c = std::cos(theta / 2.0);
    const cplx is{0.0, -std::sin(theta / 2.0)};
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    for (std::size_t i0 = 0; i0 < state.dim(); ++i0) {
        // visit each (target=0, target=1) pair once, control bit set
        if ((i0 & tmask) || !(i0 & cmask)) continue;
        const std::size_t i1 = i0 | tmask;
        const cplx a0 = state.amps[i0];
        const cplx a1 = state.amps[i1];
        state.amps[i0] = c * a0 + is * a1;
        state.amps[i1] = is * a0 + c * a1;
    }
}

void apply_controlled_matrix_project(StateVector &state, int control, int target,
                                     const cplx m[2][2]) {
    check_qubit(state, control);
    check_qubit(state, target);
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if (!(i & cmask)) {
            state.amps[i] = 0.0;
            continue;
        }
        if (i & tmask) continue;
        const std::size_t i1 = i | tmask;
        const cplx a0 = state.amps[i];
        const cplx a1 = state.amps[i1];
        state.amps[i] = m[0][0] * a0 + m[0][1] * a1;
        state.amps[i1] = m[1][0] * a0 + m[1][1] * a1;
    }
}

double z_readout(const StateVector &state, int k) {
    check_qubit(state, k);
    const std::size_t mask = std::size_t{1} << k;
    double expectation = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        const double p = std::norm(state.amps[i]);
        expectation += (i & mask) ? -p : p;
    }
    return expectation;
}

std::vector<double> z_readout_all(const StateVector &state) {
    std::vector<double> z(state.num_qubits, 0.0);
    for (std::size_t i = 0; i < state.dim(); ++i) {
        const double p = std::norm(state.amps[i]);
        for (int k = 0; k < state.num_qubits; ++k)
            z[k] += (i >> k) & 1 ? -p : p;
    }
    return z;
}

std::vector<double> zero_prob_all(const StateVector &state) {
    std::vector<double> z = z_readout_all(state);
    for (double &v : z) v = (1.0 + v) / 2.0;
    return z;
}

cplx inner_product(const StateVector &a, const StateVector &b) {
    if (a.dim() != b.dim()) throw DimensionError("inner product of unequal states");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a.amps[i]) * b.amps[i];
    return s;
}

} // namespace copyqnn::sim

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace copyqnn::sim {

using cplx = std::complex<double>;

/// Pure n-qubit state. Qubit 0 is the least-significant bit of the
/// amplitude index; this ordering is fixed globally so checkpoints and
/// cross-module tests agree.
struct StateVector {
    int num_qubits = 0;
    std::vector<cplx> amps;

    StateVector() = default;
    explicit StateVector(int nq)
        : num_qubits(nq), amps(std::size_t{1} << nq, cplx{0.0, 0.0}) {}

    static StateVector zero_state(int nq) {
        StateVector s(nq);
        s.amps[0] = 1.0;
        return s;
    }

    std::size_t dim() const { return amps.size(); }
    double norm() const;
};

/// RZ(t) = diag(e^{-it/2}, e^{it/2}) on qubit q.
void apply_rz(StateVector &state, int q, double theta);

/// RY(t) = [[cos(t/2), -sin(t/2)], [sin(t/2), cos(t/2)]] on qubit q.
void apply_ry(StateVector &state, int q, double theta);

/// Controlled RX(t) on `target`, active when `control` is |1>.
void apply_crx(StateVector &state, int control, int target, double theta);

/// Applies an arbitrary 2x2 matrix (not necessarily unitary) to qubit q.
void apply_1q_matrix(StateVector &state, int q, const cplx m[2][2]);

/// Applies a 2x2 matrix to `target` restricted to the control=|1> subspace,
/// zeroing the control=|0> amplitudes. This is the derivative action of a
/// controlled gate, used by the adjoint gradient sweep.
void apply_controlled_matrix_project(StateVector &state, int control, int target,
                                     const cplx m[2][2]);

/// <Z_k>: P(bit k = 0) - P(bit k = 1), in [-1, 1].
double z_readout(const StateVector &state, int k);

/// <Z_k> for every qubit k.
std::vector<double> z_readout_all(const StateVector &state);

/// P(bit k = 0) for every qubit k.
std::vector<double> zero_prob_all(const StateVector &state);

/// <a|b>.
cplx inner_product(const StateVector &a, const StateVector &b);

} // namespace copyqnn::sim

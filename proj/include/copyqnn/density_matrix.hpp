#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "copyqnn/state_vector.hpp"

namespace copyqnn::noise {

using sim::cplx;

/// Mixed n-qubit state, row-major 2^n x 2^n. Hermitian with unit trace
/// through every operation below.
struct DensityMatrix {
    int num_qubits = 0;
    std::vector<cplx> m;

    DensityMatrix() = default;
    explicit DensityMatrix(int nq)
        : num_qubits(nq),
          m((std::size_t{1} << nq) * (std::size_t{1} << nq), cplx{0.0, 0.0}) {}

    static DensityMatrix zero_state(int nq) {
        DensityMatrix rho(nq);
        rho.m[0] = 1.0;
        return rho;
    }
    static DensityMatrix from_pure(const sim::StateVector &psi);

    std::size_t dim() const { return std::size_t{1} << num_qubits; }
    cplx &at(std::size_t r, std::size_t c) { return m[r * dim() + c]; }
    const cplx &at(std::size_t r, std::size_t c) const { return m[r * dim() + c]; }

    double trace_real() const;
    double hermiticity_defect() const; // max |rho - rho^dagger| entry
    /// Real parts of the diagonal, clamped at 0 and renormalized; the
    /// measurement distribution over basis states.
    std::vector<double> diagonal_probabilities() const;
};

/// rho -> U rho U^dagger for the named gates.
void apply_rz(DensityMatrix &rho, int q, double theta);
void apply_ry(DensityMatrix &rho, int q, double theta);
void apply_crx(DensityMatrix &rho, int control, int target, double theta);

/// rho -> (1-p) rho + p (I/2 (x) tr_q rho): replaces qubit q with the
/// maximally mixed state with probability p. Valid for p in [0, 4/3].
void depolarize_1q(DensityMatrix &rho, int q, double p);

/// Two-qubit analogue on the (a, b) pair; valid for p in [0, 16/15].
void depolarize_2q(DensityMatrix &rho, int a, int b, double p);

/// rho -> (1-p) rho + p X rho X on qubit q (state-prep flip).
void bit_flip(DensityMatrix &rho, int q, double p);

/// Reflection sending |0...0> to the encoded amplitude vector; applied to
/// both sides of rho. Gives amplitude encoding a well-defined unitary
/// action on prep-flipped initial states.
void apply_householder_encoding(DensityMatrix &rho, std::span<const double> amplitudes);

/// P(bit k = 0) for every qubit, before readout confusion.
std::vector<double> zero_prob_all(const DensityMatrix &rho);

} // namespace copyqnn::noise

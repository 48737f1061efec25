#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "copyqnn/state_vector.hpp"

namespace copyqnn::sim {

enum class Encoding { Amplitude, AnglePair };

std::string to_string(Encoding e);
Encoding encoding_from_string(const std::string &s);

/// Layered variational circuit: per layer an RZ sub-layer, an RY sub-layer,
/// a second RZ sub-layer, then a CRX entangler ring (control k -> target
/// (k+1) mod n). One independent angle per gate.
///
/// Parameter layout, layer-major: for layer l the block
/// [l*4n, (l+1)*4n) holds [rz1 x n][ry x n][rz2 x n][crx x n].
/// With a single qubit the ring is degenerate and skipped; its angle slots
/// stay allocated so layouts are uniform across qubit counts.
struct ParamCircuit {
    int num_qubits = 0;
    int num_layers = 0;
    Encoding encoding = Encoding::Amplitude;
    std::vector<double> thetas;

    ParamCircuit() = default;
    ParamCircuit(int nq, int layers, Encoding enc)
        : num_qubits(nq), num_layers(layers), encoding(enc),
          thetas(static_cast<std::size_t>(4) * nq * layers, 0.0) {}

    int rotation_count() const { return 3 * num_qubits * num_layers; }
    int entangler_count() const { return num_qubits * num_layers; }
    std::size_t param_count() const { return thetas.size(); }

    std::size_t rz1_index(int layer, int q) const { return idx(layer, 0, q); }
    std::size_t ry_index(int layer, int q) const { return idx(layer, 1, q); }
    std::size_t rz2_index(int layer, int q) const { return idx(layer, 2, q); }
    std::size_t crx_index(int layer, int q) const { return idx(layer, 3, q); }

    /// Throws if any angle is non-finite or the layout size is wrong.
    void validate() const;

  private:
    std::size_t idx(int layer, int sub, int q) const {
        return (static_cast<std::size_t>(layer) * 4 + sub) * num_qubits + q;
    }
};

enum class GateKind : std::uint8_t { RZ, RY, CRX };

/// One gate of the unrolled circuit, with the index of its angle in
/// ParamCircuit::thetas.
struct GateRef {
    GateKind kind;
    int q0; // rotation qubit, or CRX control
    int q1; // CRX target (unused for rotations)
    std::size_t theta_index;
};

/// Circuit unrolled to the flat gate list executed by apply_vqc and walked
/// backwards by the adjoint gradient.
std::vector<GateRef> gate_sequence(const ParamCircuit &circ);

void apply_gate(StateVector &state, const GateRef &g, double theta);
void apply_gate_inverse(StateVector &state, const GateRef &g, double theta);
/// |out> = (dU/dtheta) |state>, in place. Not unitary.
void apply_gate_derivative(StateVector &state, const GateRef &g, double theta);

/// Zero-pads x to 2^q entries and L2-normalizes into the amplitudes.
/// All-zero input is rejected (DegenerateInputError).
StateVector amplitude_encode(std::span<const double> x, int num_qubits);

/// From |0...0>, applies RY(pi*f[2k]) then RZ(pi*f[2k+1]) on qubit k.
/// Requires |f| of length exactly 2q with every entry in [-1, 1].
StateVector angle_pair_encode(std::span<const double> f, int num_qubits);

/// Dispatches on circ.encoding.
StateVector encode(std::span<const double> x, const ParamCircuit &circ);

void apply_vqc_inplace(StateVector &state, const ParamCircuit &circ);
StateVector apply_vqc(StateVector state, const ParamCircuit &circ);

/// encode -> VQC -> <Z_k> for all k.
std::vector<double> forward_features(std::span<const double> x, const ParamCircuit &circ);

/// d(cotangent . features)/dtheta for every theta, via an adjoint sweep.
/// Exact for the noiseless statevector.
std::vector<double> gradient(std::span<const double> x, const ParamCircuit &circ,
                             std::span<const double> cotangent);

/// (1Q-gate params, 2Q-gate params) for an encoder + classifier pair.
std::pair<int, int> param_counts(int enc_layers, int clf_layers, int enc_qubits,
                                 int clf_qubits);

/// Same accounting for a homogeneous ensemble of `committee` members.
std::pair<int, int> ensemble_param_counts(int committee, int layers, int qubits);

} // namespace copyqnn::sim

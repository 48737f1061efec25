#pragma once

#include <random>
#include <span>
#include <vector>

#include "copyqnn/circuit.hpp"
#include "copyqnn/density_matrix.hpp"
#include "copyqnn/noise_profile.hpp"

namespace copyqnn::noise {

/// Evolves the circuit on a density matrix under `profile`: per-qubit prep
/// flips on |0...0>, the encoding (amplitude encoding acts through its
/// reflection unitary; angle-pair encoding as gates, each followed by the
/// 1q depolarizing channel), then the VQC with depolarizing after every
/// gate. Returns the state just before measurement.
DensityMatrix evolve_noisy(std::span<const double> x, const sim::ParamCircuit &circ,
                           const NoiseProfile &profile);

/// Per-qubit P(read 0) after readout confusion, in the infinite-shot limit.
std::vector<double> noisy_execute_analytic(std::span<const double> x,
                                           const sim::ParamCircuit &circ,
                                           const NoiseProfile &profile);

/// Draws `shots` measurement samples (shots >= 1) and returns the empirical
/// per-qubit P(read 0). Deterministic given the generator state.
std::vector<double> noisy_execute(std::span<const double> x, const sim::ParamCircuit &circ,
                                  const NoiseProfile &profile, long shots,
                                  std::mt19937_64 &gen);

} // namespace copyqnn::noise

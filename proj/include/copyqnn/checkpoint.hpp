#pragma once

#include <filesystem>
#include <nlohmann/json_fwd.hpp>

#include "copyqnn/circuit.hpp"

namespace copyqnn::sim {

/// {num_qubits, num_layers, encoding, thetas:[...]}. nlohmann serializes
/// doubles with shortest round-trip decimals, so angles survive a JSON
/// round trip bit-exactly.
nlohmann::json circuit_to_json(const ParamCircuit &circ);
ParamCircuit circuit_from_json(const nlohmann::json &j);

void save_circuit(const ParamCircuit &circ, const std::filesystem::path &path);
ParamCircuit load_circuit(const std::filesystem::path &path);

} // namespace copyqnn::sim

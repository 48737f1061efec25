#include "copyqnn/checkpoint.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "copyqnn/errors.hpp"

namespace copyqnn::sim {

nlohmann::json circuit_to_json(const ParamCircuit &circ) {
    return nlohmann::json{{"num_qubits", circ.num_qubits},
                          {"num_layers", circ.num_layers},
                          {"encoding", to_string(circ.encoding)},
                          {"thetas", circ.thetas}};
}

ParamCircuit circuit_from_json(const nlohmann::json &j) {
    ParamCircuit circ;
    circ.num_qubits = j.at("num_qubits").get<int>();
    circ.num_layers = j.at("num_layers").get<int>();
    circ.encoding = encoding_from_string(j.at("encoding").get<std::string>());
    circ.thetas = j.at("thetas").get<std::vector<double>>();
    circ.validate();
    return circ;
}

void save_circuit(const ParamCircuit &circ, const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << circuit_to_json(circ).dump(2) << "\n";
}

ParamCircuit load_circuit(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    nlohmann::json j;
    in >> j;
    return circuit_from_json(j);
}

} // namespace copyqnn::sim

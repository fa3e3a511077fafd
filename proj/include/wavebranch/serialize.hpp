#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "wavebranch/qsim.hpp"

namespace wavebranch {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

json complex_to_json(cplx z);
cplx complex_from_json(const json& j);

json to_json(const qsim::QuantumState& state);
qsim::QuantumState state_from_json(const json& j);

json to_json(const qsim::GateOp& gate);
qsim::GateOp gate_from_json(const json& j);

json to_json(const qsim::Circuit& circuit);
qsim::Circuit circuit_from_json(const json& j);

json to_json(const qsim::Hamiltonian& h);
qsim::Hamiltonian hamiltonian_from_json(const json& j);

// Integer or the string "unknown".
json optional_int_to_json(const std::optional<int>& v);

}  // namespace wavebranch

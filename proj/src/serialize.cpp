#include "wavebranch/serialize.hpp"

namespace wavebranch {

namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ValidationError("complex numbers must be [re, im] pairs");
  }
  return cplx(j[0].get<double>(), j[1].get<double>());
}

json to_json(const qsim::QuantumState& state) {
  json amps = json::array();
  for (cplx z : state.amplitudes()) amps.push_back(complex_to_json(z));
  return json{{"schema_version", kSchemaVersion}, {"n_qubits", state.n_qubits()}, {"amplitudes", std::move(amps)}};
}

qsim::QuantumState state_from_json(const json& j) {
  const json& amps = require(j, "amplitudes");
  if (!amps.is_array()) throw ValidationError("'amplitudes' must be an array");
  std::vector<cplx> v;
  v.reserve(amps.size());
  for (const json& a : amps) v.push_back(complex_from_json(a));
  qsim::QuantumState s = qsim::QuantumState::from_amplitudes(std::move(v));
  if (j.contains("n_qubits") && j.at("n_qubits").get<int>() != s.n_qubits()) {
    throw ValidationError("'n_qubits' does not match amplitude count");
  }
  return s;
}

json to_json(const qsim::GateOp& gate) {
  json m = json::array();
  for (int k = 0; k < (1 << (2 * gate.arity())); ++k) m.push_back(complex_to_json(gate.entries()[k]));
  return json{{"targets", gate.targets()}, {"matrix", std::move(m)}, {"label", gate.label()}};
}

qsim::GateOp gate_from_json(const json& j) {
  std::vector<int> targets = require(j, "targets").get<std::vector<int>>();
  const json& m = require(j, "matrix");
  const int dim = 1 << targets.size();
  if (targets.empty() || targets.size() > 2 || !m.is_array() || static_cast<int>(m.size()) != dim * dim) {
    throw ValidationError("gate matrix must hold 4 or 16 row-major entries");
  }
  Eigen::MatrixXcd mat(dim, dim);
  for (int k = 0; k < dim * dim; ++k) mat(k / dim, k % dim) = complex_from_json(m[k]);
  std::string label = j.contains("label") ? j.at("label").get<std::string>() : std::string();
  return qsim::GateOp(std::move(targets), mat, std::move(label));
}

json to_json(const qsim::Circuit& circuit) {
  json gates = json::array();
  for (const qsim::GateOp& g : circuit.gates()) gates.push_back(to_json(g));
  return json{{"schema_version", kSchemaVersion},
              {"n_qubits", circuit.n_qubits()},
              {"gate_count", circuit.gate_count()},
              {"gates", std::move(gates)}};
}

qsim::Circuit circuit_from_json(const json& j) {
  qsim::Circuit c(require(j, "n_qubits").get<int>());
  for (const json& g : require(j, "gates")) c.append(gate_from_json(g));
  return c;
}

json to_json(const qsim::Hamiltonian& h) {
  json terms = json::array();
  for (const qsim::PauliTerm& t : h.terms()) terms.push_back(json{{"coefficient", t.coefficient}, {"paulis", t.paulis}});
  return json{{"schema_version", kSchemaVersion}, {"n_qubits", h.n_qubits()}, {"terms", std::move(terms)}};
}

qsim::Hamiltonian hamiltonian_from_json(const json& j) {
  std::vector<qsim::PauliTerm> terms;
  for (const json& t : require(j, "terms")) {
    terms.push_back({require(t, "coefficient").get<double>(), require(t, "paulis").get<std::string>()});
  }
  return qsim::Hamiltonian(require(j, "n_qubits").get<int>(), std::move(terms));
}

json optional_int_to_json(const std::optional<int>& v) {
  if (v) return json(*v);
  return json("unknown");
}

}  // namespace wavebranch

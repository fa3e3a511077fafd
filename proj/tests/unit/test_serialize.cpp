#include <gtest/gtest.h>

#include "wavebranch/serialize.hpp"

using namespace wavebranch;
using namespace wavebranch::qsim;

TEST(Serialize, StateUsesReImPairs) {
  const QuantumState s = QuantumState::from_amplitudes({M_SQRT1_2, cplx(0.0, M_SQRT1_2)});
  const json j = to_json(s);
  EXPECT_EQ(j.at("schema_version"), kSchemaVersion);
  EXPECT_EQ(j.at("n_qubits"), 1);
  EXPECT_DOUBLE_EQ(j.at("amplitudes")[1][1].get<double>(), M_SQRT1_2);
  EXPECT_EQ(state_from_json(j), s);
}

TEST(Serialize, StateRoundTripIsBitExact) {
  const QuantumState s = haar_random_state(4, 77);
  EXPECT_EQ(state_from_json(json::parse(to_json(s).dump())), s);
}

TEST(Serialize, CircuitRoundTrip) {
  const Circuit c = random_circuit(4, 2, 5);
  const json j = to_json(c);
  EXPECT_EQ(j.at("gate_count"), 4);
  EXPECT_EQ(j.at("gates")[0].at("matrix").size(), 16u);
  EXPECT_EQ(circuit_from_json(json::parse(j.dump())), c);
}

TEST(Serialize, GateKeepsLabelAndTargets) {
  const GateOp g({2, 0}, gates::CNOT(), "CNOT");
  const json j = to_json(g);
  EXPECT_EQ(j.at("label"), "CNOT");
  EXPECT_EQ(j.at("targets"), json({2, 0}));
  EXPECT_EQ(gate_from_json(j), g);
}

TEST(Serialize, HamiltonianRoundTrip) {
  const Hamiltonian h = mixed_field_ising(3);
  const Hamiltonian back = hamiltonian_from_json(to_json(h));
  EXPECT_EQ(back.terms(), h.terms());
}

TEST(Serialize, RejectsMalformedInput) {
  json bad = to_json(QuantumState::zero(1));
  bad["amplitudes"][0] = json::array({2.0, 0.0});
  EXPECT_THROW(state_from_json(bad), ValidationError);
  json bad_gate = to_json(GateOp({0}, gates::X(), "X"));
  bad_gate["matrix"][0] = json::array({5.0, 0.0});
  EXPECT_THROW(gate_from_json(bad_gate), ValidationError);
  EXPECT_ANY_THROW(state_from_json(json::object()));
}

TEST(Serialize, OptionalIntUnknown) {
  EXPECT_EQ(optional_int_to_json(std::nullopt), "unknown");
  EXPECT_EQ(optional_int_to_json(3), 3);
}

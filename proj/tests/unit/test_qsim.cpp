#include <gtest/gtest.h>

#include <cmath>

#include "wavebranch/qsim.hpp"

using namespace wavebranch;
using namespace wavebranch::qsim;

namespace {

Eigen::MatrixXcd kron_all(const std::string& paulis) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (char c : paulis) {
    Eigen::Matrix2cd p = gates::pauli(c);
    Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
    for (int r = 0; r < m.rows(); ++r)
      for (int s = 0; s < m.cols(); ++s) next.block(2 * r, 2 * s, 2, 2) = m(r, s) * p;
    m = next;
  }
  return m;
}

Eigen::VectorXcd as_vector(const QuantumState& s) {
  Eigen::VectorXcd v(s.dim());
  for (std::size_t k = 0; k < s.dim(); ++k) v[k] = s[k];
  return v;
}

}  // namespace

TEST(QuantumState, ValidatesNormAndLength) {
  EXPECT_THROW(QuantumState::from_amplitudes({1.0, 1.0}), ValidationError);
  EXPECT_THROW(QuantumState::from_amplitudes({1.0, 0.0, 0.0}), ValidationError);
  EXPECT_NO_THROW(QuantumState::from_amplitudes({M_SQRT1_2, cplx(0, M_SQRT1_2)}));
  EXPECT_THROW(QuantumState::normalized({0.0, 0.0}), ValidationError);
}

TEST(QuantumState, QubitZeroIsMostSignificant) {
  const QuantumState s = tensor(QuantumState::basis(1, 1), QuantumState::basis(2, 0));
  EXPECT_EQ(s, QuantumState::basis(3, 4));
  GateOp x({0}, gates::X(), "X");
  EXPECT_EQ(apply_gate(QuantumState::zero(3), x), QuantumState::basis(3, 4));
}

TEST(ApplyCircuit, EmptyCircuitIsIdentity) {
  const QuantumState s = haar_random_state(3, 5);
  EXPECT_EQ(apply_circuit(s, Circuit(3)), s);
}

TEST(ApplyCircuit, XFlipsZeroToOne) {
  Circuit c(1);
  c.append(GateOp({0}, gates::X(), "X"));
  EXPECT_EQ(apply_circuit(QuantumState::zero(1), c), QuantumState::basis(1, 1));
}

TEST(ApplyCircuit, CnotMakesBellState) {
  const QuantumState in = QuantumState::from_amplitudes({M_SQRT1_2, 0.0, M_SQRT1_2, 0.0});
  Circuit c(2);
  c.append(GateOp({0, 1}, gates::CNOT(), "CNOT"));
  const QuantumState out = apply_circuit(in, c);
  EXPECT_NEAR(std::abs(out[0] - M_SQRT1_2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out[3] - M_SQRT1_2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out[1]) + std::abs(out[2]), 0.0, 1e-15);
}

TEST(ApplyCircuit, DimensionMismatchThrows) {
  EXPECT_THROW(apply_circuit(QuantumState::zero(2), Circuit(3)), ValidationError);
}

TEST(ApplyCircuit, MatchesDenseUnitaryOnRandomCircuits) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Circuit c = random_circuit(4, 3, seed);
    const QuantumState s = haar_random_state(4, 100 + seed);
    const Eigen::VectorXcd expected = circuit_unitary(c) * as_vector(s);
    EXPECT_LT((as_vector(apply_circuit(s, c)) - expected).norm(), 1e-12);
  }
}

TEST(ApplyCircuit, NonAdjacentTwoQubitGateOrdering) {
  // CNOT with control 2 and target 0 on |001> gives |101>.
  GateOp g({2, 0}, gates::CNOT(), "CNOT");
  EXPECT_EQ(apply_gate(QuantumState::basis(3, 1), g), QuantumState::basis(3, 5));
}

TEST(ApplyCircuit, InverseRestoresState) {
  const Circuit c = random_circuit(5, 4, 9);
  const QuantumState s = haar_random_state(5, 3);
  const QuantumState back = apply_circuit(apply_circuit(s, c), c.inverse());
  EXPECT_GE(fidelity(s, back), 1.0 - 1e-8);
}

TEST(GateOp, RejectsInvalidGates) {
  Eigen::Matrix2cd bad;
  bad << 1, 1, 0, 1;
  EXPECT_THROW(GateOp({0}, bad), ValidationError);
  EXPECT_THROW(GateOp({1, 1}, gates::CNOT()), ValidationError);
  EXPECT_THROW(GateOp({0, 1}, gates::X()), ValidationError);
  Circuit c(2);
  EXPECT_THROW(c.append(GateOp({2}, gates::X())), ValidationError);
}

TEST(InnerProduct, Examples) {
  const QuantumState z = QuantumState::zero(1);
  const QuantumState o = QuantumState::basis(1, 1);
  EXPECT_NEAR(std::abs(inner_product(z, z) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(inner_product(z, o)), 0.0, 1e-15);
  const QuantumState h0 = apply_gate(z, GateOp({0}, gates::H(), "H"));
  EXPECT_NEAR(inner_product(z, h0).real(), M_SQRT1_2, 1e-15);
  EXPECT_THROW(inner_product(z, QuantumState::zero(2)), ValidationError);
}

TEST(InnerProduct, ConjugatesFirstArgument) {
  const QuantumState a = QuantumState::from_amplitudes({cplx(0, 1), 0.0});
  const QuantumState b = QuantumState::zero(1);
  EXPECT_NEAR(std::abs(inner_product(a, b) - cplx(0, -1)), 0.0, 1e-15);
}

TEST(Haar, DeterministicAndNormalized) {
  EXPECT_EQ(haar_random_state(1, 42), haar_random_state(1, 42));
  EXPECT_NE(haar_random_state(3, 42), haar_random_state(3, 43));
  EXPECT_NEAR(haar_random_state(6, 7).norm(), 1.0, 1e-10);
  EXPECT_THROW(haar_random_state(0, 1), ValidationError);
  EXPECT_THROW(haar_random_state(15, 1), ValidationError);
}

TEST(Haar, MarginalMeanMatchesInverseDimension) {
  const int samples = 10000;
  double sum = 0.0, sum_sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double p = std::norm(haar_random_state(6, s)[0]);
    sum += p;
    sum_sq += p * p;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sum_sq / samples - mean * mean) / samples);
  EXPECT_LT(std::abs(mean - 1.0 / 64.0), 3.0 * se);
}

TEST(Haar, UnitaryIsUnitary) {
  const Eigen::MatrixXcd u = haar_unitary(4, 3);
  EXPECT_LT((u.adjoint() * u - Eigen::MatrixXcd::Identity(4, 4)).norm(), 1e-12);
}

TEST(RandomCircuit, ShapeAndDeterminism) {
  EXPECT_EQ(random_circuit(4, 0, 1).gate_count(), 0u);
  EXPECT_EQ(random_circuit(4, 3, 1).gate_count(), 6u);
  EXPECT_EQ(random_circuit(5, 3, 1).gate_count(), 6u);
  EXPECT_EQ(random_circuit(4, 3, 1), random_circuit(4, 3, 1));
  EXPECT_NE(random_circuit(4, 3, 1), random_circuit(4, 3, 2));
  EXPECT_THROW(random_circuit(1, 2, 1), ValidationError);
  // Each layer is a matching: no qubit is touched twice within a layer.
  const Circuit c = random_circuit(6, 4, 11);
  for (int layer = 0; layer < 4; ++layer) {
    std::vector<int> seen(6, 0);
    for (int g = 0; g < 3; ++g) {
      for (int t : c.gates()[layer * 3 + g].targets()) ++seen[t];
    }
    for (int v : seen) EXPECT_EQ(v, 1);
  }
}

TEST(Pauli, StringMatchesDenseKronecker) {
  const QuantumState s = haar_random_state(3, 2);
  for (const std::string p : {"XYZ", "YYI", "IZY", "ZZZ"}) {
    std::vector<cplx> out(8);
    apply_pauli_string(s.amplitudes(), out, 3, p);
    const Eigen::VectorXcd expected = kron_all(p) * as_vector(s);
    for (int k = 0; k < 8; ++k) EXPECT_LT(std::abs(out[k] - expected[k]), 1e-14) << p;
  }
}

TEST(Hamiltonian, IsingMatchesKroneckerSum) {
  const int n = 3;
  const Hamiltonian h = mixed_field_ising(n, 1.0, -1.05, 0.5);
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(8, 8);
  expected += kron_all("ZZI") + kron_all("IZZ");
  expected += -1.05 * (kron_all("XII") + kron_all("IXI") + kron_all("IIX"));
  expected += 0.5 * (kron_all("ZII") + kron_all("IZI") + kron_all("IIZ"));
  EXPECT_LT((h.dense() - expected).norm(), 1e-12);
  EXPECT_LT((h.dense() - h.dense().adjoint()).norm(), 1e-12);
  EXPECT_THROW(Hamiltonian(2, {{1.0, "XQ"}}), ValidationError);
}

TEST(Evolve, ZeroTimeIsIdentity) {
  const QuantumState s = haar_random_state(4, 1);
  const QuantumState out = evolve(s, mixed_field_ising(4), 0.0);
  EXPECT_GE(fidelity(s, out), 1.0 - 1e-12);
}

TEST(Evolve, ZRotationGlobalPhase) {
  const QuantumState out = evolve(QuantumState::zero(1), local_pauli(1, 0, 'Z'), M_PI);
  EXPECT_NEAR(fidelity(out, QuantumState::zero(1)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(out[0] - std::polar(1.0, -M_PI)), 0.0, 1e-12);
}

TEST(Evolve, ConservesEnergyAndNorm) {
  const Hamiltonian h = mixed_field_ising(6);
  const QuantumState s = haar_random_state(6, 4);
  const QuantumState out = evolve(s, h, 3.7);
  EXPECT_NEAR(out.norm(), 1.0, 1e-8);
  EXPECT_NEAR(h.expectation(out), h.expectation(s), 1e-8);
}

TEST(Evolve, ExactMatchesMatrixExponentialOfSpectrum) {
  const Hamiltonian h = xxz_chain(3);
  const QuantumState s = haar_random_state(3, 8);
  const double t = 0.8;
  // Independent route: Taylor series of exp(-iHt).
  const Eigen::MatrixXcd hm = h.dense();
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(8, 8), u = term;
  for (int k = 1; k < 60; ++k) {
    term = term * hm * cplx(0, -t) / static_cast<double>(k);
    u += term;
  }
  EXPECT_LT((as_vector(evolve(s, h, t)) - u * as_vector(s)).norm(), 1e-10);
}

TEST(Evolve, TrotterConvergesQuadratically) {
  const Hamiltonian h = mixed_field_ising(4);
  const QuantumState s = haar_random_state(4, 2);
  const QuantumState exact = evolve(s, h, 1.0);
  auto error = [&](int steps) {
    const QuantumState tr = evolve(s, h, 1.0, {EvolutionMethod::Trotter, steps});
    return (as_vector(tr) - as_vector(exact)).norm();
  };
  const double e10 = error(10), e20 = error(20);
  EXPECT_LT(e20, e10);
  EXPECT_NEAR(e10 / e20, 4.0, 0.5);
  EXPECT_THROW(evolve(s, h, 1.0, {EvolutionMethod::Trotter, 0}), ValidationError);
}

TEST(Evolve, OversizeExactRequestAdvisesTrotter) {
  const Hamiltonian h = local_pauli(13, 0, 'Z');
  try {
    evolve(QuantumState::zero(13), h, 1.0);
    FAIL() << "expected an error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("rotter"), std::string::npos);
  }
}

TEST(Seeds, DeriveSeedIsStableAndDistinct) {
  EXPECT_EQ(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
  EXPECT_NE(derive_seed(1, 2, 3), derive_seed(1, 3, 2));
}

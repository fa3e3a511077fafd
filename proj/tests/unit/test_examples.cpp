#include <gtest/gtest.h>

#include <cmath>

#include "wavebranch/examples.hpp"

using namespace wavebranch;
using namespace wavebranch::examples;
using qsim::QuantumState;

namespace {

void expect_valid(const ExampleFixture& f) {
  const branches::ValidationReport r = branches::validate_decomposition(f.decomposition);
  EXPECT_TRUE(r.ok) << f.name;
  EXPECT_NEAR(r.reconstruction_fidelity, 1.0, 1e-10) << f.name;
}

}  // namespace

TEST(Ghz, ComponentsAndWeights) {
  const ExampleFixture f = ghz(4);
  expect_valid(f);
  const auto& c = f.decomposition.components();
  EXPECT_EQ(c[0].state, QuantumState::zero(4));
  EXPECT_EQ(c[1].state, QuantumState::basis(4, 15));
  EXPECT_NEAR(std::abs(f.decomposition.parent()[0]), M_SQRT1_2, 1e-15);
  EXPECT_EQ(to_json(f).at("source_section"), "ghz");

  const ExampleFixture w = ghz(3, 0.6, cplx(0.0, 0.8));
  expect_valid(w);
  EXPECT_NEAR(std::abs(w.decomposition.parent()[7] - cplx(0.0, 0.8)), 0.0, 1e-15);
}

TEST(Ghz, Rejections) {
  EXPECT_THROW(ghz(1), ValidationError);
  EXPECT_THROW(ghz(13), ValidationError);
  EXPECT_THROW(ghz(3, 0.6, 0.6), ValidationError);
  EXPECT_THROW(ghz(3, 1.0, 0.0), ValidationError);
}

TEST(ProductPlusRandom, OrthogonalAndDeterministic) {
  const ExampleFixture f = product_plus_random(5, M_SQRT1_2, M_SQRT1_2, 42);
  expect_valid(f);
  const auto& c = f.decomposition.components();
  EXPECT_LT(std::abs(c[1].state[0]), 1e-12);
  EXPECT_EQ(product_plus_random(5, M_SQRT1_2, M_SQRT1_2, 42).decomposition.parent(), f.decomposition.parent());
  EXPECT_NE(product_plus_random(5, M_SQRT1_2, M_SQRT1_2, 43).decomposition.parent(), f.decomposition.parent());
  EXPECT_EQ(f.seed, 42u);
  EXPECT_THROW(product_plus_random(2, M_SQRT1_2, M_SQRT1_2, 1), ValidationError);
}

TEST(TwoRandomCircuits, RecordsOverlap) {
  const ExampleFixture f = two_random_circuits(4, 3, 3, 5);
  expect_valid(f);
  EXPECT_LE(f.metadata.at("raw_overlap").get<double>(), 0.5);
  EXPECT_EQ(f.metadata.at("d1"), 3);
  EXPECT_THROW(two_random_circuits(5, 3, 3, 5), ValidationError);
  EXPECT_THROW(two_random_circuits(2, 3, 3, 5), ValidationError);
  EXPECT_THROW(two_random_circuits(4, -1, 3, 5), ValidationError);
  // Depth zero leaves both states at |0..0>, which overlap completely.
  EXPECT_THROW(two_random_circuits(4, 0, 0, 5), ValidationError);
}

TEST(Parity, CodewordsAreOrthogonalProductsOfBlocks) {
  const ParityCode p = parity_codewords(2, 2);
  expect_valid(p.fixture);
  EXPECT_NEAR(std::abs(qsim::inner_product(p.zero, p.one)), 0.0, 1e-15);
  EXPECT_NEAR(p.zero[0].real(), 0.5, 1e-15);
  EXPECT_NEAR(p.one[3].real(), -0.5, 1e-15);
  EXPECT_NEAR(p.one[15].real(), 0.5, 1e-15);
  EXPECT_EQ(parity_codewords(2, 4).zero.n_qubits(), 8);
  EXPECT_THROW(parity_codewords(3, 5), ValidationError);
  EXPECT_THROW(parity_codewords(0, 2), ValidationError);
}

TEST(Tensor, EntangledBellMatchesGhz) {
  const QuantumState z = QuantumState::zero(1), o = QuantumState::basis(1, 1);
  const ExampleFixture f = tensor_branches(TensorMode::Entangled, z, o, z, o);
  expect_valid(f);
  EXPECT_EQ(f.decomposition.parent(), ghz(2).decomposition.parent());
}

TEST(Tensor, SeparableKeepsRightFactor) {
  const QuantumState z = QuantumState::zero(1), o = QuantumState::basis(1, 1);
  const QuantumState r = qsim::haar_random_state(2, 1);
  const ExampleFixture f = tensor_branches(TensorMode::Separable, z, o, r);
  expect_valid(f);
  EXPECT_EQ(f.decomposition.components()[1].state, qsim::tensor(o, r));
  EXPECT_THROW(tensor_branches(TensorMode::Separable, z, o, r, r), ValidationError);
  EXPECT_THROW(tensor_branches(TensorMode::Entangled, z, o, r), ValidationError);
  EXPECT_THROW(tensor_branches(TensorMode::Separable, z, z, r), ValidationError);
  EXPECT_EQ(parse_tensor_mode("entangled"), TensorMode::Entangled);
}

TEST(Distinguishing, BothBasesDescribeTheSameState) {
  auto [e0, e1] = random_eta_pair(3, 4, 8);
  EXPECT_LT(std::abs(qsim::inner_product(e0, e1)), 1e-12);
  const ExampleFixture comp = distinguishing_qubit_state(e0, e1, QubitBasis::Computational, 8);
  const ExampleFixture conj = distinguishing_qubit_state(e0, e1, QubitBasis::Conjugate, 8);
  expect_valid(comp);
  expect_valid(conj);
  EXPECT_NEAR(qsim::fidelity(comp.decomposition.parent(), conj.decomposition.parent()), 1.0, 1e-12);
  EXPECT_EQ(comp.decomposition.n_qubits(), 4);
  EXPECT_THROW(distinguishing_qubit_state(e0, e0, QubitBasis::Computational), ValidationError);
  EXPECT_EQ(parse_qubit_basis("conjugate"), QubitBasis::Conjugate);
  EXPECT_THROW(parse_qubit_basis("x"), ValidationError);
}

TEST(Distinguishing, EtaPairIsSeeded) {
  auto [a0, a1] = random_eta_pair(3, 4, 8);
  auto [b0, b1] = random_eta_pair(3, 4, 8);
  EXPECT_EQ(a0, b0);
  EXPECT_EQ(a1, b1);
}

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "wavebranch/branches.hpp"
#include "wavebranch/qsim.hpp"
#include "wavebranch/serialize.hpp"

namespace wavebranch::examples {

using branches::BranchDecomposition;
using qsim::QuantumState;
using wavebranch::to_json;

// Descriptive only; never used in computation.
struct ExpectedScaling {
  std::string ci_scaling;
  std::string cd_scaling;
  std::string source_section;  // which worked example this reproduces
  std::string notes;
};

struct ExampleFixture {
  std::string name;
  BranchDecomposition decomposition;
  ExpectedScaling expected;
  std::optional<std::uint64_t> seed;
  json metadata = json::object();
};

json to_json(const ExampleFixture& f);

// alpha|0...0> + beta|1...1>, split into the two basis components.
ExampleFixture ghz(int n, cplx alpha, cplx beta);
inline ExampleFixture ghz(int n) { return ghz(n, M_SQRT1_2, M_SQRT1_2); }

// alpha|0...0> + beta|eta>, eta Haar-random and orthogonalized against |0...0>.
ExampleFixture product_plus_random(int n, cplx alpha, cplx beta, std::uint64_t seed);

// Equal superposition of two seeded random-circuit states of depths d1 and d2;
// the second is orthogonalized against the first and the raw overlap recorded.
ExampleFixture two_random_circuits(int n, int d1, int d2, std::uint64_t seed);

struct ParityCode {
  QuantumState zero;  // (|0..0> + |1..1>)^{m2} over blocks of m1 qubits, normalized
  QuantumState one;   // same with minus signs
  ExampleFixture fixture;
};

ParityCode parity_codewords(int m1, int m2);

enum class TensorMode { Separable, Entangled };
std::string_view tensor_mode_name(TensorMode m);
TensorMode parse_tensor_mode(std::string_view name);

// Separable: (psi_l + phi_l)/sqrt2 (x) psi_r with branches psi_l (x) psi_r, phi_l (x) psi_r.
// Entangled: (psi_l (x) psi_r + phi_l (x) phi_r)/sqrt2, phi_r required.
ExampleFixture tensor_branches(TensorMode mode, const QuantumState& psi_l, const QuantumState& phi_l,
                               const QuantumState& psi_r, const std::optional<QuantumState>& phi_r = std::nullopt);

enum class QubitBasis { Computational, Conjugate };
std::string_view qubit_basis_name(QubitBasis b);
QubitBasis parse_qubit_basis(std::string_view name);

// (|0>|eta0> + |1>|eta1>)/sqrt2 split in the computational basis of the first qubit,
// or as |+>|eta+> and |->|eta-> with eta+- = (eta0 +- eta1)/sqrt2.
ExampleFixture distinguishing_qubit_state(const QuantumState& eta0, const QuantumState& eta1, QubitBasis basis,
                                          std::optional<std::uint64_t> seed = std::nullopt);

// Two orthogonalized random-circuit states on n_qubits, for distinguishing_qubit_state.
std::pair<QuantumState, QuantumState> random_eta_pair(int n_qubits, int depth, std::uint64_t seed);

}  // namespace wavebranch::examples

#include "wavebranch/examples.hpp"

#include <cmath>

namespace wavebranch::examples {

using branches::BranchComponent;

namespace {

constexpr double kWeightTolerance = 1e-10;

void require_weights(cplx alpha, cplx beta) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > kWeightTolerance) {
    throw ValidationError("branch weights must satisfy |alpha|^2 + |beta|^2 = 1");
  }
  if (std::abs(alpha) < 1e-12 || std::abs(beta) < 1e-12) {
    throw ValidationError("both branch weights must be nonzero");
  }
}

QuantumState weighted_sum(const std::vector<BranchComponent>& comps) {
  std::vector<cplx> amps(comps.front().state.dim(), 0.0);
  for (const BranchComponent& c : comps) {
    for (std::size_t k = 0; k < amps.size(); ++k) amps[k] += c.weight * c.state[k];
  }
  return QuantumState::normalized(std::move(amps));
}

ExampleFixture make_fixture(std::string name, std::vector<BranchComponent> comps, ExpectedScaling expected,
                            std::optional<std::uint64_t> seed = std::nullopt) {
  QuantumState parent = weighted_sum(comps);
  BranchDecomposition d(std::move(parent), std::move(comps));
  branches::ValidationReport r = branches::validate_decomposition(d);
  if (!r.ok) throw ValidationError("fixture '" + name + "' is not a valid decomposition: " + r.violations.front().detail);
  return ExampleFixture{std::move(name), std::move(d), std::move(expected), seed};
}

QuantumState block_state(int m1, int m2, double sign) {
  const std::uint64_t all = (1ULL << m1) - 1;
  std::vector<cplx> block(std::size_t{1} << m1, 0.0);
  block[0] = M_SQRT1_2;
  block[all] += sign * M_SQRT1_2;
  QuantumState b = QuantumState::from_amplitudes(block);
  QuantumState out = b;
  for (int k = 1; k < m2; ++k) out = qsim::tensor(out, b);
  return out;
}

}  // namespace

json to_json(const ExampleFixture& f) {
  return json{{"schema_version", kSchemaVersion},
              {"name", f.name},
              {"source_section", f.expected.source_section},
              {"seed", f.seed ? json(*f.seed) : json(nullptr)},
              {"expected", {{"ci_scaling", f.expected.ci_scaling}, {"cd_scaling", f.expected.cd_scaling},
                            {"notes", f.expected.notes}}},
              {"metadata", f.metadata},
              {"decomposition", to_json(f.decomposition)}};
}

ExampleFixture ghz(int n, cplx alpha, cplx beta) {
  if (n < 2 || n > 12) throw ValidationError("GHZ fixture needs 2 <= n <= 12");
  require_weights(alpha, beta);
  std::vector<BranchComponent> comps{{alpha, QuantumState::zero(n)},
                                     {beta, QuantumState::basis(n, (1ULL << n) - 1)}};
  ExampleFixture f = make_fixture("ghz", std::move(comps),
                                  {"O(N)", "1", "ghz",
                                   "borderline case: measures that discount Clifford gates may never certify it"});
  f.metadata = json{{"n", n}};
  return f;
}

ExampleFixture product_plus_random(int n, cplx alpha, cplx beta, std::uint64_t seed) {
  if (n < 3 || n > qsim::kMaxQubits) throw ValidationError("product-plus-random fixture needs 3 <= n <= 14");
  require_weights(alpha, beta);
  const QuantumState zero = QuantumState::zero(n);
  const QuantumState eta = qsim::orthogonalize(qsim::haar_random_state(n, seed), std::span(&zero, 1));
  std::vector<BranchComponent> comps{{alpha, zero}, {beta, eta}};
  ExampleFixture f = make_fixture("product_plus_random", std::move(comps),
                                  {"O(exp N)", "O(1)", "product_plus_haar", ""}, seed);
  f.metadata = json{{"n", n}};
  return f;
}

ExampleFixture two_random_circuits(int n, int d1, int d2, std::uint64_t seed) {
  if (n < 4 || n % 2 != 0 || n > qsim::kMaxQubits) throw ValidationError("two-circuit fixture needs an even n >= 4");
  if (d1 < 0 || d2 < 0) throw ValidationError("circuit depths must be nonnegative");
  const QuantumState zero = QuantumState::zero(n);
  const QuantumState s1 = qsim::apply_circuit(zero, qsim::random_circuit(n, d1, qsim::derive_seed(seed, 1)));
  const QuantumState s2 = qsim::apply_circuit(zero, qsim::random_circuit(n, d2, qsim::derive_seed(seed, 2)));
  const double overlap = std::abs(qsim::inner_product(s1, s2));
  if (overlap > 0.5) {
    throw ValidationError("random-circuit states overlap too strongly (" + std::to_string(overlap) + ")");
  }
  std::vector<BranchComponent> comps{{M_SQRT1_2, s1}, {M_SQRT1_2, qsim::orthogonalize(s2, std::span(&s1, 1))}};
  ExampleFixture f = make_fixture("two_random_circuits", std::move(comps),
                                  {"O((D1+D2)N)", "O(min(D1,D2)N)", "two_random_circuits",
                                   "good when max(D1,D2)N >> 1"},
                                  seed);
  f.metadata = json{{"n", n}, {"d1", d1}, {"d2", d2}, {"raw_overlap", overlap}};
  return f;
}

ParityCode parity_codewords(int m1, int m2) {
  if (m1 < 1 || m2 < 1) throw ValidationError("parity code block sizes must be positive");
  if (m1 * m2 > 12) throw ValidationError("parity code needs m1 * m2 <= 12");
  QuantumState zero = block_state(m1, m2, 1.0);
  QuantumState one = block_state(m1, m2, -1.0);
  std::vector<BranchComponent> comps{{M_SQRT1_2, zero}, {M_SQRT1_2, one}};
  ExampleFixture f = make_fixture("parity_code", std::move(comps),
                                  {std::to_string(m2) + " (one Z per block, single-qubit gates)",
                                   std::to_string(m1) + " (X on one block, single-qubit gates)", "parity_code",
                                   "no good branches in the codespace when m1 ~ m2"});
  f.metadata = json{{"m1", m1}, {"m2", m2}};
  return ParityCode{std::move(zero), std::move(one), std::move(f)};
}

std::string_view tensor_mode_name(TensorMode m) { return m == TensorMode::Separable ? "separable" : "entangled"; }

TensorMode parse_tensor_mode(std::string_view name) {
  if (name == "separable") return TensorMode::Separable;
  if (name == "entangled") return TensorMode::Entangled;
  throw ValidationError("unknown tensor mode '" + std::string(name) + "'");
}

ExampleFixture tensor_branches(TensorMode mode, const QuantumState& psi_l, const QuantumState& phi_l,
                               const QuantumState& psi_r, const std::optional<QuantumState>& phi_r) {
  if (psi_l.n_qubits() != phi_l.n_qubits()) throw ValidationError("left states differ in qubit count");
  if (std::abs(qsim::inner_product(psi_l, phi_l)) > branches::kDefaultTolerance) {
    throw ValidationError("left pair must be orthogonal");
  }
  if (psi_l.n_qubits() + psi_r.n_qubits() > 10) throw ValidationError("tensor fixture is limited to 10 qubits");
  std::vector<BranchComponent> comps;
  ExpectedScaling expected;
  if (mode == TensorMode::Separable) {
    if (phi_r) throw ValidationError("separable mode takes a single right state");
    comps = {{M_SQRT1_2, qsim::tensor(psi_l, psi_r)}, {M_SQRT1_2, qsim::tensor(phi_l, psi_r)}};
    expected = {"same as the left pair", "same as the left pair", "separable_extension",
                "unaffected by the extraneous system"};
  } else {
    if (!phi_r) throw ValidationError("entangled mode needs two right states");
    if (phi_r->n_qubits() != psi_r.n_qubits()) throw ValidationError("right states differ in qubit count");
    comps = {{M_SQRT1_2, qsim::tensor(psi_l, psi_r)}, {M_SQRT1_2, qsim::tensor(phi_l, *phi_r)}};
    expected = {">= min of the one-sided values", "<= min of the one-sided values", "entangled_extension",
                "branches entangled across the two subsystems"};
  }
  ExampleFixture f = make_fixture("tensor_branches", std::move(comps), std::move(expected));
  f.metadata = json{{"mode", std::string(tensor_mode_name(mode))},
                    {"left_qubits", psi_l.n_qubits()},
                    {"right_qubits", psi_r.n_qubits()}};
  return f;
}

std::string_view qubit_basis_name(QubitBasis b) { return b == QubitBasis::Computational ? "computational" : "conjugate"; }

QubitBasis parse_qubit_basis(std::string_view name) {
  if (name == "computational") return QubitBasis::Computational;
  if (name == "conjugate") return QubitBasis::Conjugate;
  throw ValidationError("unknown basis '" + std::string(name) + "'");
}

ExampleFixture distinguishing_qubit_state(const QuantumState& eta0, const QuantumState& eta1, QubitBasis basis,
                                          std::optional<std::uint64_t> seed) {
  if (eta0.n_qubits() != eta1.n_qubits()) throw ValidationError("eta states differ in qubit count");
  if (eta0.n_qubits() + 1 > qsim::kMaxQubits) throw ValidationError("distinguishing-qubit fixture is too large");
  const double overlap = std::abs(qsim::inner_product(eta0, eta1));
  if (overlap > branches::kDefaultTolerance) {
    throw ValidationError("eta states must be orthogonal (overlap " + std::to_string(overlap) + ")");
  }
  const QuantumState q0 = QuantumState::basis(1, 0);
  const QuantumState q1 = QuantumState::basis(1, 1);
  std::vector<BranchComponent> comps;
  if (basis == QubitBasis::Computational) {
    comps = {{M_SQRT1_2, qsim::tensor(q0, eta0)}, {M_SQRT1_2, qsim::tensor(q1, eta1)}};
  } else {
    const QuantumState plus = qsim::superpose(1.0, q0, 1.0, q1);
    const QuantumState minus = qsim::superpose(1.0, q0, -1.0, q1);
    comps = {{M_SQRT1_2, qsim::tensor(plus, qsim::superpose(1.0, eta0, 1.0, eta1))},
             {M_SQRT1_2, qsim::tensor(minus, qsim::superpose(1.0, eta0, -1.0, eta1))}};
  }
  ExampleFixture f = make_fixture("distinguishing_qubit", std::move(comps),
                                  {"~ interference complexity of the eta pair", "1 (measure the first qubit)",
                                   "non_unique_basis",
                                   "both bases give good decompositions when the eta pair is hard to interfere"},
                                  seed);
  f.metadata = json{{"basis", std::string(qubit_basis_name(basis))}, {"eta_qubits", eta0.n_qubits()}};
  return f;
}

std::pair<QuantumState, QuantumState> random_eta_pair(int n_qubits, int depth, std::uint64_t seed) {
  const QuantumState zero = QuantumState::zero(n_qubits);
  QuantumState eta0 = qsim::apply_circuit(zero, qsim::random_circuit(n_qubits, depth, qsim::derive_seed(seed, 1)));
  QuantumState eta1 = qsim::apply_circuit(zero, qsim::random_circuit(n_qubits, depth, qsim::derive_seed(seed, 2)));
  eta1 = qsim::orthogonalize(eta1, std::span(&eta0, 1));
  return {std::move(eta0), std::move(eta1)};
}

}  // namespace wavebranch::examples

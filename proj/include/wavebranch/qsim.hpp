#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace wavebranch {

using cplx = std::complex<double>;

// Raised for malformed inputs: bad dimensions, non-unitary gates, unnormalized states.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace wavebranch

namespace wavebranch::qsim {

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr int kMaxQubits = 14;
inline constexpr int kMaxExactQubits = 12;

// Dense normalized statevector. Qubit 0 is the most significant bit of the basis index.
class QuantumState {
 public:
  static QuantumState basis(int n_qubits, std::uint64_t index);
  static QuantumState zero(int n_qubits) { return basis(n_qubits, 0); }
  // Validates length 2^n and unit norm.
  static QuantumState from_amplitudes(std::vector<cplx> amplitudes);
  // Rescales to unit norm; rejects the zero vector.
  static QuantumState normalized(std::vector<cplx> amplitudes);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const cplx> amplitudes() const { return amplitudes_; }
  cplx operator[](std::size_t i) const { return amplitudes_[i]; }
  double norm() const;

  QuantumState with_phase(double theta) const;

  bool operator==(const QuantumState& other) const = default;

 private:
  QuantumState(int n_qubits, std::vector<cplx> amplitudes)
      : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {}
  int n_qubits_ = 0;
  std::vector<cplx> amplitudes_;
};

// Left factor occupies the leading (most significant) qubits.
QuantumState tensor(const QuantumState& left, const QuantumState& right);
// Normalized ca*a + cb*b.
QuantumState superpose(cplx ca, const QuantumState& a, cplx cb, const QuantumState& b);
// Gram-Schmidt of v against each state in `against`, then renormalized.
QuantumState orthogonalize(const QuantumState& v, std::span<const QuantumState> against);

cplx inner_product(const QuantumState& a, const QuantumState& b);
double fidelity(const QuantumState& a, const QuantumState& b);

// A unitary on one or two distinct qubits. For two targets (t0, t1) the local
// index is 2*bit(t0) + bit(t1).
class GateOp {
 public:
  GateOp(std::vector<int> targets, const Eigen::MatrixXcd& matrix, std::string label = {});

  int arity() const { return static_cast<int>(targets_.size()); }
  const std::vector<int>& targets() const { return targets_; }
  int target(int k) const { return targets_[k]; }
  const std::string& label() const { return label_; }
  Eigen::MatrixXcd matrix() const;
  // Row-major entries, 4 used for one-qubit gates and 16 for two-qubit gates.
  const std::array<cplx, 16>& entries() const { return m_; }

  GateOp adjoint() const;
  bool operator==(const GateOp& other) const = default;

 private:
  std::vector<int> targets_;
  std::array<cplx, 16> m_{};
  std::string label_;
};

class Circuit {
 public:
  explicit Circuit(int n_qubits);
  Circuit(int n_qubits, std::vector<GateOp> gates);

  Circuit& append(GateOp gate);
  int n_qubits() const { return n_qubits_; }
  std::size_t gate_count() const { return gates_.size(); }
  const std::vector<GateOp>& gates() const { return gates_; }
  Circuit inverse() const;

  bool operator==(const Circuit& other) const = default;

 private:
  int n_qubits_;
  std::vector<GateOp> gates_;
};

namespace gates {
Eigen::Matrix2cd I();
Eigen::Matrix2cd X();
Eigen::Matrix2cd Y();
Eigen::Matrix2cd Z();
Eigen::Matrix2cd H();
Eigen::Matrix2cd S();
Eigen::Matrix2cd Sdg();
Eigen::Matrix2cd T();
Eigen::Matrix2cd Tdg();
Eigen::Matrix2cd pauli(char label);
Eigen::Matrix4cd CNOT();
Eigen::Matrix4cd kron(const Eigen::Matrix2cd& first, const Eigen::Matrix2cd& second);
}  // namespace gates

// In-place kernels on a raw amplitude buffer of length 2^n.
void apply_gate_inplace(std::span<cplx> amps, int n_qubits, const GateOp& gate);
// P|x> for a Pauli string (one label per qubit) into `out`.
void apply_pauli_string(std::span<const cplx> in, std::span<cplx> out, int n_qubits,
                        std::string_view paulis);

QuantumState apply_circuit(const QuantumState& state, const Circuit& circuit);
QuantumState apply_gate(const QuantumState& state, const GateOp& gate);
Eigen::MatrixXcd circuit_unitary(const Circuit& circuit);

QuantumState haar_random_state(int n_qubits, std::uint64_t seed);
Eigen::MatrixXcd haar_unitary(int dim, std::uint64_t seed);
Circuit random_circuit(int n_qubits, int depth, std::uint64_t seed);

// Stable mixing of a base seed with stream indices.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

struct PauliTerm {
  double coefficient;
  std::string paulis;
  bool operator==(const PauliTerm&) const = default;
};

class Hamiltonian {
 public:
  Hamiltonian(int n_qubits, std::vector<PauliTerm> terms);

  int n_qubits() const { return n_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  Eigen::MatrixXcd dense() const;
  std::vector<cplx> apply(std::span<const cplx> in) const;
  double expectation(const QuantumState& state) const;

 private:
  int n_qubits_;
  std::vector<PauliTerm> terms_;
};

// J sum Z_i Z_{i+1} + g sum X_i + h sum Z_i on an open chain.
Hamiltonian mixed_field_ising(int n_qubits, double j = 1.0, double g = -1.05, double h = 0.5);
// sum jxy (X_i X_{i+1} + Y_i Y_{i+1}) + jz Z_i Z_{i+1} on an open chain.
Hamiltonian xxz_chain(int n_qubits, double jxy = 1.0, double jz = 0.5);
// Single Pauli on one site.
Hamiltonian local_pauli(int n_qubits, int site, char pauli, double coefficient = 1.0);

struct Spectrum {
  int n_qubits;
  Eigen::VectorXd energies;
  Eigen::MatrixXcd vectors;  // columns are eigenvectors
};

Spectrum diagonalize(const Hamiltonian& h);

enum class EvolutionMethod { Exact, Trotter };

struct EvolutionOptions {
  EvolutionMethod method = EvolutionMethod::Exact;
  int trotter_steps = 1;
};

// e^{-iHt}|state>.
QuantumState evolve(const QuantumState& state, const Hamiltonian& h, double t,
                    EvolutionOptions options = {});
QuantumState evolve(const QuantumState& state, const Spectrum& spectrum, double t);

}  // namespace wavebranch::qsim

#include "wavebranch/qsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace wavebranch::qsim {

namespace {

void check_qubit_count(int n) {
  if (n < 1 || n > kMaxQubits) {
    std::ostringstream os;
    os << "qubit count " << n << " outside [1, " << kMaxQubits << "]";
    throw ValidationError(os.str());
  }
}

int qubits_for_length(std::size_t len) {
  if (len < 2 || !std::has_single_bit(len)) {
    throw ValidationError("amplitude vector length must be a power of two >= 2");
  }
  return std::countr_zero(len);
}

double vector_norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

void require_same_size(const QuantumState& a, const QuantumState& b) {
  if (a.n_qubits() != b.n_qubits()) {
    std::ostringstream os;
    os << "dimension mismatch: " << a.n_qubits() << " vs " << b.n_qubits() << " qubits";
    throw ValidationError(os.str());
  }
}

Eigen::MatrixXcd haar_unitary_from(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      double re = normal(rng);
      double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity of QR so the result is Haar distributed.
  for (int j = 0; j < dim; ++j) {
    cplx d = r(j, j);
    double mag = std::abs(d);
    q.col(j) *= (mag > 0.0) ? d / mag : cplx(1.0);
  }
  return q;
}

}  // namespace

QuantumState QuantumState::basis(int n_qubits, std::uint64_t index) {
  check_qubit_count(n_qubits);
  std::size_t dim = std::size_t{1} << n_qubits;
  if (index >= dim) throw ValidationError("basis index out of range");
  std::vector<cplx> amps(dim, cplx(0.0));
  amps[index] = 1.0;
  return QuantumState(n_qubits, std::move(amps));
}

QuantumState QuantumState::from_amplitudes(std::vector<cplx> amplitudes) {
  int n = qubits_for_length(amplitudes.size());
  check_qubit_count(n);
  double nrm = vector_norm(amplitudes);
  if (!std::isfinite(nrm) || std::abs(nrm - 1.0) > kNormTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "state norm " << nrm << " differs from 1 by more than " << kNormTolerance;
    throw ValidationError(os.str());
  }
  return QuantumState(n, std::move(amplitudes));
}

QuantumState QuantumState::normalized(std::vector<cplx> amplitudes) {
  int n = qubits_for_length(amplitudes.size());
  check_qubit_count(n);
  double nrm = vector_norm(amplitudes);
  if (!std::isfinite(nrm) || nrm < 1e-300) throw ValidationError("cannot normalize zero vector");
  for (cplx& z : amplitudes) z /= nrm;
  return QuantumState(n, std::move(amplitudes));
}

double QuantumState::norm() const { return vector_norm(amplitudes_); }

QuantumState QuantumState::with_phase(double theta) const {
  cplx ph = std::polar(1.0, theta);
  std::vector<cplx> amps(amplitudes_);
  for (cplx& z : amps) z *= ph;
  return QuantumState(n_qubits_, std::move(amps));
}

QuantumState tensor(const QuantumState& left, const QuantumState& right) {
  check_qubit_count(left.n_qubits() + right.n_qubits());
  std::vector<cplx> amps;
  amps.reserve(left.dim() * right.dim());
  for (cplx l : left.amplitudes()) {
    for (cplx r : right.amplitudes()) amps.push_back(l * r);
  }
  return QuantumState::normalized(std::move(amps));
}

QuantumState superpose(cplx ca, const QuantumState& a, cplx cb, const QuantumState& b) {
  require_same_size(a, b);
  std::vector<cplx> amps(a.dim());
  for (std::size_t i = 0; i < amps.size(); ++i) amps[i] = ca * a[i] + cb * b[i];
  return QuantumState::normalized(std::move(amps));
}

QuantumState orthogonalize(const QuantumState& v, std::span<const QuantumState> against) {
  std::vector<cplx> amps(v.amplitudes().begin(), v.amplitudes().end());
  for (const QuantumState& u : against) {
    require_same_size(v, u);
    cplx proj(0.0);
    for (std::size_t i = 0; i < amps.size(); ++i) proj += std::conj(u[i]) * amps[i];
    for (std::size_t i = 0; i < amps.size(); ++i) amps[i] -= proj * u[i];
  }
  if (vector_norm(amps) < 1e-12) throw ValidationError("state lies in the span of the reference states");
  return QuantumState::normalized(std::move(amps));
}

cplx inner_product(const QuantumState& a, const QuantumState& b) {
  require_same_size(a, b);
  cplx s(0.0);
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double fidelity(const QuantumState& a, const QuantumState& b) { return std::norm(inner_product(a, b)); }

GateOp::GateOp(std::vector<int> targets, const Eigen::MatrixXcd& matrix, std::string label)
    : targets_(std::move(targets)), label_(std::move(label)) {
  if (targets_.size() != 1 && targets_.size() != 2) throw ValidationError("gate must act on 1 or 2 qubits");
  for (int t : targets_) {
    if (t < 0) throw ValidationError("negative gate target");
  }
  if (targets_.size() == 2 && targets_[0] == targets_[1]) throw ValidationError("gate targets must be distinct");
  const int dim = 1 << targets_.size();
  if (matrix.rows() != dim || matrix.cols() != dim) throw ValidationError("gate matrix size does not match target count");
  if (!matrix.allFinite()) throw ValidationError("gate matrix has non-finite entries");
  double err = (matrix.adjoint() * matrix - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (err > kUnitaryTolerance) {
    std::ostringstream os;
    os.precision(3);
    os << "gate '" << label_ << "' is not unitary (deviation " << err << ")";
    throw ValidationError(os.str());
  }
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) m_[r * dim + c] = matrix(r, c);
  }
}

Eigen::MatrixXcd GateOp::matrix() const {
  const int dim = 1 << arity();
  Eigen::MatrixXcd m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) m(r, c) = m_[r * dim + c];
  }
  return m;
}

GateOp GateOp::adjoint() const {
  std::string lbl = label_;
  if (!lbl.empty()) lbl += "^dg";
  return GateOp(targets_, matrix().adjoint(), lbl);
}

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) { check_qubit_count(n_qubits); }

Circuit::Circuit(int n_qubits, std::vector<GateOp> gates) : Circuit(n_qubits) {
  for (GateOp& g : gates) append(std::move(g));
}

Circuit& Circuit::append(GateOp gate) {
  for (int t : gate.targets()) {
    if (t >= n_qubits_) {
      std::ostringstream os;
      os << "gate target " << t << " out of range for " << n_qubits_ << " qubits";
      throw ValidationError(os.str());
    }
  }
  gates_.push_back(std::move(gate));
  return *this;
}

Circuit Circuit::inverse() const {
  Circuit inv(n_qubits_);
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) inv.append(it->adjoint());
  return inv;
}

namespace gates {
Eigen::Matrix2cd I() { return Eigen::Matrix2cd::Identity(); }
Eigen::Matrix2cd X() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}
Eigen::Matrix2cd Y() {
  Eigen::Matrix2cd m;
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}
Eigen::Matrix2cd Z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}
Eigen::Matrix2cd H() {
  Eigen::Matrix2cd m;
  const double s = 1.0 / std::sqrt(2.0);
  m << s, s, s, -s;
  return m;
}
Eigen::Matrix2cd S() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, cplx(0, 1);
  return m;
}
Eigen::Matrix2cd Sdg() { return S().adjoint(); }
Eigen::Matrix2cd T() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, std::polar(1.0, M_PI / 4);
  return m;
}
Eigen::Matrix2cd Tdg() { return T().adjoint(); }
Eigen::Matrix2cd pauli(char label) {
  switch (label) {
    case 'I': return I();
    case 'X': return X();
    case 'Y': return Y();
    case 'Z': return Z();
    default: throw ValidationError(std::string("unknown Pauli label '") + label + "'");
  }
}
Eigen::Matrix4cd CNOT() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = 1;
  m(1, 1) = 1;
  m(2, 3) = 1;
  m(3, 2) = 1;
  return m;
}
Eigen::Matrix4cd kron(const Eigen::Matrix2cd& first, const Eigen::Matrix2cd& second) {
  Eigen::Matrix4cd m;
  for (int r0 = 0; r0 < 2; ++r0)
    for (int c0 = 0; c0 < 2; ++c0)
      for (int r1 = 0; r1 < 2; ++r1)
        for (int c1 = 0; c1 < 2; ++c1) m(2 * r0 + r1, 2 * c0 + c1) = first(r0, c0) * second(r1, c1);
  return m;
}
}  // namespace gates

void apply_gate_inplace(std::span<cplx> amps, int n_qubits, const GateOp& gate) {
  const auto& m = gate.entries();
  const std::size_t dim = amps.size();
  if (gate.arity() == 1) {
    const std::size_t mask = std::size_t{1} << (n_qubits - 1 - gate.target(0));
    for (std::size_t i = 0; i < dim; ++i) {
      if (i & mask) continue;
      const cplx a0 = amps[i];
      const cplx a1 = amps[i | mask];
      amps[i] = m[0] * a0 + m[1] * a1;
      amps[i | mask] = m[2] * a0 + m[3] * a1;
    }
    return;
  }
  const std::size_t m0 = std::size_t{1} << (n_qubits - 1 - gate.target(0));
  const std::size_t m1 = std::size_t{1} << (n_qubits - 1 - gate.target(1));
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & (m0 | m1)) continue;
    const std::size_t idx[4] = {i, i | m1, i | m0, i | m0 | m1};
    const cplx v[4] = {amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]};
    for (int r = 0; r < 4; ++r) {
      amps[idx[r]] = m[4 * r] * v[0] + m[4 * r + 1] * v[1] + m[4 * r + 2] * v[2] + m[4 * r + 3] * v[3];
    }
  }
}

void apply_pauli_string(std::span<const cplx> in, std::span<cplx> out, int n_qubits, std::string_view paulis) {
  if (static_cast<int>(paulis.size()) != n_qubits) throw ValidationError("Pauli string length does not match qubit count");
  std::size_t flip = 0;
  std::size_t sign = 0;
  int n_y = 0;
  for (int q = 0; q < n_qubits; ++q) {
    const std::size_t bit = std::size_t{1} << (n_qubits - 1 - q);
    switch (paulis[q]) {
      case 'I': break;
      case 'X': flip |= bit; break;
      case 'Y': flip |= bit; sign |= bit; ++n_y; break;
      case 'Z': sign |= bit; break;
      default: throw ValidationError(std::string("unknown Pauli label '") + paulis[q] + "'");
    }
  }
  static const cplx i_pow[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
  const cplx global = i_pow[n_y % 4];
  for (std::size_t x = 0; x < in.size(); ++x) {
    const bool odd = std::popcount(x & sign) & 1;
    out[x ^ flip] = (odd ? -global : global) * in[x];
  }
}

QuantumState apply_gate(const QuantumState& state, const GateOp& gate) {
  return apply_circuit(state, Circuit(state.n_qubits(), {gate}));
}

QuantumState apply_circuit(const QuantumState& state, const Circuit& circuit) {
  if (circuit.n_qubits() != state.n_qubits()) {
    std::ostringstream os;
    os << "dimension mismatch: circuit on " << circuit.n_qubits() << " qubits, state on " << state.n_qubits();
    throw ValidationError(os.str());
  }
  std::vector<cplx> amps(state.amplitudes().begin(), state.amplitudes().end());
  for (const GateOp& g : circuit.gates()) apply_gate_inplace(amps, state.n_qubits(), g);
  return QuantumState::from_amplitudes(std::move(amps));
}

Eigen::MatrixXcd circuit_unitary(const Circuit& circuit) {
  const std::size_t dim = std::size_t{1} << circuit.n_qubits();
  Eigen::MatrixXcd u(dim, dim);
  std::vector<cplx> col(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    std::fill(col.begin(), col.end(), cplx(0.0));
    col[c] = 1.0;
    for (const GateOp& g : circuit.gates()) apply_gate_inplace(col, circuit.n_qubits(), g);
    for (std::size_t r = 0; r < dim; ++r) u(r, c) = col[r];
  }
  return u;
}

QuantumState haar_random_state(int n_qubits, std::uint64_t seed) {
  check_qubit_count(n_qubits);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<cplx> amps(std::size_t{1} << n_qubits);
  for (cplx& z : amps) {
    double re = normal(rng);
    double im = normal(rng);
    z = cplx(re, im);
  }
  return QuantumState::normalized(std::move(amps));
}

Eigen::MatrixXcd haar_unitary(int dim, std::uint64_t seed) {
  if (dim < 1) throw ValidationError("unitary dimension must be positive");
  std::mt19937_64 rng(seed);
  return haar_unitary_from(dim, rng);
}

Circuit random_circuit(int n_qubits, int depth, std::uint64_t seed) {
  if (n_qubits < 2) throw ValidationError("random circuit needs at least 2 qubits");
  if (depth < 0) throw ValidationError("random circuit depth must be non-negative");
  Circuit circuit(n_qubits);
  std::mt19937_64 rng(seed);
  std::vector<int> order(n_qubits);
  for (int layer = 0; layer < depth; ++layer) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int k = 0; k + 1 < n_qubits; k += 2) {
      circuit.append(GateOp({order[k], order[k + 1]}, haar_unitary_from(4, rng), "haar"));
    }
  }
  return circuit;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ a) ^ (b * 0xd6e8feb86659fd93ULL));
}

Hamiltonian::Hamiltonian(int n_qubits, std::vector<PauliTerm> terms) : n_qubits_(n_qubits), terms_(std::move(terms)) {
  check_qubit_count(n_qubits);
  for (const PauliTerm& t : terms_) {
    if (static_cast<int>(t.paulis.size()) != n_qubits) throw ValidationError("Pauli term length does not match qubit count");
    if (t.paulis.find_first_not_of("IXYZ") != std::string::npos) throw ValidationError("Pauli term has labels outside {I,X,Y,Z}");
    if (!std::isfinite(t.coefficient)) throw ValidationError("Pauli term coefficient is not finite");
  }
}

std::vector<cplx> Hamiltonian::apply(std::span<const cplx> in) const {
  std::vector<cplx> out(in.size(), cplx(0.0));
  std::vector<cplx> tmp(in.size());
  for (const PauliTerm& t : terms_) {
    apply_pauli_string(in, tmp, n_qubits_, t.paulis);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += t.coefficient * tmp[i];
  }
  return out;
}

Eigen::MatrixXcd Hamiltonian::dense() const {
  const std::size_t dim = std::size_t{1} << n_qubits_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<cplx> e(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    std::fill(e.begin(), e.end(), cplx(0.0));
    e[c] = 1.0;
    std::vector<cplx> col = apply(e);
    for (std::size_t r = 0; r < dim; ++r) m(r, c) = col[r];
  }
  return m;
}

double Hamiltonian::expectation(const QuantumState& state) const {
  if (state.n_qubits() != n_qubits_) throw ValidationError("dimension mismatch between state and Hamiltonian");
  std::vector<cplx> hv = apply(state.amplitudes());
  cplx s(0.0);
  for (std::size_t i = 0; i < hv.size(); ++i) s += std::conj(state[i]) * hv[i];
  return s.real();
}

namespace {
std::string site_string(int n, std::initializer_list<std::pair<int, char>> ops) {
  std::string s(n, 'I');
  for (auto [q, p] : ops) s[q] = p;
  return s;
}
}  // namespace

Hamiltonian mixed_field_ising(int n_qubits, double j, double g, double h) {
  std::vector<PauliTerm> terms;
  for (int q = 0; q + 1 < n_qubits; ++q) terms.push_back({j, site_string(n_qubits, {{q, 'Z'}, {q + 1, 'Z'}})});
  for (int q = 0; q < n_qubits; ++q) terms.push_back({g, site_string(n_qubits, {{q, 'X'}})});
  for (int q = 0; q < n_qubits; ++q) terms.push_back({h, site_string(n_qubits, {{q, 'Z'}})});
  return Hamiltonian(n_qubits, std::move(terms));
}

Hamiltonian xxz_chain(int n_qubits, double jxy, double jz) {
  std::vector<PauliTerm> terms;
  for (int q = 0; q + 1 < n_qubits; ++q) {
    terms.push_back({jxy, site_string(n_qubits, {{q, 'X'}, {q + 1, 'X'}})});
    terms.push_back({jxy, site_string(n_qubits, {{q, 'Y'}, {q + 1, 'Y'}})});
    terms.push_back({jz, site_string(n_qubits, {{q, 'Z'}, {q + 1, 'Z'}})});
  }
  return Hamiltonian(n_qubits, std::move(terms));
}

Hamiltonian local_pauli(int n_qubits, int site, char pauli, double coefficient) {
  if (site < 0 || site >= n_qubits) throw ValidationError("site out of range");
  return Hamiltonian(n_qubits, {{coefficient, site_string(n_qubits, {{site, pauli}})}});
}

Spectrum diagonalize(const Hamiltonian& h) {
  if (h.n_qubits() > kMaxExactQubits) {
    std::ostringstream os;
    os << "exact diagonalization limited to " << kMaxExactQubits << " qubits; use Trotter evolution for "
       << h.n_qubits() << " qubits";
    throw ValidationError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.dense());
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  return Spectrum{h.n_qubits(), solver.eigenvalues(), solver.eigenvectors()};
}

QuantumState evolve(const QuantumState& state, const Spectrum& spectrum, double t) {
  if (state.n_qubits() != spectrum.n_qubits) throw ValidationError("dimension mismatch between state and Hamiltonian");
  const Eigen::Index dim = static_cast<Eigen::Index>(state.dim());
  Eigen::VectorXcd psi(dim);
  for (Eigen::Index i = 0; i < dim; ++i) psi(i) = state[i];
  Eigen::VectorXcd coeffs = spectrum.vectors.adjoint() * psi;
  for (Eigen::Index k = 0; k < dim; ++k) coeffs(k) *= std::polar(1.0, -spectrum.energies(k) * t);
  Eigen::VectorXcd out = spectrum.vectors * coeffs;
  return QuantumState::from_amplitudes(std::vector<cplx>(out.data(), out.data() + dim));
}

QuantumState evolve(const QuantumState& state, const Hamiltonian& h, double t, EvolutionOptions options) {
  if (state.n_qubits() != h.n_qubits()) throw ValidationError("dimension mismatch between state and Hamiltonian");
  if (options.method == EvolutionMethod::Exact) return evolve(state, diagonalize(h), t);
  if (options.trotter_steps < 1) throw ValidationError("Trotter evolution needs at least one step");
  // Symmetric (Strang) splitting: half steps forward through the terms, then backward.
  const double dt = t / options.trotter_steps;
  std::vector<cplx> psi(state.amplitudes().begin(), state.amplitudes().end());
  std::vector<cplx> p_psi(psi.size());
  auto exp_term = [&](const PauliTerm& term, double tau) {
    const double theta = term.coefficient * tau;
    const double c = std::cos(theta);
    const cplx s(0.0, -std::sin(theta));
    apply_pauli_string(psi, p_psi, h.n_qubits(), term.paulis);
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = c * psi[i] + s * p_psi[i];
  };
  const auto& terms = h.terms();
  for (int step = 0; step < options.trotter_steps; ++step) {
    for (std::size_t k = 0; k < terms.size(); ++k) exp_term(terms[k], dt / 2);
    for (std::size_t k = terms.size(); k-- > 0;) exp_term(terms[k], dt / 2);
  }
  return QuantumState::from_amplitudes(std::move(psi));
}

}  // namespace wavebranch::qsim

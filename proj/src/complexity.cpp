#include "wavebranch/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "wavebranch/parallel.hpp"

namespace wavebranch::complexity {

using qsim::GateOp;

std::string_view kind_name(ComplexityKind kind) {
  switch (kind) {
    case ComplexityKind::Relative: return "relative";
    case ComplexityKind::DistinguishabilityProxy: return "distinguishability";
    case ComplexityKind::InterferenceProxy: return "interference";
  }
  return "unknown";
}

ComplexityKind parse_kind(std::string_view name) {
  if (name == "relative" || name == "R") return ComplexityKind::Relative;
  if (name == "distinguishability" || name == "D") return ComplexityKind::DistinguishabilityProxy;
  if (name == "interference" || name == "I") return ComplexityKind::InterferenceProxy;
  throw ValidationError("unknown complexity kind '" + std::string(name) + "'");
}

std::string_view method_name(EstimateMethod m) {
  switch (m) {
    case EstimateMethod::Enumeration: return "enumeration";
    case EstimateMethod::Constructive: return "constructive";
    case EstimateMethod::Variational: return "variational";
    case EstimateMethod::Combined: return "combined";
  }
  return "unknown";
}

std::string_view truncation_name(Truncation t) {
  switch (t) {
    case Truncation::None: return "none";
    case Truncation::MaxSize: return "max_size";
    case Truncation::NodeBudget: return "node_budget";
  }
  return "unknown";
}

double threshold_for(ComplexityKind kind, double delta) {
  return kind == ComplexityKind::Relative ? delta : 2.0 * delta;
}

bool meets_threshold(ComplexityKind kind, double value, double delta) {
  return value >= threshold_for(kind, delta) - kThresholdSlack;
}

namespace {

cplx dot(std::span<const cplx> x, std::span<const cplx> y) {
  cplx s(0.0);
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

struct Overlaps {
  cplx a_ua, b_ub, a_ub, b_ua;
};

Overlaps overlaps(std::span<const cplx> a, std::span<const cplx> b, std::span<const cplx> ua, std::span<const cplx> ub,
                  bool need_diag) {
  Overlaps o{};
  o.b_ua = dot(b, ua);
  o.a_ub = dot(a, ub);
  if (need_diag) {
    o.a_ua = dot(a, ua);
    o.b_ub = dot(b, ub);
  }
  return o;
}

double from_overlaps(ComplexityKind kind, const Overlaps& o) {
  switch (kind) {
    case ComplexityKind::Relative: return std::abs(o.b_ua);
    case ComplexityKind::DistinguishabilityProxy: return std::abs(o.a_ua - o.b_ub);
    case ComplexityKind::InterferenceProxy: return std::abs(o.a_ub) + std::abs(o.b_ua);
  }
  return 0.0;
}

}  // namespace

double objective_from_images(ComplexityKind kind, std::span<const cplx> a, std::span<const cplx> b,
                             std::span<const cplx> ua, std::span<const cplx> ub) {
  return from_overlaps(kind, overlaps(a, b, ua, ub, kind == ComplexityKind::DistinguishabilityProxy));
}

double objective_value(ComplexityKind kind, const Circuit& u, const QuantumState& a, const QuantumState& b) {
  if (a.n_qubits() != b.n_qubits() || u.n_qubits() != a.n_qubits()) {
    throw ValidationError("dimension mismatch between circuit and states");
  }
  QuantumState ua = qsim::apply_circuit(a, u);
  QuantumState ub = qsim::apply_circuit(b, u);
  return objective_from_images(kind, a.amplitudes(), b.amplitudes(), ua.amplitudes(), ub.amplitudes());
}

GateAlphabet::GateAlphabet(std::string name, std::vector<NamedGate> one_qubit, std::vector<NamedGate> two_qubit)
    : name_(std::move(name)), one_qubit_(std::move(one_qubit)), two_qubit_(std::move(two_qubit)) {
  for (const NamedGate& g : one_qubit_) GateOp({0}, g.matrix, g.label);
  for (const NamedGate& g : two_qubit_) GateOp({0, 1}, g.matrix, g.label);
}

GateAlphabet GateAlphabet::standard() {
  namespace G = qsim::gates;
  std::vector<NamedGate> one = {{"X", G::X()}, {"Y", G::Y()},   {"Z", G::Z()}, {"H", G::H()},
                                {"S", G::S()}, {"Sdg", G::Sdg()}, {"T", G::T()}, {"Tdg", G::Tdg()}};
  std::vector<NamedGate> two = {{"CNOT", G::CNOT()}};
  const char labels[3] = {'X', 'Y', 'Z'};
  for (char p : labels) {
    for (char q : labels) two.push_back({std::string{p, q}, G::kron(G::pauli(p), G::pauli(q))});
  }
  return GateAlphabet("clifford+t+pauli2", std::move(one), std::move(two));
}

namespace {

Eigen::MatrixXcd swap_qubits(const Eigen::MatrixXcd& m) {
  static const int perm[4] = {0, 2, 1, 3};
  Eigen::MatrixXcd out(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out(r, c) = m(perm[r], perm[c]);
  return out;
}

bool same_action(const GateOp& x, const GateOp& y) {
  if (x.targets() != y.targets()) return false;
  const int n = 1 << (2 * x.arity());
  for (int k = 0; k < n; ++k) {
    if (std::abs(x.entries()[k] - y.entries()[k]) > 1e-12) return false;
  }
  return true;
}

bool is_adjoint(const GateOp& x, const GateOp& y) {
  if (x.targets() != y.targets()) return false;
  const int d = 1 << x.arity();
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      if (std::abs(x.entries()[r * d + c] - std::conj(y.entries()[c * d + r])) > 1e-12) return false;
  return true;
}

struct ExpandedAlphabet {
  std::vector<GateOp> gates;
  std::vector<int> inverse;  // index of the gate undoing gate g, or -1
};

ExpandedAlphabet expand_with_inverses(const GateAlphabet& alphabet, int n_qubits) {
  ExpandedAlphabet e;
  e.gates = alphabet.expand(n_qubits);
  e.inverse.assign(e.gates.size(), -1);
  for (std::size_t g = 0; g < e.gates.size(); ++g) {
    for (std::size_t h = 0; h < e.gates.size(); ++h) {
      if (is_adjoint(e.gates[g], e.gates[h])) {
        e.inverse[g] = static_cast<int>(h);
        break;
      }
    }
  }
  return e;
}

constexpr std::uint64_t kCountCap = std::numeric_limits<std::uint64_t>::max() / 4;

std::uint64_t count_sequences(const std::vector<int>& inverse, int size) {
  if (size == 0) return 1;
  const std::size_t g_count = inverse.size();
  std::vector<std::uint64_t> ending(g_count, 1), next(g_count);
  for (int level = 2; level <= size; ++level) {
    std::uint64_t total = 0;
    for (std::uint64_t v : ending) total = std::min(kCountCap, total + v);
    for (std::size_t h = 0; h < g_count; ++h) {
      // h may not follow the gate it undoes
      const int banned = inverse[h];
      next[h] = banned >= 0 ? total - std::min(total, ending[banned]) : total;
    }
    ending.swap(next);
  }
  std::uint64_t total = 0;
  for (std::uint64_t v : ending) total = std::min(kCountCap, total + v);
  return total;
}

// Depth-first walk over gate sequences of a fixed length in canonical order.
class Walker {
 public:
  Walker(const ExpandedAlphabet& alphabet, int n_qubits, std::span<const cplx> a, std::span<const cplx> b, int depth)
      : alphabet_(alphabet), n_(n_qubits), a_(a), b_(b), ua_(depth + 1), ub_(depth + 1), seq_(depth) {
    for (auto& v : ua_) v.resize(a.size());
    for (auto& v : ub_) v.resize(a.size());
  }

  // Visits every sequence of `length` gates starting with `first`. The leaf callback
  // receives (sequence, U|a>, U|b>) and returns true to stop. Returns the number of
  // leaves visited and whether the walk was stopped.
  template <class Leaf>
  std::pair<std::uint64_t, bool> run(int length, int first, Leaf&& leaf) {
    visited_ = 0;
    std::copy(a_.begin(), a_.end(), ua_[0].begin());
    std::copy(b_.begin(), b_.end(), ub_[0].begin());
    step(0, first);
    if (length == 1) {
      ++visited_;
      return {visited_, leaf(seq_span(1), ua_[1], ub_[1])};
    }
    bool stopped = descend(1, length, leaf);
    return {visited_, stopped};
  }

 private:
  std::span<const int> seq_span(int len) const { return std::span<const int>(seq_.data(), len); }

  void step(int depth, int g) {
    std::copy(ua_[depth].begin(), ua_[depth].end(), ua_[depth + 1].begin());
    std::copy(ub_[depth].begin(), ub_[depth].end(), ub_[depth + 1].begin());
    qsim::apply_gate_inplace(ua_[depth + 1], n_, alphabet_.gates[g]);
    qsim::apply_gate_inplace(ub_[depth + 1], n_, alphabet_.gates[g]);
    seq_[depth] = g;
  }

  template <class Leaf>
  bool descend(int depth, int length, Leaf& leaf) {
    const int prev = seq_[depth - 1];
    const int g_count = static_cast<int>(alphabet_.gates.size());
    for (int g = 0; g < g_count; ++g) {
      if (alphabet_.inverse[prev] == g) continue;
      step(depth, g);
      if (depth + 1 == length) {
        ++visited_;
        if (leaf(seq_span(length), ua_[depth + 1], ub_[depth + 1])) return true;
      } else if (descend(depth + 1, length, leaf)) {
        return true;
      }
    }
    return false;
  }

  const ExpandedAlphabet& alphabet_;
  int n_;
  std::span<const cplx> a_, b_;
  std::vector<std::vector<cplx>> ua_, ub_;
  std::vector<int> seq_;
  std::uint64_t visited_ = 0;
};

Circuit circuit_from_sequence(const ExpandedAlphabet& alphabet, int n_qubits, std::span<const int> seq) {
  Circuit c(n_qubits);
  for (int g : seq) c.append(alphabet.gates[g]);
  return c;
}

double verified_value(ComplexityKind kind, const Circuit& witness, const QuantumState& a, const QuantumState& b,
                      double delta) {
  const double v = objective_value(kind, witness, a, b);
  if (v < threshold_for(kind, delta) - kWitnessTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "witness re-verification failed: objective " << v << " below threshold " << threshold_for(kind, delta);
    throw std::logic_error(os.str());
  }
  return v;
}

ComplexityEstimate base_estimate(const ComplexityQuery& q, EstimateMethod method) {
  ComplexityEstimate e;
  e.kind = q.kind;
  e.delta = q.delta;
  e.alphabet = q.alphabet.name();
  e.max_size = q.max_size;
  e.seed = q.seed;
  e.method = method;
  return e;
}

}  // namespace

std::vector<GateOp> GateAlphabet::expand(int n_qubits) const {
  std::vector<GateOp> out;
  for (int q = 0; q < n_qubits; ++q) {
    for (const NamedGate& g : one_qubit_) out.emplace_back(std::vector<int>{q}, g.matrix, g.label);
  }
  const std::size_t first_two = out.size();
  for (const NamedGate& g : two_qubit_) {
    for (int i = 0; i < n_qubits; ++i) {
      for (int j = 0; j < n_qubits; ++j) {
        if (i == j) continue;
        GateOp candidate = i < j ? GateOp({i, j}, g.matrix, g.label) : GateOp({j, i}, swap_qubits(g.matrix), g.label);
        bool duplicate = false;
        for (std::size_t k = first_two; k < out.size() && !duplicate; ++k) duplicate = same_action(out[k], candidate);
        if (!duplicate) out.push_back(std::move(candidate));
      }
    }
  }
  return out;
}

void validate_query(const ComplexityQuery& q) {
  if (q.a.n_qubits() != q.b.n_qubits()) throw ValidationError("query states have different qubit counts");
  if (!(q.delta > 0.0 && q.delta <= 1.0)) throw ValidationError("delta must lie in (0, 1]");
  if (q.max_size < 0) throw ValidationError("max_size must be non-negative");
  if (q.threads < 1) throw ValidationError("thread count must be positive");
}

std::uint64_t enumeration_count(const GateAlphabet& alphabet, int n_qubits, int size) {
  return count_sequences(expand_with_inverses(alphabet, n_qubits).inverse, size);
}

ComplexityEstimate brute_force_estimate(const ComplexityQuery& q) {
  validate_query(q);
  ComplexityEstimate e = base_estimate(q, EstimateMethod::Enumeration);
  const int n = q.a.n_qubits();
  std::span<const cplx> a = q.a.amplitudes();
  std::span<const cplx> b = q.b.amplitudes();

  e.circuits_evaluated = 1;
  const double v0 = objective_from_images(q.kind, a, b, a, b);
  e.achieved_value = v0;
  if (meets_threshold(q.kind, v0, q.delta)) {
    e.lower_bound = 0;
    e.upper_bound = 0;
    e.witness = Circuit(n);
    return e;
  }

  const ExpandedAlphabet alphabet = expand_with_inverses(q.alphabet, n);
  const int g_count = static_cast<int>(alphabet.gates.size());
  struct Slot {
    std::uint64_t visited = 0;
    bool hit = false;
    std::vector<int> seq;
    double best = 0.0;
  };

  for (int m = 1; m <= q.max_size; ++m) {
    const std::uint64_t level_count = count_sequences(alphabet.inverse, m);
    if (e.circuits_evaluated + level_count > q.node_budget) {
      e.lower_bound = m;
      e.truncation = Truncation::NodeBudget;
      return e;
    }
    std::vector<Slot> slots(g_count);
    auto search = [&](std::size_t first) {
      Walker walker(alphabet, n, a, b, m);
      Slot& slot = slots[first];
      auto leaf = [&](std::span<const int> seq, std::span<const cplx> ua, std::span<const cplx> ub) {
        const double v = objective_from_images(q.kind, a, b, ua, ub);
        slot.best = std::max(slot.best, v);
        if (meets_threshold(q.kind, v, q.delta)) {
          slot.hit = true;
          slot.seq.assign(seq.begin(), seq.end());
          return true;
        }
        return false;
      };
      slot.visited = walker.run(m, static_cast<int>(first), leaf).first;
    };
    if (q.threads <= 1) {
      for (int g = 0; g < g_count; ++g) {
        search(g);
        if (slots[g].hit) break;
      }
    } else {
      parallel_for(g_count, q.threads, search);
    }
    for (int g = 0; g < g_count; ++g) {
      e.achieved_value = std::max(e.achieved_value, slots[g].best);
      if (slots[g].hit) {
        e.circuits_evaluated += slots[g].visited;
        Circuit witness = circuit_from_sequence(alphabet, n, slots[g].seq);
        e.achieved_value = verified_value(q.kind, witness, q.a, q.b, q.delta);
        e.lower_bound = m;
        e.upper_bound = m;
        e.witness = std::move(witness);
        return e;
      }
      e.circuits_evaluated += slots[g].visited;
    }
  }
  e.lower_bound = q.max_size + 1;
  e.truncation = Truncation::MaxSize;
  return e;
}

ComplexityEstimate constructive_estimate(ComplexityKind kind, const QuantumState& a, const QuantumState& b,
                                         double delta, const Circuit& witness) {
  ComplexityEstimate e;
  e.kind = kind;
  e.delta = delta;
  e.method = EstimateMethod::Constructive;
  e.max_size = static_cast<int>(witness.gate_count());
  e.circuits_evaluated = 1;
  e.achieved_value = objective_value(kind, witness, a, b);
  if (meets_threshold(kind, e.achieved_value, delta)) {
    e.upper_bound = static_cast<int>(witness.gate_count());
    e.witness = witness;
  }
  return e;
}

std::vector<std::pair<int, int>> round_robin_pairs(int n_qubits) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n_qubits; ++i)
    for (int j = i + 1; j < n_qubits; ++j) pairs.emplace_back(i, j);
  return pairs;
}

namespace {

const std::vector<Eigen::MatrixXcd>& pauli_generators(int arity) {
  static const std::vector<Eigen::MatrixXcd> one = [] {
    std::vector<Eigen::MatrixXcd> v;
    for (char p : {'X', 'Y', 'Z'}) v.push_back(qsim::gates::pauli(p));
    return v;
  }();
  static const std::vector<Eigen::MatrixXcd> two = [] {
    std::vector<Eigen::MatrixXcd> v;
    for (char p : {'I', 'X', 'Y', 'Z'})
      for (char q : {'I', 'X', 'Y', 'Z'})
        if (p != 'I' || q != 'I') v.push_back(qsim::gates::kron(qsim::gates::pauli(p), qsim::gates::pauli(q)));
    return v;
  }();
  return arity == 1 ? one : two;
}

// exp(i * sum_k theta_k P_k)
Eigen::MatrixXcd block_unitary(std::span<const double> theta, int arity) {
  const auto& gens = pauli_generators(arity);
  const int d = 1 << arity;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t k = 0; k < gens.size(); ++k) h += theta[k] * gens[k];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  Eigen::VectorXcd phases(d);
  for (int k = 0; k < d; ++k) phases(k) = std::polar(1.0, solver.eigenvalues()(k));
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

struct Ansatz {
  int n_qubits;
  int arity;
  int params_per_block;
  std::vector<std::vector<int>> targets;  // per block
};

Ansatz make_ansatz(int n_qubits, int blocks, std::span<const std::pair<int, int>> schedule) {
  Ansatz an{n_qubits, n_qubits == 1 ? 1 : 2, n_qubits == 1 ? 3 : 15, {}};
  for (int k = 0; k < blocks; ++k) {
    if (an.arity == 1) {
      an.targets.push_back({0});
    } else {
      auto [i, j] = schedule[k % schedule.size()];
      an.targets.push_back({i, j});
    }
  }
  return an;
}

Circuit ansatz_circuit(const Ansatz& an, std::span<const double> params) {
  Circuit c(an.n_qubits);
  for (std::size_t k = 0; k < an.targets.size(); ++k) {
    auto theta = params.subspan(k * an.params_per_block, an.params_per_block);
    c.append(GateOp(an.targets[k], block_unitary(theta, an.arity), an.arity == 1 ? "su2" : "su4"));
  }
  return c;
}

}  // namespace

ComplexityEstimate variational_upper_bound(const ComplexityQuery& q, const VariationalOptions& options) {
  validate_query(q);
  if (options.restarts < 1) throw ValidationError("variational search needs at least one restart");
  ComplexityEstimate e = base_estimate(q, EstimateMethod::Variational);
  const int n = q.a.n_qubits();
  std::vector<std::pair<int, int>> schedule = options.schedule.empty() ? round_robin_pairs(n) : options.schedule;
  for (auto [i, j] : schedule) {
    if (i < 0 || j < 0 || i >= n || j >= n || i == j) throw ValidationError("invalid pair in ansatz schedule");
  }
  std::span<const cplx> a = q.a.amplitudes();
  std::span<const cplx> b = q.b.amplitudes();
  const double v0 = objective_from_images(q.kind, a, b, a, b);
  e.achieved_value = v0;
  e.circuits_evaluated = 1;
  if (meets_threshold(q.kind, v0, q.delta)) {
    e.upper_bound = 0;
    e.witness = Circuit(n);
    return e;
  }

  std::vector<cplx> ua(a.size()), ub(b.size());
  for (int m = 1; m <= q.max_size; ++m) {
    const Ansatz an = make_ansatz(n, m, schedule);
    const int n_params = m * an.params_per_block;
    auto evaluate = [&](const std::vector<double>& x) {
      std::copy(a.begin(), a.end(), ua.begin());
      std::copy(b.begin(), b.end(), ub.begin());
      for (int k = 0; k < m; ++k) {
        auto theta = std::span<const double>(x).subspan(k * an.params_per_block, an.params_per_block);
        GateOp g(an.targets[k], block_unitary(theta, an.arity));
        qsim::apply_gate_inplace(ua, n, g);
        qsim::apply_gate_inplace(ub, n, g);
      }
      ++e.circuits_evaluated;
      return objective_from_images(q.kind, a, b, ua, ub);
    };
    for (int r = 0; r < options.restarts; ++r) {
      std::mt19937_64 rng(qsim::derive_seed(q.seed, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(r)));
      std::uniform_real_distribution<double> init(-M_PI, M_PI);
      std::vector<double> x(n_params);
      for (double& v : x) v = init(rng);
      double best = evaluate(x);
      int evals = 1;
      double step = options.initial_step;
      while (step >= options.min_step && evals < options.max_evaluations && !meets_threshold(q.kind, best, q.delta)) {
        bool improved = false;
        for (int k = 0; k < n_params && evals < options.max_evaluations; ++k) {
          for (double dir : {1.0, -1.0}) {
            x[k] += dir * step;
            const double v = evaluate(x);
            ++evals;
            if (v > best + 1e-15) {
              best = v;
              improved = true;
              break;
            }
            x[k] -= dir * step;
          }
        }
        if (!improved) step *= 0.5;
      }
      e.achieved_value = std::max(e.achieved_value, best);
      if (meets_threshold(q.kind, best, q.delta)) {
        Circuit witness = ansatz_circuit(an, x);
        e.achieved_value = verified_value(q.kind, witness, q.a, q.b, q.delta);
        e.upper_bound = m;
        e.witness = std::move(witness);
        return e;
      }
    }
  }
  e.truncation = Truncation::MaxSize;
  return e;
}

ComplexityEstimate variational_upper_bound(const ComplexityQuery& q, int restarts,
                                           std::span<const std::pair<int, int>> schedule) {
  VariationalOptions options;
  options.restarts = restarts;
  options.schedule.assign(schedule.begin(), schedule.end());
  return variational_upper_bound(q, options);
}

ComplexityEstimate combine_estimates(const ComplexityEstimate& certified, const ComplexityEstimate& other) {
  ComplexityEstimate e = certified;
  e.method = EstimateMethod::Combined;
  e.circuits_evaluated = certified.circuits_evaluated + other.circuits_evaluated;
  if (other.upper_bound && (!certified.upper_bound || *other.upper_bound < *certified.upper_bound)) {
    e.upper_bound = other.upper_bound;
    e.witness = other.witness;
    e.achieved_value = other.achieved_value;
  }
  if (e.upper_bound && e.lower_bound > *e.upper_bound) e.lower_bound = *e.upper_bound;
  if (e.upper_bound && e.lower_bound == *e.upper_bound) e.truncation = Truncation::None;
  return e;
}

ComplexityProfile enumeration_profile(const QuantumState& a_state, const QuantumState& b_state,
                                      const GateAlphabet& alphabet_def, int max_size, std::uint64_t node_budget,
                                      int threads) {
  if (a_state.n_qubits() != b_state.n_qubits()) throw ValidationError("profile states have different qubit counts");
  if (max_size < 0) throw ValidationError("max_size must be non-negative");
  const int n = a_state.n_qubits();
  std::span<const cplx> a = a_state.amplitudes();
  std::span<const cplx> b = b_state.amplitudes();
  ComplexityProfile p;
  p.alphabet = alphabet_def.name();
  p.max_size = max_size;
  for (int k = 0; k < 3; ++k) {
    p.best[k].assign(max_size + 1, -1.0);
    p.best_circuit[k].assign(max_size + 1, std::nullopt);
  }
  {
    const Overlaps o = overlaps(a, b, a, b, true);
    for (int k = 0; k < 3; ++k) {
      p.best[k][0] = from_overlaps(kAllKinds[k], o);
      p.best_circuit[k][0] = Circuit(n);
    }
    p.completed_size = 0;
    p.circuits_evaluated = 1;
  }
  const ExpandedAlphabet alphabet = expand_with_inverses(alphabet_def, n);
  const int g_count = static_cast<int>(alphabet.gates.size());
  struct Slot {
    std::uint64_t visited = 0;
    std::array<double, 3> best{-1.0, -1.0, -1.0};
    std::array<std::vector<int>, 3> seq;
  };
  for (int m = 1; m <= max_size; ++m) {
    const std::uint64_t level_count = count_sequences(alphabet.inverse, m);
    if (p.circuits_evaluated + level_count > node_budget) break;
    std::vector<Slot> slots(g_count);
    parallel_for(g_count, threads, [&](std::size_t first) {
      Walker walker(alphabet, n, a, b, m);
      Slot& slot = slots[first];
      auto leaf = [&](std::span<const int> seq, std::span<const cplx> ua, std::span<const cplx> ub) {
        const Overlaps o = overlaps(a, b, ua, ub, true);
        for (int k = 0; k < 3; ++k) {
          const double v = from_overlaps(kAllKinds[k], o);
          if (v > slot.best[k]) {
            slot.best[k] = v;
            slot.seq[k].assign(seq.begin(), seq.end());
          }
        }
        return false;
      };
      slot.visited = walker.run(m, static_cast<int>(first), leaf).first;
    });
    for (int k = 0; k < 3; ++k) {
      int arg = -1;
      for (int g = 0; g < g_count; ++g) {
        if (arg < 0 || slots[g].best[k] > slots[arg].best[k]) arg = g;
      }
      if (arg >= 0) {
        p.best[k][m] = slots[arg].best[k];
        p.best_circuit[k][m] = circuit_from_sequence(alphabet, n, slots[arg].seq[k]);
      }
    }
    for (const Slot& s : slots) p.circuits_evaluated += s.visited;
    p.completed_size = m;
  }
  return p;
}

namespace {

class MultiWalker {
 public:
  using Visit = std::function<void(std::span<const int>, const std::vector<std::vector<cplx>>&)>;

  MultiWalker(const ExpandedAlphabet& alphabet, int n_qubits, std::span<const QuantumState> states, int max_depth)
      : alphabet_(alphabet), n_(n_qubits), images_(max_depth + 1), seq_(max_depth) {
    for (auto& level : images_) level.assign(states.size(), std::vector<cplx>(states[0].dim()));
    for (std::size_t k = 0; k < states.size(); ++k) {
      std::copy(states[k].amplitudes().begin(), states[k].amplitudes().end(), images_[0][k].begin());
    }
  }

  std::uint64_t run(int length, const Visit& visit) {
    std::uint64_t visited = 0;
    if (length == 0) {
      visit({}, images_[0]);
      return 1;
    }
    descend(0, length, visit, visited);
    return visited;
  }

 private:
  void descend(int depth, int length, const Visit& visit, std::uint64_t& visited) {
    const int g_count = static_cast<int>(alphabet_.gates.size());
    for (int g = 0; g < g_count; ++g) {
      if (depth > 0 && alphabet_.inverse[seq_[depth - 1]] == g) continue;
      for (std::size_t k = 0; k < images_[depth].size(); ++k) {
        images_[depth + 1][k] = images_[depth][k];
        qsim::apply_gate_inplace(images_[depth + 1][k], n_, alphabet_.gates[g]);
      }
      seq_[depth] = g;
      if (depth + 1 == length) {
        ++visited;
        visit(std::span<const int>(seq_.data(), length), images_[depth + 1]);
      } else {
        descend(depth + 1, length, visit, visited);
      }
    }
  }

  const ExpandedAlphabet& alphabet_;
  int n_;
  std::vector<std::vector<std::vector<cplx>>> images_;
  std::vector<int> seq_;
};

}  // namespace

EnumerationSummary for_each_circuit(
    const GateAlphabet& alphabet, std::span<const QuantumState> states, int max_size, std::uint64_t node_budget,
    const std::function<void(std::span<const int>, const std::vector<std::vector<cplx>>&)>& visit) {
  if (states.empty()) throw ValidationError("enumeration needs at least one state");
  for (const QuantumState& s : states) {
    if (s.n_qubits() != states[0].n_qubits()) throw ValidationError("enumeration states have different qubit counts");
  }
  const int n = states[0].n_qubits();
  const ExpandedAlphabet expanded = expand_with_inverses(alphabet, n);
  MultiWalker walker(expanded, n, states, std::max(max_size, 0));
  EnumerationSummary summary;
  for (int m = 0; m <= max_size; ++m) {
    if (summary.circuits_visited + count_sequences(expanded.inverse, m) > node_budget) {
      summary.truncated = true;
      break;
    }
    summary.circuits_visited += walker.run(m, visit);
    summary.completed_size = m;
  }
  return summary;
}

ComplexityEstimate estimate_from_profile(const ComplexityProfile& profile, const QuantumState& a,
                                         const QuantumState& b, ComplexityKind kind, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw ValidationError("delta must lie in (0, 1]");
  const int k = static_cast<int>(kind);
  ComplexityEstimate e;
  e.kind = kind;
  e.delta = delta;
  e.alphabet = profile.alphabet;
  e.max_size = profile.max_size;
  e.method = EstimateMethod::Enumeration;
  e.circuits_evaluated = profile.circuits_evaluated;
  for (int m = 0; m <= profile.completed_size; ++m) {
    e.achieved_value = std::max(e.achieved_value, profile.best[k][m]);
    if (meets_threshold(kind, profile.best[k][m], delta)) {
      const Circuit& witness = *profile.best_circuit[k][m];
      e.achieved_value = verified_value(kind, witness, a, b, delta);
      e.lower_bound = m;
      e.upper_bound = m;
      e.witness = witness;
      return e;
    }
  }
  e.lower_bound = profile.completed_size + 1;
  e.truncation = profile.completed_size < profile.max_size ? Truncation::NodeBudget : Truncation::MaxSize;
  return e;
}

json to_json(const ComplexityEstimate& e) {
  const bool certified = e.method == EstimateMethod::Enumeration || e.method == EstimateMethod::Combined;
  json j{{"schema_version", kSchemaVersion},
         {"kind", std::string(kind_name(e.kind))},
         {"delta", e.delta},
         {"lower_bound", e.lower_bound},
         {"lower_bound_scope", certified ? "alphabet:" + e.alphabet : std::string("trivial")},
         {"upper_bound", optional_int_to_json(e.upper_bound)},
         {"achieved_value", e.achieved_value},
         {"witness", e.witness ? to_json(*e.witness) : json(nullptr)},
         {"method", std::string(method_name(e.method))},
         {"seed", e.seed},
         {"max_size", e.max_size},
         {"truncated", e.truncated()},
         {"truncation", std::string(truncation_name(e.truncation))},
         {"circuits_evaluated", e.circuits_evaluated}};
  return j;
}

}  // namespace wavebranch::complexity

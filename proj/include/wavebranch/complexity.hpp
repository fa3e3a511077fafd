#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wavebranch/qsim.hpp"
#include "wavebranch/serialize.hpp"

namespace wavebranch::complexity {

using qsim::Circuit;
using qsim::QuantumState;
using wavebranch::to_json;

enum class ComplexityKind { Relative, DistinguishabilityProxy, InterferenceProxy };

inline constexpr std::array<ComplexityKind, 3> kAllKinds = {
    ComplexityKind::Relative, ComplexityKind::DistinguishabilityProxy, ComplexityKind::InterferenceProxy};

std::string_view kind_name(ComplexityKind kind);
ComplexityKind parse_kind(std::string_view name);

// Objective values are compared against thresholds with this slack so that
// exact attainment survives rounding.
inline constexpr double kThresholdSlack = 1e-12;
inline constexpr double kWitnessTolerance = 1e-9;

// delta for Relative, 2*delta for the two proxies.
double threshold_for(ComplexityKind kind, double delta);
bool meets_threshold(ComplexityKind kind, double value, double delta);

// |<b|U|a>|, |<a|U|a> - <b|U|b>|, or |<a|U|b>| + |<b|U|a>|.
double objective_value(ComplexityKind kind, const Circuit& u, const QuantumState& a, const QuantumState& b);
// Same objective from precomputed images U|a>, U|b>.
double objective_from_images(ComplexityKind kind, std::span<const cplx> a, std::span<const cplx> b,
                             std::span<const cplx> ua, std::span<const cplx> ub);

struct NamedGate {
  std::string label;
  Eigen::MatrixXcd matrix;
};

class GateAlphabet {
 public:
  GateAlphabet(std::string name, std::vector<NamedGate> one_qubit, std::vector<NamedGate> two_qubit);

  // {X,Y,Z,H,S,Sdg,T,Tdg} per qubit, CNOT on every ordered pair, and the nine
  // two-qubit Pauli products on every pair.
  static GateAlphabet standard();

  const std::string& name() const { return name_; }
  const std::vector<NamedGate>& one_qubit() const { return one_qubit_; }
  const std::vector<NamedGate>& two_qubit() const { return two_qubit_; }

  // Concrete gates on n qubits in canonical order: one-qubit entries by qubit then
  // entry, then two-qubit entries by entry then pair. Gates whose action duplicates
  // an earlier one are dropped.
  std::vector<qsim::GateOp> expand(int n_qubits) const;

 private:
  std::string name_;
  std::vector<NamedGate> one_qubit_;
  std::vector<NamedGate> two_qubit_;
};

struct ComplexityQuery {
  ComplexityKind kind;
  QuantumState a;
  QuantumState b;
  double delta;
  GateAlphabet alphabet = GateAlphabet::standard();
  int max_size = 3;
  std::uint64_t seed = 0;
  std::uint64_t node_budget = 20'000'000;  // circuits evaluated, checked per size level
  int threads = 1;
};

void validate_query(const ComplexityQuery& q);

enum class EstimateMethod { Enumeration, Constructive, Variational, Combined };
std::string_view method_name(EstimateMethod m);

enum class Truncation { None, MaxSize, NodeBudget };
std::string_view truncation_name(Truncation t);

struct ComplexityEstimate {
  ComplexityKind kind = ComplexityKind::Relative;
  double delta = 0.0;
  std::string alphabet;
  int max_size = 0;
  std::uint64_t seed = 0;
  int lower_bound = 0;
  std::optional<int> upper_bound;
  std::optional<Circuit> witness;
  double achieved_value = 0.0;
  EstimateMethod method = EstimateMethod::Enumeration;
  Truncation truncation = Truncation::None;
  std::uint64_t circuits_evaluated = 0;

  bool truncated() const { return truncation != Truncation::None; }
};

json to_json(const ComplexityEstimate& e);

// Exhaustive iterative deepening over the alphabet, pruning adjacent inverse pairs.
ComplexityEstimate brute_force_estimate(const ComplexityQuery& q);

// Upper bound from a known circuit; certifies nothing below it.
ComplexityEstimate constructive_estimate(ComplexityKind kind, const QuantumState& a, const QuantumState& b,
                                         double delta, const Circuit& witness);

std::vector<std::pair<int, int>> round_robin_pairs(int n_qubits);

struct VariationalOptions {
  int restarts = 4;
  std::vector<std::pair<int, int>> schedule;  // empty: round robin over all pairs
  int max_evaluations = 20000;                 // per restart and size
  double initial_step = 0.6;
  double min_step = 1e-5;
};

// Sequences of general two-qubit blocks, optimized by seeded coordinate search.
ComplexityEstimate variational_upper_bound(const ComplexityQuery& q, const VariationalOptions& options);
ComplexityEstimate variational_upper_bound(const ComplexityQuery& q, int restarts,
                                           std::span<const std::pair<int, int>> schedule = {});

// Lower bound from `certified`, the smaller witness of the two.
ComplexityEstimate combine_estimates(const ComplexityEstimate& certified, const ComplexityEstimate& other);

// Best objective per exact circuit size for all three kinds, from one enumeration.
struct ComplexityProfile {
  std::string alphabet;
  int max_size = 0;
  int completed_size = -1;  // largest size fully enumerated
  std::uint64_t circuits_evaluated = 0;
  std::array<std::vector<double>, 3> best;                       // [kind][size]
  std::array<std::vector<std::optional<Circuit>>, 3> best_circuit;  // first maximizer in canonical order
};

ComplexityProfile enumeration_profile(const QuantumState& a, const QuantumState& b, const GateAlphabet& alphabet,
                                      int max_size, std::uint64_t node_budget = 20'000'000, int threads = 1);

// The estimate brute_force_estimate would return, read off a profile.
ComplexityEstimate estimate_from_profile(const ComplexityProfile& profile, const QuantumState& a,
                                         const QuantumState& b, ComplexityKind kind, double delta);

struct EnumerationSummary {
  std::uint64_t circuits_visited = 0;
  int completed_size = -1;
  bool truncated = false;
};

// Visits every alphabet circuit of 0..max_size gates in canonical order, passing the
// gate indices (into alphabet.expand(n)) and the images U|states[k]>. A size level is
// skipped, and the walk marked truncated, if it would exceed node_budget.
EnumerationSummary for_each_circuit(
    const GateAlphabet& alphabet, std::span<const QuantumState> states, int max_size, std::uint64_t node_budget,
    const std::function<void(std::span<const int>, const std::vector<std::vector<cplx>>&)>& visit);

// Number of circuits of exactly `size` gates the enumeration visits.
std::uint64_t enumeration_count(const GateAlphabet& alphabet, int n_qubits, int size);

}  // namespace wavebranch::complexity

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wavebranch/complexity.hpp"
#include "wavebranch/qsim.hpp"
#include "wavebranch/serialize.hpp"

namespace wavebranch::branches {

using complexity::ComplexityEstimate;
using complexity::ComplexityKind;
using qsim::Circuit;
using qsim::QuantumState;
using wavebranch::to_json;
using complexity::to_json;

inline constexpr double kDefaultTolerance = 1e-8;
inline constexpr double kDefaultEpsilon = 0.1;
inline constexpr double kMaxEpsilon = 0.25;

struct BranchComponent {
  cplx weight;
  QuantumState state;
};

class BranchDecomposition {
 public:
  BranchDecomposition(QuantumState parent, std::vector<BranchComponent> components,
                      double tolerance = kDefaultTolerance);

  const QuantumState& parent() const { return parent_; }
  const std::vector<BranchComponent>& components() const { return components_; }
  double tolerance() const { return tolerance_; }
  int n_qubits() const { return parent_.n_qubits(); }
  std::size_t size() const { return components_.size(); }

 private:
  QuantumState parent_;
  std::vector<BranchComponent> components_;
  double tolerance_;
};

json to_json(const BranchDecomposition& d);
BranchDecomposition decomposition_from_json(const json& j);

enum class ViolationKind { Dimension, ComponentCount, Reconstruction, Orthogonality, Normalization };
std::string_view violation_name(ViolationKind k);

struct Violation {
  ViolationKind kind;
  int i = -1;
  int j = -1;
  double magnitude = 0.0;
  std::string detail;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
  double reconstruction_fidelity = 0.0;
  double weight_sum = 0.0;
  double max_overlap = 0.0;
  int worst_i = -1;
  int worst_j = -1;
};

ValidationReport validate_decomposition(const BranchDecomposition& d);
json to_json(const ValidationReport& r);

// How pair complexities are estimated.
struct EstimatorConfig {
  enum class Method { Enumeration, Variational, Combined };
  Method method = Method::Enumeration;
  complexity::GateAlphabet alphabet = complexity::GateAlphabet::standard();
  int max_size = 3;
  std::uint64_t node_budget = 20'000'000;
  int restarts = 4;
  std::uint64_t seed = 0;
  int threads = 1;
};

std::string_view estimator_method_name(EstimatorConfig::Method m);
EstimatorConfig::Method parse_estimator_method(std::string_view name);

ComplexityEstimate estimate(const EstimatorConfig& config, ComplexityKind kind, const QuantumState& a,
                            const QuantumState& b, double delta);

enum class PairClass { Robust, Good, NotBranch, Inconclusive };
std::string_view class_name(PairClass c);

struct PairAssessment {
  int i;
  int j;
  ComplexityEstimate ci;  // interference at epsilon
  ComplexityEstimate cd;  // distinguishability at 1 - epsilon
  std::optional<int> margin;  // ci.lower - cd.upper
  PairClass cls;
  std::optional<double> ratio;  // ci.lower / cd.upper, informational
};

struct BranchVerdict {
  std::vector<PairAssessment> pairs;
  PairClass overall;
  double epsilon;
  int good_threshold;
  double lambda;
};

// lambda = kappa * ln(1/p) for noise rate p.
double robustness_lambda(double noise_rate, double kappa = 1.0);

// Classifies one pair from its bounds. Good needs the worst-case margin to reach
// the threshold; NotBranch needs even the best case to miss it.
PairClass classify_pair(const ComplexityEstimate& ci, const ComplexityEstimate& cd, int good_threshold, double lambda);

BranchVerdict assess_branches(const BranchDecomposition& d, double epsilon, const EstimatorConfig& estimator,
                              int good_threshold = 2, double lambda = 1.0);
json to_json(const BranchVerdict& v);

// Weighted pure components standing in for rho_diag, plus phases for rho(theta).
class MixedStateModel {
 public:
  explicit MixedStateModel(const BranchDecomposition& d);

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<QuantumState>& states() const { return states_; }

 private:
  std::vector<double> weights_;
  std::vector<QuantumState> states_;
};

struct PairTerm {
  int i;
  int j;
  double weight;      // sqrt(p_i p_j)
  double difference;  // |P(m|+_ij) - P(m|-_ij)|
};

struct GapReport {
  double max_gap_found = 0.0;         // max |P(m|rho(theta)) - P(m|rho_diag)|
  double bound_rhs = 0.0;             // sum-bound right side at that point
  double max_bound_excess = -1.0;     // max over points of lhs - rhs
  double max_equality_residual = 0.0;  // two components only
  std::uint64_t points_checked = 0;
  std::uint64_t circuits_checked = 0;
  int phase_points = 0;
  bool truncated = false;
  std::vector<PairTerm> per_pair_terms;  // at the maximizing point
  std::optional<Circuit> worst_circuit;
  std::uint64_t worst_outcome = 0;
  std::vector<double> worst_phases;
};

// Exhaustive over alphabet circuits of up to circuit_budget gates, all outcomes and
// a uniform phase grid per component (the first component's phase fixed to 0).
GapReport rho_vs_diag_gap(const BranchDecomposition& d, int circuit_budget,
                          const complexity::GateAlphabet& alphabet = complexity::GateAlphabet::standard(),
                          int phase_points = 8, std::uint64_t node_budget = 5'000'000);
json to_json(const GapReport& r);

// Verdict of an inequality lhs <= rhs judged from bounds on both sides.
enum class CheckStatus { Verified, Violated, Inconclusive };
std::string_view status_name(CheckStatus s);

// Interval of possible values; an unknown side is infinite.
struct Bounds {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
};

Bounds bounds_of(const ComplexityEstimate& e);
Bounds add(const Bounds& x, const Bounds& y);
Bounds subtract(const Bounds& x, const Bounds& y);
Bounds minimum(const std::vector<Bounds>& xs);
Bounds maximum(const std::vector<Bounds>& xs);
CheckStatus check_leq(const Bounds& lhs, const Bounds& rhs);
json to_json(const Bounds& b);

struct InequalityCheck {
  std::string name;
  Bounds lhs;
  Bounds rhs;
  CheckStatus status;
};
json to_json(const InequalityCheck& c);

struct MergeBoundReport {
  double p;
  double epsilon;
  int theta_points;
  std::vector<InequalityCheck> checks;
  int violations = 0;
};

MergeBoundReport merge_bound_check(const QuantumState& a, const QuantumState& b, const QuantumState& c, double p,
                                   const EstimatorConfig& oracle, double epsilon = kDefaultEpsilon,
                                   int theta_points = 8);
json to_json(const MergeBoundReport& r);

struct CompatibilityReport {
  double epsilon;
  int phase_points;
  Bounds b1;
  Bounds b2;
  std::vector<InequalityCheck> checks;  // margins of (a,b), (b,c), (c,a) against B1, B2, max(B1,B2)
  int violations = 0;
};

CompatibilityReport three_branch_compatibility(const QuantumState& a, const QuantumState& b, const QuantumState& c,
                                               const EstimatorConfig& oracle, double epsilon = kDefaultEpsilon,
                                               int phase_points = 8);
json to_json(const CompatibilityReport& r);

struct IrreversibilityReport {
  std::vector<double> deltas;
  int preparation_cost;
  std::vector<Bounds> relative;         // relative complexity of parent to initial state, per delta
  std::vector<InequalityCheck> checks;  // one per pair and delta
  int violations = 0;
};

// preparation_cost may be omitted when psi0 is a computational basis state (cost 0).
// The right side uses the smaller of the enumeration and variational witnesses.
IrreversibilityReport irreversibility_check(const QuantumState& psi0, const BranchDecomposition& at_t,
                                            const EstimatorConfig& oracle,
                                            std::optional<int> preparation_cost = std::nullopt,
                                            std::vector<double> deltas = {0.1, 0.5, 0.9});
json to_json(const IrreversibilityReport& r);

}  // namespace wavebranch::branches

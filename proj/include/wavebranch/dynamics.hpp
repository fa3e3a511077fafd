#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wavebranch/branches.hpp"
#include "wavebranch/complexity.hpp"
#include "wavebranch/qsim.hpp"
#include "wavebranch/serialize.hpp"

namespace wavebranch::dynamics {

using qsim::Circuit;
using qsim::Hamiltonian;
using qsim::QuantumState;
using wavebranch::to_json;

// dC/dt = rate * C / (C + k), or rate * (1 - exp(-C/k)) for the fast-scrambling variant
// (exponential while C << k, linear after).
enum class RateModel { Saturating, FastScrambling };
std::string_view rate_model_name(RateModel m);
RateModel parse_rate_model(std::string_view name);

struct FlowParams {
  double k = 1.0;
  double rate = 1.0;
  double switchback_c = 0.0;  // carried as metadata only
  double dt = 1e-3;
  double t_end = 10.0;
  double sample_interval = 0.01;  // 0 samples every step
  RateModel model = RateModel::Saturating;
};

double flow_rate(const FlowParams& p, double c);
// Quantity conserved along exact trajectories: C + k ln(C/k) - rate t for the default model.
double flow_invariant(const FlowParams& p, double c, double t);

struct FlowSample {
  double t;
  double c_i;
  double c_d;
  double invariant_drift;  // largest |drift| over the tracks that are not at the fixed point
};

struct FlowTrajectory {
  FlowParams params;
  double ci0 = 0.0;
  double cd0 = 0.0;
  std::vector<FlowSample> samples;
  bool ci_fixed_point = false;
  bool cd_fixed_point = false;
  double max_invariant_drift = 0.0;
  bool gap_nondecreasing = true;  // c_i - c_d never drops between samples
};

// Fixed-step fourth-order Runge-Kutta, independently for both tracks.
FlowTrajectory integrate_flow(double ci0, double cd0, const FlowParams& p);
std::string to_csv(const FlowTrajectory& tr);
json to_json(const FlowTrajectory& tr);

struct EvolutionSample {
  double t;
  double witness_objective;
  complexity::ComplexityEstimate ci;  // interference at epsilon
  complexity::ComplexityEstimate cd;  // distinguishability at 1 - epsilon
};

struct EvolutionTrack {
  complexity::ComplexityKind witness_kind;
  double epsilon;
  std::vector<EvolutionSample> samples;
  bool truncated = false;
};

// Evolves both states exactly and, per time, evaluates the initial witness on the
// evolved pair and re-estimates the two complexities.
EvolutionTrack track_complexity_under_evolution(const QuantumState& a0, const QuantumState& b0, const Hamiltonian& h,
                                                const Circuit& witness0, const std::vector<double>& t_grid,
                                                const branches::EstimatorConfig& estimator,
                                                double epsilon = branches::kDefaultEpsilon,
                                                complexity::ComplexityKind witness_kind =
                                                    complexity::ComplexityKind::InterferenceProxy);
std::string to_csv(const EvolutionTrack& tr);
json to_json(const EvolutionTrack& tr);

struct FreezeSample {
  double t;
  double distinguishability;
  double interference;
};

struct FreezeReport {
  double commutator_norm;  // Frobenius norm of [U, H]
  cplx phase_a;            // <a|U|a>
  cplx phase_b;
  bool distinct_phases;
  std::vector<FreezeSample> samples;
  double total_variation;  // max - min of the distinguishability objective
  double max_interference;
  bool frozen;
};

inline constexpr double kCommutatorTolerance = 1e-8;
inline constexpr double kEigenTolerance = 1e-6;

// Rejects a symmetry that does not commute with h, or states that are not its eigenstates.
FreezeReport symmetry_freeze_check(const QuantumState& a, const QuantumState& b, const Hamiltonian& h,
                                   const Circuit& u_sym, const std::vector<double>& t_grid,
                                   double tolerance = 1e-6);
json to_json(const FreezeReport& r);

// e^{i angle Z} on every qubit.
Circuit phase_rotation_circuit(int n_qubits, double angle);
// Seeded random state supported on basis states with exactly `ones` set bits.
QuantumState sector_state(int n_qubits, int ones, std::uint64_t seed);

struct Observable {
  std::string name;
  Hamiltonian op;
};

struct ObservableStats {
  std::string name;
  double max_diag_gap;     // max |O_kk - O_k+1,k+1| in the window
  double median_diag_gap;
  double max_offdiag;      // max |O_kl|, k != l in the window
  double median_offdiag;
};

struct EthReport {
  int n_qubits;
  int window_begin;  // eigenstate indices [begin, end)
  int window_end;
  std::vector<ObservableStats> observables;
};

EthReport eth_diagnostic(const Hamiltonian& h, const std::vector<Observable>& observables,
                         double window_fraction = 1.0 / 3.0);
json to_json(const EthReport& r);

struct EthSweep {
  std::string model = "custom";
  std::vector<EthReport> reports;
  // Fitted exponential decay rates of the median diagonal gap and max off-diagonal
  // element, per observable, from a least-squares line through log(value) vs n.
  std::vector<double> diag_rate;
  std::vector<double> offdiag_rate;
};

EthSweep eth_size_sweep(const std::vector<int>& sizes,
                        const std::function<std::pair<Hamiltonian, std::vector<Observable>>(int)>& model,
                        double window_fraction = 1.0 / 3.0);
// Mixed-field Ising chain with Z on the middle site.
EthSweep eth_ising_sweep(const std::vector<int>& sizes, double window_fraction = 1.0 / 3.0);
json to_json(const EthSweep& s);

}  // namespace wavebranch::dynamics

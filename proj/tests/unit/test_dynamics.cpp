#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "wavebranch/dynamics.hpp"

using namespace wavebranch;
using namespace wavebranch::dynamics;
using qsim::Hamiltonian;
using qsim::QuantumState;

namespace {

// Closed-form check of the saturating flow: solve C + k ln(C/k) = const + rate t by bisection.
double saturating_exact(double c0, double k, double rate, double t) {
  const double target = c0 + k * std::log(c0 / k) + rate * t;
  double lo = 1e-300, hi = c0 + rate * t + 1.0;
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid + k * std::log(mid / k) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Flow, RateModels) {
  FlowParams p;
  EXPECT_DOUBLE_EQ(flow_rate(p, 1.0), 0.5);
  EXPECT_EQ(flow_rate(p, 0.0), 0.0);
  p.model = RateModel::FastScrambling;
  EXPECT_NEAR(flow_rate(p, 1.0), 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_EQ(parse_rate_model("fast_scrambling"), RateModel::FastScrambling);
  EXPECT_THROW(parse_rate_model("other"), ValidationError);
}

TEST(Flow, InvariantConservedAcrossParameters) {
  for (auto [k, rate] : {std::pair{1.0, 1.0}, std::pair{2.0, 5.0}}) {
    for (double c0 : {0.5, 5.0}) {
      FlowParams p;
      p.k = k;
      p.rate = rate;
      const FlowTrajectory tr = integrate_flow(c0, c0 / 2, p);
      EXPECT_LE(tr.max_invariant_drift, 1e-6) << k << " " << rate << " " << c0;
      EXPECT_NEAR(tr.samples.back().t, 10.0, 1e-12);
    }
  }
}

TEST(Flow, MatchesClosedFormSolution) {
  FlowParams p;
  p.k = 2.0;
  p.rate = 5.0;
  const FlowTrajectory tr = integrate_flow(0.5, 5.0, p);
  for (const FlowSample& s : tr.samples) {
    EXPECT_NEAR(s.c_i, saturating_exact(0.5, 2.0, 5.0, s.t), 1e-8 * std::max(1.0, s.c_i));
    EXPECT_NEAR(s.c_d, saturating_exact(5.0, 2.0, 5.0, s.t), 1e-8 * std::max(1.0, s.c_d));
  }
}

TEST(Flow, FastScramblingInvariant) {
  FlowParams p;
  p.model = RateModel::FastScrambling;
  p.k = 2.0;
  p.rate = 5.0;
  const FlowTrajectory tr = integrate_flow(0.5, 5.0, p);
  EXPECT_LE(tr.max_invariant_drift, 1e-6);
}

TEST(Flow, GapNondecreasingWhenInterferenceLeads) {
  for (auto [ci0, cd0] : {std::pair{5.0, 0.5}, std::pair{2.0, 1.0}, std::pair{1.0, 0.0}}) {
    const FlowTrajectory tr = integrate_flow(ci0, cd0, FlowParams{});
    EXPECT_TRUE(tr.gap_nondecreasing);
    for (std::size_t i = 1; i < tr.samples.size(); ++i) {
      EXPECT_GE(tr.samples[i].c_i - tr.samples[i].c_d, tr.samples[i - 1].c_i - tr.samples[i - 1].c_d);
    }
  }
  EXPECT_FALSE(integrate_flow(0.5, 5.0, FlowParams{}).gap_nondecreasing);
}

TEST(Flow, LinearGrowthWhenSaturated) {
  FlowParams p;
  p.rate = 3.0;
  p.t_end = 1.0;
  const FlowTrajectory tr = integrate_flow(1e5, 1e5, p);
  const double slope = (tr.samples.back().c_i - 1e5) / p.t_end;
  EXPECT_NEAR(slope, 3.0, 1e-3);
}

TEST(Flow, ZeroIsFixedPoint) {
  const FlowTrajectory tr = integrate_flow(0.0, 1.0, FlowParams{});
  EXPECT_TRUE(tr.ci_fixed_point);
  EXPECT_FALSE(tr.cd_fixed_point);
  for (const FlowSample& s : tr.samples) EXPECT_EQ(s.c_i, 0.0);
  EXPECT_LE(tr.max_invariant_drift, 1e-6);
}

TEST(Flow, SamplingAndCsv) {
  FlowParams p;
  p.t_end = 1.0;
  p.sample_interval = 0.1;
  const FlowTrajectory tr = integrate_flow(1.0, 0.5, p);
  EXPECT_EQ(tr.samples.size(), 11u);
  const std::string csv = to_csv(tr);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,c_i,c_d,invariant_drift");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 12);
  p.sample_interval = 0.0;
  EXPECT_EQ(integrate_flow(1.0, 0.5, p).samples.size(), 1001u);
}

TEST(Flow, RejectsBadParameters) {
  FlowParams p;
  p.dt = 0.0;
  EXPECT_THROW(integrate_flow(1, 1, p), ValidationError);
  EXPECT_THROW(integrate_flow(-1, 1, FlowParams{}), ValidationError);
  p = FlowParams{};
  p.k = -1;
  EXPECT_THROW(integrate_flow(1, 1, p), ValidationError);
}

TEST(Freeze, SectorStatesUnderXxz) {
  const int n = 4;
  const QuantumState a = sector_state(n, 1, 3);
  const QuantumState b = sector_state(n, 2, 4);
  const FreezeReport r =
      symmetry_freeze_check(a, b, qsim::xxz_chain(n), phase_rotation_circuit(n, M_PI / 2), {0, 1, 2, 5});
  EXPECT_LE(r.commutator_norm, 1e-8);
  EXPECT_TRUE(r.distinct_phases);
  EXPECT_LE(r.total_variation, 1e-5);
  EXPECT_TRUE(r.frozen);
  EXPECT_NEAR(r.samples.front().distinguishability, 2.0, 1e-9);
  EXPECT_NEAR(r.max_interference, 0.0, 1e-9);
}

TEST(Freeze, IdentitySymmetryHasEqualPhases) {
  const FreezeReport r = symmetry_freeze_check(sector_state(3, 1, 1), sector_state(3, 2, 1), qsim::xxz_chain(3),
                                               qsim::Circuit(3), {0, 1});
  EXPECT_FALSE(r.distinct_phases);
  EXPECT_NEAR(r.samples[0].distinguishability, 0.0, 1e-12);
}

TEST(Freeze, RejectsNonCommutingSymmetryAndNonEigenstates) {
  const int n = 3;
  EXPECT_THROW(symmetry_freeze_check(sector_state(n, 1, 1), sector_state(n, 2, 1), qsim::mixed_field_ising(n),
                                     phase_rotation_circuit(n, M_PI / 2), {0, 1}),
               ValidationError);
  const QuantumState mixed = qsim::haar_random_state(n, 2);
  EXPECT_THROW(symmetry_freeze_check(mixed, sector_state(n, 2, 1), qsim::xxz_chain(n),
                                     phase_rotation_circuit(n, M_PI / 2), {0, 1}),
               ValidationError);
}

TEST(Freeze, SectorStateSupport) {
  const QuantumState s = sector_state(4, 2, 9);
  for (std::size_t x = 0; x < s.dim(); ++x) {
    if (std::popcount(x) != 2) {
      EXPECT_EQ(s[x], cplx(0.0));
    }
  }
  EXPECT_EQ(sector_state(4, 2, 9), s);
  EXPECT_THROW(sector_state(4, 5, 1), ValidationError);
}

TEST(Eth, IdentityObservableIsFeatureless) {
  const Hamiltonian h = qsim::mixed_field_ising(4);
  const Hamiltonian id(4, {{1.0, "IIII"}});
  const EthReport r = eth_diagnostic(h, {{"I", id}, {"H", h}});
  EXPECT_NEAR(r.observables[0].max_diag_gap, 0.0, 1e-12);
  EXPECT_NEAR(r.observables[0].max_offdiag, 0.0, 1e-12);
  EXPECT_NEAR(r.observables[1].max_offdiag, 0.0, 1e-10);
  EXPECT_GT(r.observables[1].max_diag_gap, 0.0);
  EXPECT_EQ(r.window_end - r.window_begin, 5);
  EXPECT_EQ(r.window_begin, (16 - 5) / 2);
}

TEST(Eth, IsingSweepShrinksDiagonalGaps) {
  const EthSweep s = eth_ising_sweep({6, 8});
  ASSERT_EQ(s.reports.size(), 2u);
  EXPECT_LT(s.reports[1].observables[0].median_diag_gap, s.reports[0].observables[0].median_diag_gap);
  EXPECT_GT(s.diag_rate[0], 0.0);
  EXPECT_TRUE(to_json(s).contains("reports"));
}

TEST(Eth, RejectsBadWindow) {
  EXPECT_THROW(eth_diagnostic(qsim::mixed_field_ising(3), {}, 0.0), ValidationError);
}

TEST(Track, StaticHamiltonianKeepsEverythingConstant) {
  const int n = 3;
  const QuantumState a = QuantumState::zero(n), b = QuantumState::basis(n, 7);
  qsim::Circuit w(n);
  w.append(qsim::GateOp({0, 1}, qsim::gates::kron(qsim::gates::X(), qsim::gates::X()), "XX"));
  w.append(qsim::GateOp({2}, qsim::gates::X(), "X"));
  const Hamiltonian zero_h(n, {{0.0, "III"}});
  branches::EstimatorConfig est;
  est.max_size = 2;
  const EvolutionTrack tr = track_complexity_under_evolution(a, b, zero_h, w, {0.0, 0.5, 1.0}, est);
  ASSERT_EQ(tr.samples.size(), 3u);
  for (const EvolutionSample& s : tr.samples) {
    EXPECT_NEAR(s.witness_objective, 2.0, 1e-12);
    EXPECT_EQ(s.ci.lower_bound, tr.samples[0].ci.lower_bound);
    EXPECT_EQ(s.cd.upper_bound, tr.samples[0].cd.upper_bound);
  }
  const std::string csv = to_csv(tr);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,witness_objective,ci_lower,ci_upper,cd_lower,cd_upper");
}

TEST(Track, TimeZeroMatchesStaticEstimate) {
  const int n = 3;
  const QuantumState a = QuantumState::zero(n), b = QuantumState::basis(n, 7);
  branches::EstimatorConfig est;
  est.max_size = 2;
  const EvolutionTrack tr =
      track_complexity_under_evolution(a, b, qsim::mixed_field_ising(n), qsim::Circuit(n), {0.0, 0.3}, est);
  const auto ci = branches::estimate(est, complexity::ComplexityKind::InterferenceProxy, a, b, 0.1);
  EXPECT_EQ(tr.samples[0].ci.lower_bound, ci.lower_bound);
  EXPECT_EQ(tr.samples[0].ci.upper_bound, ci.upper_bound);
  EXPECT_THROW(track_complexity_under_evolution(a, b, qsim::mixed_field_ising(n), qsim::Circuit(n), {}, est),
               ValidationError);
}

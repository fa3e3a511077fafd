#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "wavebranch/complexity.hpp"

using namespace wavebranch;
using namespace wavebranch::qsim;
using namespace wavebranch::complexity;

namespace {

QuantumState ghz_like(int n) {
  std::vector<cplx> amps(std::size_t{1} << n, 0.0);
  amps.front() = M_SQRT1_2;
  amps.back() = M_SQRT1_2;
  return QuantumState::from_amplitudes(amps);
}

std::pair<QuantumState, QuantumState> orthogonal_pair(int n, std::uint64_t seed) {
  QuantumState a = haar_random_state(n, seed);
  QuantumState b = haar_random_state(n, seed + 1000);
  std::vector<QuantumState> against{a};
  return {a, orthogonalize(b, against)};
}

// Smallest size reaching the threshold, scanning every sequence without pruning.
std::optional<int> naive_min_size(ComplexityKind kind, const QuantumState& a, const QuantumState& b, double delta,
                                  int max_size) {
  const std::vector<GateOp> gates = GateAlphabet::standard().expand(a.n_qubits());
  std::vector<std::pair<QuantumState, QuantumState>> frontier{{a, b}};
  for (int m = 0; m <= max_size; ++m) {
    for (const auto& [ua, ub] : frontier) {
      if (meets_threshold(kind, objective_from_images(kind, a.amplitudes(), b.amplitudes(), ua.amplitudes(),
                                                      ub.amplitudes()),
                          delta))
        return m;
    }
    if (m == max_size) break;
    std::vector<std::pair<QuantumState, QuantumState>> next;
    next.reserve(frontier.size() * gates.size());
    for (const auto& [ua, ub] : frontier)
      for (const GateOp& g : gates) next.emplace_back(apply_gate(ua, g), apply_gate(ub, g));
    frontier = std::move(next);
  }
  return std::nullopt;
}

Circuit single(int n, GateOp g) {
  Circuit c(n);
  c.append(std::move(g));
  return c;
}

}  // namespace

TEST(Objective, ValuesOnSimpleStates) {
  const QuantumState z = QuantumState::zero(1);
  const QuantumState o = QuantumState::basis(1, 1);
  const Circuit x = single(1, GateOp({0}, gates::X(), "X"));
  const Circuit id(1);
  EXPECT_NEAR(objective_value(ComplexityKind::Relative, x, z, o), 1.0, 1e-15);
  EXPECT_NEAR(objective_value(ComplexityKind::Relative, id, z, o), 0.0, 1e-15);
  EXPECT_NEAR(objective_value(ComplexityKind::InterferenceProxy, x, z, o), 2.0, 1e-15);
  const Circuit zc = single(1, GateOp({0}, gates::Z(), "Z"));
  EXPECT_NEAR(objective_value(ComplexityKind::DistinguishabilityProxy, zc, z, o), 2.0, 1e-15);
  EXPECT_NEAR(objective_value(ComplexityKind::DistinguishabilityProxy, id, z, o), 0.0, 1e-15);
}

TEST(Objective, ThresholdsAndSlack) {
  EXPECT_DOUBLE_EQ(threshold_for(ComplexityKind::Relative, 0.4), 0.4);
  EXPECT_DOUBLE_EQ(threshold_for(ComplexityKind::InterferenceProxy, 0.4), 0.8);
  EXPECT_DOUBLE_EQ(threshold_for(ComplexityKind::DistinguishabilityProxy, 0.4), 0.8);
  EXPECT_TRUE(meets_threshold(ComplexityKind::Relative, 0.4 - 1e-13, 0.4));
  EXPECT_FALSE(meets_threshold(ComplexityKind::Relative, 0.4 - 1e-9, 0.4));
}

TEST(Objective, KindNamesRoundTrip) {
  for (ComplexityKind k : kAllKinds) EXPECT_EQ(parse_kind(kind_name(k)), k);
  EXPECT_THROW(parse_kind("bogus"), ValidationError);
}

TEST(Alphabet, StandardSizes) {
  const GateAlphabet alpha = GateAlphabet::standard();
  EXPECT_EQ(alpha.one_qubit().size(), 8u);
  EXPECT_EQ(alpha.expand(3).size(), 57u);
  EXPECT_EQ(alpha.expand(4).size(), 98u);
  EXPECT_EQ(alpha.expand(5).size(), 150u);
  EXPECT_EQ(alpha.expand(8).size(), 372u);
}

TEST(Alphabet, EnumerationCountMatchesWalk) {
  const GateAlphabet alpha = GateAlphabet::standard();
  std::vector<QuantumState> states{QuantumState::zero(2)};
  std::vector<std::uint64_t> seen(4, 0);
  const EnumerationSummary s =
      for_each_circuit(alpha, states, 3, 100'000'000, [&](std::span<const int> seq, const auto&) { ++seen[seq.size()]; });
  EXPECT_FALSE(s.truncated);
  EXPECT_EQ(s.completed_size, 3);
  EXPECT_EQ(seen[0], 1u);
  for (int m = 1; m <= 3; ++m) EXPECT_EQ(seen[m], enumeration_count(alpha, 2, m));
  EXPECT_LT(enumeration_count(alpha, 2, 2), alpha.expand(2).size() * alpha.expand(2).size());
}

TEST(Alphabet, WalkImagesMatchDirectApplication) {
  const GateAlphabet alpha = GateAlphabet::standard();
  const std::vector<GateOp> gates = alpha.expand(2);
  std::vector<QuantumState> states{haar_random_state(2, 3)};
  double worst = 0.0;
  for_each_circuit(alpha, states, 2, 100'000'000, [&](std::span<const int> seq, const auto& images) {
    QuantumState s = states[0];
    for (int g : seq) s = apply_gate(s, gates[g]);
    for (std::size_t i = 0; i < images[0].size(); ++i) worst = std::max(worst, std::abs(images[0][i] - s[i]));
  });
  EXPECT_LT(worst, 1e-12);
}

TEST(BruteForce, BellPairInterference) {
  ComplexityQuery q{ComplexityKind::InterferenceProxy, QuantumState::zero(2), QuantumState::basis(2, 3), 0.9};
  const ComplexityEstimate e = brute_force_estimate(q);
  EXPECT_EQ(e.lower_bound, 1);
  ASSERT_TRUE(e.upper_bound);
  EXPECT_EQ(*e.upper_bound, 1);
  EXPECT_FALSE(e.truncated());
  ASSERT_TRUE(e.witness);
  EXPECT_GE(objective_value(q.kind, *e.witness, q.a, q.b), 1.8 - 1e-9);
}

TEST(BruteForce, IdenticalStatesHaveZeroRelativeComplexity) {
  const QuantumState a = haar_random_state(3, 4);
  ComplexityQuery q{ComplexityKind::Relative, a, a, 1.0};
  const ComplexityEstimate e = brute_force_estimate(q);
  EXPECT_EQ(e.lower_bound, 0);
  EXPECT_EQ(e.upper_bound, 0);
  EXPECT_EQ(e.witness->gate_count(), 0u);
}

TEST(BruteForce, GhzBranchesDistinguishedByOneGate) {
  ComplexityQuery q{ComplexityKind::DistinguishabilityProxy, QuantumState::zero(3), QuantumState::basis(3, 7), 0.9};
  const ComplexityEstimate e = brute_force_estimate(q);
  EXPECT_EQ(e.upper_bound, 1);
  EXPECT_EQ(e.lower_bound, 1);
}

TEST(BruteForce, MatchesUnprunedOracle) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto [a, b] = orthogonal_pair(2, seed);
    for (ComplexityKind kind : kAllKinds) {
      for (double delta : {0.3, 0.6, 0.9}) {
        ComplexityQuery q{kind, a, b, delta};
        q.max_size = 2;
        const ComplexityEstimate e = brute_force_estimate(q);
        const std::optional<int> oracle = naive_min_size(kind, a, b, delta, 2);
        if (oracle) {
          EXPECT_EQ(e.upper_bound, oracle) << kind_name(kind) << " " << delta;
          EXPECT_EQ(e.lower_bound, *oracle);
        } else {
          EXPECT_FALSE(e.upper_bound);
          EXPECT_EQ(e.lower_bound, 3);
          EXPECT_EQ(e.truncation, Truncation::MaxSize);
        }
      }
    }
  }
}

TEST(BruteForce, WitnessesAreSound) {
  auto [a, b] = orthogonal_pair(3, 11);
  for (ComplexityKind kind : kAllKinds) {
    ComplexityQuery q{kind, a, b, 0.5};
    q.max_size = 2;
    const ComplexityEstimate e = brute_force_estimate(q);
    if (!e.upper_bound) continue;
    ASSERT_TRUE(e.witness);
    EXPECT_EQ(static_cast<int>(e.witness->gate_count()), *e.upper_bound);
    EXPECT_TRUE(meets_threshold(kind, objective_value(kind, *e.witness, a, b), 0.5));
  }
}

TEST(BruteForce, NodeBudgetTruncates) {
  auto [a, b] = orthogonal_pair(3, 2);
  ComplexityQuery q{ComplexityKind::InterferenceProxy, a, b, 1.0};
  q.node_budget = 30;  // fewer than the 57 one-gate circuits
  const ComplexityEstimate e = brute_force_estimate(q);
  EXPECT_EQ(e.truncation, Truncation::NodeBudget);
  EXPECT_EQ(e.lower_bound, 1);
  EXPECT_FALSE(e.upper_bound);
  EXPECT_LE(e.circuits_evaluated, 30u);
}

TEST(BruteForce, MaxSizeTruncates) {
  auto [a, b] = orthogonal_pair(3, 2);
  ComplexityQuery q{ComplexityKind::InterferenceProxy, a, b, 1.0};
  q.max_size = 1;
  const ComplexityEstimate e = brute_force_estimate(q);
  EXPECT_EQ(e.truncation, Truncation::MaxSize);
  EXPECT_EQ(e.lower_bound, 2);
}

TEST(BruteForce, ThreadCountDoesNotChangeResult) {
  auto [a, b] = orthogonal_pair(3, 5);
  for (ComplexityKind kind : kAllKinds) {
    ComplexityQuery q{kind, a, b, 0.6};
    q.max_size = 2;
    const ComplexityEstimate serial = brute_force_estimate(q);
    q.threads = 4;
    const ComplexityEstimate parallel = brute_force_estimate(q);
    EXPECT_EQ(serial.lower_bound, parallel.lower_bound);
    EXPECT_EQ(serial.upper_bound, parallel.upper_bound);
    EXPECT_EQ(serial.witness, parallel.witness);
  }
}

TEST(BruteForce, MonotoneInDelta) {
  auto [a, b] = orthogonal_pair(2, 8);
  for (ComplexityKind kind : kAllKinds) {
    int previous = 0;
    for (double delta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      ComplexityQuery q{kind, a, b, delta};
      const ComplexityEstimate e = brute_force_estimate(q);
      EXPECT_GE(e.lower_bound, previous);
      previous = e.lower_bound;
    }
  }
}

TEST(BruteForce, RejectsInvalidQueries) {
  ComplexityQuery q{ComplexityKind::Relative, QuantumState::zero(2), QuantumState::zero(3), 0.5};
  EXPECT_THROW(brute_force_estimate(q), ValidationError);
  q.b = QuantumState::zero(2);
  q.delta = 0.0;
  EXPECT_THROW(brute_force_estimate(q), ValidationError);
  q.delta = 1.5;
  EXPECT_THROW(validate_query(q), ValidationError);
  q.delta = 0.5;
  q.threads = 0;
  EXPECT_THROW(validate_query(q), ValidationError);
}

TEST(Profile, AgreesWithBruteForce) {
  for (std::uint64_t seed : {3u, 9u}) {
    auto [a, b] = orthogonal_pair(2, seed);
    const ComplexityProfile p = enumeration_profile(a, b, GateAlphabet::standard(), 3);
    EXPECT_EQ(p.completed_size, 3);
    for (ComplexityKind kind : kAllKinds) {
      for (double delta : {0.1, 0.5, 0.9}) {
        ComplexityQuery q{kind, a, b, delta};
        const ComplexityEstimate direct = brute_force_estimate(q);
        const ComplexityEstimate read = estimate_from_profile(p, a, b, kind, delta);
        EXPECT_EQ(direct.lower_bound, read.lower_bound);
        EXPECT_EQ(direct.upper_bound, read.upper_bound);
        EXPECT_EQ(direct.truncation, read.truncation);
      }
    }
  }
}

TEST(Profile, BestValuesAreNondecreasingAcrossSizes) {
  auto [a, b] = orthogonal_pair(2, 4);
  const ComplexityProfile p = enumeration_profile(a, b, GateAlphabet::standard(), 3);
  for (const auto& best : p.best) {
    // Size m+2 contains every size-m circuit padded by a gate and its inverse.
    for (std::size_t m = 0; m + 2 < best.size(); ++m) EXPECT_GE(best[m + 2], best[m] - 1e-12);
  }
}

TEST(Constructive, GivesUpperBoundOnly) {
  const QuantumState a = QuantumState::zero(2);
  const QuantumState b = QuantumState::basis(2, 3);
  Circuit c(2);
  c.append(GateOp({0, 1}, gates::kron(gates::X(), gates::X()), "XX"));
  const ComplexityEstimate e = constructive_estimate(ComplexityKind::InterferenceProxy, a, b, 0.9, c);
  EXPECT_EQ(e.upper_bound, 1);
  EXPECT_EQ(e.lower_bound, 0);
  const ComplexityEstimate miss = constructive_estimate(ComplexityKind::InterferenceProxy, a, b, 0.9, Circuit(2));
  EXPECT_FALSE(miss.upper_bound);
}

TEST(Variational, FindsBellWitness) {
  ComplexityQuery q{ComplexityKind::InterferenceProxy, QuantumState::zero(2), QuantumState::basis(2, 3), 0.99};
  const ComplexityEstimate e = variational_upper_bound(q, 4);
  EXPECT_EQ(e.upper_bound, 1);
  ASSERT_TRUE(e.witness);
  EXPECT_TRUE(meets_threshold(q.kind, objective_value(q.kind, *e.witness, q.a, q.b), 0.99));
}

TEST(Variational, ReachesHaarStateOnFourQubits) {
  ComplexityQuery q{ComplexityKind::Relative, QuantumState::zero(4), haar_random_state(4, 21), 0.9};
  q.max_size = 6;
  q.seed = 2;
  const ComplexityEstimate e = variational_upper_bound(q, 4);
  ASSERT_TRUE(e.upper_bound);
  EXPECT_GE(e.achieved_value, 0.9 - 1e-9);
  EXPECT_TRUE(meets_threshold(q.kind, objective_value(q.kind, *e.witness, q.a, q.b), 0.9));
}

TEST(Variational, DeterministicForSeed) {
  ComplexityQuery q{ComplexityKind::Relative, QuantumState::zero(3), haar_random_state(3, 5), 0.8};
  q.seed = 7;
  const ComplexityEstimate e1 = variational_upper_bound(q, 2);
  const ComplexityEstimate e2 = variational_upper_bound(q, 2);
  EXPECT_EQ(e1.upper_bound, e2.upper_bound);
  EXPECT_EQ(e1.witness, e2.witness);
  EXPECT_EQ(e1.achieved_value, e2.achieved_value);
}

TEST(Variational, RoundRobinCoversAllPairs) {
  const auto pairs = round_robin_pairs(4);
  EXPECT_EQ(pairs.size(), 6u);
}

TEST(Combine, TakesLowerFromCertifiedAndBestWitness) {
  ComplexityEstimate certified;
  certified.lower_bound = 2;
  certified.truncation = Truncation::MaxSize;
  ComplexityEstimate other;
  other.upper_bound = 2;
  other.witness = Circuit(2);
  const ComplexityEstimate c = combine_estimates(certified, other);
  EXPECT_EQ(c.method, EstimateMethod::Combined);
  EXPECT_EQ(c.lower_bound, 2);
  EXPECT_EQ(c.upper_bound, 2);
  EXPECT_EQ(c.truncation, Truncation::None);

  other.upper_bound = 5;
  const ComplexityEstimate open = combine_estimates(certified, other);
  EXPECT_EQ(open.upper_bound, 5);
  EXPECT_TRUE(open.truncated());
}

TEST(Estimate, JsonReportsUnknownUpperBound) {
  ComplexityQuery q{ComplexityKind::InterferenceProxy, QuantumState::zero(3), ghz_like(3), 1.0};
  q.max_size = 1;
  const json j = to_json(brute_force_estimate(q));
  EXPECT_EQ(j.at("upper_bound"), "unknown");
  EXPECT_EQ(j.at("kind"), std::string(kind_name(ComplexityKind::InterferenceProxy)));
}

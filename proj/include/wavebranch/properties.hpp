#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wavebranch/branches.hpp"
#include "wavebranch/complexity.hpp"
#include "wavebranch/serialize.hpp"

namespace wavebranch::branches {

struct PropertyTally {
  std::string name;
  int verified = 0;
  int violated = 0;
  int inconclusive = 0;
  std::map<std::string, std::array<int, 3>> by_delta = {};  // delta label -> {verified, violated, inconclusive}
  std::vector<json> examples = {};                        // first few violations

  int total() const { return verified + violated + inconclusive; }
};

struct PropertySuiteConfig {
  std::uint64_t seed = 7;
  std::vector<int> n_values = {3};
  int instances = 100;  // per qubit count
  int max_size = 3;
  std::vector<double> deltas = {0.1, 0.5, 0.9};
  double triangle_delta = 0.9;
  int phase_points = 4;
  std::uint64_t node_budget = 20'000'000;
  int threads = 1;
  complexity::GateAlphabet alphabet = complexity::GateAlphabet::standard();
};

struct PropertySuiteReport {
  PropertySuiteConfig config;
  std::vector<PropertyTally> properties;
  int total_violations = 0;
  bool truncated = false;

  const PropertyTally& property(const std::string& name) const;
};

// Random orthogonal pairs (and a third state for the triangle check) per instance;
// every inequality is judged from certified lower and witness upper bounds.
PropertySuiteReport run_property_suite(const PropertySuiteConfig& config);
json to_json(const PropertySuiteReport& r);

struct TripleSuiteConfig {
  std::uint64_t seed = 11;
  int n = 3;
  int triples = 50;
  double epsilon = kDefaultEpsilon;
  int theta_points = 8;
  int phase_points = 8;
  EstimatorConfig oracle;
};

struct TripleSuiteReport {
  TripleSuiteConfig config;
  PropertyTally merge;
  PropertyTally compatibility;
  int total_violations = 0;
};

// Merge bounds at p = 1/2 and a seeded p in [0.3, 0.7], plus three-branch compatibility.
TripleSuiteReport run_triple_suite(const TripleSuiteConfig& config);
json to_json(const TripleSuiteReport& r);
json to_json(const PropertyTally& t);

// Seeded random pairwise-orthogonal states.
std::vector<qsim::QuantumState> random_orthogonal_states(int n_qubits, int count, std::uint64_t seed);

}  // namespace wavebranch::branches

#include "wavebranch/properties.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "wavebranch/parallel.hpp"

namespace wavebranch::branches {

using complexity::ComplexityProfile;
using complexity::GateAlphabet;

namespace {

constexpr std::size_t kMaxExamples = 5;

std::string delta_label(double d) {
  std::ostringstream os;
  os << d;
  return os.str();
}

struct Outcome {
  std::size_t property;
  CheckStatus status;
  std::string label;
  json example;
};

void tally(PropertyTally& t, const Outcome& o) {
  auto& slot = t.by_delta[o.label];
  switch (o.status) {
    case CheckStatus::Verified: ++t.verified; ++slot[0]; break;
    case CheckStatus::Violated:
      ++t.violated;
      ++slot[1];
      if (t.examples.size() < kMaxExamples) t.examples.push_back(o.example);
      break;
    case CheckStatus::Inconclusive: ++t.inconclusive; ++slot[2]; break;
  }
}

bool same_bounds(const Bounds& x, const Bounds& y) { return x.lower == y.lower && x.upper == y.upper; }

// Nondecreasing in delta means both ends of the interval are.
bool monotone(const Bounds& lo_delta, const Bounds& hi_delta) {
  return lo_delta.lower <= hi_delta.lower && lo_delta.upper <= hi_delta.upper;
}

enum Prop : std::size_t {
  kMonotonicity,
  kSymmetry,
  kPhaseInvariance,
  kSandwich,
  kCeiling,
  kConjugate,
  kTriangle,
  kIrreversibility,
  kPropCount
};

const char* kPropNames[kPropCount] = {"monotonicity",  "symmetry",          "phase_invariance", "ci_sandwich",
                                      "cd_ceiling",    "conjugate_basis",   "triangle",         "irreversibility"};

}  // namespace

std::vector<qsim::QuantumState> random_orthogonal_states(int n_qubits, int count, std::uint64_t seed) {
  if (count > (1 << n_qubits)) throw ValidationError("more orthogonal states requested than the dimension allows");
  std::vector<qsim::QuantumState> out;
  for (int k = 0; k < count; ++k) {
    qsim::QuantumState s = qsim::haar_random_state(n_qubits, qsim::derive_seed(seed, static_cast<std::uint64_t>(k)));
    out.push_back(qsim::orthogonalize(s, out));
  }
  return out;
}

const PropertyTally& PropertySuiteReport::property(const std::string& name) const {
  for (const PropertyTally& t : properties) {
    if (t.name == name) return t;
  }
  throw std::out_of_range("no property named " + name);
}

PropertySuiteReport run_property_suite(const PropertySuiteConfig& config) {
  if (config.instances < 1) throw ValidationError("property suite needs at least one instance");
  if (config.n_values.empty()) throw ValidationError("property suite needs at least one qubit count");
  if (config.phase_points < 2) throw ValidationError("phase grid needs at least two points");
  for (double d : config.deltas) {
    if (!(d > 0.0 && d <= 1.0)) throw ValidationError("deltas must lie in (0, 1]");
  }
  std::vector<double> deltas = config.deltas;
  std::sort(deltas.begin(), deltas.end());

  struct Job {
    int n;
    int instance;
  };
  std::vector<Job> jobs;
  for (int n : config.n_values) {
    if (n < 1 || n > 6) throw ValidationError("property suite qubit counts must lie in [1, 6]");
    for (int i = 0; i < config.instances; ++i) jobs.push_back({n, i});
  }
  std::vector<std::vector<Outcome>> results(jobs.size());
  std::vector<char> truncated(jobs.size(), 0);

  using K = ComplexityKind;
  parallel_for(jobs.size(), config.threads, [&](std::size_t job_index) {
    const Job job = jobs[job_index];
    const int count = std::min(3, 1 << job.n);
    std::vector<qsim::QuantumState> st = random_orthogonal_states(
        job.n, count, qsim::derive_seed(config.seed, static_cast<std::uint64_t>(job.n), static_cast<std::uint64_t>(job.instance)));
    const qsim::QuantumState& a = st[0];
    const qsim::QuantumState& b = st[1];
    const qsim::QuantumState zero = qsim::QuantumState::zero(job.n);
    bool trunc = false;
    auto profile = [&](const qsim::QuantumState& x, const qsim::QuantumState& y) {
      ComplexityProfile p =
          complexity::enumeration_profile(x, y, config.alphabet, config.max_size, config.node_budget, 1);
      trunc = trunc || p.completed_size < p.max_size;
      return p;
    };
    auto E = [&](const ComplexityProfile& p, const qsim::QuantumState& x, const qsim::QuantumState& y, K kind,
                 double delta) { return bounds_of(complexity::estimate_from_profile(p, x, y, kind, delta)); };
    std::vector<Outcome>& out = results[job_index];
    auto emit = [&](Prop prop, CheckStatus status, const std::string& label, const Bounds& lhs, const Bounds& rhs,
                    const std::string& detail) {
      json ex;
      if (status == CheckStatus::Violated) {
        ex = json{{"n", job.n}, {"instance", job.instance}, {"case", label}, {"detail", detail},
                  {"lhs", to_json(lhs)}, {"rhs", to_json(rhs)}};
      }
      out.push_back({prop, status, label, std::move(ex)});
    };
    auto exact = [](bool ok) { return ok ? CheckStatus::Verified : CheckStatus::Violated; };

    const ComplexityProfile p_ab = profile(a, b);
    const ComplexityProfile p_ba = profile(b, a);

    // Monotonicity from independent brute-force runs, which must also match the profile.
    for (K kind : complexity::kAllKinds) {
      std::vector<Bounds> per_delta;
      for (double d : deltas) {
        complexity::ComplexityQuery q{kind, a, b, d, config.alphabet, config.max_size, 0, config.node_budget, 1};
        const Bounds direct = bounds_of(complexity::brute_force_estimate(q));
        if (!same_bounds(direct, E(p_ab, a, b, kind, d))) {
          throw std::logic_error("profile and direct enumeration disagree");
        }
        per_delta.push_back(direct);
      }
      for (std::size_t k = 0; k + 1 < deltas.size(); ++k) {
        const std::string label = delta_label(deltas[k]) + "->" + delta_label(deltas[k + 1]);
        emit(kMonotonicity, exact(monotone(per_delta[k], per_delta[k + 1])), label, per_delta[k], per_delta[k + 1],
             std::string(complexity::kind_name(kind)));
      }
    }

    std::vector<ComplexityProfile> p_phase;
    std::vector<qsim::QuantumState> b_phase;
    for (int k = 1; k < config.phase_points; ++k) {
      b_phase.push_back(b.with_phase(2.0 * M_PI * k / config.phase_points));
      p_phase.push_back(profile(a, b_phase.back()));
    }
    const ComplexityProfile p_0a = profile(zero, a);
    const ComplexityProfile p_0b = profile(zero, b);
    const qsim::QuantumState plus = qsim::superpose(1.0, a, 1.0, b);
    const qsim::QuantumState minus = qsim::superpose(1.0, a, -1.0, b);
    const ComplexityProfile p_pm = profile(plus, minus);
    const ComplexityProfile p_t0 = profile(plus, zero);

    for (double d : deltas) {
      const std::string label = delta_label(d);
      for (K kind : complexity::kAllKinds) {
        const Bounds ab = E(p_ab, a, b, kind, d);
        const Bounds ba = E(p_ba, b, a, kind, d);
        emit(kSymmetry, exact(same_bounds(ab, ba)), label, ab, ba, std::string(complexity::kind_name(kind)));
        for (std::size_t k = 0; k < p_phase.size(); ++k) {
          const Bounds ph = E(p_phase[k], a, b_phase[k], kind, d);
          emit(kPhaseInvariance, exact(same_bounds(ab, ph)), label, ab, ph, std::string(complexity::kind_name(kind)));
        }
      }
      const Bounds r_half = E(p_ab, a, b, K::Relative, d / 2);
      const Bounds i_half = E(p_ab, a, b, K::InterferenceProxy, d / 2);
      const Bounds r_full = E(p_ab, a, b, K::Relative, d);
      emit(kSandwich, check_leq(r_half, i_half), label, r_half, i_half, "relative(d/2) <= interference(d/2)");
      emit(kSandwich, check_leq(i_half, r_full), label, i_half, r_full, "interference(d/2) <= relative(d)");

      const Bounds cd = E(p_ab, a, b, K::DistinguishabilityProxy, d);
      const Bounds ceiling = minimum({E(p_0a, zero, a, K::Relative, d), E(p_0b, zero, b, K::Relative, d)});
      emit(kCeiling, check_leq(cd, ceiling), label, cd, ceiling, "distinguishability <= min relative from |0...0>");

      const Bounds ci_pm = E(p_pm, plus, minus, K::InterferenceProxy, d);
      emit(kConjugate, check_leq(ci_pm, cd), label, ci_pm, cd, "interference(a+b, a-b) <= distinguishability(a, b)");

      const Bounds ci = E(p_ab, a, b, K::InterferenceProxy, d);
      const Bounds cr_t0 = E(p_t0, plus, zero, K::Relative, d);
      emit(kIrreversibility, check_leq(ci, cr_t0), label, ci, cr_t0, "interference <= relative(parent, |0...0>)");
    }

    if (count >= 3) {
      const qsim::QuantumState& c = st[2];
      const double d = config.triangle_delta;
      const double d2 = 2.0 * d * d - 1.0;
      if (d2 > 0.0) {
        const ComplexityProfile p_ac = profile(a, c);
        const ComplexityProfile p_bc = profile(b, c);
        const Bounds lhs = E(p_ac, a, c, K::Relative, d2);
        const Bounds rhs = add(E(p_ab, a, b, K::Relative, d), E(p_bc, b, c, K::Relative, d));
        emit(kTriangle, check_leq(lhs, rhs), delta_label(d), lhs, rhs, "relative(a,c,2d^2-1) <= relative(a,b,d) + relative(b,c,d)");
      }
    }
    truncated[job_index] = trunc;
  });

  PropertySuiteReport report;
  report.config = config;
  for (std::size_t p = 0; p < kPropCount; ++p) report.properties.push_back(PropertyTally{.name = kPropNames[p]});
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    for (const Outcome& o : results[j]) tally(report.properties[o.property], o);
    report.truncated = report.truncated || truncated[j];
  }
  for (const PropertyTally& t : report.properties) report.total_violations += t.violated;
  return report;
}

json to_json(const PropertyTally& t) {
  json by = json::object();
  for (const auto& [label, counts] : t.by_delta) {
    by[label] = json{{"verified", counts[0]}, {"violated", counts[1]}, {"inconclusive", counts[2]}};
  }
  return json{{"name", t.name},
              {"verified", t.verified},
              {"violated", t.violated},
              {"inconclusive", t.inconclusive},
              {"by_case", std::move(by)},
              {"violation_examples", t.examples}};
}

json to_json(const PropertySuiteReport& r) {
  json props = json::array();
  for (const PropertyTally& t : r.properties) props.push_back(to_json(t));
  return json{{"schema_version", kSchemaVersion},
              {"seed", r.config.seed},
              {"n_values", r.config.n_values},
              {"instances", r.config.instances},
              {"max_size", r.config.max_size},
              {"deltas", r.config.deltas},
              {"triangle_delta", r.config.triangle_delta},
              {"alphabet", r.config.alphabet.name()},
              {"properties", std::move(props)},
              {"total_violations", r.total_violations},
              {"truncated", r.truncated}};
}

TripleSuiteReport run_triple_suite(const TripleSuiteConfig& config) {
  if (config.triples < 1) throw ValidationError("triple suite needs at least one triple");
  if (config.n < 2) throw ValidationError("triple suite needs at least two qubits");
  std::vector<std::vector<InequalityCheck>> merge(config.triples), compat(config.triples);
  EstimatorConfig oracle = config.oracle;
  const int outer_threads = oracle.threads;
  oracle.threads = 1;
  parallel_for(static_cast<std::size_t>(config.triples), outer_threads, [&](std::size_t i) {
    const std::uint64_t seed = qsim::derive_seed(config.seed, 1000 + i);
    std::vector<qsim::QuantumState> st = random_orthogonal_states(config.n, 3, seed);
    std::mt19937_64 rng(qsim::derive_seed(seed, 99));
    const double p_random = std::uniform_real_distribution<double>(0.3, 0.7)(rng);
    for (double p : {0.5, p_random}) {
      MergeBoundReport m = merge_bound_check(st[0], st[1], st[2], p, oracle, config.epsilon, config.theta_points);
      for (InequalityCheck& c : m.checks) {
        c.name += p == 0.5 ? " (p=1/2)" : " (p random)";
        merge[i].push_back(std::move(c));
      }
    }
    CompatibilityReport c = three_branch_compatibility(st[0], st[1], st[2], oracle, config.epsilon, config.phase_points);
    compat[i] = std::move(c.checks);
  });
  TripleSuiteReport report{config, PropertyTally{.name = "merge_bounds"}, PropertyTally{.name = "three_branch_compatibility"}, 0};
  auto add_checks = [](PropertyTally& t, const std::vector<InequalityCheck>& checks, std::size_t triple) {
    for (const InequalityCheck& c : checks) {
      json ex;
      if (c.status == CheckStatus::Violated) ex = json{{"triple", triple}, {"check", to_json(c)}};
      tally(t, Outcome{0, c.status, c.name, std::move(ex)});
    }
  };
  for (int i = 0; i < config.triples; ++i) {
    add_checks(report.merge, merge[i], i);
    add_checks(report.compatibility, compat[i], i);
  }
  report.total_violations = report.merge.violated + report.compatibility.violated;
  return report;
}

json to_json(const TripleSuiteReport& r) {
  return json{{"schema_version", kSchemaVersion},
              {"seed", r.config.seed},
              {"n", r.config.n},
              {"triples", r.config.triples},
              {"epsilon", r.config.epsilon},
              {"max_size", r.config.oracle.max_size},
              {"merge_bounds", to_json(r.merge)},
              {"three_branch_compatibility", to_json(r.compatibility)},
              {"total_violations", r.total_violations}};
}

}  // namespace wavebranch::branches

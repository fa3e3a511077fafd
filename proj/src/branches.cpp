#include "wavebranch/branches.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wavebranch::branches {

using complexity::ComplexityQuery;

BranchDecomposition::BranchDecomposition(QuantumState parent, std::vector<BranchComponent> components,
                                         double tolerance)
    : parent_(std::move(parent)), components_(std::move(components)), tolerance_(tolerance) {
  if (!(tolerance_ > 0.0)) throw ValidationError("decomposition tolerance must be positive");
}

json to_json(const BranchDecomposition& d) {
  json comps = json::array();
  for (const BranchComponent& c : d.components()) {
    comps.push_back(json{{"weight", complex_to_json(c.weight)}, {"state", to_json(c.state)}});
  }
  return json{{"schema_version", kSchemaVersion},
              {"parent", to_json(d.parent())},
              {"components", std::move(comps)},
              {"tolerance", d.tolerance()}};
}

BranchDecomposition decomposition_from_json(const json& j) {
  if (!j.contains("parent") || !j.contains("components")) {
    throw ValidationError("decomposition needs 'parent' and 'components'");
  }
  std::vector<BranchComponent> comps;
  for (const json& c : j.at("components")) {
    comps.push_back({complex_from_json(c.at("weight")), state_from_json(c.at("state"))});
  }
  const double tol = j.contains("tolerance") ? j.at("tolerance").get<double>() : kDefaultTolerance;
  return BranchDecomposition(state_from_json(j.at("parent")), std::move(comps), tol);
}

std::string_view violation_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::Dimension: return "dimension";
    case ViolationKind::ComponentCount: return "component_count";
    case ViolationKind::Reconstruction: return "reconstruction";
    case ViolationKind::Orthogonality: return "orthogonality";
    case ViolationKind::Normalization: return "normalization";
  }
  return "unknown";
}

ValidationReport validate_decomposition(const BranchDecomposition& d) {
  ValidationReport r;
  const auto& comps = d.components();
  auto add = [&](ViolationKind kind, int i, int j, double magnitude, std::string detail) {
    r.ok = false;
    r.violations.push_back({kind, i, j, magnitude, std::move(detail)});
  };
  if (comps.size() < 2) {
    add(ViolationKind::ComponentCount, -1, -1, static_cast<double>(comps.size()), "need at least two components");
  }
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (comps[i].state.n_qubits() != d.n_qubits()) {
      add(ViolationKind::Dimension, static_cast<int>(i), -1, comps[i].state.n_qubits(),
          "component qubit count differs from parent");
      return r;
    }
  }
  for (const BranchComponent& c : comps) r.weight_sum += std::norm(c.weight);
  if (std::abs(r.weight_sum - 1.0) > d.tolerance()) {
    std::ostringstream os;
    os.precision(6);
    os << "sum of squared weights " << r.weight_sum << " differs from 1";
    add(ViolationKind::Normalization, -1, -1, r.weight_sum, os.str());
  }
  for (std::size_t i = 0; i < comps.size(); ++i) {
    for (std::size_t j = i + 1; j < comps.size(); ++j) {
      const double ov = std::abs(qsim::inner_product(comps[i].state, comps[j].state));
      if (ov > r.max_overlap || r.worst_i < 0) {
        r.max_overlap = ov;
        r.worst_i = static_cast<int>(i);
        r.worst_j = static_cast<int>(j);
      }
    }
  }
  if (r.worst_i >= 0 && r.max_overlap > d.tolerance()) {
    std::ostringstream os;
    os.precision(6);
    os << "components " << r.worst_i << " and " << r.worst_j << " overlap by " << r.max_overlap;
    add(ViolationKind::Orthogonality, r.worst_i, r.worst_j, r.max_overlap, os.str());
  }
  std::vector<cplx> recon(d.parent().dim(), cplx(0.0));
  for (const BranchComponent& c : comps) {
    for (std::size_t k = 0; k < recon.size(); ++k) recon[k] += c.weight * c.state[k];
  }
  cplx ov(0.0);
  for (std::size_t k = 0; k < recon.size(); ++k) ov += std::conj(d.parent()[k]) * recon[k];
  r.reconstruction_fidelity = std::norm(ov);
  if (1.0 - r.reconstruction_fidelity > d.tolerance()) {
    std::ostringstream os;
    os.precision(6);
    os << "reconstruction fidelity " << r.reconstruction_fidelity << " below 1 - tolerance";
    add(ViolationKind::Reconstruction, -1, -1, 1.0 - r.reconstruction_fidelity, os.str());
  }
  return r;
}

json to_json(const ValidationReport& r) {
  json v = json::array();
  for (const Violation& x : r.violations) {
    v.push_back(json{{"kind", std::string(violation_name(x.kind))},
                     {"i", x.i},
                     {"j", x.j},
                     {"magnitude", x.magnitude},
                     {"detail", x.detail}});
  }
  return json{{"schema_version", kSchemaVersion},
              {"ok", r.ok},
              {"violations", std::move(v)},
              {"reconstruction_fidelity", r.reconstruction_fidelity},
              {"weight_sum", r.weight_sum},
              {"max_overlap", r.max_overlap},
              {"worst_pair", json::array({r.worst_i, r.worst_j})}};
}

namespace {

void require_valid(const BranchDecomposition& d, bool allow_single = false) {
  ValidationReport r = validate_decomposition(d);
  for (const Violation& v : r.violations) {
    if (allow_single && v.kind == ViolationKind::ComponentCount && d.size() == 1) continue;
    throw ValidationError("invalid branch decomposition: " + v.detail);
  }
}

}  // namespace

std::string_view estimator_method_name(EstimatorConfig::Method m) {
  switch (m) {
    case EstimatorConfig::Method::Enumeration: return "enumeration";
    case EstimatorConfig::Method::Variational: return "variational";
    case EstimatorConfig::Method::Combined: return "combined";
  }
  return "unknown";
}

EstimatorConfig::Method parse_estimator_method(std::string_view name) {
  if (name == "enumeration") return EstimatorConfig::Method::Enumeration;
  if (name == "variational") return EstimatorConfig::Method::Variational;
  if (name == "combined") return EstimatorConfig::Method::Combined;
  throw ValidationError("unknown estimator method '" + std::string(name) + "'");
}

ComplexityEstimate estimate(const EstimatorConfig& config, ComplexityKind kind, const QuantumState& a,
                            const QuantumState& b, double delta) {
  ComplexityQuery q{kind, a, b, delta, config.alphabet, config.max_size, config.seed, config.node_budget,
                    config.threads};
  switch (config.method) {
    case EstimatorConfig::Method::Enumeration: return complexity::brute_force_estimate(q);
    case EstimatorConfig::Method::Variational: return complexity::variational_upper_bound(q, config.restarts);
    case EstimatorConfig::Method::Combined:
      return complexity::combine_estimates(complexity::brute_force_estimate(q),
                                           complexity::variational_upper_bound(q, config.restarts));
  }
  throw std::logic_error("unhandled estimator method");
}

std::string_view class_name(PairClass c) {
  switch (c) {
    case PairClass::Robust: return "Robust";
    case PairClass::Good: return "Good";
    case PairClass::NotBranch: return "NotBranch";
    case PairClass::Inconclusive: return "Inconclusive";
  }
  return "unknown";
}

double robustness_lambda(double noise_rate, double kappa) {
  if (!(noise_rate > 0.0 && noise_rate < 1.0)) throw ValidationError("noise rate must lie in (0, 1)");
  return kappa * std::log(1.0 / noise_rate);
}

PairClass classify_pair(const ComplexityEstimate& ci, const ComplexityEstimate& cd, int good_threshold,
                        double lambda) {
  const Bounds margin = subtract(bounds_of(ci), bounds_of(cd));
  if (margin.lower >= good_threshold) {
    const bool robust = ci.lower_bound > std::exp(lambda * static_cast<double>(*cd.upper_bound));
    return robust ? PairClass::Robust : PairClass::Good;
  }
  if (margin.upper < good_threshold) return PairClass::NotBranch;
  return PairClass::Inconclusive;
}

BranchVerdict assess_branches(const BranchDecomposition& d, double epsilon, const EstimatorConfig& estimator,
                              int good_threshold, double lambda) {
  require_valid(d);
  if (!(epsilon > 0.0 && epsilon <= kMaxEpsilon)) throw ValidationError("epsilon must lie in (0, 0.25]");
  BranchVerdict v{{}, PairClass::Robust, epsilon, good_threshold, lambda};
  const auto& comps = d.components();
  for (std::size_t i = 0; i < comps.size(); ++i) {
    for (std::size_t j = i + 1; j < comps.size(); ++j) {
      const QuantumState& a = comps[i].state;
      const QuantumState& b = comps[j].state;
      ComplexityEstimate ci = estimate(estimator, ComplexityKind::InterferenceProxy, a, b, epsilon);
      ComplexityEstimate cd = estimate(estimator, ComplexityKind::DistinguishabilityProxy, a, b, 1.0 - epsilon);
      PairAssessment pa{static_cast<int>(i), static_cast<int>(j), ci, cd, std::nullopt, PairClass::Inconclusive,
                        std::nullopt};
      if (cd.upper_bound) {
        pa.margin = ci.lower_bound - *cd.upper_bound;
        if (*cd.upper_bound > 0) pa.ratio = static_cast<double>(ci.lower_bound) / *cd.upper_bound;
      }
      pa.cls = classify_pair(ci, cd, good_threshold, lambda);
      const bool good = pa.cls == PairClass::Good || pa.cls == PairClass::Robust;
      if (good && !(pa.margin && *pa.margin >= good_threshold)) {
        throw std::logic_error("pair classified Good without a certified margin");
      }
      v.pairs.push_back(std::move(pa));
    }
  }
  bool all_robust = true, all_good = true, any_not = false;
  for (const PairAssessment& p : v.pairs) {
    all_robust = all_robust && p.cls == PairClass::Robust;
    all_good = all_good && (p.cls == PairClass::Robust || p.cls == PairClass::Good);
    any_not = any_not || p.cls == PairClass::NotBranch;
  }
  v.overall = all_robust ? PairClass::Robust
              : all_good ? PairClass::Good
              : any_not  ? PairClass::NotBranch
                         : PairClass::Inconclusive;
  return v;
}

json to_json(const BranchVerdict& v) {
  json pairs = json::array();
  for (const PairAssessment& p : v.pairs) {
    pairs.push_back(json{{"i", p.i},
                         {"j", p.j},
                         {"ci", complexity::to_json(p.ci)},
                         {"cd", complexity::to_json(p.cd)},
                         {"margin", optional_int_to_json(p.margin)},
                         {"class", std::string(class_name(p.cls))},
                         {"ci_cd_ratio", p.ratio ? json(*p.ratio) : json(nullptr)},
                         {"truncated", p.ci.truncated() || p.cd.truncated()}});
  }
  bool truncated = false;
  for (const PairAssessment& p : v.pairs) truncated = truncated || p.ci.truncated() || p.cd.truncated();
  return json{{"schema_version", kSchemaVersion},
              {"pairs", std::move(pairs)},
              {"overall_class", std::string(class_name(v.overall))},
              {"epsilon", v.epsilon},
              {"good_threshold", v.good_threshold},
              {"lambda", v.lambda},
              {"truncated", truncated}};
}

MixedStateModel::MixedStateModel(const BranchDecomposition& d) {
  require_valid(d);
  double total = 0.0;
  for (const BranchComponent& c : d.components()) {
    weights_.push_back(std::norm(c.weight));
    states_.push_back(c.state);
    total += weights_.back();
  }
  if (std::abs(total - 1.0) > 1e-10) throw ValidationError("mixture weights do not sum to 1 within 1e-10");
}

GapReport rho_vs_diag_gap(const BranchDecomposition& d, int circuit_budget, const complexity::GateAlphabet& alphabet,
                          int phase_points, std::uint64_t node_budget) {
  MixedStateModel model(d);
  if (d.n_qubits() > 6) throw ValidationError("density-matrix gap check limited to 6 qubits");
  if (circuit_budget < 0) throw ValidationError("circuit budget must be non-negative");
  if (phase_points < 1) throw ValidationError("phase grid needs at least one point");
  const auto& p = model.weights();
  const std::size_t k_count = p.size();
  const std::size_t dim = d.parent().dim();
  const std::vector<qsim::GateOp> gates = alphabet.expand(d.n_qubits());

  // Phase grid: component 0 fixed at 0, the others on a uniform grid.
  std::vector<std::vector<cplx>> grid;
  {
    std::size_t total = 1;
    for (std::size_t k = 1; k < k_count; ++k) total *= static_cast<std::size_t>(phase_points);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::vector<cplx> ph(k_count, cplx(1.0));
      std::size_t rest = idx;
      for (std::size_t k = 1; k < k_count; ++k) {
        ph[k] = std::polar(1.0, 2.0 * M_PI * static_cast<double>(rest % phase_points) / phase_points);
        rest /= phase_points;
      }
      grid.push_back(std::move(ph));
    }
  }
  std::vector<double> sqrt_p(k_count);
  for (std::size_t k = 0; k < k_count; ++k) sqrt_p[k] = std::sqrt(p[k]);

  GapReport report;
  report.phase_points = phase_points;
  bool have_worst = false;
  std::vector<int> worst_seq;
  std::size_t worst_grid = 0;
  auto visit = [&](std::span<const int> seq, const std::vector<std::vector<cplx>>& phi) {
    ++report.circuits_checked;
    for (std::size_t m = 0; m < dim; ++m) {
      double p_diag = 0.0;
      for (std::size_t k = 0; k < k_count; ++k) p_diag += p[k] * std::norm(phi[k][m]);
      for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const std::vector<cplx>& ph = grid[gi];
        cplx amp(0.0);
        for (std::size_t k = 0; k < k_count; ++k) amp += sqrt_p[k] * ph[k] * phi[k][m];
        const double lhs = std::abs(std::norm(amp) - p_diag);
        double rhs = 0.0;
        for (std::size_t i = 0; i < k_count; ++i) {
          for (std::size_t j = i + 1; j < k_count; ++j) {
            const cplx x = ph[i] * phi[i][m];
            const cplx y = ph[j] * phi[j][m];
            const double diff = std::abs(0.5 * std::norm(x + y) - 0.5 * std::norm(x - y));
            rhs += sqrt_p[i] * sqrt_p[j] * diff;
          }
        }
        ++report.points_checked;
        const double excess = lhs - rhs;
        report.max_bound_excess = std::max(report.max_bound_excess, excess);
        if (k_count == 2) report.max_equality_residual = std::max(report.max_equality_residual, std::abs(excess));
        if (excess > 1e-10) {
          std::ostringstream os;
          os.precision(17);
          os << "sum bound violated: lhs " << lhs << " > rhs " << rhs;
          throw std::logic_error(os.str());
        }
        if (k_count == 2 && std::abs(excess) > 1e-10) {
          throw std::logic_error("two-component gap equality violated");
        }
        if (!have_worst || lhs > report.max_gap_found) {
          have_worst = true;
          report.max_gap_found = lhs;
          report.bound_rhs = rhs;
          worst_seq.assign(seq.begin(), seq.end());
          report.worst_outcome = m;
          worst_grid = gi;
          report.per_pair_terms.clear();
          for (std::size_t i = 0; i < k_count; ++i) {
            for (std::size_t j = i + 1; j < k_count; ++j) {
              const cplx x = ph[i] * phi[i][m];
              const cplx y = ph[j] * phi[j][m];
              report.per_pair_terms.push_back({static_cast<int>(i), static_cast<int>(j), sqrt_p[i] * sqrt_p[j],
                                               std::abs(0.5 * std::norm(x + y) - 0.5 * std::norm(x - y))});
            }
          }
        }
      }
    }
  };
  complexity::EnumerationSummary summary =
      complexity::for_each_circuit(alphabet, model.states(), circuit_budget, node_budget, visit);
  report.truncated = summary.truncated;
  if (have_worst) {
    Circuit c(d.n_qubits());
    for (int g : worst_seq) c.append(gates[g]);
    report.worst_circuit = std::move(c);
    for (std::size_t k = 0; k < k_count; ++k) report.worst_phases.push_back(std::arg(grid[worst_grid][k]));
  }
  return report;
}

json to_json(const GapReport& r) {
  json terms = json::array();
  for (const PairTerm& t : r.per_pair_terms) {
    terms.push_back(json{{"i", t.i}, {"j", t.j}, {"weight", t.weight}, {"difference", t.difference}});
  }
  return json{{"schema_version", kSchemaVersion},
              {"max_gap_found", r.max_gap_found},
              {"bound_rhs", r.bound_rhs},
              {"max_bound_excess", r.max_bound_excess},
              {"max_equality_residual", r.max_equality_residual},
              {"points_checked", r.points_checked},
              {"circuits_checked", r.circuits_checked},
              {"phase_points", r.phase_points},
              {"truncated", r.truncated},
              {"per_pair_terms", std::move(terms)},
              {"worst_circuit", r.worst_circuit ? to_json(*r.worst_circuit) : json(nullptr)},
              {"worst_outcome", r.worst_outcome},
              {"worst_phases", r.worst_phases}};
}

std::string_view status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Verified: return "verified";
    case CheckStatus::Violated: return "violated";
    case CheckStatus::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

Bounds bounds_of(const ComplexityEstimate& e) {
  Bounds b;
  b.lower = e.lower_bound;
  if (e.upper_bound) b.upper = *e.upper_bound;
  return b;
}

Bounds add(const Bounds& x, const Bounds& y) { return {x.lower + y.lower, x.upper + y.upper}; }

Bounds subtract(const Bounds& x, const Bounds& y) { return {x.lower - y.upper, x.upper - y.lower}; }

Bounds minimum(const std::vector<Bounds>& xs) {
  if (xs.empty()) throw std::logic_error("minimum of empty bound list");
  Bounds r = xs.front();
  for (const Bounds& x : xs) {
    r.lower = std::min(r.lower, x.lower);
    r.upper = std::min(r.upper, x.upper);
  }
  return r;
}

Bounds maximum(const std::vector<Bounds>& xs) {
  if (xs.empty()) throw std::logic_error("maximum of empty bound list");
  Bounds r = xs.front();
  for (const Bounds& x : xs) {
    r.lower = std::max(r.lower, x.lower);
    r.upper = std::max(r.upper, x.upper);
  }
  return r;
}

CheckStatus check_leq(const Bounds& lhs, const Bounds& rhs) {
  if (lhs.upper <= rhs.lower) return CheckStatus::Verified;
  if (lhs.lower > rhs.upper) return CheckStatus::Violated;
  return CheckStatus::Inconclusive;
}

namespace {

json bound_value(double v) {
  if (std::isinf(v)) return json(v > 0 ? "unknown" : "-unknown");
  return json(static_cast<long long>(std::llround(v)));
}

InequalityCheck make_check(std::string name, const Bounds& lhs, const Bounds& rhs) {
  return InequalityCheck{std::move(name), lhs, rhs, check_leq(lhs, rhs)};
}

int count_violations(const std::vector<InequalityCheck>& checks) {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(),
                                        [](const InequalityCheck& c) { return c.status == CheckStatus::Violated; }));
}

void require_orthogonal(std::initializer_list<const QuantumState*> states) {
  std::vector<const QuantumState*> v(states);
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      if (v[i]->n_qubits() != v[j]->n_qubits()) throw ValidationError("states have different qubit counts");
      const double ov = std::abs(qsim::inner_product(*v[i], *v[j]));
      if (ov > 1e-8) {
        std::ostringstream os;
        os.precision(6);
        os << "states must be pairwise orthogonal (overlap " << ov << ")";
        throw ValidationError(os.str());
      }
    }
  }
}

QuantumState combo(double ca, const QuantumState& a, cplx cb, const QuantumState& b) {
  return qsim::superpose(cplx(ca), a, cb, b);
}

Bounds est(const EstimatorConfig& oracle, ComplexityKind kind, const QuantumState& a, const QuantumState& b,
           double delta) {
  return bounds_of(estimate(oracle, kind, a, b, delta));
}

}  // namespace

json to_json(const Bounds& b) { return json{{"lower", bound_value(b.lower)}, {"upper", bound_value(b.upper)}}; }

json to_json(const InequalityCheck& c) {
  return json{{"name", c.name}, {"lhs", to_json(c.lhs)}, {"rhs", to_json(c.rhs)},
              {"status", std::string(status_name(c.status))}};
}

MergeBoundReport merge_bound_check(const QuantumState& a, const QuantumState& b, const QuantumState& c, double p,
                                   const EstimatorConfig& oracle, double epsilon, int theta_points) {
  require_orthogonal({&a, &b, &c});
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("p must lie in (0, 1)");
  if (theta_points < 8) throw ValidationError("phase grid needs at least 8 points");
  if (!(epsilon > 0.0 && epsilon <= kMaxEpsilon)) throw ValidationError("epsilon must lie in (0, 0.25]");
  const double q = 1.0 - p;
  if (epsilon >= std::min(p, q) || epsilon > std::sqrt(std::min(p, q))) {
    throw ValidationError("p too close to 0 or 1 for this epsilon");
  }
  MergeBoundReport r{p, epsilon, theta_points, {}, 0};
  using K = ComplexityKind;
  const QuantumState d = combo(std::sqrt(p), b, std::sqrt(q), c);
  const Bounds cd_merged = est(oracle, K::DistinguishabilityProxy, a, d, 1.0 - epsilon);
  r.checks.push_back(
      make_check("distinguishability a|b", est(oracle, K::DistinguishabilityProxy, a, b, 1.0 - epsilon / p), cd_merged));
  r.checks.push_back(
      make_check("distinguishability a|c", est(oracle, K::DistinguishabilityProxy, a, c, 1.0 - epsilon / q), cd_merged));
  std::vector<Bounds> ci_b, ci_c;
  for (int k = 0; k < theta_points; ++k) {
    const cplx ph = std::polar(1.0, 2.0 * M_PI * k / theta_points);
    ci_b.push_back(est(oracle, K::InterferenceProxy, a, combo(std::sqrt(p), b, ph * std::sqrt(q), c), epsilon));
    ci_c.push_back(est(oracle, K::InterferenceProxy, a, combo(std::sqrt(q), c, ph * std::sqrt(p), b), epsilon));
  }
  r.checks.push_back(
      make_check("interference a|b", minimum(ci_b), est(oracle, K::InterferenceProxy, a, b, epsilon / std::sqrt(p))));
  r.checks.push_back(
      make_check("interference a|c", minimum(ci_c), est(oracle, K::InterferenceProxy, a, c, epsilon / std::sqrt(q))));
  r.violations = count_violations(r.checks);
  return r;
}

json to_json(const MergeBoundReport& r) {
  json checks = json::array();
  for (const InequalityCheck& c : r.checks) checks.push_back(to_json(c));
  return json{{"schema_version", kSchemaVersion}, {"p", r.p},         {"epsilon", r.epsilon},
              {"theta_points", r.theta_points},   {"checks", checks}, {"violations", r.violations}};
}

CompatibilityReport three_branch_compatibility(const QuantumState& a, const QuantumState& b, const QuantumState& c,
                                               const EstimatorConfig& oracle, double epsilon, int phase_points) {
  require_orthogonal({&a, &b, &c});
  if (phase_points < 4) throw ValidationError("phase grid needs at least 4 points");
  if (!(epsilon > 0.0 && epsilon <= kMaxEpsilon)) throw ValidationError("epsilon must lie in (0, 0.25]");
  using K = ComplexityKind;
  const double s = 1.0 / std::sqrt(2.0);
  CompatibilityReport r{epsilon, phase_points, {}, {}, {}, 0};
  std::vector<Bounds> ci_a, ci_c;
  for (int k = 0; k < phase_points; ++k) {
    const cplx ph = std::polar(1.0, 2.0 * M_PI * k / phase_points);
    ci_a.push_back(est(oracle, K::InterferenceProxy, a, combo(s, b, ph * s, c), epsilon));
    ci_c.push_back(est(oracle, K::InterferenceProxy, combo(s, a, ph * s, b), c, epsilon));
  }
  r.b1 = subtract(minimum(ci_a), est(oracle, K::DistinguishabilityProxy, a, combo(s, b, s, c), 1.0 - epsilon));
  r.b2 = subtract(minimum(ci_c), est(oracle, K::DistinguishabilityProxy, combo(s, a, s, b), c, 1.0 - epsilon));
  auto margin = [&](const QuantumState& x, const QuantumState& y) {
    return subtract(est(oracle, K::InterferenceProxy, x, y, std::sqrt(2.0) * epsilon),
                    est(oracle, K::DistinguishabilityProxy, x, y, 1.0 - 2.0 * epsilon));
  };
  r.checks.push_back(make_check("margin(a,b) >= B1", r.b1, margin(a, b)));
  r.checks.push_back(make_check("margin(b,c) >= B2", r.b2, margin(b, c)));
  r.checks.push_back(make_check("margin(c,a) >= max(B1,B2)", maximum({r.b1, r.b2}), margin(c, a)));
  r.violations = count_violations(r.checks);
  return r;
}

json to_json(const CompatibilityReport& r) {
  json checks = json::array();
  for (const InequalityCheck& c : r.checks) checks.push_back(to_json(c));
  return json{{"schema_version", kSchemaVersion},
              {"epsilon", r.epsilon},
              {"phase_points", r.phase_points},
              {"b1", to_json(r.b1)},
              {"b2", to_json(r.b2)},
              {"checks", checks},
              {"violations", r.violations}};
}

IrreversibilityReport irreversibility_check(const QuantumState& psi0, const BranchDecomposition& at_t,
                                            const EstimatorConfig& oracle, std::optional<int> preparation_cost,
                                            std::vector<double> deltas) {
  require_valid(at_t, true);
  if (psi0.n_qubits() != at_t.n_qubits()) throw ValidationError("initial state and branches differ in qubit count");
  int cost = 0;
  if (preparation_cost) {
    if (*preparation_cost < 0) throw ValidationError("preparation cost must be non-negative");
    cost = *preparation_cost;
  } else {
    int nonzero = 0;
    for (cplx z : psi0.amplitudes()) nonzero += std::abs(z) > 1e-12;
    if (nonzero != 1) {
      throw ValidationError("initial state is not a computational product state; supply its preparation cost");
    }
  }
  EstimatorConfig witness_oracle = oracle;
  witness_oracle.method = EstimatorConfig::Method::Combined;
  EstimatorConfig lower_oracle = oracle;
  lower_oracle.method = EstimatorConfig::Method::Enumeration;
  IrreversibilityReport r{deltas, cost, {}, {}, 0};
  const auto& comps = at_t.components();
  for (double delta : deltas) {
    const ComplexityEstimate cr =
        estimate(witness_oracle, ComplexityKind::Relative, at_t.parent(), psi0, delta);
    r.relative.push_back(bounds_of(cr));
    const Bounds rhs = add(bounds_of(cr), Bounds{static_cast<double>(cost), static_cast<double>(cost)});
    for (std::size_t i = 0; i < comps.size(); ++i) {
      for (std::size_t j = i + 1; j < comps.size(); ++j) {
        const Bounds lhs =
            est(lower_oracle, ComplexityKind::InterferenceProxy, comps[i].state, comps[j].state, delta);
        std::ostringstream name;
        name << "interference(" << i << "," << j << ") <= relative(parent, initial) + cost at delta " << delta;
        r.checks.push_back(make_check(name.str(), lhs, rhs));
      }
    }
  }
  r.violations = count_violations(r.checks);
  return r;
}

json to_json(const IrreversibilityReport& r) {
  json relative = json::array();
  for (const Bounds& b : r.relative) relative.push_back(to_json(b));
  json checks = json::array();
  for (const InequalityCheck& c : r.checks) checks.push_back(to_json(c));
  return json{{"schema_version", kSchemaVersion},
              {"deltas", r.deltas},
              {"preparation_cost", r.preparation_cost},
              {"relative", relative},
              {"checks", checks},
              {"violations", r.violations}};
}

}  // namespace wavebranch::branches

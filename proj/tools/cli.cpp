#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "wavebranch/branches.hpp"
#include "wavebranch/codes.hpp"
#include "wavebranch/complexity.hpp"
#include "wavebranch/dynamics.hpp"
#include "wavebranch/examples.hpp"
#include "wavebranch/parallel.hpp"
#include "wavebranch/properties.hpp"
#include "wavebranch/serialize.hpp"

namespace wavebranch::cli {

namespace {

using branches::EstimatorConfig;
using complexity::ComplexityKind;
using qsim::QuantumState;

struct Common {
  std::string format = "auto";
  std::string output;
  std::optional<std::uint64_t> seed;
  int budget = 3;
  double epsilon = branches::kDefaultEpsilon;
  int threshold = 2;
  double lambda = 1.0;
  int threads = default_thread_count();
  bool strict = false;
  std::string method = "enumeration";
  std::uint64_t node_budget = 20'000'000;
  int restarts = 4;
};

struct FixtureOptions {
  std::string name;
  std::string file;
  int n = 3;
  int d1 = 4;
  int d2 = 4;
  int m1 = 2;
  int m2 = 2;
  int eta_depth = 4;
  std::string basis = "computational";
};

// A command's artifact: JSON or CSV text plus whether any bound was budget-limited.
struct Artifact {
  json body;
  std::string csv = {};
  bool truncated = false;
};

std::uint64_t require_seed(const Common& c, const std::string& why) {
  if (!c.seed) throw ValidationError("--seed is required for " + why);
  return *c.seed;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return json::parse(in);
}

EstimatorConfig estimator_config(const Common& c) {
  EstimatorConfig e;
  e.method = branches::parse_estimator_method(c.method);
  e.max_size = c.budget;
  e.node_budget = c.node_budget;
  e.restarts = c.restarts;
  e.threads = c.threads;
  if (e.method != EstimatorConfig::Method::Enumeration) e.seed = require_seed(c, "variational search");
  if (c.seed) e.seed = *c.seed;
  return e;
}

examples::ExampleFixture build_fixture(const FixtureOptions& f, const Common& c) {
  using namespace examples;
  if (!f.file.empty()) {
    json j = read_json_file(f.file);
    const json& d = j.contains("decomposition") ? j.at("decomposition") : j;
    return ExampleFixture{j.value("name", std::string("file")), branches::decomposition_from_json(d),
                          {"", "", j.value("source_section", std::string("file")), ""},
                          std::nullopt};
  }
  if (f.name == "ghz") return ghz(f.n);
  if (f.name == "product_plus_random") {
    return product_plus_random(f.n, M_SQRT1_2, M_SQRT1_2, require_seed(c, "a Haar-random fixture"));
  }
  if (f.name == "two_random_circuits") {
    return two_random_circuits(f.n, f.d1, f.d2, require_seed(c, "a random-circuit fixture"));
  }
  if (f.name == "parity") return parity_codewords(f.m1, f.m2).fixture;
  if (f.name == "separable" || f.name == "entangled") {
    const QuantumState l0 = QuantumState::zero(f.n);
    const QuantumState l1 = QuantumState::basis(f.n, (1ULL << f.n) - 1);
    const QuantumState r0 = QuantumState::basis(1, 0);
    if (f.name == "separable") return tensor_branches(TensorMode::Separable, l0, l1, r0);
    return tensor_branches(TensorMode::Entangled, l0, l1, r0, QuantumState::basis(1, 1));
  }
  if (f.name == "distinguishing") {
    const std::uint64_t seed = require_seed(c, "a random-circuit fixture");
    if (f.n < 3) throw ValidationError("distinguishing-qubit fixture needs n >= 3");
    auto [eta0, eta1] = random_eta_pair(f.n - 1, f.eta_depth, seed);
    return distinguishing_qubit_state(eta0, eta1, parse_qubit_basis(f.basis), seed);
  }
  if (f.name.empty()) throw ValidationError("--example or --fixture is required");
  throw ValidationError("unknown example '" + f.name + "'");
}

QuantumState parse_state(const std::string& spec, int n, const Common& c, std::uint64_t stream) {
  if (spec.rfind("file:", 0) == 0) return state_from_json(read_json_file(spec.substr(5)));
  if (spec == "zero") return QuantumState::zero(n);
  if (spec == "ones") return QuantumState::basis(n, (1ULL << n) - 1);
  if (spec.rfind("basis:", 0) == 0) {
    std::uint64_t index = 0;
    try {
      index = std::stoull(spec.substr(6));
    } catch (const std::exception&) {
      throw ValidationError("bad basis index in '" + spec + "'");
    }
    if (n < 1 || n > qsim::kMaxQubits || index >= (1ULL << n)) throw ValidationError("basis index out of range");
    return QuantumState::basis(n, index);
  }
  if (spec == "ghz") return examples::ghz(n).decomposition.parent();
  if (spec == "haar") return qsim::haar_random_state(n, qsim::derive_seed(require_seed(c, "Haar states"), stream));
  throw ValidationError("unknown state spec '" + spec + "' (zero, ones, basis:K, ghz, haar, file:PATH)");
}

// Pauli products on consecutive pairs, then a single gate for an odd leftover qubit.
qsim::Circuit pauli_circuit(const std::string& paulis) {
  const int n = static_cast<int>(paulis.size());
  qsim::Circuit circ(n);
  std::vector<int> sites;
  for (int q = 0; q < n; ++q) {
    if (paulis[q] != 'I') sites.push_back(q);
  }
  std::size_t k = 0;
  for (; k + 1 < sites.size(); k += 2) {
    const char a = paulis[sites[k]], b = paulis[sites[k + 1]];
    circ.append(qsim::GateOp({sites[k], sites[k + 1]}, qsim::gates::kron(qsim::gates::pauli(a), qsim::gates::pauli(b)),
                             std::string{a, b}));
  }
  if (k < sites.size()) circ.append(qsim::GateOp({sites[k]}, qsim::gates::pauli(paulis[sites[k]]), std::string{paulis[sites[k]]}));
  return circ;
}

qsim::Hamiltonian parse_hamiltonian(const std::string& name, int n) {
  if (name == "ising") return qsim::mixed_field_ising(n);
  if (name == "xxz") return qsim::xxz_chain(n);
  if (name == "zero") return qsim::Hamiltonian(n, {});
  throw ValidationError("unknown Hamiltonian '" + name + "' (ising, xxz, zero)");
}

void add_fixture_options(CLI::App* sub, FixtureOptions& f) {
  sub->add_option("--example", f.name,
                  "ghz, product_plus_random, two_random_circuits, parity, separable, entangled, distinguishing");
  sub->add_option("--fixture", f.file, "decomposition or fixture JSON file");
  sub->add_option("--n", f.n, "qubit count");
  sub->add_option("--d1", f.d1, "first circuit depth");
  sub->add_option("--d2", f.d2, "second circuit depth");
  sub->add_option("--m1", f.m1, "parity code block size");
  sub->add_option("--m2", f.m2, "parity code block count");
  sub->add_option("--eta-depth", f.eta_depth, "random-circuit depth of the eta states");
  sub->add_option("--basis", f.basis, "computational or conjugate");
}

void write_output(const Artifact& a, const std::string& format, const Common& c, std::ostream& out) {
  std::string text;
  if (format == "csv") {
    if (a.csv.empty()) throw ValidationError("this command has no CSV form");
    text = a.csv;
  } else {
    text = a.body.dump(2) + "\n";
  }
  if (c.output.empty() || c.output == "-") {
    out << text;
    return;
  }
  std::ofstream file(c.output);
  if (!file) throw ValidationError("cannot write '" + c.output + "'");
  file << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Complexity-based wavefunction branching toolkit", "wavebranch"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "seed for every stochastic path");
  app.add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"auto", "json", "csv"}));
  app.add_option("--output", c.output, "output path (default stdout)");
  app.add_option("--budget", c.budget, "maximum enumerated circuit size")->check(CLI::PositiveNumber);
  app.add_option("--node-budget", c.node_budget, "maximum circuits evaluated per estimate");
  app.add_option("--epsilon", c.epsilon, "branch accuracy epsilon");
  app.add_option("--threshold", c.threshold, "good-branch margin threshold");
  app.add_option("--lambda", c.lambda, "robustness exponent lambda");
  app.add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--method", c.method, "enumeration, variational or combined");
  app.add_option("--restarts", c.restarts, "variational restarts");
  app.add_flag("--strict", c.strict, "exit 3 when any bound is budget-truncated");

  FixtureOptions fx;
  std::function<Artifact()> action;
  std::string default_format = "json";

  auto* example = app.add_subcommand("example", "build a branch fixture");
  add_fixture_options(example, fx);
  example->callback([&] {
    action = [&] { return Artifact{to_json(build_fixture(fx, c))}; };
  });

  auto* estimate = app.add_subcommand("estimate", "complexity of one state pair");
  std::string kind = "interference", a_spec = "zero", b_spec = "ones";
  int est_n = 3;
  std::optional<double> delta;
  estimate->add_option("--kind", kind, "relative, distinguishability or interference");
  estimate->add_option("--a", a_spec, "zero, ones, basis:K, ghz, haar, file:PATH");
  estimate->add_option("--b", b_spec, "zero, ones, basis:K, ghz, haar, file:PATH");
  estimate->add_option("--n", est_n, "qubit count for generated states");
  estimate->add_option("--delta", delta, "accuracy (default epsilon, or 1 - epsilon for distinguishability)");
  estimate->callback([&] {
    action = [&] {
      const ComplexityKind k = complexity::parse_kind(kind);
      const double d = delta.value_or(k == ComplexityKind::DistinguishabilityProxy ? 1.0 - c.epsilon : c.epsilon);
      const QuantumState a = parse_state(a_spec, est_n, c, 0);
      const QuantumState b = parse_state(b_spec, est_n, c, 1);
      complexity::ComplexityEstimate e = branches::estimate(estimator_config(c), k, a, b, d);
      return Artifact{to_json(e), "", e.truncated()};
    };
  });

  auto* verdict = app.add_subcommand("verdict", "classify a branch decomposition");
  add_fixture_options(verdict, fx);
  verdict->callback([&] {
    action = [&] {
      examples::ExampleFixture f = build_fixture(fx, c);
      branches::BranchVerdict v =
          branches::assess_branches(f.decomposition, c.epsilon, estimator_config(c), c.threshold, c.lambda);
      json j = to_json(v);
      j["fixture"] = f.name;
      bool truncated = j.value("truncated", false);
      return Artifact{std::move(j), "", truncated};
    };
  });

  auto* qec = app.add_subcommand("qec", "code residuals, complexity floor and region");
  std::string code_name = "repetition";
  std::vector<std::string> errors;
  int max_weight = -1, code_n = 3, floor_override = -1;
  qec->add_option("--code", code_name, "repetition, five, parity or a code JSON file");
  qec->add_option("--errors", errors, "Pauli error strings")->delimiter(',');
  qec->add_option("--max-weight", max_weight, "add every Pauli up to this weight");
  qec->add_option("--n", code_n, "repetition code length");
  qec->add_option("--m1", fx.m1, "parity code block size");
  qec->add_option("--m2", fx.m2, "parity code block count");
  qec->add_option("--floor", floor_override, "code threshold for the region (default: the derived floor)");
  qec->callback([&] {
    action = [&] {
      std::vector<QuantumState> words;
      std::vector<std::string> errs = errors;
      int nq = 0;
      if (code_name == "repetition") {
        nq = code_n;
      } else if (code_name == "five") {
        nq = 5;
      } else if (code_name == "parity") {
        nq = fx.m1 * fx.m2;
      } else {
        codes::CodeSpec file_code = codes::code_from_json(read_json_file(code_name));
        words = file_code.codewords();
        for (const std::string& e : file_code.errors()) errs.push_back(e);
        nq = file_code.n_qubits();
      }
      if (max_weight >= 0) {
        for (const std::string& p : codes::all_paulis_up_to_weight(nq, max_weight)) {
          if (std::find(errs.begin(), errs.end(), p) == errs.end()) errs.push_back(p);
        }
      }
      codes::CodeSpec code = [&] {
        if (code_name == "repetition") return codes::repetition_code(nq, errs);
        if (code_name == "five") return codes::five_qubit_code(errs);
        if (code_name == "parity") {
          examples::ParityCode pc = examples::parity_codewords(fx.m1, fx.m2);
          return codes::CodeSpec({pc.zero, pc.one}, errs);
        }
        return codes::CodeSpec(words, errs);
      }();
      codes::ResidualReport r = codes::beny_oreshkov_residuals(code);
      codes::ComplexityFloor fl = codes::code_complexity_floor(r);
      const auto& w = code.codewords();
      EstimatorConfig est = estimator_config(c);
      complexity::ComplexityEstimate ci =
          branches::estimate(est, ComplexityKind::InterferenceProxy, w[0], w[1], c.epsilon);
      complexity::ComplexityEstimate cd =
          branches::estimate(est, ComplexityKind::DistinguishabilityProxy, w[0], w[1], 1.0 - c.epsilon);
      json region = nullptr;
      if (cd.upper_bound) {
        const int floor_threshold = floor_override >= 0 ? floor_override : std::max(fl.floor, 1);
        region = std::string(codes::region_name(
            codes::classify_region(ci.lower_bound, *cd.upper_bound, floor_threshold, c.threshold, c.lambda)));
      }
      json j{{"schema_version", kSchemaVersion}, {"code", to_json(code)}, {"residuals", to_json(r)},
             {"floor", to_json(fl)}, {"ci", to_json(ci)}, {"cd", to_json(cd)}, {"region", region}};
      return Artifact{std::move(j), "", ci.truncated() || cd.truncated()};
    };
  });

  auto* surface = app.add_subcommand("surface", "rectangular surface-code logical rate");
  codes::SurfaceCodeModel model{100, 3, 1e-3};
  std::optional<double> surface_c;
  surface->add_option("--L", model.L, "long cycle length");
  surface->add_option("--l", model.l, "short cycle length");
  surface->add_option("--p", model.p, "physical error rate per round");
  surface->add_option("--c", surface_c, "constant in the robustness threshold");
  surface->callback([&] {
    action = [&] { return Artifact{to_json(model, codes::surface_logical_rate(model), surface_c)}; };
  });

  auto* flow = app.add_subcommand("flow", "integrate the complexity flow model");
  dynamics::FlowParams fp;
  double ci0 = 5.0, cd0 = 1.0;
  std::string rate_model = "saturating";
  flow->add_option("--k", fp.k, "saturation scale");
  flow->add_option("--rate", fp.rate, "terminal growth rate");
  flow->add_option("--ci0", ci0, "initial interference complexity");
  flow->add_option("--cd0", cd0, "initial distinguishability complexity");
  flow->add_option("--t-end", fp.t_end, "end time");
  flow->add_option("--dt", fp.dt, "integrator step");
  flow->add_option("--sample-interval", fp.sample_interval, "time between samples (0: every step)");
  flow->add_option("--switchback", fp.switchback_c, "switchback offset (metadata)");
  flow->add_option("--model", rate_model, "saturating or fast_scrambling");
  flow->callback([&] {
    default_format = "csv";
    action = [&] {
      fp.model = dynamics::parse_rate_model(rate_model);
      dynamics::FlowTrajectory tr = dynamics::integrate_flow(ci0, cd0, fp);
      return Artifact{to_json(tr), dynamics::to_csv(tr)};
    };
  });

  auto* evolve = app.add_subcommand("evolve", "complexity under Hamiltonian evolution");
  std::string evolve_mode = "track", ham = "ising", witness_paulis;
  std::vector<double> times{0.0, 1.0, 2.0, 5.0};
  std::vector<int> sizes{6, 8, 10};
  double window = 1.0 / 3.0;
  evolve->add_option("--mode", evolve_mode, "track, symmetry or eth")
      ->check(CLI::IsMember({"track", "symmetry", "eth"}));
  evolve->add_option("--hamiltonian", ham, "ising, xxz or zero");
  evolve->add_option("--times", times, "time grid")->delimiter(',');
  evolve->add_option("--witness", witness_paulis, "Pauli string witness (default X on every qubit)");
  evolve->add_option("--sizes", sizes, "chain lengths for the ETH sweep")->delimiter(',');
  evolve->add_option("--window", window, "middle fraction of the spectrum");
  add_fixture_options(evolve, fx);
  evolve->callback([&] {
    if (evolve_mode == "track") default_format = "csv";
    action = [&]() -> Artifact {
      if (evolve_mode == "eth") return Artifact{to_json(dynamics::eth_ising_sweep(sizes, window))};
      if (evolve_mode == "symmetry") {
        const std::uint64_t seed = require_seed(c, "sector states");
        const int n = fx.n;
        if (n < 2) throw ValidationError("symmetry check needs n >= 2");
        const QuantumState a = dynamics::sector_state(n, 1, qsim::derive_seed(seed, 1));
        const QuantumState b = dynamics::sector_state(n, 2, qsim::derive_seed(seed, 2));
        const qsim::Hamiltonian h = parse_hamiltonian(ham == "ising" ? "xxz" : ham, n);
        dynamics::FreezeReport r =
            dynamics::symmetry_freeze_check(a, b, h, dynamics::phase_rotation_circuit(n, M_PI / 2), times);
        return Artifact{to_json(r)};
      }
      if (fx.name.empty() && fx.file.empty()) fx.name = "ghz";
      examples::ExampleFixture f = build_fixture(fx, c);
      const auto& comps = f.decomposition.components();
      const int n = f.decomposition.n_qubits();
      const std::string paulis = witness_paulis.empty() ? std::string(n, 'X') : witness_paulis;
      if (static_cast<int>(paulis.size()) != n) throw ValidationError("witness length must match the qubit count");
      for (char p : paulis) {
        if (p != 'I' && p != 'X' && p != 'Y' && p != 'Z') throw ValidationError("witness labels must be I, X, Y or Z");
      }
      dynamics::EvolutionTrack tr =
          dynamics::track_complexity_under_evolution(comps[0].state, comps[1].state, parse_hamiltonian(ham, n),
                                                     pauli_circuit(paulis), times, estimator_config(c), c.epsilon);
      return Artifact{to_json(tr), dynamics::to_csv(tr), tr.truncated};
    };
  });

  auto* props = app.add_subcommand("props", "run the inequality property suites");
  std::vector<int> prop_n{3};
  int instances = 100, triples = 50;
  std::vector<double> deltas{0.1, 0.5, 0.9};
  props->add_option("--n", prop_n, "qubit counts")->delimiter(',');
  props->add_option("--instances", instances, "random pairs per qubit count");
  props->add_option("--triples", triples, "random orthogonal triples for the merge and compatibility checks (0 skips)");
  props->add_option("--deltas", deltas, "accuracy grid")->delimiter(',');
  props->callback([&] {
    action = [&] {
      const std::uint64_t seed = require_seed(c, "the property suite");
      branches::PropertySuiteConfig pc;
      pc.seed = seed;
      pc.n_values = prop_n;
      pc.instances = instances;
      pc.max_size = c.budget;
      pc.deltas = deltas;
      pc.node_budget = c.node_budget;
      pc.threads = c.threads;
      branches::PropertySuiteReport pr = branches::run_property_suite(pc);
      json j{{"schema_version", kSchemaVersion}, {"properties", to_json(pr)}};
      int total = pr.total_violations;
      if (triples > 0) {
        branches::TripleSuiteConfig tc;
        tc.seed = seed;
        tc.triples = triples;
        tc.epsilon = c.epsilon;
        tc.oracle = estimator_config(c);
        branches::TripleSuiteReport tr = branches::run_triple_suite(tc);
        j["triples"] = to_json(tr);
        total += tr.total_violations;
      }
      j["total_violations"] = total;
      j["truncated"] = pr.truncated;
      return Artifact{std::move(j), "", pr.truncated};
    };
  });

  auto* gap = app.add_subcommand("gap", "rho versus rho_diag outcome gap");
  int phases = 8;
  gap->add_option("--phases", phases, "phase grid points per component");
  add_fixture_options(gap, fx);
  gap->callback([&] {
    action = [&] {
      examples::ExampleFixture f = build_fixture(fx, c);
      branches::GapReport r = branches::rho_vs_diag_gap(f.decomposition, c.budget,
                                                        complexity::GateAlphabet::standard(), phases, c.node_budget);
      return Artifact{to_json(r), "", r.truncated};
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*seed_opt) c.seed = seed_value;
    if (!(c.epsilon > 0.0 && c.epsilon <= branches::kMaxEpsilon)) {
      throw ValidationError("--epsilon must lie in (0, 0.25]");
    }
    Artifact a = action();
    const std::string format = c.format == "auto" ? default_format : c.format;
    write_output(a, format, c, out);
    if (c.strict && a.truncated) {
      err << json{{"error", "truncated"}, {"message", "a bound was limited by the enumeration budget"}}.dump() << "\n";
      return kExitTruncated;
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    err << json{{"error", "validation"}, {"message", e.what()}}.dump() << "\n";
    return kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    err << json{{"error", "validation"}, {"message", e.what()}}.dump() << "\n";
    return kExitValidation;
  }
}

}  // namespace wavebranch::cli

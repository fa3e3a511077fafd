#include "wavebranch/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <limits>
#include <cmath>
#include <random>
#include <sstream>

namespace wavebranch::dynamics {

namespace {

std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  if (v.size() % 2 == 1) return v[mid];
  const double hi = v[mid];
  const double lo = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lo + hi);
}

void validate_flow(const FlowParams& p) {
  if (!(p.k > 0.0)) throw ValidationError("flow saturation scale k must be positive");
  if (!(p.rate > 0.0)) throw ValidationError("flow rate must be positive");
  if (!(p.dt > 0.0)) throw ValidationError("flow step dt must be positive");
  if (!(p.t_end >= 0.0)) throw ValidationError("flow end time must be nonnegative");
  if (p.sample_interval < 0.0) throw ValidationError("sample interval must be nonnegative");
}

double rk4_step(const FlowParams& p, double c, double h) {
  const double k1 = flow_rate(p, c);
  const double k2 = flow_rate(p, c + 0.5 * h * k1);
  const double k3 = flow_rate(p, c + 0.5 * h * k2);
  const double k4 = flow_rate(p, c + h * k3);
  return c + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void validate_times(const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw ValidationError("time grid is empty");
  for (double t : t_grid) {
    if (!std::isfinite(t)) throw ValidationError("time grid values must be finite");
  }
}

}  // namespace

std::string_view rate_model_name(RateModel m) {
  return m == RateModel::Saturating ? "saturating" : "fast_scrambling";
}

RateModel parse_rate_model(std::string_view name) {
  if (name == "saturating") return RateModel::Saturating;
  if (name == "fast_scrambling") return RateModel::FastScrambling;
  throw ValidationError("unknown rate model '" + std::string(name) + "'");
}

double flow_rate(const FlowParams& p, double c) {
  if (p.model == RateModel::Saturating) return p.rate * c / (c + p.k);
  return -p.rate * std::expm1(-c / p.k);
}

double flow_invariant(const FlowParams& p, double c, double t) {
  if (p.model == RateModel::Saturating) return c + p.k * std::log(c / p.k) - p.rate * t;
  return p.k * std::log(std::expm1(c / p.k)) - p.rate * t;
}

FlowTrajectory integrate_flow(double ci0, double cd0, const FlowParams& p) {
  validate_flow(p);
  if (!(ci0 >= 0.0) || !(cd0 >= 0.0)) throw ValidationError("initial complexities must be nonnegative");
  FlowTrajectory tr;
  tr.params = p;
  tr.ci0 = ci0;
  tr.cd0 = cd0;
  tr.ci_fixed_point = ci0 == 0.0;
  tr.cd_fixed_point = cd0 == 0.0;
  const long steps = std::max(1L, static_cast<long>(std::ceil(p.t_end / p.dt - 1e-9)));
  const double h = p.t_end / static_cast<double>(steps);
  const long stride =
      p.sample_interval <= 0.0 ? 1L : std::max(1L, static_cast<long>(std::llround(p.sample_interval / h)));
  const double inv_i = tr.ci_fixed_point ? 0.0 : flow_invariant(p, ci0, 0.0);
  const double inv_d = tr.cd_fixed_point ? 0.0 : flow_invariant(p, cd0, 0.0);
  double ci = ci0, cd = cd0;
  auto record = [&](double t) {
    double drift = 0.0;
    if (!tr.ci_fixed_point) drift = std::max(drift, std::abs(flow_invariant(p, ci, t) - inv_i));
    if (!tr.cd_fixed_point) drift = std::max(drift, std::abs(flow_invariant(p, cd, t) - inv_d));
    if (!tr.samples.empty()) {
      const FlowSample& prev = tr.samples.back();
      if (ci - cd < prev.c_i - prev.c_d) tr.gap_nondecreasing = false;
    }
    tr.samples.push_back({t, ci, cd, drift});
    tr.max_invariant_drift = std::max(tr.max_invariant_drift, drift);
  };
  record(0.0);
  for (long s = 1; s <= steps; ++s) {
    // Zero is an exact fixed point; keep it bit-exact.
    if (!tr.ci_fixed_point) ci = rk4_step(p, ci, h);
    if (!tr.cd_fixed_point) cd = rk4_step(p, cd, h);
    if (s % stride == 0 || s == steps) record(h * static_cast<double>(s));
  }
  return tr;
}

std::string to_csv(const FlowTrajectory& tr) {
  std::ostringstream os;
  os << "t,c_i,c_d,invariant_drift\n";
  for (const FlowSample& s : tr.samples) {
    os << fmt(s.t) << ',' << fmt(s.c_i) << ',' << fmt(s.c_d) << ',' << fmt(s.invariant_drift) << '\n';
  }
  return os.str();
}

json to_json(const FlowTrajectory& tr) {
  json samples = json::array();
  for (const FlowSample& s : tr.samples) {
    samples.push_back(json{{"t", s.t}, {"c_i", s.c_i}, {"c_d", s.c_d}, {"invariant_drift", s.invariant_drift}});
  }
  return json{{"schema_version", kSchemaVersion},
              {"model", std::string(rate_model_name(tr.params.model))},
              {"k", tr.params.k},
              {"rate", tr.params.rate},
              {"switchback_c", tr.params.switchback_c},
              {"dt", tr.params.dt},
              {"t_end", tr.params.t_end},
              {"ci0", tr.ci0},
              {"cd0", tr.cd0},
              {"ci_fixed_point", tr.ci_fixed_point},
              {"cd_fixed_point", tr.cd_fixed_point},
              {"max_invariant_drift", tr.max_invariant_drift},
              {"gap_nondecreasing", tr.gap_nondecreasing},
              {"samples", std::move(samples)}};
}

EvolutionTrack track_complexity_under_evolution(const QuantumState& a0, const QuantumState& b0, const Hamiltonian& h,
                                                const Circuit& witness0, const std::vector<double>& t_grid,
                                                const branches::EstimatorConfig& estimator, double epsilon,
                                                complexity::ComplexityKind witness_kind) {
  const int n = a0.n_qubits();
  if (b0.n_qubits() != n || h.n_qubits() != n || witness0.n_qubits() != n) {
    throw ValidationError("states, Hamiltonian and witness must share a qubit count");
  }
  if (n > 10) throw ValidationError("complexity tracking supports at most 10 qubits");
  if (!(epsilon > 0.0 && epsilon <= branches::kMaxEpsilon)) throw ValidationError("epsilon must lie in (0, 0.25]");
  validate_times(t_grid);
  const qsim::Spectrum spectrum = qsim::diagonalize(h);
  EvolutionTrack tr{witness_kind, epsilon, {}, false};
  for (double t : t_grid) {
    const QuantumState a = qsim::evolve(a0, spectrum, t);
    const QuantumState b = qsim::evolve(b0, spectrum, t);
    EvolutionSample s{t, complexity::objective_value(witness_kind, witness0, a, b),
                      branches::estimate(estimator, complexity::ComplexityKind::InterferenceProxy, a, b, epsilon),
                      branches::estimate(estimator, complexity::ComplexityKind::DistinguishabilityProxy, a, b,
                                         1.0 - epsilon)};
    tr.truncated = tr.truncated || s.ci.truncated() || s.cd.truncated();
    tr.samples.push_back(std::move(s));
  }
  return tr;
}

std::string to_csv(const EvolutionTrack& tr) {
  auto upper = [](const complexity::ComplexityEstimate& e) {
    return e.upper_bound ? std::to_string(*e.upper_bound) : std::string();
  };
  std::ostringstream os;
  os << "t,witness_objective,ci_lower,ci_upper,cd_lower,cd_upper\n";
  for (const EvolutionSample& s : tr.samples) {
    os << fmt(s.t) << ',' << fmt(s.witness_objective) << ',' << s.ci.lower_bound << ',' << upper(s.ci) << ','
       << s.cd.lower_bound << ',' << upper(s.cd) << '\n';
  }
  return os.str();
}

json to_json(const EvolutionTrack& tr) {
  json samples = json::array();
  for (const EvolutionSample& s : tr.samples) {
    samples.push_back(json{{"t", s.t}, {"witness_objective", s.witness_objective}, {"ci", to_json(s.ci)},
                           {"cd", to_json(s.cd)}});
  }
  return json{{"schema_version", kSchemaVersion},
              {"witness_kind", std::string(complexity::kind_name(tr.witness_kind))},
              {"epsilon", tr.epsilon},
              {"truncated", tr.truncated},
              {"samples", std::move(samples)}};
}

FreezeReport symmetry_freeze_check(const QuantumState& a, const QuantumState& b, const Hamiltonian& h,
                                   const Circuit& u_sym, const std::vector<double>& t_grid, double tolerance) {
  const int n = a.n_qubits();
  if (b.n_qubits() != n || h.n_qubits() != n || u_sym.n_qubits() != n) {
    throw ValidationError("states, Hamiltonian and symmetry must share a qubit count");
  }
  validate_times(t_grid);
  const Eigen::MatrixXcd u = qsim::circuit_unitary(u_sym);
  const Eigen::MatrixXcd hm = h.dense();
  FreezeReport r{};
  r.commutator_norm = (u * hm - hm * u).norm();
  if (r.commutator_norm > kCommutatorTolerance) {
    throw ValidationError("symmetry does not commute with the Hamiltonian (commutator norm " +
                          std::to_string(r.commutator_norm) + ")");
  }
  r.phase_a = qsim::inner_product(a, qsim::apply_circuit(a, u_sym));
  r.phase_b = qsim::inner_product(b, qsim::apply_circuit(b, u_sym));
  if (std::abs(r.phase_a) < 1.0 - kEigenTolerance || std::abs(r.phase_b) < 1.0 - kEigenTolerance) {
    throw ValidationError("states are not eigenstates of the symmetry");
  }
  r.distinct_phases = std::abs(r.phase_a - r.phase_b) > kEigenTolerance;
  const qsim::Spectrum spectrum = qsim::diagonalize(h);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  r.max_interference = 0.0;
  for (double t : t_grid) {
    const QuantumState at = qsim::evolve(a, spectrum, t);
    const QuantumState bt = qsim::evolve(b, spectrum, t);
    FreezeSample s{t, complexity::objective_value(complexity::ComplexityKind::DistinguishabilityProxy, u_sym, at, bt),
                   complexity::objective_value(complexity::ComplexityKind::InterferenceProxy, u_sym, at, bt)};
    lo = std::min(lo, s.distinguishability);
    hi = std::max(hi, s.distinguishability);
    r.max_interference = std::max(r.max_interference, s.interference);
    r.samples.push_back(s);
  }
  r.total_variation = hi - lo;
  r.frozen = r.total_variation <= tolerance;
  return r;
}

json to_json(const FreezeReport& r) {
  json samples = json::array();
  for (const FreezeSample& s : r.samples) {
    samples.push_back(
        json{{"t", s.t}, {"distinguishability", s.distinguishability}, {"interference", s.interference}});
  }
  return json{{"schema_version", kSchemaVersion},
              {"commutator_norm", r.commutator_norm},
              {"phase_a", complex_to_json(r.phase_a)},
              {"phase_b", complex_to_json(r.phase_b)},
              {"distinct_phases", r.distinct_phases},
              {"total_variation", r.total_variation},
              {"max_interference", r.max_interference},
              {"frozen", r.frozen},
              {"samples", std::move(samples)}};
}

Circuit phase_rotation_circuit(int n_qubits, double angle) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 0) = std::polar(1.0, angle);
  m(1, 1) = std::polar(1.0, -angle);
  Circuit c(n_qubits);
  for (int q = 0; q < n_qubits; ++q) c.append(qsim::GateOp({q}, m, "RZ"));
  return c;
}

QuantumState sector_state(int n_qubits, int ones, std::uint64_t seed) {
  if (n_qubits < 1 || n_qubits > qsim::kMaxQubits) throw ValidationError("qubit count out of range");
  if (ones < 0 || ones > n_qubits) throw ValidationError("sector weight out of range");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<cplx> amps(std::size_t{1} << n_qubits, 0.0);
  for (std::size_t x = 0; x < amps.size(); ++x) {
    if (std::popcount(x) == ones) {
      const double re = normal(rng);
      amps[x] = cplx(re, normal(rng));
    }
  }
  return QuantumState::normalized(std::move(amps));
}

EthReport eth_diagnostic(const Hamiltonian& h, const std::vector<Observable>& observables, double window_fraction) {
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) throw ValidationError("window fraction must lie in (0, 1]");
  if (h.n_qubits() > qsim::kMaxExactQubits) throw ValidationError("ETH diagnostic supports at most 12 qubits");
  const qsim::Spectrum spectrum = qsim::diagonalize(h);
  const int dim = static_cast<int>(spectrum.energies.size());
  const int count = std::clamp(static_cast<int>(std::lround(window_fraction * dim)), std::min(2, dim), dim);
  EthReport r;
  r.n_qubits = h.n_qubits();
  r.window_begin = (dim - count) / 2;
  r.window_end = r.window_begin + count;
  const Eigen::MatrixXcd v = spectrum.vectors.middleCols(r.window_begin, count);
  for (const Observable& o : observables) {
    if (o.op.n_qubits() != h.n_qubits()) throw ValidationError("observable '" + o.name + "' has the wrong size");
    const Eigen::MatrixXcd ov = o.op.dense() * v;
    const Eigen::MatrixXcd elems = v.adjoint() * ov;
    std::vector<double> gaps, off;
    for (int k = 0; k + 1 < count; ++k) gaps.push_back(std::abs(elems(k, k).real() - elems(k + 1, k + 1).real()));
    for (int k = 0; k < count; ++k) {
      for (int l = k + 1; l < count; ++l) off.push_back(std::abs(elems(k, l)));
    }
    ObservableStats s{o.name, gaps.empty() ? 0.0 : *std::max_element(gaps.begin(), gaps.end()), median(gaps),
                      off.empty() ? 0.0 : *std::max_element(off.begin(), off.end()), median(off)};
    r.observables.push_back(std::move(s));
  }
  return r;
}

json to_json(const EthReport& r) {
  json obs = json::array();
  for (const ObservableStats& s : r.observables) {
    obs.push_back(json{{"name", s.name},
                       {"max_diag_gap", s.max_diag_gap},
                       {"median_diag_gap", s.median_diag_gap},
                       {"max_offdiag", s.max_offdiag},
                       {"median_offdiag", s.median_offdiag}});
  }
  return json{{"schema_version", kSchemaVersion},
              {"n_qubits", r.n_qubits},
              {"window", {r.window_begin, r.window_end}},
              {"observables", std::move(obs)}};
}

namespace {
// Slope of the least-squares line through (x, log y), negated; NaN if any y <= 0.
double decay_rate(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double ly = std::log(y[i]);
    sx += x[i];
    sy += ly;
    sxx += x[i] * x[i];
    sxy += x[i] * ly;
  }
  const double m = static_cast<double>(x.size());
  return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}
}  // namespace

EthSweep eth_size_sweep(const std::vector<int>& sizes,
                        const std::function<std::pair<Hamiltonian, std::vector<Observable>>(int)>& model,
                        double window_fraction) {
  if (sizes.empty()) throw ValidationError("size sweep needs at least one size");
  EthSweep sweep;
  for (int n : sizes) {
    auto [h, obs] = model(n);
    sweep.reports.push_back(eth_diagnostic(h, obs, window_fraction));
  }
  const std::size_t n_obs = sweep.reports.front().observables.size();
  std::vector<double> xs;
  for (int n : sizes) xs.push_back(n);
  for (std::size_t o = 0; o < n_obs; ++o) {
    std::vector<double> diag, off;
    for (const EthReport& r : sweep.reports) {
      diag.push_back(r.observables.at(o).median_diag_gap);
      off.push_back(r.observables.at(o).max_offdiag);
    }
    sweep.diag_rate.push_back(decay_rate(xs, diag));
    sweep.offdiag_rate.push_back(decay_rate(xs, off));
  }
  return sweep;
}

EthSweep eth_ising_sweep(const std::vector<int>& sizes, double window_fraction) {
  EthSweep sweep = eth_size_sweep(
      sizes,
      [](int n) {
        std::vector<Observable> obs{{"Z_mid", qsim::local_pauli(n, n / 2, 'Z')}};
        return std::make_pair(qsim::mixed_field_ising(n), std::move(obs));
      },
      window_fraction);
  sweep.model = "mixed_field_ising(J=1, g=-1.05, h=0.5), observable Z on site n/2";
  return sweep;
}

json to_json(const EthSweep& s) {
  json reports = json::array();
  for (const EthReport& r : s.reports) reports.push_back(to_json(r));
  auto rates = [](const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) out.push_back(std::isfinite(x) ? json(x) : json(nullptr));
    return out;
  };
  return json{{"schema_version", kSchemaVersion},
              {"model", s.model},
              {"reports", std::move(reports)},
              {"diag_decay_rate", rates(s.diag_rate)},
              {"offdiag_decay_rate", rates(s.offdiag_rate)}};
}

}  // namespace wavebranch::dynamics

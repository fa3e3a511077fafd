#include "wavebranch/codes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace wavebranch::codes {

namespace {

void require_pauli(std::string_view paulis, int n_qubits) {
  if (static_cast<int>(paulis.size()) != n_qubits) {
    throw ValidationError("Pauli string '" + std::string(paulis) + "' does not match " + std::to_string(n_qubits) +
                          " qubits");
  }
  for (char c : paulis) {
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
      throw ValidationError("Pauli labels must be I, X, Y or Z");
    }
  }
}

std::vector<cplx> apply_pauli(const QuantumState& s, const std::string& paulis) {
  std::vector<cplx> out(s.dim());
  qsim::apply_pauli_string(s.amplitudes(), out, s.n_qubits(), paulis);
  return out;
}

cplx dot(const std::vector<cplx>& x, const std::vector<cplx>& y) {
  cplx acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) acc += std::conj(x[k]) * y[k];
  return acc;
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// Exact in double for small n; through lgamma once the product would lose integrality.
double binomial(int n, int k) {
  if (n > 60) return std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k));
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

// C(n, w) p^w (1-p)^(n-w), through logs for large n.
double binomial_term(int n, int w, double p) {
  if (n > 60) return std::exp(std::log(binomial(n, w)) + w * std::log(p) + (n - w) * std::log1p(-p));
  return binomial(n, w) * std::pow(p, w) * std::pow(1.0 - p, n - w);
}

}  // namespace

int pauli_weight(std::string_view paulis) {
  return static_cast<int>(std::count_if(paulis.begin(), paulis.end(), [](char c) { return c != 'I'; }));
}

int pauli_complexity(std::string_view paulis) { return (pauli_weight(paulis) + 1) / 2; }

std::vector<std::string> all_paulis_up_to_weight(int n_qubits, int max_weight) {
  if (n_qubits < 1 || n_qubits > qsim::kMaxQubits) throw ValidationError("qubit count out of range");
  std::vector<std::string> out;
  static constexpr char kLabels[3] = {'X', 'Y', 'Z'};
  for (int w = 0; w <= std::min(max_weight, n_qubits); ++w) {
    std::vector<std::string> level;
    std::string cur(n_qubits, 'I');
    std::function<void(int, int)> rec = [&](int pos, int left) {
      if (left == 0) {
        level.push_back(cur);
        return;
      }
      if (n_qubits - pos < left) return;
      rec(pos + 1, left);
      for (char c : kLabels) {
        cur[pos] = c;
        rec(pos + 1, left - 1);
        cur[pos] = 'I';
      }
    };
    rec(0, w);
    std::sort(level.begin(), level.end());
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

CodeSpec::CodeSpec(std::vector<QuantumState> codewords, std::vector<std::string> errors)
    : codewords_(std::move(codewords)), errors_(std::move(errors)) {
  if (codewords_.size() < 2) throw ValidationError("a code needs at least two codewords");
  const int n = codewords_.front().n_qubits();
  for (std::size_t i = 0; i < codewords_.size(); ++i) {
    if (codewords_[i].n_qubits() != n) throw ValidationError("codewords have different qubit counts");
    for (std::size_t j = 0; j < i; ++j) {
      const double overlap = std::abs(qsim::inner_product(codewords_[j], codewords_[i]));
      if (overlap > kCodewordTolerance) {
        throw ValidationError("codewords " + std::to_string(j) + " and " + std::to_string(i) +
                              " are not orthogonal (overlap " + std::to_string(overlap) + ")");
      }
    }
  }
  for (const std::string& e : errors_) require_pauli(e, n);
}

json to_json(const CodeSpec& code) {
  json words = json::array();
  for (const QuantumState& s : code.codewords()) words.push_back(to_json(s));
  return json{{"schema_version", kSchemaVersion}, {"codewords", std::move(words)}, {"errors", code.errors()}};
}

CodeSpec code_from_json(const json& j) {
  std::vector<QuantumState> words;
  for (const json& w : j.at("codewords")) words.push_back(state_from_json(w));
  return CodeSpec(std::move(words), j.at("errors").get<std::vector<std::string>>());
}

CodeSpec repetition_code(int n_qubits, std::vector<std::string> errors) {
  if (n_qubits < 1 || n_qubits > qsim::kMaxQubits) throw ValidationError("qubit count out of range");
  return CodeSpec({QuantumState::zero(n_qubits), QuantumState::basis(n_qubits, (1ULL << n_qubits) - 1)},
                  std::move(errors));
}

CodeSpec five_qubit_code(std::vector<std::string> errors) {
  const std::vector<std::string> stabilizers = {"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"};
  std::vector<cplx> v(32, 0.0);
  v[0] = 1.0;
  for (const std::string& s : stabilizers) {
    std::vector<cplx> sv(32);
    qsim::apply_pauli_string(v, sv, 5, s);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = 0.5 * (v[k] + sv[k]);
  }
  const QuantumState zero = QuantumState::normalized(v);
  const QuantumState one = QuantumState::from_amplitudes(apply_pauli(zero, "XXXXX"));
  return CodeSpec({zero, one}, std::move(errors));
}

cplx ResidualReport::eps_at(int m, int n, int i, int j) const {
  const std::size_t e = errors.size();
  const std::size_t k = static_cast<std::size_t>(n_codewords);
  return eps[((static_cast<std::size_t>(m) * e + n) * k + i) * k + j];
}

ResidualReport beny_oreshkov_residuals(const CodeSpec& code, double tolerance) {
  const auto& words = code.codewords();
  const auto& errors = code.errors();
  const int k = static_cast<int>(words.size());
  const int e = static_cast<int>(errors.size());
  // images[n][j] = E_n |psi_j>
  std::vector<std::vector<std::vector<cplx>>> images(e);
  for (int n = 0; n < e; ++n) {
    for (const QuantumState& w : words) images[n].push_back(apply_pauli(w, errors[n]));
  }
  ResidualReport r;
  r.errors = errors;
  r.n_codewords = k;
  r.lambda = Eigen::MatrixXcd::Zero(e, e);
  r.eps.assign(static_cast<std::size_t>(e) * e * k * k, 0.0);
  std::vector<double> pair_max(static_cast<std::size_t>(e) * e, 0.0);
  for (int m = 0; m < e; ++m) {
    for (int n = 0; n < e; ++n) {
      // Pauli errors are Hermitian, so <psi_i|E_m^dag E_n|psi_j> = <E_m psi_i|E_n psi_j>.
      std::vector<cplx> g(static_cast<std::size_t>(k) * k);
      cplx diag = 0.0;
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) g[i * k + j] = dot(images[m][i], images[n][j]);
        diag += g[i * k + i];
      }
      const cplx lam = diag / static_cast<double>(k);
      r.lambda(m, n) = lam;
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
          const cplx v = g[i * k + j] - (i == j ? lam : cplx(0.0));
          r.eps[((static_cast<std::size_t>(m) * e + n) * k + i) * k + j] = v;
          const double mag = std::abs(v);
          pair_max[m * e + n] = std::max(pair_max[m * e + n], mag);
          if (mag > r.max_eps) {
            r.max_eps = mag;
            r.worst_m = m;
            r.worst_n = n;
            r.worst_i = i;
            r.worst_j = j;
          }
        }
      }
    }
  }
  // Grow t while every Pauli of weight <= t is present and the block among them passes.
  const int nq = code.n_qubits();
  std::vector<int> included;
  for (int t = 0; t <= nq; ++t) {
    bool complete = true;
    std::vector<int> level;
    for (const std::string& p : all_paulis_up_to_weight(nq, t)) {
      if (pauli_weight(p) != t) continue;
      const auto it = std::find(errors.begin(), errors.end(), p);
      if (it == errors.end()) {
        complete = false;
        break;
      }
      level.push_back(static_cast<int>(it - errors.begin()));
    }
    if (!complete) break;
    included.insert(included.end(), level.begin(), level.end());
    bool passes = true;
    for (int m : included) {
      for (int n : included) passes = passes && pair_max[m * e + n] <= tolerance;
    }
    if (!passes) break;
    r.correctable_weight = t;
  }
  r.correctable_to = r.correctable_weight < 0 ? 0 : (r.correctable_weight + 1) / 2;
  return r;
}

json to_json(const ResidualReport& r) {
  const int e = static_cast<int>(r.errors.size());
  json lam = json::array();
  for (int m = 0; m < e; ++m) {
    json row = json::array();
    for (int n = 0; n < e; ++n) row.push_back(complex_to_json(r.lambda(m, n)));
    lam.push_back(std::move(row));
  }
  json eps = json::array();
  for (int m = 0; m < e; ++m) {
    json em = json::array();
    for (int n = 0; n < e; ++n) {
      json en = json::array();
      for (int i = 0; i < r.n_codewords; ++i) {
        json ei = json::array();
        for (int j = 0; j < r.n_codewords; ++j) ei.push_back(complex_to_json(r.eps_at(m, n, i, j)));
        en.push_back(std::move(ei));
      }
      em.push_back(std::move(en));
    }
    eps.push_back(std::move(em));
  }
  json worst = nullptr;
  if (r.worst_m >= 0) {
    worst = json{{"m", r.worst_m}, {"n", r.worst_n}, {"i", r.worst_i}, {"j", r.worst_j},
                 {"error_m", r.errors[r.worst_m]}, {"error_n", r.errors[r.worst_n]}};
  }
  return json{{"schema_version", kSchemaVersion},
              {"errors", r.errors},
              {"n_codewords", r.n_codewords},
              {"max_eps", r.max_eps},
              {"worst", std::move(worst)},
              {"correctable_weight", r.correctable_weight},
              {"correctable_to", r.correctable_to},
              {"lambda", std::move(lam)},
              {"eps", std::move(eps)}};
}

ComplexityFloor code_complexity_floor(const ResidualReport& report) {
  return ComplexityFloor{report.correctable_to, 2 * report.correctable_to, report.max_eps};
}

json to_json(const ComplexityFloor& f) { return json{{"c", f.c}, {"floor", f.floor}, {"epsilon", f.epsilon}}; }

namespace {
void validate_model(const SurfaceCodeModel& m) {
  if (m.l < 1 || m.L < m.l) throw ValidationError("surface code model needs L >= l >= 1");
  if (!(m.p > 0.0 && m.p < 0.5)) throw ValidationError("physical error rate must lie in (0, 1/2)");
}
}  // namespace

SurfaceRate surface_logical_rate(const SurfaceCodeModel& m) {
  validate_model(m);
  const int up = (m.l + 1) / 2;
  const int down = m.l / 2;
  SurfaceRate r{};
  r.rate = m.l > 60 ? std::exp(log_factorial(m.l) - log_factorial(up) - log_factorial(down) + up * std::log(m.p)) * m.L
                    : binomial(m.l, up) * m.L * std::pow(m.p, up);
  if (m.l >= 2) {
    const double l = m.l;
    r.asymptotic = m.L * std::sqrt(2.0 * l / (M_PI * (l + 1) * (l + 1))) *
                   std::pow(4.0 * l * l / (l * l - 1.0) * m.p, l / 2.0 + 1.0);
  }
  double tail = 0.0;
  for (int w = up; w <= m.l; ++w) tail += binomial_term(m.l, w, m.p);
  r.binomial_tail = m.L * tail;
  r.ratio = r.rate / r.binomial_tail;
  return r;
}

double robust_L_min(const SurfaceCodeModel& m, double c) {
  validate_model(m);
  return std::exp(c * m.l * std::log(1.0 / m.p));
}

json to_json(const SurfaceCodeModel& m, const SurfaceRate& r, std::optional<double> c) {
  json j{{"schema_version", kSchemaVersion},
         {"L", m.L},
         {"l", m.l},
         {"p", m.p},
         {"rate", r.rate},
         {"asymptotic_rate", r.asymptotic ? json(*r.asymptotic) : json(nullptr)},
         {"binomial_tail", r.binomial_tail},
         {"rate_over_tail", r.ratio}};
  if (c) {
    j["c"] = *c;
    j["robust_L_min"] = robust_L_min(m, *c);
  }
  return j;
}

std::string_view region_name(Region r) {
  switch (r) {
    case Region::GoodCode: return "GoodCode";
    case Region::GoodBranch: return "GoodBranch";
    case Region::RobustBranch: return "RobustBranch";
    case Region::Neither: return "Neither";
    case Region::Both: return "Both";
  }
  return "Neither";
}

Region classify_region(int ci_lower, int cd_upper, int code_floor_threshold, int good_threshold, double lambda) {
  if (ci_lower < 0 || cd_upper < 0) throw ValidationError("complexities must be nonnegative");
  const bool code = std::min(ci_lower, cd_upper) >= code_floor_threshold;
  const bool branch = ci_lower - cd_upper >= good_threshold;
  const bool robust = branch && static_cast<double>(ci_lower) > std::exp(lambda * cd_upper);
  if (robust) return Region::RobustBranch;
  if (code && branch) return Region::Both;
  if (code) return Region::GoodCode;
  if (branch) return Region::GoodBranch;
  return Region::Neither;
}

}  // namespace wavebranch::codes

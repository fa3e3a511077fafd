#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "wavebranch/qsim.hpp"
#include "wavebranch/serialize.hpp"

namespace wavebranch::codes {

using qsim::QuantumState;
using wavebranch::to_json;

inline constexpr double kCodewordTolerance = 1e-8;
inline constexpr double kExactTolerance = 1e-9;

// Pauli string helpers. One label in {I,X,Y,Z} per qubit.
int pauli_weight(std::string_view paulis);
// Gate cost of a Pauli error in two-qubit-gate units: ceil(weight / 2).
int pauli_complexity(std::string_view paulis);
// Identity first, then by weight, then lexicographic in I < X < Y < Z.
std::vector<std::string> all_paulis_up_to_weight(int n_qubits, int max_weight);

class CodeSpec {
 public:
  // Codewords must be orthonormal within 1e-8; at least two are required.
  CodeSpec(std::vector<QuantumState> codewords, std::vector<std::string> errors);

  int n_qubits() const { return codewords_.front().n_qubits(); }
  const std::vector<QuantumState>& codewords() const { return codewords_; }
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<QuantumState> codewords_;
  std::vector<std::string> errors_;
};

json to_json(const CodeSpec& code);
CodeSpec code_from_json(const json& j);

// |000...>, |111...> with the given errors.
CodeSpec repetition_code(int n_qubits, std::vector<std::string> errors);
// Perfect [[5,1,3]] code with stabilizers XZZXI and cyclic shifts.
CodeSpec five_qubit_code(std::vector<std::string> errors);

struct ResidualReport {
  std::vector<std::string> errors;
  int n_codewords = 0;
  Eigen::MatrixXcd lambda;  // [m][n]
  std::vector<cplx> eps;    // [m][n][i][j], flattened
  double max_eps = 0.0;
  int worst_m = -1, worst_n = -1, worst_i = -1, worst_j = -1;
  // Largest t such that every Pauli of weight <= t is supplied and the residuals among
  // them vanish; -1 when even the identity is missing.
  int correctable_weight = -1;
  int correctable_to = 0;  // ceil(correctable_weight / 2) in gate units

  cplx eps_at(int m, int n, int i, int j) const;
};

ResidualReport beny_oreshkov_residuals(const CodeSpec& code, double tolerance = kExactTolerance);
json to_json(const ResidualReport& r);

struct ComplexityFloor {
  int c = 0;
  int floor = 0;         // 2c: minimum distinguishability/interference cost between codewords
  double epsilon = 0.0;  // holds for delta >= epsilon
};

ComplexityFloor code_complexity_floor(const ResidualReport& report);
json to_json(const ComplexityFloor& f);

struct SurfaceCodeModel {
  int L;
  int l;
  double p;
};

struct SurfaceRate {
  double rate;             // l! L p^ceil(l/2) / (ceil(l/2)! floor(l/2)!)
  std::optional<double> asymptotic;  // L sqrt(2l / (pi (l+1)^2)) (4 l^2 p / (l^2 - 1))^(l/2 + 1), l >= 2
  double binomial_tail;    // L * P(at least ceil(l/2) of l errors)
  double ratio;            // rate / binomial_tail
};

SurfaceRate surface_logical_rate(const SurfaceCodeModel& m);
// L needed before interference is infeasible: e^{c l ln(1/p)}.
double robust_L_min(const SurfaceCodeModel& m, double c);
json to_json(const SurfaceCodeModel& m, const SurfaceRate& r, std::optional<double> c = std::nullopt);

enum class Region { GoodCode, GoodBranch, RobustBranch, Neither, Both };
std::string_view region_name(Region r);

// RobustBranch (which also needs the branch margin) wins, then the code/branch overlap,
// then either criterion alone.
Region classify_region(int ci_lower, int cd_upper, int code_floor_threshold, int good_threshold, double lambda);

}  // namespace wavebranch::codes

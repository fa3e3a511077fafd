#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "cli.hpp"
#include "wavebranch/branches.hpp"
#include "wavebranch/codes.hpp"
#include "wavebranch/complexity.hpp"
#include "wavebranch/dynamics.hpp"
#include "wavebranch/examples.hpp"
#include "wavebranch/properties.hpp"

namespace py = pybind11;
using namespace wavebranch;

namespace {

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

qsim::QuantumState state(const std::vector<cplx>& amps) { return qsim::QuantumState::from_amplitudes(amps); }

std::vector<cplx> amplitudes(const qsim::QuantumState& s) { return {s.amplitudes().begin(), s.amplitudes().end()}; }

branches::EstimatorConfig estimator(const std::string& method, int max_size, std::uint64_t seed, int threads) {
  branches::EstimatorConfig e;
  e.method = branches::parse_estimator_method(method);
  e.max_size = max_size;
  e.seed = seed;
  e.threads = threads;
  return e;
}

examples::ExampleFixture fixture(const std::string& name, int n, std::optional<std::uint64_t> seed, int d1, int d2,
                                 int m1, int m2, const std::string& basis) {
  auto need_seed = [&] {
    if (!seed) throw ValidationError("seed is required for '" + name + "'");
    return *seed;
  };
  if (name == "ghz") return examples::ghz(n);
  if (name == "product_plus_random") return examples::product_plus_random(n, M_SQRT1_2, M_SQRT1_2, need_seed());
  if (name == "two_random_circuits") return examples::two_random_circuits(n, d1, d2, need_seed());
  if (name == "parity") return examples::parity_codewords(m1, m2).fixture;
  if (name == "distinguishing") {
    auto [e0, e1] = examples::random_eta_pair(n - 1, 4, need_seed());
    return examples::distinguishing_qubit_state(e0, e1, examples::parse_qubit_basis(basis), seed);
  }
  throw ValidationError("unknown example '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Complexity-based wavefunction branching toolkit";
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  m.def("haar_random_state", [](int n, std::uint64_t seed) { return amplitudes(qsim::haar_random_state(n, seed)); },
        py::arg("n"), py::arg("seed"));

  m.def(
      "objective_value",
      [](const std::string& kind, const std::string& circuit_json, const std::vector<cplx>& a,
         const std::vector<cplx>& b) {
        return complexity::objective_value(complexity::parse_kind(kind), circuit_from_json(json::parse(circuit_json)),
                                           state(a), state(b));
      },
      py::arg("kind"), py::arg("circuit_json"), py::arg("a"), py::arg("b"));

  m.def(
      "estimate",
      [](const std::string& kind, const std::vector<cplx>& a, const std::vector<cplx>& b, double delta, int max_size,
         const std::string& method, std::uint64_t seed, int threads) {
        json j;
        {
          py::gil_scoped_release release;
          j = to_json(branches::estimate(estimator(method, max_size, seed, threads), complexity::parse_kind(kind),
                                         state(a), state(b), delta));
        }
        return to_py(j);
      },
      py::arg("kind"), py::arg("a"), py::arg("b"), py::arg("delta"), py::arg("max_size") = 3,
      py::arg("method") = "enumeration", py::arg("seed") = 0, py::arg("threads") = 1);

  m.def(
      "example",
      [](const std::string& name, int n, std::optional<std::uint64_t> seed, int d1, int d2, int m1, int m2,
         const std::string& basis) { return to_py(to_json(fixture(name, n, seed, d1, d2, m1, m2, basis))); },
      py::arg("name"), py::arg("n") = 3, py::arg("seed") = py::none(), py::arg("d1") = 4, py::arg("d2") = 4,
      py::arg("m1") = 2, py::arg("m2") = 2, py::arg("basis") = "computational");

  m.def(
      "verdict",
      [](const std::string& name, int n, std::optional<std::uint64_t> seed, double epsilon, int threshold,
         double lambda, int max_size, const std::string& method) {
        examples::ExampleFixture f = fixture(name, n, seed, 4, 4, 2, 2, "computational");
        return to_py(to_json(branches::assess_branches(f.decomposition, epsilon,
                                                       estimator(method, max_size, seed.value_or(0), 1), threshold,
                                                       lambda)));
      },
      py::arg("name"), py::arg("n") = 3, py::arg("seed") = py::none(), py::arg("epsilon") = 0.1,
      py::arg("threshold") = 2, py::arg("lambda_") = 1.0, py::arg("max_size") = 3, py::arg("method") = "enumeration");

  m.def(
      "qec_residuals",
      [](const std::vector<std::vector<cplx>>& codewords, const std::vector<std::string>& errors) {
        std::vector<qsim::QuantumState> words;
        for (const auto& w : codewords) words.push_back(state(w));
        codes::ResidualReport r = codes::beny_oreshkov_residuals(codes::CodeSpec(words, errors));
        json j = to_json(r);
        j["floor"] = to_json(codes::code_complexity_floor(r));
        return to_py(j);
      },
      py::arg("codewords"), py::arg("errors"));

  m.def(
      "surface_rate",
      [](int L, int l, double p, std::optional<double> c) {
        codes::SurfaceCodeModel model{L, l, p};
        return to_py(to_json(model, codes::surface_logical_rate(model), c));
      },
      py::arg("L"), py::arg("l"), py::arg("p"), py::arg("c") = py::none());

  m.def(
      "classify_region",
      [](int ci, int cd, int floor, int good, double lambda) {
        return std::string(codes::region_name(codes::classify_region(ci, cd, floor, good, lambda)));
      },
      py::arg("ci_lower"), py::arg("cd_upper"), py::arg("code_floor"), py::arg("good_threshold"),
      py::arg("lambda_") = 1.0);

  m.def(
      "integrate_flow",
      [](double ci0, double cd0, double k, double rate, double dt, double t_end, double sample_interval) {
        dynamics::FlowParams p;
        p.k = k;
        p.rate = rate;
        p.dt = dt;
        p.t_end = t_end;
        p.sample_interval = sample_interval;
        return to_py(to_json(dynamics::integrate_flow(ci0, cd0, p)));
      },
      py::arg("ci0"), py::arg("cd0"), py::arg("k") = 1.0, py::arg("rate") = 1.0, py::arg("dt") = 1e-3,
      py::arg("t_end") = 10.0, py::arg("sample_interval") = 0.1);

  m.def(
      "eth_sweep",
      [](const std::vector<int>& sizes, double window) {
        dynamics::EthSweep s;
        {
          py::gil_scoped_release release;
          s = dynamics::eth_ising_sweep(sizes, window);
        }
        return to_py(to_json(s));
      },
      py::arg("sizes"), py::arg("window") = 1.0 / 3.0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}

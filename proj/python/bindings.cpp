#include "qcduality/cli.hpp"
#include "qcduality/identities.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace qcd;

namespace {

std::vector<QSqrt2> rationals(const std::vector<std::string>& v) {
  std::vector<QSqrt2> out;
  for (const auto& s : v) out.emplace_back(parse_rational(s));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum-classical duality checks (C++ core)";

  py::register_exception<Error>(m, "QcdError");

  m.def("version", &cli::version);

  m.def(
      "run",
      [](const std::string& command, const std::string& config_json) {
        cli::RunConfig cfg = nlohmann::json::parse(config_json).get<cli::RunConfig>();
        py::gil_scoped_release release;
        return cli::to_json(cli::run(command, cfg)).dump();
      },
      py::arg("command"), py::arg("config_json") = "{}",
      "Run a subcommand on a JSON configuration; returns the JSON report.");

  m.def(
      "main",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"qcduality"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Command-line entry point; returns (exit code, stdout, stderr).");

  m.def(
      "identity_holds",
      [](const std::string& kind, const std::vector<std::string>& q, const std::vector<std::string>& mu,
         const std::string& param, const std::string& hbar) {
        auto qs = rationals(q), ms = rationals(mu);
        return identities::identity_residual<QSqrt2>(parse_root_system(kind), qs, ms, QSqrt2(parse_rational(param)),
                                                     QSqrt2(parse_rational(hbar)))
            .exact_zero;
      },
      py::arg("kind"), py::arg("q"), py::arg("mu"), py::arg("param"), py::arg("hbar"),
      "Exact check of the characteristic-polynomial identity at rational inputs.");

  m.def(
      "nilpotency",
      [](const std::string& kind, const std::vector<Complex>& z, const std::vector<Complex>& mu, Complex xi,
         Complex hbar) {
        auto r = identities::onshell_nilpotency(parse_root_system(kind), z, mu, xi, hbar);
        return py::dict(py::arg("max_eigenvalue") = r.max_eigenvalue, py::arg("relative") = r.relative,
                        py::arg("scale") = r.scale, py::arg("bethe_residual") = r.bethe_residual);
      },
      py::arg("kind"), py::arg("z"), py::arg("mu"), py::arg("xi") = Complex{}, py::arg("hbar") = Complex{1.0},
      "Largest eigenvalue bound of the Lax matrix at an on-shell root set.");
}

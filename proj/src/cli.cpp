#include "qcduality/cli.hpp"

#include "qcduality/acceptance.hpp"
#include "qcduality/bethe.hpp"
#include "qcduality/factorize.hpp"
#include "qcduality/identities.hpp"
#include "qcduality/lax.hpp"
#include "qcduality/quantum.hpp"
#include "qcduality/sampling.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#ifndef QCD_VERSION
#define QCD_VERSION "0.0.0"
#endif

namespace qcd::cli {

namespace {

using identities::Certificate;
using identities::scalar_to_json;
using identities::scalars_to_json;

// Raised for configuration problems that are not qcd::Error.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::json complexes_to_json(std::span<const Complex> v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& x : v) out.push_back(complex_to_json(x));
  return out;
}

std::vector<Complex> complexes_from_json(const nlohmann::json& j) {
  std::vector<Complex> out;
  for (const auto& v : j) out.push_back(complex_from_json(v));
  return out;
}

std::vector<Complex> parse_complex_list(const std::string& text) {
  std::vector<Complex> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_complex(item));
  return out;
}

Rational exact_from_double(double v, const char* what) {
  if (!std::isfinite(v)) throw ConfigError(std::string(what) + " is not finite");
  return Rational(v);
}

QSqrt2 exact_real(const Complex& z, const char* what) {
  if (z.imag() != 0.0) throw ConfigError(std::string(what) + " must be real in rational mode");
  return QSqrt2(exact_from_double(z.real(), what));
}

QSqrt2 scalar_from_json(const nlohmann::json& j) {
  if (j.is_string()) return QSqrt2(parse_rational(j.get<std::string>()));
  if (j.is_number()) return QSqrt2(exact_from_double(j.get<double>(), "replay value"));
  if (j.is_object())
    return QSqrt2(parse_rational(j.at("rational").get<std::string>()), parse_rational(j.at("sqrt2").get<std::string>()));
  throw ConfigError("replay values must be rational strings, numbers, or {rational, sqrt2} objects");
}

std::vector<QSqrt2> scalars_from_json(const nlohmann::json& j) {
  std::vector<QSqrt2> out;
  for (const auto& v : j) out.push_back(scalar_from_json(v));
  return out;
}

bool is_rational_mode(const RunConfig& c) {
  if (c.mode == "rational") return true;
  if (c.mode == "float") return false;
  throw ConfigError("mode must be 'rational' or 'float'");
}

double tol_or(const RunConfig& c, double fallback) { return c.tol > 0.0 ? c.tol : fallback; }

Couplings<Complex> model_couplings(const RunConfig& c) {
  const auto kind = c.model.root_system;
  if (c.g1 || c.g2 || c.g4)
    return Couplings<Complex>{kind, c.g1.value_or(0.0), c.g2.value_or(0.0), c.g4.value_or(0.0)};
  return preset_couplings<Complex>(kind, c.model.hbar, kind == RootSystem::C ? c.model.xi : Complex{});
}

bethe::SolveOptions solver_options(const RunConfig& c) {
  bethe::SolveOptions o;
  o.seed_count = c.seeds;
  o.rng_seed = c.rng_seed;
  o.tol = c.tol;
  o.jobs = c.jobs;
  return o;
}

bethe::BetheSystem<Complex> bethe_system(const ModelSpec& m) {
  return {bethe::bethe_kind_for(m.root_system), m.z, m.root_system == RootSystem::A ? m.omega : m.xi, m.hbar};
}

std::vector<int> sectors(const RunConfig& c, int cap) {
  if (c.m_given) return {c.model.m};
  std::vector<int> out;
  for (int m = 0; m <= std::min(cap, c.model.n / 2); ++m) out.push_back(m);
  return out;
}

nlohmann::json verdict(const std::string& check, const std::string& v, nlohmann::json extra = nlohmann::json::object()) {
  extra["check"] = check;
  extra["verdict"] = v;
  return extra;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// ---- commands ----------------------------------------------------------------

void run_validate(const RunConfig& c, Report& rep) {
  if (c.g1 || c.g2 || c.g4) {
    Couplings<Complex> g = model_couplings(c);
    nlohmann::json info{{"kind", to_string(g.kind)},
                        {"g1", complex_to_json(g.g1)},
                        {"g2", complex_to_json(g.g2)},
                        {"g4", complex_to_json(g.g4)}};
    try {
      info["residual"] = validate_couplings(g);
      rep.verdicts.push_back(verdict("coupling_constraint", "pass", info));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ConstraintViolated) throw;
      info["error"] = to_string(e.code());
      info["residual"] = e.residual().value_or(0.0);
      rep.verdicts.push_back(verdict("coupling_constraint", "fail", info));
    }
    return;
  }
  c.model.validate();
  auto g = model_couplings(c);
  rep.verdicts.push_back(verdict("model", "pass", {{"model", c.model}}));
  rep.verdicts.push_back(verdict("coupling_constraint", "pass", {{"residual", validate_couplings(g)}}));
}

void run_bethe(const RunConfig& c, Report& rep) {
  c.model.validate();
  auto sys = bethe_system(c.model);
  auto res = bethe::solve_bethe(sys, c.model.m, solver_options(c));
  for (const auto& st : res.states) {
    nlohmann::json info = st;
    info["gaudin_eigenvalues"] = complexes_to_json(bethe::gaudin_eigs<Complex>(sys, st.mu));
    const bool ok = st.converged && st.residual_norm <= res.tolerance;
    rep.verdicts.push_back(verdict("bethe_state", st.singular ? "skipped-singular" : (ok ? "pass" : "fail"), info));
  }
  rep.summary["solver"] = {{"attempts", res.attempts},
                           {"converged_seeds", res.converged_seeds},
                           {"diverged_seeds", res.diverged_seeds},
                           {"stalled_seeds", res.stalled_seeds},
                           {"deduplication_radius", res.deduplication_radius},
                           {"tolerance", res.tolerance}};
}

void run_duality(const RunConfig& c, Report& rep) {
  c.model.validate();
  const auto kind = c.model.root_system;
  auto sys = bethe_system(c.model);
  const double tol = tol_or(c, 1e-8);
  std::ostringstream csv;
  csv << "sector,state,index,re,im\n";
  double worst = 0.0;
  int state_id = 0;
  for (int m : sectors(c, c.model.n)) {
    auto res = bethe::solve_bethe(sys, m, solver_options(c));
    for (const auto& st : res.states) {
      nlohmann::json info{{"sector", m}, {"mu", complexes_to_json(st.mu)}};
      if (st.singular) {
        rep.verdicts.push_back(verdict("onshell", "skipped-singular", info));
        continue;
      }
      std::vector<Complex> eigs;
      bool ok = false;
      try {
        if (kind == RootSystem::A) {
          auto dev = identities::onshell_spectrum_a(c.model.z, st.mu, c.model.omega, c.model.hbar);
          eigs = dev.eigenvalues;
          info["max_deviation_from_pm_omega"] = dev.max_deviation;
          info["charpoly_deviation"] = dev.charpoly_deviation;
          info["double_precision_deviation"] = dev.double_precision_deviation;
          ok = dev.max_deviation <= tol;
          worst = std::max(worst, dev.max_deviation);
        } else {
          auto nr = identities::onshell_nilpotency(kind, c.model.z, st.mu, c.model.xi, c.model.hbar);
          const Complex eff_xi = kind == RootSystem::C ? c.model.xi : Complex{};
          eigs = lax::spectrum(identities::build_primary<Complex>(kind, c.model.z, st.mu, eff_xi, c.model.hbar));
          info["max_abs_eigenvalue"] = nr.max_eigenvalue;
          info["relative"] = nr.relative;
          info["scale"] = nr.scale;
          info["double_precision_max_abs_eigenvalue"] = nr.double_precision_max;
          info["refined_bethe_residual"] = nr.bethe_residual;
          ok = nr.relative <= tol;
          worst = std::max(worst, nr.relative);
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NonConvergence) throw;
        info["error"] = e.what();
        rep.verdicts.push_back(verdict("onshell", "fail", info));
        continue;
      }
      for (std::size_t k = 0; k < eigs.size(); ++k)
        csv << m << ',' << state_id << ',' << k << ',' << fmt(eigs[k].real()) << ',' << fmt(eigs[k].imag()) << '\n';
      ++state_id;
      rep.verdicts.push_back(verdict("onshell", ok ? "pass" : "fail", info));
    }
  }
  rep.summary[kind == RootSystem::A ? "worst_spectrum_deviation" : "worst_relative_eigenvalue"] = worst;
  rep.summary["tolerance"] = tol;
  rep.csv = csv.str();
}

struct ExactInputs {
  std::vector<QSqrt2> q, mu;
  QSqrt2 param, hbar;
};

nlohmann::json inputs_json(const ExactInputs& in) {
  return {{"q", scalars_to_json<QSqrt2>(in.q)},
          {"mu", scalars_to_json<QSqrt2>(in.mu)},
          {"param", scalar_to_json(in.param)},
          {"hbar", scalar_to_json(in.hbar)}};
}

std::vector<ExactInputs> identity_inputs(const RunConfig& c, RootSystem kind, std::size_t n, std::size_t m,
                                         bool with_mu) {
  if (!c.replay.is_null()) {
    ExactInputs in;
    in.q = scalars_from_json(c.replay.at("q"));
    if (with_mu) in.mu = scalars_from_json(c.replay.at("mu"));
    in.param = scalar_from_json(c.replay.at("param"));
    in.hbar = scalar_from_json(c.replay.at("hbar"));
    return {in};
  }
  RationalSampler s(c.rng_seed);
  const bool signed_distinct = kind != RootSystem::A;
  std::vector<ExactInputs> out;
  for (int t = 0; t < c.samples; ++t) {
    ExactInputs in;
    in.q = s.admissible(n, signed_distinct);
    if (with_mu) {
      in.mu = s.admissible_with(in.q, m, signed_distinct);
      in.param = kind == RootSystem::A || kind == RootSystem::C ? s.next_q() : QSqrt2(0);
      in.hbar = s.next_q();
    } else {
      in.param = kind == RootSystem::C ? exact_real(c.model.xi, "xi") : QSqrt2(0);
      in.hbar = exact_real(c.model.hbar, "hbar");
    }
    out.push_back(std::move(in));
  }
  return out;
}

std::vector<Complex> to_complex_vec(const std::vector<QSqrt2>& v) {
  std::vector<Complex> out;
  for (const auto& x : v) out.push_back(x.to_double());
  return out;
}

void check_counts(const RunConfig& c, bool allow_full_m) {
  if (c.model.n < 1) throw ConfigError("n must be positive");
  if (c.model.m < 0 || c.model.m > (allow_full_m ? c.model.n : c.model.n / 2))
    throw ConfigError("magnon number out of range");
  if (c.samples < 1) throw ConfigError("samples must be positive");
}

void run_identity(const RunConfig& c, Report& rep) {
  check_counts(c, true);
  const bool rational = is_rational_mode(c);
  const auto kind = c.model.root_system;
  const auto n = static_cast<std::size_t>(c.model.n);
  const auto m = static_cast<std::size_t>(c.model.m);
  const double tol = tol_or(c, 1e-10);
  int exact = 0;
  for (const auto& in : identity_inputs(c, kind, n, m, true)) {
    Certificate cert{"identity", kind, in.q.size(), in.mu.size(), inputs_json(in), rational ? "rational" : "float", 0.0, ""};
    if (rational) {
      auto r = identities::identity_residual<QSqrt2>(kind, in.q, in.mu, in.param, in.hbar);
      cert.residual = r.max_coefficient_deviation;
      cert.verdict = r.exact_zero ? "pass" : "fail";
      exact += r.exact_zero ? 1 : 0;
    } else {
      auto q = to_complex_vec(in.q), mu = to_complex_vec(in.mu);
      auto r = identities::identity_residual<Complex>(kind, q, mu, in.param.to_double(), in.hbar.to_double());
      cert.residual = r.relative_deviation;
      cert.verdict = cert.residual <= tol ? "pass" : "fail";
    }
    rep.verdicts.push_back(cert);
  }
  rep.summary["exact_zero"] = exact;
  if (!rational) rep.summary["tolerance"] = tol;
}

void run_factorization(const RunConfig& c, Report& rep) {
  check_counts(c, true);
  const auto kind = c.model.root_system;
  if (kind == RootSystem::A) throw ConfigError("factorization exists for B, C and D");
  const bool rational = is_rational_mode(c);
  const double tol = tol_or(c, 1e-10);
  if (rational) {
    for (const auto& in : identity_inputs(c, kind, static_cast<std::size_t>(c.model.n), 0, false)) {
      auto r = factorize::factorization_residual<QSqrt2>(in.q, kind, in.param, in.hbar);
      auto p = characteristic_polynomial(factorize::factorized_lax<QSqrt2>(in.q, kind, in.param, in.hbar));
      const std::size_t size = lax_size(kind, in.q.size());
      const bool nil = exactly_equal(p, Polynomial<QSqrt2>::monomial(size, QSqrt2(size % 2 ? -1 : 1)));
      Certificate cert{"factorization", kind, in.q.size(), 0, inputs_json(in), "rational", r.max_abs,
                       r.exact_zero && nil ? "pass" : "fail"};
      nlohmann::json j = cert;
      j["nilpotent_charpoly"] = nil;
      rep.verdicts.push_back(j);
    }
    return;
  }
  c.model.validate();
  auto r = factorize::factorization_residual<Complex>(c.model.z, kind, c.model.xi, c.model.hbar);
  auto l = factorize::special_lax<Complex>(c.model.z, kind, c.model.xi, c.model.hbar);
  const double rel = r.max_abs / std::max(1.0, l.max_abs());
  Certificate cert{"factorization", kind, c.model.z.size(), 0,
                   {{"z", complexes_to_json(c.model.z)}, {"xi", complex_to_json(c.model.xi)}, {"hbar", complex_to_json(c.model.hbar)}},
                   "float", rel, rel <= tol ? "pass" : "fail"};
  rep.verdicts.push_back(cert);
  rep.summary["tolerance"] = tol;
}

void run_quantum(const RunConfig& c, Report& rep) {
  c.model.validate();
  const auto kind = c.model.root_system;
  if (kind == RootSystem::A) throw ConfigError("the quantum oracle covers the boundary chains (B, C, D)");
  const double tol = tol_or(c, 1e-8);
  auto hams = kind == RootSystem::B ? quantum::gaudin_hamiltonians_b<Complex>(c.model.z, c.model.hbar)
                                    : quantum::gaudin_hamiltonians_boundary<Complex>(c.model.z, c.model.xi, c.model.hbar);
  const double comm = quantum::max_commutator_norm(hams);
  const double magnon = quantum::max_magnon_violation(hams);
  rep.verdicts.push_back(verdict("commutativity", comm <= 1e-12 ? "pass" : "fail", {{"relative_norm", comm}}));
  rep.verdicts.push_back(verdict("magnon_conservation", magnon == 0.0 ? "pass" : "fail", {{"violation", magnon}}));
  quantum::DiagonalizeOptions dopts;
  dopts.rng_seed = c.rng_seed;
  dopts.jobs = c.jobs;
  auto spec = quantum::diagonalize_joint(hams, dopts);
  std::size_t binom = 1;
  for (std::size_t m = 0; m <= spec.sites; ++m) {
    const int dim = spec.sector_dimension(static_cast<int>(m));
    rep.verdicts.push_back(verdict("sector_dimension", dim == static_cast<int>(binom) ? "pass" : "fail",
                                   {{"sector", m}, {"dimension", dim}, {"expected", binom}}));
    binom = binom * (spec.sites - m) / (m + 1);
  }
  auto sys = bethe_system(c.model);
  for (int m : sectors(c, c.model.n)) {
    auto res = bethe::solve_bethe(sys, m, solver_options(c));
    for (const auto& st : res.states) {
      nlohmann::json info{{"sector", m}, {"mu", complexes_to_json(st.mu)}};
      if (st.singular) {
        rep.verdicts.push_back(verdict("bethe_vs_oracle", "skipped-singular", info));
        continue;
      }
      auto tuple = bethe::gaudin_eigs<Complex>(sys, st.mu);
      const double d = spec.distance_to(m, tuple);
      info["gaudin_eigenvalues"] = complexes_to_json(tuple);
      info["relative_distance"] = d;
      rep.verdicts.push_back(verdict("bethe_vs_oracle", d <= tol ? "pass" : "fail", info));
    }
  }
  rep.summary["spectrum"] = spec;
  rep.summary["tolerance"] = tol;
  rep.csv = quantum::spectrum_csv(spec);
}

void run_evolve(const RunConfig& c, Report& rep) {
  c.model.validate();
  if (c.steps < 1 || !(c.dt != 0.0)) throw ConfigError("evolve needs steps >= 1 and dt != 0");
  const auto kind = c.model.root_system;
  auto g = model_couplings(c);
  validate_couplings(g);
  lax::PhasePoint<Complex> start{c.model.z, c.p.empty() ? std::vector<Complex>(c.model.z.size()) : c.p};
  if (start.p.size() != start.q.size()) throw ConfigError("p must have n entries");
  const double tol = tol_or(c, 1e-8);
  auto traj = lax::evolve(start, g, c.dt, c.steps);
  const auto& end = traj.points.back();
  auto l0 = lax::build_lax<Complex>(start.p, start.q, g);
  auto l1 = lax::build_lax<Complex>(end.p, end.q, g);
  auto h0 = lax::integrals_of_motion(l0, 4, kind);
  auto h1 = lax::integrals_of_motion(l1, 4, kind);
  for (std::size_t k = 0; k < h0.size(); ++k) {
    const double drift = std::abs(h1[k] - h0[k]) / std::max(1.0, std::abs(h0[k]));
    rep.verdicts.push_back(verdict("conserved_quantity", drift <= tol ? "pass" : "fail",
                                   {{"k", k + 1}, {"initial", complex_to_json(h0[k])}, {"relative_drift", drift}}));
  }
  auto s0 = lax::spectrum(l0), s1 = lax::spectrum(l1);
  const double sd = lax::spectrum_distance(s0, s1) / std::max(1.0, l0.max_abs());
  rep.verdicts.push_back(verdict("isospectrality", sd <= tol ? "pass" : "fail", {{"relative_drift", sd}}));
  rep.summary["final"] = {{"t", traj.t.back()}, {"q", complexes_to_json(end.q)}, {"p", complexes_to_json(end.p)}};
  rep.summary["energy"] = {{"initial", complex_to_json(lax::hamiltonian(start, g))},
                           {"final", complex_to_json(lax::hamiltonian(end, g))}};
  rep.summary["tolerance"] = tol;
  rep.csv = lax::trajectory_csv(traj);
}

void run_all_criteria(const RunConfig& c, Report& rep) {
  acceptance::Options o;
  o.rng_seed = c.rng_seed;
  o.seeds = c.seeds;
  o.jobs = c.jobs;
  nlohmann::json seconds = nlohmann::json::object();
  for (const auto& r : acceptance::run_all(o)) {
    rep.verdicts.push_back(r);
    seconds[std::to_string(r.id)] = r.seconds;
  }
  rep.timing["criteria_seconds"] = seconds;
}

const char* csv_help =
    "CSV output (written next to --out, or to --csv):\n"
    "  duality         sector,state,index,re,im         Lax eigenvalues per on-shell state\n"
    "  quantum-oracle  sector,H_1..H_N[,im_H_1..],multiplicity   joint spectrum\n"
    "  evolve          t,q_1..q_N,p_1..p_N[,im_q_k,im_p_k]        trajectory samples\n"
    "Exit status: 0 pass, 1 verification failure, 2 configuration error, 3 runtime error.";

}  // namespace

// ---- config and report serialization ---------------------------------------------

void to_json(nlohmann::json& j, const RunConfig& c) {
  nlohmann::json model = c.model;
  if (!c.m_given) model.erase("m");
  j = nlohmann::json{{"model", model},       {"seeds", c.seeds}, {"rng_seed", c.rng_seed}, {"tol", c.tol},
                     {"jobs", c.jobs},       {"mode", c.mode},   {"samples", c.samples},   {"dt", c.dt},
                     {"steps", c.steps},     {"p", complexes_to_json(c.p)}};
  nlohmann::json g = nlohmann::json::object();
  if (c.g1) g["g1"] = complex_to_json(*c.g1);
  if (c.g2) g["g2"] = complex_to_json(*c.g2);
  if (c.g4) g["g4"] = complex_to_json(*c.g4);
  if (!g.empty()) j["couplings"] = g;
  if (!c.replay.is_null()) j["replay"] = c.replay;
  if (!c.out.empty()) j["out"] = c.out;
  if (!c.csv.empty()) j["csv"] = c.csv;
}

void from_json(const nlohmann::json& j, RunConfig& c) {
  if (j.contains("model")) {
    const auto& mj = j["model"];
    if (mj.contains("root_system")) c.model.root_system = parse_root_system(mj["root_system"].get<std::string>());
    if (mj.contains("z")) {
      c.model.z = complexes_from_json(mj["z"]);
      c.model.n = static_cast<int>(c.model.z.size());
    }
    if (mj.contains("n")) c.model.n = mj["n"].get<int>();
    if (mj.contains("m")) {
      c.model.m = mj["m"].get<int>();
      c.m_given = true;
    }
    if (mj.contains("xi")) c.model.xi = complex_from_json(mj["xi"]);
    if (mj.contains("hbar")) c.model.hbar = complex_from_json(mj["hbar"]);
    if (mj.contains("omega")) c.model.omega = complex_from_json(mj["omega"]);
  }
  c.seeds = j.value("seeds", c.seeds);
  c.rng_seed = j.value("rng_seed", c.rng_seed);
  c.tol = j.value("tol", c.tol);
  c.jobs = j.value("jobs", c.jobs);
  c.mode = j.value("mode", c.mode);
  c.samples = j.value("samples", c.samples);
  c.dt = j.value("dt", c.dt);
  c.steps = j.value("steps", c.steps);
  if (j.contains("p")) c.p = complexes_from_json(j["p"]);
  if (j.contains("couplings")) {
    const auto& g = j["couplings"];
    if (g.contains("g1")) c.g1 = complex_from_json(g["g1"]);
    if (g.contains("g2")) c.g2 = complex_from_json(g["g2"]);
    if (g.contains("g4")) c.g4 = complex_from_json(g["g4"]);
  }
  if (j.contains("replay")) c.replay = j["replay"];
  c.out = j.value("out", c.out);
  c.csv = j.value("csv", c.csv);
}

bool Report::all_pass() const {
  for (const auto& v : verdicts)
    if (v.value("verdict", "fail") == "fail") return false;
  return true;
}

nlohmann::json to_json(const Report& r) {
  int pass = 0, fail = 0, skipped = 0;
  for (const auto& v : r.verdicts) {
    const auto s = v.value("verdict", "fail");
    (s == "pass" ? pass : s == "skipped-singular" ? skipped : fail)++;
  }
  nlohmann::json summary = r.summary;
  summary["pass"] = pass;
  summary["fail"] = fail;
  summary["skipped_singular"] = skipped;
  summary["status"] = r.all_pass() ? "pass" : "fail";
  return nlohmann::json{{"schema", 1},         {"command", r.command},   {"version", version()},
                        {"config", r.config},  {"verdicts", r.verdicts}, {"summary", summary},
                        {"timing", r.timing}};
}

std::string version() { return QCD_VERSION; }

Report run(const std::string& command, const RunConfig& config) {
  Report rep;
  rep.command = command;
  rep.config = config;
  const auto t0 = std::chrono::steady_clock::now();
  if (command == "validate")
    run_validate(config, rep);
  else if (command == "bethe")
    run_bethe(config, rep);
  else if (command == "duality")
    run_duality(config, rep);
  else if (command == "identity")
    run_identity(config, rep);
  else if (command == "factorization")
    run_factorization(config, rep);
  else if (command == "quantum-oracle")
    run_quantum(config, rep);
  else if (command == "evolve")
    run_evolve(config, rep);
  else if (command == "all")
    run_all_criteria(config, rep);
  else
    throw ConfigError("unknown command '" + command + "'");
  rep.timing["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::ConstraintViolated:
    case ErrorCode::CoincidingCoordinates:
    case ErrorCode::ZeroCoordinate:
    case ErrorCode::PoleCollision: return exit_config;
    default: return exit_runtime;
  }
}

std::string csv_path(const RunConfig& c) {
  if (!c.csv.empty()) return c.csv;
  if (c.out.empty()) return {};
  auto dot = c.out.find_last_of('.');
  auto slash = c.out.find_last_of('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return c.out.substr(0, dot) + ".csv";
  return c.out + ".csv";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  f << text;
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum-classical duality checks for boundary Gaudin magnets and BCD Calogero-Moser systems"};
  app.set_version_flag("--version", version());
  app.footer(csv_help);
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path, kind, z, xi, hbar, omega, g1, g2, g4, p, mode;
  std::optional<int> n, m, jobs, seeds, samples, steps;
  std::optional<std::uint64_t> rng_seed;
  std::optional<double> tol, dt;
  std::string out_path, csv_out;
  app.add_option("--config", config_path, "JSON run configuration; flags override it");
  app.add_option("--out", out_path, "write the JSON report here instead of stdout");
  app.add_option("--csv", csv_out, "CSV path (default: --out with a .csv extension)");
  app.add_option("--jobs", jobs, "worker threads (0: all cores)");
  app.add_option("--seeds", seeds, "Bethe solver starts per system");
  app.add_option("--rng-seed", rng_seed, "base random seed");
  app.add_option("--tol", tol, "tolerance override");
  app.add_option("--mode", mode, "rational or float (identity, factorization)");
  app.add_option("--kind", kind, "root system A, B, C or D");
  app.add_option("--n", n, "sites / particles (default: size of --z)");
  app.add_option("--m", m, "magnon number (duality and quantum-oracle scan all sectors without it)");
  app.add_option("--z", z, "comma-separated inhomogeneities, e.g. 1,2.5,3+0.5i (default 1..n)");
  app.add_option("--xi", xi, "boundary parameter (C only)");
  app.add_option("--hbar", hbar, "Planck-like constant");
  app.add_option("--omega", omega, "A-type twist");
  app.add_option("--g1", g1, "explicit coupling g1");
  app.add_option("--g2", g2, "explicit coupling g2");
  app.add_option("--g4", g4, "explicit coupling g4");
  app.add_option("--p", p, "evolve: comma-separated initial momenta (default 0)");
  app.add_option("--dt", dt, "evolve: RK4 step");
  app.add_option("--steps", steps, "evolve: number of steps");
  app.add_option("--samples", samples, "identity/factorization: random rational draws");

  app.add_subcommand("validate", "check the coupling constraint or the model configuration");
  app.add_subcommand("bethe", "solve the Bethe equations in sector --m");
  app.add_subcommand("duality", "on-shell nilpotency of the Lax matrix (A: spectrum +-omega)");
  app.add_subcommand("identity", "off-shell characteristic-polynomial identities at random inputs");
  app.add_subcommand("factorization", "factorized special-velocity Lax matrix");
  app.add_subcommand("quantum-oracle", "exact diagonalization against Bethe states");
  app.add_subcommand("evolve", "Calogero-Moser flow and conserved quantities");
  app.add_subcommand("all", "full acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_pass : exit_config;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError("cannot read " + config_path);
      cfg = nlohmann::json::parse(f).get<RunConfig>();
    }
    if (!kind.empty()) cfg.model.root_system = parse_root_system(kind);
    if (!z.empty()) {
      cfg.model.z = parse_complex_list(z);
      cfg.model.n = static_cast<int>(cfg.model.z.size());
    }
    if (n) cfg.model.n = *n;
    if (cfg.model.n >= 1 && cfg.model.z.empty())
      for (int i = 1; i <= cfg.model.n; ++i) cfg.model.z.push_back(static_cast<double>(i));
    if (m) {
      cfg.model.m = *m;
      cfg.m_given = true;
    }
    if (!xi.empty()) cfg.model.xi = parse_complex(xi);
    if (!hbar.empty()) cfg.model.hbar = parse_complex(hbar);
    if (!omega.empty()) cfg.model.omega = parse_complex(omega);
    if (!g1.empty()) cfg.g1 = parse_complex(g1);
    if (!g2.empty()) cfg.g2 = parse_complex(g2);
    if (!g4.empty()) cfg.g4 = parse_complex(g4);
    if (!p.empty()) cfg.p = parse_complex_list(p);
    if (!mode.empty()) cfg.mode = mode;
    if (jobs) cfg.jobs = *jobs;
    if (seeds) cfg.seeds = *seeds;
    if (rng_seed) cfg.rng_seed = *rng_seed;
    if (tol) cfg.tol = *tol;
    if (dt) cfg.dt = *dt;
    if (steps) cfg.steps = *steps;
    if (samples) cfg.samples = *samples;
    if (!out_path.empty()) cfg.out = out_path;
    if (!csv_out.empty()) cfg.csv = csv_out;
    if (cfg.seeds < 1) throw ConfigError("seeds must be positive");
    is_rational_mode(cfg);
  } catch (const std::exception& e) {
    err << "configuration error: " << e.what() << "\n";
    return exit_config;
  }

  Report rep;
  try {
    rep = run(command, cfg);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return exit_config;
  } catch (const Error& e) {
    err << (exit_code_for(e.code()) == exit_config ? "configuration error: " : "runtime error: ") << to_string(e.code())
        << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    err << "configuration error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << "\n";
    return exit_runtime;
  }

  try {
    const std::string text = to_json(rep).dump(2) + "\n";
    if (cfg.out.empty())
      out << text;
    else
      write_file(cfg.out, text);
    const std::string cpath = csv_path(cfg);
    if (!rep.csv.empty() && !cpath.empty()) write_file(cpath, rep.csv);
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << "\n";
    return exit_runtime;
  }
  return rep.all_pass() ? exit_pass : exit_fail;
}

}  // namespace qcd::cli

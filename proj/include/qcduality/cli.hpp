#pragma once

// Command-line front end. Subcommands:
//
//   validate        coupling constraint / model admissibility
//   bethe           multistart Bethe root finding
//   duality         on-shell nilpotency (B, C, D) or A-type spectrum
//   identity        off-shell characteristic-polynomial identities
//   factorization   factorized special-velocity Lax matrix
//   quantum-oracle  exact diagonalization vs Bethe states
//   evolve          RK4 Calogero-Moser flow with conserved-quantity drift
//   all             the full acceptance suite
//
// Exit status: 0 all verdicts pass, 1 a verification failed, 2 configuration
// error, 3 runtime error.

#include "qcduality/model.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qcd::cli {

inline constexpr int exit_pass = 0;
inline constexpr int exit_fail = 1;
inline constexpr int exit_config = 2;
inline constexpr int exit_runtime = 3;

struct RunConfig {
  ModelSpec model;
  bool m_given = false;  // without it, duality and quantum-oracle scan every sector
  std::optional<Complex> g1, g2, g4;  // explicit couplings (validate, evolve)
  int seeds = 64;
  std::uint64_t rng_seed = 1;
  double tol = 0.0;  // 0: command default
  int jobs = 0;
  std::string mode = "rational";  // rational or float
  int samples = 50;
  double dt = 1e-3;
  int steps = 1000;
  std::vector<Complex> p;     // evolve: initial momenta (default zero)
  nlohmann::json replay;      // identity/factorization: explicit inputs from a report
  std::string out;            // JSON report path; stdout when empty
  std::string csv;            // CSV path; defaults next to --out
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

struct Report {
  std::string command;
  nlohmann::json config;
  nlohmann::json verdicts = nlohmann::json::array();  // each has "verdict": pass | fail | skipped-singular
  nlohmann::json summary = nlohmann::json::object();
  nlohmann::json timing = nlohmann::json::object();
  std::string csv;  // optional CSV payload

  bool all_pass() const;
};

nlohmann::json to_json(const Report& r);

/// Runs one subcommand on a validated configuration.
Report run(const std::string& command, const RunConfig& config);

/// Full entry point: parses argv, runs, writes the report. Returns the exit status.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::string version();

}  // namespace qcd::cli

#pragma once

// The full verification suite: one entry per acceptance criterion, each with
// its own wall-clock budget.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace qcd::acceptance {

struct Options {
  std::uint64_t rng_seed = 2024;
  int seeds = 64;  // Bethe solver starts per system
  int jobs = 0;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool correct = false;  // every check inside the criterion held
  double seconds = 0.0;
  double limit_seconds = 0.0;
  nlohmann::json detail;  // counts, worst residuals, failing inputs

  bool passed() const { return correct && seconds < limit_seconds; }
};

CriterionResult worked_examples(const Options& opts);        // 1
CriterionResult offshell_identities(const Options& opts);    // 2
CriterionResult factorization(const Options& opts);          // 3
CriterionResult onshell_nilpotency(const Options& opts);     // 4
CriterionResult quantum_oracle(const Options& opts);         // 5
CriterionResult integrable_structure(const Options& opts);   // 6
CriterionResult classical_dynamics(const Options& opts);     // 7
CriterionResult residue_relations(const Options& opts);      // 8
CriterionResult a_type_baseline(const Options& opts);        // 9

/// Criteria 1..9 in order.
std::vector<CriterionResult> run_all(const Options& opts);

/// Runs a single criterion by number (1..9).
CriterionResult run_one(int id, const Options& opts);

/// "[PASS] 4 on-shell nilpotency (12.3 s / 120 s) ..." one-liner.
std::string summary_line(const CriterionResult& r);

void to_json(nlohmann::json& j, const CriterionResult& r);

}  // namespace qcd::acceptance

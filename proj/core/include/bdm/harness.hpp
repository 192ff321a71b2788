#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bdm/formula.hpp"
#include "bdm/oracle.hpp"
#include "bdm/semantics.hpp"

namespace bdm {

// ------------------------------------------------------------------ fixtures

// A support fact at one world. Unset halves are not part of the claim.
struct Fact {
  World world = 0;
  Formula formula;
  std::optional<bool> sup_t;
  std::optional<bool> sup_f;

  static Fact value(World w, Formula f, TruthState v) { return {w, std::move(f), v.sup_t, v.sup_f}; }
  static Fact truth(World w, Formula f, bool holds) { return {w, std::move(f), holds, std::nullopt}; }
  static Fact falsity(World w, Formula f, bool holds) { return {w, std::move(f), std::nullopt, holds}; }
};

struct Fixture {
  std::string name;
  std::string summary;
  Model model;
  std::vector<Fact> facts;
};

const std::vector<Fixture>& fixtures();
// Throws std::out_of_range for unknown names.
const Fixture& fixture(std::string_view name);
// Empty when every fact holds; otherwise one line per failing fact.
std::vector<std::string> check_fixture(const Fixture& fx);

// ------------------------------------------------------------------ random inputs

using Rng = std::mt19937_64;

// A formula of size 1..max_size whose modal operators come from sig.
Formula random_formula(Rng& rng, Signature sig, const std::vector<std::string>& atoms,
                       std::size_t max_size);
// A model with 1..max_worlds worlds, each edge present with probability 1/2.
Model random_model(Rng& rng, std::size_t max_worlds, const std::vector<std::string>& atoms);
Frame random_frame(Rng& rng, std::size_t min_worlds, std::size_t max_worlds);

// ------------------------------------------------------------------ reports

struct Assertion {
  std::string instance;
  std::string expected;
  std::string got;
  std::string witness;
  bool passed = true;
};

struct ExperimentReport {
  std::string name;
  std::uint64_t seed = 0;
  std::map<std::string, std::uint64_t> budget;
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t assertions = 0;
  std::vector<Assertion> failures;
  // Passing assertions, kept only when requested.
  std::vector<Assertion> passes;
  // Observations that are reported but not asserted.
  std::vector<std::string> notes;
  double seconds = 0;

  bool passed() const { return failures.empty(); }
};

std::string format_report(const ExperimentReport& r, bool verbose = false);
// One JSON object per assertion, then one summary object.
std::string report_jsonl(const ExperimentReport& r);

// ------------------------------------------------------------------ experiments

struct HarnessConfig {
  std::uint64_t seed = 1;
  // Claims about every frame are checked on all frames up to this size, plus
  // random_frames seeded frames of 4 to 6 worlds.
  std::size_t max_worlds = 3;
  std::size_t random_frames = 200;
  // Definability may go one size further with isomorphism filtering.
  std::size_t definability_worlds = 4;
  std::size_t trials = 10'000;
  std::size_t samples = 500;
  std::size_t ir_samples = 100;
  std::size_t max_size = 6;
  // Sequents sampled by the agreement experiment; 0 means all of them.
  std::size_t agreement_sample = 0;
  std::size_t agreement_size = 4;
  bool keep_passes = false;
};

ExperimentReport run_fixtures(const HarnessConfig& cfg = {});
ExperimentReport run_no_validities(const std::vector<Formula>& sample, const HarnessConfig& cfg = {});
ExperimentReport run_no_validities(const HarnessConfig& cfg = {});
ExperimentReport run_duality(const HarnessConfig& cfg = {});
ExperimentReport run_know_axioms(const HarnessConfig& cfg = {});
ExperimentReport run_ignorance_axioms(const HarnessConfig& cfg = {});
ExperimentReport run_definability(const HarnessConfig& cfg = {});
ExperimentReport run_separations(const HarnessConfig& cfg = {});
ExperimentReport run_remarks(const HarnessConfig& cfg = {});
ExperimentReport run_agreement(const HarnessConfig& cfg = {});

const std::vector<std::string>& experiment_names();
// Throws std::out_of_range for unknown names.
ExperimentReport run_experiment(std::string_view name, const HarnessConfig& cfg = {});

}  // namespace bdm

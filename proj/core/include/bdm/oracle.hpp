#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdm/formula.hpp"
#include "bdm/semantics.hpp"

namespace bdm {

struct EnumerationBudget {
  std::size_t max_worlds = 3;
  std::size_t max_formula_size = 4;
  // Atoms to vary. Empty means the atoms of the sequent under test.
  std::vector<std::string> atoms;
  bool modulo_iso = false;
  // Upper bound on (frame, valuation) pairs visited by a search.
  std::uint64_t max_models = std::uint64_t{1} << 32;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 4^(atoms * worlds), saturating at UINT64_MAX.
std::uint64_t valuation_count(std::size_t worlds, std::size_t atoms);

// All valuations of `atoms` on a frame. The counter runs over (atom, world)
// pairs, atom-major, pair 0 least significant; each digit is a truth-value
// code (N=0, T=1, F=2, B=3).
class ValuationStream {
 public:
  ValuationStream(const Frame& frame, std::vector<std::string> atoms,
                  std::uint64_t cap = std::uint64_t{1} << 32);

  // Moves to the next valuation; the first call yields the all-gap valuation.
  bool next();
  std::uint64_t total() const { return total_; }
  const std::vector<std::uint8_t>& digits() const { return digits_; }
  // Digits [0, changed()] differ from the previous valuation.
  std::size_t changed() const { return changed_; }
  TruthState value(std::size_t atom, World w) const {
    return TruthState::from_code(digits_[atom * n_ + w]);
  }
  Model model() const;

 private:
  Frame frame_;
  std::vector<std::string> atoms_;
  std::size_t n_;
  std::vector<std::uint8_t> digits_;
  std::uint64_t total_;
  std::size_t changed_ = 0;
  bool started_ = false;
};

std::vector<Model> valuations_on(const Frame& frame, const std::vector<std::string>& atoms,
                                 std::uint64_t cap = std::uint64_t{1} << 20);

// Smallest relation mask over all renamings of the worlds.
std::uint64_t canonical_mask(const Frame& f);
bool is_canonical(const Frame& f);

// Frames with 1..n worlds, ordered by (size, relation mask).
class FrameStream {
 public:
  FrameStream(std::size_t max_worlds, bool modulo_iso);
  std::optional<Frame> next();

 private:
  std::size_t max_;
  bool iso_;
  std::size_t n_ = 1;
  std::uint64_t mask_ = 0;
};

std::vector<Frame> frames_up_to(std::size_t n, bool modulo_iso);

struct ValidityResult {
  bool valid = true;
  std::optional<PointedModel> witness;
  std::uint64_t models_checked = 0;
};

ValidityResult valid_on_frame(const Frame& frame, const Sequent& s,
                              std::uint64_t cap = std::uint64_t{1} << 32);

// First pointed model, in frame-then-valuation-then-world order, where the
// left side supports truth and the right side does not.
std::optional<PointedModel> find_countermodel(const Sequent& s, const EnumerationBudget& budget);

// Every formula of the fragment over `atoms` with size at most max_size.
// Ordered by size; within a size: negations, modal operators in the order
// [], [*], I, Tri, then conjunctions and disjunctions by left-operand size.
std::vector<Formula> formulas_up_to(Signature sig, const std::vector<std::string>& atoms,
                                    std::size_t max_size);

enum class SearchVerdict { Found, NoneUpToBound };

struct SeparationReport {
  std::optional<Formula> separating_formula;
  std::size_t sizes_searched = 0;
  std::size_t formulas_checked = 0;
  SearchVerdict verdict = SearchVerdict::NoneUpToBound;
  bool separated() const { return verdict == SearchVerdict::Found; }
};

// Looks for a fragment formula taking different values at the two points.
// When atoms is empty the atoms mentioned in either model are used, or {p}.
SeparationReport separation_check(const PointedModel& a, const PointedModel& b, Signature sig,
                                  std::size_t max_size, std::vector<std::string> atoms = {});

struct PatternReport {
  std::optional<Formula> matching_formula;
  std::vector<TruthState> pattern;
  std::size_t sizes_searched = 0;
  std::size_t formulas_checked = 0;
  SearchVerdict verdict = SearchVerdict::NoneUpToBound;
  bool matched() const { return verdict == SearchVerdict::Found; }
};

// Looks for a fragment formula whose value at points[i] is pattern[i] for
// every i. A target formula is definable by the fragment on these points
// only if such a formula exists for the target's own pattern.
PatternReport pattern_search(std::span<const PointedModel> points,
                             std::span<const TruthState> pattern, Signature sig,
                             std::size_t max_size, std::vector<std::string> atoms = {});

PatternReport definability_check(std::span<const PointedModel> points, const Formula& target,
                                 Signature sig, std::size_t max_size,
                                 std::vector<std::string> atoms = {});

// Validity of every sequent fi |- fj over a set of frames, computed by
// collecting the distinct truth-support profiles of all pointed models.
class ValidityTable {
 public:
  ValidityTable(std::vector<Formula> formulas, std::span<const Frame> frames,
                std::vector<std::string> atoms, std::uint64_t cap = std::uint64_t{1} << 32);

  static ValidityTable for_budget(std::vector<Formula> formulas, const EnumerationBudget& budget);

  bool valid(std::size_t i, std::size_t j) const {
    return (rows_[i * stride_ + (j >> 6)] >> (j & 63)) & 1u;
  }
  const std::vector<Formula>& formulas() const { return formulas_; }
  std::uint64_t pointed_models() const { return pointed_; }
  std::size_t distinct_profiles() const { return profiles_; }

 private:
  std::vector<Formula> formulas_;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> rows_;
  std::uint64_t pointed_ = 0;
  std::size_t profiles_ = 0;
};

}  // namespace bdm

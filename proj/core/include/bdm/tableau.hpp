#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bdm/formula.hpp"
#include "bdm/semantics.hpp"

namespace bdm {

// t: supports truth, f: supports falsity, tbar/fbar: their failures.
enum class Sign : std::uint8_t { T, F, TBar, FBar };

Sign complement(Sign s);
// Sign of the operand of a negation: t <-> f, tbar <-> fbar.
Sign negated(Sign s);
std::string_view to_string(Sign s);
std::optional<Sign> parse_sign(std::string_view s);

struct SignedFormula {
  World world;
  Formula formula;
  Sign sign;
  friend bool operator==(const SignedFormula&, const SignedFormula&) = default;
};

struct RelAtom {
  World from;
  World to;
  friend bool operator==(const RelAtom&, const RelAtom&) = default;
};

using Item = std::variant<SignedFormula, RelAtom>;

// ------------------------------------------------------------------ rules

// Which part of the main formula a premise or conclusion talks about.
// Other is the conjunct or disjunct not carrying the side premise.
enum class Part : std::uint8_t { Operand, Left, Right, Other };

// Where a conclusion is placed: the premise world, every successor of it,
// or one of two fresh successors.
enum class Place : std::uint8_t { Here, EachSucc, Fresh1, Fresh2 };

struct Conclusion {
  Place place;
  Part part;
  Sign sign;
};

// Child: one immediate subformula of the main formula at the same world.
// Succ: the operand at some successor world.
enum class SideKind : std::uint8_t { None, Child, Succ };

struct SidePremise {
  SideKind kind = SideKind::None;
  Sign sign = Sign::T;
};

struct RuleSchema {
  std::string_view name;
  Op op;
  Sign main;
  SidePremise side;
  // Successor quantification ranges over strict successors.
  bool strict = false;
  std::vector<std::vector<Conclusion>> columns;

  bool creates_worlds() const;
};

const std::vector<RuleSchema>& rule_table();
std::optional<std::size_t> rule_index(std::string_view name);

enum class Axis : std::uint8_t { Truth, Falsity };

// One firing of a rule. For cuts, `rule` is empty. `target` is the successor
// receiving an EachSucc conclusion; `via` is the successor carrying a Succ
// side premise; `side` selects the child carrying a Child side premise.
struct RuleInstance {
  std::optional<std::size_t> rule;
  World world = 0;
  Formula formula;
  Axis axis = Axis::Truth;
  std::optional<World> via;
  std::optional<World> target;
  Part side = Part::Left;

  static RuleInstance cut(World w, Formula f, Axis axis);
  static RuleInstance of(std::string_view rule, World w, Formula f);
};

// ------------------------------------------------------------------ branches

struct ClosureWitness {
  World world;
  Formula formula;
  Sign sign;  // t or f; the complementary label is also on the branch
  friend bool operator==(const ClosureWitness&, const ClosureWitness&) = default;
};

class UnsupportedFormula : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class RealizationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {
struct FormulaTable;
class Engine;
}  // namespace detail

class Branch {
 public:
  // Worlds are created up to the largest label mentioned. Every formula used
  // later must be a subformula of one given here.
  Branch(const std::vector<SignedFormula>& signed_formulas, const std::vector<RelAtom>& relations = {});
  // {w0: lhs ; t, w0: rhs ; tbar}
  static Branch root(const Sequent& s);

  std::size_t world_count() const { return succ_.size(); }
  bool has(World w, const Formula& f, Sign s) const;
  bool related(World from, World to) const;
  const std::vector<World>& successors(World w) const;
  // Items in the order they were added, skipping the first `from`.
  std::vector<Item> items(std::size_t from = 0) const;
  std::size_t item_count() const { return log_.size(); }
  std::optional<ClosureWitness> closure() const;
  bool in_ledger(const RuleInstance& inst) const;
  // Open, saturated under propagation, and no branching rule is pending.
  bool complete() const;

 private:
  friend class detail::Engine;
  friend std::vector<Branch> apply_rule(const Branch&, const RuleInstance&);

  struct LogItem {
    bool rel;
    World w;
    std::uint32_t x;  // formula id, or target world for relations
    Sign sign;
  };
  struct Fired {
    std::uint16_t rule;  // rule_table() index, or 0xffff for cuts
    World world;
    std::uint32_t fid;
    std::uint32_t extra;
    friend bool operator==(const Fired&, const Fired&) = default;
  };

  Branch() = default;
  std::uint32_t id_of(const Formula& f) const;
  bool has_id(World w, std::uint32_t fid, Sign s) const {
    return (labels_[w][fid] >> static_cast<unsigned>(s)) & 1u;
  }
  bool add(World w, std::uint32_t fid, Sign s);
  bool relate(World from, World to);
  World new_world();

  std::shared_ptr<const detail::FormulaTable> table_;
  std::vector<std::vector<std::uint8_t>> labels_;
  std::vector<std::vector<World>> succ_;
  std::vector<std::vector<World>> pred_;
  std::vector<LogItem> log_;
  std::size_t processed_ = 0;
  std::vector<Fired> ledger_;
  std::optional<LogItem> closed_;
};

std::optional<ClosureWitness> is_closed(const Branch& b);

// Fires one rule instance without further propagation. Throws
// std::invalid_argument when premises or side conditions are not met.
std::vector<Branch> apply_rule(const Branch& b, const RuleInstance& inst);

// ------------------------------------------------------------------ proof search

struct ProofNode {
  std::vector<Item> items;
  std::vector<ProofNode> children;
  std::optional<ClosureWitness> closure;
  bool open = false;
  friend bool operator==(const ProofNode&, const ProofNode&) = default;
};

struct ProofTree {
  ProofNode root;
  friend bool operator==(const ProofTree&, const ProofTree&) = default;
};

struct ProverOptions {
  std::uint64_t max_steps = 20'000'000;
  // When false, proof-tree nodes are left empty; only the verdict is built.
  bool record_tree = true;
};

struct ProofStats {
  std::uint64_t steps = 0;
  std::uint64_t branches = 0;
  std::size_t max_worlds = 0;
};

class ResourceLimitExceeded : public std::runtime_error {
 public:
  ResourceLimitExceeded(const std::string& msg, std::string partial)
      : std::runtime_error(msg), partial_(std::move(partial)) {}
  // Text rendering of the tableau explored so far.
  const std::string& partial_tableau() const { return partial_; }

 private:
  std::string partial_;
};

struct Countermodel {
  PointedModel model;
  Branch branch;
};

struct Verdict {
  bool proved = false;
  // The closed tableau when proved; otherwise the part explored up to and
  // including the first complete open branch.
  ProofTree tree;
  std::optional<Countermodel> countermodel;
  ProofStats stats;
};

Verdict prove(const Sequent& s, const ProverOptions& opts = {});

// Expands every branch to a closed or complete one.
std::vector<Branch> saturate(const Branch& b, const ProverOptions& opts = {});

// Model read off a complete open branch, checked against every signed
// formula on the branch. Throws RealizationError if a check fails.
PointedModel realize(const Branch& b);

std::string format_proof(const ProofTree& t);
ProofTree parse_proof(std::string_view text);

}  // namespace bdm

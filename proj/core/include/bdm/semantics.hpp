#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bdm/formula.hpp"

namespace bdm {

using World = std::uint32_t;

// Support of truth and support of falsity, decoded as a Belnapian value.
struct TruthState {
  bool sup_t = false;
  bool sup_f = false;

  static constexpr TruthState T() { return {true, false}; }
  static constexpr TruthState F() { return {false, true}; }
  static constexpr TruthState B() { return {true, true}; }
  static constexpr TruthState N() { return {false, false}; }

  // One of 'T', 'F', 'B', 'N'.
  char letter() const;
  static TruthState from_letter(char c);
  // 0..3 with bit 0 = truth support and bit 1 = falsity support.
  unsigned code() const { return (sup_t ? 1u : 0u) | (sup_f ? 2u : 0u); }
  static TruthState from_code(unsigned c) { return {(c & 1u) != 0, (c & 2u) != 0}; }

  friend bool operator==(TruthState, TruthState) = default;
};

class UnknownWorld : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class Frame {
 public:
  // Worlds are named w0..w{n-1} unless names are given.
  explicit Frame(std::size_t worlds);
  explicit Frame(std::vector<std::string> names);

  std::size_t size() const { return succ_.size(); }
  void add_edge(World from, World to);
  bool related(World from, World to) const;
  // Sorted successor list R(w); strict drops w itself.
  const std::vector<World>& successors(World w) const;
  std::vector<World> successors(World w, bool strict) const;
  std::vector<std::pair<World, World>> edges() const;
  std::size_t edge_count() const;

  const std::string& name(World w) const;
  std::optional<World> find(std::string_view name) const;
  const std::vector<std::string>& names() const { return names_; }

  // Edge i->j is bit i*n+j. Only for frames with at most 8 worlds.
  static Frame from_mask(std::size_t n, std::uint64_t mask);
  std::uint64_t mask() const;

  // Same worlds (by index) and same relation; names are ignored.
  bool same_relation(const Frame& other) const;

 private:
  void check(World w) const;
  std::vector<std::string> names_;
  std::vector<std::vector<World>> succ_;
};

class Model {
 public:
  explicit Model(Frame frame);

  const Frame& frame() const { return frame_; }
  std::size_t size() const { return frame_.size(); }

  void set(const std::string& atom, World w, TruthState v);
  // Atoms absent from the valuation are gaps everywhere.
  TruthState value(std::string_view atom, World w) const;
  std::vector<std::string> atoms() const;
  const std::map<std::string, std::vector<TruthState>, std::less<>>& valuation() const {
    return val_;
  }

  // Equal frames (by relation) and equal valuations, absent atoms counted as all-gap.
  bool same_as(const Model& other) const;

 private:
  Frame frame_;
  std::map<std::string, std::vector<TruthState>, std::less<>> val_;
};

struct PointedModel {
  Model model;
  World point = 0;
};

struct EvalOptions {
  // Evaluate [*] over strict successors. Used only to check the
  // decomposition of I into p & [*]~p.
  bool strict_bbox = false;
};

// A flattened, deduplicated DAG of formulas. Every instruction refers only to
// earlier instructions, so appending never invalidates computed results.
class FormulaProgram {
 public:
  struct Instr {
    Op op;
    std::uint32_t a = 0;  // atom index for Var, otherwise first operand
    std::uint32_t b = 0;
  };

  std::uint32_t add(const Formula& f);
  std::optional<std::uint32_t> find(const Formula& f) const;
  std::size_t size() const { return instrs_.size(); }
  const std::vector<Instr>& instrs() const { return instrs_; }
  const std::vector<std::string>& atoms() const { return atoms_; }
  const Formula& formula(std::uint32_t i) const { return formulas_[i]; }

 private:
  std::vector<Instr> instrs_;
  std::vector<Formula> formulas_;
  std::vector<std::string> atoms_;
  std::unordered_map<Formula, std::uint32_t> index_;
  std::unordered_map<std::string, std::uint32_t> atom_index_;
};

// Evaluates a FormulaProgram at all worlds of one frame simultaneously, with
// world sets stored as bit masks. Atom values are set per program atom index.
class MaskEvaluator {
 public:
  MaskEvaluator(const Frame& frame, EvalOptions opts = {});

  std::size_t words() const { return words_; }
  std::size_t worlds() const { return n_; }
  void clear_atoms(std::size_t atom_count);
  void set_atom(std::uint32_t atom, World w, TruthState v);
  void load_atoms(const Model& m, const FormulaProgram& prog);

  // Computes instructions [from, prog.size()).
  void run(const FormulaProgram& prog, std::size_t from = 0);

  bool truth(std::uint32_t node, World w) const;
  bool falsity(std::uint32_t node, World w) const;
  TruthState state(std::uint32_t node, World w) const { return {truth(node, w), falsity(node, w)}; }
  const std::uint64_t* truth_mask(std::uint32_t node) const { return &data_[node * 2 * words_]; }
  const std::uint64_t* falsity_mask(std::uint32_t node) const {
    return &data_[(node * 2 + 1) * words_];
  }

 private:
  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> succ_, strict_, atoms_, data_;
  std::vector<std::uint64_t> scratch_;
  bool bbox_rows_strict_ = false;
};

// Memoizing evaluator over a fixed model.
class Evaluator {
 public:
  explicit Evaluator(const Model& m, EvalOptions opts = {});
  TruthState eval(World w, const Formula& f);

 private:
  Model model_;
  FormulaProgram prog_;
  MaskEvaluator masks_;
  std::size_t computed_ = 0;
};

TruthState eval(const Model& m, World w, const Formula& f, EvalOptions opts = {});
bool holds_sequent_at(const Model& m, World w, const Sequent& s);
std::vector<World> successors(const Model& m, World w, bool strict);

// Swaps glut and gap at every atom and world.
Model dual_model(const Model& m);

enum class FrameClass {
  Serial, Dense, Reflexive, Euclidean, Transitive, Symmetric, PartialFunctional,
  D5, S5, Ddn, F45, D4, S4, D45
};

bool frame_has(const Frame& f, FrameClass c);
std::string_view to_string(FrameClass c);

class ModelParseError : public std::runtime_error {
 public:
  ModelParseError(std::size_t line, const std::string& msg);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Line format:
//   worlds: w0 w1
//   edges: w0->w1 w1->w1
//   val p: w0=T w1=B
// Blank lines and lines starting with '#' are ignored.
Model parse_model(std::string_view text);
std::string format_model(const Model& m);

}  // namespace bdm

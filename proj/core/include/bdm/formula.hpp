#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bdm {

// Primitive constructors. Box is the standard necessity, BBox the knowledge
// modality, Ign factive ignorance, Tri knowing-whether.
enum class Op : std::uint8_t { Var, Neg, And, Or, Box, BBox, Ign, Tri };

bool is_modal(Op op);
bool is_binary(Op op);

class Formula {
 public:
  struct Node;

  static Formula var(std::string name);
  static Formula neg(Formula a);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula box(Formula a);
  static Formula bbox(Formula a);
  static Formula ign(Formula a);
  static Formula tri(Formula a);
  static Formula unary(Op op, Formula a);
  static Formula binary(Op op, Formula a, Formula b);

  Op op() const;
  // Atom name; empty for non-atoms.
  const std::string& name() const;
  // Operand of a unary node, left child of a binary node.
  Formula child(std::size_t i) const;
  Formula operand() const { return child(0); }
  Formula left() const { return child(0); }
  Formula right() const { return child(1); }

  // Number of connectives plus one. Atoms have size 1, ~p has size 2 and
  // so has p & p. This is the measure used by formula enumeration.
  std::size_t size() const;
  std::size_t node_count() const;
  std::size_t modal_depth() const;
  std::size_t hash() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Sequent {
  Formula lhs;
  Formula rhs;
  friend bool operator==(const Sequent&, const Sequent&) = default;
};

// Set of modal constructors allowed in a fragment.
class Signature {
 public:
  constexpr Signature() = default;
  Signature(std::initializer_list<Op> ops);
  bool contains(Op op) const { return (bits_ >> static_cast<unsigned>(op)) & 1u; }
  Signature with(Op op) const;
  std::vector<Op> modal_ops() const;
  friend bool operator==(Signature, Signature) = default;

 private:
  std::uint32_t bits_ = 0;
};

enum class DerivedOp : std::uint8_t { Diamond, BDiamond, Accident, NotKnowWhether };

// <>a = ~[]~a, <*>a = ~[*]~a, Acc a = a & ~[*]a, NTri a = ~Tri a.
Formula expand_derived(DerivedOp op, Formula a);

// Post-order, deduplicated.
std::vector<Formula> subformulas(const Formula& f);
// Sorted, deduplicated atom names.
std::vector<std::string> atoms_of(const Formula& f);
std::vector<std::string> atoms_of(const Sequent& s);
bool in_fragment(const Formula& f, Signature sig);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found);
  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

std::variant<Formula, Sequent> parse(std::string_view text);
Formula parse_formula(std::string_view text);
Sequent parse_sequent(std::string_view text);

// ASCII rendering with minimal parentheses; parse(to_string(f)) == f.
std::string to_string(const Formula& f);
std::string to_string(const Sequent& s);
std::ostream& operator<<(std::ostream& os, const Formula& f);
std::ostream& operator<<(std::ostream& os, const Sequent& s);

}  // namespace bdm

template <>
struct std::hash<bdm::Formula> {
  std::size_t operator()(const bdm::Formula& f) const noexcept { return f.hash(); }
};

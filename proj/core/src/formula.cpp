#include "bdm/formula.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace bdm {

struct Formula::Node {
  Op op;
  std::string name;
  std::shared_ptr<const Node> a, b;
  std::size_t hash;
  std::uint32_t nodes;
  std::uint32_t connectives;
  std::uint32_t depth;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

bool is_modal(Op op) {
  return op == Op::Box || op == Op::BBox || op == Op::Ign || op == Op::Tri;
}

bool is_binary(Op op) { return op == Op::And || op == Op::Or; }

Formula Formula::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->hash = mix(std::hash<std::string>{}(name), 0);
  n->name = std::move(name);
  n->nodes = 1;
  n->connectives = 0;
  n->depth = 0;
  return Formula(std::move(n));
}

Formula Formula::unary(Op op, Formula a) {
  if (op == Op::Var || is_binary(op)) throw std::invalid_argument("not a unary operator");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->hash = mix(mix(static_cast<std::size_t>(op) + 1, a.hash()), 17);
  n->nodes = a.node_->nodes + 1;
  n->connectives = a.node_->connectives + 1;
  n->depth = a.node_->depth + (is_modal(op) ? 1 : 0);
  n->a = std::move(a.node_);
  return Formula(std::move(n));
}

Formula Formula::binary(Op op, Formula a, Formula b) {
  if (!is_binary(op)) throw std::invalid_argument("not a binary operator");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->hash = mix(mix(static_cast<std::size_t>(op) + 1, a.hash()), b.hash());
  n->nodes = a.node_->nodes + b.node_->nodes + 1;
  n->connectives = a.node_->connectives + b.node_->connectives + 1;
  n->depth = std::max(a.node_->depth, b.node_->depth);
  n->a = std::move(a.node_);
  n->b = std::move(b.node_);
  return Formula(std::move(n));
}

Formula Formula::neg(Formula a) { return unary(Op::Neg, std::move(a)); }
Formula Formula::box(Formula a) { return unary(Op::Box, std::move(a)); }
Formula Formula::bbox(Formula a) { return unary(Op::BBox, std::move(a)); }
Formula Formula::ign(Formula a) { return unary(Op::Ign, std::move(a)); }
Formula Formula::tri(Formula a) { return unary(Op::Tri, std::move(a)); }
Formula Formula::conj(Formula a, Formula b) { return binary(Op::And, std::move(a), std::move(b)); }
Formula Formula::disj(Formula a, Formula b) { return binary(Op::Or, std::move(a), std::move(b)); }

Op Formula::op() const { return node_->op; }
const std::string& Formula::name() const { return node_->name; }

Formula Formula::child(std::size_t i) const {
  const auto& c = i == 0 ? node_->a : node_->b;
  if (!c) throw std::out_of_range("formula has no such child");
  return Formula(c);
}

std::size_t Formula::size() const { return node_->connectives + 1; }
std::size_t Formula::node_count() const { return node_->nodes; }
std::size_t Formula::modal_depth() const { return node_->depth; }
std::size_t Formula::hash() const { return node_->hash; }

namespace {

bool node_equal(const Formula::Node* x, const Formula::Node* y) {
  if (x == y) return true;
  if (x->hash != y->hash || x->op != y->op || x->nodes != y->nodes) return false;
  if (x->op == Op::Var) return x->name == y->name;
  if (!node_equal(x->a.get(), y->a.get())) return false;
  return !x->b || node_equal(x->b.get(), y->b.get());
}

std::strong_ordering node_compare(const Formula::Node* x, const Formula::Node* y) {
  if (x == y) return std::strong_ordering::equal;
  if (x->op != y->op) return x->op <=> y->op;
  if (x->op == Op::Var) return x->name <=> y->name;
  if (auto c = node_compare(x->a.get(), y->a.get()); c != 0) return c;
  if (!x->b) return std::strong_ordering::equal;
  return node_compare(x->b.get(), y->b.get());
}

}  // namespace

bool operator==(const Formula& a, const Formula& b) {
  return node_equal(a.node_.get(), b.node_.get());
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  return node_compare(a.node_.get(), b.node_.get());
}

Signature::Signature(std::initializer_list<Op> ops) {
  for (Op op : ops) {
    if (!is_modal(op)) throw std::invalid_argument("signature holds modal constructors only");
    bits_ |= 1u << static_cast<unsigned>(op);
  }
}

Signature Signature::with(Op op) const {
  if (!is_modal(op)) throw std::invalid_argument("signature holds modal constructors only");
  Signature s = *this;
  s.bits_ |= 1u << static_cast<unsigned>(op);
  return s;
}

std::vector<Op> Signature::modal_ops() const {
  std::vector<Op> out;
  for (Op op : {Op::Box, Op::BBox, Op::Ign, Op::Tri})
    if (contains(op)) out.push_back(op);
  return out;
}

Formula expand_derived(DerivedOp op, Formula a) {
  switch (op) {
    case DerivedOp::Diamond:
      return Formula::neg(Formula::box(Formula::neg(std::move(a))));
    case DerivedOp::BDiamond:
      return Formula::neg(Formula::bbox(Formula::neg(std::move(a))));
    case DerivedOp::Accident: {
      Formula k = Formula::neg(Formula::bbox(a));
      return Formula::conj(std::move(a), std::move(k));
    }
    case DerivedOp::NotKnowWhether:
      return Formula::neg(Formula::tri(std::move(a)));
  }
  throw std::invalid_argument("unknown derived operator");
}

namespace {

void collect(const Formula& f, std::unordered_set<Formula>& seen, std::vector<Formula>& out) {
  if (seen.count(f)) return;
  if (f.op() != Op::Var) {
    collect(f.child(0), seen, out);
    if (is_binary(f.op())) collect(f.child(1), seen, out);
  }
  seen.insert(f);
  out.push_back(f);
}

void collect_atoms(const Formula& f, std::set<std::string>& out) {
  if (f.op() == Op::Var) {
    out.insert(f.name());
    return;
  }
  collect_atoms(f.child(0), out);
  if (is_binary(f.op())) collect_atoms(f.child(1), out);
}

}  // namespace

std::vector<Formula> subformulas(const Formula& f) {
  std::unordered_set<Formula> seen;
  std::vector<Formula> out;
  collect(f, seen, out);
  return out;
}

std::vector<std::string> atoms_of(const Formula& f) {
  std::set<std::string> s;
  collect_atoms(f, s);
  return {s.begin(), s.end()};
}

std::vector<std::string> atoms_of(const Sequent& s) {
  std::set<std::string> out;
  collect_atoms(s.lhs, out);
  collect_atoms(s.rhs, out);
  return {out.begin(), out.end()};
}

bool in_fragment(const Formula& f, Signature sig) {
  if (f.op() == Op::Var) return true;
  if (is_modal(f.op()) && !sig.contains(f.op())) return false;
  if (!in_fragment(f.child(0), sig)) return false;
  return !is_binary(f.op()) || in_fragment(f.child(1), sig);
}

}  // namespace bdm

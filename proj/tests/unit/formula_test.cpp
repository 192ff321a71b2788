#include <gtest/gtest.h>

#include <set>

#include "bdm/formula.hpp"
#include "bdm/harness.hpp"
#include "bdm/oracle.hpp"

using namespace bdm;

namespace {

const Formula p = Formula::var("p");
const Formula q = Formula::var("q");

}  // namespace

TEST(Formula, SizeCountsConnectivesPlusOne) {
  EXPECT_EQ(p.size(), 1u);
  EXPECT_EQ(Formula::neg(p).size(), 2u);
  EXPECT_EQ(Formula::conj(p, p).size(), 2u);
  EXPECT_EQ(parse_formula("[*](p & q) | ~Ip").size(), 6u);
  EXPECT_EQ(parse_formula("[*](p & q) | ~Ip").node_count(), 8u);
  EXPECT_EQ(parse_formula("[*]I[]p & q").modal_depth(), 3u);
}

TEST(Formula, StructuralEqualityAndHash) {
  Formula a = parse_formula("I(p | q) & [*]p");
  Formula b = Formula::conj(Formula::ign(Formula::disj(p, q)), Formula::bbox(p));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a, parse_formula("I(q | p) & [*]p"));
  EXPECT_TRUE((p <=> q) != 0);
}

TEST(Formula, AccessorsFollowTheTree) {
  Formula f = parse_formula("~(p & [*]q)");
  EXPECT_EQ(f.op(), Op::Neg);
  EXPECT_EQ(f.operand().op(), Op::And);
  EXPECT_EQ(f.operand().left(), p);
  EXPECT_EQ(f.operand().right().op(), Op::BBox);
  EXPECT_EQ(f.operand().right().operand().name(), "q");
  EXPECT_TRUE(is_modal(Op::Ign));
  EXPECT_FALSE(is_modal(Op::And));
  EXPECT_TRUE(is_binary(Op::Or));
}

TEST(Parser, AsciiAndUnicodeAgree) {
  EXPECT_EQ(parse_formula("¬□p ∧ ■q ∨ ▲p"), parse_formula("~[]p & [*]q | Tri p"));
  EXPECT_EQ(parse_formula("◇p"), parse_formula("~[]~p"));
  EXPECT_EQ(parse_formula("♦p"), parse_formula("<*>p"));
  EXPECT_EQ(parse_formula("◆p"), parse_formula("~[*]~p"));
  EXPECT_EQ(parse_formula("•p"), parse_formula("p & ~[*]p"));
  EXPECT_EQ(parse_formula("Acc p"), parse_formula("p & ~[*]p"));
  EXPECT_EQ(parse_formula("▼p"), parse_formula("~Tri p"));
  EXPECT_EQ(parse_formula("NTri p"), parse_formula("~Tri p"));
  EXPECT_EQ(parse_sequent("Ip ⊢ p"), parse_sequent("Ip |- p"));
}

TEST(Parser, IgnoranceBindsToTheFollowingAtom) {
  Formula f = parse_formula("Ip");
  EXPECT_EQ(f.op(), Op::Ign);
  EXPECT_EQ(f.operand(), p);
  EXPECT_EQ(parse_formula("Ipq").operand().name(), "pq");
}

TEST(Parser, BinaryOperatorsAssociateLeft) {
  Formula f = parse_formula("p & q & p");
  EXPECT_EQ(f, Formula::conj(Formula::conj(p, q), p));
  EXPECT_EQ(parse_formula("p | q & p"), Formula::disj(p, Formula::conj(q, p)));
}

TEST(Parser, ErrorsCarryOffsetAndExpectation) {
  try {
    parse_formula("p & | q");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
    EXPECT_NE(std::string(e.what()).find("|"), std::string::npos);
  }
  EXPECT_THROW(parse_formula(""), ParseError);
  EXPECT_THROW(parse_formula("(p & q"), ParseError);
  EXPECT_THROW(parse_formula("p q"), ParseError);
  EXPECT_THROW(parse_formula("P"), ParseError);
  EXPECT_THROW(parse_sequent("p"), ParseError);
  EXPECT_THROW(parse_sequent("p |- q |- r"), ParseError);
  EXPECT_THROW(parse_formula("p |- q"), ParseError);
}

TEST(Parser, GenericParseDistinguishesFormulaAndSequent) {
  EXPECT_TRUE(std::holds_alternative<Formula>(parse("p & q")));
  EXPECT_TRUE(std::holds_alternative<Sequent>(parse("p |- q")));
}

TEST(Printer, MinimalParentheses) {
  EXPECT_EQ(to_string(parse_formula("(p & q) & p")), "p & q & p");
  EXPECT_EQ(to_string(parse_formula("p & (q & p)")), "p & (q & p)");
  EXPECT_EQ(to_string(parse_formula("p | (q & p)")), "p | q & p");
  EXPECT_EQ(to_string(parse_formula("(p | q) & p")), "(p | q) & p");
  EXPECT_EQ(to_string(parse_formula("~(p & q)")), "~(p & q)");
  EXPECT_EQ(to_string(parse_formula("□■I▲p")), "[][*]ITri p");
  EXPECT_EQ(to_string(parse_sequent("Ip ∧ Iq ⊢ I(p ∨ q)")), "Ip & Iq |- I(p | q)");
}

TEST(Printer, RandomRoundTrip) {
  Rng rng(11);
  const Signature all{Op::Box, Op::BBox, Op::Ign, Op::Tri};
  for (int i = 0; i < 2000; ++i) {
    Formula f = random_formula(rng, all, {"p", "q", "r1", "long_name"}, 12);
    EXPECT_EQ(parse_formula(to_string(f)), f) << to_string(f);
  }
}

TEST(Formula, SubformulasArePostOrderAndDistinct) {
  auto subs = subformulas(parse_formula("[*]p & ~[*]p"));
  ASSERT_EQ(subs.size(), 4u);
  EXPECT_EQ(subs[0], p);
  EXPECT_EQ(subs[1], parse_formula("[*]p"));
  EXPECT_EQ(subs[2], parse_formula("~[*]p"));
  EXPECT_EQ(subs[3], parse_formula("[*]p & ~[*]p"));
}

TEST(Formula, AtomsAndFragments) {
  EXPECT_EQ(atoms_of(parse_formula("q & I(p | q)")), (std::vector<std::string>{"p", "q"}));
  EXPECT_EQ(atoms_of(parse_sequent("r |- q & p")), (std::vector<std::string>{"p", "q", "r"}));
  EXPECT_TRUE(in_fragment(parse_formula("~p & q"), Signature{}));
  EXPECT_TRUE(in_fragment(parse_formula("[*]Ip"), Signature{Op::BBox, Op::Ign}));
  EXPECT_FALSE(in_fragment(parse_formula("[*]Ip"), Signature{Op::BBox}));
  EXPECT_FALSE(in_fragment(parse_formula("Acc p"), Signature{Op::Box}));
}

TEST(Signature, ListsModalOperatorsInFixedOrder) {
  Signature s{Op::Tri, Op::Box, Op::Ign};
  EXPECT_EQ(s.modal_ops(), (std::vector<Op>{Op::Box, Op::Ign, Op::Tri}));
  EXPECT_TRUE(s.with(Op::BBox).contains(Op::BBox));
  EXPECT_FALSE(s.contains(Op::BBox));
}

// Independent count: c(1) = atoms, c(s) = u c(s-1) + 2 sum_{i<s} c(i) c(s-i).
std::vector<std::size_t> enumeration_counts(std::size_t atoms, std::size_t unary, std::size_t max_size) {
  std::vector<std::size_t> c(max_size + 1, 0);
  c[1] = atoms;
  for (std::size_t s = 2; s <= max_size; ++s) {
    c[s] = unary * c[s - 1];
    for (std::size_t i = 1; i < s; ++i) c[s] += 2 * c[i] * c[s - i];
  }
  return c;
}

TEST(FormulaEnumeration, CountsMatchRecurrence) {
  struct Case {
    Signature sig;
    std::vector<std::string> atoms;
    std::size_t size;
  };
  for (const auto& c : {Case{{}, {"p"}, 4}, Case{{Op::BBox, Op::Ign}, {"p", "q"}, 4},
                        Case{{Op::Box}, {"p"}, 6}, Case{{Op::BBox, Op::Ign}, {"p"}, 6}}) {
    auto counts = enumeration_counts(c.atoms.size(), 1 + c.sig.modal_ops().size(), c.size);
    std::size_t total = 0;
    for (auto n : counts) total += n;
    auto fs = formulas_up_to(c.sig, c.atoms, c.size);
    EXPECT_EQ(fs.size(), total);
    std::set<Formula> distinct(fs.begin(), fs.end());
    EXPECT_EQ(distinct.size(), fs.size());
    for (const auto& f : fs) {
      EXPECT_LE(f.size(), c.size);
      EXPECT_TRUE(in_fragment(f, c.sig));
    }
  }
}

TEST(FormulaEnumeration, FrozenValues) {
  EXPECT_EQ(formulas_up_to({Op::BBox, Op::Ign}, {"p", "q"}, 4).size(), 2256u);
  auto small = formulas_up_to({}, {"p"}, 2);
  ASSERT_EQ(small.size(), 4u);
  EXPECT_EQ(small[0], p);
  EXPECT_EQ(small[1], Formula::neg(p));
  EXPECT_EQ(small[2], Formula::conj(p, p));
  EXPECT_EQ(small[3], Formula::disj(p, p));
}

#include <gtest/gtest.h>

#include "bdm/harness.hpp"
#include "bdm/oracle.hpp"
#include "bdm/tableau.hpp"

using namespace bdm;

namespace {

Formula fml(std::string_view s) { return parse_formula(s); }
Sequent seq(std::string_view s) { return parse_sequent(s); }

bool holds(TruthState v, Sign s) {
  switch (s) {
    case Sign::T: return v.sup_t;
    case Sign::F: return v.sup_f;
    case Sign::TBar: return !v.sup_t;
    case Sign::FBar: return !v.sup_f;
  }
  return false;
}

bool refutes(const PointedModel& pm, const Sequent& s) {
  return eval(pm.model, pm.point, s.lhs).sup_t && !eval(pm.model, pm.point, s.rhs).sup_t;
}

// The formula a conclusion talks about, given which child carried the side premise.
Formula part_of(const Formula& main, Part part, Part side) {
  switch (part) {
    case Part::Operand: return main.operand();
    case Part::Left: return main.left();
    case Part::Right: return main.right();
    case Part::Other: return side == Part::Left ? main.right() : main.left();
  }
  return main;
}

// A main formula with the rule's connective over random operands.
Formula instance_for(const RuleSchema& r, Rng& rng) {
  const Signature sig{Op::BBox, Op::Ign};
  Formula a = random_formula(rng, sig, {"p", "q"}, 4);
  if (is_binary(r.op)) return Formula::binary(r.op, a, random_formula(rng, sig, {"p", "q"}, 4));
  return Formula::unary(r.op, a);
}

}  // namespace

TEST(Signs, ComplementAndNegation) {
  for (Sign s : {Sign::T, Sign::F, Sign::TBar, Sign::FBar}) {
    EXPECT_EQ(complement(complement(s)), s);
    EXPECT_EQ(negated(negated(s)), s);
    EXPECT_EQ(parse_sign(to_string(s)), s);
  }
  EXPECT_EQ(complement(Sign::T), Sign::TBar);
  EXPECT_EQ(negated(Sign::TBar), Sign::FBar);
  EXPECT_FALSE(parse_sign("x").has_value());
}

TEST(Rules, TableIsWellFormed) {
  const auto& t = rule_table();
  EXPECT_EQ(t.size(), 26u);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_EQ(rule_index(t[i].name), i);
    EXPECT_FALSE(t[i].columns.empty());
    EXPECT_NE(t[i].op, Op::Box);
    EXPECT_NE(t[i].op, Op::Tri);
  }
  EXPECT_FALSE(rule_index("cut").has_value());
  EXPECT_TRUE(rule_table()[*rule_index("bbox_f")].creates_worlds());
  EXPECT_FALSE(rule_table()[*rule_index("bbox_t")].creates_worlds());
}

// Every rule, read with labels as distinct worlds of a model, preserves
// support: when its premises hold, some column holds. Strict rules quantify
// over successors other than the premise world.
TEST(Rules, LocallySoundAgainstTheSemantics) {
  Rng rng(17);
  std::vector<std::size_t> fired(rule_table().size(), 0);
  for (int trial = 0; trial < 4000; ++trial) {
    Model m = random_model(rng, 4, {"p", "q"});
    for (std::size_t ri = 0; ri < rule_table().size(); ++ri) {
      const RuleSchema& r = rule_table()[ri];
      const Formula main = instance_for(r, rng);
      Evaluator ev(m);
      for (World w = 0; w < m.size(); ++w) {
        if (!holds(ev.eval(w, main), r.main)) continue;
        const auto succ = successors(m, w, r.strict);
        auto at = [&](World v, const Formula& f, Sign s) { return holds(ev.eval(v, f), s); };

        if (r.side.kind == SideKind::Child) {
          for (Part side : {Part::Left, Part::Right}) {
            if (!at(w, part_of(main, side, side), r.side.sign)) continue;
            ++fired[ri];
            const auto& c = r.columns[0][0];
            ASSERT_TRUE(at(w, part_of(main, c.part, side), c.sign)) << r.name << " " << to_string(main);
          }
          continue;
        }
        if (r.side.kind == SideKind::Succ) {
          bool side_ok = false;
          for (World x : succ) side_ok = side_ok || at(x, main.operand(), r.side.sign);
          if (!side_ok) continue;
        }
        ++fired[ri];
        bool some_column = false;
        for (const auto& col : r.columns) {
          bool col_ok = true;
          std::vector<World> fresh1, fresh2;
          for (const auto& c : col) {
            const Formula f = part_of(main, c.part, Part::Left);
            if (c.place == Place::Here) col_ok = col_ok && at(w, f, c.sign);
            if (c.place == Place::EachSucc)
              for (World v : succ) col_ok = col_ok && at(v, f, c.sign);
          }
          // Fresh worlds: some successor for each fresh label, satisfying all its conclusions.
          auto fresh_ok = [&](Place which) {
            bool needed = false;
            for (const auto& c : col) needed = needed || c.place == which;
            if (!needed) return true;
            for (World v : succ) {
              bool ok = true;
              for (const auto& c : col)
                if (c.place == which) ok = ok && at(v, part_of(main, c.part, Part::Left), c.sign);
              if (ok) return true;
            }
            return false;
          };
          col_ok = col_ok && fresh_ok(Place::Fresh1) && fresh_ok(Place::Fresh2);
          some_column = some_column || col_ok;
        }
        ASSERT_TRUE(some_column) << r.name << " on " << to_string(main) << " at w" << w << "\n" << format_model(m);
      }
    }
  }
  for (std::size_t ri = 0; ri < fired.size(); ++ri) EXPECT_GT(fired[ri], 0u) << rule_table()[ri].name;
}

TEST(Branches, ClosureDetectsComplementaryLabels) {
  Branch b({{0, fml("p"), Sign::T}, {0, fml("p"), Sign::TBar}});
  auto c = b.closure();
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(*c, (ClosureWitness{0, fml("p"), Sign::T}));
  EXPECT_FALSE(is_closed(Branch({{0, fml("p"), Sign::T}, {0, fml("p"), Sign::F}})).has_value());
}

TEST(Branches, ApplyRuleFiresOneInstance) {
  Branch b({{0, fml("p & q"), Sign::T}});
  auto out = apply_rule(b, RuleInstance::of("and_t", 0, fml("p & q")));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_TRUE(out[0].has(0, fml("p"), Sign::T));
  EXPECT_TRUE(out[0].has(0, fml("q"), Sign::T));
  EXPECT_THROW(apply_rule(out[0], RuleInstance::of("and_t", 0, fml("p & q"))), std::invalid_argument);
  EXPECT_THROW(apply_rule(b, RuleInstance::of("or_f", 0, fml("p & q"))), std::invalid_argument);
  EXPECT_THROW(apply_rule(b, RuleInstance::of("and_t", 0, fml("r"))), std::invalid_argument);
  EXPECT_THROW(RuleInstance::of("nonsense", 0, fml("p")), std::invalid_argument);
}

TEST(Branches, SuccessorRulesNeedARelatedTarget) {
  Branch b({{0, fml("[*]p"), Sign::T}}, {{0, 1}});
  auto inst = RuleInstance::of("bbox_t", 0, fml("[*]p"));
  EXPECT_THROW(apply_rule(b, inst), std::invalid_argument);
  inst.target = 1;
  auto out = apply_rule(b, inst);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_TRUE(out[0].has(1, fml("p"), Sign::T));
  EXPECT_TRUE(out[0].related(0, 1));
  EXPECT_FALSE(out[0].related(1, 0));
}

TEST(Branches, BranchingRuleCreatesColumns) {
  Branch b({{0, fml("[*]p"), Sign::F}});
  auto out = apply_rule(b, RuleInstance::of("bbox_f", 0, fml("[*]p")));
  EXPECT_EQ(out.size(), 2u);
  EXPECT_GE(out[1].world_count(), 3u);
}

TEST(Branches, CutSplitsOnBothSigns) {
  Branch b({{0, fml("p & q"), Sign::TBar}});
  auto out = apply_rule(b, RuleInstance::cut(0, fml("p"), Axis::Truth));
  ASSERT_EQ(out.size(), 2u);
  EXPECT_TRUE(out[0].has(0, fml("p"), Sign::T) || out[1].has(0, fml("p"), Sign::T));
  EXPECT_TRUE(out[0].has(0, fml("p"), Sign::TBar) || out[1].has(0, fml("p"), Sign::TBar));
}

TEST(Branches, SaturationYieldsRealizableOpenBranches) {
  auto terminals = saturate(Branch::root(seq("[*](p & q) |- [*]p")));
  std::size_t open = 0;
  for (const auto& b : terminals) {
    if (b.closure()) continue;
    ++open;
    EXPECT_TRUE(b.complete());
    PointedModel pm = realize(b);
    EXPECT_TRUE(refutes(pm, seq("[*](p & q) |- [*]p")));
  }
  EXPECT_GT(open, 0u);
  EXPECT_THROW(realize(Branch({{0, fml("p"), Sign::T}, {0, fml("p"), Sign::TBar}})), std::invalid_argument);
  EXPECT_THROW(realize(Branch::root(seq("[*](p & q) |- [*]p"))), std::invalid_argument);
}

TEST(Prover, ClosesIgnoranceOfDisjunction) {
  Verdict v = prove(seq("Ip & Iq |- I(p | q)"));
  EXPECT_TRUE(v.proved);
  EXPECT_FALSE(v.countermodel.has_value());
  EXPECT_GT(v.stats.steps, 0u);
  EXPECT_EQ(parse_proof(format_proof(v.tree)), v.tree);
}

TEST(Prover, KnowledgeDoesNotDistributeOverConjunction) {
  const Sequent s = seq("[*](p & q) |- [*]p");
  Verdict v = prove(s);
  ASSERT_FALSE(v.proved);
  ASSERT_TRUE(v.countermodel.has_value());
  const auto& pm = v.countermodel->model;
  EXPECT_TRUE(refutes(pm, s));
  EXPECT_EQ(pm.model.size(), 3u);
  EXPECT_EQ(parse_proof(format_proof(v.tree)), v.tree);
}

TEST(Prover, ValidAndInvalidBasics) {
  for (const char* s : {"p |- p", "p & q |- q", "Ip |- p", "~~p |- p", "[*]p & [*]q |- [*](p & q)", "I(p & q) |- p"})
    EXPECT_TRUE(prove(seq(s)).proved) << s;
  for (const char* s : {"p |- q", "p |- ~~q", "[*]p |- p", "p |- Ip", "p | ~p |- q | ~q"})
    EXPECT_FALSE(prove(seq(s)).proved) << s;
}

TEST(Prover, RejectsOperatorsWithoutRules) {
  EXPECT_THROW(prove(seq("[]p |- p")), UnsupportedFormula);
  EXPECT_THROW(prove(seq("p |- Tri p")), UnsupportedFormula);
}

TEST(Prover, StepLimitCarriesPartialTableau) {
  try {
    prove(seq("[*](p & q) |- [*]p"), {.max_steps = 2});
    FAIL() << "expected a resource limit";
  } catch (const ResourceLimitExceeded& e) {
    EXPECT_FALSE(e.partial_tableau().empty());
  }
}

TEST(Prover, TreeRecordingCanBeSwitchedOff) {
  Verdict a = prove(seq("Ip & Iq |- I(p | q)"), {.record_tree = false});
  EXPECT_TRUE(a.proved);
  EXPECT_TRUE(a.tree.root.items.empty());
}

TEST(ProofText, RejectsMalformedInput) {
  EXPECT_THROW(parse_proof("w0: p ; maybe\n"), std::exception);
  EXPECT_THROW(parse_proof("w0 p t\n"), std::exception);
}

// Within a single language the calculus agrees with countermodel search.
TEST(Agreement, SingleLanguageSample) {
  Rng rng(9);
  EnumerationBudget budget{.max_worlds = 3, .atoms = {"p", "q"}, .modulo_iso = true};
  for (Signature sig : {Signature{Op::BBox}, Signature{Op::Ign}}) {
    auto formulas = formulas_up_to(sig, budget.atoms, 4);
    auto table = ValidityTable::for_budget(formulas, budget);
    std::uniform_int_distribution<std::size_t> pick(0, formulas.size() - 1);
    for (int k = 0; k < 1500; ++k) {
      std::size_t i = pick(rng), j = pick(rng);
      Sequent s{formulas[i], formulas[j]};
      Verdict v = prove(s, {.record_tree = false});
      if (v.proved) {
        EXPECT_TRUE(table.valid(i, j)) << to_string(s);
      } else {
        EXPECT_TRUE(refutes(v.countermodel->model, s)) << to_string(s);
      }
    }
  }
}

// Tableau models never have loops while I looks only at other worlds and
// [*] at all of them. Mixed sequents can therefore close although a
// reflexive point refutes them.
TEST(Agreement, MixedSequentClosesButFailsAtAReflexivePoint) {
  const Sequent s = seq("Ip |- [*]~p");
  EXPECT_TRUE(prove(s).proved);
  Model loop = parse_model("worlds: w0\nedges: w0->w0\nval p: w0=T\n");
  EXPECT_TRUE(refutes({loop, 0}, s));
  std::vector<Frame> loop_free;
  for (const Frame& f : frames_up_to(3, true)) {
    bool has_loop = false;
    for (World w = 0; w < f.size(); ++w) has_loop = has_loop || f.related(w, w);
    if (!has_loop) loop_free.push_back(f);
  }
  for (const Frame& f : loop_free) EXPECT_TRUE(valid_on_frame(f, s).valid);
}

// The ignorance rule "from phi |- chi infer phi & I chi |- I phi" has a
// countermodel for phi = p & q, chi = p on a two-successor fork.
TEST(IgnoranceRule, FailsForConjunctivePremise) {
  EXPECT_TRUE(prove(seq("p & q |- p")).proved);
  const Sequent conclusion = seq("(p & q) & Ip |- I(p & q)");
  Model fork = parse_model(
      "worlds: w0 w1 w2\n"
      "edges: w0->w1 w0->w2\n"
      "val p: w0=T w1=B w2=B\n"
      "val q: w0=T w1=T w2=N\n");
  EXPECT_TRUE(refutes({fork, 0}, conclusion));
  EXPECT_EQ(eval(fork, 0, fml("I(p & q)")), TruthState::F());
  Verdict v = prove(conclusion);
  EXPECT_FALSE(v.proved);
  EXPECT_TRUE(refutes(v.countermodel->model, conclusion));
}

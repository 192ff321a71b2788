#include <gtest/gtest.h>

#include <set>

#include "bdm/harness.hpp"
#include "bdm/semantics.hpp"

using namespace bdm;

namespace {

Formula fml(std::string_view s) { return parse_formula(s); }

// Straightforward recursive evaluator over explicit world sets, kept apart
// from the bit-mask implementation so the two can be compared.
struct Naive {
  const Model& m;
  bool strict_bbox = false;

  std::set<World> succ(World w, bool strict) const {
    std::set<World> s;
    for (World v : m.frame().successors(w))
      if (!strict || v != w) s.insert(v);
    return s;
  }

  TruthState go(World w, const Formula& f) const {
    auto every = [](const std::set<World>& s, auto pred) {
      for (World v : s)
        if (!pred(v)) return false;
      return true;
    };
    auto some = [&](const std::set<World>& s, auto pred) { return !every(s, [&](World v) { return !pred(v); }); };
    auto same = [&](const std::set<World>& s, auto pred) {
      return every(s, [&](World v) { return pred(v); }) || every(s, [&](World v) { return !pred(v); });
    };
    switch (f.op()) {
      case Op::Var:
        return m.value(f.name(), w);
      case Op::Neg: {
        auto a = go(w, f.operand());
        return {a.sup_f, a.sup_t};
      }
      case Op::And: {
        auto a = go(w, f.left()), b = go(w, f.right());
        return {a.sup_t && b.sup_t, a.sup_f || b.sup_f};
      }
      case Op::Or: {
        auto a = go(w, f.left()), b = go(w, f.right());
        return {a.sup_t || b.sup_t, a.sup_f && b.sup_f};
      }
      default:
        break;
    }
    const Formula g = f.operand();
    auto t = [&](World v) { return go(v, g).sup_t; };
    auto fl = [&](World v) { return go(v, g).sup_f; };
    switch (f.op()) {
      case Op::Box: {
        auto s = succ(w, false);
        return {every(s, t), some(s, fl)};
      }
      case Op::BBox: {
        auto s = succ(w, strict_bbox);
        return {every(s, t) && same(s, fl), some(s, fl) || !same(s, t)};
      }
      case Op::Ign: {
        auto s = succ(w, true);
        return {t(w) && every(s, fl) && same(s, t), fl(w) || some(s, t) || !same(s, fl)};
      }
      case Op::Tri: {
        auto s = succ(w, false);
        bool known = every(s, [&](World v) { return t(v) || fl(v); });
        return {same(s, t) && same(s, fl) && known, !same(s, t) || !same(s, fl) || (some(s, t) && some(s, fl))};
      }
      default:
        throw std::logic_error("unreachable");
    }
  }
};

const Signature kAll{Op::Box, Op::BBox, Op::Ign, Op::Tri};

}  // namespace

TEST(TruthState, LettersAndCodes) {
  EXPECT_EQ(TruthState::T().letter(), 'T');
  EXPECT_EQ(TruthState::B().code(), 3u);
  EXPECT_EQ(TruthState::N().code(), 0u);
  EXPECT_EQ(TruthState::F().code(), 2u);
  for (unsigned c = 0; c < 4; ++c) {
    auto v = TruthState::from_code(c);
    EXPECT_EQ(TruthState::from_letter(v.letter()), v);
  }
}

TEST(Frame, SuccessorsAndMasks) {
  Frame f(3);
  f.add_edge(0, 1);
  f.add_edge(0, 0);
  f.add_edge(2, 1);
  EXPECT_EQ(f.successors(0), (std::vector<World>{0, 1}));
  EXPECT_EQ(f.successors(0, true), (std::vector<World>{1}));
  EXPECT_EQ(f.edge_count(), 3u);
  EXPECT_TRUE(f.related(2, 1));
  EXPECT_FALSE(f.related(1, 2));
  EXPECT_TRUE(Frame::from_mask(3, f.mask()).same_relation(f));
  EXPECT_EQ(f.find("w2"), World{2});
  EXPECT_FALSE(f.find("w9").has_value());
  EXPECT_THROW(f.add_edge(0, 5), UnknownWorld);
}

TEST(Semantics, MatchesNaiveReferenceOnRandomModels) {
  Rng rng(3);
  const std::vector<std::string> atoms{"p", "q"};
  for (int trial = 0; trial < 3000; ++trial) {
    Model m = random_model(rng, 4, atoms);
    Formula f = random_formula(rng, kAll, atoms, 9);
    Naive ref{m};
    Evaluator ev(m);
    for (World w = 0; w < m.size(); ++w) ASSERT_EQ(ev.eval(w, f), ref.go(w, f)) << to_string(f) << "\n" << format_model(m);
  }
}

TEST(Semantics, StrictBoxOptionUsesStrictSuccessors) {
  Rng rng(5);
  const std::vector<std::string> atoms{"p"};
  for (int trial = 0; trial < 1000; ++trial) {
    Model m = random_model(rng, 3, atoms);
    Formula f = random_formula(rng, Signature{Op::BBox, Op::Ign}, atoms, 7);
    Naive ref{m, true};
    for (World w = 0; w < m.size(); ++w) ASSERT_EQ(eval(m, w, f, {.strict_bbox = true}), ref.go(w, f));
  }
}

TEST(Semantics, IgnoranceDecomposesWithStrictKnowledge) {
  Rng rng(8);
  for (int trial = 0; trial < 2000; ++trial) {
    Model m = random_model(rng, 4, {"p", "q"});
    // [*] inside chi would also switch to strict successors, so chi avoids it.
    Formula chi = random_formula(rng, Signature{Op::Box, Op::Ign, Op::Tri}, {"p", "q"}, 5);
    Formula ign = Formula::ign(chi);
    Formula decomposed = Formula::conj(chi, Formula::bbox(Formula::neg(chi)));
    for (World w = 0; w < m.size(); ++w) ASSERT_EQ(eval(m, w, ign), eval(m, w, decomposed, {.strict_bbox = true}));
  }
}

TEST(Semantics, HandlesMoreThanSixtyFourWorlds) {
  const std::size_t n = 130;
  Frame fr(n);
  for (World w = 0; w + 1 < n; ++w) fr.add_edge(w, w + 1);
  fr.add_edge(n - 1, 0);
  Model m(fr);
  for (World w = 0; w < n; ++w) m.set("p", w, w == 100 ? TruthState::B() : TruthState::T());
  Naive ref{m};
  for (const char* text : {"[]p", "[*]p", "Ip", "Tri p", "[*][*]~p", "I[]p"}) {
    Formula f = fml(text);
    Evaluator ev(m);
    for (World w = 0; w < n; ++w) ASSERT_EQ(ev.eval(w, f), ref.go(w, f)) << text << " at " << w;
  }
  EXPECT_EQ(eval(m, 99, fml("[*]p")), TruthState::B());
  EXPECT_EQ(eval(m, 98, fml("[*]p")), TruthState::T());
}

TEST(Semantics, DeadEndsAndEmptySets) {
  Model m = parse_model("worlds: w0\nedges:\nval p: w0=N\n");
  EXPECT_EQ(eval(m, 0, fml("[]p")), TruthState::T());
  EXPECT_EQ(eval(m, 0, fml("[*]p")), TruthState::T());
  EXPECT_EQ(eval(m, 0, fml("Tri p")), TruthState::T());
  EXPECT_EQ(eval(m, 0, fml("Ip")), TruthState::N());
  EXPECT_EQ(eval(m, 0, fml("unmentioned")), TruthState::N());
  EXPECT_THROW(eval(m, 3, fml("p")), UnknownWorld);
}

TEST(Semantics, SequentHoldsWhenTruthIsPreserved) {
  Model m = parse_model("worlds: a b\nedges: a->b\nval p: a=B b=T\nval q: a=F b=T\n");
  EXPECT_TRUE(holds_sequent_at(m, 0, parse_sequent("p |- [*]p")));
  EXPECT_FALSE(holds_sequent_at(m, 0, parse_sequent("p |- q")));
  EXPECT_TRUE(holds_sequent_at(m, 0, parse_sequent("q |- p")));
  EXPECT_EQ(successors(m, 0, false), (std::vector<World>{1}));
}

TEST(Semantics, DualModelSwapsGlutsAndGaps) {
  Rng rng(21);
  for (int trial = 0; trial < 2000; ++trial) {
    Model m = random_model(rng, 4, {"p", "q"});
    Model d = dual_model(m);
    EXPECT_TRUE(dual_model(d).same_as(m));
    Formula f = random_formula(rng, kAll, {"p", "q"}, 8);
    for (World w = 0; w < m.size(); ++w) {
      TruthState a = eval(m, w, f), b = eval(d, w, f);
      ASSERT_EQ(b.sup_t, !a.sup_f);
      ASSERT_EQ(b.sup_f, !a.sup_t);
    }
  }
}

TEST(FrameClasses, SmallExamples) {
  Frame empty(1);
  EXPECT_FALSE(frame_has(empty, FrameClass::Serial));
  EXPECT_TRUE(frame_has(empty, FrameClass::Transitive));
  EXPECT_TRUE(frame_has(empty, FrameClass::Euclidean));
  EXPECT_TRUE(frame_has(empty, FrameClass::PartialFunctional));

  Frame loop(1);
  loop.add_edge(0, 0);
  for (auto c : {FrameClass::Serial, FrameClass::Dense, FrameClass::Reflexive, FrameClass::Euclidean,
                 FrameClass::Transitive, FrameClass::Symmetric, FrameClass::S5, FrameClass::S4})
    EXPECT_TRUE(frame_has(loop, c)) << to_string(c);

  Frame chain(3);  // w0 -> w1 -> w2 without the shortcut
  chain.add_edge(0, 1);
  chain.add_edge(1, 2);
  EXPECT_FALSE(frame_has(chain, FrameClass::Transitive));
  EXPECT_FALSE(frame_has(chain, FrameClass::Dense));
  EXPECT_TRUE(frame_has(chain, FrameClass::PartialFunctional));

  Frame fork(3);
  fork.add_edge(0, 1);
  fork.add_edge(0, 2);
  EXPECT_FALSE(frame_has(fork, FrameClass::PartialFunctional));
  EXPECT_FALSE(frame_has(fork, FrameClass::Euclidean));
}

TEST(FrameClasses, CompositeClassesAreIntersections) {
  for (const Frame& f : std::vector<Frame>{Frame::from_mask(2, 0b1111), Frame::from_mask(2, 0b0010),
                                           Frame::from_mask(3, 0b100100100), Frame::from_mask(3, 0b111111111)}) {
    EXPECT_EQ(frame_has(f, FrameClass::S4),
              frame_has(f, FrameClass::Reflexive) && frame_has(f, FrameClass::Transitive));
    EXPECT_EQ(frame_has(f, FrameClass::D45), frame_has(f, FrameClass::Serial) &&
                                                 frame_has(f, FrameClass::Transitive) &&
                                                 frame_has(f, FrameClass::Euclidean));
    EXPECT_EQ(frame_has(f, FrameClass::S5),
              frame_has(f, FrameClass::Reflexive) && frame_has(f, FrameClass::Euclidean));
  }
}

TEST(ModelText, RoundTripsThroughFormatter) {
  Rng rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    Model m = random_model(rng, 5, {"p", "q", "r"});
    Model back = parse_model(format_model(m));
    EXPECT_TRUE(back.same_as(m));
    EXPECT_EQ(back.frame().names(), m.frame().names());
  }
}

TEST(ModelText, AcceptsCommentsAndPrimedNames) {
  Model m = parse_model("# a comment\n\nworlds: w0' w1'\nedges: w0'->w1'\nval p: w0'=T w1'=B\n");
  EXPECT_EQ(m.size(), 2u);
  EXPECT_EQ(m.value("p", 1), TruthState::B());
  EXPECT_EQ(m.value("q", 1), TruthState::N());
  EXPECT_EQ(m.frame().name(0), "w0'");
}

TEST(ModelText, ErrorsReportTheLine) {
  auto line_of = [](std::string_view text) -> std::size_t {
    try {
      parse_model(text);
    } catch (const ModelParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("worlds: a b\nedges: a->c\n"), 2u);
  EXPECT_EQ(line_of("worlds: a\nval p: a=X\n"), 2u);
  EXPECT_EQ(line_of("worlds: a\nedges: a->a\nbogus line\n"), 3u);
  EXPECT_EQ(line_of("worlds: a a\n"), 1u);
  EXPECT_NE(line_of("edges: a->a\n"), 0u);
  EXPECT_NE(line_of(""), 0u);
}

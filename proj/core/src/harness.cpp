#include "bdm/harness.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <functional>

#include "bdm/tableau.hpp"

namespace bdm {

// ------------------------------------------------------------------ random inputs

namespace {

std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

Formula grow(Rng& rng, const std::vector<Op>& unary, const std::vector<std::string>& atoms,
             std::size_t size) {
  if (size == 1) return Formula::var(atoms[pick(rng, atoms.size())]);
  // A size-2 formula cannot be binary over non-empty operands of total size 1,
  // so size 2 always takes a unary operator.
  bool binary = size > 2 && pick(rng, 2) == 0;
  if (!binary) return Formula::unary(unary[pick(rng, unary.size())], grow(rng, unary, atoms, size - 1));
  std::size_t left = 1 + pick(rng, size - 1);
  Op op = pick(rng, 2) == 0 ? Op::And : Op::Or;
  return Formula::binary(op, grow(rng, unary, atoms, left), grow(rng, unary, atoms, size - left));
}

}  // namespace

Formula random_formula(Rng& rng, Signature sig, const std::vector<std::string>& atoms,
                       std::size_t max_size) {
  if (atoms.empty() || max_size == 0) throw std::invalid_argument("random_formula needs atoms and a positive size");
  std::vector<Op> unary{Op::Neg};
  for (Op op : sig.modal_ops()) unary.push_back(op);
  return grow(rng, unary, atoms, 1 + pick(rng, max_size));
}

Frame random_frame(Rng& rng, std::size_t min_worlds, std::size_t max_worlds) {
  Frame f(min_worlds + pick(rng, max_worlds - min_worlds + 1));
  for (World i = 0; i < f.size(); ++i)
    for (World j = 0; j < f.size(); ++j)
      if (pick(rng, 2)) f.add_edge(i, j);
  return f;
}

Model random_model(Rng& rng, std::size_t max_worlds, const std::vector<std::string>& atoms) {
  Model m(random_frame(rng, 1, max_worlds));
  for (const auto& a : atoms)
    for (World w = 0; w < m.size(); ++w) m.set(a, w, TruthState::from_code(static_cast<unsigned>(pick(rng, 4))));
  return m;
}

// ------------------------------------------------------------------ helpers

namespace {

class Recorder {
 public:
  Recorder(ExperimentReport& r, const HarnessConfig& cfg) : r_(r), keep_(cfg.keep_passes) {}

  // `describe` is only called when the assertion has to be stored.
  template <class Describe>
  bool check(bool ok, Describe&& describe) {
    ++r_.assertions;
    if (!ok || keep_) {
      Assertion a = describe();
      a.passed = ok;
      (ok ? r_.passes : r_.failures).push_back(std::move(a));
    }
    return ok;
  }

 private:
  ExperimentReport& r_;
  bool keep_;
};

std::string letter(TruthState v) { return std::string(1, v.letter()); }

std::string describe(const PointedModel& pm) {
  std::string text = format_model(pm.model);
  std::string flat;
  for (char c : text) {
    if (c == '\n') {
      flat += "; ";
    } else {
      flat += c;
    }
  }
  while (!flat.empty() && (flat.back() == ' ' || flat.back() == ';')) flat.pop_back();
  return "at " + pm.model.frame().name(pm.point) + " of {" + flat + "}";
}

std::string describe(const std::optional<PointedModel>& pm) { return pm ? describe(*pm) : ""; }

std::string describe_frame(const Frame& f) {
  std::string s = std::to_string(f.size()) + " worlds, edges:";
  for (auto [a, b] : f.edges()) s += " " + f.name(a) + "->" + f.name(b);
  return s;
}

Sequent seq(std::string_view text) { return parse_sequent(text); }
Formula fml(std::string_view text) { return parse_formula(text); }

// Claims about every frame run on all small frames plus seeded larger ones.
std::vector<Frame> every_frame(const HarnessConfig& cfg, Rng& rng) {
  auto out = frames_up_to(cfg.max_worlds, false);
  for (std::size_t i = 0; i < cfg.random_frames; ++i) out.push_back(random_frame(rng, 4, 6));
  return out;
}

constexpr std::uint64_t kExhaustiveValuations = std::uint64_t{1} << 14;
constexpr std::size_t kSampledValuations = 4096;

// Exhaustive over valuations when that is cheap, sampled otherwise.
ValidityResult frame_validity(const Frame& f, const Sequent& s, Rng& rng) {
  auto atoms = atoms_of(s);
  if (valuation_count(f.size(), atoms.size()) <= kExhaustiveValuations) return valid_on_frame(f, s);
  FormulaProgram prog;
  auto lhs = prog.add(s.lhs), rhs = prog.add(s.rhs);
  MaskEvaluator ev(f);
  ValidityResult out;
  for (std::size_t k = 0; k < kSampledValuations; ++k) {
    Model m(f);
    for (const auto& a : prog.atoms())
      for (World w = 0; w < f.size(); ++w) m.set(a, w, TruthState::from_code(static_cast<unsigned>(pick(rng, 4))));
    ev.load_atoms(m, prog);
    ev.run(prog);
    ++out.models_checked;
    for (std::size_t i = 0; i < ev.words(); ++i) {
      std::uint64_t bad = ev.truth_mask(lhs)[i] & ~ev.truth_mask(rhs)[i];
      if (bad) {
        out.valid = false;
        out.witness = PointedModel{m, static_cast<World>(i * 64 + std::countr_zero(bad))};
        return out;
      }
    }
  }
  return out;
}

// First pointed model on the frame where a and b take different values.
std::optional<PointedModel> value_mismatch(const Frame& f, const Formula& a, const Formula& b) {
  FormulaProgram prog;
  auto ia = prog.add(a), ib = prog.add(b);
  ValuationStream vals(f, prog.atoms());
  MaskEvaluator ev(f);
  ev.clear_atoms(prog.atoms().size());
  const std::size_t n = f.size();
  while (vals.next()) {
    for (std::size_t k = 0; k <= vals.changed() && k < vals.digits().size(); ++k)
      ev.set_atom(static_cast<std::uint32_t>(k / n), static_cast<World>(k % n),
                  TruthState::from_code(vals.digits()[k]));
    ev.run(prog);
    for (World w = 0; w < n; ++w)
      if (ev.state(ia, w) != ev.state(ib, w)) return PointedModel{vals.model(), w};
  }
  return std::nullopt;
}

bool exactly_true(TruthState v) { return v == TruthState::T(); }
bool exactly_false(TruthState v) { return v == TruthState::F(); }

TruthState dual_value(TruthState v) { return {!v.sup_f, !v.sup_t}; }

ExperimentReport start(std::string name, std::uint64_t seed) {
  ExperimentReport r;
  r.name = std::move(name);
  r.seed = seed;
  return r;
}

const Signature kAllModal{Op::Box, Op::BBox, Op::Ign, Op::Tri};
const Signature kCalculus{Op::BBox, Op::Ign};

}  // namespace

// ------------------------------------------------------------------ experiments

ExperimentReport run_fixtures(const HarnessConfig& cfg) {
  ExperimentReport r = start("fixtures", cfg.seed);
  Recorder rec(r, cfg);
  for (const auto& fx : fixtures()) {
    Evaluator ev(fx.model);
    for (const auto& fact : fx.facts) {
      TruthState got = ev.eval(fact.world, fact.formula);
      bool ok = (!fact.sup_t || *fact.sup_t == got.sup_t) && (!fact.sup_f || *fact.sup_f == got.sup_f);
      rec.check(ok, [&] {
        std::string expected;
        if (fact.sup_t) expected += *fact.sup_t ? "truth" : "no truth";
        if (fact.sup_f) expected += std::string(expected.empty() ? "" : ", ") + (*fact.sup_f ? "falsity" : "no falsity");
        return Assertion{fx.name + " " + fx.model.frame().name(fact.world) + ": " + to_string(fact.formula),
                         expected, letter(got), ""};
      });
    }
    ++r.counts["fixtures"];
    r.counts["facts"] += fx.facts.size();
  }
  return r;
}

ExperimentReport run_no_validities(const std::vector<Formula>& sample, const HarnessConfig& cfg) {
  ExperimentReport r = start("no-validities", cfg.seed);
  Recorder rec(r, cfg);
  Evaluator glut(fixture("all-glut").model), gap(fixture("all-gap").model);
  for (const auto& f : sample) {
    TruthState b = glut.eval(0, f), n = gap.eval(0, f);
    rec.check(b == TruthState::B(), [&] { return Assertion{"all-glut: " + to_string(f), "B", letter(b), ""}; });
    rec.check(n == TruthState::N(), [&] { return Assertion{"all-gap: " + to_string(f), "N", letter(n), ""}; });
  }
  r.counts["formulas"] = sample.size();
  return r;
}

ExperimentReport run_no_validities(const HarnessConfig& cfg) {
  Rng rng(cfg.seed);
  std::vector<Formula> sample;
  for (std::size_t i = 0; i < cfg.samples; ++i)
    sample.push_back(random_formula(rng, kAllModal, {"p", "q", "r"}, 10));
  auto r = run_no_validities(sample, cfg);
  r.budget["samples"] = cfg.samples;
  r.budget["max_size"] = 10;
  return r;
}

ExperimentReport run_duality(const HarnessConfig& cfg) {
  ExperimentReport r = start("duality", cfg.seed);
  r.budget = {{"trials", cfg.trials}, {"max_worlds", 4}, {"max_size", 8}};
  Recorder rec(r, cfg);
  Rng rng(cfg.seed);
  const std::vector<std::string> atoms{"p", "q"};
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    Model m = random_model(rng, 4, atoms);
    World w = static_cast<World>(pick(rng, m.size()));
    Formula f = random_formula(rng, kAllModal, atoms, 8);
    Model d = dual_model(m);
    TruthState v = eval(m, w, f), dv = eval(d, w, f);
    rec.check(dv == dual_value(v), [&] {
      return Assertion{"dual value of " + to_string(f), letter(dual_value(v)), letter(dv), describe(PointedModel{m, w})};
    });
    Model dd = dual_model(d);
    TruthState ddv = eval(dd, w, f);
    rec.check(dd.same_as(m) && ddv == v, [&] {
      return Assertion{"double dual of " + to_string(f), letter(v), letter(ddv), describe(PointedModel{m, w})};
    });
    ++r.counts[std::string("value ") + v.letter()];
  }
  return r;
}

ExperimentReport run_know_axioms(const HarnessConfig& cfg) {
  ExperimentReport r = start("know-axioms", cfg.seed);
  r.budget = {{"max_worlds", cfg.max_worlds}, {"random_frames", cfg.random_frames}, {"equivalence_worlds", 4}};
  Recorder rec(r, cfg);
  Rng rng(cfg.seed);

  const Formula tri = fml("Tri p"), tri_def = fml("[*]p | [*]~p");
  const Formula know = fml("[*]p"), know_def = fml("p & Tri p");
  for (const Frame& f : every_frame(cfg, rng)) {
    ++r.counts["frames"];
    auto diff = value_mismatch(f, tri, tri_def);
    rec.check(!diff, [&] { return Assertion{"Tri p = [*]p | [*]~p on " + describe_frame(f), "equal values", "differ", describe(diff)}; });
    for (const Sequent& s : {Sequent{tri, tri_def}, Sequent{tri_def, tri}}) {
      auto res = frame_validity(f, s, rng);
      rec.check(res.valid, [&] { return Assertion{to_string(s) + " on " + describe_frame(f), "valid", "refuted", describe(res.witness)}; });
    }
    if (!frame_has(f, FrameClass::Reflexive)) continue;
    ++r.counts["reflexive frames"];
    diff = value_mismatch(f, know, know_def);
    rec.check(!diff, [&] { return Assertion{"[*]p = p & Tri p on " + describe_frame(f), "equal values", "differ", describe(diff)}; });
    for (const Sequent& s : {Sequent{know, know_def}, Sequent{know_def, know}}) {
      auto res = frame_validity(f, s, rng);
      rec.check(res.valid, [&] { return Assertion{to_string(s) + " on " + describe_frame(f), "valid", "refuted", describe(res.witness)}; });
    }
  }

  std::vector<Frame> equivalence;
  for (const Frame& f : frames_up_to(4, true))
    if (frame_has(f, FrameClass::S5)) equivalence.push_back(f);
  for (std::size_t i = 0; i < cfg.random_frames / 10; ++i) {
    Frame f(5 + pick(rng, 2));
    std::vector<std::size_t> cell(f.size());
    for (auto& c : cell) c = pick(rng, f.size());
    for (World a = 0; a < f.size(); ++a)
      for (World b = 0; b < f.size(); ++b)
        if (cell[a] == cell[b]) f.add_edge(a, b);
    equivalence.push_back(f);
  }
  const std::vector<Sequent> s5{seq("[*]p |- p"), seq("[*]p |- [*][*]p"), seq("<*>p |- [*]<*>p")};
  for (const Frame& f : equivalence) {
    ++r.counts["equivalence frames"];
    for (const auto& s : s5) {
      auto res = frame_validity(f, s, rng);
      rec.check(res.valid, [&] { return Assertion{to_string(s) + " on " + describe_frame(f), "valid", "refuted", describe(res.witness)}; });
    }
  }

  // Transitivity alone does not give [*]p |- [*][*]p.
  const Fixture& chain = fixture("transitive-dead-end");
  const Sequent four = seq("[*]p |- [*][*]p");
  const Frame& cf = chain.model.frame();
  rec.check(frame_has(cf, FrameClass::Transitive) && !frame_has(cf, FrameClass::Serial),
            [&] { return Assertion{"transitive-dead-end frame", "transitive, not serial", "other", describe_frame(cf)}; });
  rec.check(!holds_sequent_at(chain.model, 0, four),
            [&] { return Assertion{"all-glut valuation refutes " + to_string(four), "refuted", "holds", describe(PointedModel{chain.model, 0})}; });
  return r;
}

ExperimentReport run_ignorance_axioms(const HarnessConfig& cfg) {
  ExperimentReport r = start("ignorance-axioms", cfg.seed);
  r.budget = {{"max_worlds", cfg.max_worlds}, {"random_frames", cfg.random_frames}, {"ir_samples", cfg.ir_samples}, {"ir_max_size", 3}};
  Recorder rec(r, cfg);
  Rng rng(cfg.seed);

  const std::vector<Sequent> axioms{seq("Ip |- p"), seq("Ip & Iq |- I(p | q)")};
  for (const Frame& f : every_frame(cfg, rng)) {
    ++r.counts["frames"];
    for (const auto& s : axioms) {
      auto res = frame_validity(f, s, rng);
      rec.check(res.valid, [&] { return Assertion{to_string(s) + " on " + describe_frame(f), "valid", "refuted", describe(res.witness)}; });
    }
  }

  // Premises for the rule are drawn from the I-language sequents the oracle finds valid.
  const auto candidates = formulas_up_to(Signature{Op::Ign}, {"p", "q"}, 3);
  EnumerationBudget budget{.max_worlds = 3, .max_formula_size = 3, .atoms = {"p", "q"}, .modulo_iso = true};
  auto table = ValidityTable::for_budget(candidates, budget);
  std::vector<std::pair<Formula, Formula>> valid;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    for (std::size_t j = 0; j < candidates.size(); ++j)
      if (table.valid(i, j)) valid.emplace_back(candidates[i], candidates[j]);
  r.counts["valid premises"] = valid.size();
  std::shuffle(valid.begin(), valid.end(), rng);
  if (valid.size() > cfg.ir_samples) valid.erase(valid.begin() + static_cast<std::ptrdiff_t>(cfg.ir_samples), valid.end());
  valid.emplace(valid.begin(), fml("p & q"), fml("p"));

  const ProverOptions quiet{.record_tree = false};
  for (const auto& [phi, chi] : valid) {
    const Sequent premise{phi, chi};
    rec.check(prove(premise, quiet).proved,
              [&] { return Assertion{"premise " + to_string(premise), "proved", "open", ""}; });
    const Sequent conclusion{Formula::conj(phi, Formula::ign(chi)), Formula::ign(phi)};
    const bool proved = prove(conclusion, quiet).proved;
    auto cm = find_countermodel(conclusion, budget);
    rec.check(proved, [&] { return Assertion{"conclusion " + to_string(conclusion), "proved", "open", describe(cm)}; });
    rec.check(!cm, [&] { return Assertion{"conclusion " + to_string(conclusion), "no countermodel", "countermodel", describe(cm)}; });
    ++r.counts["rule instances"];
    if (!proved || cm) ++r.counts["rule instances with a refuted conclusion"];
    if (proved == !cm) ++r.counts["rule instances where prover and oracle agree"];
  }
  return r;
}

namespace {

struct ClassDefinition {
  FrameClass cls;
  std::vector<std::size_t> sequents;
};

}  // namespace

ExperimentReport run_definability(const HarnessConfig& cfg) {
  ExperimentReport r = start("definability", cfg.seed);
  r.budget = {{"max_worlds", cfg.max_worlds}, {"iso_filtered_worlds", std::max(cfg.max_worlds, cfg.definability_worlds)}};
  Recorder rec(r, cfg);

  const std::vector<Sequent> sequents{seq("[*]p |- <*>p"), seq("[*]p |- p"), seq("<*>p |- <*><*>p"),
                                      seq("<*>p |- [*]<*>p"), seq("[*]p |- [*][*]p")};
  enum { kSerial, kReflexive, kDense, kEuclidean, kFour };
  const std::vector<ClassDefinition> classes{
      {FrameClass::Serial, {kSerial}},
      {FrameClass::Reflexive, {kReflexive}},
      {FrameClass::Dense, {kDense}},
      {FrameClass::Euclidean, {kEuclidean}},
      {FrameClass::F45, {kEuclidean, kFour}},
      {FrameClass::D4, {kSerial, kFour}},
      {FrameClass::S4, {kReflexive, kFour}},
      {FrameClass::D5, {kSerial, kEuclidean}},
      {FrameClass::S5, {kReflexive, kEuclidean}},
      {FrameClass::Ddn, {kSerial, kDense}},
      {FrameClass::D45, {kSerial, kEuclidean, kFour}},
  };

  auto frames = frames_up_to(cfg.max_worlds, false);
  if (cfg.definability_worlds > cfg.max_worlds)
    for (const Frame& f : frames_up_to(cfg.definability_worlds, true))
      if (f.size() > cfg.max_worlds) frames.push_back(f);

  std::uint64_t transitive_refuting = 0;
  for (const Frame& f : frames) {
    ++r.counts["frames"];
    std::vector<ValidityResult> results;
    for (const auto& s : sequents) results.push_back(valid_on_frame(f, s));
    for (const auto& c : classes) {
      bool defined = std::all_of(c.sequents.begin(), c.sequents.end(), [&](std::size_t i) { return results[i].valid; });
      bool member = frame_has(f, c.cls);
      rec.check(defined == member, [&] {
        std::string witness;
        for (std::size_t i : c.sequents)
          if (!results[i].valid) witness = to_string(sequents[i]) + " refuted " + describe(results[i].witness);
        return Assertion{std::string(to_string(c.cls)) + " on " + describe_frame(f),
                         member ? "member, sequents valid" : "non-member, some sequent refuted",
                         defined ? "sequents valid" : "sequent refuted", witness};
      });
    }
    if (frame_has(f, FrameClass::Transitive) && !results[kFour].valid) ++transitive_refuting;
  }
  r.counts["transitive frames refuting [*]p |- [*][*]p"] = transitive_refuting;

  const Fixture& chain = fixture("transitive-dead-end");
  const Frame& cf = chain.model.frame();
  auto res = valid_on_frame(cf, sequents[kFour]);
  rec.check(frame_has(cf, FrameClass::Transitive) && !res.valid, [&] {
    return Assertion{"transitive-dead-end frame: " + to_string(sequents[kFour]), "transitive and refuted",
                     res.valid ? "valid" : "not transitive", describe_frame(cf)};
  });
  rec.check(!holds_sequent_at(chain.model, 0, sequents[kFour]), [&] {
    return Assertion{"all-glut valuation on transitive-dead-end", "refutes " + to_string(sequents[kFour]), "holds", ""};
  });
  r.notes.push_back("whether transitive frames are definable by some other [*]-sequent is not decided here");
  return r;
}

ExperimentReport run_separations(const HarnessConfig& cfg) {
  ExperimentReport r = start("separations", cfg.seed);
  r.budget = {{"max_size", cfg.max_size}};
  Recorder rec(r, cfg);
  const std::vector<std::string> atoms{"p"};

  auto point = [](std::string_view fixture_name, std::string_view world) {
    const Fixture& fx = fixture(fixture_name);
    return PointedModel{fx.model, *fx.model.frame().find(world)};
  };
  auto label = [](const PointedModel& pm) { return pm.model.frame().name(pm.point); };

  auto indistinguishable = [&](const std::string& instance, const PointedModel& a, const PointedModel& b, Signature sig) {
    auto rep = separation_check(a, b, sig, cfg.max_size, atoms);
    r.counts["formulas checked"] += rep.formulas_checked;
    rec.check(!rep.separated(), [&] {
      return Assertion{instance, "no separating formula up to size " + std::to_string(cfg.max_size), "separated",
                       rep.separating_formula ? to_string(*rep.separating_formula) : ""};
    });
  };
  auto target_separates = [&](const std::string& instance, const PointedModel& a, const PointedModel& b, const Formula& f) {
    TruthState va = eval(a.model, a.point, f), vb = eval(b.model, b.point, f);
    rec.check(va != vb, [&] { return Assertion{instance + ": " + to_string(f), "different values", letter(va) + letter(vb), ""}; });
    return std::pair{va, vb};
  };

  // Ip against the [] and [*] fragments.
  const PointedModel single = point("ign-reflexive-point", "w0");
  const Formula ip = fml("Ip");
  for (std::string_view w : {"w0'", "w1'"}) {
    const PointedModel pair = point("ign-reflexive-pair", w);
    const std::string inst = "ign-reflexive-point w0 vs ign-reflexive-pair " + label(pair);
    target_separates(inst, single, pair, ip);
    indistinguishable(inst + " in the [] fragment", single, pair, Signature{Op::Box});
    indistinguishable(inst + " in the [*] fragment", single, pair, Signature{Op::BBox});
  }

  // [*]p against the I fragment.
  const PointedModel loop = point("glut-loop", "w0"), dead = point("glut-dead-end", "w0'");
  auto [vl, vd] = target_separates("glut-loop vs glut-dead-end", loop, dead, fml("[*]p"));
  rec.check(vl.sup_f && !vd.sup_f, [&] { return Assertion{"[*]p falsity at glut-loop, not at glut-dead-end", "true/false", letter(vl) + letter(vd), ""}; });
  indistinguishable("glut-loop vs glut-dead-end in the I fragment", loop, dead, Signature{Op::Ign});

  // []p against [*] and I together: no such formula is a glut at both w0 and w2.
  {
    const std::vector<PointedModel> pts{point("three-clique", "w0"), point("three-clique", "w2")};
    const Formula box = fml("[]p");
    for (const auto& pm : pts) {
      TruthState v = eval(pm.model, pm.point, box);
      rec.check(v == TruthState::B(), [&] { return Assertion{"three-clique " + label(pm) + ": []p", "B", letter(v), ""}; });
    }
    auto rep = definability_check(pts, box, kCalculus, cfg.max_size, atoms);
    r.counts["formulas checked"] += rep.formulas_checked;
    rec.check(!rep.matched(), [&] {
      return Assertion{"three-clique w0, w2: glut at both in the [*], I fragment", "none up to size " + std::to_string(cfg.max_size),
                       "found", rep.matching_formula ? to_string(*rep.matching_formula) : ""};
    });
  }

  // Acc p against the [] fragment.
  {
    const PointedModel m = point("accident-point", "w0"), mp = point("accident-pair", "w0'");
    const Formula acc = fml("Acc p");
    auto [va, vb] = target_separates("accident-point vs accident-pair", m, mp, acc);
    rec.check(va == TruthState::F() && vb == TruthState::T(),
              [&] { return Assertion{"Acc p at accident-point, accident-pair", "FT", letter(va) + letter(vb), ""}; });
    const std::vector<PointedModel> pts{m, mp};
    auto rep = definability_check(pts, acc, Signature{Op::Box}, cfg.max_size, atoms);
    r.counts["formulas checked"] += rep.formulas_checked;
    rec.check(!rep.matched(), [&] {
      return Assertion{"accident-point vs accident-pair: the value pattern of Acc p in the [] fragment",
                       "none up to size " + std::to_string(cfg.max_size), "found",
                       rep.matching_formula ? to_string(*rep.matching_formula) : ""};
    });
    // Exact values at the pair's point carry over to the single point.
    Evaluator em(m.model), emp(mp.model);
    for (const auto& f : formulas_up_to(Signature{Op::Box}, atoms, cfg.max_size)) {
      TruthState a = em.eval(m.point, f), b = emp.eval(mp.point, f);
      bool ok = (!exactly_false(b) || exactly_false(a)) && (!exactly_true(b) || exactly_true(a));
      rec.check(ok, [&] { return Assertion{"exact value of " + to_string(f) + " carried from accident-pair to accident-point", letter(b), letter(a), ""}; });
      ++r.counts["formulas checked"];
    }
    auto pointwise = separation_check(m, mp, Signature{Op::Box}, cfg.max_size, atoms);
    if (pointwise.separated())
      r.notes.push_back("accident-point and accident-pair differ pointwise on " + to_string(*pointwise.separating_formula) +
                        "; undefinability rests on the value pattern, not on indistinguishability");
  }
  return r;
}

ExperimentReport run_remarks(const HarnessConfig& cfg) {
  ExperimentReport r = start("remarks", cfg.seed);
  r.budget = {{"max_worlds", cfg.max_worlds}, {"trials", cfg.trials}, {"contraposition_size", 3}};
  Recorder rec(r, cfg);
  Rng rng(cfg.seed);

  // Distribution of [*] over conjunction and partial functionality.
  const Sequent dist = seq("[*](p & q) |- [*]p & [*]q");
  std::uint64_t pf = 0, pf_valid = 0;
  for (const Frame& f : frames_up_to(cfg.max_worlds, false)) {
    auto res = valid_on_frame(f, dist);
    bool functional = frame_has(f, FrameClass::PartialFunctional);
    rec.check(!res.valid || functional, [&] {
      return Assertion{to_string(dist) + " on " + describe_frame(f), "valid only if partial-functional", "valid", ""};
    });
    pf += functional;
    pf_valid += functional && res.valid;
    ++r.counts["frames"];
  }
  r.counts["partial-functional frames"] = pf;
  r.counts["partial-functional frames where valid"] = pf_valid;
  r.notes.push_back("partial-functional implies valid held on " + std::to_string(pf_valid) + " of " + std::to_string(pf) +
                    " partial-functional frames (reported, not asserted)");
  {
    Frame fork(3);
    fork.add_edge(0, 1);
    fork.add_edge(0, 2);
    auto res = valid_on_frame(fork, dist);
    TruthState v = res.witness ? eval(res.witness->model, res.witness->point, dist.lhs) : TruthState::N();
    rec.check(!res.valid && v == TruthState::B(), [&] {
      return Assertion{to_string(dist) + " on a fork", "refuted with lhs B", letter(v), describe(res.witness)};
    });
  }

  // Exact truth of [*](p & q) and [*]p & [*]q coincide; I agrees with p & strict [*]~p.
  const Formula both = fml("[*](p & q)"), each = fml("[*]p & [*]q");
  const Formula ign = fml("Ip"), ign_def = fml("p & [*]~p");
  const EvalOptions strict{.strict_bbox = true};
  const std::vector<std::string> atoms{"p", "q"};
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    Model m = random_model(rng, 4, atoms);
    World w = static_cast<World>(pick(rng, m.size()));
    TruthState a = eval(m, w, both), b = eval(m, w, each);
    rec.check(exactly_true(a) == exactly_true(b), [&] {
      return Assertion{"exact truth of " + to_string(both) + " vs " + to_string(each), "agree", letter(a) + letter(b), describe(PointedModel{m, w})};
    });
    TruthState i = eval(m, w, ign), d = eval(m, w, ign_def, strict);
    rec.check(i == d, [&] { return Assertion{"Ip vs p & [*]~p over strict successors", letter(i), letter(d), describe(PointedModel{m, w})}; });
    Formula chi = random_formula(rng, Signature{Op::Box, Op::Ign, Op::Tri}, atoms, 5);
    Formula lhs = Formula::ign(chi), rhs = Formula::conj(chi, Formula::bbox(Formula::neg(chi)));
    TruthState li = eval(m, w, lhs), ld = eval(m, w, rhs, strict);
    rec.check(li == ld, [&] { return Assertion{to_string(lhs) + " vs " + to_string(rhs) + " over strict successors", letter(li), letter(ld), describe(PointedModel{m, w})}; });
  }
  {
    const Fixture& fx = fixture("ign-reflexive-point");
    TruthState i = eval(fx.model, 0, ign), d = eval(fx.model, 0, ign_def, strict);
    rec.check(i == TruthState::T() && d == TruthState::T(),
              [&] { return Assertion{"ign-reflexive-point w0: Ip and p & [*]~p over strict successors", "TT", letter(i) + letter(d), ""}; });
  }

  // Contraposition preserves validity on each frame.
  std::vector<Formula> forms = formulas_up_to(kCalculus, atoms, 3);
  const std::size_t k = forms.size();
  for (std::size_t i = 0; i < k; ++i) forms.push_back(Formula::neg(forms[i]));
  for (const Frame& f : frames_up_to(std::min<std::size_t>(cfg.max_worlds, 3), true)) {
    ValidityTable table(forms, std::span<const Frame>(&f, 1), atoms);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        if (!table.valid(i, j)) continue;
        ++r.counts["frame-valid sequents"];
        rec.check(table.valid(k + j, k + i), [&] {
          return Assertion{"~" + to_string(forms[j]) + " |- ~" + to_string(forms[i]) + " on " + describe_frame(f),
                           "valid", "refuted", ""};
        });
      }
  }
  return r;
}

ExperimentReport run_agreement(const HarnessConfig& cfg) {
  ExperimentReport r = start("agreement", cfg.seed);
  const EnumerationBudget budget{.max_worlds = 3, .max_formula_size = cfg.agreement_size, .atoms = {"p", "q"}, .modulo_iso = true};
  r.budget = {{"max_worlds", budget.max_worlds}, {"max_size", cfg.agreement_size}, {"sample", cfg.agreement_sample}};
  Recorder rec(r, cfg);
  Rng rng(cfg.seed);

  const auto formulas = formulas_up_to(kCalculus, budget.atoms, cfg.agreement_size);
  const auto table = ValidityTable::for_budget(formulas, budget);
  // Tableau models never contain loops, so the same check against loop-free
  // frames separates calculus errors from the reach of the calculus.
  std::vector<Frame> loop_free;
  for (const Frame& f : frames_up_to(budget.max_worlds, true)) {
    bool loop = false;
    for (World w = 0; w < f.size(); ++w) loop = loop || f.related(w, w);
    if (!loop) loop_free.push_back(f);
  }
  const ValidityTable irreflexive(formulas, loop_free, budget.atoms);
  // Bit 0: no I, bit 1: no [*]. Sequents sharing a bit stay inside one language.
  std::vector<unsigned> language;
  for (const auto& f : formulas)
    language.push_back((in_fragment(f, Signature{Op::BBox}) ? 1u : 0u) | (in_fragment(f, Signature{Op::Ign}) ? 2u : 0u));
  r.counts["formulas"] = formulas.size();
  r.counts["distinct profiles"] = table.distinct_profiles();

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (cfg.agreement_sample == 0) {
    pairs.reserve(formulas.size() * formulas.size());
    for (std::size_t i = 0; i < formulas.size(); ++i)
      for (std::size_t j = 0; j < formulas.size(); ++j) pairs.emplace_back(i, j);
  } else {
    for (std::size_t s = 0; s < cfg.agreement_sample; ++s)
      pairs.emplace_back(pick(rng, formulas.size()), pick(rng, formulas.size()));
  }

  const ProverOptions quiet{.record_tree = false};
  std::uint64_t wrong_closed = 0, wrong_closed_same_language = 0, wrong_closed_loop_free = 0;
  for (auto [i, j] : pairs) {
    const Sequent s{formulas[i], formulas[j]};
    const bool valid = table.valid(i, j);
    const bool same_language = (language[i] & language[j]) != 0;
    if (same_language) ++r.counts["same-language sequents"];
    try {
      Verdict v = prove(s, quiet);
      if (v.proved) {
        ++r.counts["closed"];
        rec.check(valid, [&] {
          return Assertion{to_string(s), "no countermodel up to 3 worlds", "countermodel", describe(find_countermodel(s, budget))};
        });
        if (!valid) {
          ++wrong_closed;
          wrong_closed_same_language += same_language;
          wrong_closed_loop_free += !irreflexive.valid(i, j);
        }
      } else {
        ++r.counts["open"];
        const auto& pm = v.countermodel->model;
        bool refutes = eval(pm.model, pm.point, s.lhs).sup_t && !eval(pm.model, pm.point, s.rhs).sup_t;
        rec.check(refutes, [&] { return Assertion{to_string(s), "verified countermodel", "not a countermodel", describe(pm)}; });
        if (valid) ++r.counts["open with countermodel beyond 3 worlds"];
      }
    } catch (const std::exception& e) {
      rec.check(false, [&] { return Assertion{to_string(s), "verdict", e.what(), ""}; });
    }
  }
  r.counts["closed but refuted"] = wrong_closed;
  r.counts["closed but refuted, same language"] = wrong_closed_same_language;
  r.counts["closed but refuted on loop-free frames"] = wrong_closed_loop_free;
  if (wrong_closed > 0)
    r.notes.push_back("every closed-but-refuted sequent mixes [*] and I: " +
                      std::string(wrong_closed_same_language == 0 ? "yes" : "no") +
                      "; all of them are valid on loop-free frames: " +
                      std::string(wrong_closed_loop_free == 0 ? "yes" : "no"));

  // The table against direct countermodel search on a seeded handful.
  for (std::size_t k = 0; k < 40 && !pairs.empty(); ++k) {
    auto [i, j] = pairs[pick(rng, pairs.size())];
    const Sequent s{formulas[i], formulas[j]};
    auto cm = find_countermodel(s, budget);
    rec.check(cm.has_value() != table.valid(i, j), [&] {
      return Assertion{"table vs search on " + to_string(s), table.valid(i, j) ? "valid" : "refuted",
                       cm ? "refuted" : "valid", describe(cm)};
    });
    ++r.counts["search spot checks"];
  }
  return r;
}

// ------------------------------------------------------------------ dispatch

namespace {

using Runner = ExperimentReport (*)(const HarnessConfig&);

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> all{
      {"fixtures", &run_fixtures},
      {"no-validities", static_cast<Runner>(&run_no_validities)},
      {"duality", &run_duality},
      {"know-axioms", &run_know_axioms},
      {"ignorance-axioms", &run_ignorance_axioms},
      {"definability", &run_definability},
      {"separations", &run_separations},
      {"remarks", &run_remarks},
      {"agreement", &run_agreement},
  };
  return all;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

ExperimentReport run_experiment(std::string_view name, const HarnessConfig& cfg) {
  for (const auto& [n, fn] : registry()) {
    if (n != name) continue;
    auto start = std::chrono::steady_clock::now();
    ExperimentReport r = fn(cfg);
    r.seed = cfg.seed;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  }
  throw std::out_of_range("unknown experiment '" + std::string(name) + "'");
}

}  // namespace bdm

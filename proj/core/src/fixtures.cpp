#include <stdexcept>
#include <tuple>

#include "bdm/harness.hpp"

namespace bdm {

namespace {

Fixture make(std::string name, std::string summary, std::string_view model_text,
             std::vector<std::tuple<std::string_view, std::string_view, std::string_view>> facts) {
  Fixture fx{std::move(name), std::move(summary), parse_model(model_text), {}};
  for (const auto& [world, formula, claim] : facts) {
    auto w = fx.model.frame().find(world);
    if (!w) throw std::logic_error("fixture " + fx.name + " has no world " + std::string(world));
    Formula f = parse_formula(formula);
    // Claims: a Belnapian letter, or +/- for truth support, or ~+/~- for its absence.
    if (claim.size() == 1 && claim != "+" && claim != "-")
      fx.facts.push_back(Fact::value(*w, f, TruthState::from_letter(claim[0])));
    else if (claim == "+")
      fx.facts.push_back(Fact::truth(*w, f, true));
    else if (claim == "~+")
      fx.facts.push_back(Fact::truth(*w, f, false));
    else if (claim == "-")
      fx.facts.push_back(Fact::falsity(*w, f, true));
    else if (claim == "~-")
      fx.facts.push_back(Fact::falsity(*w, f, false));
    else
      throw std::logic_error("bad fixture claim " + std::string(claim));
  }
  return fx;
}

std::vector<Fixture> build() {
  std::vector<Fixture> out;
  out.push_back(make("box-not-uniform",
                     "[]p is true at w0 although p takes two values among its successors",
                     "worlds: w0 w1\n"
                     "edges: w0->w0 w0->w1\n"
                     "val p: w0=T w1=B\n",
                     {{"w0", "[]p", "+"},
                      {"w0", "[]p", "B"},
                      {"w0", "[*]p", "~+"},
                      {"w0", "[*]p", "F"},
                      {"w0", "Tri p", "~+"}}));
  out.push_back(make("all-glut", "every formula is both true and false at w0",
                     "worlds: w0\n"
                     "edges: w0->w0\n"
                     "val p: w0=B\n"
                     "val q: w0=B\n"
                     "val r: w0=B\n",
                     {{"w0", "p", "B"},
                      {"w0", "q", "B"},
                      {"w0", "I(p & q)", "B"},
                      {"w0", "[]p & [*]~q", "B"},
                      {"w0", "Tri r | ~Ip", "B"}}));
  out.push_back(make("all-gap", "every formula is neither true nor false at w0",
                     "worlds: w0\n"
                     "edges: w0->w0\n"
                     "val p: w0=N\n"
                     "val q: w0=N\n"
                     "val r: w0=N\n",
                     {{"w0", "p", "N"},
                      {"w0", "[*]p | ~[*]p", "N"},
                      {"w0", "I(q | r)", "N"},
                      {"w0", "Tri p", "N"}}));
  out.push_back(make("ign-reflexive-point", "Ip is true at a lone reflexive point",
                     "worlds: w0\n"
                     "edges: w0->w0\n"
                     "val p: w0=T\n",
                     {{"w0", "Ip", "+"}, {"w0", "Ip", "T"}, {"w0", "[*]p", "T"}, {"w0", "[]p", "T"}}));
  out.push_back(make("ign-reflexive-pair", "Ip fails once a second true world is visible",
                     "worlds: w0' w1'\n"
                     "edges: w0'->w0' w0'->w1' w1'->w0' w1'->w1'\n"
                     "val p: w0'=T w1'=T\n",
                     {{"w0'", "Ip", "~+"}, {"w0'", "Ip", "F"}, {"w0'", "[*]p", "T"}, {"w1'", "[]p", "T"}}));
  out.push_back(make("glut-loop", "[*]p is false at a reflexive glut",
                     "worlds: w0\n"
                     "edges: w0->w0\n"
                     "val p: w0=B\n",
                     {{"w0", "[*]p", "-"}, {"w0", "[*]p", "B"}, {"w0", "Ip", "B"}}));
  out.push_back(make("glut-dead-end", "[*]p is not false at a glut without successors",
                     "worlds: w0'\n"
                     "edges:\n"
                     "val p: w0'=B\n",
                     {{"w0'", "[*]p", "~-"}, {"w0'", "[*]p", "T"}, {"w0'", "Ip", "B"}}));
  out.push_back(make("three-clique", "[]p is a glut at w0 and w2 of a universal three-world frame",
                     "worlds: w0 w1 w2\n"
                     "edges: w0->w0 w0->w1 w0->w2 w1->w0 w1->w1 w1->w2 w2->w0 w2->w1 w2->w2\n"
                     "val p: w0=T w1=B w2=T\n",
                     {{"w0", "[]p", "+"},
                      {"w0", "[]p", "-"},
                      {"w2", "[]p", "+"},
                      {"w2", "[]p", "-"},
                      {"w0", "[*]p", "F"}}));
  out.push_back(make("bbox-split", "[*](p & q) is true at w0 while [*]p is not",
                     "worlds: w0 w1 w2\n"
                     "edges: w0->w1 w0->w2\n"
                     "val p: w0=B w1=B w2=T\n"
                     "val q: w0=B w1=T w2=B\n",
                     {{"w0", "[*](p & q)", "+"},
                      {"w0", "[*]p", "~+"},
                      {"w0", "[*](p & q)", "B"},
                      {"w0", "[*]p", "F"},
                      {"w0", "[*]p & [*]q", "F"}}));
  out.push_back(make("transitive-dead-end",
                     "a transitive frame without seriality where [*]p holds but [*][*]p does not",
                     "worlds: w w' w''\n"
                     "edges: w->w' w'->w'' w->w''\n"
                     "val p: w=B w'=B w''=B\n",
                     {{"w", "[*]p", "+"}, {"w", "[*][*]p", "~+"}, {"w'", "[*]p", "B"}, {"w''", "[*]p", "T"}}));
  out.push_back(make("accident-point", "an exactly true p is exactly not an accident",
                     "worlds: w0\n"
                     "edges: w0->w0\n"
                     "val p: w0=T\n",
                     {{"w0", "Acc p", "~+"}, {"w0", "Acc p", "-"}, {"w0", "[]p", "T"}}));
  out.push_back(make("accident-pair", "an exactly true p next to a gap is an accident",
                     "worlds: w0' w1'\n"
                     "edges: w0'->w0' w0'->w1' w1'->w0' w1'->w1'\n"
                     "val p: w0'=T w1'=N\n",
                     {{"w0'", "Acc p", "+"}, {"w0'", "Acc p", "~-"}, {"w0'", "[]p", "N"}}));
  return out;
}

}  // namespace

const std::vector<Fixture>& fixtures() {
  static const std::vector<Fixture> all = build();
  return all;
}

const Fixture& fixture(std::string_view name) {
  for (const auto& fx : fixtures())
    if (fx.name == name) return fx;
  throw std::out_of_range("unknown fixture '" + std::string(name) + "'");
}

std::vector<std::string> check_fixture(const Fixture& fx) {
  std::vector<std::string> failures;
  Evaluator ev(fx.model);
  for (const auto& fact : fx.facts) {
    TruthState got = ev.eval(fact.world, fact.formula);
    bool ok = (!fact.sup_t || *fact.sup_t == got.sup_t) && (!fact.sup_f || *fact.sup_f == got.sup_f);
    if (!ok)
      failures.push_back(fx.name + " at " + fx.model.frame().name(fact.world) + ": " +
                         to_string(fact.formula) + " evaluates to " + std::string(1, got.letter()));
  }
  return failures;
}

}  // namespace bdm

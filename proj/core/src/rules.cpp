// The rule inventory of the analytic-cut calculus, as data.
//
// Each entry names the main premise (connective and sign), an optional side
// premise and one or more conclusion columns. Rules with one column are
// applied eagerly during propagation; rules with several columns branch.
// Cut is not listed here: it has no premises and is scheduled separately.

#include "bdm/tableau.hpp"

namespace bdm {

namespace {

using enum Sign;
using P = Part;
using L = Place;

constexpr SidePremise kNone{};
constexpr SidePremise child(Sign s) { return {SideKind::Child, s}; }
constexpr SidePremise succ(Sign s) { return {SideKind::Succ, s}; }

constexpr Conclusion here(Part p, Sign s) { return {L::Here, p, s}; }
constexpr Conclusion each(Sign s) { return {L::EachSucc, P::Operand, s}; }
constexpr Conclusion u(Sign s) { return {L::Fresh1, P::Operand, s}; }
constexpr Conclusion u2(Sign s) { return {L::Fresh2, P::Operand, s}; }

std::vector<RuleSchema> build() {
  return {
      {"neg_t", Op::Neg, T, kNone, false, {{here(P::Operand, F)}}},
      {"neg_f", Op::Neg, F, kNone, false, {{here(P::Operand, T)}}},
      {"neg_tbar", Op::Neg, TBar, kNone, false, {{here(P::Operand, FBar)}}},
      {"neg_fbar", Op::Neg, FBar, kNone, false, {{here(P::Operand, TBar)}}},

      {"and_t", Op::And, T, kNone, false, {{here(P::Left, T), here(P::Right, T)}}},
      {"and_fbar", Op::And, FBar, kNone, false, {{here(P::Left, FBar), here(P::Right, FBar)}}},
      {"and_f", Op::And, F, child(FBar), false, {{here(P::Other, F)}}},
      {"and_tbar", Op::And, TBar, child(T), false, {{here(P::Other, TBar)}}},

      {"or_f", Op::Or, F, kNone, false, {{here(P::Left, F), here(P::Right, F)}}},
      {"or_tbar", Op::Or, TBar, kNone, false, {{here(P::Left, TBar), here(P::Right, TBar)}}},
      {"or_t", Op::Or, T, child(TBar), false, {{here(P::Other, T)}}},
      {"or_fbar", Op::Or, FBar, child(F), false, {{here(P::Other, FBar)}}},

      {"bbox_t", Op::BBox, T, kNone, false, {{each(T)}}},
      {"bbox_minus_t", Op::BBox, T, succ(F), false, {{each(F)}}},
      {"bbox_fbar", Op::BBox, FBar, kNone, false, {{each(FBar)}}},
      // Truth-uniformity under a non-false [*]: the premise sign is fbar.
      {"bbox_plus_fbar", Op::BBox, FBar, succ(T), false, {{each(T)}}},
      {"bbox_f", Op::BBox, F, kNone, false, {{u(F)}, {u(T), u2(TBar)}}},
      {"bbox_tbar", Op::BBox, TBar, kNone, false, {{u(TBar)}, {u(F), u2(FBar)}}},

      {"ign_t", Op::Ign, T, kNone, false, {{here(P::Operand, T)}}},
      {"ign_R_t", Op::Ign, T, kNone, true, {{each(F)}}},
      {"ign_plus_t", Op::Ign, T, succ(T), true, {{each(T)}}},
      {"ign_fbar", Op::Ign, FBar, kNone, false, {{here(P::Operand, FBar)}}},
      {"ign_R_fbar", Op::Ign, FBar, kNone, true, {{each(TBar)}}},
      {"ign_plus_fbar", Op::Ign, FBar, succ(FBar), true, {{each(FBar)}}},
      {"ign_f", Op::Ign, F, kNone, true,
       {{u(T)}, {u(F), u2(FBar)}, {here(P::Operand, F)}}},
      {"ign_tbar", Op::Ign, TBar, kNone, true,
       {{u(FBar)}, {u(T), u2(TBar)}, {here(P::Operand, TBar)}}},
  };
}

}  // namespace

bool RuleSchema::creates_worlds() const {
  for (const auto& col : columns)
    for (const auto& c : col)
      if (c.place == Place::Fresh1 || c.place == Place::Fresh2) return true;
  return false;
}

const std::vector<RuleSchema>& rule_table() {
  static const std::vector<RuleSchema> table = build();
  return table;
}

std::optional<std::size_t> rule_index(std::string_view name) {
  const auto& t = rule_table();
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i].name == name) return i;
  return std::nullopt;
}

Sign complement(Sign s) {
  switch (s) {
    case T: return TBar;
    case TBar: return T;
    case F: return FBar;
    case FBar: return F;
  }
  return s;
}

Sign negated(Sign s) {
  switch (s) {
    case T: return F;
    case F: return T;
    case TBar: return FBar;
    case FBar: return TBar;
  }
  return s;
}

std::string_view to_string(Sign s) {
  switch (s) {
    case T: return "t";
    case F: return "f";
    case TBar: return "tbar";
    case FBar: return "fbar";
  }
  return "?";
}

std::optional<Sign> parse_sign(std::string_view s) {
  if (s == "t") return T;
  if (s == "f") return F;
  if (s == "tbar") return TBar;
  if (s == "fbar") return FBar;
  return std::nullopt;
}

RuleInstance RuleInstance::cut(World w, Formula f, Axis axis) {
  return RuleInstance{std::nullopt, w, std::move(f), axis, std::nullopt, std::nullopt};
}

RuleInstance RuleInstance::of(std::string_view rule, World w, Formula f) {
  auto idx = rule_index(rule);
  if (!idx) throw std::invalid_argument("unknown rule '" + std::string(rule) + "'");
  return RuleInstance{idx, w, std::move(f), Axis::Truth, std::nullopt, std::nullopt};
}

}  // namespace bdm

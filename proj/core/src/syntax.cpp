// Formula parser and printer.
//
// Precedence from low to high: `|`, `&`, prefix operators. Binary operators
// associate to the left. Unicode symbols are accepted as aliases of the
// ASCII operators; output is always ASCII.

#include <cctype>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>

#include "bdm/formula.hpp"

namespace bdm {

namespace {

enum class Tok {
  Atom, LParen, RParen, Not, Box, BBox, Dia, BDia, Ign, Tri, NTri, Acc, And, Or, Turnstile, End
};

struct Token {
  Tok kind;
  std::size_t offset;
  std::size_t length;
  std::string text;
};

struct Alias {
  std::string_view spelling;
  Tok kind;
};

// Longer spellings first so that prefix matching picks the right one.
constexpr Alias kSymbols[] = {
    {"|-", Tok::Turnstile}, {"[*]", Tok::BBox}, {"<*>", Tok::BDia}, {"[]", Tok::Box},
    {"<>", Tok::Dia},       {"~", Tok::Not},    {"&", Tok::And},    {"|", Tok::Or},
    {"(", Tok::LParen},     {")", Tok::RParen},
    {"¬", Tok::Not},   {"∧", Tok::And}, {"∨", Tok::Or},   {"□", Tok::Box},
    {"■", Tok::BBox},  {"◇", Tok::Dia}, {"♦", Tok::BDia}, {"◆", Tok::BDia},
    {"▲", Tok::Tri},   {"▼", Tok::NTri}, {"•", Tok::Acc}, {"⊢", Tok::Turnstile},
};

constexpr Alias kKeywords[] = {
    {"NTri", Tok::NTri}, {"Tri", Tok::Tri}, {"Acc", Tok::Acc}, {"I", Tok::Ign},
};

const std::vector<std::string> kOperandStart = {"atom", "(", "~", "[]", "[*]", "<>",
                                                "<*>",  "I", "Tri", "NTri", "Acc"};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) { advance(); }

  std::variant<Formula, Sequent> parse_any() {
    Formula lhs = disjunction();
    if (tok_.kind == Tok::Turnstile) {
      advance();
      Formula rhs = disjunction();
      expect_end({"'&'", "'|'"});
      return Sequent{std::move(lhs), std::move(rhs)};
    }
    expect_end({"'&'", "'|'", "'|-'"});
    return lhs;
  }

 private:
  void expect_end(std::vector<std::string> also) {
    if (tok_.kind == Tok::End) return;
    also.push_back("end of input");
    throw ParseError(tok_.offset, std::move(also), describe(tok_));
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (tok_.kind == Tok::Or) {
      advance();
      f = Formula::disj(std::move(f), conjunction());
    }
    return f;
  }

  Formula conjunction() {
    Formula f = prefix();
    while (tok_.kind == Tok::And) {
      advance();
      f = Formula::conj(std::move(f), prefix());
    }
    return f;
  }

  Formula prefix() {
    switch (tok_.kind) {
      case Tok::Atom: {
        Formula f = Formula::var(tok_.text);
        advance();
        return f;
      }
      case Tok::LParen: {
        advance();
        Formula f = disjunction();
        if (tok_.kind != Tok::RParen)
          throw ParseError(tok_.offset, {"'&'", "'|'", "')'"}, describe(tok_));
        advance();
        return f;
      }
      case Tok::Not: advance(); return Formula::neg(prefix());
      case Tok::Box: advance(); return Formula::box(prefix());
      case Tok::BBox: advance(); return Formula::bbox(prefix());
      case Tok::Ign: advance(); return Formula::ign(prefix());
      case Tok::Tri: advance(); return Formula::tri(prefix());
      case Tok::Dia: advance(); return expand_derived(DerivedOp::Diamond, prefix());
      case Tok::BDia: advance(); return expand_derived(DerivedOp::BDiamond, prefix());
      case Tok::Acc: advance(); return expand_derived(DerivedOp::Accident, prefix());
      case Tok::NTri: advance(); return expand_derived(DerivedOp::NotKnowWhether, prefix());
      default:
        throw ParseError(tok_.offset, kOperandStart, describe(tok_));
    }
  }

  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == text_.size()) {
      tok_ = {Tok::End, pos_, 0, ""};
      return;
    }
    std::string_view rest = text_.substr(pos_);
    unsigned char c = static_cast<unsigned char>(rest[0]);
    if (std::islower(c)) {
      std::size_t n = 1;
      while (n < rest.size() &&
             (std::isalnum(static_cast<unsigned char>(rest[n])) || rest[n] == '_'))
        ++n;
      tok_ = {Tok::Atom, pos_, n, std::string(rest.substr(0, n))};
      pos_ += n;
      return;
    }
    for (const Alias& a : std::isupper(c) ? std::span<const Alias>(kKeywords)
                                          : std::span<const Alias>(kSymbols)) {
      if (rest.starts_with(a.spelling)) {
        tok_ = {a.kind, pos_, a.spelling.size(), std::string(a.spelling)};
        pos_ += a.spelling.size();
        return;
      }
    }
    std::size_t n = 1;
    while (n < rest.size() && (static_cast<unsigned char>(rest[n]) & 0xC0) == 0x80) ++n;
    std::vector<std::string> expected = kOperandStart;
    for (const char* s : {"&", "|", "|-", ")"}) expected.push_back(s);
    throw ParseError(pos_, std::move(expected), "'" + std::string(rest.substr(0, n)) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token tok_{Tok::End, 0, 0, ""};
};

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += v[i];
  }
  return out;
}

int precedence(Op op) {
  switch (op) {
    case Op::Or: return 1;
    case Op::And: return 2;
    default: return 3;
  }
}

void print(std::ostream& os, const Formula& f) {
  auto wrapped = [&os](const Formula& g, bool parens) {
    if (parens) os << '(';
    print(os, g);
    if (parens) os << ')';
  };
  switch (f.op()) {
    case Op::Var: os << f.name(); return;
    case Op::Neg: os << '~'; break;
    case Op::Box: os << "[]"; break;
    case Op::BBox: os << "[*]"; break;
    case Op::Ign: os << 'I'; break;
    case Op::Tri: os << "Tri "; break;
    case Op::And:
    case Op::Or: {
      int p = precedence(f.op());
      wrapped(f.left(), precedence(f.left().op()) < p);
      os << (f.op() == Op::And ? " & " : " | ");
      wrapped(f.right(), precedence(f.right().op()) <= p);
      return;
    }
  }
  wrapped(f.operand(), is_binary(f.operand().op()));
}

}  // namespace

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected,
                       const std::string& found)
    : std::runtime_error("syntax error at offset " + std::to_string(offset) + ": found " +
                         found + ", expected one of: " + join(expected)),
      offset_(offset),
      expected_(std::move(expected)) {}

std::variant<Formula, Sequent> parse(std::string_view text) { return Parser(text).parse_any(); }

Formula parse_formula(std::string_view text) {
  auto r = parse(text);
  if (auto* f = std::get_if<Formula>(&r)) return *f;
  throw ParseError(text.find("|-") == std::string_view::npos ? text.size() : text.find("|-"),
                   {"formula without '|-'"}, "'|-'");
}

Sequent parse_sequent(std::string_view text) {
  auto r = parse(text);
  if (auto* s = std::get_if<Sequent>(&r)) return *s;
  throw ParseError(text.size(), {"'|-'"}, "end of input");
}

std::string to_string(const Formula& f) {
  std::ostringstream os;
  print(os, f);
  return os.str();
}

std::string to_string(const Sequent& s) { return to_string(s.lhs) + " |- " + to_string(s.rhs); }

std::ostream& operator<<(std::ostream& os, const Formula& f) {
  print(os, f);
  return os;
}

std::ostream& operator<<(std::ostream& os, const Sequent& s) {
  return os << s.lhs << " |- " << s.rhs;
}

}  // namespace bdm

// Text form of proof trees: one item per line, two spaces of indentation per
// depth. A node lists its own items, then either a leaf mark at the same
// depth or its children one level deeper.
//
//   w0: [*](p & q) ; t
//   w0 R w1
//   × (w1, p, t)
//   ○

#include <cctype>
#include <sstream>

#include "bdm/tableau.hpp"

namespace bdm {

namespace {

constexpr std::string_view kClosed = "×";
constexpr std::string_view kOpen = "○";

void write(std::ostream& os, const ProofNode& n, std::size_t depth) {
  const std::string pad(2 * depth, ' ');
  for (const auto& it : n.items) {
    os << pad;
    if (const auto* s = std::get_if<SignedFormula>(&it))
      os << 'w' << s->world << ": " << s->formula << " ; " << to_string(s->sign) << '\n';
    else {
      const auto& r = std::get<RelAtom>(it);
      os << 'w' << r.from << " R w" << r.to << '\n';
    }
  }
  if (n.closure) {
    os << pad << kClosed << " (w" << n.closure->world << ", " << n.closure->formula << ", "
       << to_string(n.closure->sign) << ")\n";
  } else if (n.open) {
    os << pad << kOpen << '\n';
  }
  for (const auto& c : n.children) write(os, c, depth + 1);
}

struct Line {
  std::size_t depth;
  std::string_view body;
  std::size_t number;
};

[[noreturn]] void fail(const Line& l, const std::string& msg) {
  throw std::invalid_argument("proof line " + std::to_string(l.number) + ": " + msg);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

World parse_label(const Line& l, std::string_view s) {
  s = trim(s);
  if (s.size() < 2 || s[0] != 'w') fail(l, "bad world label '" + std::string(s) + "'");
  World w = 0;
  for (char c : s.substr(1)) {
    if (!std::isdigit(static_cast<unsigned char>(c))) fail(l, "bad world label '" + std::string(s) + "'");
    w = w * 10 + static_cast<World>(c - '0');
  }
  return w;
}

Sign parse_sign_or_fail(const Line& l, std::string_view s) {
  auto sign = parse_sign(trim(s));
  if (!sign) fail(l, "bad sign '" + std::string(trim(s)) + "'");
  return *sign;
}

class Reader {
 public:
  explicit Reader(std::vector<Line> lines) : lines_(std::move(lines)) {}

  ProofTree read() {
    if (lines_.empty()) throw std::invalid_argument("empty proof text");
    ProofTree t;
    node(0, t.root);
    if (pos_ != lines_.size()) fail(lines_[pos_], "unexpected indentation");
    return t;
  }

 private:
  static bool is_leaf(std::string_view body) {
    return body.starts_with(kClosed) || body == kOpen;
  }

  void node(std::size_t depth, ProofNode& n) {
    while (pos_ < lines_.size() && lines_[pos_].depth == depth && !is_leaf(lines_[pos_].body))
      n.items.push_back(item(lines_[pos_++]));
    if (pos_ < lines_.size() && lines_[pos_].depth == depth) {
      const Line& l = lines_[pos_++];
      if (l.body == kOpen) {
        n.open = true;
      } else {
        std::string_view inner = trim(l.body.substr(kClosed.size()));
        if (inner.size() < 2 || inner.front() != '(' || inner.back() != ')') fail(l, "bad closure mark");
        inner = inner.substr(1, inner.size() - 2);
        std::size_t c1 = inner.find(','), c2 = inner.rfind(',');
        if (c1 == std::string_view::npos || c1 == c2) fail(l, "closure needs world, formula and sign");
        n.closure = ClosureWitness{parse_label(l, inner.substr(0, c1)),
                                   parse_formula(inner.substr(c1 + 1, c2 - c1 - 1)),
                                   parse_sign_or_fail(l, inner.substr(c2 + 1))};
      }
      return;
    }
    while (pos_ < lines_.size() && lines_[pos_].depth == depth + 1) {
      n.children.emplace_back();
      node(depth + 1, n.children.back());
    }
  }

  static Item item(const Line& l) {
    std::string_view b = l.body;
    std::size_t colon = b.find(':');
    if (colon == std::string_view::npos) {
      std::size_t r = b.find(" R ");
      if (r == std::string_view::npos) fail(l, "expected 'wi: formula ; sign' or 'wi R wj'");
      return RelAtom{parse_label(l, b.substr(0, r)), parse_label(l, b.substr(r + 3))};
    }
    std::size_t semi = b.rfind(';');
    if (semi == std::string_view::npos || semi < colon) fail(l, "missing '; sign'");
    return SignedFormula{parse_label(l, b.substr(0, colon)),
                         parse_formula(b.substr(colon + 1, semi - colon - 1)),
                         parse_sign_or_fail(l, b.substr(semi + 1))};
  }

  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string format_proof(const ProofTree& t) {
  std::ostringstream os;
  write(os, t.root, 0);
  return os.str();
}

ProofTree parse_proof(std::string_view text) {
  std::vector<Line> lines;
  std::size_t start = 0, number = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++number;
    if (trim(raw).empty()) continue;
    std::size_t spaces = 0;
    while (spaces < raw.size() && raw[spaces] == ' ') ++spaces;
    Line l{spaces / 2, trim(raw), number};
    if (spaces % 2) fail(l, "indentation must be a multiple of two spaces");
    lines.push_back(l);
  }
  return Reader(std::move(lines)).read();
}

}  // namespace bdm

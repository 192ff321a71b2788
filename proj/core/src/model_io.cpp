#include <cctype>
#include <set>
#include <sstream>

#include "bdm/semantics.hpp"

namespace bdm {

ModelParseError::ModelParseError(std::size_t line, const std::string& msg)
    : std::runtime_error("model line " + std::to_string(line) + ": " + msg), line_(line) {}

namespace {

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_world_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '\'') return false;
  return true;
}

bool valid_atom_name(std::string_view s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

}  // namespace

Model parse_model(std::string_view text) {
  std::optional<Model> model;
  std::set<std::string> seen_atoms;
  bool seen_edges = false;
  std::size_t lineno = 0;

  auto world = [&](std::string_view name) -> World {
    auto w = model->frame().find(name);
    if (!w) throw ModelParseError(lineno, "unknown world '" + std::string(name) + "'");
    return *w;
  };

  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    ++lineno;
    if (line.empty() || line.front() == '#') continue;

    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) throw ModelParseError(lineno, "expected 'key: ...'");
    std::string_view key = trim(line.substr(0, colon));
    std::vector<std::string> items = split_ws(line.substr(colon + 1));

    if (key == "worlds") {
      if (model) throw ModelParseError(lineno, "duplicate 'worlds' line");
      if (items.empty()) throw ModelParseError(lineno, "a model needs at least one world");
      std::set<std::string> names;
      for (const auto& n : items) {
        if (!valid_world_name(n)) throw ModelParseError(lineno, "bad world name '" + n + "'");
        if (!names.insert(n).second) throw ModelParseError(lineno, "duplicate world '" + n + "'");
      }
      model.emplace(Frame(items));
      continue;
    }
    if (!model) throw ModelParseError(lineno, "'worlds' line must come first");

    if (key == "edges") {
      if (seen_edges) throw ModelParseError(lineno, "duplicate 'edges' line");
      seen_edges = true;
      Frame frame = model->frame();
      for (const auto& e : items) {
        std::size_t arrow = e.find("->");
        if (arrow == std::string::npos) throw ModelParseError(lineno, "bad edge '" + e + "'");
        frame.add_edge(world(e.substr(0, arrow)), world(e.substr(arrow + 2)));
      }
      Model rebuilt(frame);
      for (const auto& [atom, vals] : model->valuation())
        for (World w = 0; w < vals.size(); ++w) rebuilt.set(atom, w, vals[w]);
      model = std::move(rebuilt);
      continue;
    }

    if (key.starts_with("val")) {
      std::string atom(trim(key.substr(3)));
      if (key.size() == 3 || !std::isspace(static_cast<unsigned char>(key[3])) ||
          !valid_atom_name(atom))
        throw ModelParseError(lineno, "bad atom name in '" + std::string(key) + "'");
      if (!seen_atoms.insert(atom).second)
        throw ModelParseError(lineno, "duplicate line for atom '" + atom + "'");
      std::set<World> assigned;
      for (const auto& item : items) {
        std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq + 2 != item.size())
          throw ModelParseError(lineno, "bad assignment '" + item + "'");
        World w = world(item.substr(0, eq));
        if (!assigned.insert(w).second)
          throw ModelParseError(lineno, "world assigned twice in '" + item + "'");
        char c = item[eq + 1];
        if (c != 'T' && c != 'F' && c != 'B' && c != 'N')
          throw ModelParseError(lineno, "truth value must be T, F, B or N in '" + item + "'");
        model->set(atom, w, TruthState::from_letter(c));
      }
      if (items.empty()) model->set(atom, 0, TruthState::N());
      continue;
    }
    throw ModelParseError(lineno, "unknown key '" + std::string(key) + "'");
  }
  if (!model) throw ModelParseError(lineno, "missing 'worlds' line");
  return *std::move(model);
}

std::string format_model(const Model& m) {
  const Frame& f = m.frame();
  std::ostringstream os;
  os << "worlds:";
  for (World w = 0; w < f.size(); ++w) os << ' ' << f.name(w);
  os << "\nedges:";
  for (auto [a, b] : f.edges()) os << ' ' << f.name(a) << "->" << f.name(b);
  os << '\n';
  for (const auto& [atom, vals] : m.valuation()) {
    os << "val " << atom << ':';
    for (World w = 0; w < vals.size(); ++w) os << ' ' << f.name(w) << '=' << vals[w].letter();
    os << '\n';
  }
  return os.str();
}

}  // namespace bdm

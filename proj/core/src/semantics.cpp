#include "bdm/semantics.hpp"

#include <algorithm>

namespace bdm {

char TruthState::letter() const {
  if (sup_t) return sup_f ? 'B' : 'T';
  return sup_f ? 'F' : 'N';
}

TruthState TruthState::from_letter(char c) {
  switch (c) {
    case 'T': return T();
    case 'F': return F();
    case 'B': return B();
    case 'N': return N();
  }
  throw std::invalid_argument(std::string("not a truth value letter: ") + c);
}

// ---------------------------------------------------------------- Frame

Frame::Frame(std::size_t worlds) : succ_(worlds) {
  if (worlds == 0) throw std::invalid_argument("a frame needs at least one world");
  names_.reserve(worlds);
  for (std::size_t i = 0; i < worlds; ++i) names_.push_back("w" + std::to_string(i));
}

Frame::Frame(std::vector<std::string> names) : names_(std::move(names)), succ_(names_.size()) {
  if (names_.empty()) throw std::invalid_argument("a frame needs at least one world");
}

void Frame::check(World w) const {
  if (w >= succ_.size()) throw UnknownWorld("unknown world index " + std::to_string(w));
}

void Frame::add_edge(World from, World to) {
  check(from);
  check(to);
  auto& row = succ_[from];
  auto it = std::lower_bound(row.begin(), row.end(), to);
  if (it == row.end() || *it != to) row.insert(it, to);
}

bool Frame::related(World from, World to) const {
  check(from);
  check(to);
  return std::binary_search(succ_[from].begin(), succ_[from].end(), to);
}

const std::vector<World>& Frame::successors(World w) const {
  check(w);
  return succ_[w];
}

std::vector<World> Frame::successors(World w, bool strict) const {
  check(w);
  std::vector<World> out = succ_[w];
  if (strict) std::erase(out, w);
  return out;
}

std::vector<std::pair<World, World>> Frame::edges() const {
  std::vector<std::pair<World, World>> out;
  for (World w = 0; w < succ_.size(); ++w)
    for (World v : succ_[w]) out.emplace_back(w, v);
  return out;
}

std::size_t Frame::edge_count() const {
  std::size_t n = 0;
  for (const auto& row : succ_) n += row.size();
  return n;
}

const std::string& Frame::name(World w) const {
  check(w);
  return names_[w];
}

std::optional<World> Frame::find(std::string_view name) const {
  for (World w = 0; w < names_.size(); ++w)
    if (names_[w] == name) return w;
  return std::nullopt;
}

Frame Frame::from_mask(std::size_t n, std::uint64_t mask) {
  if (n > 8) throw std::invalid_argument("bit-mask frames hold at most 8 worlds");
  Frame f(n);
  for (World i = 0; i < n; ++i)
    for (World j = 0; j < n; ++j)
      if ((mask >> (i * n + j)) & 1u) f.succ_[i].push_back(j);
  return f;
}

std::uint64_t Frame::mask() const {
  const std::size_t n = size();
  if (n > 8) throw std::invalid_argument("bit-mask frames hold at most 8 worlds");
  std::uint64_t m = 0;
  for (World i = 0; i < n; ++i)
    for (World j : succ_[i]) m |= std::uint64_t{1} << (i * n + j);
  return m;
}

bool Frame::same_relation(const Frame& other) const { return succ_ == other.succ_; }

// ---------------------------------------------------------------- Model

Model::Model(Frame frame) : frame_(std::move(frame)) {}

void Model::set(const std::string& atom, World w, TruthState v) {
  if (w >= frame_.size()) throw UnknownWorld("unknown world index " + std::to_string(w));
  auto it = val_.find(atom);
  if (it == val_.end()) it = val_.emplace(atom, std::vector<TruthState>(frame_.size())).first;
  it->second[w] = v;
}

TruthState Model::value(std::string_view atom, World w) const {
  if (w >= frame_.size()) throw UnknownWorld("unknown world index " + std::to_string(w));
  auto it = val_.find(atom);
  return it == val_.end() ? TruthState::N() : it->second[w];
}

std::vector<std::string> Model::atoms() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : val_) out.push_back(k);
  return out;
}

bool Model::same_as(const Model& other) const {
  if (!frame_.same_relation(other.frame_)) return false;
  auto covers = [](const Model& a, const Model& b) {
    for (const auto& [atom, vals] : a.val_)
      for (World w = 0; w < vals.size(); ++w)
        if (vals[w] != b.value(atom, w)) return false;
    return true;
  };
  return covers(*this, other) && covers(other, *this);
}

// ---------------------------------------------------------------- programs

std::optional<std::uint32_t> FormulaProgram::find(const Formula& f) const {
  auto it = index_.find(f);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t FormulaProgram::add(const Formula& f) {
  if (auto it = index_.find(f); it != index_.end()) return it->second;
  Instr ins{f.op()};
  if (f.op() == Op::Var) {
    auto [it, fresh] = atom_index_.emplace(f.name(), static_cast<std::uint32_t>(atoms_.size()));
    if (fresh) atoms_.push_back(f.name());
    ins.a = it->second;
  } else {
    ins.a = add(f.child(0));
    if (is_binary(f.op())) ins.b = add(f.child(1));
  }
  auto id = static_cast<std::uint32_t>(instrs_.size());
  instrs_.push_back(ins);
  formulas_.push_back(f);
  index_.emplace(f, id);
  return id;
}

// ---------------------------------------------------------------- masks

namespace {

inline bool subset(const std::uint64_t* s, const std::uint64_t* a, std::size_t words) {
  for (std::size_t k = 0; k < words; ++k)
    if (s[k] & ~a[k]) return false;
  return true;
}

inline bool meets(const std::uint64_t* s, const std::uint64_t* a, std::size_t words) {
  for (std::size_t k = 0; k < words; ++k)
    if (s[k] & a[k]) return true;
  return false;
}

// Either no world of s is in a, or all of them are.
inline bool uniform(const std::uint64_t* s, const std::uint64_t* a, std::size_t words) {
  return !meets(s, a, words) || subset(s, a, words);
}

inline bool bit(const std::uint64_t* m, World w) { return (m[w >> 6] >> (w & 63)) & 1u; }
inline void set_bit(std::uint64_t* m, World w) { m[w >> 6] |= std::uint64_t{1} << (w & 63); }

}  // namespace

MaskEvaluator::MaskEvaluator(const Frame& frame, EvalOptions opts)
    : n_(frame.size()), words_((frame.size() + 63) / 64) {
  succ_.assign(n_ * words_, 0);
  strict_.assign(n_ * words_, 0);
  for (World w = 0; w < n_; ++w) {
    for (World v : frame.successors(w)) {
      set_bit(&succ_[w * words_], v);
      if (v != w) set_bit(&strict_[w * words_], v);
    }
  }
  if (opts.strict_bbox) bbox_rows_strict_ = true;
  scratch_.assign(words_, 0);
}

void MaskEvaluator::clear_atoms(std::size_t atom_count) { atoms_.assign(atom_count * 2 * words_, 0); }

void MaskEvaluator::set_atom(std::uint32_t atom, World w, TruthState v) {
  if (w >= n_) throw UnknownWorld("unknown world index " + std::to_string(w));
  if ((atom + 1) * 2 * words_ > atoms_.size()) atoms_.resize((atom + 1) * 2 * words_, 0);
  std::uint64_t* t = &atoms_[atom * 2 * words_];
  std::uint64_t* f = t + words_;
  const std::uint64_t b = std::uint64_t{1} << (w & 63);
  t[w >> 6] = v.sup_t ? (t[w >> 6] | b) : (t[w >> 6] & ~b);
  f[w >> 6] = v.sup_f ? (f[w >> 6] | b) : (f[w >> 6] & ~b);
}

void MaskEvaluator::load_atoms(const Model& m, const FormulaProgram& prog) {
  clear_atoms(prog.atoms().size());
  for (std::uint32_t a = 0; a < prog.atoms().size(); ++a) {
    auto it = m.valuation().find(prog.atoms()[a]);
    if (it == m.valuation().end()) continue;
    for (World w = 0; w < n_; ++w) set_atom(a, w, it->second[w]);
  }
}

bool MaskEvaluator::truth(std::uint32_t node, World w) const {
  if (w >= n_) throw UnknownWorld("unknown world index " + std::to_string(w));
  return bit(truth_mask(node), w);
}

bool MaskEvaluator::falsity(std::uint32_t node, World w) const {
  if (w >= n_) throw UnknownWorld("unknown world index " + std::to_string(w));
  return bit(falsity_mask(node), w);
}

void MaskEvaluator::run(const FormulaProgram& prog, std::size_t from) {
  const std::size_t W = words_;
  data_.resize(prog.size() * 2 * W);
  const auto& code = prog.instrs();
  for (std::size_t i = from; i < code.size(); ++i) {
    const auto& ins = code[i];
    std::uint64_t* t = &data_[i * 2 * W];
    std::uint64_t* f = t + W;
    std::fill(t, t + 2 * W, 0);
    if (ins.op == Op::Var) {
      if ((ins.a + 1) * 2 * W <= atoms_.size()) std::copy_n(&atoms_[ins.a * 2 * W], 2 * W, t);
      continue;
    }
    const std::uint64_t* at = &data_[ins.a * 2 * W];
    const std::uint64_t* af = at + W;
    switch (ins.op) {
      case Op::Neg:
        std::copy_n(af, W, t);
        std::copy_n(at, W, f);
        continue;
      case Op::And:
      case Op::Or: {
        const std::uint64_t* bt = &data_[ins.b * 2 * W];
        const std::uint64_t* bf = bt + W;
        for (std::size_t k = 0; k < W; ++k) {
          if (ins.op == Op::And) {
            t[k] = at[k] & bt[k];
            f[k] = af[k] | bf[k];
          } else {
            t[k] = at[k] | bt[k];
            f[k] = af[k] & bf[k];
          }
        }
        continue;
      }
      default:
        break;
    }
    if (ins.op == Op::Tri)
      for (std::size_t k = 0; k < W; ++k) scratch_[k] = at[k] | af[k];
    for (World w = 0; w < n_; ++w) {
      const std::uint64_t* all = &succ_[w * W];
      const std::uint64_t* strict = &strict_[w * W];
      bool tv = false, fv = false;
      switch (ins.op) {
        case Op::Box:
          tv = subset(all, at, W);
          fv = meets(all, af, W);
          break;
        case Op::BBox: {
          const std::uint64_t* s = bbox_rows_strict_ ? strict : all;
          tv = subset(s, at, W) && uniform(s, af, W);
          fv = meets(s, af, W) || !uniform(s, at, W);
          break;
        }
        case Op::Ign:
          tv = bit(at, w) && subset(strict, af, W) && uniform(strict, at, W);
          fv = bit(af, w) || meets(strict, at, W) || !uniform(strict, af, W);
          break;
        case Op::Tri:
          tv = uniform(all, at, W) && uniform(all, af, W) && subset(all, scratch_.data(), W);
          fv = !uniform(all, at, W) || !uniform(all, af, W) ||
               (meets(all, at, W) && meets(all, af, W));
          break;
        default:
          break;
      }
      if (tv) set_bit(t, w);
      if (fv) set_bit(f, w);
    }
  }
}

// ---------------------------------------------------------------- evaluation

Evaluator::Evaluator(const Model& m, EvalOptions opts) : model_(m), masks_(m.frame(), opts) {}

TruthState Evaluator::eval(World w, const Formula& f) {
  if (w >= model_.size()) throw UnknownWorld("unknown world index " + std::to_string(w));
  std::size_t atoms_before = prog_.atoms().size();
  std::uint32_t id = prog_.add(f);
  if (prog_.atoms().size() != atoms_before) {
    for (std::uint32_t a = static_cast<std::uint32_t>(atoms_before); a < prog_.atoms().size(); ++a)
      for (World v = 0; v < model_.size(); ++v) masks_.set_atom(a, v, model_.value(prog_.atoms()[a], v));
  }
  if (prog_.size() > computed_) {
    masks_.run(prog_, computed_);
    computed_ = prog_.size();
  }
  return masks_.state(id, w);
}

TruthState eval(const Model& m, World w, const Formula& f, EvalOptions opts) {
  return Evaluator(m, opts).eval(w, f);
}

bool holds_sequent_at(const Model& m, World w, const Sequent& s) {
  Evaluator ev(m);
  return !ev.eval(w, s.lhs).sup_t || ev.eval(w, s.rhs).sup_t;
}

std::vector<World> successors(const Model& m, World w, bool strict) {
  return m.frame().successors(w, strict);
}

Model dual_model(const Model& m) {
  Model d(m.frame());
  for (const auto& [atom, vals] : m.valuation()) {
    for (World w = 0; w < vals.size(); ++w) {
      TruthState v = vals[w];
      if (v.sup_t == v.sup_f) v = {!v.sup_t, !v.sup_f};
      d.set(atom, w, v);
    }
  }
  return d;
}

// ---------------------------------------------------------------- frame classes

namespace {

bool serial(const Frame& f) {
  for (World w = 0; w < f.size(); ++w)
    if (f.successors(w).empty()) return false;
  return true;
}

bool reflexive(const Frame& f) {
  for (World w = 0; w < f.size(); ++w)
    if (!f.related(w, w)) return false;
  return true;
}

bool symmetric(const Frame& f) {
  for (auto [x, y] : f.edges())
    if (!f.related(y, x)) return false;
  return true;
}

bool transitive(const Frame& f) {
  for (auto [x, y] : f.edges())
    for (World z : f.successors(y))
      if (!f.related(x, z)) return false;
  return true;
}

bool euclidean(const Frame& f) {
  for (World x = 0; x < f.size(); ++x)
    for (World y : f.successors(x))
      for (World z : f.successors(x))
        if (!f.related(y, z)) return false;
  return true;
}

// Every edge x->y factors through some z: x->z->y.
bool dense(const Frame& f) {
  for (auto [x, y] : f.edges()) {
    bool found = false;
    for (World z : f.successors(x))
      if (f.related(z, y)) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

bool partial_functional(const Frame& f) {
  for (World w = 0; w < f.size(); ++w)
    if (f.successors(w).size() > 1) return false;
  return true;
}

}  // namespace

bool frame_has(const Frame& f, FrameClass c) {
  switch (c) {
    case FrameClass::Serial: return serial(f);
    case FrameClass::Dense: return dense(f);
    case FrameClass::Reflexive: return reflexive(f);
    case FrameClass::Euclidean: return euclidean(f);
    case FrameClass::Transitive: return transitive(f);
    case FrameClass::Symmetric: return symmetric(f);
    case FrameClass::PartialFunctional: return partial_functional(f);
    case FrameClass::D5: return serial(f) && euclidean(f);
    case FrameClass::S5: return reflexive(f) && euclidean(f);
    case FrameClass::Ddn: return serial(f) && dense(f);
    case FrameClass::F45: return transitive(f) && euclidean(f);
    case FrameClass::D4: return serial(f) && transitive(f);
    case FrameClass::S4: return reflexive(f) && transitive(f);
    case FrameClass::D45: return serial(f) && transitive(f) && euclidean(f);
  }
  return false;
}

std::string_view to_string(FrameClass c) {
  switch (c) {
    case FrameClass::Serial: return "serial";
    case FrameClass::Dense: return "dense";
    case FrameClass::Reflexive: return "reflexive";
    case FrameClass::Euclidean: return "euclidean";
    case FrameClass::Transitive: return "transitive";
    case FrameClass::Symmetric: return "symmetric";
    case FrameClass::PartialFunctional: return "partial-functional";
    case FrameClass::D5: return "D5";
    case FrameClass::S5: return "S5";
    case FrameClass::Ddn: return "Ddn";
    case FrameClass::F45: return "45";
    case FrameClass::D4: return "D4";
    case FrameClass::S4: return "S4";
    case FrameClass::D45: return "D45";
  }
  return "?";
}

}  // namespace bdm

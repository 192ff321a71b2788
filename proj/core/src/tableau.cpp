#include "bdm/tableau.hpp"

#include <algorithm>
#include <unordered_map>

namespace bdm {

namespace detail {

struct FEntry {
  Formula f;
  Op op;
  std::uint32_t a = 0, b = 0;
  std::vector<std::uint32_t> parents;
};

struct FormulaTable {
  std::vector<FEntry> e;
  std::unordered_map<Formula, std::uint32_t> index;
  std::vector<std::uint32_t> modal;

  std::uint32_t intern(const Formula& f) {
    if (auto it = index.find(f); it != index.end()) return it->second;
    FEntry entry{f, f.op(), 0, 0, {}};
    if (f.op() != Op::Var) {
      entry.a = intern(f.child(0));
      if (is_binary(f.op())) entry.b = intern(f.child(1));
    }
    auto id = static_cast<std::uint32_t>(e.size());
    if (f.op() != Op::Var) {
      e[entry.a].parents.push_back(id);
      if (is_binary(f.op()) && entry.b != entry.a) e[entry.b].parents.push_back(id);
    }
    if (is_modal(f.op())) modal.push_back(id);
    e.push_back(std::move(entry));
    index.emplace(f, id);
    return id;
  }
};

namespace {

constexpr std::uint16_t kCutRule = 0xffff;

struct StepLimit {};

Axis axis_of(Sign s) { return (s == Sign::T || s == Sign::TBar) ? Axis::Truth : Axis::Falsity; }

// Rule indices grouped by connective: single-column rules applied during
// propagation, side-premise rules that may demand a cut, and branching rules.
struct RuleIndex {
  std::vector<std::size_t> propagate[8], side[8], branching[8];
  RuleIndex() {
    const auto& t = rule_table();
    for (std::size_t i = 0; i < t.size(); ++i) {
      auto op = static_cast<std::size_t>(t[i].op);
      if (t[i].columns.size() == 1 && !t[i].creates_worlds()) {
        propagate[op].push_back(i);
        if (t[i].side.kind != SideKind::None) side[op].push_back(i);
      } else {
        branching[op].push_back(i);
      }
    }
  }
};

const RuleIndex& rules_by_op() {
  static const RuleIndex idx;
  return idx;
}

}  // namespace

class Engine {
 public:
  explicit Engine(std::uint64_t max_steps) : max_steps_(max_steps) {}

  struct Obligation {
    bool cut;
    std::size_t rule;
    World w;
    std::uint32_t fid;
    Axis axis;
  };

  std::uint64_t steps() const { return steps_; }

  void propagate(Branch& b) {
    const FormulaTable& t = *b.table_;
    while (!b.closed_ && b.processed_ < b.log_.size()) {
      Branch::LogItem it = b.log_[b.processed_++];
      if (it.rel) {
        for (std::uint32_t fid : t.modal) {
          fire(b, it.w, fid);
          if (b.closed_) return;
        }
        continue;
      }
      fire(b, it.w, it.x);
      for (std::uint32_t p : t.e[it.x].parents) {
        if (b.closed_) return;
        fire(b, it.w, p);
      }
      for (std::size_t k = 0; k < b.pred_[it.w].size(); ++k) {
        World u = b.pred_[it.w][k];
        for (std::uint32_t p : t.e[it.x].parents) {
          if (b.closed_) return;
          if (is_modal(t.e[p].op)) fire(b, u, p);
        }
      }
    }
  }

  std::optional<Obligation> next_obligation(const Branch& b) const {
    const FormulaTable& t = *b.table_;
    const auto& rules = rule_table();
    const auto& idx = rules_by_op();
    const std::size_t n = b.world_count(), m = t.e.size();

    for (World w = 0; w < n; ++w) {
      for (std::uint32_t fid = 0; fid < m; ++fid) {
        const std::uint8_t lab = b.labels_[w][fid];
        if (!lab) continue;
        const FEntry& e = t.e[fid];
        for (std::size_t ri : idx.side[static_cast<std::size_t>(e.op)]) {
          const RuleSchema& r = rules[ri];
          if (!((lab >> static_cast<unsigned>(r.main)) & 1u)) continue;
          const Axis ax = axis_of(r.side.sign);
          if (r.side.kind == SideKind::Child) {
            const Sign c = r.columns[0][0].sign;
            if (b.has_id(w, e.a, c) || b.has_id(w, e.b, c)) continue;
            if (!decided(b, w, e.a, ax)) return Obligation{true, 0, w, e.a, ax};
            if (!decided(b, w, e.b, ax)) return Obligation{true, 0, w, e.b, ax};
          } else {
            for (World x : b.succ_[w]) {
              if (r.strict && x == w) continue;
              if (!decided(b, x, e.a, ax)) return Obligation{true, 0, x, e.a, ax};
            }
          }
        }
      }
    }

    for (World w = 0; w < n; ++w) {
      for (std::uint32_t fid = 0; fid < m; ++fid) {
        const std::uint8_t lab = b.labels_[w][fid];
        if (!lab) continue;
        const FEntry& e = t.e[fid];
        for (std::size_t ri : idx.branching[static_cast<std::size_t>(e.op)]) {
          const RuleSchema& r = rules[ri];
          if (!((lab >> static_cast<unsigned>(r.main)) & 1u)) continue;
          Branch::Fired key{static_cast<std::uint16_t>(ri), w, fid, 0};
          if (std::find(b.ledger_.begin(), b.ledger_.end(), key) != b.ledger_.end()) continue;
          if (witnessed(b, r, w, e)) continue;
          return Obligation{false, ri, w, fid, Axis::Truth};
        }
      }
    }
    return std::nullopt;
  }

  std::vector<Branch> expand(const Branch& b, const Obligation& o) {
    ++steps_;
    if (o.cut) {
      std::vector<Branch> out(2, b);
      const Sign yes = o.axis == Axis::Truth ? Sign::T : Sign::F;
      for (auto& c : out) c.ledger_.push_back({kCutRule, o.w, o.fid, static_cast<std::uint32_t>(o.axis)});
      add(out[0], o.w, o.fid, yes);
      add(out[1], o.w, o.fid, complement(yes));
      return out;
    }
    const RuleSchema& r = rule_table()[o.rule];
    std::vector<Branch> out;
    for (const auto& col : r.columns) {
      Branch c = b;
      c.ledger_.push_back({static_cast<std::uint16_t>(o.rule), o.w, o.fid, 0});
      write_column(c, r, col, o.w, o.fid);
      out.push_back(std::move(c));
    }
    return out;
  }

  // Adds one column's conclusions, creating and relating fresh worlds first.
  void write_column(Branch& c, const RuleSchema& r, const std::vector<Conclusion>& col, World w,
                    std::uint32_t fid) {
    (void)r;
    const FEntry& e = c.table_->e[fid];
    std::optional<World> u1, u2;
    for (const auto& k : col) {
      if (k.place == Place::Fresh1 && !u1) u1 = c.new_world();
      if (k.place == Place::Fresh2 && !u2) u2 = c.new_world();
    }
    if (u1) c.relate(w, *u1);
    if (u2) c.relate(w, *u2);
    for (const auto& k : col) {
      World at = k.place == Place::Here ? w : k.place == Place::Fresh1 ? *u1 : *u2;
      add(c, at, part(e, k.part), k.sign);
    }
  }

  void add(Branch& b, World w, std::uint32_t fid, Sign s) {
    if (b.add(w, fid, s) && ++steps_ > max_steps_) throw StepLimit{};
  }

  static std::uint32_t part(const FEntry& e, Part p) { return p == Part::Right ? e.b : e.a; }

 private:
  static bool decided(const Branch& b, World w, std::uint32_t fid, Axis ax) {
    const std::uint8_t lab = b.labels_[w][fid];
    return ax == Axis::Truth ? (lab & 0b0101) != 0 : (lab & 0b1010) != 0;
  }

  // Some column of a branching rule already holds on the branch, with fresh
  // worlds instantiated by existing successors.
  static bool witnessed(const Branch& b, const RuleSchema& r, World w, const FEntry& e) {
    for (const auto& col : r.columns) {
      bool ok = true;
      for (const auto& k : col)
        if (k.place == Place::Here && !b.has_id(w, part(e, k.part), k.sign)) ok = false;
      if (!ok) continue;
      auto exists = [&](Place place) {
        bool needed = false;
        for (const auto& k : col) needed |= k.place == place;
        if (!needed) return true;
        for (World x : b.succ_[w]) {
          if (r.strict && x == w) continue;
          bool all = true;
          for (const auto& k : col)
            if (k.place == place && !b.has_id(x, part(e, k.part), k.sign)) all = false;
          if (all) return true;
        }
        return false;
      };
      if (exists(Place::Fresh1) && exists(Place::Fresh2)) return true;
    }
    return false;
  }

  // Applies every single-column rule whose main premise is (w, fid).
  void fire(Branch& b, World w, std::uint32_t fid) {
    const std::uint8_t lab = b.labels_[w][fid];
    if (!lab) return;
    const FEntry& e = b.table_->e[fid];
    const auto& rules = rule_table();
    for (std::size_t ri : rules_by_op().propagate[static_cast<std::size_t>(e.op)]) {
      const RuleSchema& r = rules[ri];
      if (!((lab >> static_cast<unsigned>(r.main)) & 1u)) continue;
      const auto& col = r.columns[0];
      switch (r.side.kind) {
        case SideKind::None:
          for (const auto& k : col) {
            if (k.place == Place::Here) {
              add(b, w, part(e, k.part), k.sign);
            } else {
              for (World x : b.succ_[w])
                if (!(r.strict && x == w)) add(b, x, e.a, k.sign);
            }
            if (b.closed_) return;
          }
          break;
        case SideKind::Child:
          if (b.has_id(w, e.a, r.side.sign)) add(b, w, e.b, col[0].sign);
          if (!b.closed_ && b.has_id(w, e.b, r.side.sign)) add(b, w, e.a, col[0].sign);
          break;
        case SideKind::Succ: {
          bool any = false;
          for (World x : b.succ_[w])
            if (!(r.strict && x == w) && b.has_id(x, e.a, r.side.sign)) any = true;
          if (any)
            for (World y : b.succ_[w])
              if (!(r.strict && y == w)) add(b, y, e.a, col[0].sign);
          break;
        }
      }
      if (b.closed_) return;
    }
  }

  std::uint64_t max_steps_;
  std::uint64_t steps_ = 0;
};

}  // namespace detail

// ------------------------------------------------------------------ Branch

namespace {

void reject_unsupported(const Formula& f) {
  for (const auto& g : subformulas(f)) {
    if (g.op() == Op::Box)
      throw UnsupportedFormula("the calculus has no rules for [] (found in '" + to_string(f) +
                               "'); use the brute-force search instead");
    if (g.op() == Op::Tri)
      throw UnsupportedFormula("the calculus has no rules for Tri (found in '" + to_string(f) +
                               "'); use the brute-force search instead");
  }
}

}  // namespace

Branch::Branch(const std::vector<SignedFormula>& signed_formulas,
               const std::vector<RelAtom>& relations) {
  auto table = std::make_shared<detail::FormulaTable>();
  World top = 0;
  for (const auto& s : signed_formulas) {
    table->intern(s.formula);
    top = std::max(top, s.world);
  }
  for (const auto& r : relations) top = std::max({top, r.from, r.to});
  table_ = table;
  for (World w = 0; w <= top; ++w) new_world();
  for (const auto& r : relations) relate(r.from, r.to);
  for (const auto& s : signed_formulas) add(s.world, table->index.at(s.formula), s.sign);
}

Branch Branch::root(const Sequent& s) {
  reject_unsupported(s.lhs);
  reject_unsupported(s.rhs);
  return Branch({{0, s.lhs, Sign::T}, {0, s.rhs, Sign::TBar}});
}

std::uint32_t Branch::id_of(const Formula& f) const {
  auto it = table_->index.find(f);
  if (it == table_->index.end())
    throw std::invalid_argument("'" + to_string(f) + "' is not a subformula of the branch");
  return it->second;
}

bool Branch::has(World w, const Formula& f, Sign s) const {
  if (w >= world_count()) return false;
  auto it = table_->index.find(f);
  return it != table_->index.end() && has_id(w, it->second, s);
}

bool Branch::related(World from, World to) const {
  if (from >= world_count()) return false;
  const auto& row = succ_[from];
  return std::find(row.begin(), row.end(), to) != row.end();
}

const std::vector<World>& Branch::successors(World w) const {
  if (w >= world_count()) throw UnknownWorld("unknown label w" + std::to_string(w));
  return succ_[w];
}

std::vector<Item> Branch::items(std::size_t from) const {
  std::vector<Item> out;
  if (from >= log_.size()) return out;
  out.reserve(log_.size() - from);
  for (std::size_t i = from; i < log_.size(); ++i) {
    const auto& it = log_[i];
    if (it.rel) out.emplace_back(RelAtom{it.w, it.x});
    else out.emplace_back(SignedFormula{it.w, table_->e[it.x].f, it.sign});
  }
  return out;
}

std::optional<ClosureWitness> Branch::closure() const {
  if (!closed_) return std::nullopt;
  return ClosureWitness{closed_->w, table_->e[closed_->x].f, closed_->sign};
}

namespace {

std::uint32_t instance_extra(const RuleInstance& inst) {
  std::uint32_t extra = 0;
  if (!inst.rule) return static_cast<std::uint32_t>(inst.axis);
  if (inst.target) extra |= *inst.target + 1;
  if (inst.via) extra |= (*inst.via + 1) << 12;
  if (inst.side == Part::Right) extra |= 1u << 24;
  return extra;
}

}  // namespace

bool Branch::in_ledger(const RuleInstance& inst) const {
  auto it = table_->index.find(inst.formula);
  if (it == table_->index.end()) return false;
  std::uint16_t rule = inst.rule ? static_cast<std::uint16_t>(*inst.rule) : detail::kCutRule;
  Fired key{rule, inst.world, it->second, 0};
  const RuleSchema* r = inst.rule ? &rule_table()[*inst.rule] : nullptr;
  // Branching rules and cuts are recorded by the search without details.
  if (!r || !r->creates_worlds()) key.extra = instance_extra(inst);
  return std::find(ledger_.begin(), ledger_.end(), key) != ledger_.end();
}

bool Branch::complete() const {
  if (closed_) return false;
  Branch copy = *this;
  detail::Engine eng(UINT64_MAX);
  const std::size_t before = copy.log_.size();
  eng.propagate(copy);
  if (copy.closed_ || copy.log_.size() != before) return false;
  return !eng.next_obligation(copy).has_value();
}

bool Branch::add(World w, std::uint32_t fid, Sign s) {
  if (has_id(w, fid, s)) return false;
  labels_[w][fid] |= static_cast<std::uint8_t>(1u << static_cast<unsigned>(s));
  log_.push_back({false, w, fid, s});
  if (!closed_ && has_id(w, fid, complement(s))) {
    Sign plain = (s == Sign::T || s == Sign::F) ? s : complement(s);
    closed_ = LogItem{false, w, fid, plain};
  }
  return true;
}

bool Branch::relate(World from, World to) {
  if (related(from, to)) return false;
  succ_[from].push_back(to);
  pred_[to].push_back(from);
  log_.push_back({true, from, to, Sign::T});
  return true;
}

World Branch::new_world() {
  labels_.emplace_back(table_->e.size(), 0);
  succ_.emplace_back();
  pred_.emplace_back();
  return static_cast<World>(succ_.size() - 1);
}

std::optional<ClosureWitness> is_closed(const Branch& b) { return b.closure(); }

// ------------------------------------------------------------------ apply_rule

std::vector<Branch> apply_rule(const Branch& b, const RuleInstance& inst) {
  if (inst.world >= b.world_count()) throw std::invalid_argument("unknown world label");
  const std::uint32_t fid = b.id_of(inst.formula);
  if (b.in_ledger(inst)) throw std::invalid_argument("rule instance already fired on this branch");
  detail::Engine eng(UINT64_MAX);
  const World w = inst.world;

  if (!inst.rule) {
    detail::Engine::Obligation o{true, 0, w, fid, inst.axis};
    return eng.expand(b, o);
  }

  const RuleSchema& r = rule_table()[*inst.rule];
  const auto& e = b.table_->e[fid];
  if (e.op != r.op) throw std::invalid_argument("rule does not match the main connective");
  if (!b.has_id(w, fid, r.main)) throw std::invalid_argument("main premise is not on the branch");

  if (r.columns.size() > 1 || r.creates_worlds()) {
    detail::Engine::Obligation o{false, *inst.rule, w, fid, Axis::Truth};
    return eng.expand(b, o);
  }

  auto successor = [&](std::optional<World> x, const char* what) {
    if (!x || !b.related(w, *x) || (r.strict && *x == w))
      throw std::invalid_argument(std::string("missing or invalid ") + what + " world");
    return *x;
  };

  Branch out = b;
  const auto& col = r.columns[0];
  switch (r.side.kind) {
    case SideKind::None:
      for (const auto& k : col) {
        if (k.place == Place::Here) out.add(w, detail::Engine::part(e, k.part), k.sign);
        else out.add(successor(inst.target, "target"), e.a, k.sign);
      }
      break;
    case SideKind::Child: {
      if (inst.side != Part::Left && inst.side != Part::Right)
        throw std::invalid_argument("side premise must name the left or right child");
      const std::uint32_t ci = inst.side == Part::Left ? e.a : e.b;
      const std::uint32_t cj = inst.side == Part::Left ? e.b : e.a;
      if (!b.has_id(w, ci, r.side.sign)) throw std::invalid_argument("side premise is not on the branch");
      out.add(w, cj, col[0].sign);
      break;
    }
    case SideKind::Succ: {
      const World x = successor(inst.via, "side-premise");
      if (!b.has_id(x, e.a, r.side.sign)) throw std::invalid_argument("side premise is not on the branch");
      out.add(successor(inst.target, "target"), e.a, col[0].sign);
      break;
    }
  }
  out.ledger_.push_back(
      {static_cast<std::uint16_t>(*inst.rule), w, fid, instance_extra(inst)});
  return {std::move(out)};
}

// ------------------------------------------------------------------ search

namespace {

class Search {
 public:
  Search(const ProverOptions& opts, bool stop_on_open, std::vector<Branch>* terminals)
      : eng_(opts.max_steps), record_(opts.record_tree), stop_(stop_on_open), terminals_(terminals) {}

  // Returns true when every branch below closes.
  bool explore(Branch b, std::size_t start, ProofNode& node) {
    eng_.propagate(b);
    ++stats.branches;
    stats.max_worlds = std::max(stats.max_worlds, b.world_count());
    if (record_) node.items = b.items(start);
    if (auto c = b.closure()) {
      node.closure = c;
      if (terminals_) terminals_->push_back(std::move(b));
      return true;
    }
    auto obligation = eng_.next_obligation(b);
    if (!obligation) {
      node.open = true;
      if (!open) open = b;
      if (terminals_) terminals_->push_back(std::move(b));
      return false;
    }
    const std::size_t end = b.item_count();
    auto kids = eng_.expand(b, *obligation);
    node.children.reserve(kids.size());
    bool closed = true;
    for (auto& k : kids) {
      node.children.emplace_back();
      if (!explore(std::move(k), end, node.children.back())) {
        closed = false;
        if (stop_) return false;
      }
    }
    return closed;
  }

  std::uint64_t steps() const { return eng_.steps(); }

  ProofStats stats;
  std::optional<Branch> open;

 private:
  detail::Engine eng_;
  bool record_;
  bool stop_;
  std::vector<Branch>* terminals_;
};

PointedModel read_model(const Branch& b) {
  Frame frame(b.world_count());
  for (World w = 0; w < b.world_count(); ++w)
    for (World v : b.successors(w)) frame.add_edge(w, v);
  Model m(frame);
  for (const auto& it : b.items()) {
    const auto* s = std::get_if<SignedFormula>(&it);
    if (!s || s->formula.op() != Op::Var) continue;
    const World w = s->world;
    const std::string& p = s->formula.name();
    m.set(p, w, {b.has(w, s->formula, Sign::T), b.has(w, s->formula, Sign::F)});
  }
  return PointedModel{std::move(m), 0};
}

void verify(const Branch& b, const PointedModel& pm) {
  Evaluator ev(pm.model);
  for (const auto& it : b.items()) {
    const auto* s = std::get_if<SignedFormula>(&it);
    if (!s) continue;
    const TruthState v = ev.eval(s->world, s->formula);
    bool ok = false;
    switch (s->sign) {
      case Sign::T: ok = v.sup_t; break;
      case Sign::F: ok = v.sup_f; break;
      case Sign::TBar: ok = !v.sup_t; break;
      case Sign::FBar: ok = !v.sup_f; break;
    }
    if (!ok)
      throw RealizationError("extracted model violates w" + std::to_string(s->world) + ": " +
                             to_string(s->formula) + " ; " + std::string(to_string(s->sign)) +
                             " (value " + v.letter() + ")");
  }
}

}  // namespace

PointedModel realize(const Branch& b) {
  if (b.closure()) throw std::invalid_argument("cannot realize a closed branch");
  if (!b.complete()) throw std::invalid_argument("cannot realize an incomplete branch");
  PointedModel pm = read_model(b);
  verify(b, pm);
  return pm;
}

Verdict prove(const Sequent& s, const ProverOptions& opts) {
  Branch root = Branch::root(s);
  Search search(opts, true, nullptr);
  Verdict v;
  bool closed = false;
  try {
    closed = search.explore(std::move(root), 0, v.tree.root);
  } catch (const detail::StepLimit&) {
    throw ResourceLimitExceeded("proof search exceeded " + std::to_string(opts.max_steps) + " steps",
                                format_proof(v.tree));
  }
  v.stats = search.stats;
  v.stats.steps = search.steps();
  v.proved = closed;
  if (!closed) {
    const Branch& open = *search.open;
    PointedModel pm = read_model(open);
    verify(open, pm);
    if (holds_sequent_at(pm.model, pm.point, s))
      throw RealizationError("extracted model does not refute '" + to_string(s) + "'");
    v.countermodel = Countermodel{std::move(pm), open};
  }
  return v;
}

std::vector<Branch> saturate(const Branch& b, const ProverOptions& opts) {
  std::vector<Branch> out;
  Search search(opts, false, &out);
  ProofNode scratch;
  try {
    search.explore(b, b.item_count(), scratch);
  } catch (const detail::StepLimit&) {
    throw ResourceLimitExceeded("saturation exceeded " + std::to_string(opts.max_steps) + " steps",
                                format_proof(ProofTree{scratch}));
  }
  return out;
}

}  // namespace bdm

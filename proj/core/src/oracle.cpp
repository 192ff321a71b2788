#include "bdm/oracle.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace bdm {

std::uint64_t valuation_count(std::size_t worlds, std::size_t atoms) {
  const std::size_t pairs = worlds * atoms;
  if (pairs >= 32) return UINT64_MAX;
  return std::uint64_t{1} << (2 * pairs);
}

// ---------------------------------------------------------------- valuations

ValuationStream::ValuationStream(const Frame& frame, std::vector<std::string> atoms,
                                 std::uint64_t cap)
    : frame_(frame), atoms_(std::move(atoms)), n_(frame.size()) {
  total_ = valuation_count(n_, atoms_.size());
  if (total_ > cap)
    throw BudgetExceeded("valuation count 4^" + std::to_string(n_ * atoms_.size()) +
                         " exceeds the cap of " + std::to_string(cap));
  digits_.assign(n_ * atoms_.size(), 0);
}

bool ValuationStream::next() {
  if (!started_) {
    started_ = true;
    changed_ = digits_.empty() ? 0 : digits_.size() - 1;
    return true;
  }
  for (std::size_t k = 0; k < digits_.size(); ++k) {
    if (++digits_[k] < 4) {
      changed_ = k;
      return true;
    }
    digits_[k] = 0;
  }
  return false;
}

Model ValuationStream::model() const {
  Model m(frame_);
  for (std::size_t a = 0; a < atoms_.size(); ++a)
    for (World w = 0; w < n_; ++w) m.set(atoms_[a], w, value(a, w));
  return m;
}

std::vector<Model> valuations_on(const Frame& frame, const std::vector<std::string>& atoms,
                                 std::uint64_t cap) {
  ValuationStream s(frame, atoms, cap);
  std::vector<Model> out;
  while (s.next()) out.push_back(s.model());
  return out;
}

// ---------------------------------------------------------------- frames

namespace {

constexpr std::size_t kMaxMaskWorlds = 7;

const std::vector<std::vector<std::uint8_t>>& permutations(std::size_t n) {
  static std::vector<std::vector<std::vector<std::uint8_t>>> cache(kMaxMaskWorlds + 1);
  auto& perms = cache.at(n);
  if (perms.empty()) {
    std::vector<std::uint8_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
  }
  return perms;
}

std::uint64_t permute(std::uint64_t mask, std::size_t n, const std::vector<std::uint8_t>& p) {
  std::uint64_t out = 0;
  while (mask) {
    int bit = std::countr_zero(mask);
    mask &= mask - 1;
    std::size_t i = bit / n, j = bit % n;
    out |= std::uint64_t{1} << (p[i] * n + p[j]);
  }
  return out;
}

std::uint64_t canonical(std::uint64_t mask, std::size_t n) {
  std::uint64_t best = mask;
  for (const auto& p : permutations(n)) best = std::min(best, permute(mask, n, p));
  return best;
}

}  // namespace

std::uint64_t canonical_mask(const Frame& f) {
  if (f.size() > kMaxMaskWorlds) throw std::invalid_argument("canonical form needs at most 7 worlds");
  return canonical(f.mask(), f.size());
}

bool is_canonical(const Frame& f) { return canonical_mask(f) == f.mask(); }

FrameStream::FrameStream(std::size_t max_worlds, bool modulo_iso)
    : max_(max_worlds), iso_(modulo_iso) {
  if (max_worlds == 0) throw std::invalid_argument("frames need at least one world");
  if (max_worlds > kMaxMaskWorlds)
    throw std::invalid_argument("frame enumeration supports at most 7 worlds");
}

std::optional<Frame> FrameStream::next() {
  while (n_ <= max_) {
    const std::size_t bits = n_ * n_;
    const std::uint64_t end = bits >= 64 ? 0 : std::uint64_t{1} << bits;
    if (mask_ == end && !(bits >= 64)) {
      ++n_;
      mask_ = 0;
      continue;
    }
    std::uint64_t m = mask_++;
    if (iso_ && canonical(m, n_) != m) continue;
    return Frame::from_mask(n_, m);
  }
  return std::nullopt;
}

std::vector<Frame> frames_up_to(std::size_t n, bool modulo_iso) {
  FrameStream s(n, modulo_iso);
  std::vector<Frame> out;
  while (auto f = s.next()) out.push_back(std::move(*f));
  return out;
}

// ---------------------------------------------------------------- refutation

namespace {

// Searches one frame for a valuation and world refuting lhs |- rhs.
class FrameRefuter {
 public:
  FrameRefuter(const Sequent& s, std::vector<std::string> atoms) : atoms_(std::move(atoms)) {
    lhs_ = prog_.add(s.lhs);
    rhs_ = prog_.add(s.rhs);
    for (const auto& a : atoms_) {
      const auto& pa = prog_.atoms();
      auto it = std::find(pa.begin(), pa.end(), a);
      slot_.push_back(it == pa.end() ? -1 : static_cast<int>(it - pa.begin()));
    }
  }

  std::optional<PointedModel> run(const Frame& frame, std::uint64_t& visited, std::uint64_t cap) {
    ValuationStream vals(frame, atoms_, UINT64_MAX);
    MaskEvaluator ev(frame);
    ev.clear_atoms(prog_.atoms().size());
    const std::size_t n = frame.size();
    while (vals.next()) {
      if (++visited > cap)
        throw BudgetExceeded("search visited more than " + std::to_string(cap) + " models");
      for (std::size_t k = 0; k <= vals.changed() && k < vals.digits().size(); ++k) {
        int slot = slot_[k / n];
        if (slot >= 0)
          ev.set_atom(static_cast<std::uint32_t>(slot), static_cast<World>(k % n),
                      TruthState::from_code(vals.digits()[k]));
      }
      ev.run(prog_);
      const std::uint64_t* lt = ev.truth_mask(lhs_);
      const std::uint64_t* rt = ev.truth_mask(rhs_);
      for (std::size_t k = 0; k < ev.words(); ++k) {
        std::uint64_t bad = lt[k] & ~rt[k];
        if (bad) {
          World w = static_cast<World>(k * 64 + std::countr_zero(bad));
          return PointedModel{vals.model(), w};
        }
      }
    }
    return std::nullopt;
  }

 private:
  std::vector<std::string> atoms_;
  FormulaProgram prog_;
  std::uint32_t lhs_, rhs_;
  std::vector<int> slot_;
};

}  // namespace

ValidityResult valid_on_frame(const Frame& frame, const Sequent& s, std::uint64_t cap) {
  auto atoms = atoms_of(s);
  if (valuation_count(frame.size(), atoms.size()) > cap)
    throw BudgetExceeded("valuation count exceeds the cap of " + std::to_string(cap));
  FrameRefuter r(s, atoms);
  ValidityResult out;
  auto w = r.run(frame, out.models_checked, cap);
  out.valid = !w.has_value();
  out.witness = std::move(w);
  return out;
}

std::optional<PointedModel> find_countermodel(const Sequent& s, const EnumerationBudget& budget) {
  auto atoms = budget.atoms.empty() ? atoms_of(s) : budget.atoms;
  if (!budget.modulo_iso) {
    std::uint64_t total = 0;
    for (std::size_t k = 1; k <= budget.max_worlds; ++k) {
      std::uint64_t frames = k * k >= 64 ? UINT64_MAX : std::uint64_t{1} << (k * k);
      std::uint64_t vals = valuation_count(k, atoms.size());
      if (frames != 0 && vals > UINT64_MAX / frames) total = UINT64_MAX;
      else total = std::min<std::uint64_t>(UINT64_MAX - 1, total) + frames * vals;
      if (total > budget.max_models)
        throw BudgetExceeded("search space exceeds the cap of " +
                             std::to_string(budget.max_models) + " models");
    }
  }
  FrameRefuter r(s, atoms);
  std::uint64_t visited = 0;
  FrameStream frames(budget.max_worlds, budget.modulo_iso);
  while (auto f = frames.next())
    if (auto w = r.run(*f, visited, budget.max_models)) return w;
  return std::nullopt;
}

// ---------------------------------------------------------------- formulas

std::vector<Formula> formulas_up_to(Signature sig, const std::vector<std::string>& atoms,
                                    std::size_t max_size) {
  std::vector<std::string> uniq;
  for (const auto& a : atoms)
    if (std::find(uniq.begin(), uniq.end(), a) == uniq.end()) uniq.push_back(a);
  if (uniq.empty()) throw std::invalid_argument("formula enumeration needs at least one atom");

  std::vector<Op> unary{Op::Neg};
  for (Op op : sig.modal_ops()) unary.push_back(op);

  std::vector<std::vector<Formula>> level(max_size + 1);
  if (max_size >= 1)
    for (const auto& a : uniq) level[1].push_back(Formula::var(a));
  for (std::size_t s = 2; s <= max_size; ++s) {
    for (Op op : unary)
      for (const auto& f : level[s - 1]) level[s].push_back(Formula::unary(op, f));
    for (Op op : {Op::And, Op::Or})
      for (std::size_t i = 1; i < s; ++i)
        for (const auto& a : level[i])
          for (const auto& b : level[s - i]) level[s].push_back(Formula::binary(op, a, b));
  }
  std::vector<Formula> out;
  for (auto& l : level) out.insert(out.end(), l.begin(), l.end());
  return out;
}

// ---------------------------------------------------------------- separation

namespace {

std::vector<std::string> default_atoms(std::span<const PointedModel> points) {
  std::set<std::string> s;
  for (const auto& p : points)
    for (const auto& a : p.model.atoms()) s.insert(a);
  if (s.empty()) s.insert("p");
  return {s.begin(), s.end()};
}

// Evaluates every enumerated formula at each point and returns the first
// index accepted by `match`, together with the formula count.
template <typename Match>
std::pair<std::optional<Formula>, std::size_t> scan(std::span<const PointedModel> points,
                                                    Signature sig, std::size_t max_size,
                                                    const std::vector<std::string>& atoms,
                                                    Match match) {
  auto formulas = formulas_up_to(sig, atoms, max_size);
  FormulaProgram prog;
  std::vector<std::uint32_t> ids;
  ids.reserve(formulas.size());
  for (const auto& f : formulas) ids.push_back(prog.add(f));
  std::vector<MaskEvaluator> evs;
  for (const auto& p : points) {
    evs.emplace_back(p.model.frame());
    evs.back().load_atoms(p.model, prog);
    evs.back().run(prog);
  }
  std::vector<TruthState> vals(points.size());
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    for (std::size_t k = 0; k < points.size(); ++k) vals[k] = evs[k].state(ids[i], points[k].point);
    if (match(vals)) return {formulas[i], i + 1};
  }
  return {std::nullopt, formulas.size()};
}

}  // namespace

SeparationReport separation_check(const PointedModel& a, const PointedModel& b, Signature sig,
                                  std::size_t max_size, std::vector<std::string> atoms) {
  std::vector<PointedModel> pts{a, b};
  if (atoms.empty()) atoms = default_atoms(pts);
  auto [found, checked] =
      scan(pts, sig, max_size, atoms, [](const std::vector<TruthState>& v) { return v[0] != v[1]; });
  SeparationReport r;
  r.sizes_searched = max_size;
  r.formulas_checked = checked;
  if (found) {
    r.separating_formula = found;
    r.verdict = SearchVerdict::Found;
  }
  return r;
}

PatternReport pattern_search(std::span<const PointedModel> points,
                             std::span<const TruthState> pattern, Signature sig,
                             std::size_t max_size, std::vector<std::string> atoms) {
  if (points.size() != pattern.size())
    throw std::invalid_argument("pattern needs one value per point");
  if (atoms.empty()) atoms = default_atoms(points);
  auto [found, checked] = scan(points, sig, max_size, atoms, [&](const std::vector<TruthState>& v) {
    return std::equal(v.begin(), v.end(), pattern.begin());
  });
  PatternReport r;
  r.pattern.assign(pattern.begin(), pattern.end());
  r.sizes_searched = max_size;
  r.formulas_checked = checked;
  if (found) {
    r.matching_formula = found;
    r.verdict = SearchVerdict::Found;
  }
  return r;
}

PatternReport definability_check(std::span<const PointedModel> points, const Formula& target,
                                 Signature sig, std::size_t max_size,
                                 std::vector<std::string> atoms) {
  std::vector<TruthState> pattern;
  for (const auto& p : points) pattern.push_back(eval(p.model, p.point, target));
  return pattern_search(points, pattern, sig, max_size, std::move(atoms));
}

// ---------------------------------------------------------------- validity table

namespace {

struct ProfileHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const noexcept {
    std::size_t h = v.size();
    for (auto x : v) h ^= std::hash<std::uint64_t>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace

ValidityTable::ValidityTable(std::vector<Formula> formulas, std::span<const Frame> frames,
                             std::vector<std::string> atoms, std::uint64_t cap)
    : formulas_(std::move(formulas)) {
  const std::size_t m = formulas_.size();
  stride_ = (m + 63) / 64;
  FormulaProgram prog;
  std::vector<std::uint32_t> ids;
  for (const auto& f : formulas_) ids.push_back(prog.add(f));
  std::vector<int> slot;
  for (const auto& a : atoms) {
    const auto& pa = prog.atoms();
    auto it = std::find(pa.begin(), pa.end(), a);
    slot.push_back(it == pa.end() ? -1 : static_cast<int>(it - pa.begin()));
  }

  std::unordered_set<std::vector<std::uint64_t>, ProfileHash> seen;
  std::uint64_t visited = 0;
  for (const Frame& frame : frames) {
    const std::size_t n = frame.size();
    if (n > 64) throw std::invalid_argument("validity tables support frames of at most 64 worlds");
    ValuationStream vals(frame, atoms, UINT64_MAX);
    MaskEvaluator ev(frame);
    ev.clear_atoms(prog.atoms().size());
    std::vector<std::vector<std::uint64_t>> profile(n, std::vector<std::uint64_t>(stride_));
    while (vals.next()) {
      if (++visited > cap)
        throw BudgetExceeded("validity table visited more than " + std::to_string(cap) + " models");
      for (std::size_t k = 0; k <= vals.changed() && k < vals.digits().size(); ++k) {
        int s = slot[k / n];
        if (s >= 0)
          ev.set_atom(static_cast<std::uint32_t>(s), static_cast<World>(k % n),
                      TruthState::from_code(vals.digits()[k]));
      }
      ev.run(prog);
      for (auto& p : profile) std::fill(p.begin(), p.end(), 0);
      for (std::size_t i = 0; i < m; ++i) {
        std::uint64_t t = ev.truth_mask(ids[i])[0];
        while (t) {
          int w = std::countr_zero(t);
          t &= t - 1;
          profile[w][i >> 6] |= std::uint64_t{1} << (i & 63);
        }
      }
      for (auto& p : profile) seen.insert(p);
      pointed_ += n;
    }
  }

  rows_.assign(m * stride_, ~std::uint64_t{0});
  for (const auto& p : seen) {
    for (std::size_t word = 0; word < stride_; ++word) {
      std::uint64_t bits = p[word];
      while (bits) {
        std::size_t i = word * 64 + std::countr_zero(bits);
        bits &= bits - 1;
        std::uint64_t* row = &rows_[i * stride_];
        for (std::size_t k = 0; k < stride_; ++k) row[k] &= p[k];
      }
    }
  }
  profiles_ = seen.size();
}

ValidityTable ValidityTable::for_budget(std::vector<Formula> formulas,
                                        const EnumerationBudget& budget) {
  std::vector<std::string> atoms = budget.atoms;
  if (atoms.empty()) {
    std::set<std::string> s;
    for (const auto& f : formulas)
      for (const auto& a : atoms_of(f)) s.insert(a);
    atoms.assign(s.begin(), s.end());
  }
  auto frames = frames_up_to(budget.max_worlds, budget.modulo_iso);
  return ValidityTable(std::move(formulas), frames, std::move(atoms), budget.max_models);
}

}  // namespace bdm

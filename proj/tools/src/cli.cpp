#include "bdm/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "bdm/harness.hpp"
#include "bdm/oracle.hpp"
#include "bdm/semantics.hpp"
#include "bdm/tableau.hpp"

namespace bdm::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline text, or the contents of a file when written as @path.
std::string inline_or_file(const std::string& arg) {
  return !arg.empty() && arg.front() == '@' ? read_file(arg.substr(1)) : arg;
}

// Model files are named directly; @path is accepted for symmetry.
std::string model_text(const std::string& arg) {
  return read_file(!arg.empty() && arg.front() == '@' ? arg.substr(1) : arg);
}

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c); };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

void write_pointed(std::ostream& out, const PointedModel& pm) {
  out << "# point: " << pm.model.frame().name(pm.point) << '\n' << format_model(pm.model);
}

std::vector<std::string> split_atoms(const std::string& csv) {
  std::vector<std::string> atoms;
  std::stringstream ss(csv);
  for (std::string a; std::getline(ss, a, ',');)
    if (!(a = trim(a)).empty()) atoms.push_back(a);
  return atoms;
}

bool mentions(const Formula& f, Op op) {
  for (const auto& g : subformulas(f))
    if (g.op() == op) return true;
  return false;
}

// ------------------------------------------------------------------ prove

struct ProveArgs {
  std::string sequent;
  std::uint64_t max_steps = ProverOptions{}.max_steps;
  bool emit_proof = false;
  bool emit_model = false;
};

int cmd_prove(const ProveArgs& a, std::ostream& out, std::ostream& err) {
  Sequent s = parse_sequent(trim(inline_or_file(a.sequent)));
  for (const Formula& f : {s.lhs, s.rhs}) {
    if (mentions(f, Op::Box)) {
      err << "error: [] is outside the tableau calculus; use `bdm search` for sequents with []\n";
      return kUsage;
    }
    if (mentions(f, Op::Tri)) {
      err << "error: Tri is outside the tableau calculus; write it as [*]p | [*]~p or use `bdm search`\n";
      return kUsage;
    }
  }
  ProverOptions opts;
  opts.max_steps = a.max_steps;
  Verdict v;
  try {
    v = prove(s, opts);
  } catch (const ResourceLimitExceeded& e) {
    err << "error: " << e.what() << "\npartial tableau:\n" << e.partial_tableau();
    return kBudget;
  }
  const bool both = !a.emit_proof && !a.emit_model;
  out << (v.proved ? "proved: " : "refuted: ") << to_string(s) << "\n";
  out << "# steps " << v.stats.steps << ", branches " << v.stats.branches << ", worlds " << v.stats.max_worlds << "\n";
  const bool mixed = (mentions(s.lhs, Op::BBox) || mentions(s.rhs, Op::BBox)) &&
                     (mentions(s.lhs, Op::Ign) || mentions(s.rhs, Op::Ign));
  if (v.proved && mixed)
    out << "# note: the sequent mixes [*] and I; the proof covers frames without reflexive points only\n";
  if (a.emit_proof || (both && v.proved)) out << format_proof(v.tree);
  if (!v.proved && (a.emit_model || both)) write_pointed(out, v.countermodel->model);
  return v.proved ? kAffirmative : kNegative;
}

// ------------------------------------------------------------------ check

struct CheckArgs {
  std::string model;
  std::string world;
  std::string formula;
  bool strict_bbox = false;
};

int cmd_check(const CheckArgs& a, std::ostream& out, std::ostream&) {
  Model m = parse_model(model_text(a.model));
  auto w = m.frame().find(a.world);
  if (!w) throw UsageError("no world named '" + a.world + "' in the model");
  Formula f = parse_formula(trim(inline_or_file(a.formula)));
  TruthState v = eval(m, *w, f, EvalOptions{a.strict_bbox});
  out << v.letter() << "\n"
      << "truth: " << (v.sup_t ? "yes" : "no") << "\n"
      << "falsity: " << (v.sup_f ? "yes" : "no") << "\n";
  return kAffirmative;
}

// ------------------------------------------------------------------ search

struct SearchArgs {
  std::string sequent;
  std::size_t max_worlds = 3;
  std::string atoms;
  std::string frame;
  std::string output;
  bool iso = false;
  std::uint64_t max_models = EnumerationBudget{}.max_models;
};

int cmd_search(const SearchArgs& a, std::ostream& out, std::ostream&) {
  Sequent s = parse_sequent(trim(inline_or_file(a.sequent)));
  std::optional<PointedModel> found;
  std::string scope;
  if (!a.frame.empty()) {
    Model fm = parse_model(model_text(a.frame));
    if (!fm.atoms().empty()) throw UsageError("frame file must not contain val lines");
    auto res = valid_on_frame(fm.frame(), s, a.max_models);
    found = std::move(res.witness);
    scope = "on the given frame (" + std::to_string(res.models_checked) + " valuations)";
  } else {
    EnumerationBudget b;
    b.max_worlds = a.max_worlds;
    b.atoms = split_atoms(a.atoms);
    b.modulo_iso = a.iso;
    b.max_models = a.max_models;
    found = find_countermodel(s, b);
    scope = "up to " + std::to_string(a.max_worlds) + " worlds";
  }
  if (!found) {
    out << (a.frame.empty() ? "none up to budget: " : "valid on frame: ") << to_string(s) << " (" << scope << ")\n";
    return kAffirmative;
  }
  out << "countermodel: " << to_string(s) << "\n";
  write_pointed(out, *found);
  if (!a.output.empty()) {
    std::ofstream f(a.output);
    if (!f) throw UsageError("cannot write '" + a.output + "'");
    write_pointed(f, *found);
  }
  return kNegative;
}

// ------------------------------------------------------------------ experiment

struct ExperimentArgs {
  std::string name;
  HarnessConfig cfg;
  std::string jsonl;
  bool verbose = false;
};

int cmd_experiment(ExperimentArgs a, std::ostream& out, std::ostream&) {
  std::vector<std::string> names;
  if (a.name == "all") {
    names = experiment_names();
  } else if (std::find(experiment_names().begin(), experiment_names().end(), a.name) != experiment_names().end()) {
    names.push_back(a.name);
  } else {
    std::string known;
    for (const auto& n : experiment_names()) known += " " + n;
    throw UsageError("unknown experiment '" + a.name + "'; known:" + known + " all");
  }
  a.cfg.keep_passes = a.verbose || !a.jsonl.empty();
  std::ofstream jsonl;
  if (!a.jsonl.empty()) {
    jsonl.open(a.jsonl);
    if (!jsonl) throw UsageError("cannot write '" + a.jsonl + "'");
  }
  bool all_passed = true;
  for (const auto& n : names) {
    ExperimentReport r = run_experiment(n, a.cfg);
    out << format_report(r, a.verbose) << std::flush;
    if (jsonl.is_open()) jsonl << report_jsonl(r);
    all_passed = all_passed && r.passed();
  }
  return all_passed ? kAffirmative : kNegative;
}

// ------------------------------------------------------------------ fixtures

int cmd_fixtures(const std::string& dir, bool list, std::ostream& out) {
  for (const auto& fx : fixtures()) {
    if (list) {
      out << fx.name << "  " << fx.summary << "\n";
      continue;
    }
    std::string text = "# " + fx.summary + "\n" + format_model(fx.model);
    if (dir.empty()) {
      out << "# fixture: " << fx.name << "\n" << text << "\n";
      continue;
    }
    std::filesystem::create_directories(dir);
    const auto path = std::filesystem::path(dir) / (fx.name + ".model");
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write '" + path.string() + "'");
    f << text;
    out << path.string() << "\n";
  }
  return kAffirmative;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Belnap-Dunn modal logic toolkit: model checking, tableau proofs, countermodel search"};
  app.name("bdm");
  app.require_subcommand(1, 1);

  ProveArgs prove_args;
  auto* prove_cmd = app.add_subcommand("prove", "Prove or refute a sequent in the [*], I calculus");
  prove_cmd->add_option("sequent", prove_args.sequent, "Sequent 'lhs |- rhs', or @file")->required();
  prove_cmd->add_option("--max-steps", prove_args.max_steps, "Step budget for the prover");
  prove_cmd->add_flag("--emit-proof", prove_args.emit_proof, "Print the (possibly partial) proof tree");
  prove_cmd->add_flag("--emit-model", prove_args.emit_model, "Print the countermodel when refuted");

  CheckArgs check_args;
  auto* check_cmd = app.add_subcommand("check", "Evaluate a formula at a world of a model");
  check_cmd->add_option("model", check_args.model, "Model file")->required();
  check_cmd->add_option("world", check_args.world, "World name")->required();
  check_cmd->add_option("formula", check_args.formula, "Formula, or @file")->required();
  check_cmd->add_flag("--strict-bbox", check_args.strict_bbox, "Evaluate [*] over strict successors");

  SearchArgs search_args;
  auto* search_cmd = app.add_subcommand("search", "Search finite models for a countermodel");
  search_cmd->add_option("sequent", search_args.sequent, "Sequent 'lhs |- rhs', or @file")->required();
  search_cmd->add_option("--max-worlds", search_args.max_worlds, "Largest frame size")->check(CLI::Range(1, 7));
  search_cmd->add_option("--atoms", search_args.atoms, "Comma-separated atoms to vary");
  search_cmd->add_option("--frame", search_args.frame, "Decide validity on this frame (model file without val lines)");
  search_cmd->add_option("--output", search_args.output, "Also write the countermodel to this file");
  search_cmd->add_flag("--iso", search_args.iso, "Skip frames isomorphic to an earlier one");
  search_cmd->add_option("--max-models", search_args.max_models, "Cap on (frame, valuation) pairs");

  ExperimentArgs exp_args;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a named experiment, or all of them");
  exp_cmd->add_option("name", exp_args.name, "Experiment name or 'all'")->required();
  exp_cmd->add_option("--seed", exp_args.cfg.seed, "Random seed");
  exp_cmd->add_option("--max-worlds", exp_args.cfg.max_worlds, "Exhaustive frame size")->check(CLI::Range(1, 4));
  exp_cmd->add_option("--random-frames", exp_args.cfg.random_frames, "Seeded frames of 4 to 6 worlds");
  exp_cmd->add_option("--definability-worlds", exp_args.cfg.definability_worlds, "Frame size for isomorphism-filtered definability checks")->check(CLI::Range(1, 5));
  exp_cmd->add_option("--trials", exp_args.cfg.trials, "Random trials");
  exp_cmd->add_option("--samples", exp_args.cfg.samples, "Random formulas");
  exp_cmd->add_option("--ir-samples", exp_args.cfg.ir_samples, "Sampled rule instances");
  exp_cmd->add_option("--max-size", exp_args.cfg.max_size, "Formula size bound for separations");
  exp_cmd->add_option("--agreement-sample", exp_args.cfg.agreement_sample, "Sampled sequents for agreement (0 = all)");
  exp_cmd->add_option("--agreement-size", exp_args.cfg.agreement_size, "Formula size bound for agreement")->check(CLI::Range(1, 5));
  exp_cmd->add_option("--jsonl", exp_args.jsonl, "Write one JSON record per assertion to this file");
  exp_cmd->add_flag("--verbose", exp_args.verbose, "List passing assertions too");

  std::string fixtures_dir;
  bool fixtures_list = false;
  auto* fix_cmd = app.add_subcommand("fixtures", "Dump the built-in fixture models");
  fix_cmd->add_option("--dir", fixtures_dir, "Write one .model file per fixture into this directory");
  fix_cmd->add_flag("--list", fixtures_list, "Only list names and summaries");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kAffirmative;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kAffirmative;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*prove_cmd) return cmd_prove(prove_args, out, err);
    if (*check_cmd) return cmd_check(check_args, out, err);
    if (*search_cmd) return cmd_search(search_args, out, err);
    if (*exp_cmd) return cmd_experiment(exp_args, out, err);
    if (*fix_cmd) return cmd_fixtures(fixtures_dir, fixtures_list, out);
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const ModelParseError& e) {
    err << "model error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnsupportedFormula& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnknownWorld& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace bdm::cli

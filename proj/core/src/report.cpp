#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "bdm/harness.hpp"

namespace bdm {

namespace {

void write_assertion(std::ostream& os, const Assertion& a) {
  os << "    " << (a.passed ? "ok   " : "FAIL ") << a.instance << "\n"
     << "         expected: " << a.expected << "\n"
     << "         got:      " << a.got << "\n";
  if (!a.witness.empty()) os << "         witness:  " << a.witness << "\n";
}

nlohmann::json record(const ExperimentReport& r, const Assertion& a) {
  return {{"experiment", r.name}, {"instance", a.instance}, {"expected", a.expected},
          {"got", a.got},         {"witness", a.witness},   {"passed", a.passed}};
}

}  // namespace

std::string format_report(const ExperimentReport& r, bool verbose) {
  std::ostringstream os;
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2f s", r.seconds);
  os << (r.passed() ? "[PASS] " : "[FAIL] ") << r.name << "  seed=" << r.seed << "  assertions=" << r.assertions
     << "  failures=" << r.failures.size() << "  (" << secs << ")\n";
  if (!r.budget.empty()) {
    os << "  budget:";
    for (const auto& [k, v] : r.budget) os << ' ' << k << '=' << v;
    os << '\n';
  }
  for (const auto& [k, v] : r.counts) os << "  " << k << ": " << v << '\n';
  for (const auto& n : r.notes) os << "  note: " << n << '\n';
  constexpr std::size_t kShown = 20;
  for (std::size_t i = 0; i < r.failures.size() && (verbose || i < kShown); ++i) write_assertion(os, r.failures[i]);
  if (!verbose && r.failures.size() > kShown)
    os << "    ... " << r.failures.size() - kShown << " more failures\n";
  if (verbose)
    for (const auto& a : r.passes) write_assertion(os, a);
  return os.str();
}

std::string report_jsonl(const ExperimentReport& r) {
  std::string out;
  for (const auto& a : r.failures) out += record(r, a).dump() + "\n";
  for (const auto& a : r.passes) out += record(r, a).dump() + "\n";
  nlohmann::json summary{{"experiment", r.name},
                         {"summary", true},
                         {"passed", r.passed()},
                         {"seed", r.seed},
                         {"assertions", r.assertions},
                         {"failures", r.failures.size()},
                         {"seconds", r.seconds},
                         {"budget", r.budget},
                         {"counts", r.counts},
                         {"notes", r.notes}};
  out += summary.dump() + "\n";
  return out;
}

}  // namespace bdm

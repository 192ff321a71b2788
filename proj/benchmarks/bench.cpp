#include <benchmark/benchmark.h>

#include "bdm/harness.hpp"
#include "bdm/oracle.hpp"
#include "bdm/tableau.hpp"

using namespace bdm;

static void BM_EvalRandom(benchmark::State& state) {
  Rng rng(1);
  const Signature sig{Op::Box, Op::BBox, Op::Ign, Op::Tri};
  std::vector<std::pair<Model, Formula>> work;
  for (int i = 0; i < 64; ++i)
    work.emplace_back(random_model(rng, static_cast<std::size_t>(state.range(0)), {"p", "q"}),
                      random_formula(rng, sig, {"p", "q"}, 12));
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& [m, f] = work[k++ % work.size()];
    benchmark::DoNotOptimize(eval(m, 0, f));
  }
}
BENCHMARK(BM_EvalRandom)->Arg(4)->Arg(16)->Arg(64)->Arg(256);

static void BM_ProveClosed(benchmark::State& state) {
  const Sequent s = parse_sequent("Ip & Iq |- I(p | q)");
  for (auto _ : state) benchmark::DoNotOptimize(prove(s, {.record_tree = false}).proved);
}
BENCHMARK(BM_ProveClosed);

static void BM_ProveOpen(benchmark::State& state) {
  const Sequent s = parse_sequent("[*](p & q) |- [*]p");
  for (auto _ : state) benchmark::DoNotOptimize(prove(s).proved);
}
BENCHMARK(BM_ProveOpen);

static void BM_FormulasUpTo(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(formulas_up_to({Op::BBox, Op::Ign}, {"p", "q"}, static_cast<std::size_t>(state.range(0))).size());
}
BENCHMARK(BM_FormulasUpTo)->Arg(3)->Arg(4);

static void BM_ValidityTable(benchmark::State& state) {
  auto formulas = formulas_up_to({Op::BBox, Op::Ign}, {"p", "q"}, 3);
  const EnumerationBudget budget{.max_worlds = static_cast<std::size_t>(state.range(0)), .atoms = {"p", "q"}, .modulo_iso = true};
  for (auto _ : state) benchmark::DoNotOptimize(ValidityTable::for_budget(formulas, budget).distinct_profiles());
}
BENCHMARK(BM_ValidityTable)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_FindCountermodel(benchmark::State& state) {
  const Sequent s = parse_sequent("Ip |- p");
  const EnumerationBudget budget{.max_worlds = 3, .modulo_iso = true};
  for (auto _ : state) benchmark::DoNotOptimize(find_countermodel(s, budget).has_value());
}
BENCHMARK(BM_FindCountermodel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

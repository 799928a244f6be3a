#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dpocl/intention.hpp"
#include "dpocl/parser.hpp"
#include "dpocl/planner.hpp"

namespace {

using namespace dpocl;

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(DPOCL_CORPUS_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing corpus file " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Domain domain(const std::string& name) { return *parse_domain(slurp(name)).value; }
Problem problem(const std::string& name) { return *parse_problem(slurp(name)).value; }
Literal literal(const char* text) { return *parse_literal(text).value; }

void solve_or_fail(benchmark::State& state, const Domain& d, const Problem& p, SearchConfig cfg) {
  std::size_t nodes = 0;
  for (auto _ : state) {
    auto out = solve(d, p, cfg);
    if (!std::holds_alternative<Solution>(out)) state.SkipWithError("no plan");
    nodes = statistics_of(out).nodes_expanded;
    benchmark::DoNotOptimize(out);
  }
  state.counters["nodes"] = static_cast<double>(nodes);
}

void BM_SolveLucentio(benchmark::State& state) {
  const Domain d = domain("discourse.dpd");
  const Problem p = problem("lucentio.dpp");
  solve_or_fail(state, d, p, {});
}
BENCHMARK(BM_SolveLucentio);

void BM_SolveMultiRole(benchmark::State& state) {
  const Domain d = domain("discourse.dpd");
  const Problem p = problem("multi-role.dpp");
  SearchConfig cfg;
  cfg.reuse_policy = state.range(0) ? ReusePolicy::BothBranches : ReusePolicy::PreferNew;
  solve_or_fail(state, d, p, cfg);
}
BENCHMARK(BM_SolveMultiRole)->Arg(1)->Arg(0);

// Delivering n items, each through its own subplan.
void BM_SolveDeliveries(benchmark::State& state) {
  const Domain d = domain("synthetic/delivery.dpd");
  const char* names[] = {"a", "b", "c", "d"};
  Problem p;
  p.name = "deliveries";
  p.domain = "delivery";
  for (int i = 0; i < state.range(0); ++i) {
    const std::string x = names[i];
    p.facts.push_back(literal(("(item " + x + ")").c_str()));
    p.init.push_back(literal(("(clear " + x + ")").c_str()));
    p.goals.push_back(literal(("(delivered " + x + ")").c_str()));
  }
  solve_or_fail(state, d, p, {});
}
BENCHMARK(BM_SolveDeliveries)->DenseRange(1, 3);

void BM_SolveSwitches(benchmark::State& state) {
  const Domain d = domain("synthetic/switches.dpd");
  Problem p;
  p.name = "switches";
  p.domain = "switches";
  p.init = {literal("(free)"), literal("(on a)")};
  p.goals = {literal("(held a)"), literal("(on b)"), literal("(not (on c))")};
  SearchConfig cfg;
  cfg.flaw_policy = static_cast<FlawPolicy>(state.range(0));
  solve_or_fail(state, d, p, cfg);
}
BENCHMARK(BM_SolveSwitches)->DenseRange(0, 3)->ArgName("flaw-policy");

void BM_UnifyNested(benchmark::State& state) {
  const Literal a = literal("(bel (causes (fairest ?x ?y) (modeled ?x ?y)))");
  const Literal b = literal("(bel (causes ?p (modeled lucentio bianca)))");
  for (auto _ : state) benchmark::DoNotOptimize(unify(a, b, BindingSet{}));
}
BENCHMARK(BM_UnifyNested);

void BM_ClassifyEffects(benchmark::State& state) {
  const Domain d = domain("discourse.dpd");
  const Problem p = problem("multi-role.dpp");
  const Plan plan = std::get<Solution>(solve(d, p)).plan;
  for (auto _ : state) benchmark::DoNotOptimize(classify_effects(plan));
}
BENCHMARK(BM_ClassifyEffects);

void BM_ParseDomain(benchmark::State& state) {
  const std::string text = slurp("discourse.dpd");
  for (auto _ : state) benchmark::DoNotOptimize(parse_domain(text));
}
BENCHMARK(BM_ParseDomain);

}  // namespace

BENCHMARK_MAIN();

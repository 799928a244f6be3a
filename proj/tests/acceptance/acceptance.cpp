// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>

#include <unistd.h>

#include "support.hpp"

using namespace dpocl;
using namespace dpocl::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Result {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Every plan that reached a Solution anywhere in the run, for the
// intention cross-check.
std::vector<Plan> g_solutions;

Result support_subplan_reproduction() {
  const Domain d = load_domain("discourse.dpd");
  const Problem p = load_problem("lucentio.dpp");
  const auto t0 = Clock::now();
  const auto outcome = solve(d, p);
  const double secs = seconds_since(t0);
  const auto& stats = statistics_of(outcome);
  const auto* sol = std::get_if<Solution>(&outcome);
  if (!sol) return {false, "no solution"};
  g_solutions.push_back(sol->plan);
  const Plan& plan = sol->plan;

  const std::multiset<std::string> want{
      "cause-to-believe(fairest(lucentio, bianca))",
      "cause-to-believe(causes(fairest(lucentio, bianca), modeled(lucentio, bianca)))",
      "combine-belief(fairest(lucentio, bianca), modeled(lucentio, bianca))"};
  bool found = false;
  for (const auto& dl : plan.decomposition_links()) {
    if (step_label(plan, dl.parent) != "support(modeled(lucentio, bianca))") continue;
    std::multiset<std::string> got;
    for (StepId m : dl.members) got.insert(step_label(plan, m));
    const bool boundary = plan.step(dl.begin).kind == StepKind::BeginSubplan &&
                          plan.step(dl.end).kind == StepKind::EndSubplan;
    const bool into_end =
        std::any_of(plan.causal_links().begin(), plan.causal_links().end(),
                    [&](const CausalLink& l) { return l.consumer == dl.end; });
    if (got == want && boundary && into_end) found = true;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "support subplan %s; %.4f s, %zu nodes",
                found ? "matches" : "does not match", secs, stats.nodes_expanded);
  return {found && secs < 1.0 && stats.nodes_expanded < 10000, buf};
}

Result soundness_suite() {
  const auto t0 = Clock::now();
  const auto problems = solvable_problems(30, 4);
  SearchConfig cfg;
  cfg.max_steps = 8;
  std::size_t solved = 0, sound = 0, hierarchical = 0;
  std::string first_bad;
  for (const auto& gp : problems) {
    const auto outcome = solve(gp.domain, gp.problem, cfg);
    const auto* sol = std::get_if<Solution>(&outcome);
    if (!sol) continue;
    ++solved;
    hierarchical += !sol->plan.decomposition_links().empty();
    g_solutions.push_back(sol->plan);
    const auto report = audit(sol->plan, gp.problem);
    if (report.sound())
      ++sound;
    else if (first_bad.empty())
      first_bad = gp.problem.name + ": " + report.violations.front().detail;
  }
  const double secs = seconds_since(t0);
  char buf[200];
  std::snprintf(buf, sizeof buf, "%zu solvable problems, %zu solved (%zu hierarchical), %zu sound; %.2f s",
                problems.size(), solved, hierarchical, sound, secs);
  std::string detail = buf;
  if (!first_bad.empty()) detail += "; first violation " + first_bad;
  return {problems.size() >= 100 && solved >= 100 && sound == solved && secs < 60.0, detail};
}

Result completeness() {
  const Domain d = load_domain("synthetic/tokens.dpd");
  const std::vector<std::string> constants{"a", "b", "c"};
  std::vector<Literal> literals;
  for (const auto& a : ground_atoms(d, constants)) {
    literals.push_back(a);
    literals.push_back(a.negated());
  }
  std::vector<std::vector<Literal>> goals;
  for (std::size_t i = 0; i < literals.size(); ++i) {
    goals.push_back({literals[i]});
    for (std::size_t j = i + 1; j < literals.size(); ++j) goals.push_back({literals[i], literals[j]});
  }

  SearchConfig cfg;
  cfg.max_steps = 8;
  cfg.max_nodes = 100000;
  std::size_t agree = 0, solvable = 0;
  std::string first_bad;
  const auto t0 = Clock::now();
  for (const auto& g : goals) {
    Problem p{"goal", d.name, {}, {lit("(at a)")}, g};
    const bool oracle_says = !oracle::brute_force(d, p, 4, objects(constants)).empty();
    const auto outcome = solve(d, p, cfg);
    const bool planner_says = std::holds_alternative<Solution>(outcome);
    if (const auto* sol = std::get_if<Solution>(&outcome)) g_solutions.push_back(sol->plan);
    solvable += oracle_says;
    if (oracle_says == planner_says) {
      ++agree;
    } else if (first_bad.empty()) {
      first_bad = str(std::span<const Literal>(g));
      if (std::holds_alternative<BudgetExceeded>(outcome)) first_bad += " (budget)";
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "%zu goals (%zu solvable), %zu agree; %.2f s", goals.size(),
                solvable, agree, seconds_since(t0));
  std::string detail = buf;
  if (!first_bad.empty()) detail += "; first disagreement on " + first_bad;
  return {agree == goals.size(), detail};
}

std::size_t count_action(const Plan& plan, const std::string& action) {
  std::size_t n = 0;
  for (StepId s : plan.step_ids()) n += plan.step(s).action == action;
  return n;
}

Result dag_plans() {
  const Domain d = load_domain("discourse.dpd");
  const Problem p = load_problem("multi-role.dpp");
  const auto shared_run = solve(d, p);
  SearchConfig tree_cfg;
  tree_cfg.reuse_policy = ReusePolicy::PreferNew;
  const auto tree_run = solve(d, p, tree_cfg);
  const auto* shared = std::get_if<Solution>(&shared_run);
  const auto* tree = std::get_if<Solution>(&tree_run);
  if (!shared || !tree) return {false, "a run found no solution"};
  g_solutions.push_back(shared->plan);
  g_solutions.push_back(tree->plan);

  std::size_t multi = 0;
  for (StepId s : shared->plan.step_ids()) {
    std::size_t parents = 0;
    for (const auto& dl : shared->plan.decomposition_links())
      parents += std::count(dl.members.begin(), dl.members.end(), s) > 0;
    multi += parents >= 2;
  }
  const auto a = count_action(shared->plan, "cause-to-believe");
  const auto b = count_action(tree->plan, "cause-to-believe");
  return {multi >= 1 && a < b,
          std::to_string(multi) + " shared step(s); cause-to-believe " + std::to_string(a) +
              " with reuse vs " + std::to_string(b) + " without"};
}

Result intention() {
  const Domain d = load_domain("parent-effects.dpd");
  const Problem p = load_problem("parent-effects.dpp");
  const auto outcome = solve(d, p);
  const auto* sol = std::get_if<Solution>(&outcome);
  if (!sol) return {false, "no solution for the parent-effects scenario"};
  const auto report = classify_effects(sol->plan);
  std::set<std::string> side;
  for (const auto* l : report.side_effects()) {
    const Step& s = sol->plan.step(l->step);
    if (s.kind == StepKind::BeginSubplan) continue;  // copies of parent preconditions
    side.insert(s.action + ":" + l->literal.str());
  }
  const std::set<std::string> want{"action1:(c10)", "action3:(c13)"};
  const bool golden = side == want;

  std::size_t mismatches = 0, labels = 0;
  g_solutions.push_back(sol->plan);
  for (const auto& plan : g_solutions) {
    const auto r = classify_effects(plan);
    for (const auto& [key, expected] : intention_oracle(plan)) {
      ++labels;
      mismatches += r.intended(key.first, key.second) != expected;
    }
  }
  std::string detail = std::string("side effects ") + (golden ? "match" : "differ") + " {";
  for (const auto& s : side) detail += " " + s;
  detail += " }; " + std::to_string(mismatches) + " oracle mismatches over " +
            std::to_string(labels) + " labels in " + std::to_string(g_solutions.size()) + " plans";
  return {golden && mismatches == 0, detail};
}

Result determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("dpocl-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string base = std::string(DPOCL_CLI_PATH) + " plan --domain " +
                           corpus_path("discourse.dpd") + " --problem " +
                           corpus_path("multi-role.dpp") + " --flaw-policy shuffle --seed 7";
  std::string a, b;
  for (int run = 0; run < 2; ++run) {
    const fs::path out = dir / ("run" + std::to_string(run) + ".plan.json");
    const int rc = std::system((base + " --out " + out.string()).c_str());
    if (rc != 0) return {false, "plan exited with " + std::to_string(rc)};
    (run == 0 ? a : b) = read_file(out.string());
  }
  fs::remove_all(dir);
  return {!a.empty() && a == b, std::to_string(a.size()) + " bytes, " +
                                    (a == b ? "identical" : "different")};
}

std::string mutate(std::string s, std::mt19937_64& rng) {
  static const std::string alphabet = "()()? ;\n\tabcxyz#0123456789-not";
  const int edits = std::uniform_int_distribution<int>(1, 8)(rng);
  for (int e = 0; e < edits; ++e) {
    const auto pos = s.empty() ? 0 : std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng);
    switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
      case 0:
        if (!s.empty()) s.erase(pos, 1);
        break;
      case 1:
        s.insert(pos, 1, alphabet[rng() % alphabet.size()]);
        break;
      case 2:
        if (!s.empty()) s[pos] = static_cast<char>(rng() % 256);
        break;
      case 3:
        s.resize(pos);
        break;
      default:
        s.insert(pos, std::string(std::uniform_int_distribution<int>(1, 300)(rng), '('));
        break;
    }
  }
  return s;
}

Result parser_robustness() {
  std::vector<std::string> corpus;
  std::size_t round_trips = 0, round_trip_ok = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(DPOCL_CORPUS_DIR)) {
    const auto ext = entry.path().extension();
    if (ext != ".dpd" && ext != ".dpp") continue;
    const std::string text = read_file(entry.path().string());
    corpus.push_back(text);
    ++round_trips;
    if (ext == ".dpd") {
      auto first = parse_domain(text);
      if (!first.ok()) continue;
      auto second = parse_domain(serialize(*first.value));
      round_trip_ok += second.ok() && *second.value == *first.value &&
                       serialize(*second.value) == serialize(*first.value);
    } else {
      auto first = parse_problem(text);
      if (!first.ok()) continue;
      auto second = parse_problem(serialize(*first.value));
      round_trip_ok += second.ok() && *second.value == *first.value &&
                       serialize(*second.value) == serialize(*first.value);
    }
  }

  std::mt19937_64 rng(2024);
  std::size_t documents = 0, diagnosed = 0, broken = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::string text = mutate(corpus[static_cast<std::size_t>(i) % corpus.size()], rng);
    try {
      auto d = parse_domain(text);
      auto p = parse_problem(text);
      if (d.ok() != d.diagnostics.empty() || p.ok() != p.diagnostics.empty()) ++broken;
      if (d.ok() || p.ok())
        ++documents;
      else
        ++diagnosed;
      if (d.ok()) (void)validate_domain(*d.value);
    } catch (...) {
      ++broken;
    }
  }
  return {broken == 0 && round_trip_ok == round_trips && round_trips > 0,
          "10000 fuzzed inputs: " + std::to_string(documents) + " documents, " +
              std::to_string(diagnosed) + " diagnosed, " + std::to_string(broken) +
              " misbehaved; round trip " + std::to_string(round_trip_ok) + "/" +
              std::to_string(round_trips) + " corpus files"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Result (*run)();
  };
  const Criterion criteria[] = {
      {"1 support subplan reproduction", support_subplan_reproduction},
      {"2 soundness suite", soundness_suite},
      {"3 primitive completeness", completeness},
      {"4 shared subplan steps", dag_plans},
      {"5 intention classification", intention},
      {"6 deterministic output", determinism},
      {"7 parser robustness", parser_robustness},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failures += !r.pass;
    std::cout << (r.pass ? "PASS " : "FAIL ") << c.name << ": " << r.detail << std::endl;
  }
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}

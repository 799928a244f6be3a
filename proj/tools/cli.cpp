#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dpocl/emit.hpp"
#include "dpocl/intention.hpp"
#include "dpocl/oracle.hpp"
#include "dpocl/parser.hpp"
#include "dpocl/plan_json.hpp"
#include "dpocl/planner.hpp"

namespace dpocl {

namespace {

constexpr int kOk = 0;
constexpr int kNoPlan = 1;
constexpr int kBudget = 2;
constexpr int kInputError = 3;

struct InputError {
  std::string message;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{path + ": cannot open"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class T>
T unwrap(ParseResult<T> r) {
  if (r.ok()) return std::move(*r.value);
  std::string msg;
  for (const auto& d : r.diagnostics) msg += d.str() + "\n";
  msg.pop_back();
  throw InputError{msg};
}

Domain load_domain(const std::string& path) {
  Domain d = unwrap(parse_domain(slurp(path), path));
  std::string msg;
  for (const auto& diag : validate_domain(d)) msg += path + ": " + diag.subject + ": " + diag.reason + "\n";
  if (!msg.empty()) {
    msg.pop_back();
    throw InputError{msg};
  }
  return d;
}

Problem load_problem(const std::string& path, const Domain* domain) {
  Problem p = unwrap(parse_problem(slurp(path), path));
  if (!domain) return p;
  std::string msg;
  for (const auto& diag : validate_problem(*domain, p))
    msg += path + ": " + diag.subject + ": " + diag.reason + "\n";
  if (!msg.empty()) {
    msg.pop_back();
    throw InputError{msg};
  }
  return p;
}

struct SearchOptions {
  std::string domain, problem, out;
  std::string emit = "json";
  std::string flaw_policy = "threats-first";
  std::string reuse_policy = "both-branches";
  SearchConfig config;
};

void add_search_options(CLI::App* cmd, SearchOptions& o) {
  cmd->add_option("--domain", o.domain, "domain file (.dpd)")->required();
  cmd->add_option("--problem", o.problem, "problem file (.dpp)")->required();
  cmd->add_option("--emit", o.emit, "json, dot or text")
      ->check(CLI::IsMember({"json", "dot", "text"}));
  cmd->add_option("--max-steps", o.config.max_steps, "action step budget");
  cmd->add_option("--max-depth", o.config.max_depth, "decomposition depth budget");
  cmd->add_option("--max-nodes", o.config.max_nodes, "search node budget");
  cmd->add_option("--flaw-policy", o.flaw_policy, "threats-first, fifo, lifo or shuffle")
      ->check(CLI::IsMember({"threats-first", "fifo", "lifo", "shuffle"}));
  cmd->add_option("--reuse-policy", o.reuse_policy, "prefer-reuse, prefer-new or both-branches")
      ->check(CLI::IsMember({"prefer-reuse", "prefer-new", "both-branches"}));
  cmd->add_option("--seed", o.config.seed, "seed for the shuffle flaw policy");
  cmd->add_option("--out", o.out, "output file (default: standard output)");
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError{path + ": cannot write"};
  f << text;
}

int run_search(const SearchOptions& o, bool analyze, std::ostream& out) {
  const Domain domain = load_domain(o.domain);
  const Problem problem = load_problem(o.problem, &domain);
  SearchConfig config = o.config;
  config.flaw_policy = *flaw_policy_from_string(o.flaw_policy);
  config.reuse_policy = *reuse_policy_from_string(o.reuse_policy);
  const Format format = *format_from_string(o.emit);

  const SearchOutcome outcome = solve(domain, problem, config);
  EmitContext ctx;
  ctx.statistics = statistics_of(outcome);
  if (const auto* s = std::get_if<Solution>(&outcome)) {
    const auto report = classify_effects(s->plan);
    if (analyze)
      write_output(o.out, emit_intentions(s->plan, report, informational_structure(s->plan), format),
                   out);
    else
      write_output(o.out, emit(s->plan, report, format, ctx), out);
    return kOk;
  }
  const bool budget = std::holds_alternative<BudgetExceeded>(outcome);
  ctx.status = budget ? "budget-exceeded" : "exhausted";
  write_output(o.out, emit_failure(ctx, format), out);
  return budget ? kBudget : kNoPlan;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hierarchical partial-order causal-link planner"};
  app.name("dpocl");
  app.require_subcommand(1);

  SearchOptions plan_opts, analyze_opts;
  auto* plan_cmd = app.add_subcommand("plan", "search for a plan and print it");
  add_search_options(plan_cmd, plan_opts);
  auto* analyze_cmd = app.add_subcommand("analyze", "search, then report intended and side effects");
  add_search_options(analyze_cmd, analyze_opts);

  std::string verify_plan, verify_problem, verify_domain;
  auto* verify_cmd = app.add_subcommand("verify", "audit a .plan.json against its problem");
  verify_cmd->add_option("--plan", verify_plan, "plan document (.plan.json)")->required();
  verify_cmd->add_option("--problem", verify_problem, "problem file (.dpp)")->required();
  verify_cmd->add_option("--domain", verify_domain, "domain file, to validate the problem");

  std::string check_domain, check_problem;
  auto* check_cmd = app.add_subcommand("check", "parse and validate input files");
  check_cmd->add_option("--domain", check_domain, "domain file (.dpd)")->required();
  check_cmd->add_option("--problem", check_problem, "problem file (.dpp)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (plan_cmd->parsed()) return run_search(plan_opts, false, out);
    if (analyze_cmd->parsed()) return run_search(analyze_opts, true, out);
    if (verify_cmd->parsed()) {
      std::optional<Domain> domain;
      if (!verify_domain.empty()) domain = load_domain(verify_domain);
      const Problem problem = load_problem(verify_problem, domain ? &*domain : nullptr);
      const auto plan = unwrap(audit_plan_from_json(slurp(verify_plan), verify_plan));
      const auto report = oracle::verify_soundness(plan, problem);
      out << report.str();
      return report.sound() ? kOk : kNoPlan;
    }
    if (check_cmd->parsed()) {
      const Domain domain = load_domain(check_domain);
      if (!check_problem.empty()) load_problem(check_problem, &domain);
      out << "ok\n";
      return kOk;
    }
  } catch (const InputError& e) {
    err << e.message << "\n";
    return kInputError;
  } catch (const Fault& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace dpocl

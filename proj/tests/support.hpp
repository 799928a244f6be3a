#pragma once

// Shared fixtures and independent reference implementations for tests.

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpocl/intention.hpp"
#include "dpocl/oracle.hpp"
#include "dpocl/parser.hpp"
#include "dpocl/plan.hpp"
#include "dpocl/plan_json.hpp"
#include "dpocl/planner.hpp"

namespace dpocl::testing {

inline std::string corpus_path(const std::string& name) {
  return std::string(DPOCL_CORPUS_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Domain domain_from_text(const std::string& text) {
  auto r = parse_domain(text);
  if (!r.ok()) throw std::runtime_error("domain: " + r.diagnostics.front().str());
  auto diags = validate_domain(*r.value);
  if (!diags.empty())
    throw std::runtime_error("domain: " + diags.front().subject + ": " + diags.front().reason);
  return *r.value;
}

inline Problem problem_from_text(const std::string& text) {
  auto r = parse_problem(text);
  if (!r.ok()) throw std::runtime_error("problem: " + r.diagnostics.front().str());
  return *r.value;
}

inline Domain load_domain(const std::string& name) {
  return domain_from_text(read_file(corpus_path(name)));
}

inline Problem load_problem(const std::string& name) {
  return problem_from_text(read_file(corpus_path(name)));
}

inline Term c(const std::string& name) { return Term::constant(name); }
inline Term v(const std::string& name, std::uint32_t instance = 0) {
  return Term::variable(name, instance);
}
inline Literal lit(const std::string& text) {
  auto r = parse_literal(text);
  if (!r.ok()) throw std::runtime_error("literal: " + text);
  return *r.value;
}

inline std::vector<Term> objects(const std::vector<std::string>& names) {
  std::vector<Term> out;
  for (const auto& n : names) out.push_back(Term::constant(n));
  return out;
}

inline oracle::AuditReport audit(const Plan& plan, const Problem& problem) {
  return oracle::verify_soundness(audit_plan(plan), problem);
}

/// Steps whose kind is `kind`, in id order.
inline std::vector<StepId> steps_of_kind(const Plan& plan, StepKind kind) {
  std::vector<StepId> out;
  for (StepId s : plan.step_ids())
    if (plan.step(s).kind == kind) out.push_back(s);
  return out;
}

/// Intended-effect labels by direct memoized recursion over the three
/// clauses. The corresponding parent effect of an end-subplan precondition
/// is found by literal equality, not through the recorded correspondence.
inline std::map<std::pair<StepId, std::size_t>, bool> intention_oracle(const Plan& plan) {
  std::map<std::pair<StepId, std::size_t>, int> memo;  // 0 busy, 1 no, 2 yes
  const auto& b = plan.bindings();
  std::function<bool(StepId, std::size_t)> intended = [&](StepId s, std::size_t e) -> bool {
    auto key = std::pair{s, e};
    if (auto it = memo.find(key); it != memo.end()) return it->second == 2;
    memo[key] = 0;
    bool yes = false;
    for (const auto& l : plan.causal_links()) {
      if (yes) break;
      if (l.producer != s || l.effect != static_cast<int>(e)) continue;
      const Step& consumer = plan.step(l.consumer);
      if (l.consumer == Plan::kFinal) {
        yes = true;
        break;
      }
      if (consumer.kind == StepKind::EndSubplan) {
        for (const auto& d : plan.decomposition_links()) {
          if (d.end != l.consumer) continue;
          const Step& parent = plan.step(d.parent);
          const Literal want = b.apply(consumer.preconditions[l.precondition]);
          for (std::size_t j = 0; j < parent.effects.size() && !yes; ++j)
            if (b.apply(parent.effects[j]) == want && intended(d.parent, j)) yes = true;
        }
      }
      for (std::size_t j = 0; j < consumer.effects.size() && !yes; ++j)
        if (intended(l.consumer, j)) yes = true;
    }
    memo[key] = yes ? 2 : 1;
    return yes;
  };
  std::map<std::pair<StepId, std::size_t>, bool> out;
  for (StepId s : plan.step_ids())
    for (std::size_t j = 0; j < plan.step(s).effects.size(); ++j) out[{s, j}] = intended(s, j);
  return out;
}

// -- ground-assignment oracle -------------------------------------------------

using Assignment = std::map<VarKey, Term>;

inline Term substitute(const Term& t, const Assignment& a) {
  if (t.is_variable()) {
    auto it = a.find(key_of(t));
    return it == a.end() ? t : it->second;
  }
  if (!t.is_compound()) return t;
  std::vector<Term> args;
  for (const auto& x : t.args) args.push_back(substitute(x, a));
  return Term::compound(t.name, args);
}

inline Literal substitute(const Literal& l, const Assignment& a) {
  std::vector<Term> args;
  for (const auto& x : l.args) args.push_back(substitute(x, a));
  return Literal(l.predicate, args, l.positive);
}

/// Calls `f` with every map from `vars` into `universe`.
inline void for_each_assignment(const std::vector<VarKey>& vars, const std::vector<Term>& universe,
                                const std::function<void(const Assignment&)>& f) {
  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    Assignment a;
    for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = universe[idx[i]];
    f(a);
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == universe.size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
}

/// Does the ground assignment respect every constraint recorded in `b`?
inline bool satisfies(const BindingSet& b, const Assignment& a) {
  for (const auto& [var, value] : b.codesignations())
    if (substitute(var, a) != substitute(value, a)) return false;
  for (const auto& [x, y] : b.noncodesignations())
    if (substitute(b.apply(x), a) == substitute(b.apply(y), a)) return false;
  return true;
}

/// Ground atoms of every state predicate over `constants`.
inline std::vector<Literal> ground_atoms(const Domain& d, const std::vector<std::string>& constants) {
  std::vector<Literal> out;
  for (const auto& p : d.predicates) {
    std::vector<std::size_t> idx(p.arity, 0);
    while (true) {
      std::vector<Term> args;
      for (auto i : idx) args.push_back(c(constants[i]));
      out.emplace_back(p.name, args);
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == constants.size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  }
  return out;
}

struct SyntheticFamily {
  std::string domain_file;
  std::vector<std::string> constants;
  std::vector<Literal> facts;
  // Builds a random initial state from the ground atoms.
  std::function<std::vector<Literal>(const std::vector<Literal>&, std::mt19937_64&)> init;
  std::vector<std::string> goal_predicates = {};  // empty: any state predicate
};

inline std::vector<SyntheticFamily> synthetic_families() {
  auto random_subset = [](const std::vector<Literal>& atoms, std::mt19937_64& rng) {
    std::bernoulli_distribution keep(0.35);
    std::vector<Literal> out;
    for (const auto& a : atoms)
      if (keep(rng)) out.push_back(a);
    return out;
  };
  std::vector<SyntheticFamily> out;
  out.push_back({"synthetic/switches.dpd", {"a", "b", "c"}, {},
                 [random_subset](const std::vector<Literal>& atoms, std::mt19937_64& rng) {
                   std::vector<Literal> init;
                   for (const auto& a : random_subset(atoms, rng))
                     if (a.predicate == "on") init.push_back(a);
                   if (std::bernoulli_distribution(0.8)(rng)) init.push_back(lit("(free)"));
                   return init;
                 }});
  out.push_back({"synthetic/tokens.dpd", {"a", "b", "c"}, {},
                 [random_subset](const std::vector<Literal>& atoms, std::mt19937_64& rng) {
                   std::vector<Literal> init;
                   for (const auto& a : random_subset(atoms, rng))
                     if (a.predicate == "marked") init.push_back(a);
                   std::uniform_int_distribution<int> cell(0, 2);
                   init.push_back(lit("(at " + std::string(1, static_cast<char>('a' + cell(rng))) + ")"));
                   return init;
                 }});
  auto delivery_init = [random_subset](const std::vector<Literal>& atoms, std::mt19937_64& rng) {
    std::vector<Literal> init;
    for (const auto& a : random_subset(atoms, rng))
      if (a.predicate == "clear" || a.predicate == "delivered") init.push_back(a);
    return init;
  };
  out.push_back({"synthetic/delivery.dpd", {"a", "b", "c"}, {lit("(item a)"), lit("(item b)")},
                 delivery_init});
  out.push_back({"synthetic/delivery.dpd", {"a", "b", "c"}, {lit("(item a)"), lit("(item b)")},
                 delivery_init, {"delivered"}});
  return out;
}

struct GeneratedProblem {
  Domain domain;
  Problem problem;
};

/// Deterministic random problems over the synthetic families that the
/// breadth-first oracle can solve within `max_len` actions (and not in zero).
inline std::vector<GeneratedProblem> solvable_problems(std::size_t per_family, std::size_t max_len,
                                                       std::uint64_t seed = 1) {
  std::vector<GeneratedProblem> out;
  for (const auto& fam : synthetic_families()) {
    const Domain d = load_domain(fam.domain_file);
    const auto atoms = ground_atoms(d, fam.constants);
    std::vector<Literal> goal_atoms;
    for (const auto& a : atoms)
      if (fam.goal_predicates.empty() ||
          std::find(fam.goal_predicates.begin(), fam.goal_predicates.end(), a.predicate) !=
              fam.goal_predicates.end())
        goal_atoms.push_back(a);
    std::mt19937_64 rng(seed);
    std::size_t found = 0;
    for (std::size_t attempt = 0; found < per_family && attempt < 50 * per_family; ++attempt) {
      Problem p;
      p.name = d.name + "-" + std::to_string(attempt);
      p.domain = d.name;
      p.facts = fam.facts;
      p.init = fam.init(atoms, rng);
      const std::size_t goals = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
      for (std::size_t g = 0; g < goals; ++g) {
        Literal l =
            goal_atoms[std::uniform_int_distribution<std::size_t>(0, goal_atoms.size() - 1)(rng)];
        if (std::bernoulli_distribution(0.25)(rng)) l = l.negated();
        if (std::find(p.goals.begin(), p.goals.end(), l) == p.goals.end()) p.goals.push_back(l);
      }
      std::vector<Term> objects;
      for (const auto& name : fam.constants) objects.push_back(c(name));
      // Goals already true initially make trivial plans; skip them.
      const auto len = oracle::shortest_solution(d, p, max_len, objects);
      if (!len || *len == 0) continue;
      out.push_back({d, p});
      ++found;
    }
  }
  return out;
}

}  // namespace dpocl::testing

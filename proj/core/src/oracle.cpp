#include "dpocl/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>

#include "dpocl/bindings.hpp"

namespace dpocl::oracle {

State make_state(const std::vector<Literal>& facts) {
  State s;
  for (const auto& f : facts)
    if (f.positive) s.insert(f);
  return s;
}

bool holds(const State& s, const Literal& l) {
  return l.positive ? s.count(l) > 0 : s.count(l.atom()) == 0;
}

namespace {

void apply_effects(State& s, const std::vector<Literal>& effects) {
  for (const auto& e : effects)
    if (!e.positive) s.erase(e.atom());
  for (const auto& e : effects)
    if (e.positive) s.insert(e);
}

}  // namespace

ExecutionTrace execute(const std::vector<Literal>& initial, const std::vector<GroundStep>& steps) {
  for (const auto& st : steps) {
    auto ground = [](const Literal& l) { return l.is_ground(); };
    if (!std::all_of(st.preconditions.begin(), st.preconditions.end(), ground) ||
        !std::all_of(st.effects.begin(), st.effects.end(), ground))
      throw Fault("cannot execute non-ground step " + st.name);
  }
  ExecutionTrace trace;
  State state = make_state(initial);
  for (const auto& st : steps) {
    for (const auto& p : st.preconditions) {
      if (holds(state, p)) continue;
      trace.success = false;
      trace.failed_step = st.id;
      trace.failed_literal = p;
      return trace;
    }
    TraceEntry entry{st.id, state, {}};
    apply_effects(state, st.effects);
    entry.after = state;
    trace.entries.push_back(std::move(entry));
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Brute force

std::string GroundAction::str() const {
  std::string out = "(" + name;
  for (const auto& a : args) out += " " + a.str();
  return out + ")";
}

namespace {

void collect_constants(const Term& t, std::vector<Term>& out) {
  if (t.is_constant()) {
    out.push_back(t);
    return;
  }
  for (const auto& a : t.args) collect_constants(a, out);
}

void collect_constants(const std::vector<Literal>& ls, std::vector<Term>& out) {
  for (const auto& l : ls)
    for (const auto& a : l.args) collect_constants(a, out);
}

}  // namespace

std::vector<Term> mentioned_constants(const Domain& domain, const Problem& problem) {
  std::vector<Term> constants;
  collect_constants(problem.init, constants);
  collect_constants(problem.goals, constants);
  collect_constants(problem.facts, constants);
  for (const auto& op : domain.operators) {
    collect_constants(op.preconditions, constants);
    collect_constants(op.effects, constants);
    for (const auto& p : op.parameters) collect_constants(p, constants);
  }
  std::sort(constants.begin(), constants.end());
  constants.erase(std::unique(constants.begin(), constants.end()), constants.end());
  return constants;
}

std::vector<GroundAction> ground_actions(const Domain& domain, const std::vector<Term>& constants,
                                         std::size_t limit) {
  std::vector<GroundAction> out;
  for (const auto& op : domain.operators) {
    if (op.composite) continue;
    std::function<void(std::size_t, const BindingSet&)> choose = [&](std::size_t i,
                                                                     const BindingSet& b) {
      if (i == op.parameters.size()) {
        auto full = apply_constraints(b, op.bindings);
        if (!full) return;
        GroundAction g{op.name, {}, {}, {}};
        for (const auto& p : op.parameters) g.args.push_back(full->apply(p));
        for (const auto& l : op.preconditions) g.preconditions.push_back(full->apply(l));
        for (const auto& l : op.effects) g.effects.push_back(full->apply(l));
        auto ground = [](const Literal& l) { return l.is_ground(); };
        if (!std::all_of(g.preconditions.begin(), g.preconditions.end(), ground) ||
            !std::all_of(g.effects.begin(), g.effects.end(), ground))
          return;
        if (out.size() >= limit)
          throw Fault("ground action universe exceeds " + std::to_string(limit));
        out.push_back(std::move(g));
        return;
      }
      const Term& p = op.parameters[i];
      if (!b.apply(p).is_variable()) {
        choose(i + 1, b);
        return;
      }
      for (const auto& c : constants)
        if (auto nb = b.unify(p, c)) choose(i + 1, *nb);
    };
    choose(0, BindingSet{});
  }
  return out;
}

std::vector<std::vector<GroundAction>> brute_force(const Domain& domain, const Problem& problem,
                                                   std::size_t max_len, std::vector<Term> objects,
                                                   std::size_t limit) {
  if (objects.empty()) objects = mentioned_constants(domain, problem);
  const auto actions = ground_actions(domain, objects, limit);
  auto satisfied = [&](const State& s) {
    return std::all_of(problem.goals.begin(), problem.goals.end(),
                       [&](const Literal& g) { return holds(s, g); });
  };

  std::vector<std::vector<GroundAction>> out;
  struct Node {
    State state;
    std::vector<std::size_t> seq;
  };
  std::vector<Node> layer{{make_state(problem.init), {}}};
  for (std::size_t len = 0;; ++len) {
    for (const auto& n : layer) {
      if (!satisfied(n.state)) continue;
      std::vector<GroundAction> seq;
      for (auto i : n.seq) seq.push_back(actions[i]);
      out.push_back(std::move(seq));
    }
    if (len == max_len) break;
    std::vector<Node> next;
    for (const auto& n : layer) {
      for (std::size_t i = 0; i < actions.size(); ++i) {
        const auto& a = actions[i];
        if (!std::all_of(a.preconditions.begin(), a.preconditions.end(),
                         [&](const Literal& p) { return holds(n.state, p); }))
          continue;
        Node m{n.state, n.seq};
        apply_effects(m.state, a.effects);
        m.seq.push_back(i);
        next.push_back(std::move(m));
      }
    }
    layer = std::move(next);
  }
  return out;
}

std::optional<std::size_t> shortest_solution(const Domain& domain, const Problem& problem,
                                             std::size_t max_len, std::vector<Term> objects,
                                             std::size_t limit) {
  if (objects.empty()) objects = mentioned_constants(domain, problem);
  const auto actions = ground_actions(domain, objects, limit);
  auto satisfied = [&](const State& s) {
    return std::all_of(problem.goals.begin(), problem.goals.end(),
                       [&](const Literal& g) { return holds(s, g); });
  };
  std::set<State> seen{make_state(problem.init)};
  std::vector<State> layer(seen.begin(), seen.end());
  for (std::size_t len = 0;; ++len) {
    for (const auto& s : layer)
      if (satisfied(s)) return len;
    if (len == max_len) return std::nullopt;
    std::vector<State> next;
    for (const auto& s : layer)
      for (const auto& a : actions) {
        if (!std::all_of(a.preconditions.begin(), a.preconditions.end(),
                         [&](const Literal& p) { return holds(s, p); }))
          continue;
        State t = s;
        apply_effects(t, a.effects);
        if (seen.insert(t).second) next.push_back(std::move(t));
      }
    if (next.empty()) return std::nullopt;
    layer = std::move(next);
  }
}

// ---------------------------------------------------------------------------
// Soundness audit

std::string_view to_string(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::Malformed:
      return "malformed";
    case Violation::Kind::UnsupportedPrecondition:
      return "unsupported-precondition";
    case Violation::Kind::DuplicateSupport:
      return "duplicate-support";
    case Violation::Kind::BadLink:
      return "bad-link";
    case Violation::Kind::Cycle:
      return "cycle";
    case Violation::Kind::Threat:
      return "threat";
    case Violation::Kind::SubplanSupport:
      return "subplan-support";
    case Violation::Kind::SubplanOrdering:
      return "subplan-ordering";
    case Violation::Kind::Unsatisfiable:
      return "unsatisfiable-bindings";
    case Violation::Kind::ExecutionFailure:
      return "execution-failure";
    case Violation::Kind::GoalUnsatisfied:
      return "goal-unsatisfied";
  }
  return "?";
}

std::size_t AuditReport::count(Violation::Kind k) const {
  return static_cast<std::size_t>(std::count_if(
      violations.begin(), violations.end(), [k](const Violation& v) { return v.kind == k; }));
}

std::string AuditReport::str() const {
  std::ostringstream os;
  os << (sound() ? "sound" : "unsound") << ": " << violations.size() << " violation(s), "
     << linearizations << " linearization(s) over " << groundings << " grounding(s)";
  if (truncated) os << " (truncated)";
  os << "\n";
  for (const auto& v : violations) os << "  " << to_string(v.kind) << ": " << v.detail << "\n";
  return os.str();
}

namespace {

using Id = std::uint32_t;

class Auditor {
 public:
  Auditor(const AuditPlan& plan, const Problem& problem, const AuditLimits& limits)
      : plan_(plan), problem_(problem), limits_(limits) {}

  AuditReport run() {
    if (!index_steps() || !check_references() || !build_bindings()) return std::move(report_);
    check_boundary();
    check_support();
    check_links();
    if (!close_orderings()) return std::move(report_);
    check_threats();
    check_subplans();
    check_execution();
    return std::move(report_);
  }

 private:
  void fail(Violation::Kind k, std::string detail) {
    report_.violations.push_back({k, std::move(detail)});
  }

  const AuditStep& step(Id id) const { return plan_.steps[index_.at(id)]; }
  std::string name(Id id) const { return step(id).action + "#" + std::to_string(id); }

  bool index_steps() {
    for (std::size_t i = 0; i < plan_.steps.size(); ++i) {
      const auto& s = plan_.steps[i];
      if (!index_.emplace(s.id, i).second) fail(Violation::Kind::Malformed, "duplicate step id");
      static const std::set<std::string> kinds{"primitive",     "composite",   "initial",
                                               "final",         "begin-subplan", "end-subplan"};
      if (!kinds.count(s.kind)) fail(Violation::Kind::Malformed, "unknown step kind " + s.kind);
      if (s.kind == "initial") initial_.push_back(s.id);
      if (s.kind == "final") final_.push_back(s.id);
    }
    if (initial_.size() != 1 || final_.size() != 1)
      fail(Violation::Kind::Malformed, "plan needs exactly one initial and one final step");
    return report_.sound();
  }

  bool check_references() {
    auto known = [&](Id id) { return index_.count(id) > 0; };
    for (const auto& [a, b] : plan_.orderings)
      if (!known(a) || !known(b)) fail(Violation::Kind::Malformed, "ordering on unknown step");
    for (const auto& l : plan_.links) {
      if (!known(l.producer) || !known(l.consumer)) {
        fail(Violation::Kind::Malformed, "causal link on unknown step");
        continue;
      }
      const auto& p = step(l.producer);
      const auto& c = step(l.consumer);
      if (l.effect == -1 ? p.kind != "initial"
                         : (l.effect < 0 || static_cast<std::size_t>(l.effect) >= p.effects.size()))
        fail(Violation::Kind::Malformed, "causal link names a missing effect of " + name(l.producer));
      if (l.precondition >= c.preconditions.size())
        fail(Violation::Kind::Malformed,
             "causal link names a missing precondition of " + name(l.consumer));
    }
    for (const auto& d : plan_.decompositions) {
      bool ok = known(d.parent) && known(d.begin) && known(d.end) &&
                std::all_of(d.members.begin(), d.members.end(), known);
      if (!ok) {
        fail(Violation::Kind::Malformed, "decomposition on unknown step");
        continue;
      }
      if (step(d.parent).kind != "composite" || step(d.begin).kind != "begin-subplan" ||
          step(d.end).kind != "end-subplan")
        fail(Violation::Kind::Malformed, "decomposition of " + name(d.parent) + " has wrong kinds");
    }
    for (const auto& s : plan_.steps) {
      if (s.kind != "composite") continue;
      auto n = std::count_if(plan_.decompositions.begin(), plan_.decompositions.end(),
                             [&](const AuditDecomposition& d) { return d.parent == s.id; });
      if (n != 1) fail(Violation::Kind::Malformed, name(s.id) + " is not expanded exactly once");
    }
    return report_.sound();
  }

  bool build_bindings() {
    for (const auto& [v, value] : plan_.codesignations) {
      auto next = bindings_.unify(v, value);
      if (!next) {
        fail(Violation::Kind::Unsatisfiable, v.str() + " = " + value.str() + " is inconsistent");
        return false;
      }
      bindings_ = std::move(*next);
    }
    for (const auto& [a, b] : plan_.noncodesignations) {
      auto next = bindings_.separate(a, b);
      if (!next) {
        fail(Violation::Kind::Unsatisfiable, a.str() + " != " + b.str() + " is violated");
        return false;
      }
      bindings_ = std::move(*next);
    }
    return true;
  }

  Literal bound(const Literal& l) const { return bindings_.apply(l); }

  static bool same_set(std::vector<Literal> a, std::vector<Literal> b) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return a == b;
  }

  void check_boundary() {
    std::vector<Literal> init, goals;
    for (const auto& l : step(initial_[0]).effects) init.push_back(bound(l));
    for (const auto& l : step(final_[0]).preconditions) goals.push_back(bound(l));
    if (!same_set(init, problem_.init))
      fail(Violation::Kind::Malformed, "initial step does not assert the problem's initial state");
    if (!same_set(goals, problem_.goals))
      fail(Violation::Kind::Malformed, "final step does not require the problem's goals");
  }

  void check_support() {
    for (const auto& s : plan_.steps) {
      for (std::size_t i = 0; i < s.preconditions.size(); ++i) {
        auto n = std::count_if(plan_.links.begin(), plan_.links.end(), [&](const AuditLink& l) {
          return l.consumer == s.id && l.precondition == i;
        });
        const std::string what = bound(s.preconditions[i]).str() + " of " + name(s.id);
        if (n == 0) fail(Violation::Kind::UnsupportedPrecondition, what);
        if (n > 1) fail(Violation::Kind::DuplicateSupport, what);
      }
    }
  }

  void check_links() {
    for (const auto& l : plan_.links) {
      const Literal cond = bound(l.condition);
      const Literal pre = bound(step(l.consumer).preconditions[l.precondition]);
      const std::string what =
          name(l.producer) + " -" + cond.str() + "-> " + name(l.consumer);
      if (pre != cond) fail(Violation::Kind::BadLink, what + " does not match " + pre.str());
      if (l.effect >= 0) {
        const Literal eff = bound(step(l.producer).effects[static_cast<std::size_t>(l.effect)]);
        if (eff != cond) fail(Violation::Kind::BadLink, what + " does not match " + eff.str());
        continue;
      }
      if (cond.positive) {
        fail(Violation::Kind::BadLink, what + " claims closed-world support for a positive literal");
        continue;
      }
      for (const auto& fact : problem_.init)
        if (unify(cond.atom(), fact, bindings_))
          fail(Violation::Kind::BadLink, what + " may be contradicted by initial " + fact.str());
    }
  }

  bool reach(Id a, Id b) const { return closure_[index_.at(a)][index_.at(b)]; }

  bool close_orderings() {
    const std::size_t n = plan_.steps.size();
    std::vector<std::vector<std::size_t>> succ(n);
    for (const auto& [a, b] : plan_.orderings) succ[index_.at(a)].push_back(index_.at(b));
    for (const auto& l : plan_.links) succ[index_.at(l.producer)].push_back(index_.at(l.consumer));
    closure_.assign(n, std::vector<bool>(n, false));
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::size_t> todo(succ[s].begin(), succ[s].end());
      while (!todo.empty()) {
        auto x = todo.back();
        todo.pop_back();
        if (closure_[s][x]) continue;
        closure_[s][x] = true;
        for (auto y : succ[x]) todo.push_back(y);
      }
    }
    for (std::size_t s = 0; s < n; ++s)
      if (closure_[s][s]) {
        fail(Violation::Kind::Cycle, "ordering cycle through " + name(plan_.steps[s].id));
        return false;
      }
    return true;
  }

  void check_threats() {
    for (const auto& l : plan_.links) {
      for (const auto& s : plan_.steps) {
        if (s.id == l.producer || s.id == l.consumer) continue;
        if (reach(s.id, l.producer) || reach(l.consumer, s.id)) continue;
        for (const auto& e : s.effects) {
          if (e.positive == l.condition.positive || e.predicate != l.condition.predicate ||
              e.arity() != l.condition.arity())
            continue;
          if (!unify_negation(e, l.condition, bindings_)) continue;
          fail(Violation::Kind::Threat, name(s.id) + " may clobber " + bound(l.condition).str() +
                                            " between " + name(l.producer) + " and " +
                                            name(l.consumer));
          break;
        }
      }
    }
  }

  std::vector<Id> inside(const AuditDecomposition& d) const {
    std::vector<Id> out;
    std::vector<const AuditDecomposition*> todo{&d};
    while (!todo.empty()) {
      const auto* cur = todo.back();
      todo.pop_back();
      for (Id m : cur->members) {
        if (std::find(out.begin(), out.end(), m) != out.end()) continue;
        out.push_back(m);
        for (const auto& sub : plan_.decompositions)
          if (sub.parent == m) {
            out.push_back(sub.begin);
            out.push_back(sub.end);
            todo.push_back(&sub);
          }
      }
    }
    return out;
  }

  void check_subplans() {
    for (const auto& d : plan_.decompositions) {
      for (Id m : d.members)
        if (!reach(d.begin, m) || !reach(m, d.end))
          fail(Violation::Kind::SubplanOrdering,
               name(m) + " is not inside the subplan of " + name(d.parent));
      const auto in = inside(d);
      for (const auto& l : plan_.links) {
        if (l.consumer != d.end) continue;
        const bool ok = l.producer == d.begin ||
                        std::find(in.begin(), in.end(), l.producer) != in.end() ||
                        reach(l.producer, d.begin);
        if (!ok)
          fail(Violation::Kind::SubplanSupport,
               name(l.producer) + " supports " + name(d.end) + " from after the subplan begins");
      }
    }
  }

  // -- execution ---------------------------------------------------------------

  std::vector<Term> universe() const {
    std::vector<Term> out;
    auto add = [&](const std::vector<Literal>& ls) {
      for (const auto& l : ls)
        for (const auto& a : l.args) collect_ground_subterms(bindings_.apply(a), out);
    };
    add(problem_.init);
    add(problem_.goals);
    add(problem_.facts);
    for (const auto& s : plan_.steps) {
      add(s.preconditions);
      add(s.effects);
      for (const auto& a : s.args) collect_ground_subterms(bindings_.apply(a), out);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::vector<BindingSet> groundings(const std::vector<Id>& prims) {
    std::vector<VarKey> vars;
    for (Id p : prims) {
      const auto& s = step(p);
      for (const auto& l : s.preconditions) collect_variables(bound(l), vars);
      for (const auto& l : s.effects) collect_variables(bound(l), vars);
    }
    std::vector<BindingSet> out;
    auto values = universe();
    // Free variables may also stand for objects nothing mentions; one fresh
    // constant per variable is enough to meet every non-codesignation.
    std::size_t fresh = 0;
    for (std::size_t k = 0; k < vars.size(); ++k) {
      Term c;
      do {
        c = Term::constant("object-" + std::to_string(++fresh));
      } while (std::binary_search(values.begin(), values.end(), c));
      values.push_back(c);
    }
    std::function<void(std::size_t, const BindingSet&)> assign = [&](std::size_t i,
                                                                     const BindingSet& b) {
      if (out.size() >= limits_.max_groundings) {
        report_.truncated = true;
        return;
      }
      if (i == vars.size()) {
        out.push_back(b);
        return;
      }
      const Term v = Term::variable(vars[i].name, vars[i].instance);
      if (!b.apply(v).is_variable()) {
        assign(i + 1, b);
        return;
      }
      for (const auto& c : values)
        if (auto nb = b.unify(v, c)) assign(i + 1, *nb);
    };
    assign(0, bindings_);
    return out;
  }

  void check_execution() {
    std::vector<Id> prims;
    for (const auto& s : plan_.steps)
      if (s.kind == "primitive") prims.push_back(s.id);

    const auto grounds = groundings(prims);
    if (grounds.empty()) {
      fail(Violation::Kind::Unsatisfiable, "no grounding of the plan respects its bindings");
      return;
    }
    report_.groundings = grounds.size();

    std::vector<std::vector<Id>> orders;
    std::vector<Id> current;
    std::vector<bool> used(prims.size(), false);
    std::function<void()> extend = [&] {
      if (orders.size() >= limits_.max_linearizations) {
        report_.truncated = true;
        return;
      }
      if (current.size() == prims.size()) {
        orders.push_back(current);
        return;
      }
      for (std::size_t i = 0; i < prims.size(); ++i) {
        if (used[i]) continue;
        bool ready = true;
        for (std::size_t j = 0; j < prims.size() && ready; ++j)
          if (!used[j] && j != i && reach(prims[j], prims[i])) ready = false;
        if (!ready) continue;
        used[i] = true;
        current.push_back(prims[i]);
        extend();
        current.pop_back();
        used[i] = false;
      }
    };
    extend();
    report_.linearizations = orders.size();

    for (const auto& g : grounds) {
      for (const auto& order : orders) {
        std::vector<GroundStep> seq;
        for (Id id : order) {
          const auto& s = step(id);
          GroundStep gs{id, s.action, {}, {}};
          for (const auto& l : s.preconditions) gs.preconditions.push_back(g.apply(l));
          for (const auto& l : s.effects) gs.effects.push_back(g.apply(l));
          seq.push_back(std::move(gs));
        }
        auto trace = execute(problem_.init, seq);
        if (!trace.success) {
          fail(Violation::Kind::ExecutionFailure,
               name(*trace.failed_step) + " finds " + trace.failed_literal->str() + " false");
          return;
        }
        State end = make_state(problem_.init);
        if (!trace.entries.empty()) end = trace.entries.back().after;
        for (const auto& goal : problem_.goals)
          if (!holds(end, goal)) {
            fail(Violation::Kind::GoalUnsatisfied, goal.str() + " false after a linearization");
            return;
          }
      }
    }
  }

  const AuditPlan& plan_;
  const Problem& problem_;
  AuditLimits limits_;
  AuditReport report_;
  std::map<Id, std::size_t> index_;
  std::vector<Id> initial_, final_;
  BindingSet bindings_;
  std::vector<std::vector<bool>> closure_;
};

}  // namespace

AuditReport verify_soundness(const AuditPlan& plan, const Problem& problem,
                             const AuditLimits& limits) {
  return Auditor(plan, problem, limits).run();
}

}  // namespace dpocl::oracle

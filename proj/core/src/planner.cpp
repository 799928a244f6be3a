#include "dpocl/planner.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace dpocl {

std::optional<FlawPolicy> flaw_policy_from_string(std::string_view s) {
  if (s == "threats-first") return FlawPolicy::ThreatsFirst;
  if (s == "fifo") return FlawPolicy::Fifo;
  if (s == "lifo") return FlawPolicy::Lifo;
  if (s == "shuffle") return FlawPolicy::Shuffle;
  return std::nullopt;
}

std::optional<ReusePolicy> reuse_policy_from_string(std::string_view s) {
  if (s == "prefer-reuse") return ReusePolicy::PreferReuse;
  if (s == "prefer-new") return ReusePolicy::PreferNew;
  if (s == "both-branches") return ReusePolicy::BothBranches;
  return std::nullopt;
}

std::string_view to_string(FlawPolicy p) {
  switch (p) {
    case FlawPolicy::ThreatsFirst:
      return "threats-first";
    case FlawPolicy::Fifo:
      return "fifo";
    case FlawPolicy::Lifo:
      return "lifo";
    case FlawPolicy::Shuffle:
      return "shuffle";
  }
  return "?";
}

std::string_view to_string(ReusePolicy p) {
  switch (p) {
    case ReusePolicy::PreferReuse:
      return "prefer-reuse";
    case ReusePolicy::PreferNew:
      return "prefer-new";
    case ReusePolicy::BothBranches:
      return "both-branches";
  }
  return "?";
}

const SearchStatistics& statistics_of(const SearchOutcome& outcome) {
  return std::visit([](const auto& o) -> const SearchStatistics& { return o.statistics; },
                    outcome);
}

namespace {

Step instantiate(const ActionOperator& op, std::uint32_t instance) {
  Step s;
  s.kind = op.composite ? StepKind::Composite : StepKind::Primitive;
  s.action = op.name;
  s.instance = instance;
  s.args.reserve(op.parameters.size());
  for (const auto& p : op.parameters) s.args.push_back(rename_fresh(p, instance));
  s.preconditions = rename_fresh(op.preconditions, instance);
  s.effects = rename_fresh(op.effects, instance);
  return s;
}

std::vector<BindingConstraint> rename_constraints(std::span<const BindingConstraint> cs,
                                                  std::uint32_t instance) {
  std::vector<BindingConstraint> out;
  out.reserve(cs.size());
  for (const auto& c : cs)
    out.push_back({c.equal, rename_fresh(c.lhs, instance), rename_fresh(c.rhs, instance)});
  return out;
}

bool precondition_supported(const Plan& plan, StepId step, std::size_t index) {
  return std::any_of(plan.causal_links().begin(), plan.causal_links().end(),
                     [&](const CausalLink& l) {
                       return l.consumer == step && l.precondition == index;
                     });
}

/// Every way to make `atom` differ from each initial fact it could match:
/// one separated argument position per conflicting fact.
void closed_world_separations(const BindingSet& bindings, const Literal& atom,
                              const std::vector<Literal>& init, std::size_t i,
                              std::vector<BindingSet>& out) {
  while (i < init.size() &&
         (init[i].predicate != atom.predicate || !unify(atom, init[i], bindings)))
    ++i;
  if (i == init.size()) {
    out.push_back(bindings);
    return;
  }
  for (std::size_t a = 0; a < atom.args.size(); ++a)
    if (auto next = bindings.separate(atom.args[a], init[i].args[a]))
      closed_world_separations(*next, atom, init, i + 1, out);
}

}  // namespace

Planner::Planner(const Domain& domain, const Problem& problem, SearchConfig config)
    : domain_(domain),
      problem_(problem),
      kb_(make_knowledge_base(domain, problem)),
      config_(config) {}

Plan Planner::root() const { return init_plan(problem_); }

// ---------------------------------------------------------------------------
// Causal refinement

std::vector<Plan> Planner::refine_causal(const Plan& plan, const OpenCondition& flaw) const {
  const Literal& goal = flaw.condition;
  const StepId consumer = flaw.step;

  auto link_into = [&](Plan next, const BindingSet& b, StepId producer,
                       int effect) -> std::optional<Plan> {
    next.set_bindings(b);
    if (!next.add_causal_link({producer, effect, goal, consumer, flaw.precondition}))
      return std::nullopt;
    next.refresh_agenda();
    return next;
  };

  std::vector<Plan> initial, reuse, fresh;

  const Step& init = plan.step(Plan::kInitial);
  for (std::size_t j = 0; j < init.effects.size(); ++j)
    if (auto b = unify(init.effects[j], goal, plan.bindings()))
      if (auto p = link_into(plan, *b, Plan::kInitial, static_cast<int>(j)))
        initial.push_back(std::move(*p));
  if (!goal.positive) {
    std::vector<BindingSet> separations;
    closed_world_separations(plan.bindings(), goal.atom(), init.effects, 0, separations);
    for (const auto& b : separations)
      if (auto p = link_into(plan, b, Plan::kInitial, kClosedWorldEffect))
        initial.push_back(std::move(*p));
  }

  for (StepId s : plan.step_ids()) {
    const Step& st = plan.step(s);
    if (s == consumer || st.kind == StepKind::Initial || st.kind == StepKind::Final ||
        st.kind == StepKind::EndSubplan)
      continue;
    if (plan.precedes(consumer, s)) continue;
    for (std::size_t j = 0; j < st.effects.size(); ++j)
      if (auto b = unify(st.effects[j], goal, plan.bindings()))
        if (auto p = link_into(plan, *b, s, static_cast<int>(j))) reuse.push_back(std::move(*p));
  }

  if (plan.action_step_count() < config_.max_steps) {
    for (const auto& op : domain_.operators) {
      for (std::size_t j = 0; j < op.effects.size(); ++j) {
        const Literal& e = op.effects[j];
        if (e.predicate != goal.predicate || e.positive != goal.positive) continue;
        Plan next = plan;
        Step st = instantiate(op, next.fresh_instance());
        auto b = apply_constraints(plan.bindings(), rename_constraints(op.bindings, st.instance));
        if (b) b = unify(st.effects[j], goal, *b);
        if (!b) continue;
        StepId id = next.add_step(std::move(st));
        if (auto p = link_into(std::move(next), *b, id, static_cast<int>(j)))
          fresh.push_back(std::move(*p));
      }
    }
  }

  if (config_.reuse_policy == ReusePolicy::PreferReuse && !reuse.empty()) fresh.clear();
  if (config_.reuse_policy == ReusePolicy::PreferNew && !fresh.empty()) reuse.clear();

  std::vector<Plan> out = std::move(initial);
  auto& first = config_.reuse_policy == ReusePolicy::PreferNew ? fresh : reuse;
  auto& second = config_.reuse_policy == ReusePolicy::PreferNew ? reuse : fresh;
  for (auto& p : first) out.push_back(std::move(p));
  for (auto& p : second) out.push_back(std::move(p));
  return out;
}

// ---------------------------------------------------------------------------
// Decompositional refinement

namespace {

struct TemplateChoice {
  std::optional<StepId> reused;  // nullopt: fresh instance of the operator
};

std::vector<StepId> ancestors_of(const Plan& plan, StepId id) {
  std::vector<StepId> out;
  std::vector<StepId> todo{id};
  while (!todo.empty()) {
    StepId cur = todo.back();
    todo.pop_back();
    for (const auto& d : plan.decomposition_links()) {
      if (std::find(d.members.begin(), d.members.end(), cur) == d.members.end()) continue;
      if (std::find(out.begin(), out.end(), d.parent) != out.end()) continue;
      out.push_back(d.parent);
      todo.push_back(d.parent);
    }
  }
  return out;
}

}  // namespace

std::vector<Plan> Planner::refine_decomposition(const Plan& plan,
                                                const UnexpandedComposite& flaw) const {
  std::vector<Plan> out;
  const Step& parent = plan.step(flaw.step);
  if (parent.kind != StepKind::Composite || plan.decomposition_of(flaw.step)) return out;
  if (plan.depth_of(flaw.step) + 1 > config_.max_depth) return out;

  const auto excluded = [&] {
    auto a = ancestors_of(plan, flaw.step);
    a.push_back(flaw.step);
    return a;
  }();

  for (const DecompositionSchema* schema : domain_.schemata_for(parent.action)) {
    Plan base = plan;
    const std::uint32_t inst = base.fresh_instance();

    std::vector<Term> params;
    for (const auto& p : schema->parameters) params.push_back(rename_fresh(p, inst));
    auto bound = base.bindings().unify(params, parent.args);
    if (!bound) continue;
    bound = apply_constraints(*bound, rename_constraints(schema->bindings, inst));
    if (!bound) continue;
    const auto constraints = rename_fresh(schema->constraints, inst);

    std::vector<StepTemplate> templates = schema->steps;
    for (auto& t : templates)
      for (auto& a : t.args) a = rename_fresh(a, inst);

    for (const BindingSet& licensed : kb_satisfy(kb_, constraints, *bound)) {
      // Enumerate realizations of the step templates: reuse or instantiate.
      std::vector<TemplateChoice> choice(templates.size());
      std::vector<StepId> used;

      auto build = [&](const BindingSet& b) {
        Plan next = base;
        next.set_bindings(b);
        BindingSet cur = b;
        std::map<std::string, StepId, std::less<>> label_of;
        std::vector<StepId> members;
        std::vector<StepId> fresh_ids;

        Step begin;
        begin.kind = StepKind::BeginSubplan;
        begin.action = "begin-" + parent.action;
        begin.args = parent.args;
        begin.effects = parent.preconditions;
        Step end;
        end.kind = StepKind::EndSubplan;
        end.action = "end-" + parent.action;
        end.args = parent.args;
        end.preconditions = parent.effects;
        const StepId begin_id = next.add_step(std::move(begin));
        const StepId end_id = next.add_step(std::move(end));
        label_of.emplace(std::string(kStartLabel), begin_id);
        label_of.emplace(std::string(kFinalLabel), end_id);

        for (std::size_t i = 0; i < templates.size(); ++i) {
          StepId id;
          if (choice[i].reused) {
            id = *choice[i].reused;
          } else {
            const auto* op = domain_.find_operator(templates[i].action);
            if (!op) return;
            Step st = instantiate(*op, next.fresh_instance());
            auto nb = apply_constraints(cur, rename_constraints(op->bindings, st.instance));
            if (nb) nb = nb->unify(st.args, templates[i].args);
            if (!nb) return;
            cur = std::move(*nb);
            id = next.add_step(std::move(st));
            fresh_ids.push_back(id);
          }
          members.push_back(id);
          label_of.emplace(templates[i].label, id);
        }
        if (next.action_step_count() > config_.max_steps) return;
        next.set_bindings(cur);

        DecompositionLink link;
        link.parent = flaw.step;
        link.begin = begin_id;
        link.end = end_id;
        link.members = members;
        link.constraints = constraints;
        for (std::size_t i = 0; i < parent.effects.size(); ++i)
          link.correspondence.emplace_back(i, i);
        if (!next.add_decomposition(std::move(link))) return;

        for (const auto& [a, b2] : schema->orderings)
          if (!next.add_ordering(label_of.at(a), label_of.at(b2))) return;

        for (const auto& lt : schema->links) {
          const StepId prod = label_of.at(lt.producer);
          const StepId cons = label_of.at(lt.consumer);
          const Literal cond = rename_fresh(lt.condition, inst);
          const Step& ps = next.step(prod);
          const Step& cs = next.step(cons);
          bool linked = false;
          for (std::size_t j = 0; j < ps.effects.size() && !linked; ++j) {
            auto b1 = unify(ps.effects[j], cond, next.bindings());
            if (!b1) continue;
            for (std::size_t k = 0; k < cs.preconditions.size() && !linked; ++k) {
              if (precondition_supported(next, cons, k)) continue;
              auto b2 = unify(cs.preconditions[k], cond, *b1);
              if (!b2) continue;
              next.set_bindings(*b2);
              if (!next.add_causal_link({prod, static_cast<int>(j), cs.preconditions[k], cons, k}))
                return;
              linked = true;
            }
          }
          if (!linked) return;
        }
        next.refresh_agenda();
        out.push_back(std::move(next));
      };

      std::function<void(std::size_t, const BindingSet&)> realize =
          [&](std::size_t i, const BindingSet& b) {
            if (i == templates.size()) {
              build(b);
              return;
            }
            const auto& t = templates[i];
            std::vector<std::pair<StepId, BindingSet>> reuse;
            for (StepId s : plan.step_ids()) {
              const Step& st = plan.step(s);
              if (st.action != t.action) continue;
              if (st.kind != StepKind::Primitive && st.kind != StepKind::Composite) continue;
              if (std::find(excluded.begin(), excluded.end(), s) != excluded.end()) continue;
              if (std::find(used.begin(), used.end(), s) != used.end()) continue;
              if (auto nb = b.unify(st.args, t.args)) reuse.emplace_back(s, std::move(*nb));
            }
            const bool can_new = domain_.find_operator(t.action) != nullptr;
            bool want_reuse = true;
            bool want_new = can_new;
            if (config_.reuse_policy == ReusePolicy::PreferReuse && !reuse.empty())
              want_new = false;
            if (config_.reuse_policy == ReusePolicy::PreferNew && can_new) want_reuse = false;

            auto try_reuse = [&] {
              if (!want_reuse) return;
              for (auto& [s, nb] : reuse) {
                choice[i].reused = s;
                used.push_back(s);
                realize(i + 1, nb);
                used.pop_back();
              }
            };
            auto try_new = [&] {
              if (!want_new) return;
              choice[i].reused.reset();
              realize(i + 1, b);
            };
            if (config_.reuse_policy == ReusePolicy::PreferNew) {
              try_new();
              try_reuse();
            } else {
              try_reuse();
              try_new();
            }
          };
      realize(0, licensed);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Threat resolution

std::vector<Plan> Planner::resolve_threat(const Plan& plan, const Threat& flaw) const {
  std::vector<Plan> out;
  const CausalLink& link = plan.causal_links().at(flaw.link);
  const Step& threat = plan.step(flaw.step);

  if (auto p = add_ordering(plan, link.consumer, flaw.step)) out.push_back(std::move(*p));
  if (auto p = add_ordering(plan, flaw.step, link.producer)) out.push_back(std::move(*p));

  std::vector<const Literal*> clobbering;
  for (const auto& e : threat.effects)
    if (unify_negation(e, link.condition, plan.bindings())) clobbering.push_back(&e);

  std::function<void(std::size_t, const BindingSet&)> separate = [&](std::size_t i,
                                                                     const BindingSet& b) {
    if (i == clobbering.size()) {
      Plan next = plan;
      next.set_bindings(b);
      next.refresh_agenda();
      out.push_back(std::move(next));
      return;
    }
    const Literal& e = *clobbering[i];
    if (!unify_negation(e, link.condition, b)) {
      separate(i + 1, b);
      return;
    }
    for (std::size_t a = 0; a < e.args.size(); ++a)
      if (auto nb = b.separate(e.args[a], link.condition.args[a])) separate(i + 1, *nb);
  };
  if (!clobbering.empty()) separate(0, plan.bindings());
  return out;
}

std::vector<Plan> Planner::refine(const Plan& plan, const Flaw& flaw) const {
  return std::visit(
      [&](const auto& f) -> std::vector<Plan> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, OpenCondition>)
          return refine_causal(plan, f);
        else if constexpr (std::is_same_v<T, UnexpandedComposite>)
          return refine_decomposition(plan, f);
        else
          return resolve_threat(plan, f);
      },
      flaw);
}

std::optional<Flaw> Planner::select_flaw(const Plan& plan, std::mt19937_64* rng) const {
  const auto& agenda = plan.agenda();
  if (agenda.empty()) return std::nullopt;
  switch (config_.flaw_policy) {
    case FlawPolicy::Fifo:
      return agenda.front();
    case FlawPolicy::Lifo:
      return agenda.back();
    case FlawPolicy::Shuffle: {
      if (std::holds_alternative<Threat>(agenda.front()) || !rng) return agenda.front();
      std::uniform_int_distribution<std::size_t> pick(0, agenda.size() - 1);
      return agenda[pick(*rng)];
    }
    case FlawPolicy::ThreatsFirst:
      break;
  }
  if (std::holds_alternative<Threat>(agenda.front())) return agenda.front();
  for (const auto& f : agenda)
    if (std::holds_alternative<UnexpandedComposite>(f)) return f;
  for (auto it = agenda.rbegin(); it != agenda.rend(); ++it)
    if (std::holds_alternative<OpenCondition>(*it)) return *it;
  return agenda.front();
}

// ---------------------------------------------------------------------------
// Search

SearchOutcome Planner::solve() const {
  SearchStatistics stats;
  std::mt19937_64 rng(config_.seed);

  struct Frame {
    std::vector<Plan> children;
    std::size_t next = 0;
  };
  std::vector<Frame> stack;

  // Returns a finished outcome, or nullopt to keep searching.
  auto expand = [&](const Plan& plan) -> std::optional<SearchOutcome> {
    if (stats.nodes_expanded >= config_.max_nodes) return BudgetExceeded{stats};
    ++stats.nodes_expanded;
    stats.max_depth = std::max(stats.max_depth, stack.size());
    auto flaw = select_flaw(plan, &rng);
    if (!flaw) return Solution{prune_unused(plan), stats};
    auto children = refine(plan, *flaw);
    if (children.empty()) {
      ++stats.backtracks;
      return std::nullopt;
    }
    stack.push_back({std::move(children), 0});
    return std::nullopt;
  };

  if (auto done = expand(root())) return *done;
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next == top.children.size()) {
      stack.pop_back();
      continue;
    }
    Plan child = std::move(top.children[top.next++]);
    if (auto done = expand(child)) return *done;
  }
  return Exhausted{stats};
}

SearchOutcome solve(const Domain& domain, const Problem& problem, const SearchConfig& config) {
  return Planner(domain, problem, config).solve();
}

Plan prune_unused(const Plan& plan) {
  Plan out = plan;
  bool changed = true;
  while (changed) {
    changed = false;
    for (StepId s : out.step_ids()) {
      if (out.step(s).kind != StepKind::Primitive) continue;
      const auto& links = out.causal_links();
      bool used = std::any_of(links.begin(), links.end(),
                              [s](const CausalLink& l) { return l.producer == s; });
      if (used) continue;
      out.remove_step(s);
      changed = true;
    }
  }
  out.refresh_agenda();
  return out;
}

}  // namespace dpocl

#include "dpocl/plan.hpp"

#include <algorithm>
#include <bit>
#include <functional>

namespace dpocl {

std::string_view to_string(StepKind kind) {
  switch (kind) {
    case StepKind::Primitive:
      return "primitive";
    case StepKind::Composite:
      return "composite";
    case StepKind::Initial:
      return "initial";
    case StepKind::Final:
      return "final";
    case StepKind::BeginSubplan:
      return "begin-subplan";
    case StepKind::EndSubplan:
      return "end-subplan";
  }
  return "?";
}

std::optional<StepKind> step_kind_from_string(std::string_view s) {
  for (auto k : {StepKind::Primitive, StepKind::Composite, StepKind::Initial, StepKind::Final,
                 StepKind::BeginSubplan, StepKind::EndSubplan})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// OrderingGraph

void OrderingGraph::resize(std::size_t nodes) {
  if (nodes <= nodes_) return;
  std::size_t needed = (nodes + 63) / 64;
  if (needed > words_) {
    std::size_t words = std::max<std::size_t>(needed, words_ * 2);
    std::vector<std::uint64_t> next(nodes * words, 0);
    for (std::size_t r = 0; r < nodes_; ++r)
      std::copy_n(reach_.data() + r * words_, words_, next.data() + r * words);
    reach_ = std::move(next);
    words_ = words;
  } else {
    reach_.resize(nodes * words_, 0);
  }
  nodes_ = nodes;
}

bool OrderingGraph::precedes(StepId a, StepId b) const {
  if (a >= nodes_ || b >= nodes_) return false;
  return (row(a)[b / 64] >> (b % 64)) & 1U;
}

void OrderingGraph::close(StepId before, StepId after) {
  const std::uint64_t* src = row(after);
  const std::uint64_t bit = std::uint64_t{1} << (after % 64);
  for (StepId x = 0; x < nodes_; ++x) {
    if (x != before && !precedes(x, before)) continue;
    std::uint64_t* dst = row(x);
    for (std::size_t w = 0; w < words_; ++w) dst[w] |= src[w];
    dst[after / 64] |= bit;
  }
}

bool OrderingGraph::add(StepId before, StepId after) {
  if (before >= nodes_ || after >= nodes_)
    throw Fault("ordering references unknown step " + std::to_string(std::max(before, after)));
  if (before == after || precedes(after, before)) return false;
  if (!precedes(before, after)) close(before, after);
  auto p = std::make_pair(before, after);
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), p);
  if (it == pairs_.end() || *it != p) pairs_.insert(it, p);
  return true;
}

void OrderingGraph::isolate(StepId s) {
  std::erase_if(pairs_, [s](const auto& p) { return p.first == s || p.second == s; });
  std::fill(reach_.begin(), reach_.end(), 0);
  for (const auto& [a, b] : pairs_)
    if (!precedes(a, b)) close(a, b);
}

// ---------------------------------------------------------------------------
// Plan

Plan Plan::from_problem(const Problem& problem) {
  Plan p;
  auto init = std::make_shared<Step>();
  init->id = kInitial;
  init->kind = StepKind::Initial;
  init->action = "initial";
  init->effects = problem.init;
  auto fin = std::make_shared<Step>();
  fin->id = kFinal;
  fin->kind = StepKind::Final;
  fin->action = "final";
  fin->preconditions = problem.goals;
  p.steps_ = {std::move(init), std::move(fin)};
  p.order_.resize(2);
  p.order_.add(kInitial, kFinal);
  p.refresh_agenda();
  return p;
}

Plan init_plan(const Problem& problem) { return Plan::from_problem(problem); }

bool Plan::has_step(StepId id) const { return id < steps_.size() && steps_[id] != nullptr; }

const Step& Plan::step(StepId id) const {
  if (!has_step(id)) throw Fault("unknown step id " + std::to_string(id));
  return *steps_[id];
}

std::vector<StepId> Plan::step_ids() const {
  std::vector<StepId> out;
  for (StepId i = 0; i < steps_.size(); ++i)
    if (steps_[i]) out.push_back(i);
  return out;
}

std::size_t Plan::action_step_count() const {
  return static_cast<std::size_t>(std::count_if(steps_.begin(), steps_.end(), [](const auto& s) {
    return s && (s->kind == StepKind::Primitive || s->kind == StepKind::Composite);
  }));
}

bool Plan::precedes(StepId a, StepId b) const { return order_.precedes(a, b); }

bool Plan::possibly_between(StepId s, StepId a, StepId b) const {
  step(s), step(a), step(b);  // validates ids
  if (s == a || s == b || a == b) return false;
  return !precedes(s, a) && !precedes(b, s) && !precedes(b, a);
}

const DecompositionLink* Plan::decomposition_of(StepId parent) const {
  for (const auto& d : decompositions_)
    if (d.parent == parent) return &d;
  return nullptr;
}

const DecompositionLink* Plan::decomposition_ending_at(StepId end) const {
  for (const auto& d : decompositions_)
    if (d.end == end) return &d;
  return nullptr;
}

std::size_t Plan::depth_of(StepId id) const {
  std::size_t depth = 0;
  for (const auto& d : decompositions_)
    if (std::find(d.members.begin(), d.members.end(), id) != d.members.end())
      depth = std::max(depth, depth_of(d.parent) + 1);
  return depth;
}

std::vector<StepId> Plan::subplan_closure(const DecompositionLink& d) const {
  std::vector<StepId> out;
  std::vector<const DecompositionLink*> todo{&d};
  while (!todo.empty()) {
    const auto* cur = todo.back();
    todo.pop_back();
    for (StepId m : cur->members) {
      if (std::find(out.begin(), out.end(), m) != out.end()) continue;
      out.push_back(m);
      if (const auto* sub = decomposition_of(m)) {
        out.push_back(sub->begin);
        out.push_back(sub->end);
        todo.push_back(sub);
      }
    }
  }
  return out;
}

std::vector<Threat> Plan::detect_threats() const {
  std::vector<Threat> out;
  for (std::size_t li = 0; li < links_.size(); ++li) {
    const auto& link = links_[li];
    for (StepId s = 0; s < steps_.size(); ++s) {
      if (!steps_[s] || steps_[s]->effects.empty()) continue;
      if (s == link.producer || s == link.consumer) continue;
      const auto& effects = steps_[s]->effects;
      const bool candidate = std::any_of(effects.begin(), effects.end(), [&](const Literal& e) {
        return e.predicate == link.condition.predicate && e.positive != link.condition.positive;
      });
      if (!candidate || !possibly_between(s, link.producer, link.consumer)) continue;
      for (const auto& e : effects) {
        if (e.predicate != link.condition.predicate || e.positive == link.condition.positive)
          continue;
        if (unify_negation(e, link.condition, bindings_)) {
          out.push_back({s, li});
          break;
        }
      }
    }
  }
  return out;
}

std::vector<Flaw> Plan::compute_flaws() const {
  std::vector<Flaw> out;
  for (const auto& t : detect_threats()) out.emplace_back(t);
  std::vector<std::vector<bool>> supported(steps_.size());
  for (StepId s = 0; s < steps_.size(); ++s)
    if (steps_[s]) supported[s].assign(steps_[s]->preconditions.size(), false);
  for (const auto& l : links_)
    if (l.consumer < supported.size() && l.precondition < supported[l.consumer].size())
      supported[l.consumer][l.precondition] = true;
  for (StepId s = 0; s < steps_.size(); ++s) {
    if (!steps_[s]) continue;
    const auto& st = *steps_[s];
    for (std::size_t i = 0; i < st.preconditions.size(); ++i)
      if (!supported[s][i]) out.emplace_back(OpenCondition{s, i, st.preconditions[i]});
    if (st.kind == StepKind::Composite && !decomposition_of(s))
      out.emplace_back(UnexpandedComposite{s});
  }
  return out;
}

std::vector<std::vector<StepId>> Plan::linearizations(std::size_t max_steps) const {
  std::vector<StepId> prims;
  for (StepId s = 0; s < steps_.size(); ++s)
    if (steps_[s] && is_executable(steps_[s]->kind)) prims.push_back(s);
  if (prims.size() > max_steps)
    throw Fault("plan has " + std::to_string(prims.size()) +
                " primitive steps; linearization bound is " + std::to_string(max_steps));
  std::vector<std::vector<StepId>> out;
  std::vector<StepId> current;
  std::vector<bool> used(prims.size(), false);
  std::function<void()> extend = [&] {
    if (current.size() == prims.size()) {
      out.push_back(current);
      return;
    }
    for (std::size_t i = 0; i < prims.size(); ++i) {
      if (used[i]) continue;
      bool ready = true;
      for (std::size_t j = 0; j < prims.size() && ready; ++j)
        if (!used[j] && j != i && precedes(prims[j], prims[i])) ready = false;
      if (!ready) continue;
      used[i] = true;
      current.push_back(prims[i]);
      extend();
      current.pop_back();
      used[i] = false;
    }
  };
  extend();
  return out;
}

StepId Plan::add_step(Step s) {
  const auto id = static_cast<StepId>(steps_.size());
  s.id = id;
  steps_.push_back(std::make_shared<const Step>(std::move(s)));
  order_.resize(steps_.size());
  order_.add(kInitial, id);
  order_.add(id, kFinal);
  return id;
}

bool Plan::add_ordering(StepId before, StepId after) { return order_.add(before, after); }

bool Plan::interval_orderings(const CausalLink& link) {
  if (const auto* d = decomposition_of(link.consumer))
    if (!order_.add(link.producer, d->begin)) return false;
  if (const auto* d = decomposition_of(link.producer))
    if (!order_.add(d->end, link.consumer)) return false;
  if (const auto* d = decomposition_ending_at(link.consumer)) {
    if (link.producer != d->begin) {
      auto inside = subplan_closure(*d);
      if (std::find(inside.begin(), inside.end(), link.producer) == inside.end())
        if (!order_.add(link.producer, d->begin)) return false;
    }
  }
  return true;
}

bool Plan::add_causal_link(CausalLink link) {
  step(link.producer), step(link.consumer);
  if (!order_.add(link.producer, link.consumer)) return false;
  if (!interval_orderings(link)) return false;
  links_.push_back(std::move(link));
  return true;
}

bool Plan::add_decomposition(DecompositionLink link) {
  const StepId b = link.begin, e = link.end, p = link.parent;
  if (!order_.add(b, e) || !order_.add(b, p) || !order_.add(p, e)) return false;
  for (StepId m : link.members)
    if (!order_.add(b, m) || !order_.add(m, e)) return false;
  decompositions_.push_back(std::move(link));
  for (const auto& l : links_) {
    if (l.consumer == p && !order_.add(l.producer, b)) return false;
    if (l.producer == p && !order_.add(e, l.consumer)) return false;
  }
  return true;
}

void Plan::remove_step(StepId id) {
  step(id);
  steps_[id] = nullptr;
  std::erase_if(links_, [id](const CausalLink& l) { return l.producer == id || l.consumer == id; });
  std::erase_if(decompositions_, [id](const DecompositionLink& d) { return d.parent == id; });
  for (auto& d : decompositions_) std::erase(d.members, id);
  order_.isolate(id);
}

std::optional<Plan> add_ordering(const Plan& plan, StepId before, StepId after) {
  plan.step(before), plan.step(after);
  Plan next = plan;
  if (!next.add_ordering(before, after)) return std::nullopt;
  next.refresh_agenda();
  return next;
}

bool possibly_between(const Plan& plan, StepId s, StepId a, StepId b) {
  return plan.possibly_between(s, a, b);
}

std::vector<Threat> detect_threats(const Plan& plan) { return plan.detect_threats(); }

std::string step_label(const Plan& plan, StepId id) {
  const auto& s = plan.step(id);
  std::string out = s.action + "(";
  for (std::size_t i = 0; i < s.args.size(); ++i) {
    if (i) out += ", ";
    out += plan.bindings().apply(s.args[i]).pretty();
  }
  return out + ")";
}

}  // namespace dpocl

#include "dpocl/intention.hpp"

#include <algorithm>
#include <map>

namespace dpocl {

const EffectLabel* IntentionReport::find(StepId step, std::size_t effect) const {
  auto it = std::lower_bound(effects.begin(), effects.end(), std::pair{step, effect},
                             [](const EffectLabel& l, const std::pair<StepId, std::size_t>& k) {
                               return std::pair{l.step, l.effect} < k;
                             });
  if (it == effects.end() || it->step != step || it->effect != effect) return nullptr;
  return &*it;
}

bool IntentionReport::intended(StepId step, std::size_t effect) const {
  const auto* l = find(step, effect);
  return l && l->intended;
}

std::vector<const EffectLabel*> IntentionReport::side_effects() const {
  std::vector<const EffectLabel*> out;
  for (const auto& l : effects)
    if (!l.intended) out.push_back(&l);
  return out;
}

IntentionReport classify_effects(const Plan& plan) {
  if (!plan.compute_flaws().empty()) throw Fault("intention analysis needs a complete plan");

  using Key = std::pair<StepId, std::size_t>;
  // The hop that first made an effect intended, and the effect it leads to
  // (nullopt once the chain has reached the final step).
  struct Reason {
    std::vector<JustificationHop> hops;
    std::optional<Key> next;
  };
  std::map<Key, Reason> why;

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& link : plan.causal_links()) {
      if (link.effect == kClosedWorldEffect) continue;
      const Key key{link.producer, static_cast<std::size_t>(link.effect)};
      if (why.count(key)) continue;
      const JustificationHop hop{JustificationHop::Kind::CausalLink, link.producer,
                                 key.second, link.consumer, link.precondition};
      const Step& consumer = plan.step(link.consumer);

      if (consumer.kind == StepKind::Final) {
        why[key] = {{hop}, std::nullopt};
        changed = true;
        continue;
      }
      if (consumer.kind == StepKind::EndSubplan) {
        const auto* d = plan.decomposition_ending_at(link.consumer);
        if (!d) continue;
        for (const auto& [parent_effect, end_pre] : d->correspondence) {
          if (end_pre != link.precondition) continue;
          const Key up{d->parent, parent_effect};
          if (!why.count(up)) continue;
          why[key] = {{hop,
                       {JustificationHop::Kind::Correspondence, link.consumer, end_pre, d->parent,
                        parent_effect}},
                      up};
          changed = true;
          break;
        }
        continue;
      }
      for (std::size_t j = 0; j < consumer.effects.size(); ++j) {
        const Key up{link.consumer, j};
        if (!why.count(up)) continue;
        why[key] = {{hop}, up};
        changed = true;
        break;
      }
    }
  }

  IntentionReport report;
  for (StepId s : plan.step_ids()) {
    const Step& st = plan.step(s);
    for (std::size_t j = 0; j < st.effects.size(); ++j) {
      EffectLabel label{s, j, plan.bindings().apply(st.effects[j]), false, {}};
      std::optional<Key> cur = Key{s, j};
      if (why.count(*cur)) {
        label.intended = true;
        while (cur) {
          const Reason& r = why.at(*cur);
          label.justification.insert(label.justification.end(), r.hops.begin(), r.hops.end());
          cur = r.next;
        }
      }
      report.effects.push_back(std::move(label));
    }
  }
  return report;
}

InformationalStructure informational_structure(const Plan& plan) {
  InformationalStructure out;
  for (const auto& d : plan.decomposition_links()) {
    LicensingRecord r{d.parent, plan.step(d.parent).action, {}};
    for (const auto& c : d.constraints) r.constraints.push_back(plan.bindings().apply(c));
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(),
            [](const LicensingRecord& a, const LicensingRecord& b) { return a.parent < b.parent; });
  return out;
}

}  // namespace dpocl

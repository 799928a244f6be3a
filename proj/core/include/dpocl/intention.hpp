#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dpocl/plan.hpp"

namespace dpocl {

/// One step of a justification chain.
///
/// `CausalLink`: effect `from_index` of `from_step` supports precondition
/// `to_index` of `to_step`. `Correspondence`: precondition `from_index` of the
/// end-subplan step `from_step` copies effect `to_index` of the parent
/// composite `to_step`.
struct JustificationHop {
  enum class Kind : std::uint8_t { CausalLink, Correspondence };

  Kind kind = Kind::CausalLink;
  StepId from_step = 0;
  std::size_t from_index = 0;
  StepId to_step = 0;
  std::size_t to_index = 0;

  friend bool operator==(const JustificationHop&, const JustificationHop&) = default;
};

struct EffectLabel {
  StepId step = 0;
  std::size_t effect = 0;
  Literal literal;  // bindings applied
  bool intended = false;
  std::vector<JustificationHop> justification;  // empty for side effects
};

struct IntentionReport {
  std::vector<EffectLabel> effects;  // sorted by (step, effect)

  const EffectLabel* find(StepId step, std::size_t effect) const;
  bool intended(StepId step, std::size_t effect) const;
  std::vector<const EffectLabel*> side_effects() const;
};

/// Labels every effect of every step. An effect is intended when a causal
/// link from it reaches the final step, reaches an end-subplan step whose
/// corresponding parent effect is intended, or reaches a step that has some
/// intended effect. Throws Fault if the plan still has flaws.
IntentionReport classify_effects(const Plan& plan);

struct LicensingRecord {
  StepId parent = 0;
  std::string action;
  std::vector<Literal> constraints;  // bindings applied
};

using InformationalStructure = std::vector<LicensingRecord>;

InformationalStructure informational_structure(const Plan& plan);

}  // namespace dpocl

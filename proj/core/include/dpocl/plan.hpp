#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dpocl/bindings.hpp"
#include "dpocl/domain.hpp"
#include "dpocl/logic.hpp"

namespace dpocl {

using StepId = std::uint32_t;

enum class StepKind : std::uint8_t {
  Primitive,
  Composite,
  Initial,
  Final,
  BeginSubplan,
  EndSubplan,
};

std::string_view to_string(StepKind kind);
std::optional<StepKind> step_kind_from_string(std::string_view s);

/// Only primitive steps execute; everything else is bookkeeping.
inline bool is_executable(StepKind k) { return k == StepKind::Primitive; }

struct Step {
  StepId id = 0;
  StepKind kind = StepKind::Primitive;
  std::string action;
  std::vector<Term> args;
  std::vector<Literal> preconditions;
  std::vector<Literal> effects;
  std::uint32_t instance = 0;
};

/// Producer effect index used when the initial step supports a negative
/// condition by the closed-world assumption (no explicit effect).
inline constexpr int kClosedWorldEffect = -1;

struct CausalLink {
  StepId producer = 0;
  int effect = 0;
  Literal condition;
  StepId consumer = 0;
  std::size_t precondition = 0;
};

/// Dashed-arc record tying a composite step to its subplan.
/// `correspondence[i] = {parent effect index, end-step precondition index}`.
struct DecompositionLink {
  StepId parent = 0;
  StepId begin = 0;
  StepId end = 0;
  std::vector<StepId> members;
  std::vector<Literal> constraints;
  std::vector<std::pair<std::size_t, std::size_t>> correspondence;
};

struct OpenCondition {
  StepId step = 0;
  std::size_t precondition = 0;
  Literal condition;
};

struct UnexpandedComposite {
  StepId step = 0;
};

struct Threat {
  StepId step = 0;  // threatening step
  std::size_t link = 0;  // index into Plan::causal_links()

  friend bool operator==(const Threat&, const Threat&) = default;
};

using Flaw = std::variant<OpenCondition, UnexpandedComposite, Threat>;

/// Strict partial order over step ids: explicit pairs plus a transitive
/// closure bit-matrix kept in sync on every insertion.
class OrderingGraph {
 public:
  void resize(std::size_t nodes);
  std::size_t size() const { return nodes_; }

  /// Records `before < after`. Returns false (and leaves the graph
  /// unchanged) if that would create a cycle.
  bool add(StepId before, StepId after);
  bool precedes(StepId a, StepId b) const;

  /// Drops every explicit pair mentioning `s` and recomputes the closure.
  void isolate(StepId s);

  const std::vector<std::pair<StepId, StepId>>& pairs() const { return pairs_; }

 private:
  std::uint64_t* row(StepId s) { return reach_.data() + static_cast<std::size_t>(s) * words_; }
  const std::uint64_t* row(StepId s) const {
    return reach_.data() + static_cast<std::size_t>(s) * words_;
  }
  void close(StepId before, StepId after);

  std::size_t nodes_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> reach_;
  std::vector<std::pair<StepId, StepId>> pairs_;
};

/// Immutable-by-convention plan snapshot. Steps are shared between
/// snapshots; refinements copy the plan and then apply the in-place
/// mutators below to their private copy.
class Plan {
 public:
  static constexpr StepId kInitial = 0;
  static constexpr StepId kFinal = 1;

  /// Initial step asserting `init`, final step requiring `goals`.
  static Plan from_problem(const Problem& problem);

  // -- queries ---------------------------------------------------------------
  bool has_step(StepId id) const;
  const Step& step(StepId id) const;  // throws Fault on unknown id
  std::vector<StepId> step_ids() const;
  std::size_t step_slots() const { return steps_.size(); }

  /// Non-boundary, non-initial/final steps (the search's step budget).
  std::size_t action_step_count() const;

  const std::vector<CausalLink>& causal_links() const { return links_; }
  const std::vector<DecompositionLink>& decomposition_links() const { return decompositions_; }
  const BindingSet& bindings() const { return bindings_; }
  const OrderingGraph& orderings() const { return order_; }

  bool precedes(StepId a, StepId b) const;
  bool possibly_between(StepId s, StepId a, StepId b) const;

  const DecompositionLink* decomposition_of(StepId parent) const;

  /// 0 for steps outside every subplan, else 1 + deepest parent depth.
  std::size_t depth_of(StepId id) const;

  /// The decomposition whose end-subplan step is `end`, if any.
  const DecompositionLink* decomposition_ending_at(StepId end) const;

  /// Members of `d` and, recursively, of subplans of its members.
  std::vector<StepId> subplan_closure(const DecompositionLink& d) const;

  std::vector<Threat> detect_threats() const;
  std::vector<Flaw> compute_flaws() const;
  const std::vector<Flaw>& agenda() const { return agenda_; }

  /// All topological orders of the primitive steps. Throws Fault when the
  /// plan holds more than `max_steps` primitive steps.
  std::vector<std::vector<StepId>> linearizations(std::size_t max_steps = 10) const;

  std::uint32_t next_instance() const { return next_instance_; }

  // -- mutators (only on a private copy) -------------------------------------
  std::uint32_t fresh_instance() { return next_instance_++; }

  /// Appends a step and orders it after initial and before final.
  StepId add_step(Step s);

  bool add_ordering(StepId before, StepId after);

  /// Adds the link plus every ordering it implies: producer < consumer, the
  /// subplan interval of an expanded composite endpoint, and, for a link into
  /// an end-subplan step from outside that subplan, producer < begin.
  bool add_causal_link(CausalLink link);

  /// Records the decomposition and its orderings: begin < parent < end,
  /// begin < member < end, and the subplan interval for links already
  /// attached to the parent.
  bool add_decomposition(DecompositionLink link);

  void set_bindings(BindingSet b) { bindings_ = std::move(b); }

  /// Removes a step and every link, membership, and ordering touching it.
  void remove_step(StepId id);

  void refresh_agenda() { agenda_ = compute_flaws(); }

 private:
  bool interval_orderings(const CausalLink& link);

  std::vector<std::shared_ptr<const Step>> steps_;
  OrderingGraph order_;
  BindingSet bindings_;
  std::vector<CausalLink> links_;
  std::vector<DecompositionLink> decompositions_;
  std::vector<Flaw> agenda_;
  std::uint32_t next_instance_ = 1;
};

Plan init_plan(const Problem& problem);

/// Returns a new plan with `before < after`, or nullopt on a cycle.
std::optional<Plan> add_ordering(const Plan& plan, StepId before, StepId after);

bool possibly_between(const Plan& plan, StepId s, StepId a, StepId b);
std::vector<Threat> detect_threats(const Plan& plan);

/// `name(arg, ...)` with plan bindings applied.
std::string step_label(const Plan& plan, StepId id);

}  // namespace dpocl

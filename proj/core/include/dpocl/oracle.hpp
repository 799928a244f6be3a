#pragma once

// Independent checkers. Nothing here includes the plan graph or the planner:
// plans are audited through the plain AuditPlan record below.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dpocl/domain.hpp"
#include "dpocl/logic.hpp"

namespace dpocl::oracle {

using State = std::set<Literal>;  // ground positive atoms

struct GroundStep {
  std::uint32_t id = 0;
  std::string name;
  std::vector<Literal> preconditions;
  std::vector<Literal> effects;
};

struct TraceEntry {
  std::uint32_t step = 0;
  State before;
  State after;
};

struct ExecutionTrace {
  std::vector<TraceEntry> entries;
  bool success = true;
  std::optional<std::uint32_t> failed_step;
  std::optional<Literal> failed_literal;
};

State make_state(const std::vector<Literal>& facts);
bool holds(const State& s, const Literal& l);

/// STRIPS execution: negative effects delete, then positive effects add.
/// Throws Fault on a non-ground step.
ExecutionTrace execute(const std::vector<Literal>& initial, const std::vector<GroundStep>& steps);

struct GroundAction {
  std::string name;
  std::vector<Term> args;
  std::vector<Literal> preconditions;
  std::vector<Literal> effects;

  std::string str() const;
  friend bool operator==(const GroundAction&, const GroundAction&) = default;
};

/// Atomic constants mentioned by the problem or the domain's operators.
std::vector<Term> mentioned_constants(const Domain& domain, const Problem& problem);

/// Every primitive operator applied to every tuple of `objects` that
/// satisfies its (eq)/(neq) constraints. Throws Fault when there are more
/// than `limit` of them.
std::vector<GroundAction> ground_actions(const Domain& domain, const std::vector<Term>& objects,
                                         std::size_t limit = 10000);

/// All executable sequences of at most `max_len` ground primitive actions
/// whose final state satisfies the goals, shortest first. Objects default
/// to mentioned_constants().
std::vector<std::vector<GroundAction>> brute_force(const Domain& domain, const Problem& problem,
                                                   std::size_t max_len,
                                                   std::vector<Term> objects = {},
                                                   std::size_t limit = 10000);

/// Length of a shortest goal-achieving sequence, searching distinct states
/// breadth-first up to `max_len` actions.
std::optional<std::size_t> shortest_solution(const Domain& domain, const Problem& problem,
                                             std::size_t max_len, std::vector<Term> objects = {},
                                             std::size_t limit = 10000);

// -- soundness audit ---------------------------------------------------------

struct AuditStep {
  std::uint32_t id = 0;
  std::string kind;  // primitive, composite, initial, final, begin-subplan, end-subplan
  std::string action;
  std::vector<Term> args;
  std::vector<Literal> preconditions;
  std::vector<Literal> effects;
};

struct AuditLink {
  std::uint32_t producer = 0;
  int effect = 0;  // -1: closed-world support from the initial state
  Literal condition;
  std::uint32_t consumer = 0;
  std::size_t precondition = 0;
};

struct AuditDecomposition {
  std::uint32_t parent = 0;
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
  std::vector<std::uint32_t> members;
};

struct AuditPlan {
  std::vector<AuditStep> steps;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> orderings;
  std::vector<AuditLink> links;
  std::vector<AuditDecomposition> decompositions;
  std::vector<std::pair<Term, Term>> codesignations;  // variable, value
  std::vector<std::pair<Term, Term>> noncodesignations;
};

struct Violation {
  enum class Kind : std::uint8_t {
    Malformed,
    UnsupportedPrecondition,
    DuplicateSupport,
    BadLink,
    Cycle,
    Threat,
    SubplanSupport,
    SubplanOrdering,
    Unsatisfiable,
    ExecutionFailure,
    GoalUnsatisfied,
  };
  Kind kind;
  std::string detail;
};

std::string_view to_string(Violation::Kind k);

struct AuditReport {
  std::vector<Violation> violations;
  std::size_t linearizations = 0;
  std::size_t groundings = 0;
  bool truncated = false;  // linearization or grounding cap reached

  bool sound() const { return violations.empty(); }
  std::size_t count(Violation::Kind k) const;
  std::string str() const;
};

struct AuditLimits {
  std::size_t max_linearizations = 20000;
  std::size_t max_groundings = 16;
};

AuditReport verify_soundness(const AuditPlan& plan, const Problem& problem,
                             const AuditLimits& limits = {});

}  // namespace dpocl::oracle

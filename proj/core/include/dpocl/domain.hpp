#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dpocl/bindings.hpp"
#include "dpocl/logic.hpp"

namespace dpocl {

/// `(eq a b)` or `(neq a b)` inside an operator or schema.
struct BindingConstraint {
  bool equal = true;
  Term lhs;
  Term rhs;

  friend bool operator==(const BindingConstraint&, const BindingConstraint&) = default;
};

/// STRIPS-style operator: header, preconditions, add/delete effects.
/// Composite operators are expanded by one or more DecompositionSchema.
struct ActionOperator {
  std::string name;
  std::vector<Term> parameters;
  std::vector<Literal> preconditions;
  std::vector<Literal> effects;
  std::vector<BindingConstraint> bindings;
  bool composite = false;

  friend bool operator==(const ActionOperator&, const ActionOperator&) = default;
};

struct StepTemplate {
  std::string label;
  std::string action;
  std::vector<Term> args;

  friend bool operator==(const StepTemplate&, const StepTemplate&) = default;
};

/// Internal causal link of a schema. `start` and `final` name the subplan
/// boundary steps.
struct LinkTemplate {
  std::string producer;
  Literal condition;
  std::string consumer;

  friend bool operator==(const LinkTemplate&, const LinkTemplate&) = default;
};

inline constexpr std::string_view kStartLabel = "start";
inline constexpr std::string_view kFinalLabel = "final";

/// Partial subplan for a composite operator, plus the informational
/// constraints (KB literals) that license it. Variables not in the header
/// are existential within the schema.
struct DecompositionSchema {
  std::string action;
  std::vector<Term> parameters;
  std::vector<Literal> constraints;
  std::vector<StepTemplate> steps;
  std::vector<LinkTemplate> links;
  std::vector<BindingConstraint> bindings;
  std::vector<std::pair<std::string, std::string>> orderings;

  friend bool operator==(const DecompositionSchema&, const DecompositionSchema&) = default;
};

struct PredicateDecl {
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(const PredicateDecl&, const PredicateDecl&) = default;
};

struct Domain {
  std::string name;
  std::vector<PredicateDecl> kb_predicates;
  std::vector<PredicateDecl> predicates;
  std::vector<ActionOperator> operators;  // declaration order drives search order
  std::vector<DecompositionSchema> schemata;

  const ActionOperator* find_operator(std::string_view name) const;
  std::vector<const DecompositionSchema*> schemata_for(std::string_view action) const;
  std::optional<std::size_t> kb_arity(std::string_view predicate) const;
  std::optional<std::size_t> state_arity(std::string_view predicate) const;

  friend bool operator==(const Domain&, const Domain&) = default;
};

struct Problem {
  std::string name;
  std::string domain;
  std::vector<Literal> facts;  // static KB facts
  std::vector<Literal> init;
  std::vector<Literal> goals;

  friend bool operator==(const Problem&, const Problem&) = default;
};

/// Static, closed-world set of ground KB facts.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;
  KnowledgeBase(std::vector<PredicateDecl> predicates, std::vector<Literal> facts);

  const std::vector<Literal>& facts() const { return facts_; }
  bool declares(std::string_view predicate) const;
  bool contains(const Literal& ground_fact) const;

 private:
  std::vector<PredicateDecl> predicates_;
  std::vector<Literal> facts_;
};

KnowledgeBase make_knowledge_base(const Domain& domain, const Problem& problem);

struct Diagnostic {
  std::string subject;  // operator / schema / problem element
  std::string reason;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::vector<Diagnostic> validate_domain(const Domain& domain);
std::vector<Diagnostic> validate_problem(const Domain& domain, const Problem& problem);

/// Every extension of `bindings` under which all constraints hold in the KB,
/// in KB fact order (depth-first over positive constraints; negative ones are
/// closed-world tests checked once the positives are matched).
/// Throws Fault for a constraint whose predicate the KB does not declare.
std::vector<BindingSet> kb_satisfy(const KnowledgeBase& kb, std::span<const Literal> constraints,
                                   const BindingSet& bindings);

/// Operators with at least one effect unifiable with `goal` under empty
/// bindings, in declaration order.
std::vector<const ActionOperator*> operators_achieving(const Domain& domain, const Literal& goal);

/// Adds an operator or schema's static (eq)/(neq) constraints.
std::optional<BindingSet> apply_constraints(const BindingSet& bindings,
                                            std::span<const BindingConstraint> constraints);

}  // namespace dpocl

#include "dpocl/domain.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

namespace dpocl {

const ActionOperator* Domain::find_operator(std::string_view name) const {
  for (const auto& op : operators)
    if (op.name == name) return &op;
  return nullptr;
}

std::vector<const DecompositionSchema*> Domain::schemata_for(std::string_view action) const {
  std::vector<const DecompositionSchema*> out;
  for (const auto& s : schemata)
    if (s.action == action) out.push_back(&s);
  return out;
}

namespace {

std::optional<std::size_t> arity_in(const std::vector<PredicateDecl>& decls,
                                    std::string_view name) {
  for (const auto& d : decls)
    if (d.name == name) return d.arity;
  return std::nullopt;
}

}  // namespace

std::optional<std::size_t> Domain::kb_arity(std::string_view predicate) const {
  return arity_in(kb_predicates, predicate);
}

std::optional<std::size_t> Domain::state_arity(std::string_view predicate) const {
  return arity_in(predicates, predicate);
}

KnowledgeBase::KnowledgeBase(std::vector<PredicateDecl> predicates, std::vector<Literal> facts)
    : predicates_(std::move(predicates)), facts_(std::move(facts)) {}

bool KnowledgeBase::declares(std::string_view predicate) const {
  return arity_in(predicates_, predicate).has_value();
}

bool KnowledgeBase::contains(const Literal& ground_fact) const {
  return std::find(facts_.begin(), facts_.end(), ground_fact.atom()) != facts_.end();
}

KnowledgeBase make_knowledge_base(const Domain& domain, const Problem& problem) {
  return KnowledgeBase(domain.kb_predicates, problem.facts);
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class Validator {
 public:
  explicit Validator(const Domain& d) : domain_(d) {}

  std::vector<Diagnostic> run() {
    check_declarations();
    std::set<std::string> seen;
    for (const auto& op : domain_.operators) {
      if (!seen.insert(op.name).second) report(op.name, "duplicate operator name");
      check_operator(op);
    }
    for (const auto& s : domain_.schemata) check_schema(s);
    return std::move(out_);
  }

  void report(std::string subject, std::string reason) {
    out_.push_back({std::move(subject), std::move(reason)});
  }

  void check_term_functors(const std::string& subject, const Term& t) {
    if (!t.is_compound()) return;
    auto [it, inserted] = functors_.emplace(t.name, t.args.size());
    if (!inserted && it->second != t.args.size())
      report(subject, "functor '" + t.name + "' used with arity " +
                          std::to_string(t.args.size()) + " and " + std::to_string(it->second));
    if (auto a = domain_.kb_arity(t.name); a && *a != t.args.size())
      report(subject, "functor '" + t.name + "' conflicts with kb predicate arity");
    if (auto a = domain_.state_arity(t.name); a && *a != t.args.size())
      report(subject, "functor '" + t.name + "' conflicts with predicate arity");
    for (const auto& a : t.args) check_term_functors(subject, a);
  }

  // kind: 0 = state predicate, 1 = kb predicate
  void check_literal(const std::string& subject, const Literal& l, bool kb, const char* where) {
    auto state = domain_.state_arity(l.predicate);
    auto kbp = domain_.kb_arity(l.predicate);
    if (kb) {
      if (!kbp) {
        report(subject, std::string(where) + " uses '" + l.predicate +
                            "', which is not a kb predicate");
        return;
      }
      if (*kbp != l.args.size())
        report(subject, std::string(where) + " " + l.str() + " has arity " +
                            std::to_string(l.args.size()) + ", declared " + std::to_string(*kbp));
    } else {
      if (!state) {
        report(subject, std::string(where) + " uses " +
                            (kbp ? "kb predicate '" : "undeclared predicate '") + l.predicate +
                            "'");
        return;
      }
      if (*state != l.args.size())
        report(subject, std::string(where) + " " + l.str() + " has arity " +
                            std::to_string(l.args.size()) + ", declared " +
                            std::to_string(*state));
    }
    for (const auto& a : l.args) check_term_functors(subject, a);
  }

  void check_declarations() {
    std::set<std::string> names;
    for (const auto* list : {&domain_.kb_predicates, &domain_.predicates})
      for (const auto& p : *list)
        if (!names.insert(p.name).second)
          report(p.name, "predicate declared more than once (kb and state vocabularies must be "
                         "disjoint)");
  }

  void check_operator(const ActionOperator& op) {
    std::vector<VarKey> known;
    std::set<VarKey> params;
    for (const auto& p : op.parameters) {
      if (!p.is_variable()) {
        report(op.name, "header parameter " + p.str() + " is not a variable");
        continue;
      }
      if (!params.insert(key_of(p)).second)
        report(op.name, "header parameter " + p.str() + " repeated");
      known.push_back(key_of(p));
    }
    for (const auto& b : op.bindings) {
      collect_variables(b.lhs, known);
      collect_variables(b.rhs, known);
    }
    auto check_vars = [&](const Literal& l, const char* where) {
      std::vector<VarKey> vs;
      collect_variables(l, vs);
      for (const auto& v : vs)
        if (std::find(known.begin(), known.end(), v) == known.end())
          report(op.name, std::string(where) + " " + l.str() + " uses ?" + v.name +
                              ", which is not a header parameter");
    };
    for (const auto& l : op.preconditions) {
      check_literal(op.name, l, false, "precondition");
      check_vars(l, "precondition");
    }
    for (const auto& l : op.effects) {
      check_literal(op.name, l, false, "effect");
      check_vars(l, "effect");
    }
    auto schemata = domain_.schemata_for(op.name);
    if (op.composite && schemata.empty())
      report(op.name, "composite operator has no decomposition schema");
    if (!op.composite && !schemata.empty())
      report(op.name, "primitive operator has a decomposition schema");
  }

  void check_schema(const DecompositionSchema& s) {
    const std::string subject = "decomposition of " + s.action;
    const auto* op = domain_.find_operator(s.action);
    if (!op) {
      report(subject, "header names unknown operator '" + s.action + "'");
    } else {
      if (!op->composite) report(subject, "header names primitive operator '" + s.action + "'");
      if (op->parameters.size() != s.parameters.size())
        report(subject, "header has " + std::to_string(s.parameters.size()) +
                            " parameters, operator declares " +
                            std::to_string(op->parameters.size()));
    }
    for (const auto& c : s.constraints) check_literal(subject, c, true, "constraint");

    std::set<std::string> labels;
    for (const auto& st : s.steps) {
      if (st.label == kStartLabel || st.label == kFinalLabel)
        report(subject, "step label '" + st.label + "' is reserved");
      if (!labels.insert(st.label).second)
        report(subject, "step label '" + st.label + "' declared twice");
      const auto* sop = domain_.find_operator(st.action);
      if (!sop) {
        report(subject, "step " + st.label + " names unknown operator '" + st.action + "'");
        continue;
      }
      if (sop->parameters.size() != st.args.size())
        report(subject, "step " + st.label + " passes " + std::to_string(st.args.size()) +
                            " arguments to " + st.action + "/" +
                            std::to_string(sop->parameters.size()));
      for (const auto& a : st.args) check_term_functors(subject, a);
    }
    auto declared = [&](const std::string& l) {
      return labels.contains(l) || l == kStartLabel || l == kFinalLabel;
    };
    for (const auto& l : s.links) {
      if (!declared(l.producer))
        report(subject, "link references undeclared label '" + l.producer + "'");
      if (!declared(l.consumer))
        report(subject, "link references undeclared label '" + l.consumer + "'");
      if (l.producer == kFinalLabel) report(subject, "link produced by 'final'");
      if (l.consumer == kStartLabel) report(subject, "link consumed by 'start'");
      if (l.producer == l.consumer) report(subject, "link from '" + l.producer + "' to itself");
      check_literal(subject, l.condition, false, "link condition");
    }
    for (const auto& [a, b] : s.orderings) {
      if (!declared(a)) report(subject, "ordering references undeclared label '" + a + "'");
      if (!declared(b)) report(subject, "ordering references undeclared label '" + b + "'");
    }
  }

 private:
  const Domain& domain_;
  std::map<std::string, std::size_t> functors_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate_domain(const Domain& domain) { return Validator(domain).run(); }

std::vector<Diagnostic> validate_problem(const Domain& domain, const Problem& problem) {
  std::vector<Diagnostic> out;
  if (!problem.domain.empty() && problem.domain != domain.name)
    out.push_back({problem.name, "problem is for domain '" + problem.domain + "', loaded '" +
                                     domain.name + "'"});
  auto check = [&](const Literal& l, bool kb, const char* where, bool ground, bool positive) {
    auto arity = kb ? domain.kb_arity(l.predicate) : domain.state_arity(l.predicate);
    if (!arity) {
      out.push_back({problem.name, std::string(where) + " " + l.str() + " uses " +
                                       (kb ? "undeclared kb predicate" : "undeclared predicate")});
      return;
    }
    if (*arity != l.args.size())
      out.push_back({problem.name, std::string(where) + " " + l.str() + " has arity " +
                                       std::to_string(l.args.size()) + ", declared " +
                                       std::to_string(*arity)});
    if (ground && !l.is_ground())
      out.push_back({problem.name, std::string(where) + " " + l.str() + " is not ground"});
    if (positive && !l.positive)
      out.push_back({problem.name, std::string(where) + " " + l.str() + " is negative"});
  };
  for (const auto& f : problem.facts) check(f, true, "fact", true, true);
  for (const auto& l : problem.init) check(l, false, "init", true, true);
  for (const auto& g : problem.goals) check(g, false, "goal", true, false);
  return out;
}

// ---------------------------------------------------------------------------
// KB queries

namespace {

void satisfy_from(const KnowledgeBase& kb, const std::vector<const Literal*>& positives,
                  const std::vector<const Literal*>& negatives, std::size_t i,
                  const BindingSet& bindings, std::vector<BindingSet>& out) {
  if (i == positives.size()) {
    for (const auto* n : negatives) {
      Literal atom = n->atom();
      for (const auto& f : kb.facts())
        if (f.predicate == atom.predicate && unify(atom, f, bindings)) return;
    }
    out.push_back(bindings);
    return;
  }
  const Literal& c = *positives[i];
  for (const auto& f : kb.facts()) {
    if (f.predicate != c.predicate) continue;
    if (auto next = unify(c, f, bindings))
      satisfy_from(kb, positives, negatives, i + 1, *next, out);
  }
}

}  // namespace

std::vector<BindingSet> kb_satisfy(const KnowledgeBase& kb, std::span<const Literal> constraints,
                                   const BindingSet& bindings) {
  std::vector<const Literal*> positives;
  std::vector<const Literal*> negatives;
  for (const auto& c : constraints) {
    if (!kb.declares(c.predicate))
      throw Fault("constraint " + c.str() + " uses a predicate the knowledge base does not declare");
    (c.positive ? positives : negatives).push_back(&c);
  }
  std::vector<BindingSet> out;
  satisfy_from(kb, positives, negatives, 0, bindings, out);
  return out;
}

std::vector<const ActionOperator*> operators_achieving(const Domain& domain, const Literal& goal) {
  // A reserved instance keeps operator variables apart from the goal's.
  constexpr auto kProbe = std::numeric_limits<std::uint32_t>::max();
  std::vector<const ActionOperator*> out;
  for (const auto& op : domain.operators) {
    for (const auto& e : op.effects) {
      if (e.predicate != goal.predicate || e.args.size() != goal.args.size()) continue;
      if (unify(rename_fresh(e, kProbe), goal, BindingSet{})) {
        out.push_back(&op);
        break;
      }
    }
  }
  return out;
}

std::optional<BindingSet> apply_constraints(const BindingSet& bindings,
                                            std::span<const BindingConstraint> constraints) {
  std::optional<BindingSet> cur = bindings;
  for (const auto& c : constraints) {
    if (!cur) break;
    cur = c.equal ? cur->unify(c.lhs, c.rhs) : cur->separate(c.lhs, c.rhs);
  }
  return cur;
}

}  // namespace dpocl

#include "dpocl/logic.hpp"

#include <algorithm>

namespace dpocl {

Term Term::constant(std::string name) {
  Term t;
  t.kind = Kind::Constant;
  t.name = std::move(name);
  return t;
}

Term Term::variable(std::string name, std::uint32_t instance) {
  Term t;
  t.kind = Kind::Variable;
  t.name = std::move(name);
  t.instance = instance;
  return t;
}

Term Term::compound(std::string functor, std::vector<Term> args) {
  Term t;
  t.kind = Kind::Compound;
  t.name = std::move(functor);
  t.args = std::move(args);
  return t;
}

bool Term::is_ground() const {
  switch (kind) {
    case Kind::Constant:
      return true;
    case Kind::Variable:
      return false;
    case Kind::Compound:
      return std::all_of(args.begin(), args.end(), [](const Term& a) { return a.is_ground(); });
  }
  return false;
}

std::size_t Term::depth() const {
  std::size_t d = 0;
  for (const auto& a : args) d = std::max(d, a.depth());
  return d + 1;
}

std::string Term::str() const {
  switch (kind) {
    case Kind::Constant:
      return name;
    case Kind::Variable:
      return instance == 0 ? "?" + name : "?" + name + "#" + std::to_string(instance);
    case Kind::Compound: {
      std::string out = "(" + name;
      for (const auto& a : args) out += " " + a.str();
      return out + ")";
    }
  }
  return {};
}

std::string Term::pretty() const {
  if (kind != Kind::Compound) return str();
  std::string out = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += args[i].pretty();
  }
  return out + ")";
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  if (auto c = a.name <=> b.name; c != 0) return c;
  if (auto c = a.instance <=> b.instance; c != 0) return c;
  return std::lexicographical_compare_three_way(a.args.begin(), a.args.end(), b.args.begin(),
                                                b.args.end());
}

Literal Literal::negated() const {
  Literal l = *this;
  l.positive = !positive;
  return l;
}

Literal Literal::atom() const {
  Literal l = *this;
  l.positive = true;
  return l;
}

bool Literal::is_ground() const {
  return std::all_of(args.begin(), args.end(), [](const Term& a) { return a.is_ground(); });
}

std::string Literal::str() const {
  std::string out = "(" + predicate;
  for (const auto& a : args) out += " " + a.str();
  out += ")";
  return positive ? out : "(not " + out + ")";
}

std::string Literal::pretty() const {
  if (args.empty()) return positive ? predicate : "not " + predicate;
  std::string out = predicate + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += args[i].pretty();
  }
  out += ")";
  return positive ? out : "not " + out;
}

std::strong_ordering operator<=>(const Literal& a, const Literal& b) {
  if (auto c = a.predicate <=> b.predicate; c != 0) return c;
  if (auto c = std::lexicographical_compare_three_way(a.args.begin(), a.args.end(),
                                                      b.args.begin(), b.args.end());
      c != 0)
    return c;
  return a.positive <=> b.positive;
}

Term rename_fresh(const Term& t, std::uint32_t instance) {
  switch (t.kind) {
    case Term::Kind::Constant:
      return t;
    case Term::Kind::Variable:
      return Term::variable(t.name, instance);
    case Term::Kind::Compound: {
      std::vector<Term> args;
      args.reserve(t.args.size());
      for (const auto& a : t.args) args.push_back(rename_fresh(a, instance));
      return Term::compound(t.name, std::move(args));
    }
  }
  return t;
}

Literal rename_fresh(const Literal& l, std::uint32_t instance) {
  Literal out = l;
  for (auto& a : out.args) a = rename_fresh(a, instance);
  return out;
}

std::vector<Literal> rename_fresh(std::span<const Literal> literals, std::uint32_t instance) {
  std::vector<Literal> out;
  out.reserve(literals.size());
  for (const auto& l : literals) out.push_back(rename_fresh(l, instance));
  return out;
}

void collect_variables(const Term& t, std::vector<VarKey>& out) {
  if (t.is_variable()) {
    auto k = key_of(t);
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(std::move(k));
    return;
  }
  for (const auto& a : t.args) collect_variables(a, out);
}

void collect_variables(const Literal& l, std::vector<VarKey>& out) {
  for (const auto& a : l.args) collect_variables(a, out);
}

void collect_ground_subterms(const Term& t, std::vector<Term>& out) {
  if (!t.is_ground()) {
    for (const auto& a : t.args) collect_ground_subterms(a, out);
    return;
  }
  if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  for (const auto& a : t.args) collect_ground_subterms(a, out);
}

std::string str(std::span<const Term> terms) {
  std::string out;
  for (const auto& t : terms) {
    if (!out.empty()) out += ' ';
    out += t.str();
  }
  return out;
}

std::string str(std::span<const Literal> literals) {
  std::string out;
  for (const auto& l : literals) {
    if (!out.empty()) out += ' ';
    out += l.str();
  }
  return out;
}

}  // namespace dpocl

#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpocl {

/// Raised for programming or domain-validation faults (arity mismatch,
/// unknown ids, non-ground input where ground is required). Search dead
/// ends are never reported through this type.
class Fault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A first-order term: a constant symbol, a variable, or a compound
/// `functor(args...)`.
///
/// Variables carry an instantiation id so that two instances of the same
/// operator never share variables. Id 0 is the schematic (as-written) copy.
struct Term {
  enum class Kind : std::uint8_t { Constant, Variable, Compound };

  Kind kind = Kind::Constant;
  std::string name;
  std::uint32_t instance = 0;
  std::vector<Term> args;

  static Term constant(std::string name);
  static Term variable(std::string name, std::uint32_t instance = 0);
  static Term compound(std::string functor, std::vector<Term> args);

  bool is_variable() const { return kind == Kind::Variable; }
  bool is_constant() const { return kind == Kind::Constant; }
  bool is_compound() const { return kind == Kind::Compound; }
  bool is_ground() const;
  std::size_t depth() const;

  /// `?name` for schematic variables, `?name#7` for instantiated ones.
  std::string str() const;

  /// Functional notation for display: `modeled(l, b)`.
  std::string pretty() const;

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);
};

/// A signed atom `(pred args...)` or `(not (pred args...))`.
struct Literal {
  bool positive = true;
  std::string predicate;
  std::vector<Term> args;

  Literal() = default;
  Literal(std::string predicate, std::vector<Term> args, bool positive = true)
      : positive(positive), predicate(std::move(predicate)), args(std::move(args)) {}

  Literal negated() const;
  Literal atom() const;  // positive copy
  bool is_ground() const;
  std::size_t arity() const { return args.size(); }
  std::string str() const;
  std::string pretty() const;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend std::strong_ordering operator<=>(const Literal& a, const Literal& b);
};

/// Key identifying a variable (name + instantiation id).
struct VarKey {
  std::string name;
  std::uint32_t instance = 0;

  friend bool operator==(const VarKey&, const VarKey&) = default;
  friend auto operator<=>(const VarKey&, const VarKey&) = default;
};

inline VarKey key_of(const Term& v) { return {v.name, v.instance}; }

/// Replaces the instantiation id of every variable with `instance`.
Term rename_fresh(const Term& t, std::uint32_t instance);
Literal rename_fresh(const Literal& l, std::uint32_t instance);
std::vector<Literal> rename_fresh(std::span<const Literal> literals, std::uint32_t instance);

void collect_variables(const Term& t, std::vector<VarKey>& out);
void collect_variables(const Literal& l, std::vector<VarKey>& out);

/// Appends `t` and all of its ground subterms to `out`.
void collect_ground_subterms(const Term& t, std::vector<Term>& out);

std::string str(std::span<const Term> terms);
std::string str(std::span<const Literal> literals);

}  // namespace dpocl

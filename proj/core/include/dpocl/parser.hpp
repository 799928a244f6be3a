#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dpocl/domain.hpp"
#include "dpocl/sexpr.hpp"

namespace dpocl {

/// `value` is set iff `diagnostics` is empty.
template <class T>
struct ParseResult {
  std::optional<T> value;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return value.has_value(); }
};

ParseResult<Domain> parse_domain(std::string_view text, const std::string& file = {});
ParseResult<Problem> parse_problem(std::string_view text, const std::string& file = {});

/// Single term or literal in the same syntax (`?x`, `(f a ?y)`, `(not (p a))`).
ParseResult<Term> parse_term(std::string_view text);
ParseResult<Literal> parse_literal(std::string_view text);

/// Canonical text; parsing it back yields an equal value.
std::string serialize(const Domain& domain);
std::string serialize(const Problem& problem);

}  // namespace dpocl

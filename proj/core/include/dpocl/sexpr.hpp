#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dpocl {

/// 1-based position of a token in its source file.
struct SourceSpan {
  std::string file;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t length = 0;

  std::string str() const;  // file:line:column
};

struct ParseDiagnostic {
  SourceSpan span;
  std::string reason;

  std::string str() const;
};

struct SExpr {
  enum class Kind : unsigned char { Atom, List };

  Kind kind = Kind::Atom;
  std::string text;  // atoms only, lowercased
  std::vector<SExpr> items;
  SourceSpan span;

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_list() const { return kind == Kind::List; }
  /// True for a list whose first item is the atom `head`.
  bool is_form(std::string_view head) const;
};

struct ReadResult {
  std::vector<SExpr> forms;
  std::vector<ParseDiagnostic> diagnostics;
};

/// Reads every top-level form. `;` comments run to end of line. Nesting
/// deeper than `max_depth` is reported instead of recursed into.
ReadResult read_sexprs(std::string_view text, const std::string& file = {},
                       std::size_t max_depth = 128);

}  // namespace dpocl

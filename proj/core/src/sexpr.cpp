#include "dpocl/sexpr.hpp"

#include <cctype>

namespace dpocl {

std::string SourceSpan::str() const {
  return (file.empty() ? std::string("<input>") : file) + ":" + std::to_string(line) + ":" +
         std::to_string(column);
}

std::string ParseDiagnostic::str() const { return span.str() + ": " + reason; }

bool SExpr::is_form(std::string_view head) const {
  return is_list() && !items.empty() && items[0].is_atom() && items[0].text == head;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

}  // namespace

ReadResult read_sexprs(std::string_view text, const std::string& file, std::size_t max_depth) {
  ReadResult out;
  std::vector<SExpr> open;  // lists still waiting for their ')'
  std::size_t line = 1, col = 1;
  std::size_t skip_depth = 0;  // >0 while inside a too-deep region

  auto span_here = [&](std::size_t length) { return SourceSpan{file, line, col, length}; };
  auto finish = [&](SExpr e) {
    if (open.empty())
      out.forms.push_back(std::move(e));
    else
      open.back().items.push_back(std::move(e));
  };

  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (is_space(c)) {
      ++col;
      ++i;
      continue;
    }
    if (c == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (c == '(') {
      if (skip_depth > 0 || open.size() >= max_depth) {
        if (skip_depth == 0)
          out.diagnostics.push_back({span_here(1), "nesting deeper than " +
                                                       std::to_string(max_depth) + " levels"});
        ++skip_depth;
      } else {
        SExpr list;
        list.kind = SExpr::Kind::List;
        list.span = span_here(1);
        open.push_back(std::move(list));
      }
      ++col;
      ++i;
      continue;
    }
    if (c == ')') {
      if (skip_depth > 0) {
        --skip_depth;
      } else if (open.empty()) {
        out.diagnostics.push_back({span_here(1), "unbalanced ')'"});
      } else {
        SExpr done = std::move(open.back());
        open.pop_back();
        done.span.length = done.span.line == line ? col - done.span.column + 1 : 1;
        finish(std::move(done));
      }
      ++col;
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i]) && text[i] != '(' && text[i] != ')' &&
           text[i] != ';')
      ++i;
    if (skip_depth == 0) {
      SExpr atom;
      atom.span = span_here(i - start);
      atom.text.reserve(i - start);
      for (std::size_t k = start; k < i; ++k)
        atom.text.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[k]))));
      finish(std::move(atom));
    }
    col += i - start;
  }
  // The innermost unclosed form is usually the one missing its ')'.
  if (!open.empty())
    out.diagnostics.push_back({open.back().span, "unbalanced '(': form is never closed"});
  return out;
}

}  // namespace dpocl

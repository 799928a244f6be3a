#include "dpocl/parser.hpp"

#include <charconv>

namespace dpocl {

namespace {

class Lowerer {
 public:
  explicit Lowerer(std::vector<ParseDiagnostic>& diags) : diags_(diags) {}

  bool error(const SExpr& at, std::string reason) {
    diags_.push_back({at.span, std::move(reason)});
    return false;
  }

  bool symbol(const SExpr& e, std::string& out, std::string_view what) {
    if (!e.is_atom() || e.text.empty() || e.text[0] == '?')
      return error(e, "expected " + std::string(what));
    out = e.text;
    return true;
  }

  std::optional<Term> term(const SExpr& e) {
    if (e.is_atom()) {
      if (e.text[0] != '?') return Term::constant(e.text);
      std::string_view body = std::string_view(e.text).substr(1);
      std::uint32_t instance = 0;
      if (auto hash = body.find('#'); hash != std::string_view::npos) {
        auto digits = body.substr(hash + 1);
        auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), instance);
        if (ec != std::errc() || p != digits.data() + digits.size() || digits.empty()) {
          error(e, "bad variable instance in '" + e.text + "'");
          return std::nullopt;
        }
        body = body.substr(0, hash);
      }
      if (body.empty() || body.find('?') != std::string_view::npos) {
        error(e, "bad variable name '" + e.text + "'");
        return std::nullopt;
      }
      return Term::variable(std::string(body), instance);
    }
    if (e.items.empty()) {
      error(e, "empty term");
      return std::nullopt;
    }
    std::string functor;
    if (!symbol(e.items[0], functor, "function symbol")) return std::nullopt;
    std::vector<Term> args;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      auto t = term(e.items[i]);
      if (!t) return std::nullopt;
      args.push_back(std::move(*t));
    }
    return Term::compound(std::move(functor), std::move(args));
  }

  std::optional<Literal> literal(const SExpr& e) {
    if (!e.is_list() || e.items.empty()) {
      error(e, "expected a literal (pred args...)");
      return std::nullopt;
    }
    if (e.is_form("not")) {
      if (e.items.size() != 2) {
        error(e, "'not' takes exactly one atom");
        return std::nullopt;
      }
      auto inner = literal(e.items[1]);
      if (!inner) return std::nullopt;
      if (!inner->positive) {
        error(e.items[1], "double negation");
        return std::nullopt;
      }
      return inner->negated();
    }
    std::string pred;
    if (!symbol(e.items[0], pred, "predicate symbol")) return std::nullopt;
    std::vector<Term> args;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      auto t = term(e.items[i]);
      if (!t) return std::nullopt;
      args.push_back(std::move(*t));
    }
    return Literal(std::move(pred), std::move(args));
  }

  bool literals(const SExpr& form, std::vector<Literal>& out) {
    bool ok = true;
    for (std::size_t i = 1; i < form.items.size(); ++i) {
      auto l = literal(form.items[i]);
      if (l)
        out.push_back(std::move(*l));
      else
        ok = false;
    }
    return ok;
  }

  bool declarations(const SExpr& form, std::vector<PredicateDecl>& out) {
    bool ok = true;
    for (std::size_t i = 1; i < form.items.size(); ++i) {
      const auto& d = form.items[i];
      if (!d.is_list() || d.items.size() != 2 || !d.items[1].is_atom()) {
        ok = error(d, "expected (predicate arity)");
        continue;
      }
      PredicateDecl decl;
      if (!symbol(d.items[0], decl.name, "predicate symbol")) {
        ok = false;
        continue;
      }
      const auto& n = d.items[1].text;
      auto [p, ec] = std::from_chars(n.data(), n.data() + n.size(), decl.arity);
      if (ec != std::errc() || p != n.data() + n.size()) {
        ok = error(d.items[1], "arity must be a non-negative integer");
        continue;
      }
      out.push_back(std::move(decl));
    }
    return ok;
  }

  bool header(const SExpr& form, std::string& name, std::vector<Term>& params) {
    if (form.items.size() != 2 || !form.items[1].is_list() || form.items[1].items.empty())
      return error(form, "expected (header (name ?param...))");
    const auto& h = form.items[1];
    if (!symbol(h.items[0], name, "action name")) return false;
    for (std::size_t i = 1; i < h.items.size(); ++i) {
      auto t = term(h.items[i]);
      if (!t) return false;
      params.push_back(std::move(*t));
    }
    return true;
  }

  bool bindings(const SExpr& form, std::vector<BindingConstraint>& out) {
    bool ok = true;
    for (std::size_t i = 1; i < form.items.size(); ++i) {
      const auto& c = form.items[i];
      if (!(c.is_form("eq") || c.is_form("neq")) || c.items.size() != 3) {
        ok = error(c, "expected (eq a b) or (neq a b)");
        continue;
      }
      auto a = term(c.items[1]);
      auto b = term(c.items[2]);
      if (!a || !b) {
        ok = false;
        continue;
      }
      out.push_back({c.is_form("eq"), std::move(*a), std::move(*b)});
    }
    return ok;
  }

  std::optional<ActionOperator> action(const SExpr& form) {
    ActionOperator op;
    bool ok = true, has_header = false;
    for (std::size_t i = 1; i < form.items.size(); ++i) {
      const auto& part = form.items[i];
      if (part.is_form("header")) {
        if (has_header) ok = error(part, "duplicate header");
        has_header = true;
        ok = header(part, op.name, op.parameters) && ok;
      } else if (part.is_form("composite")) {
        if (part.items.size() != 1) ok = error(part, "(composite) takes no arguments");
        op.composite = true;
      } else if (part.is_form("pre")) {
        ok = literals(part, op.preconditions) && ok;
      } else if (part.is_form("eff")) {
        ok = literals(part, op.effects) && ok;
      } else if (part.is_form("bindings")) {
        ok = bindings(part, op.bindings) && ok;
      } else {
        ok = error(part, "unknown action section");
      }
    }
    if (!has_header) ok = error(form, "action without header");
    if (!ok) return std::nullopt;
    return op;
  }

  bool label(const SExpr& e, std::string& out) { return symbol(e, out, "step label"); }

  std::optional<DecompositionSchema> decomposition(const SExpr& form) {
    DecompositionSchema s;
    bool ok = true, has_header = false;
    for (std::size_t i = 1; i < form.items.size(); ++i) {
      const auto& part = form.items[i];
      if (part.is_form("header")) {
        if (has_header) ok = error(part, "duplicate header");
        has_header = true;
        ok = header(part, s.action, s.parameters) && ok;
      } else if (part.is_form("constraints")) {
        ok = literals(part, s.constraints) && ok;
      } else if (part.is_form("steps")) {
        for (std::size_t j = 1; j < part.items.size(); ++j) {
          const auto& st = part.items[j];
          if (!st.is_list() || st.items.size() != 2 || !st.items[1].is_list() ||
              st.items[1].items.empty()) {
            ok = error(st, "expected (label (action args...))");
            continue;
          }
          StepTemplate t;
          if (!label(st.items[0], t.label) ||
              !symbol(st.items[1].items[0], t.action, "action name")) {
            ok = false;
            continue;
          }
          for (std::size_t k = 1; k < st.items[1].items.size(); ++k) {
            auto a = term(st.items[1].items[k]);
            if (!a) {
              ok = false;
              break;
            }
            t.args.push_back(std::move(*a));
          }
          s.steps.push_back(std::move(t));
        }
      } else if (part.is_form("links")) {
        for (std::size_t j = 1; j < part.items.size(); ++j) {
          const auto& l = part.items[j];
          if (!l.is_list() || l.items.size() != 3) {
            ok = error(l, "expected (producer literal consumer)");
            continue;
          }
          LinkTemplate t;
          auto cond = literal(l.items[1]);
          if (!label(l.items[0], t.producer) || !cond || !label(l.items[2], t.consumer)) {
            ok = false;
            continue;
          }
          t.condition = std::move(*cond);
          s.links.push_back(std::move(t));
        }
      } else if (part.is_form("orderings")) {
        for (std::size_t j = 1; j < part.items.size(); ++j) {
          const auto& o = part.items[j];
          std::string a, b;
          if (!o.is_list() || o.items.size() != 2) {
            ok = error(o, "expected (before after)");
            continue;
          }
          if (!label(o.items[0], a) || !label(o.items[1], b)) {
            ok = false;
            continue;
          }
          s.orderings.emplace_back(std::move(a), std::move(b));
        }
      } else if (part.is_form("bindings")) {
        ok = bindings(part, s.bindings) && ok;
      } else {
        ok = error(part, "unknown decomposition section");
      }
    }
    if (!has_header) ok = error(form, "decomposition without header");
    if (!ok) return std::nullopt;
    return s;
  }

 private:
  std::vector<ParseDiagnostic>& diags_;
};

const SExpr* single_form(const ReadResult& r, std::string_view head,
                         std::vector<ParseDiagnostic>& diags, const std::string& file) {
  if (r.forms.empty()) {
    if (r.diagnostics.empty())
      diags.push_back({SourceSpan{file, 1, 1, 0}, "expected a (" + std::string(head) + " ...) form"});
    return nullptr;
  }
  for (std::size_t i = 1; i < r.forms.size(); ++i)
    diags.push_back({r.forms[i].span, "unexpected form after the " + std::string(head)});
  if (!r.forms[0].is_form(head)) {
    diags.push_back({r.forms[0].span, "expected a (" + std::string(head) + " ...) form"});
    return nullptr;
  }
  return &r.forms[0];
}

}  // namespace

ParseResult<Domain> parse_domain(std::string_view text, const std::string& file) {
  ParseResult<Domain> out;
  auto read = read_sexprs(text, file);
  out.diagnostics = read.diagnostics;
  const SExpr* form = single_form(read, "domain", out.diagnostics, file);
  if (!form) return out;

  Lowerer low(out.diagnostics);
  Domain d;
  if (form->items.size() < 2)
    low.error(*form, "domain needs a name");
  else
    low.symbol(form->items[1], d.name, "domain name");
  for (std::size_t i = 2; i < form->items.size(); ++i) {
    const auto& part = form->items[i];
    if (part.is_form("kb-predicates")) {
      low.declarations(part, d.kb_predicates);
    } else if (part.is_form("predicates")) {
      low.declarations(part, d.predicates);
    } else if (part.is_form("action")) {
      if (auto op = low.action(part)) d.operators.push_back(std::move(*op));
    } else if (part.is_form("decomposition")) {
      if (auto s = low.decomposition(part)) d.schemata.push_back(std::move(*s));
    } else {
      low.error(part, "unknown domain section");
    }
  }
  if (out.diagnostics.empty()) out.value = std::move(d);
  return out;
}

ParseResult<Problem> parse_problem(std::string_view text, const std::string& file) {
  ParseResult<Problem> out;
  auto read = read_sexprs(text, file);
  out.diagnostics = read.diagnostics;
  const SExpr* form = single_form(read, "problem", out.diagnostics, file);
  if (!form) return out;

  Lowerer low(out.diagnostics);
  Problem p;
  if (form->items.size() < 2)
    low.error(*form, "problem needs a name");
  else
    low.symbol(form->items[1], p.name, "problem name");

  auto ground_only = [&](const SExpr& part, std::vector<Literal>& dst, std::string_view what) {
    const std::size_t before = dst.size();
    if (!low.literals(part, dst)) return;
    for (std::size_t k = before; k < dst.size(); ++k)
      if (!dst[k].is_ground())
        low.error(part.items[k - before + 1], std::string(what) + " literal must be ground");
  };

  for (std::size_t i = 2; i < form->items.size(); ++i) {
    const auto& part = form->items[i];
    if (part.is_form("domain")) {
      if (part.items.size() != 2)
        low.error(part, "expected (domain NAME)");
      else
        low.symbol(part.items[1], p.domain, "domain name");
    } else if (part.is_form("facts")) {
      ground_only(part, p.facts, "fact");
    } else if (part.is_form("init")) {
      ground_only(part, p.init, "init");
    } else if (part.is_form("goal")) {
      low.literals(part, p.goals);
    } else {
      low.error(part, "unknown problem section");
    }
  }
  if (out.diagnostics.empty()) out.value = std::move(p);
  return out;
}

ParseResult<Term> parse_term(std::string_view text) {
  ParseResult<Term> out;
  auto read = read_sexprs(text);
  out.diagnostics = read.diagnostics;
  if (read.forms.size() != 1) {
    if (out.diagnostics.empty()) out.diagnostics.push_back({{}, "expected exactly one term"});
    return out;
  }
  Lowerer low(out.diagnostics);
  auto t = low.term(read.forms[0]);
  if (out.diagnostics.empty()) out.value = std::move(t);
  return out;
}

ParseResult<Literal> parse_literal(std::string_view text) {
  ParseResult<Literal> out;
  auto read = read_sexprs(text);
  out.diagnostics = read.diagnostics;
  if (read.forms.size() != 1) {
    if (out.diagnostics.empty()) out.diagnostics.push_back({{}, "expected exactly one literal"});
    return out;
  }
  Lowerer low(out.diagnostics);
  auto l = low.literal(read.forms[0]);
  if (out.diagnostics.empty()) out.value = std::move(l);
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

void write_literals(std::string& out, std::string_view head, const std::vector<Literal>& ls,
                    std::string_view indent) {
  out += std::string(indent) + "(" + std::string(head);
  for (const auto& l : ls) out += " " + l.str();
  out += ")\n";
}

void write_header(std::string& out, const std::string& name, const std::vector<Term>& params) {
  out += "    (header (" + name;
  for (const auto& p : params) out += " " + p.str();
  out += "))\n";
}

void write_bindings(std::string& out, const std::vector<BindingConstraint>& bs) {
  if (bs.empty()) return;
  out += "    (bindings";
  for (const auto& b : bs)
    out += std::string(" (") + (b.equal ? "eq " : "neq ") + b.lhs.str() + " " + b.rhs.str() + ")";
  out += ")\n";
}

void write_decls(std::string& out, std::string_view head, const std::vector<PredicateDecl>& ds) {
  if (ds.empty()) return;
  out += "  (" + std::string(head);
  for (const auto& d : ds) out += " (" + d.name + " " + std::to_string(d.arity) + ")";
  out += ")\n";
}

}  // namespace

std::string serialize(const Domain& domain) {
  std::string out = "(domain " + domain.name + "\n";
  write_decls(out, "kb-predicates", domain.kb_predicates);
  write_decls(out, "predicates", domain.predicates);
  for (const auto& op : domain.operators) {
    out += "  (action\n";
    write_header(out, op.name, op.parameters);
    if (op.composite) out += "    (composite)\n";
    write_literals(out, "pre", op.preconditions, "    ");
    write_literals(out, "eff", op.effects, "    ");
    write_bindings(out, op.bindings);
    out += "  )\n";
  }
  for (const auto& s : domain.schemata) {
    out += "  (decomposition\n";
    write_header(out, s.action, s.parameters);
    write_literals(out, "constraints", s.constraints, "    ");
    out += "    (steps";
    for (const auto& t : s.steps) {
      out += "\n      (" + t.label + " (" + t.action;
      for (const auto& a : t.args) out += " " + a.str();
      out += "))";
    }
    out += ")\n    (links";
    for (const auto& l : s.links)
      out += "\n      (" + l.producer + " " + l.condition.str() + " " + l.consumer + ")";
    out += ")\n    (orderings";
    for (const auto& [a, b] : s.orderings) out += " (" + a + " " + b + ")";
    out += ")\n";
    write_bindings(out, s.bindings);
    out += "  )\n";
  }
  return out + ")\n";
}

std::string serialize(const Problem& problem) {
  std::string out = "(problem " + problem.name + "\n";
  out += "  (domain " + problem.domain + ")\n";
  write_literals(out, "facts", problem.facts, "  ");
  write_literals(out, "init", problem.init, "  ");
  write_literals(out, "goal", problem.goals, "  ");
  return out + ")\n";
}

}  // namespace dpocl

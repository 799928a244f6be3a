#include "dpocl/plan_json.hpp"

#include "json.hpp"

namespace dpocl {

oracle::AuditPlan audit_plan(const Plan& plan) {
  oracle::AuditPlan out;
  const auto& b = plan.bindings();
  for (StepId id : plan.step_ids()) {
    const Step& s = plan.step(id);
    oracle::AuditStep a{id, std::string(to_string(s.kind)), s.action, {}, {}, {}};
    for (const auto& t : s.args) a.args.push_back(b.apply(t));
    for (const auto& l : s.preconditions) a.preconditions.push_back(b.apply(l));
    for (const auto& l : s.effects) a.effects.push_back(b.apply(l));
    out.steps.push_back(std::move(a));
  }
  out.orderings = plan.orderings().pairs();
  for (const auto& l : plan.causal_links())
    out.links.push_back({l.producer, l.effect, b.apply(l.condition), l.consumer, l.precondition});
  for (const auto& d : plan.decomposition_links())
    out.decompositions.push_back({d.parent, d.begin, d.end, d.members});
  out.codesignations = b.codesignations();
  for (const auto& [x, y] : b.noncodesignations())
    out.noncodesignations.emplace_back(b.apply(x), b.apply(y));
  return out;
}

namespace {

struct BadDocument {
  std::string reason;
};

Term read_term(const nlohmann::json& j) {
  auto r = parse_term(j.get<std::string>());
  if (!r.ok()) throw BadDocument{"bad term '" + j.get<std::string>() + "'"};
  return *r.value;
}

Literal read_literal(const nlohmann::json& j) {
  auto r = parse_literal(j.get<std::string>());
  if (!r.ok()) throw BadDocument{"bad literal '" + j.get<std::string>() + "'"};
  return *r.value;
}

}  // namespace

ParseResult<oracle::AuditPlan> audit_plan_from_json(std::string_view text,
                                                    const std::string& file) {
  ParseResult<oracle::AuditPlan> out;
  SourceSpan where{file, 1, 1, 0};
  try {
    const auto doc = nlohmann::json::parse(text);
    oracle::AuditPlan plan;
    for (const auto& s : doc.at("steps")) {
      oracle::AuditStep a;
      a.id = s.at("id").get<std::uint32_t>();
      a.kind = s.at("kind").get<std::string>();
      a.action = s.at("name").get<std::string>();
      for (const auto& t : s.at("args")) a.args.push_back(read_term(t));
      for (const auto& l : s.at("preconditions")) a.preconditions.push_back(read_literal(l));
      for (const auto& e : s.at("effects")) a.effects.push_back(read_literal(e.at("literal")));
      plan.steps.push_back(std::move(a));
    }
    for (const auto& o : doc.at("orderings"))
      plan.orderings.emplace_back(o.at(0).get<std::uint32_t>(), o.at(1).get<std::uint32_t>());
    for (const auto& l : doc.at("causal_links"))
      plan.links.push_back({l.at("producer").get<std::uint32_t>(), l.at("effect").get<int>(),
                            read_literal(l.at("condition")), l.at("consumer").get<std::uint32_t>(),
                            l.at("precondition").get<std::size_t>()});
    for (const auto& d : doc.at("decomposition_links"))
      plan.decompositions.push_back({d.at("parent").get<std::uint32_t>(),
                                     d.at("begin").get<std::uint32_t>(),
                                     d.at("end").get<std::uint32_t>(),
                                     d.at("members").get<std::vector<std::uint32_t>>()});
    const auto& b = doc.at("bindings");
    for (const auto& p : b.at("codesignations"))
      plan.codesignations.emplace_back(read_term(p.at(0)), read_term(p.at(1)));
    for (const auto& p : b.at("noncodesignations"))
      plan.noncodesignations.emplace_back(read_term(p.at(0)), read_term(p.at(1)));
    out.value = std::move(plan);
  } catch (const nlohmann::json::exception& e) {
    out.diagnostics.push_back({where, std::string("malformed plan document: ") + e.what()});
  } catch (const BadDocument& e) {
    out.diagnostics.push_back({where, e.reason});
  }
  return out;
}

}  // namespace dpocl

#include "dpocl/emit.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "json.hpp"

namespace dpocl {

using nlohmann::json;

std::optional<Format> format_from_string(std::string_view s) {
  if (s == "json") return Format::Json;
  if (s == "dot") return Format::Dot;
  if (s == "text") return Format::Text;
  return std::nullopt;
}

namespace {

json statistics_json(const SearchStatistics& s) {
  return {{"nodes_expanded", s.nodes_expanded},
          {"backtracks", s.backtracks},
          {"max_depth", s.max_depth}};
}

json literals_json(const Plan& plan, const std::vector<Literal>& ls) {
  json out = json::array();
  for (const auto& l : ls) out.push_back(plan.bindings().apply(l).str());
  return out;
}

std::string hop_kind(JustificationHop::Kind k) {
  return k == JustificationHop::Kind::CausalLink ? "causal-link" : "correspondence";
}

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string emit_json(const Plan& plan, const IntentionReport& report,
                      const EmitContext& context) {
  json doc;
  doc["status"] = context.status;
  if (context.statistics) doc["statistics"] = statistics_json(*context.statistics);

  json steps = json::array();
  for (StepId id : plan.step_ids()) {
    const Step& s = plan.step(id);
    json args = json::array();
    for (const auto& a : s.args) args.push_back(plan.bindings().apply(a).str());
    json effects = json::array();
    for (std::size_t j = 0; j < s.effects.size(); ++j)
      effects.push_back({{"literal", plan.bindings().apply(s.effects[j]).str()},
                         {"intended", report.intended(id, j)}});
    steps.push_back({{"id", id},
                     {"kind", std::string(to_string(s.kind))},
                     {"name", s.action},
                     {"label", step_label(plan, id)},
                     {"args", std::move(args)},
                     {"preconditions", literals_json(plan, s.preconditions)},
                     {"effects", std::move(effects)}});
  }
  doc["steps"] = std::move(steps);

  json orderings = json::array();
  for (const auto& [a, b] : plan.orderings().pairs()) orderings.push_back({a, b});
  doc["orderings"] = std::move(orderings);

  json links = json::array();
  for (const auto& l : plan.causal_links())
    links.push_back({{"producer", l.producer},
                     {"effect", l.effect},
                     {"condition", plan.bindings().apply(l.condition).str()},
                     {"consumer", l.consumer},
                     {"precondition", l.precondition}});
  doc["causal_links"] = std::move(links);

  json decomps = json::array();
  for (const auto& d : plan.decomposition_links()) {
    json corr = json::array();
    for (const auto& [pe, ep] : d.correspondence) corr.push_back({pe, ep});
    decomps.push_back({{"parent", d.parent},
                       {"begin", d.begin},
                       {"end", d.end},
                       {"members", d.members},
                       {"constraints", literals_json(plan, d.constraints)},
                       {"correspondence", std::move(corr)}});
  }
  doc["decomposition_links"] = std::move(decomps);

  json cos = json::array();
  for (const auto& [v, value] : plan.bindings().codesignations())
    cos.push_back({v.str(), value.str()});
  json ncs = json::array();
  for (const auto& [a, b] : plan.bindings().noncodesignations())
    ncs.push_back({plan.bindings().apply(a).str(), plan.bindings().apply(b).str()});
  doc["bindings"] = {{"codesignations", std::move(cos)}, {"noncodesignations", std::move(ncs)}};

  return doc.dump(2) + "\n";
}

std::string emit_dot(const Plan& plan, const IntentionReport& report) {
  std::ostringstream os;
  os << "digraph plan {\n  rankdir=LR;\n  node [shape=box, fontname=\"Helvetica\"];\n";
  for (StepId id : plan.step_ids()) {
    const Step& s = plan.step(id);
    os << "  s" << id << " [label=\"" << dot_escape(step_label(plan, id)) << "\"";
    switch (s.kind) {
      case StepKind::Composite:
        os << ", style=rounded";
        break;
      case StepKind::BeginSubplan:
      case StepKind::EndSubplan:
        os << ", shape=ellipse";
        break;
      case StepKind::Initial:
      case StepKind::Final:
        os << ", shape=plaintext";
        break;
      case StepKind::Primitive:
        break;
    }
    os << "];\n";
  }
  for (const auto& l : plan.causal_links()) {
    const bool side = l.effect >= 0 && !report.intended(l.producer, static_cast<std::size_t>(l.effect));
    os << "  s" << l.producer << " -> s" << l.consumer << " [label=\""
       << dot_escape(plan.bindings().apply(l.condition).pretty()) << "\"";
    if (side) os << ", color=gray";
    os << "];\n";
  }
  for (const auto& d : plan.decomposition_links()) {
    os << "  s" << d.parent << " -> s" << d.begin << " [style=dashed];\n";
    os << "  s" << d.parent << " -> s" << d.end << " [style=dashed];\n";
    for (StepId m : d.members) os << "  s" << d.parent << " -> s" << m << " [style=dashed];\n";
  }
  os << "}\n";
  return os.str();
}

std::string emit_text(const Plan& plan, const IntentionReport& report) {
  std::ostringstream os;
  os << "plan: " << plan.action_step_count() << " action step(s), " << plan.causal_links().size()
     << " causal link(s)\n";

  std::vector<StepId> nested;
  for (const auto& d : plan.decomposition_links()) {
    nested.push_back(d.begin);
    nested.push_back(d.end);
    nested.insert(nested.end(), d.members.begin(), d.members.end());
  }
  std::vector<StepId> printed;
  std::function<void(StepId, int)> show = [&](StepId id, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const Step& s = plan.step(id);
    os << pad << id << " " << step_label(plan, id) << " [" << to_string(s.kind) << "]";
    if (std::find(printed.begin(), printed.end(), id) != printed.end()) {
      os << " (shared, see above)\n";
      return;
    }
    printed.push_back(id);
    os << "\n";
    for (std::size_t j = 0; j < s.effects.size(); ++j)
      os << pad << "    + " << plan.bindings().apply(s.effects[j]).pretty()
         << (report.intended(id, j) ? "" : "  (side effect)") << "\n";
    if (const auto* d = plan.decomposition_of(id)) {
      os << pad << "    subplan:\n";
      show(d->begin, indent + 3);
      for (StepId m : d->members) show(m, indent + 3);
      show(d->end, indent + 3);
      for (const auto& c : d->constraints)
        os << pad << "    licensed by " << plan.bindings().apply(c).pretty() << "\n";
    }
  };
  os << "steps:\n";
  for (StepId id : plan.step_ids())
    if (std::find(nested.begin(), nested.end(), id) == nested.end()) show(id, 1);

  os << "causal links:\n";
  for (const auto& l : plan.causal_links())
    os << "  " << l.producer << " --" << plan.bindings().apply(l.condition).pretty() << "--> "
       << l.consumer << "\n";
  os << "orderings:\n";
  for (const auto& [a, b] : plan.orderings().pairs()) os << "  " << a << " < " << b << "\n";
  return os.str();
}

std::string emit(const Plan& plan, const IntentionReport& report, Format format,
                 const EmitContext& context) {
  switch (format) {
    case Format::Json:
      return emit_json(plan, report, context);
    case Format::Dot:
      return emit_dot(plan, report);
    case Format::Text:
      return emit_text(plan, report);
  }
  return {};
}

std::string emit_failure(const EmitContext& context, Format format) {
  if (format == Format::Json) {
    json doc;
    doc["status"] = context.status;
    if (context.statistics) doc["statistics"] = statistics_json(*context.statistics);
    return doc.dump(2) + "\n";
  }
  std::string out = "no plan: " + context.status;
  if (context.statistics)
    out += " after " + std::to_string(context.statistics->nodes_expanded) + " node(s)";
  out += "\n";
  return format == Format::Dot ? "// " + out : out;
}

std::string emit_intentions(const Plan& plan, const IntentionReport& report,
                            const InformationalStructure& info, Format format) {
  if (format == Format::Json) {
    json effects = json::array();
    for (const auto& l : report.effects) {
      json hops = json::array();
      for (const auto& h : l.justification)
        hops.push_back({{"kind", hop_kind(h.kind)},
                        {"from", {h.from_step, h.from_index}},
                        {"to", {h.to_step, h.to_index}}});
      effects.push_back({{"step", l.step},
                         {"effect", l.effect},
                         {"literal", l.literal.str()},
                         {"label", l.intended ? "intended" : "side-effect"},
                         {"justification", std::move(hops)}});
    }
    json records = json::array();
    for (const auto& r : info) {
      json cs = json::array();
      for (const auto& c : r.constraints) cs.push_back(c.str());
      records.push_back({{"parent", r.parent}, {"action", r.action}, {"constraints", cs}});
    }
    json doc{{"effects", std::move(effects)}, {"informational_structure", std::move(records)}};
    return doc.dump(2) + "\n";
  }
  if (format == Format::Dot) return emit_dot(plan, report);

  std::ostringstream os;
  os << "effects:\n";
  for (const auto& l : report.effects) {
    os << "  " << step_label(plan, l.step) << " #" << l.step << ": " << l.literal.pretty() << "  "
       << (l.intended ? "intended" : "side effect") << "\n";
    for (const auto& h : l.justification)
      os << "      " << hop_kind(h.kind) << " " << h.from_step << "." << h.from_index << " -> "
         << h.to_step << "." << h.to_index << "\n";
  }
  os << "informational structure:\n";
  for (const auto& r : info) {
    os << "  " << step_label(plan, r.parent) << " #" << r.parent << ":";
    for (const auto& c : r.constraints) os << " " << c.pretty();
    os << "\n";
  }
  return os.str();
}

}  // namespace dpocl

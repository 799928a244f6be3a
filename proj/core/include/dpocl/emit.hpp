#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "dpocl/intention.hpp"
#include "dpocl/plan.hpp"
#include "dpocl/planner.hpp"

namespace dpocl {

enum class Format : std::uint8_t { Json, Dot, Text };

std::optional<Format> format_from_string(std::string_view s);

/// `status` is "solution", "exhausted" or "budget-exceeded".
struct EmitContext {
  std::string status = "solution";
  std::optional<SearchStatistics> statistics;
};

/// Plan document. Steps are listed by id and every effect carries its
/// intended flag; output is byte-stable for a fixed plan.
std::string emit(const Plan& plan, const IntentionReport& report, Format format,
                 const EmitContext& context = {});

std::string emit_json(const Plan& plan, const IntentionReport& report,
                      const EmitContext& context = {});
std::string emit_dot(const Plan& plan, const IntentionReport& report);
std::string emit_text(const Plan& plan, const IntentionReport& report);

/// Search outcome without a plan (exhausted or over budget).
std::string emit_failure(const EmitContext& context, Format format);

/// Effect labels with justification chains plus the informational structure.
std::string emit_intentions(const Plan& plan, const IntentionReport& report,
                            const InformationalStructure& info, Format format);

}  // namespace dpocl

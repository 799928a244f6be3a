#pragma once

#include <string>
#include <string_view>

#include "dpocl/oracle.hpp"
#include "dpocl/parser.hpp"
#include "dpocl/plan.hpp"

namespace dpocl {

/// Flattens a plan into the oracle's plain record (bindings applied,
/// non-codesignations carried over).
oracle::AuditPlan audit_plan(const Plan& plan);

/// Reads a `.plan.json` document written by emit_json().
ParseResult<oracle::AuditPlan> audit_plan_from_json(std::string_view text,
                                                    const std::string& file = {});

}  // namespace dpocl

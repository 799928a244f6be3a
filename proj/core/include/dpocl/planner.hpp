#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <variant>
#include <vector>

#include "dpocl/domain.hpp"
#include "dpocl/plan.hpp"

namespace dpocl {

enum class FlawPolicy : std::uint8_t {
  ThreatsFirst,  // threats, then unexpanded composites, then newest open condition
  Fifo,          // agenda front
  Lifo,          // agenda back
  Shuffle,       // threats first, remaining flaws drawn with the seeded RNG
};

/// How existing steps compete with fresh instantiations as establishers.
/// `PreferReuse` only instantiates when nothing can be reused; `PreferNew`
/// only reuses when nothing can be instantiated; `BothBranches` generates
/// both, reuse first. Links from the initial step are always offered first.
enum class ReusePolicy : std::uint8_t { PreferReuse, PreferNew, BothBranches };

std::optional<FlawPolicy> flaw_policy_from_string(std::string_view s);
std::optional<ReusePolicy> reuse_policy_from_string(std::string_view s);
std::string_view to_string(FlawPolicy p);
std::string_view to_string(ReusePolicy p);

struct SearchConfig {
  std::size_t max_steps = 64;  // primitive + composite steps
  std::size_t max_depth = 8;   // decomposition nesting
  std::size_t max_nodes = 100000;
  FlawPolicy flaw_policy = FlawPolicy::ThreatsFirst;
  std::uint64_t seed = 0;
  ReusePolicy reuse_policy = ReusePolicy::BothBranches;
};

struct SearchStatistics {
  std::size_t nodes_expanded = 0;
  std::size_t backtracks = 0;
  std::size_t max_depth = 0;
};

struct Solution {
  Plan plan;
  SearchStatistics statistics;
};

struct Exhausted {
  SearchStatistics statistics;
};

struct BudgetExceeded {
  SearchStatistics statistics;
};

using SearchOutcome = std::variant<Solution, Exhausted, BudgetExceeded>;

const SearchStatistics& statistics_of(const SearchOutcome& outcome);

/// Depth-first plan-space search with chronological backtracking. Flaw
/// selection is a fixed policy; only resolver choice is backtracked.
class Planner {
 public:
  Planner(const Domain& domain, const Problem& problem, SearchConfig config = {});

  SearchOutcome solve() const;

  Plan root() const;

  std::vector<Plan> refine_causal(const Plan& plan, const OpenCondition& flaw) const;
  std::vector<Plan> refine_decomposition(const Plan& plan, const UnexpandedComposite& flaw) const;
  std::vector<Plan> resolve_threat(const Plan& plan, const Threat& flaw) const;
  std::vector<Plan> refine(const Plan& plan, const Flaw& flaw) const;

  /// nullopt iff the agenda is empty.
  std::optional<Flaw> select_flaw(const Plan& plan, std::mt19937_64* rng = nullptr) const;

  const SearchConfig& config() const { return config_; }

 private:
  const Domain& domain_;
  const Problem& problem_;
  KnowledgeBase kb_;
  SearchConfig config_;
};

/// Drops primitive steps that establish nothing, to a fixpoint.
Plan prune_unused(const Plan& plan);

SearchOutcome solve(const Domain& domain, const Problem& problem, const SearchConfig& config = {});

}  // namespace dpocl

#pragma once

#include "fairdiv/market.hpp"

#include <map>
#include <optional>
#include <vector>

namespace fairdiv {

/// Comparison key shared by the initialization and reallocation phases:
/// spending compares p(X_i)/w_i, value compares v_i(X_i)/w_i.
enum class Metric { spending, value };

const char* metric_name(Metric metric);

Rational metric_of(const MarketState& state, int agent, Metric metric);
Rational hat_of(const MarketState& state, int agent, Metric metric);

struct SolveOptions {
    Metric metric = Metric::spending;
    /// Invariant checking; defaults to on iff n*m <= 200.
    std::optional<bool> check_invariants;
    /// Forced owners for the welfare-maximizing start, good -> agent.
    std::map<int, int> owner_override;
};

bool effective_check(const Instance& inst, const SolveOptions& opts);

struct InitRound {
    std::vector<int> path;        // start .. end
    std::vector<int> moved_goods; // good moved at hop r -> r-1, end first
};

struct InitResult {
    MarketState state;
    AgentGroups groups;
    long transfer_rounds = 0;
    std::vector<InitRound> log;
};

/// ceil(k)*n*m capped by the unconditional n*m^2 bound.
long init_round_budget(const Instance& inst);

/// Welfare-maximizing start: goods someone values k go to the lowest-index
/// such agent, consistently-small goods to agent 0, prices equal to the
/// owner's value. Overrides must still pick a welfare-maximizing owner.
MarketState welfare_max_init(const Instance& inst, const std::map<int, int>& owner_override = {});

/// Runs the MBB-path transfer loop to its fixpoint. Returns the round count
/// and appends per-round records to log when non-null.
long transfer_phase(MarketState& state, Metric metric, bool check, std::vector<InitRound>* log = nullptr);

/// Ordered groups grown from successive least-metric representatives.
AgentGroups build_groups(const MarketState& state, Metric metric);

/// Full initialization pipeline; checks the equilibrium/group properties of
/// the output when invariant checking is on.
InitResult initial_equilibrium(const Instance& inst, const SolveOptions& opts = {});

} // namespace fairdiv

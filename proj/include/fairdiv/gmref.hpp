#pragma once

#include "fairdiv/instance.hpp"
#include "fairdiv/market.hpp"

#include <map>
#include <optional>
#include <vector>

namespace fairdiv {

/// Allocation/price pair stepped by the reference algorithm. Spendings here
/// are unweighted; the reference algorithm ignores agent weights.
struct GmState {
    Allocation alloc;
    std::vector<Rational> price;

    bool operator==(const GmState&) const = default;
};

struct GmTransfer {
    int from = -1;
    int to = -1;
    int good = -1;
};

struct GmStepLog {
    long step = 0;
    int least_spender = -1;                   // after the inner transfer loop
    std::vector<GmTransfer> transfers;
    std::vector<int> raised_goods;            // empty when the step returned
    bool returned = false;
};

/// Certifies a scaling cycle: the allocation at t2 equals the allocation at
/// t1 and every price is exactly `scale` times larger, scale > 1. Since the
/// step dynamics commute with uniform price scaling, this proves divergence.
struct CycleProof {
    long t1 = 0;
    long t2 = 0;
    Rational scale;
};

/// The two-agent, five-good instance the reference algorithm never leaves.
Instance table1_instance();

/// Owner override reproducing the published trace on table1_instance
/// (the consistently small good starts with agent 2).
std::map<int, int> table1_trace_override();

/// Welfare-maximizing start, same tie rules and override hook as the main
/// initializer.
GmState gm_initial_state(const Instance& inst, const std::map<int, int>& owner_override = {});

/// One outer iteration: recompute the least spender, run the inner MBB-path
/// transfer loop to its fixpoint, then either flag termination or raise the
/// prices of the least spender's reachability component by k.
GmStepLog gm_step(const Instance& inst, GmState& state, long step_index = 0);

GmState scale_prices(const GmState& state, const Rational& factor);

struct GmRun {
    enum class Outcome { terminated, cycle_detected, budget_exhausted };
    Outcome outcome = Outcome::budget_exhausted;
    long steps = 0;
    std::optional<CycleProof> cycle;
    std::vector<GmState> states; // states[t] = state before step t+1
    std::vector<GmStepLog> log;
};

/// Runs gm_step up to max_steps times, comparing each new state against all
/// prior ones modulo uniform price scaling.
GmRun run_gm(const Instance& inst, long max_steps, const std::map<int, int>& owner_override = {});

} // namespace fairdiv

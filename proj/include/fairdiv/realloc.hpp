#pragma once

#include "fairdiv/init.hpp"
#include "fairdiv/market.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fairdiv {

/// Least-metric agent within a group and biggest hat-metric agent over all
/// agents, ties to the lowest index.
int least_agent(const MarketState& state, const std::vector<int>& group, Metric metric);
int big_agent(const MarketState& state, Metric metric);

/// One reallocation round: either a whole-group price rise or a single good
/// moving from the big agent to the least agent.
struct RoundRecord {
    enum class Kind { price_rise, transfer };
    Kind kind = Kind::price_rise;
    long t = 0;

    int group = -1;                // price_rise: group index raised
    std::vector<int> raised_goods; // price_rise

    int from = -1;             // transfer
    int to = -1;               // transfer
    int good = -1;             // transfer
    bool from_unraised = false; // transfer: big agent was still unraised

    int least = -1;
    int big = -1;
    Rational least_metric;
    Rational big_hat;
    std::vector<int> satisfied; // Q^t: agents whose metric >= big's hat, ascending
};

struct SolveTrace {
    Allocation x0;
    std::vector<Rational> p0;
    std::vector<RoundRecord> rounds;
    std::vector<int> raise_count; // per good
};

enum class Termination { early_return, groups_exhausted };

struct SolveResult {
    MarketState state;
    AgentGroups groups;
    SolveTrace trace;
    Termination terminated_at = Termination::groups_exhausted;
    long init_transfer_rounds = 0;
    long price_rise_rounds = 0;
    long transfer_rounds = 0;
    int final_least = -1; // least agent of the first unraised group at the end
    int final_big = -1;
};

/// n*m, the overall transfer budget of the reallocation phase.
long realloc_round_budget(const Instance& inst);

/// The good moved from the big agent b: any good when b is unraised,
/// otherwise one b picked up after its own raise; lowest good index.
int pick_transfer_good(const MarketState& state, int big, bool big_unraised,
                       const Allocation& x0);

struct InvariantVerdict {
    int id = 0;
    std::string name;
    bool ok = true;
    std::string detail;
};

/// Round-by-round checker for the six reallocation invariants. Holds the
/// frozen initial state and the history (raise counts, agents ever seen as
/// the big agent) the later invariants quantify over.
class InvariantMonitor {
public:
    InvariantMonitor(const Instance& inst, const AgentGroups& groups, const MarketState& initial,
                     Metric metric);

    /// Verdicts for one executed round; `before` and `after` bracket it.
    std::vector<InvariantVerdict> step(const MarketState& before, const MarketState& after,
                                       const RoundRecord& row);

    bool ever_big(int agent) const { return ever_big_[agent] != 0; }

private:
    const Instance* inst_;
    const AgentGroups* groups_;
    Metric metric_;
    Allocation x0_;
    std::vector<Rational> p0_;
    std::vector<char> group_raised_;
    std::vector<int> raise_count_;
    std::vector<char> ever_big_;
    std::optional<Rational> prev_big_hat_;
    std::vector<int> prev_satisfied_;
};

/// Full solve: initialization, then group-by-group price rises with
/// least<-big transfers. The returned state passes the mode's fairness
/// checker and the equilibrium test.
SolveResult solve(const Instance& inst, const SolveOptions& opts = {});

} // namespace fairdiv

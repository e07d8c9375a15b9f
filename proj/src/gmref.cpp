#include "fairdiv/gmref.hpp"

#include "fairdiv/error.hpp"
#include "fairdiv/init.hpp"

#include <algorithm>

namespace fairdiv {

Instance table1_instance() {
    RawInstance raw;
    raw.agent_ids = {"a1", "a2"};
    raw.good_ids = {"e1", "e2", "e3", "e4", "e5"};
    raw.values = {
        {Rational(5), Rational(5), Rational(5), Rational(1), Rational(1)},
        {Rational(1), Rational(1), Rational(1), Rational(1), Rational(5)},
    };
    raw.weights = {Rational(1, 2), Rational(1, 2)};
    return validate_instance(raw);
}

std::map<int, int> table1_trace_override() {
    return {{3, 1}}; // e4 starts with agent 2; every other good follows the default rule
}

GmState gm_initial_state(const Instance& inst, const std::map<int, int>& owner_override) {
    MarketState st = welfare_max_init(inst, owner_override);
    return {std::move(st.alloc), std::move(st.price)};
}

namespace {

Rational unweighted_spending(const Allocation& alloc, const std::vector<Rational>& price,
                             int agent) {
    Rational sum(0);
    for (int e = 0; e < alloc.size(); ++e)
        if (alloc.owner[e] == agent) sum += price[e];
    return sum;
}

Rational unweighted_hat(const Allocation& alloc, const std::vector<Rational>& price, int agent) {
    Rational sum(0), min_price;
    bool any = false;
    for (int e = 0; e < alloc.size(); ++e) {
        if (alloc.owner[e] != agent) continue;
        sum += price[e];
        if (!any || price[e] < min_price) min_price = price[e];
        any = true;
    }
    return any ? sum - min_price : Rational(0);
}

int gm_least_spender(const Instance& inst, const Allocation& alloc,
                     const std::vector<Rational>& price) {
    int best = 0;
    Rational best_spend = unweighted_spending(alloc, price, 0);
    for (int i = 1; i < inst.n; ++i) {
        const Rational sp = unweighted_spending(alloc, price, i);
        if (sp < best_spend) {
            best = i;
            best_spend = sp;
        }
    }
    return best;
}

} // namespace

GmStepLog gm_step(const Instance& inst, GmState& state, long step_index) {
    GmStepLog log;
    log.step = step_index;

    MarketState market = MarketState::make(inst, state.alloc, state.price);

    // Inner loop: from the current least spender, follow MBB paths and pull
    // the last-hop good backward while some end-agent stays above the least
    // spender even after dropping a cheapest good.
    const long inner_budget = init_round_budget(inst) + 1;
    long inner = 0;
    while (true) {
        const int least = gm_least_spender(inst, market.alloc, market.price);
        const Rational base = unweighted_spending(market.alloc, market.price, least);
        const MbbGraph g = build_mbb_graph(market);

        std::vector<int> parent(inst.n, -1);
        std::vector<int> discovered{least};
        parent[least] = least;
        for (size_t qi = 0; qi < discovered.size(); ++qi)
            for (int v = 0; v < inst.n; ++v)
                if (g.edge[discovered[qi]][v] && parent[v] < 0) {
                    parent[v] = discovered[qi];
                    discovered.push_back(v);
                }

        int end = -1;
        for (int j : discovered) {
            if (j == least) continue;
            if (unweighted_hat(market.alloc, market.price, j) > base) {
                end = j;
                break;
            }
        }
        if (end < 0) break;

        const int taker = parent[end];
        int pick = -1;
        for (int e = 0; e < inst.m; ++e) {
            if (market.alloc.owner[e] != end || !market.is_mbb(taker, e)) continue;
            if (pick < 0 || market.price[e] < market.price[pick]) pick = e;
        }
        if (pick < 0) fail(Errc::invariant_violation, "MBB edge without a transferable good");
        market.transfer(pick, taker);
        log.transfers.push_back({end, taker, pick});

        if (++inner > inner_budget)
            fail(Errc::round_budget_exceeded, "reference inner loop exceeded its budget");
    }

    const int least = gm_least_spender(inst, market.alloc, market.price);
    log.least_spender = least;
    const Rational base = unweighted_spending(market.alloc, market.price, least);
    const MbbGraph g = build_mbb_graph(market);
    const std::vector<int> component = reachable_from(g, least);
    std::vector<char> inside(inst.n, 0);
    for (int i : component) inside[i] = 1;

    bool done = true;
    for (int h = 0; h < inst.n && done; ++h) {
        if (inside[h]) continue;
        if (unweighted_hat(market.alloc, market.price, h) > base) done = false;
    }

    state.alloc = market.alloc;
    state.price = market.price;
    if (done) {
        log.returned = true;
        return log;
    }
    for (int e = 0; e < inst.m; ++e)
        if (inside[state.alloc.owner[e]]) {
            state.price[e] *= inst.k;
            log.raised_goods.push_back(e);
        }
    return log;
}

GmState scale_prices(const GmState& state, const Rational& factor) {
    GmState out = state;
    for (auto& p : out.price) p *= factor;
    return out;
}

namespace {

// Equal allocations and uniformly proportional prices; factor = new/old.
std::optional<Rational> scaling_factor(const GmState& later, const GmState& earlier) {
    if (!(later.alloc == earlier.alloc)) return std::nullopt;
    if (later.price.empty()) return std::nullopt;
    const Rational factor = later.price[0] / earlier.price[0];
    for (size_t e = 1; e < later.price.size(); ++e)
        if (later.price[e] != earlier.price[e] * factor) return std::nullopt;
    return factor;
}

} // namespace

GmRun run_gm(const Instance& inst, long max_steps, const std::map<int, int>& owner_override) {
    if (max_steps < 1) fail(Errc::parse_error, "max_steps must be at least 1");
    GmRun run;
    run.states.push_back(gm_initial_state(inst, owner_override));

    for (long step = 1; step <= max_steps; ++step) {
        GmState next = run.states.back();
        GmStepLog log = gm_step(inst, next, step);
        run.log.push_back(log);
        run.steps = step;
        if (log.returned) {
            run.states.push_back(std::move(next));
            run.outcome = GmRun::Outcome::terminated;
            return run;
        }
        run.states.push_back(std::move(next));
        for (long t1 = 0; t1 + 1 < static_cast<long>(run.states.size()); ++t1) {
            const auto factor = scaling_factor(run.states.back(), run.states[t1]);
            if (factor && *factor > Rational(1)) {
                run.outcome = GmRun::Outcome::cycle_detected;
                run.cycle = CycleProof{t1, step, *factor};
                return run;
            }
        }
    }
    run.outcome = GmRun::Outcome::budget_exhausted;
    return run;
}

} // namespace fairdiv

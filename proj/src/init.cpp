#include "fairdiv/init.hpp"

#include "fairdiv/error.hpp"

#include <algorithm>
#include <optional>

namespace fairdiv {

const char* metric_name(Metric metric) {
    return metric == Metric::spending ? "spending" : "value";
}

Rational metric_of(const MarketState& state, int agent, Metric metric) {
    return metric == Metric::spending ? state.spending(agent) : state.own_value(agent);
}

Rational hat_of(const MarketState& state, int agent, Metric metric) {
    return metric == Metric::spending ? state.hat_spending(agent) : state.hat_value(agent);
}

bool effective_check(const Instance& inst, const SolveOptions& opts) {
    if (opts.check_invariants) return *opts.check_invariants;
    return static_cast<long>(inst.n) * inst.m <= 200;
}

long init_round_budget(const Instance& inst) {
    const long nm = static_cast<long>(inst.n) * inst.m;
    return std::min(inst.k.ceil_long() * nm, nm * inst.m);
}

MarketState welfare_max_init(const Instance& inst, const std::map<int, int>& owner_override) {
    Allocation alloc(std::vector<int>(inst.m, 0));
    std::vector<Rational> price(inst.m, Rational(1));
    for (int e = 0; e < inst.m; ++e) {
        bool high = false;
        int owner = 0;
        for (int i = 0; i < inst.n; ++i)
            if (inst.values_high(i, e)) {
                owner = i;
                high = true;
                break;
            }
        if (auto it = owner_override.find(e); it != owner_override.end()) {
            const int forced = it->second;
            if (forced < 0 || forced >= inst.n) fail(Errc::parse_error, "owner override out of range");
            if (high && !inst.values_high(forced, e))
                fail(Errc::parse_error, "owner override for good " + inst.good_ids[e] +
                                            " breaks welfare maximization");
            owner = forced;
        }
        alloc.owner[e] = owner;
        price[e] = inst.values[owner][e];
    }
    return MarketState::make(inst, std::move(alloc), std::move(price));
}

namespace {

struct ViolatingPath {
    std::vector<int> path; // start .. end, length >= 2
};

// Start candidates in ascending (metric, index) order; from each, BFS with
// ascending next-hops; the end is the first discovered agent whose hat-metric
// strictly exceeds the start's metric.
std::optional<ViolatingPath> find_violating_path(const MarketState& state, const MbbGraph& g,
                                                 Metric metric) {
    const int n = state.inst->n;
    std::vector<std::pair<Rational, int>> order;
    order.reserve(n);
    for (int i = 0; i < n; ++i) order.emplace_back(metric_of(state, i, metric), i);
    std::sort(order.begin(), order.end());

    for (const auto& [mu, start] : order) {
        std::vector<int> parent(n, -1);
        std::vector<int> discovered{start};
        parent[start] = start;
        for (size_t qi = 0; qi < discovered.size(); ++qi) {
            const int u = discovered[qi];
            for (int v = 0; v < n; ++v)
                if (g.edge[u][v] && parent[v] < 0) {
                    parent[v] = u;
                    discovered.push_back(v);
                }
        }
        for (int j : discovered) {
            if (j == start) continue; // removing a good cannot beat one's own full metric
            if (hat_of(state, j, metric) > mu) {
                std::vector<int> path;
                for (int v = j; v != start; v = parent[v]) path.push_back(v);
                path.push_back(start);
                std::reverse(path.begin(), path.end());
                return ViolatingPath{std::move(path)};
            }
        }
    }
    return std::nullopt;
}

Rational metric_without(const MarketState& state, int agent, int dropped, Metric metric) {
    Rational sum(0);
    for (int e = 0; e < state.inst->m; ++e) {
        if (state.alloc.owner[e] != agent || e == dropped) continue;
        sum += metric == Metric::spending ? state.price[e] : state.inst->values[agent][e];
    }
    return sum / state.inst->weights[agent];
}

// Literal re-scan of the loop guard over all (start, end, removable good)
// triples; independent of the hat-metric shortcut used by the search.
void rescan_fixpoint(const MarketState& state, Metric metric) {
    const MbbGraph g = build_mbb_graph(state);
    for (int i0 = 0; i0 < state.inst->n; ++i0) {
        const Rational mu = metric_of(state, i0, metric);
        for (int j : reachable_from(g, i0))
            for (int e = 0; e < state.inst->m; ++e) {
                if (state.alloc.owner[e] != j) continue;
                if (metric_without(state, j, e, metric) > mu)
                    fail(Errc::invariant_violation,
                         "transfer fixpoint re-scan found a live path " + std::to_string(i0) +
                             " -> " + std::to_string(j) + " dropping good " + std::to_string(e));
            }
    }
}

} // namespace

long transfer_phase(MarketState& state, Metric metric, bool check, std::vector<InitRound>* log) {
    const long budget = init_round_budget(*state.inst);
    long rounds = 0;
    std::optional<Rational> prev_start_metric;

    while (true) {
        const MbbGraph g = build_mbb_graph(state);
        auto found = find_violating_path(state, g, metric);
        if (!found) break;

        const auto& path = found->path;
        const int s = static_cast<int>(path.size()) - 1;
        const Rational start_metric = metric_of(state, path[0], metric);

        std::vector<Rational> before;
        if (check) {
            if (prev_start_metric && start_metric < *prev_start_metric)
                fail(Errc::invariant_violation, "start-agent metric decreased across rounds");
            for (int r = 0; r < s; ++r) before.push_back(metric_of(state, path[r], metric));
        }

        InitRound round;
        round.path = path;
        for (int r = s; r >= 1; --r) {
            const int giver = path[r], taker = path[r - 1];
            int pick = -1;
            for (int e = 0; e < state.inst->m; ++e) {
                if (state.alloc.owner[e] != giver || !state.is_mbb(taker, e)) continue;
                if (pick < 0 || state.price[e] < state.price[pick]) pick = e;
            }
            if (pick < 0)
                fail(Errc::invariant_violation, "MBB edge vanished mid-path during a transfer round");
            state.transfer(pick, taker);
            round.moved_goods.push_back(pick);
        }

        if (check) {
            for (int r = 0; r < s; ++r)
                if (metric_of(state, path[r], metric) < before[r])
                    fail(Errc::invariant_violation, "non-terminal path agent lost metric in a round");
            if (auto eq = is_equilibrium(state); !eq.ok)
                fail(Errc::invariant_violation, "equilibrium broken after a transfer round");
            prev_start_metric = start_metric;
        }

        if (log) log->push_back(std::move(round));
        if (++rounds > budget)
            fail(Errc::round_budget_exceeded,
                 "initialization used more than " + std::to_string(budget) + " rounds");
    }

    if (check) rescan_fixpoint(state, metric);
    return rounds;
}

AgentGroups build_groups(const MarketState& state, Metric metric) {
    const int n = state.inst->n;
    const MbbGraph g = build_mbb_graph(state);
    AgentGroups groups;
    groups.group_of.assign(n, -1);

    std::vector<char> remaining(n, 1);
    int left = n;
    while (left > 0) {
        int rep = -1;
        Rational best;
        for (int i = 0; i < n; ++i) {
            if (!remaining[i]) continue;
            const Rational mu = metric_of(state, i, metric);
            if (rep < 0 || mu < best) {
                rep = i;
                best = mu;
            }
        }
        std::vector<int> group;
        for (int i : reachable_from(g, rep))
            if (remaining[i]) {
                group.push_back(i);
                remaining[i] = 0;
                --left;
            }
        const int idx = groups.count();
        for (int i : group) groups.group_of[i] = idx;
        groups.members.push_back(std::move(group));
        groups.representative.push_back(rep);
    }
    return groups;
}

namespace {

// Output contract of the initialization phase: equilibrium with unit MBB
// ratios, no high value across group boundaries (low to high), consistently
// small goods inside the first group, and within-group fairness in the
// phase's own metric. Unit ratios admit one benign exception: an agent who
// values every good 1 while no good is consistently small ends at 1/k.
void check_initial_properties(const InitResult& res, Metric metric) {
    const MarketState& st = res.state;
    const Instance& inst = *st.inst;

    if (auto eq = is_equilibrium(st); !eq.ok)
        fail(Errc::invariant_violation, "initial state is not an equilibrium");

    const ItemGroups items = classify_items(inst);
    if (inst.m > 0) {
        const Rational one(1), inv_k = Rational(1) / inst.k;
        for (int i = 0; i < inst.n; ++i) {
            if (st.mbb.alpha[i] == one) continue;
            bool all_low = true;
            for (int e = 0; e < inst.m && all_low; ++e)
                if (inst.values_high(i, e)) all_low = false;
            if (!(st.mbb.alpha[i] == inv_k && all_low && items.consistently_small.empty()))
                fail(Errc::invariant_violation,
                     "agent " + std::to_string(i) + " has MBB ratio " + st.mbb.alpha[i].str() +
                         " after initialization");
        }
    }

    for (int e : items.consistently_small)
        if (res.groups.group_of[st.alloc.owner[e]] != 0)
            fail(Errc::invariant_violation, "consistently small good outside the first group");

    for (int e = 0; e < inst.m; ++e) {
        const int owner_group = res.groups.group_of[st.alloc.owner[e]];
        for (int i = 0; i < inst.n; ++i)
            if (res.groups.group_of[i] < owner_group && inst.values_high(i, e))
                fail(Errc::invariant_violation,
                     "low-group agent values a high-group good at k after initialization");
    }

    for (const auto& group : res.groups.members)
        for (int i : group)
            for (int j : group)
                if (metric_of(st, i, metric) < hat_of(st, j, metric))
                    fail(Errc::invariant_violation,
                         "group not " +
                             std::string(metric == Metric::spending ? "pWEFX" : "WEQX") +
                             " after initialization");
}

} // namespace

InitResult initial_equilibrium(const Instance& inst, const SolveOptions& opts) {
    const bool check = effective_check(inst, opts);
    InitResult res{welfare_max_init(inst, opts.owner_override), {}, 0, {}};
    res.transfer_rounds = transfer_phase(res.state, opts.metric, check, &res.log);
    res.groups = build_groups(res.state, opts.metric);
    if (check) check_initial_properties(res, opts.metric);
    return res;
}

} // namespace fairdiv

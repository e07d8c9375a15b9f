#include "fairdiv/realloc.hpp"

#include "fairdiv/error.hpp"
#include "fairdiv/verify.hpp"

#include <algorithm>
#include <numeric>

namespace fairdiv {

int least_agent(const MarketState& state, const std::vector<int>& group, Metric metric) {
    int best = -1;
    Rational best_metric;
    for (int i : group) {
        const Rational mu = metric_of(state, i, metric);
        if (best < 0 || mu < best_metric) {
            best = i;
            best_metric = mu;
        }
    }
    return best;
}

int big_agent(const MarketState& state, Metric metric) {
    int best = 0;
    Rational best_hat = hat_of(state, 0, metric);
    for (int i = 1; i < state.inst->n; ++i) {
        const Rational h = hat_of(state, i, metric);
        if (h > best_hat) {
            best = i;
            best_hat = h;
        }
    }
    return best;
}

long realloc_round_budget(const Instance& inst) {
    return static_cast<long>(inst.n) * inst.m;
}

int pick_transfer_good(const MarketState& state, int big, bool big_unraised,
                       const Allocation& x0) {
    for (int e = 0; e < state.inst->m; ++e) {
        if (state.alloc.owner[e] != big) continue;
        if (big_unraised || x0.owner[e] != big) return e;
    }
    fail(Errc::empty_transfer_set,
         big_unraised ? "unraised big agent holds no goods"
                      : "raised big agent holds no goods beyond its initial bundle");
}

namespace {

std::vector<int> satisfied_toward(const MarketState& state, int big, Metric metric) {
    const Rational h = hat_of(state, big, metric);
    std::vector<int> q;
    for (int i = 0; i < state.inst->n; ++i)
        if (metric_of(state, i, metric) >= h) q.push_back(i);
    return q;
}

bool is_subset(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

} // namespace

InvariantMonitor::InvariantMonitor(const Instance& inst, const AgentGroups& groups,
                                   const MarketState& initial, Metric metric)
    : inst_(&inst), groups_(&groups), metric_(metric), x0_(initial.alloc), p0_(initial.price),
      group_raised_(groups.count(), 0), raise_count_(inst.m, 0), ever_big_(inst.n, 0) {}

std::vector<InvariantVerdict> InvariantMonitor::step(const MarketState& before,
                                                     const MarketState& after,
                                                     const RoundRecord& row) {
    std::vector<InvariantVerdict> out;
    auto verdict = [&](int id, const char* name, bool ok, std::string detail = {}) {
        out.push_back({id, name, ok, std::move(detail)});
    };

    const Instance& inst = *inst_;
    const AgentGroups& groups = *groups_;

    // (5) the group being raised must be pristine: never the big agent, and
    // still holding exactly its initial bundle
    if (row.kind == RoundRecord::Kind::price_rise) {
        bool ok = true;
        std::string detail;
        for (int i : groups.members[row.group]) {
            if (ever_big_[i]) {
                ok = false;
                detail = "agent " + std::to_string(i) + " was a big agent before its raise";
                break;
            }
            for (int e = 0; e < inst.m; ++e)
                if ((before.alloc.owner[e] == i) != (x0_.owner[e] == i)) {
                    ok = false;
                    detail = "agent " + std::to_string(i) + " no longer holds its initial bundle";
                    break;
                }
            if (!ok) break;
        }
        verdict(5, "least-agent-pristine", ok, detail);
        group_raised_[row.group] = 1;
        for (int e : row.raised_goods) ++raise_count_[e];
    } else {
        verdict(5, "least-agent-pristine", true);
    }

    const auto eq = is_equilibrium(after);
    verdict(1, "equilibrium", eq.ok,
            eq.ok ? ""
                  : "agent " + std::to_string(eq.witness->agent) + " holds non-MBB good " +
                        std::to_string(eq.witness->good));

    {
        bool ok = true;
        std::string detail;
        for (int g = 0; g < groups.count() && ok; ++g)
            for (int i : groups.members[g]) {
                for (int j : groups.members[g])
                    if (metric_of(after, i, metric_) < hat_of(after, j, metric_)) {
                        ok = false;
                        detail = "group " + std::to_string(g) + ": agent " + std::to_string(i) +
                                 " vs " + std::to_string(j);
                        break;
                    }
                if (!ok) break;
            }
        verdict(2, "group-fairness", ok, detail);
    }

    // (3) raised prefix structure
    {
        bool ok = true;
        std::string detail;
        int r_star = 0;
        while (r_star < groups.count() && group_raised_[r_star]) ++r_star;
        for (int g = r_star; g < groups.count() && ok; ++g)
            if (group_raised_[g]) {
                ok = false;
                detail = "raised groups are not a prefix";
            }

        const Rational one(1), inv_k = Rational(1) / inst.k;
        const ItemGroups items = classify_items(inst);
        std::vector<char> exempt(inst.n, 0); // values everything 1 while M^- is empty
        if (items.consistently_small.empty())
            for (int i = 0; i < inst.n; ++i) {
                bool all_low = true;
                for (int e = 0; e < inst.m && all_low; ++e)
                    if (inst.values_high(i, e)) all_low = false;
                exempt[i] = all_low;
            }

        for (int e = 0; e < inst.m && ok; ++e) {
            const bool initially_raised_side = groups.group_of[x0_.owner[e]] < r_star;
            if (raise_count_[e] != (initially_raised_side ? 1 : 0)) {
                ok = false;
                detail = "good " + std::to_string(e) + " raised " +
                         std::to_string(raise_count_[e]) + " times";
            }
        }
        for (int i = 0; i < inst.n && ok; ++i) {
            const bool raised = groups.group_of[i] < r_star;
            for (int e = 0; e < inst.m && ok; ++e) {
                const Rational a = bang_per_buck(inst, after.price, i, e);
                const bool from_raised = groups.group_of[x0_.owner[e]] < r_star;
                if (from_raised && a > inv_k) {
                    ok = false;
                    detail = "ratio above 1/k on a raised good";
                }
                if (!from_raised && raised && a != inv_k) {
                    ok = false;
                    detail = "raised agent's ratio on an unraised good is not 1/k";
                }
            }
            if (!ok) break;
            if (raised) {
                if (after.mbb.alpha[i] != inv_k) {
                    ok = false;
                    detail = "raised agent " + std::to_string(i) + " has ratio " +
                             after.mbb.alpha[i].str();
                }
                for (int e = 0; e < inst.m && ok; ++e)
                    if (x0_.owner[e] == i && after.alloc.owner[e] != i) {
                        ok = false;
                        detail = "raised agent lost an initial good";
                    }
            } else {
                if (inst.m > 0 && after.mbb.alpha[i] != one &&
                    !(exempt[i] && after.mbb.alpha[i] == inv_k)) {
                    ok = false;
                    detail = "unraised agent " + std::to_string(i) + " has ratio " +
                             after.mbb.alpha[i].str();
                }
                for (int e = 0; e < inst.m && ok; ++e)
                    if (after.alloc.owner[e] == i && x0_.owner[e] != i) {
                        ok = false;
                        detail = "unraised agent received a good";
                    }
            }
        }
        verdict(3, "raised-prefix", ok, detail);
    }

    verdict(4, "big-hat-non-increasing", !prev_big_hat_ || *prev_big_hat_ >= row.big_hat,
            prev_big_hat_ && *prev_big_hat_ < row.big_hat
                ? prev_big_hat_->str() + " -> " + row.big_hat.str()
                : "");

    verdict(6, "satisfied-set-monotone", is_subset(prev_satisfied_, row.satisfied));

    ever_big_[row.big] = 1;
    prev_big_hat_ = row.big_hat;
    prev_satisfied_ = row.satisfied;
    return out;
}

namespace {

void escalate(const std::vector<InvariantVerdict>& verdicts, long t) {
    for (const auto& v : verdicts)
        if (!v.ok)
            fail(Errc::invariant_violation, "round " + std::to_string(t) + ": invariant " +
                                                std::to_string(v.id) + " (" + v.name + ") " +
                                                v.detail);
}

} // namespace

SolveResult solve(const Instance& inst, const SolveOptions& opts) {
    const bool check = effective_check(inst, opts);
    const Metric metric = opts.metric;

    InitResult init = initial_equilibrium(inst, opts);

    SolveResult res;
    res.init_transfer_rounds = init.transfer_rounds;
    res.groups = std::move(init.groups);
    res.state = std::move(init.state);
    res.trace.x0 = res.state.alloc;
    res.trace.p0 = res.state.price;
    res.trace.raise_count.assign(inst.m, 0);

    std::optional<InvariantMonitor> monitor;
    if (check) monitor.emplace(inst, res.groups, res.state, metric);

    MarketState& state = res.state;
    const int R = res.groups.count();
    const long transfer_budget = realloc_round_budget(inst);
    std::vector<char> unraised(inst.n, 1);
    std::vector<char> group_raised(R, 0);
    long t = 0;

    auto head_record = [&](RoundRecord::Kind kind, int ell, int big) {
        RoundRecord row;
        row.kind = kind;
        row.t = t;
        row.least = ell;
        row.big = big;
        row.least_metric = metric_of(state, ell, metric);
        row.big_hat = hat_of(state, big, metric);
        row.satisfied = satisfied_toward(state, big, metric);
        return row;
    };

    res.terminated_at = Termination::groups_exhausted;
    for (int r = 0; r + 1 < R; ++r) {
        int ell = least_agent(state, res.groups.members[r], metric);
        int big = big_agent(state, metric);

        // SPENDING relaxes the stop test by a factor of k; VALUE does not.
        const Rational lhs = metric == Metric::spending
                                 ? inst.k * metric_of(state, ell, metric)
                                 : metric_of(state, ell, metric);
        if (lhs >= hat_of(state, big, metric)) {
            res.terminated_at = Termination::early_return;
            break;
        }

        if (group_raised[r]) fail(Errc::double_raise, "group raised twice");
        RoundRecord rise = head_record(RoundRecord::Kind::price_rise, ell, big);
        rise.group = r;
        for (int e = 0; e < inst.m; ++e)
            if (res.groups.group_of[state.alloc.owner[e]] == r) rise.raised_goods.push_back(e);

        std::optional<MarketState> before;
        if (monitor) before = state;
        state.raise_prices(rise.raised_goods, inst.k);
        group_raised[r] = 1;
        for (int i : res.groups.members[r]) unraised[i] = 0;
        for (int e : rise.raised_goods) ++res.trace.raise_count[e];
        ++res.price_rise_rounds;
        if (monitor) escalate(monitor->step(*before, state, rise), t);
        res.trace.rounds.push_back(std::move(rise));
        ++t;

        long group_transfers = 0;
        while (metric_of(state, ell, metric) < hat_of(state, big, metric)) {
            const bool from_unraised = unraised[big] != 0;
            const int e = pick_transfer_good(state, big, from_unraised, res.trace.x0);

            // every transferred good is priced k and MBB for the receiver;
            // in value mode it is also a minimum-value good for the giver
            if (state.price[e] != inst.k)
                fail(Errc::invariant_violation,
                     "transferred good " + std::to_string(e) + " priced " + state.price[e].str());
            if (!state.is_mbb(ell, e))
                fail(Errc::invariant_violation,
                     "transferred good " + std::to_string(e) + " is not MBB for the receiver");
            if (metric == Metric::value)
                for (int e2 = 0; e2 < inst.m; ++e2)
                    if (state.alloc.owner[e2] == big &&
                        inst.values[big][e2] < inst.values[big][e])
                        fail(Errc::invariant_violation,
                             "transferred good is not minimum-value for the giver");

            RoundRecord move = head_record(RoundRecord::Kind::transfer, ell, big);
            move.from = big;
            move.to = ell;
            move.good = e;
            move.from_unraised = from_unraised;

            if (monitor) before = state;
            state.transfer(e, ell);
            ++res.transfer_rounds;
            if (monitor) escalate(monitor->step(*before, state, move), t);
            res.trace.rounds.push_back(std::move(move));
            ++t;

            if (++group_transfers > inst.m)
                fail(Errc::round_budget_exceeded, "more than m transfers in one group iteration");
            if (res.transfer_rounds > transfer_budget)
                fail(Errc::round_budget_exceeded, "more than n*m transfers overall");

            ell = least_agent(state, res.groups.members[r], metric);
            big = big_agent(state, metric);
        }
    }

    const int r_star = static_cast<int>(std::count(group_raised.begin(), group_raised.end(), 1));
    res.final_least = least_agent(state, res.groups.members[r_star], metric);
    res.final_big = big_agent(state, metric);

    if (check) {
        const auto fairness = metric == Metric::spending ? check_wefx(inst, state.alloc)
                                                         : check_weqx(inst, state.alloc);
        if (!fairness.passed())
            fail(Errc::invariant_violation,
                 std::string(metric == Metric::spending ? "WEFX" : "WEQX") +
                     " check failed on the final allocation");
        if (!is_equilibrium(state).ok)
            fail(Errc::invariant_violation, "final state is not an equilibrium");
    }
    return res;
}

} // namespace fairdiv

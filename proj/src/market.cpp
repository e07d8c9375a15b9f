#include "fairdiv/market.hpp"

#include "fairdiv/error.hpp"

#include <deque>

namespace fairdiv {

MbbStructure mbb_structure(const Instance& inst, const std::vector<Rational>& price) {
    if (inst.m == 0) fail(Errc::empty_market, "MBB ratios are undefined without goods");
    for (const auto& p : price)
        if (!p.positive()) fail(Errc::parse_error, "price " + p.str() + " is not positive");

    MbbStructure s;
    s.alpha.resize(inst.n);
    s.mask.assign(inst.n, std::vector<char>(inst.m, 0));
    for (int i = 0; i < inst.n; ++i) {
        Rational best = inst.values[i][0] / price[0];
        for (int e = 1; e < inst.m; ++e) {
            Rational r = inst.values[i][e] / price[e];
            if (r > best) best = r;
        }
        s.alpha[i] = best;
        for (int e = 0; e < inst.m; ++e)
            if (inst.values[i][e] / price[e] == best) s.mask[i][e] = 1;
    }
    return s;
}

MarketState MarketState::make(const Instance& inst, Allocation alloc, std::vector<Rational> price) {
    MarketState st;
    st.inst = &inst;
    st.alloc = std::move(alloc);
    st.price = std::move(price);
    st.refresh();
    return st;
}

void MarketState::refresh() {
    if (inst->m == 0) {
        mbb.alpha.assign(inst->n, Rational(0));
        mbb.mask.assign(inst->n, {});
        return;
    }
    mbb = mbb_structure(*inst, price);
}

void MarketState::raise_prices(const std::vector<int>& goods, const Rational& factor) {
    for (int e : goods) price[e] *= factor;
    refresh();
}

std::vector<int> MarketState::mbb_set(int agent) const {
    std::vector<int> out;
    for (int e = 0; e < inst->m; ++e)
        if (mbb.mask[agent][e]) out.push_back(e);
    return out;
}

Rational bang_per_buck(const Instance& inst, const std::vector<Rational>& price, int agent, int good) {
    return inst.values[agent][good] / price[good];
}

MbbGraph build_mbb_graph(const MarketState& state) {
    const int n = state.inst->n;
    MbbGraph g;
    g.n = n;
    g.edge.assign(n, std::vector<char>(n, 0));
    for (int e = 0; e < state.inst->m; ++e) {
        const int j = state.alloc.owner[e];
        for (int i = 0; i < n; ++i)
            if (state.mbb.mask[i][e]) g.edge[i][j] = 1;
    }
    return g;
}

std::vector<int> reachable_from(const MbbGraph& g, int start) {
    std::vector<char> seen(g.n, 0);
    std::deque<int> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
        const int i = queue.front();
        queue.pop_front();
        for (int j = 0; j < g.n; ++j)
            if (g.edge[i][j] && !seen[j]) {
                seen[j] = 1;
                queue.push_back(j);
            }
    }
    std::vector<int> out;
    for (int i = 0; i < g.n; ++i)
        if (seen[i]) out.push_back(i);
    return out;
}

ItemGroups classify_items(const Instance& inst) {
    ItemGroups groups;
    for (int e = 0; e < inst.m; ++e) {
        bool high = false;
        for (int i = 0; i < inst.n && !high; ++i)
            if (inst.values_high(i, e)) high = true;
        (high ? groups.high_somewhere : groups.consistently_small).push_back(e);
    }
    return groups;
}

EquilibriumVerdict is_equilibrium(const MarketState& state) {
    for (int e = 0; e < state.inst->m; ++e) {
        const int i = state.alloc.owner[e];
        if (!state.mbb.mask[i][e]) {
            EquilibriumWitness w;
            w.agent = i;
            w.good = e;
            w.alpha_agent = state.mbb.alpha[i];
            w.alpha_good = bang_per_buck(*state.inst, state.price, i, e);
            return {false, w};
        }
    }
    return {true, std::nullopt};
}

} // namespace fairdiv

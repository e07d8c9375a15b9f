#pragma once

#include "fairdiv/instance.hpp"
#include "fairdiv/rational.hpp"

#include <optional>
#include <vector>

namespace fairdiv {

/// Per-agent max bang-per-buck ratios and argmax sets.
struct MbbStructure {
    std::vector<Rational> alpha;         // size n
    std::vector<std::vector<char>> mask; // n x m, mask[i][e] == 1 iff e achieves alpha[i]
};

/// Exact maxima and argmax sets over positive prices. Throws EmptyMarket for
/// m == 0, where the max is undefined.
MbbStructure mbb_structure(const Instance& inst, const std::vector<Rational>& price);

/// Allocation plus prices plus cached MBB structure. Transfers keep the cache
/// valid (prices are untouched); price changes refresh it. The cache is
/// always equal to a full recomputation, which the tests assert.
struct MarketState {
    const Instance* inst = nullptr;
    Allocation alloc;
    std::vector<Rational> price;
    MbbStructure mbb;

    static MarketState make(const Instance& inst, Allocation alloc, std::vector<Rational> price);

    void refresh();
    void raise_prices(const std::vector<int>& goods, const Rational& factor);
    void transfer(int good, int to) { alloc.owner[good] = to; }

    std::vector<std::vector<int>> bundles() const { return fairdiv::bundles(inst->n, alloc); }
    std::vector<int> mbb_set(int agent) const;
    bool is_mbb(int agent, int good) const { return mbb.mask[agent][good] != 0; }

    Rational spending(int agent) const { return weighted_spending(*inst, agent, alloc, price); }
    Rational hat_spending(int agent) const { return fairdiv::hat_spending(*inst, agent, alloc, price); }
    Rational own_value(int agent) const { return weighted_value(*inst, agent, alloc); }
    Rational hat_value(int agent) const { return fairdiv::hat_value(*inst, agent, alloc); }
};

Rational bang_per_buck(const Instance& inst, const std::vector<Rational>& price, int agent, int good);

/// Agent digraph with an edge i -> j iff MBB_i intersects X_j.
struct MbbGraph {
    int n = 0;
    std::vector<std::vector<char>> edge; // n x n
};

MbbGraph build_mbb_graph(const MarketState& state);

/// Agents reachable from start (including start itself), by BFS that expands
/// neighbors in ascending index order. Returned ascending.
std::vector<int> reachable_from(const MbbGraph& g, int start);

/// M^- (every agent values the good 1) and M^+ (someone values it k).
struct ItemGroups {
    std::vector<int> consistently_small; // M^-
    std::vector<int> high_somewhere;     // M^+
};

ItemGroups classify_items(const Instance& inst);

struct EquilibriumWitness {
    int agent = -1;
    int good = -1;
    Rational alpha_agent;
    Rational alpha_good;
};

struct EquilibriumVerdict {
    bool ok = false;
    std::optional<EquilibriumWitness> witness;
};

/// True iff every allocated good is MBB for its owner.
EquilibriumVerdict is_equilibrium(const MarketState& state);

/// Ordered partition of agents grown from successive least-metric
/// representatives.
struct AgentGroups {
    std::vector<std::vector<int>> members; // ascending within each group
    std::vector<int> representative;
    std::vector<int> group_of; // size n, index into members

    int count() const { return static_cast<int>(members.size()); }
};

} // namespace fairdiv

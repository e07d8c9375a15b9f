#include "fairdiv/error.hpp"
#include "fairdiv/generate.hpp"
#include "fairdiv/gmref.hpp"
#include "fairdiv/market.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace fairdiv;

namespace {

MarketState table1_initial() {
    static const Instance inst = table1_instance();
    return MarketState::make(
        inst, Allocation({0, 0, 0, 1, 1}),
        {Rational(5), Rational(5), Rational(5), Rational(1), Rational(5)});
}

// Reachability by plain DFS over the definitional edge set, as a
// self-consistency oracle for the BFS path.
std::vector<int> dfs_reachable(const MarketState& state, int start) {
    const Instance& inst = *state.inst;
    std::vector<char> seen(inst.n, 0);
    std::vector<int> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        for (int j = 0; j < inst.n; ++j) {
            if (seen[j]) continue;
            bool edge = false;
            for (int e = 0; e < inst.m && !edge; ++e)
                if (state.alloc.owner[e] == j &&
                    bang_per_buck(inst, state.price, i, e) == state.mbb.alpha[i])
                    edge = true;
            if (edge) {
                seen[j] = 1;
                stack.push_back(j);
            }
        }
    }
    std::vector<int> out;
    for (int i = 0; i < inst.n; ++i)
        if (seen[i]) out.push_back(i);
    return out;
}

} // namespace

TEST_CASE("bang per buck") {
    const MarketState st = table1_initial();
    CHECK(bang_per_buck(*st.inst, st.price, 1, 0) == Rational(1, 5)); // v=1, p=5
    CHECK(bang_per_buck(*st.inst, st.price, 0, 0) == Rational(1));    // p equals own value
    const std::vector<Rational> raised{Rational(5), Rational(5), Rational(5), Rational(1),
                                       Rational(25)};
    CHECK(bang_per_buck(*st.inst, raised, 0, 4) == Rational(1, 25));
}

TEST_CASE("mbb structure on the counterexample start") {
    const MarketState st = table1_initial();
    CHECK(st.mbb.alpha == std::vector<Rational>{Rational(1), Rational(1)});
    // e4 is priced 1 and valued 1 by both, so it achieves both maxima
    CHECK(st.mbb_set(0) == std::vector<int>{0, 1, 2, 3});
    CHECK(st.mbb_set(1) == std::vector<int>{3, 4});
}

TEST_CASE("mbb structure with uniform prices") {
    RawInstance raw;
    raw.values = {{Rational(1), Rational(1), Rational(1)}, {Rational(2), Rational(2), Rational(1)}};
    raw.weights = {Rational(1), Rational(1)};
    const Instance inst = validate_instance(raw);
    const auto s = mbb_structure(inst, {Rational(1), Rational(1), Rational(1)});
    CHECK(s.alpha[0] == Rational(1));
    CHECK(std::count(s.mask[0].begin(), s.mask[0].end(), 1) == 3); // everything is MBB
}

TEST_CASE("mbb structure after the first reference raise") {
    const Instance inst = table1_instance();
    const auto s = mbb_structure(
        inst, {Rational(5), Rational(5), Rational(5), Rational(5), Rational(25)});
    CHECK(s.alpha[0] == Rational(1));
    CHECK(!s.mask[0][3]); // e4, e5 are not MBB for agent 1
    CHECK(!s.mask[0][4]);
}

TEST_CASE("mbb structure rejects an empty market") {
    RawInstance raw;
    raw.values = {std::vector<Rational>{}};
    raw.weights = {Rational(1)};
    const Instance inst = validate_instance(raw);
    CHECK_THROWS_WITH_AS(mbb_structure(inst, {}), doctest::Contains("EmptyMarket"), Error);
    // the composite state handles m == 0 itself
    const MarketState st = MarketState::make(inst, Allocation(std::vector<int>{}), {});
    CHECK(is_equilibrium(st).ok);
}

TEST_CASE("mbb graph on the counterexample start") {
    const MarketState st = table1_initial();
    const MbbGraph g = build_mbb_graph(st);
    CHECK(g.edge[0][0]);
    CHECK(g.edge[1][1]);
    CHECK(g.edge[0][1]); // via the universally low-valued good e4
    CHECK(!g.edge[1][0]); // nothing of agent 1's is MBB for agent 2
    CHECK(reachable_from(g, 1) == std::vector<int>{1});
    CHECK(reachable_from(g, 0) == std::vector<int>{0, 1});
}

TEST_CASE("mbb graph is complete when all values are k") {
    RawInstance raw;
    raw.values = {{Rational(2), Rational(2)}, {Rational(2), Rational(2)}};
    raw.weights = {Rational(1), Rational(1)};
    raw.k_hint = Rational(2);
    const Instance inst = validate_instance(raw);
    const MarketState st =
        MarketState::make(inst, Allocation({0, 1}), {Rational(2), Rational(2)});
    const MbbGraph g = build_mbb_graph(st);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(g.edge[i][j]);
}

TEST_CASE("reachability follows a three-agent chain") {
    // agent 1 MBB-points into agent 2's bundle, agent 2 into agent 3's
    RawInstance raw;
    raw.values = {
        {Rational(2), Rational(2), Rational(1)},
        {Rational(1), Rational(2), Rational(2)},
        {Rational(1), Rational(1), Rational(2)},
    };
    raw.weights = {Rational(1), Rational(1), Rational(1)};
    const Instance inst = validate_instance(raw);
    const MarketState st = MarketState::make(
        inst, Allocation({0, 1, 2}), {Rational(2), Rational(2), Rational(2)});
    const MbbGraph g = build_mbb_graph(st);
    CHECK(reachable_from(g, 0) == std::vector<int>{0, 1, 2});
    CHECK(reachable_from(g, 2) == std::vector<int>{2});
}

TEST_CASE("reachability agrees with the DFS oracle on random states") {
    std::mt19937_64 rng(20240818);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 5);
        const int m = 1 + static_cast<int>(rng() % 8);
        const Instance inst = random_instance(rng(), n, m, Rational(2), WeightMode::equal);
        std::vector<int> owner(m);
        std::vector<Rational> price(m);
        for (int e = 0; e < m; ++e) {
            owner[e] = static_cast<int>(rng() % n);
            price[e] = Rational(1 + static_cast<long>(rng() % 6));
        }
        const MarketState st = MarketState::make(inst, Allocation(owner), price);
        const MbbGraph g = build_mbb_graph(st);
        for (int i = 0; i < n; ++i) CHECK(reachable_from(g, i) == dfs_reachable(st, i));
    }
}

TEST_CASE("classify_items") {
    const Instance inst = table1_instance();
    const ItemGroups items = classify_items(inst);
    CHECK(items.consistently_small == std::vector<int>{3});
    CHECK(items.high_somewhere == std::vector<int>{0, 1, 2, 4});

    RawInstance raw;
    raw.values = {{Rational(2), Rational(2)}};
    raw.weights = {Rational(1)};
    raw.k_hint = Rational(2);
    CHECK(classify_items(validate_instance(raw)).consistently_small.empty());

    raw.values = {{Rational(1), Rational(2)}};
    raw.k_hint.reset();
    const ItemGroups single = classify_items(validate_instance(raw));
    CHECK(single.consistently_small == std::vector<int>{0});
}

TEST_CASE("is_equilibrium and its witness") {
    const MarketState good = table1_initial();
    CHECK(is_equilibrium(good).ok);

    const Instance& inst = *good.inst;
    const MarketState bad = MarketState::make(
        inst, Allocation({1, 0, 0, 1, 1}), good.price); // e1 handed to agent 2
    const auto verdict = is_equilibrium(bad);
    REQUIRE(!verdict.ok);
    CHECK(verdict.witness->agent == 1);
    CHECK(verdict.witness->good == 0);
    CHECK(verdict.witness->alpha_agent == Rational(1));
    CHECK(verdict.witness->alpha_good == Rational(1, 5));
}

TEST_CASE("cached mbb structure equals recomputation under mutation") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        const int m = 1 + static_cast<int>(rng() % 7);
        const Instance inst = random_instance(rng(), n, m, Rational(3), WeightMode::random_ints);
        std::vector<int> owner(m);
        std::vector<Rational> price(m);
        for (int e = 0; e < m; ++e) {
            owner[e] = static_cast<int>(rng() % n);
            price[e] = Rational(1 + static_cast<long>(rng() % 5));
        }
        MarketState st = MarketState::make(inst, Allocation(owner), price);
        for (int mutation = 0; mutation < 10; ++mutation) {
            if (rng() & 1) {
                std::vector<int> goods;
                for (int e = 0; e < m; ++e)
                    if (rng() & 1) goods.push_back(e);
                st.raise_prices(goods, inst.k);
            } else {
                st.transfer(static_cast<int>(rng() % m), static_cast<int>(rng() % n));
            }
            const MbbStructure fresh = mbb_structure(inst, st.price);
            CHECK(st.mbb.alpha == fresh.alpha);
            CHECK(st.mbb.mask == fresh.mask);
        }
    }
}

#include "fairdiv/generate.hpp"
#include "fairdiv/gmref.hpp"
#include "fairdiv/init.hpp"
#include "fairdiv/realloc.hpp"
#include "fairdiv/verify.hpp"

#include <doctest.h>

#include <random>

using namespace fairdiv;

namespace {

Instance two_agents(std::vector<std::vector<Rational>> values, std::vector<Rational> weights,
                    std::optional<Rational> k = std::nullopt) {
    RawInstance raw;
    raw.values = std::move(values);
    raw.weights = std::move(weights);
    raw.k_hint = k;
    return validate_instance(raw);
}

// Literal quantifier evaluation, independent of the min-good shortcut the
// checkers use.
bool wefx_literal(const Instance& inst, const Allocation& alloc) {
    const auto by = bundles(inst.n, alloc);
    for (int i = 0; i < inst.n; ++i)
        for (int j = 0; j < inst.n; ++j)
            for (int e : by[j]) {
                Rational rhs(0);
                for (int e2 : by[j])
                    if (e2 != e) rhs += inst.values[i][e2];
                if (utility(inst, i, by[i]) / inst.weights[i] < rhs / inst.weights[j])
                    return false;
            }
    return true;
}

bool weqx_literal(const Instance& inst, const Allocation& alloc) {
    const auto by = bundles(inst.n, alloc);
    for (int i = 0; i < inst.n; ++i)
        for (int j = 0; j < inst.n; ++j)
            for (int e : by[j]) {
                Rational rhs(0);
                for (int e2 : by[j])
                    if (e2 != e) rhs += inst.values[j][e2];
                if (utility(inst, i, by[i]) / inst.weights[i] < rhs / inst.weights[j])
                    return false;
            }
    return true;
}

} // namespace

TEST_CASE("wefx trivial and violating cases") {
    // one good both agents value k, held by agent 1: removing it empties the bundle
    const Instance single =
        two_agents({{Rational(2)}, {Rational(2)}}, {Rational(1), Rational(1)}, Rational(2));
    CHECK(check_wefx(single, Allocation({0})).verdict == Verdict::pass);

    // agent 1 empty while agent 2 holds two goods agent 1 values k
    const Instance envy = two_agents({{Rational(2), Rational(2)}, {Rational(2), Rational(2)}},
                                     {Rational(1), Rational(1)}, Rational(2));
    const auto res = check_wefx(envy, Allocation({1, 1}));
    REQUIRE(res.verdict == Verdict::fail);
    CHECK(res.witness->i == 0);
    CHECK(res.witness->j == 1);
    // the witness restates the violated inequality
    CHECK(res.witness->lhs == Rational(0));
    CHECK(res.witness->rhs == Rational(4)); // v_1(X_2 - e)/w_2 = 2/(1/2)
}

TEST_CASE("weqx cases") {
    // identical agents, equal split of identical goods
    const Instance sym = two_agents({{Rational(2), Rational(2)}, {Rational(2), Rational(2)}},
                                    {Rational(1), Rational(1)}, Rational(2));
    CHECK(check_weqx(sym, Allocation({0, 1})).verdict == Verdict::pass);

    // value-1 singleton against three k goods: 2 < 4k fails
    const Instance lop = two_agents(
        {{Rational(1), Rational(2), Rational(2), Rational(2)},
         {Rational(1), Rational(2), Rational(2), Rational(2)}},
        {Rational(1), Rational(1)});
    const auto res = check_weqx(lop, Allocation({0, 1, 1, 1}));
    REQUIRE(res.verdict == Verdict::fail);
    CHECK(res.witness->lhs == Rational(2));
    CHECK(res.witness->rhs == Rational(8)); // (2k)/w after dropping one k good
}

TEST_CASE("pwefx within and across groups on the counterexample start") {
    const Instance inst = table1_instance();
    const Allocation alloc({0, 0, 0, 1, 1});
    const std::vector<Rational> price{Rational(5), Rational(5), Rational(5), Rational(1),
                                      Rational(5)};
    // across all agents it fails: agent 2 spends 12 < 20 = hat of agent 1
    const auto all = check_pwefx(inst, alloc, price);
    REQUIRE(all.verdict == Verdict::fail);
    CHECK(all.witness->i == 1);
    CHECK(all.witness->j == 0);
    CHECK(all.witness->lhs == Rational(12));
    CHECK(all.witness->rhs == Rational(20));

    // within each single-agent group it passes
    const std::vector<int> g1{1}, g2{0};
    CHECK(check_pwefx(inst, alloc, price, &g1).verdict == Verdict::pass);
    CHECK(check_pwefx(inst, alloc, price, &g2).verdict == Verdict::pass);
}

TEST_CASE("pwefx single agent") {
    RawInstance raw;
    raw.values = {{Rational(2), Rational(1)}};
    raw.weights = {Rational(1)};
    const Instance inst = validate_instance(raw);
    CHECK(check_pwefx(inst, Allocation({0, 0}), {Rational(2), Rational(1)}).verdict ==
          Verdict::pass);
}

TEST_CASE("unweighted reductions") {
    const Instance inst = two_agents({{Rational(1), Rational(1)}, {Rational(2), Rational(2)}},
                                     {Rational(1), Rational(1)});
    // bundle sizes (0, 2) of unit-valued goods: EF1 and EFX both fail
    const Allocation skew({1, 1});
    CHECK(check_efx(inst, skew).verdict == Verdict::fail);
    CHECK(check_ef1(inst, skew).verdict == Verdict::fail);
    // one good each is fine
    CHECK(check_efx(inst, Allocation({0, 1})).verdict == Verdict::pass);

    const Instance unequal = two_agents({{Rational(1), Rational(1)}, {Rational(2), Rational(2)}},
                                        {Rational(1), Rational(3)});
    const auto report = check_ef_reductions(unequal, skew);
    for (const auto& r : report.results) CHECK(r.verdict == Verdict::not_applicable);
}

TEST_CASE("efx implies ef1 on random allocations") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        const int m = static_cast<int>(rng() % 8);
        const Instance inst = random_instance(rng(), n, m, Rational(3), WeightMode::equal);
        std::vector<int> owner(m);
        for (auto& o : owner) o = static_cast<int>(rng() % n);
        const Allocation alloc(owner);
        if (check_efx(inst, alloc).verdict == Verdict::pass)
            CHECK(check_ef1(inst, alloc).verdict == Verdict::pass);
    }
}

TEST_CASE("checkers agree with literal quantifier evaluation") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 400; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        const int m = static_cast<int>(rng() % 7);
        const WeightMode wm = (rng() & 1) ? WeightMode::random_ints : WeightMode::equal;
        const Instance inst = random_instance(rng(), n, m, Rational(2), wm);
        std::vector<int> owner(m);
        for (auto& o : owner) o = static_cast<int>(rng() % n);
        const Allocation alloc(owner);
        CHECK(check_wefx(inst, alloc).passed() == wefx_literal(inst, alloc));
        CHECK(check_weqx(inst, alloc).passed() == weqx_literal(inst, alloc));
    }
}

TEST_CASE("verdicts are invariant under good relabeling") {
    std::mt19937_64 rng(321);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 3);
        const int m = 1 + static_cast<int>(rng() % 6);
        const Instance inst = random_instance(rng(), n, m, Rational(3), WeightMode::random_ints);
        std::vector<int> owner(m);
        for (auto& o : owner) o = static_cast<int>(rng() % n);

        std::vector<int> perm(m);
        for (int e = 0; e < m; ++e) perm[e] = e;
        std::shuffle(perm.begin(), perm.end(), rng);

        RawInstance relabeled;
        relabeled.k_hint = inst.k;
        relabeled.weights = inst.weights;
        relabeled.values.assign(n, std::vector<Rational>(m, Rational(0)));
        std::vector<int> powner(m);
        for (int e = 0; e < m; ++e) {
            for (int i = 0; i < n; ++i) relabeled.values[i][perm[e]] = inst.values[i][e];
            powner[perm[e]] = owner[e];
        }
        const Instance pinst = validate_instance(relabeled);
        CHECK(check_wefx(inst, Allocation(owner)).passed() ==
              check_wefx(pinst, Allocation(powner)).passed());
        CHECK(check_weqx(inst, Allocation(owner)).passed() ==
              check_weqx(pinst, Allocation(powner)).passed());
    }
}

TEST_CASE("pwefx implies wefx per agent on equilibrium states") {
    std::mt19937_64 rng(777);
    int evaluated = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 5);
        const int m = 1 + static_cast<int>(rng() % 9);
        const WeightMode wm = (rng() & 1) ? WeightMode::random_ints : WeightMode::equal;
        const Instance inst = random_instance(rng(), n, m, Rational(5, 2), wm);
        SolveOptions opts;
        opts.check_invariants = true;
        const InitResult res = initial_equilibrium(inst, opts);
        REQUIRE(is_equilibrium(res.state).ok);
        // per-agent: pWEFX toward everyone -> WEFX toward everyone
        for (int i = 0; i < inst.n; ++i) {
            bool p_ok = true, v_ok = true;
            for (int j = 0; j < inst.n; ++j) {
                if (res.state.spending(i) < res.state.hat_spending(j)) p_ok = false;
                Rational worst(0);
                for (int e = 0; e < inst.m; ++e)
                    if (res.state.alloc.owner[e] == j) worst += inst.values[i][e];
                Rational min_v;
                bool any = false;
                for (int e = 0; e < inst.m; ++e)
                    if (res.state.alloc.owner[e] == j &&
                        (!any || inst.values[i][e] < min_v)) {
                        min_v = inst.values[i][e];
                        any = true;
                    }
                if (any && res.state.own_value(i) < (worst - min_v) / inst.weights[j])
                    v_ok = false;
            }
            if (p_ok) {
                CHECK(v_ok);
                ++evaluated;
            }
        }
    }
    CHECK(evaluated > 0);
}

TEST_CASE("path-reachable pairs are pairwise fair after initialization") {
    std::mt19937_64 rng(31415);
    for (int trial = 0; trial < 150; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 5);
        const int m = 1 + static_cast<int>(rng() % 8);
        const WeightMode wm = (rng() & 1) ? WeightMode::random_ints : WeightMode::equal;
        const Instance inst = random_instance(rng(), n, m, Rational(2), wm);
        for (const Metric metric : {Metric::spending, Metric::value}) {
            SolveOptions opts;
            opts.metric = metric;
            opts.check_invariants = true;
            const InitResult res = initial_equilibrium(inst, opts);
            const MbbGraph g = build_mbb_graph(res.state);
            for (int i = 0; i < inst.n; ++i)
                for (int j : reachable_from(g, i))
                    CHECK(metric_of(res.state, i, metric) >= hat_of(res.state, j, metric));
        }
    }
}

TEST_CASE("fpo certificate") {
    const Instance inst = table1_instance();
    const MarketState eq = welfare_max_init(inst);
    CHECK(certify_fpo(eq).verdict == Verdict::pass);

    // fault injection: hand a non-MBB good over
    MarketState broken = eq;
    broken.transfer(0, 1);
    const auto res = certify_fpo(broken);
    CHECK(res.verdict == Verdict::fail);
    CHECK(res.note.find("undetermined") != std::string::npos);

    RawInstance raw;
    raw.values = {std::vector<Rational>{}};
    raw.weights = {Rational(1)};
    const Instance empty = validate_instance(raw);
    CHECK(certify_fpo(MarketState::make(empty, Allocation(std::vector<int>{}), {})).verdict ==
          Verdict::pass);
}

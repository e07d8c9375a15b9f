#pragma once

#include "fairdiv/instance.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace fairdiv {

struct OracleBudget {
    long long max_allocations = 10'000'000;
};

/// n^m clamped to avoid overflow; the clamp is far above any usable budget.
long long allocation_count(int n, int m);

/// All allocations satisfying the predicate, in lexicographic owner-vector
/// order. Throws BudgetExceeded when n^m exceeds the budget.
std::vector<Allocation>
enumerate_allocations(const Instance& inst, const std::function<bool(const Allocation&)>& pred,
                      const OracleBudget& budget = {});

struct PoVerdict {
    bool pass = false;
    std::optional<Allocation> dominating; // first dominating allocation when failing
};

/// Pareto optimality by full enumeration of integral allocations.
PoVerdict is_po_bruteforce(const Instance& inst, const Allocation& alloc,
                           const OracleBudget& budget = {});

struct FpoVerdict {
    bool pass = false;
    Rational optimum; // max total utility among fractional dominators-or-equal
    Rational current; // total utility of the tested allocation
};

/// Fractional Pareto optimality via an exact-rational LP: maximize total
/// utility subject to every agent keeping at least its current utility.
/// The allocation is fPO iff the optimum equals the current total.
FpoVerdict is_fpo_lp(const Instance& inst, const Allocation& alloc);

std::vector<Allocation> wefx_set(const Instance& inst, const OracleBudget& budget = {});
std::vector<Allocation> weqx_set(const Instance& inst, const OracleBudget& budget = {});

} // namespace fairdiv

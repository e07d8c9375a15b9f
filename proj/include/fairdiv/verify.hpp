#pragma once

#include "fairdiv/market.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fairdiv {

enum class Verdict { pass, fail, not_applicable };

const char* verdict_name(Verdict v);

/// For pairwise criteria: agent i's guarantee toward j fails once good is
/// removed; lhs < rhs restates the violated inequality.
struct FairnessWitness {
    int i = -1;
    int j = -1;
    int good = -1;
    Rational lhs;
    Rational rhs;
};

struct CriterionResult {
    std::string criterion;
    Verdict verdict = Verdict::pass;
    std::optional<FairnessWitness> witness;
    std::string note;

    bool passed() const { return verdict != Verdict::fail; }
};

struct VerifyReport {
    std::vector<CriterionResult> results;

    void add(CriterionResult r) { results.push_back(std::move(r)); }
    bool all_pass() const;
    const CriterionResult* find(const std::string& criterion) const;
};

/// v_i(X_i)/w_i >= v_i(X_j \ {e})/w_j for all i, j and e in X_j.
CriterionResult check_wefx(const Instance& inst, const Allocation& alloc);

/// v_i(X_i)/w_i >= v_j(X_j \ {e})/w_j for all i, j and e in X_j.
CriterionResult check_weqx(const Instance& inst, const Allocation& alloc);

/// Price-space analogue of WEFX; `within` restricts the pairs to one agent
/// group when given.
CriterionResult check_pwefx(const Instance& inst, const Allocation& alloc,
                            const std::vector<Rational>& price,
                            const std::vector<int>* within = nullptr);

/// Unweighted reductions; not_applicable unless all weights are equal.
CriterionResult check_efx(const Instance& inst, const Allocation& alloc);
CriterionResult check_ef1(const Instance& inst, const Allocation& alloc);
CriterionResult check_eqx(const Instance& inst, const Allocation& alloc);
VerifyReport check_ef_reductions(const Instance& inst, const Allocation& alloc);

/// Equilibrium test as a one-sided fPO certificate (First Welfare Theorem).
/// A fail means the certificate does not apply, not that fPO fails.
CriterionResult certify_fpo(const MarketState& state);

/// is_equilibrium wrapped as a report entry.
CriterionResult criterion_equilibrium(const MarketState& state);

} // namespace fairdiv

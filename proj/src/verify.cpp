#include "fairdiv/verify.hpp"

#include <algorithm>

namespace fairdiv {

const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::not_applicable: return "not-applicable";
    }
    return "?";
}

bool VerifyReport::all_pass() const {
    return std::all_of(results.begin(), results.end(),
                       [](const CriterionResult& r) { return r.passed(); });
}

const CriterionResult* VerifyReport::find(const std::string& criterion) const {
    for (const auto& r : results)
        if (r.criterion == criterion) return &r;
    return nullptr;
}

namespace {

enum class Removal { viewer_value, owner_value, price };

// Pairwise "up to any good" check. The binding removal is the good that
// minimizes the removal key (viewer's value, owner's value, or price), so
// only that good needs testing; the witness still names it explicitly.
CriterionResult pairwise_up_to_any(const std::string& name, const Instance& inst,
                                   const Allocation& alloc, const std::vector<Rational>* price,
                                   Removal removal, bool weighted,
                                   const std::vector<int>* within) {
    std::vector<int> agents;
    if (within) agents = *within;
    else
        for (int i = 0; i < inst.n; ++i) agents.push_back(i);

    const auto by = bundles(inst.n, alloc);
    CriterionResult res{name, Verdict::pass, std::nullopt, {}};

    for (int i : agents) {
        Rational own(0);
        for (int e : by[i]) own += removal == Removal::price ? (*price)[e] : inst.values[i][e];
        const Rational lhs = weighted ? own / inst.weights[i] : own;

        for (int j : agents) {
            if (j == i || by[j].empty()) continue;
            Rational total(0);
            int drop = -1;
            Rational drop_key;
            for (int e : by[j]) {
                const Rational& contrib = removal == Removal::price ? (*price)[e]
                                          : removal == Removal::owner_value ? inst.values[j][e]
                                                                            : inst.values[i][e];
                total += contrib;
                const Rational& key = removal == Removal::viewer_value ? inst.values[i][e]
                                      : removal == Removal::owner_value ? inst.values[j][e]
                                                                        : (*price)[e];
                if (drop < 0 || key < drop_key) {
                    drop = e;
                    drop_key = key;
                }
            }
            const Rational& dropped = removal == Removal::price ? (*price)[drop]
                                      : removal == Removal::owner_value ? inst.values[j][drop]
                                                                        : inst.values[i][drop];
            const Rational rhs = weighted ? (total - dropped) / inst.weights[j] : total - dropped;
            if (lhs < rhs) {
                res.verdict = Verdict::fail;
                res.witness = FairnessWitness{i, j, drop, lhs, rhs};
                return res;
            }
        }
    }
    return res;
}

bool equal_weights(const Instance& inst) {
    for (int i = 1; i < inst.n; ++i)
        if (inst.weights[i] != inst.weights[0]) return false;
    return true;
}

CriterionResult not_applicable(const std::string& name) {
    return {name, Verdict::not_applicable, std::nullopt, "requires equal weights"};
}

} // namespace

CriterionResult check_wefx(const Instance& inst, const Allocation& alloc) {
    return pairwise_up_to_any("wefx", inst, alloc, nullptr, Removal::viewer_value, true, nullptr);
}

CriterionResult check_weqx(const Instance& inst, const Allocation& alloc) {
    return pairwise_up_to_any("weqx", inst, alloc, nullptr, Removal::owner_value, true, nullptr);
}

CriterionResult check_pwefx(const Instance& inst, const Allocation& alloc,
                            const std::vector<Rational>& price, const std::vector<int>* within) {
    return pairwise_up_to_any("pwefx", inst, alloc, &price, Removal::price, true, within);
}

CriterionResult check_efx(const Instance& inst, const Allocation& alloc) {
    if (!equal_weights(inst)) return not_applicable("efx");
    return pairwise_up_to_any("efx", inst, alloc, nullptr, Removal::viewer_value, false, nullptr);
}

CriterionResult check_eqx(const Instance& inst, const Allocation& alloc) {
    if (!equal_weights(inst)) return not_applicable("eqx");
    return pairwise_up_to_any("eqx", inst, alloc, nullptr, Removal::owner_value, false, nullptr);
}

CriterionResult check_ef1(const Instance& inst, const Allocation& alloc) {
    if (!equal_weights(inst)) return not_applicable("ef1");
    const auto by = bundles(inst.n, alloc);
    CriterionResult res{"ef1", Verdict::pass, std::nullopt, {}};
    for (int i = 0; i < inst.n; ++i) {
        const Rational own = utility(inst, i, by[i]);
        for (int j = 0; j < inst.n; ++j) {
            if (j == i || by[j].empty()) continue;
            // one good may be removed, so drop the one i values most
            Rational total(0), best(0);
            int best_good = by[j].front();
            for (int e : by[j]) {
                total += inst.values[i][e];
                if (inst.values[i][e] > best) {
                    best = inst.values[i][e];
                    best_good = e;
                }
            }
            if (own < total - best) {
                res.verdict = Verdict::fail;
                res.witness = FairnessWitness{i, j, best_good, own, total - best};
                return res;
            }
        }
    }
    return res;
}

VerifyReport check_ef_reductions(const Instance& inst, const Allocation& alloc) {
    VerifyReport report;
    report.add(check_efx(inst, alloc));
    report.add(check_ef1(inst, alloc));
    report.add(check_eqx(inst, alloc));
    return report;
}

CriterionResult certify_fpo(const MarketState& state) {
    CriterionResult res{"fpo-cert", Verdict::pass, std::nullopt,
                        "certificate: equilibrium implies fPO"};
    const auto eq = is_equilibrium(state);
    if (!eq.ok) {
        res.verdict = Verdict::fail;
        res.note = "state is not an equilibrium; fPO status undetermined by this certificate";
        res.witness = FairnessWitness{eq.witness->agent, eq.witness->agent, eq.witness->good,
                                      eq.witness->alpha_good, eq.witness->alpha_agent};
    }
    return res;
}

CriterionResult criterion_equilibrium(const MarketState& state) {
    CriterionResult res{"equilibrium", Verdict::pass, std::nullopt, {}};
    const auto eq = is_equilibrium(state);
    if (!eq.ok) {
        res.verdict = Verdict::fail;
        res.witness = FairnessWitness{eq.witness->agent, eq.witness->agent, eq.witness->good,
                                      eq.witness->alpha_good, eq.witness->alpha_agent};
    }
    return res;
}

} // namespace fairdiv

#include "fairdiv/oracle.hpp"

#include "fairdiv/error.hpp"
#include "fairdiv/verify.hpp"

#include <string>

namespace fairdiv {

long long allocation_count(int n, int m) {
    long long count = 1;
    for (int e = 0; e < m; ++e) {
        if (count > (1LL << 62) / n) return 1LL << 62;
        count *= n;
    }
    return count;
}

std::vector<Allocation>
enumerate_allocations(const Instance& inst, const std::function<bool(const Allocation&)>& pred,
                      const OracleBudget& budget) {
    if (allocation_count(inst.n, inst.m) > budget.max_allocations)
        fail(Errc::budget_exceeded, "n^m exceeds the enumeration budget of " +
                                        std::to_string(budget.max_allocations) + " allocations");
    std::vector<Allocation> out;
    Allocation alloc(std::vector<int>(inst.m, 0));
    while (true) {
        if (pred(alloc)) out.push_back(alloc);
        int pos = inst.m - 1;
        while (pos >= 0 && alloc.owner[pos] == inst.n - 1) alloc.owner[pos--] = 0;
        if (pos < 0) break;
        ++alloc.owner[pos];
    }
    return out;
}

PoVerdict is_po_bruteforce(const Instance& inst, const Allocation& alloc,
                           const OracleBudget& budget) {
    std::vector<Rational> current(inst.n, Rational(0));
    for (int e = 0; e < inst.m; ++e) current[alloc.owner[e]] += inst.values[alloc.owner[e]][e];

    auto dominates = [&](const Allocation& other) {
        std::vector<Rational> u(inst.n, Rational(0));
        for (int e = 0; e < inst.m; ++e) u[other.owner[e]] += inst.values[other.owner[e]][e];
        bool strict = false;
        for (int i = 0; i < inst.n; ++i) {
            if (u[i] < current[i]) return false;
            if (u[i] > current[i]) strict = true;
        }
        return strict;
    };

    // enumerate lazily so the first dominating witness stops the scan
    if (allocation_count(inst.n, inst.m) > budget.max_allocations)
        fail(Errc::budget_exceeded, "n^m exceeds the enumeration budget");
    Allocation other(std::vector<int>(inst.m, 0));
    while (true) {
        if (dominates(other)) return {false, other};
        int pos = inst.m - 1;
        while (pos >= 0 && other.owner[pos] == inst.n - 1) other.owner[pos--] = 0;
        if (pos < 0) break;
        ++other.owner[pos];
    }
    return {true, std::nullopt};
}

namespace {

// Primal simplex on a dense exact-rational tableau with Bland's rule.
// Constraints arrive as equalities with a known feasible basis, so there is
// no phase 1.
class ExactSimplex {
public:
    ExactSimplex(std::vector<std::vector<Rational>> rows, std::vector<Rational> rhs,
                 std::vector<Rational> objective, std::vector<int> basis)
        : rows_(std::move(rows)), rhs_(std::move(rhs)), basis_(std::move(basis)) {
        const size_t cols = objective.size();
        obj_.assign(cols, Rational(0));
        for (size_t c = 0; c < cols; ++c) obj_[c] = -objective[c];
        obj_rhs_ = Rational(0);
        for (size_t r = 0; r < rows_.size(); ++r) pivot(r, basis_[r]);
    }

    Rational maximize() {
        long guard = 0;
        while (true) {
            if (++guard > 200000)
                fail(Errc::invariant_violation, "simplex exceeded its iteration guard");
            int entering = -1;
            for (size_t c = 0; c < obj_.size(); ++c)
                if (obj_[c].sign() < 0) { // reduced cost favors entering (Bland: lowest index)
                    entering = static_cast<int>(c);
                    break;
                }
            if (entering < 0) return obj_rhs_;

            int leave_row = -1;
            Rational best_ratio;
            for (size_t r = 0; r < rows_.size(); ++r) {
                if (rows_[r][entering].sign() <= 0) continue;
                const Rational ratio = rhs_[r] / rows_[r][entering];
                if (leave_row < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[r] < basis_[leave_row])) {
                    leave_row = static_cast<int>(r);
                    best_ratio = ratio;
                }
            }
            if (leave_row < 0)
                fail(Errc::invariant_violation, "unbounded LP in the fPO test");
            pivot(leave_row, entering);
        }
    }

private:
    void pivot(size_t row, int col) {
        const Rational inv = Rational(1) / rows_[row][col];
        for (auto& x : rows_[row]) x *= inv;
        rhs_[row] *= inv;
        for (size_t r = 0; r < rows_.size(); ++r) {
            if (r == row || rows_[r][col].is_zero()) continue;
            const Rational f = rows_[r][col];
            for (size_t c = 0; c < rows_[r].size(); ++c) rows_[r][c] -= f * rows_[row][c];
            rhs_[r] -= f * rhs_[row];
        }
        if (!obj_[col].is_zero()) {
            const Rational f = obj_[col];
            for (size_t c = 0; c < obj_.size(); ++c) obj_[c] -= f * rows_[row][c];
            obj_rhs_ -= f * rhs_[row];
        }
        basis_[row] = col;
    }

    std::vector<std::vector<Rational>> rows_;
    std::vector<Rational> rhs_;
    std::vector<Rational> obj_;
    Rational obj_rhs_;
    std::vector<int> basis_;
};

} // namespace

FpoVerdict is_fpo_lp(const Instance& inst, const Allocation& alloc) {
    const int n = inst.n, m = inst.m;
    if (static_cast<long>(n) * m > 400)
        fail(Errc::lp_size_exceeded, "fPO LP limited to n*m <= 400 variables");

    Rational current(0);
    std::vector<Rational> agent_utility(n, Rational(0));
    for (int e = 0; e < m; ++e) {
        agent_utility[alloc.owner[e]] += inst.values[alloc.owner[e]][e];
        current += inst.values[alloc.owner[e]][e];
    }
    if (m == 0 || n == 1) return {true, current, current};

    // Variables: x[i*m+e] fractional shares, then n surplus variables s_i.
    // Rows: one per good (sum_i x_ie = 1), one per agent
    // (sum_e v_ie x_ie - s_i = v_i(X_i)).
    const int cols = n * m + n;
    std::vector<std::vector<Rational>> rows(m + n, std::vector<Rational>(cols, Rational(0)));
    std::vector<Rational> rhs(m + n);
    std::vector<Rational> objective(cols, Rational(0));
    for (int i = 0; i < n; ++i)
        for (int e = 0; e < m; ++e) {
            rows[e][i * m + e] = Rational(1);
            rows[m + i][i * m + e] = inst.values[i][e];
            objective[i * m + e] = inst.values[i][e];
        }
    for (int e = 0; e < m; ++e) rhs[e] = Rational(1);
    for (int i = 0; i < n; ++i) {
        rows[m + i][n * m + i] = Rational(-1);
        rhs[m + i] = agent_utility[i];
    }

    // The tested allocation itself is a basic feasible point: owner shares
    // plus zero surplus.
    std::vector<int> basis(m + n);
    for (int e = 0; e < m; ++e) basis[e] = alloc.owner[e] * m + e;
    for (int i = 0; i < n; ++i) basis[m + i] = n * m + i;

    ExactSimplex lp(std::move(rows), std::move(rhs), std::move(objective), std::move(basis));
    const Rational optimum = lp.maximize();
    return {optimum == current, optimum, current};
}

std::vector<Allocation> wefx_set(const Instance& inst, const OracleBudget& budget) {
    return enumerate_allocations(
        inst, [&](const Allocation& a) { return check_wefx(inst, a).passed(); }, budget);
}

std::vector<Allocation> weqx_set(const Instance& inst, const OracleBudget& budget) {
    return enumerate_allocations(
        inst, [&](const Allocation& a) { return check_weqx(inst, a).passed(); }, budget);
}

} // namespace fairdiv

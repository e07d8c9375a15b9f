#include "fairdiv/instance.hpp"

#include "fairdiv/error.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace fairdiv {

namespace {

std::vector<std::string> default_ids(const char* prefix, int count) {
    std::vector<std::string> ids;
    ids.reserve(count);
    for (int i = 1; i <= count; ++i) ids.push_back(prefix + std::to_string(i));
    return ids;
}

void require_unique(const std::vector<std::string>& ids, const char* what) {
    std::unordered_set<std::string> seen;
    for (const auto& id : ids)
        if (!seen.insert(id).second) fail(Errc::parse_error, std::string("duplicate ") + what + " id '" + id + "'");
}

} // namespace

Instance validate_instance(const RawInstance& raw) {
    const int n = static_cast<int>(raw.values.size());
    if (n < 1) fail(Errc::parse_error, "instance needs at least one agent");
    const int m = static_cast<int>(raw.values.front().size());
    for (const auto& row : raw.values)
        if (static_cast<int>(row.size()) != m) fail(Errc::parse_error, "ragged valuation matrix");
    if (static_cast<int>(raw.weights.size()) != n) fail(Errc::parse_error, "weight count does not match agent count");

    for (const auto& w : raw.weights)
        if (!w.positive()) fail(Errc::non_positive_weight, "weight " + w.str() + " is not positive");

    if (raw.k_hint && !(*raw.k_hint > Rational(1)))
        fail(Errc::degenerate_k, "declared k = " + raw.k_hint->str() + "; bivalued instances need k > 1");

    std::set<Rational> distinct;
    for (const auto& row : raw.values)
        for (const auto& v : row) distinct.insert(v);

    if (!distinct.empty() && !distinct.begin()->positive())
        fail(Errc::non_positive_value, "smallest value " + distinct.begin()->str() + " is not positive");
    if (distinct.size() > 2) fail(Errc::non_bivalued, "matrix has more than two distinct values");

    Rational low(1), k;
    if (distinct.size() == 2) {
        low = *distinct.begin();
        const Rational high = *distinct.rbegin();
        k = high / low;
        if (raw.k_hint && *raw.k_hint != k)
            fail(Errc::non_bivalued,
                 "matrix ratio " + k.str() + " does not match declared k = " + raw.k_hint->str());
    } else if (distinct.size() == 1) {
        if (!raw.k_hint)
            fail(Errc::degenerate_k, "matrix has a single distinct value and no declared k; "
                                     "identical valuations need no bivalued machinery");
        k = *raw.k_hint;
        // A single-valued matrix with a declared k is read as all-high when the
        // value equals k (canonical form), as all-low otherwise.
        low = (*distinct.begin() == k) ? Rational(1) : *distinct.begin();
    } else {
        k = raw.k_hint.value_or(Rational(2)); // m == 0: k is never consulted
    }

    Instance inst;
    inst.n = n;
    inst.m = m;
    inst.k = k;
    inst.values.assign(n, std::vector<Rational>(m));
    for (int i = 0; i < n; ++i)
        for (int e = 0; e < m; ++e) {
            const Rational v = raw.values[i][e] / low;
            if (v != Rational(1) && v != k)
                fail(Errc::non_bivalued, "rescaled value " + v.str() + " is neither 1 nor k");
            inst.values[i][e] = v;
        }

    Rational total(0);
    for (const auto& w : raw.weights) total += w;
    inst.weights.reserve(n);
    for (const auto& w : raw.weights) inst.weights.push_back(w / total);

    inst.agent_ids = raw.agent_ids.empty() ? default_ids("a", n) : raw.agent_ids;
    inst.good_ids = raw.good_ids.empty() ? default_ids("e", m) : raw.good_ids;
    if (static_cast<int>(inst.agent_ids.size()) != n) fail(Errc::parse_error, "agent id count mismatch");
    if (static_cast<int>(inst.good_ids.size()) != m) fail(Errc::parse_error, "good id count mismatch");
    require_unique(inst.agent_ids, "agent");
    require_unique(inst.good_ids, "good");
    return inst;
}

std::vector<std::vector<int>> bundles(int n, const Allocation& alloc) {
    std::vector<std::vector<int>> out(n);
    for (int e = 0; e < alloc.size(); ++e) out[alloc.owner[e]].push_back(e);
    return out;
}

Rational utility(const Instance& inst, int agent, std::span<const int> goods) {
    Rational sum(0);
    for (int e : goods) sum += inst.values[agent][e];
    return sum;
}

Rational weighted_value(const Instance& inst, int agent, const Allocation& alloc) {
    Rational sum(0);
    for (int e = 0; e < alloc.size(); ++e)
        if (alloc.owner[e] == agent) sum += inst.values[agent][e];
    return sum / inst.weights[agent];
}

Rational weighted_spending(const Instance& inst, int agent, const Allocation& alloc,
                           const std::vector<Rational>& price) {
    Rational sum(0);
    for (int e = 0; e < alloc.size(); ++e)
        if (alloc.owner[e] == agent) sum += price[e];
    return sum / inst.weights[agent];
}

Rational hat_spending(const Instance& inst, int agent, const Allocation& alloc,
                      const std::vector<Rational>& price) {
    Rational sum(0), min_price;
    bool any = false;
    for (int e = 0; e < alloc.size(); ++e) {
        if (alloc.owner[e] != agent) continue;
        sum += price[e];
        if (!any || price[e] < min_price) min_price = price[e];
        any = true;
    }
    if (!any) return Rational(0);
    return (sum - min_price) / inst.weights[agent];
}

Rational hat_value(const Instance& inst, int agent, const Allocation& alloc) {
    Rational sum(0), min_value;
    bool any = false;
    for (int e = 0; e < alloc.size(); ++e) {
        if (alloc.owner[e] != agent) continue;
        const Rational& v = inst.values[agent][e];
        sum += v;
        if (!any || v < min_value) min_value = v;
        any = true;
    }
    if (!any) return Rational(0);
    return (sum - min_value) / inst.weights[agent];
}

} // namespace fairdiv

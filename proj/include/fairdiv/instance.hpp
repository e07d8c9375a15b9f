#pragma once

#include "fairdiv/rational.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fairdiv {

/// Canonical bivalued instance: every value is exactly 1 or k (k > 1) and
/// the weights are positive and sum exactly to 1.
struct Instance {
    int n = 0;
    int m = 0;
    Rational k;
    std::vector<std::vector<Rational>> values; // n x m
    std::vector<Rational> weights;             // size n
    std::vector<std::string> agent_ids;
    std::vector<std::string> good_ids;

    bool values_high(int agent, int good) const { return values[agent][good] == k; }
};

/// Instance data as parsed from a file or produced by a generator, before
/// rescaling and normalization.
struct RawInstance {
    std::vector<std::string> agent_ids;
    std::vector<std::string> good_ids;
    std::vector<std::vector<Rational>> values; // n x m
    std::vector<Rational> weights;             // size n
    std::optional<Rational> k_hint;            // from the file's meta block
};

/// Checks shape and positivity, rescales values to {1, k} and normalizes
/// weights to sum 1. Rejects matrices with more than two distinct values
/// (NonBivalued), non-positive entries (NonPositiveValue/NonPositiveWeight)
/// and the identical-valuation case high == low (DegenerateK).
Instance validate_instance(const RawInstance& raw);

/// Maps each good to its owning agent; bundles are the fibers.
struct Allocation {
    std::vector<int> owner;

    Allocation() = default;
    explicit Allocation(std::vector<int> o) : owner(std::move(o)) {}

    int size() const { return static_cast<int>(owner.size()); }
    bool operator==(const Allocation&) const = default;
};

std::vector<std::vector<int>> bundles(int n, const Allocation& alloc);

/// Additive utility of a set of goods for one agent.
Rational utility(const Instance& inst, int agent, std::span<const int> goods);

/// v_i(X_i) / w_i for agent i's own bundle.
Rational weighted_value(const Instance& inst, int agent, const Allocation& alloc);

/// p(X_i) / w_i.
Rational weighted_spending(const Instance& inst, int agent, const Allocation& alloc,
                           const std::vector<Rational>& price);

/// Weighted spending after dropping one minimum-price good, 0 for an empty
/// bundle (the max over an empty set is taken as 0).
Rational hat_spending(const Instance& inst, int agent, const Allocation& alloc,
                      const std::vector<Rational>& price);

/// Weighted own-value after dropping one minimum-own-value good, 0 for an
/// empty bundle.
Rational hat_value(const Instance& inst, int agent, const Allocation& alloc);

} // namespace fairdiv

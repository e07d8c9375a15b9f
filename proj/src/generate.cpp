#include "fairdiv/generate.hpp"

#include "fairdiv/error.hpp"

#include <random>

namespace fairdiv {

RawInstance random_raw_instance(std::uint64_t seed, int n, int m, const Rational& k,
                                WeightMode weights) {
    if (n < 1 || m < 0) fail(Errc::parse_error, "need n >= 1 and m >= 0");
    if (!(k > Rational(1))) fail(Errc::degenerate_k, "k = " + k.str() + "; need k > 1");

    std::mt19937_64 rng(seed);
    RawInstance raw;
    raw.k_hint = k;
    raw.values.assign(n, std::vector<Rational>(m));
    for (int i = 0; i < n; ++i)
        for (int e = 0; e < m; ++e) raw.values[i][e] = (rng() & 1) ? k : Rational(1);
    raw.weights.reserve(n);
    for (int i = 0; i < n; ++i)
        raw.weights.push_back(weights == WeightMode::equal
                                  ? Rational(1, n)
                                  : Rational(1 + static_cast<long>(rng() % 9)));
    return raw;
}

Instance random_instance(std::uint64_t seed, int n, int m, const Rational& k,
                         WeightMode weights) {
    return validate_instance(random_raw_instance(seed, n, m, k, weights));
}

} // namespace fairdiv

#include "sigens/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace sigens::oracles {

namespace {

// H(n) = sum_{k=1}^n 1/k. Exact summation for moderate n, asymptotic series
// otherwise (error below 1e-20 for n > 1e6).
double harmonic(double n)
{
    if (n <= 1e6) {
        double h = 0.0;
        for (long k = static_cast<long>(n); k >= 1; --k) // small terms first
            h += 1.0 / static_cast<double>(k);
        return h;
    }
    const double inv = 1.0 / n;
    const double inv2 = inv * inv;
    return std::log(n) + std::numbers::egamma + 0.5 * inv - inv2 / 12.0 + inv2 * inv2 / 120.0;
}

} // namespace

double von_neumann_entropy(std::span<const double> lambda)
{
    double s = 0.0;
    for (double v : lambda) {
        if (!(v >= 0.0))
            throw Error(ErrorKind::invalid_input, "negative eigenvalue in entropy");
        if (v > 0.0)
            s -= v * std::log(v);
    }
    return s;
}

double von_neumann_entropy(const EigenvalueSet& lam)
{
    return von_neumann_entropy(std::span<const double>(lam.lambda));
}

double page_mean_entropy(int subsystem_sites, int total_sites, int d)
{
    const int rest = total_sites - subsystem_sites;
    if (subsystem_sites < 1 || rest < subsystem_sites)
        throw Error(ErrorKind::invalid_bipartition,
                    "need 1 <= |A| <= |B|, got |A|=" + std::to_string(subsystem_sites) +
                        " L=" + std::to_string(total_sites));
    if (d < 2)
        throw Error(ErrorKind::invalid_input, "local dimension must be >= 2");
    const double dim_b = std::pow(static_cast<double>(d), rest);
    const double dim_total = std::pow(static_cast<double>(d), total_sites);
    double tail;
    if (dim_total <= 1e6) {
        tail = 0.0;
        for (long k = static_cast<long>(dim_total); k > static_cast<long>(dim_b); --k)
            tail += 1.0 / static_cast<double>(k);
    } else {
        tail = harmonic(dim_total) - harmonic(dim_b);
    }
    const double dim_a = std::pow(static_cast<double>(d), subsystem_sites);
    return tail - (dim_a - 1.0) / (2.0 * dim_b);
}

double uniform_mean_entropy(std::size_t n)
{
    if (n < 2)
        throw Error(ErrorKind::invalid_dimension, "n must be >= 2");
    return (std::numbers::ln2 - 0.5) * (4.0 - std::ldexp(1.0, 3 - static_cast<int>(std::min<std::size_t>(n, 4096))));
}

double uniform_mean_entropy_limit()
{
    return 4.0 * std::numbers::ln2 - 2.0;
}

double expected_unordered_eigenvalue(std::size_t i, std::size_t n)
{
    if (n < 2 || i < 1 || i > n)
        throw Error(ErrorKind::index_out_of_range,
                    "need 1 <= i <= n, got i=" + std::to_string(i) + " n=" + std::to_string(n));
    const int exponent = static_cast<int>(i < n ? i : n - 1);
    return std::ldexp(1.0, -exponent);
}

} // namespace sigens::oracles

#pragma once

#include <cstddef>
#include <span>

#include "sigens/types.hpp"

// Closed-form reference values. All entropies are in nats.
namespace sigens::oracles {

/// -sum lambda_i ln lambda_i with 0 ln 0 = 0.
double von_neumann_entropy(std::span<const double> lambda);
double von_neumann_entropy(const EigenvalueSet& lam);

/// Mean entanglement entropy of a Haar-random pure state on `total_sites`
/// sites of local dimension `d`, for a block of `subsystem_sites` <= half:
/// sum_{k=n+1}^{mn} 1/k - (m-1)/(2n) with m = d^|A|, n = d^|B|.
double page_mean_entropy(int subsystem_sites, int total_sites, int d = 2);

/// Mean entropy of the squared coordinates of a uniform point on the
/// positive orthant of the unit n-sphere: (ln 2 - 1/2)(4 - 2^(3-n)).
double uniform_mean_entropy(std::size_t n);

/// n -> infinity limit of uniform_mean_entropy, 4 ln 2 - 2.
double uniform_mean_entropy_limit();

/// E[lambda_i] for unordered uniform samples: 2^-i for i < n, 2^-(n-1) for i = n.
double expected_unordered_eigenvalue(std::size_t i, std::size_t n);

} // namespace sigens::oracles

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sigens/random.hpp"
#include "sigens/types.hpp"

namespace sigens {

/// Hyperspherical angles phi_1 ... phi_{n-1} of a point on the unit n-sphere.
struct SphericalAngles {
    std::vector<double> phi;

    std::size_t dimension() const { return phi.size() + 1; }
};

/// x_1 = cos phi_1, x_k = sin phi_1 ... sin phi_{k-1} cos phi_k, x_n = prod sin phi_j.
std::vector<double> spherical_to_cartesian(const SphericalAngles& angles);

/// Inverse of spherical_to_cartesian using the two-argument arctangent.
/// Angles left undefined by trailing zero coordinates are set to 0.
SphericalAngles cartesian_to_spherical(std::span<const double> x);

/// Angles of the point with all coordinates 1/sqrt(n), i.e. the flat spectrum.
SphericalAngles maximally_entangled_angles(std::size_t n);

// Eigenvalue samplers. All return unordered sets in raw coordinate order.

/// Uniform point on the positive orthant, i.i.d. angles on [0, pi/2].
EigenvalueSet sample_uniform(std::size_t n, RandomStream& rng);

/// Angles drawn independently from Normal(arccos(1/sqrt(n-i+1)), sigma^2).
/// Angles are not clamped; squaring the coordinates folds every orthant back.
EigenvalueSet sample_gaussian(std::size_t n, double sigma, RandomStream& rng);

/// Dispatch on sigma: kUniformSigma selects sample_uniform, 0 returns the
/// exact flat spectrum, anything else sample_gaussian.
EigenvalueSet sample_eigenvalues(std::size_t n, double sigma, RandomStream& rng);

/// Sort descending, drop eigenvalues not above `threshold`, keep at most
/// `chi_max`, renormalize, and take square roots.
SchmidtSpectrum truncate_and_order(const EigenvalueSet& lam, std::size_t chi_max, double threshold);

/// Throws unless every entry is nonnegative and the sum is 1 within `tol`.
void check_eigenvalue_set(const EigenvalueSet& lam, double tol = 1e-12);

} // namespace sigens

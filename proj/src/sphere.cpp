#include "sigens/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <string>

namespace sigens {

namespace {

void require_dimension(std::size_t n)
{
    if (n < 2)
        throw Error(ErrorKind::invalid_dimension, "sphere dimension must be >= 2, got " + std::to_string(n));
}

EigenvalueSet square_coordinates(const std::vector<double>& x)
{
    EigenvalueSet out;
    out.lambda.resize(x.size());
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        out.lambda[i] = x[i] * x[i];
        total += out.lambda[i];
    }
    // Rounding in the sine products drifts the sum by O(n eps).
    for (double& v : out.lambda)
        v /= total;
    return out;
}

} // namespace

std::vector<double> spherical_to_cartesian(const SphericalAngles& angles)
{
    if (angles.phi.empty())
        throw Error(ErrorKind::invalid_dimension, "angle sequence is empty");
    const std::size_t n = angles.dimension();
    std::vector<double> x(n);
    double sines = 1.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        x[k] = sines * std::cos(angles.phi[k]);
        sines *= std::sin(angles.phi[k]);
    }
    x[n - 1] = sines;
    return x;
}

SphericalAngles cartesian_to_spherical(std::span<const double> x)
{
    const std::size_t n = x.size();
    require_dimension(n);

    // suffix[k] = x_k^2 + ... + x_n^2
    std::vector<double> suffix(n + 1, 0.0);
    for (std::size_t k = n; k-- > 0;)
        suffix[k] = suffix[k + 1] + x[k] * x[k];
    if (suffix[0] == 0.0)
        throw Error(ErrorKind::invalid_input, "cannot take angles of the zero vector");
    if (std::abs(std::sqrt(suffix[0]) - 1.0) > 1e-9)
        throw Error(ErrorKind::invalid_input, "point is not on the unit sphere");

    SphericalAngles out;
    out.phi.resize(n - 1, 0.0);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const double rest = std::sqrt(suffix[k + 1]);
        if (rest == 0.0 && x[k] == 0.0)
            break; // trailing zeros: remaining angles stay 0
        out.phi[k] = std::atan2(rest, x[k]);
    }
    if (!(x[n - 1] == 0.0 && x[n - 2] == 0.0))
        out.phi[n - 2] = std::atan2(x[n - 1], x[n - 2]);
    return out;
}

SphericalAngles maximally_entangled_angles(std::size_t n)
{
    require_dimension(n);
    SphericalAngles out;
    out.phi.resize(n - 1);
    for (std::size_t i = 1; i < n; ++i)
        out.phi[i - 1] = std::acos(1.0 / std::sqrt(static_cast<double>(n - i + 1)));
    return out;
}

EigenvalueSet sample_uniform(std::size_t n, RandomStream& rng)
{
    require_dimension(n);
    SphericalAngles angles;
    angles.phi.resize(n - 1);
    for (double& p : angles.phi)
        p = rng.uniform(0.0, std::numbers::pi / 2);
    return square_coordinates(spherical_to_cartesian(angles));
}

EigenvalueSet sample_gaussian(std::size_t n, double sigma, RandomStream& rng)
{
    require_dimension(n);
    if (!(sigma > 0.0) || std::isinf(sigma))
        throw Error(ErrorKind::invalid_input, "gaussian width must be positive and finite");
    SphericalAngles angles = maximally_entangled_angles(n);
    for (double& p : angles.phi)
        p += sigma * rng.standard_normal();
    return square_coordinates(spherical_to_cartesian(angles));
}

EigenvalueSet sample_eigenvalues(std::size_t n, double sigma, RandomStream& rng)
{
    if (sigma == kUniformSigma)
        return sample_uniform(n, rng);
    if (sigma == 0.0) {
        require_dimension(n);
        return EigenvalueSet{std::vector<double>(n, 1.0 / static_cast<double>(n)), true};
    }
    return sample_gaussian(n, sigma, rng);
}

void check_eigenvalue_set(const EigenvalueSet& lam, double tol)
{
    if (lam.lambda.empty())
        throw Error(ErrorKind::invalid_input, "eigenvalue set is empty");
    double total = 0.0;
    for (double v : lam.lambda) {
        if (!(v >= 0.0))
            throw Error(ErrorKind::invalid_input, "eigenvalues must be nonnegative");
        total += v;
    }
    if (std::abs(total - 1.0) > tol)
        throw Error(ErrorKind::invalid_input, "eigenvalues sum to " + std::to_string(total) + ", expected 1");
}

SchmidtSpectrum truncate_and_order(const EigenvalueSet& lam, std::size_t chi_max, double threshold)
{
    check_eigenvalue_set(lam, 1e-9);
    if (chi_max < 1)
        throw Error(ErrorKind::invalid_input, "chi_max must be >= 1");

    std::vector<double> kept = lam.lambda;
    std::sort(kept.begin(), kept.end(), std::greater<>());
    auto last = std::find_if(kept.begin(), kept.end(),
                             [&](double v) { return !(v > threshold) || v <= 0.0; });
    kept.erase(last, kept.end());
    if (kept.size() > chi_max)
        kept.resize(chi_max);
    if (kept.empty())
        throw Error(ErrorKind::empty_spectrum, "no eigenvalue above threshold");

    const double total = std::accumulate(kept.begin(), kept.end(), 0.0);
    SchmidtSpectrum out;
    out.values.resize(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i)
        out.values[i] = std::sqrt(kept[i] / total);
    return out;
}

} // namespace sigens

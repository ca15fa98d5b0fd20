#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "sigens/oracles.hpp"
#include "sigens/sphere.hpp"

using namespace sigens;
using std::numbers::pi;

namespace {

// Composite Simpson rule on [a, b].
template <typename F>
double simpson(F f, double a, double b, int panels = 2000)
{
    const double h = (b - a) / panels;
    double acc = f(a) + f(b);
    for (int i = 1; i < panels; ++i)
        acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

} // namespace

TEST_CASE("spherical_to_cartesian examples")
{
    auto x = spherical_to_cartesian({{pi / 4}});
    REQUIRE(x.size() == 2);
    CHECK(x[0] == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));

    x = spherical_to_cartesian({{0.0, 1.234}});
    CHECK(x[0] == 1.0);
    CHECK(x[1] == 0.0);
    CHECK(x[2] == 0.0);

    x = spherical_to_cartesian({{std::acos(1 / std::sqrt(3.0)), std::acos(1 / std::sqrt(2.0))}});
    for (double v : x)
        CHECK(v == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-14));

    CHECK_THROWS_AS(spherical_to_cartesian({{}}), Error);
    try {
        spherical_to_cartesian({{}});
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_dimension);
    }
}

TEST_CASE("cartesian_to_spherical examples")
{
    const double pole[] = {1.0, 0.0, 0.0};
    auto a = cartesian_to_spherical(pole);
    REQUIRE(a.phi.size() == 2);
    CHECK(a.phi[0] == 0.0);
    CHECK(a.phi[1] == 0.0);

    const double diag2[] = {std::sqrt(2.0) / 2, std::sqrt(2.0) / 2};
    CHECK(cartesian_to_spherical(diag2).phi[0] == doctest::Approx(pi / 4).epsilon(1e-15));

    const double c = 1 / std::sqrt(3.0);
    const double diag3[] = {c, c, c};
    a = cartesian_to_spherical(diag3);
    CHECK(a.phi[0] == doctest::Approx(std::acos(1 / std::sqrt(3.0))).epsilon(1e-14));
    CHECK(a.phi[1] == doctest::Approx(std::acos(1 / std::sqrt(2.0))).epsilon(1e-14));

    const double zero[] = {0.0, 0.0, 0.0};
    try {
        cartesian_to_spherical(zero);
        FAIL("zero vector accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_input);
    }
    const double unnormalized[] = {1.0, 1.0};
    CHECK_THROWS_AS(cartesian_to_spherical(unnormalized), Error);
}

TEST_CASE("round trip on the open positive orthant")
{
    RandomStream rng(11);
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform(0.0, 30.0));
        SphericalAngles a;
        for (std::size_t i = 0; i + 1 < n; ++i)
            a.phi.push_back(rng.uniform(1e-6, pi / 2 - 1e-6));
        const auto x = spherical_to_cartesian(a);
        const double norm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
        REQUIRE(std::abs(norm - 1.0) < 1e-12);
        const auto back = spherical_to_cartesian(cartesian_to_spherical(x));
        for (std::size_t i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(back[i] - x[i]));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("maximally entangled angles")
{
    auto a = maximally_entangled_angles(2);
    REQUIRE(a.phi.size() == 1);
    CHECK(a.phi[0] == doctest::Approx(pi / 4).epsilon(1e-15));

    a = maximally_entangled_angles(4);
    CHECK(a.phi[0] == doctest::Approx(std::acos(0.5)).epsilon(1e-15));
    CHECK(a.phi[1] == doctest::Approx(std::acos(1 / std::sqrt(3.0))).epsilon(1e-15));
    CHECK(a.phi[2] == doctest::Approx(std::acos(1 / std::sqrt(2.0))).epsilon(1e-15));

    for (std::size_t n : {2u, 3u, 7u, 64u, 1000u}) {
        const auto x = spherical_to_cartesian(maximally_entangled_angles(n));
        for (double v : x)
            REQUIRE(v * v == doctest::Approx(1.0 / static_cast<double>(n)).epsilon(1e-12));
    }
}

TEST_CASE("samplers return normalized nonnegative sets")
{
    RandomStream rng(3);
    for (std::size_t n : {2u, 5u, 64u, 300u})
        for (double sigma : {kUniformSigma, 1e-9, 0.01, 0.3, 2.0, 50.0}) {
            const auto lam = sample_eigenvalues(n, sigma, rng);
            REQUIRE(lam.size() == n);
            double sum = 0.0;
            for (double v : lam.lambda) {
                REQUIRE(v >= 0.0);
                sum += v;
            }
            REQUIRE(std::abs(sum - 1.0) < 1e-12);
            CHECK_NOTHROW(check_eigenvalue_set(lam));
        }
    CHECK_THROWS_AS(sample_uniform(1, rng), Error);
    CHECK_THROWS_AS(sample_gaussian(4, -1.0, rng), Error);
}

TEST_CASE("uniform sampler angles stay in the first quadrant")
{
    RandomStream rng(8);
    for (int i = 0; i < 1000; ++i) {
        const auto lam = sample_uniform(6, rng);
        std::vector<double> x;
        for (double v : lam.lambda)
            x.push_back(std::sqrt(v));
        for (double phi : cartesian_to_spherical(x).phi) {
            REQUIRE(phi >= 0.0);
            REQUIRE(phi <= pi / 2 + 1e-12);
        }
    }
}

TEST_CASE("gaussian sampler near zero width is flat")
{
    RandomStream rng(4);
    for (std::size_t n : {2u, 16u, 128u}) {
        const auto lam = sample_gaussian(n, 1e-9, rng);
        for (double v : lam.lambda)
            CHECK(v == doctest::Approx(1.0 / static_cast<double>(n)).epsilon(1e-6));
        CHECK(oracles::von_neumann_entropy(lam) == doctest::Approx(std::log(static_cast<double>(n))).epsilon(1e-6));
    }
    const auto flat = sample_eigenvalues(8, 0.0, rng);
    for (double v : flat.lambda)
        CHECK(v == 0.125);
}

TEST_CASE("uniform moments at n = 2 match quadrature")
{
    // lambda_1 = cos^2(phi), phi uniform on [0, pi/2]
    const double expected = simpson([](double p) { return std::cos(p) * std::cos(p) * 2.0 / pi; }, 0.0, pi / 2);
    RandomStream rng(21);
    const int n = 100000;
    double s = 0.0, ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = sample_uniform(2, rng).lambda[0];
        s += v;
        ss += v * v;
    }
    const double mean = s / n;
    const double se = std::sqrt((ss / n - mean * mean) / (n - 1));
    CHECK(std::abs(expected - 0.5) < 1e-12);
    CHECK(std::abs(mean - expected) < 3 * se);
}

TEST_CASE("uniform moments at n = 8")
{
    RandomStream rng(22);
    const int n = 100000;
    std::vector<double> s(8, 0.0), ss(8, 0.0);
    for (int i = 0; i < n; ++i) {
        const auto lam = sample_uniform(8, rng).lambda;
        for (int k = 0; k < 8; ++k) {
            s[k] += lam[k];
            ss[k] += lam[k] * lam[k];
        }
    }
    for (int k : {0, 7}) {
        const double mean = s[k] / n;
        const double se = std::sqrt((ss[k] / n - mean * mean) / (n - 1));
        const double expected = k == 0 ? 0.5 : std::pow(0.5, 7);
        CHECK(std::abs(mean - expected) < 3 * se);
    }
}

TEST_CASE("truncate_and_order examples")
{
    auto s = truncate_and_order({{0.25, 0.75}, false}, 2, 0.0);
    REQUIRE(s.values.size() == 2);
    CHECK(s.values[0] == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
    CHECK(s.values[1] == doctest::Approx(std::sqrt(0.25)).epsilon(1e-15));

    s = truncate_and_order({{0.5, 0.5, 1e-20}, false}, 8, 1e-16);
    REQUIRE(s.values.size() == 2);
    CHECK(std::abs(s.values[0] - std::sqrt(0.5)) < 1e-12);
    CHECK(std::abs(s.values[1] - std::sqrt(0.5)) < 1e-12);

    s = truncate_and_order({{0.7, 0.2, 0.1}, false}, 2, 0.0);
    REQUIRE(s.values.size() == 2);
    // renormalize the two survivors by hand: 0.7 / 0.9 and 0.2 / 0.9
    CHECK(s.values[0] == doctest::Approx(std::sqrt(0.7 / 0.9)).epsilon(1e-14));
    CHECK(s.values[1] == doctest::Approx(std::sqrt(0.2 / 0.9)).epsilon(1e-14));
    double sq = 0.0;
    for (double v : s.values)
        sq += v * v;
    CHECK(sq == doctest::Approx(1.0).epsilon(1e-14));

    try {
        truncate_and_order({{0.5, 0.5}, false}, 4, 0.6);
        FAIL("everything below threshold accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::empty_spectrum);
    }
}

TEST_CASE("samplers are deterministic per seed")
{
    RandomStream a(77), b(77);
    for (int i = 0; i < 50; ++i) {
        REQUIRE(sample_uniform(16, a).lambda == sample_uniform(16, b).lambda);
        REQUIRE(sample_gaussian(16, 0.1, a).lambda == sample_gaussian(16, 0.1, b).lambda);
    }
}

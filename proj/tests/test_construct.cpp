#include <doctest.h>

#include <cmath>
#include <limits>

#include "sigens/construct.hpp"
#include "sigens/oracles.hpp"

using namespace sigens;

namespace {

TargetSpectra flat_targets(int L, int d = 2)
{
    TargetSpectra t;
    t.length = L;
    t.local_dim = d;
    for (int l = 1; l < L; ++l) {
        const auto n = subsystem_dimension(l, L, d);
        SchmidtSpectrum s;
        s.bond = l;
        s.values.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
        t.spectra.push_back(s);
    }
    return t;
}

TargetSpectra single_bond(std::vector<double> values)
{
    TargetSpectra t;
    t.length = 2;
    SchmidtSpectrum s;
    s.bond = 1;
    s.values = std::move(values);
    t.spectra.push_back(s);
    return t;
}

// Mean per-bond eigenvalue error from the dense vector, computed without the library's MPS spectra.
double dense_error(const MatrixProductState& psi, const TargetSpectra& targets)
{
    const ComplexVector v = statevector(psi);
    double total = 0.0;
    for (int l = 1; l < psi.length(); ++l) {
        const auto actual = dense_spectrum(v, psi.length(), psi.local_dim(), l).eigenvalues();
        const auto target = targets.spectra[static_cast<std::size_t>(l - 1)].eigenvalues();
        double ss = 0.0;
        for (std::size_t i = 0; i < std::max(actual.size(), target.size()); ++i) {
            const double a = i < actual.size() ? actual[i] : 0.0;
            const double b = i < target.size() ? target[i] : 0.0;
            ss += (a - b) * (a - b);
        }
        total += std::sqrt(ss);
    }
    return total / (psi.length() - 1);
}

} // namespace

TEST_CASE("L=2 warmup is exact")
{
    EnsembleSpec spec;
    spec.length = 2;
    RandomStream rng(1);

    const auto product = warmup(single_bond({1.0}), spec, rng);
    const auto s1 = extract_spectrum(product, 1);
    REQUIRE(s1.values.size() == 1);
    CHECK(std::abs(s1.values[0] - 1.0) < 1e-12);

    const double h = 1.0 / std::sqrt(2.0);
    const auto bell = warmup(single_bond({h, h}), spec, rng);
    const auto s2 = extract_spectrum(bell, 1);
    REQUIRE(s2.values.size() == 2);
    CHECK(std::abs(s2.values[0] - h) < 1e-10);
    CHECK(std::abs(s2.values[1] - h) < 1e-10);
}

TEST_CASE("warmup recursion carries the imposed spectra")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        EnsembleSpec spec;
        spec.length = 7;
        spec.chi_max = 6;
        spec.sigma = seed % 2 ? kUniformSigma : 0.05;
        RandomStream base(seed);
        RandomStream tr = base.derive(0), wr = base.derive(1);
        const auto targets = sample_targets(spec, tr);
        WarmupTrace trace;
        const auto psi = warmup(targets, spec, wr, &trace);
        const auto m = plan_bond_dimensions(targets, spec.chi_max);

        CHECK(trace.bond_dims == m);
        CHECK(psi.bond_dims() == m);
        REQUIRE(trace.carried_spectra.size() == 6);
        for (int l = 1; l < 7; ++l) {
            const RealVector want = imposed_spectrum(targets.spectra[static_cast<std::size_t>(l - 1)], m[static_cast<std::size_t>(l)]);
            const RealVector& got = trace.carried_spectra[static_cast<std::size_t>(l - 1)];
            REQUIRE(got.size() == want.size());
            CHECK((got - want).cwiseAbs().maxCoeff() < 1e-8);
        }
        CHECK(std::abs(norm(psi) - 1.0) < 1e-10);
        for (const auto& site : psi.sites)
            CHECK(site.left_normalization_error() < 1e-10);

        // the last bond is fixed exactly by the closing site
        const auto last = extract_spectrum(psi, 6);
        const RealVector want = imposed_spectrum(targets.spectra[5], m[6]);
        for (Eigen::Index i = 0; i < want.size(); ++i)
            CHECK(std::abs(last.values[static_cast<std::size_t>(i)] - want(i)) < 1e-8);
    }
}

TEST_CASE("flat targets at L=6 are reached")
{
    EnsembleSpec spec;
    spec.length = 6;
    spec.chi_max = 8;
    spec.sigma = 0.0;
    const auto targets = flat_targets(6);
    RandomStream rng(3);
    const auto start = warmup(targets, spec, rng);
    SweepOptions opt;
    opt.delta = 1e-12;
    const auto report = sweep(start, targets, opt);
    CHECK(report.converged);
    CHECK(dense_error(report.psi, targets) < 1e-8);
    const ComplexVector v = statevector(report.psi);
    for (int l = 1; l < 6; ++l) {
        const auto s = dense_spectrum(v, 6, 2, l);
        const auto& t = targets.spectra[static_cast<std::size_t>(l - 1)].values;
        REQUIRE(s.values.size() >= t.size());
        for (std::size_t i = 0; i < t.size(); ++i)
            CHECK(std::abs(s.values[i] - t[i]) < 1e-8);
    }
}

TEST_CASE("sweep fixed point")
{
    RandomStream rng(4);
    for (int L : {3, 6, 9}) {
        const auto psi = canonicalize_left(random_mps(L, 2, 8, rng));
        TargetSpectra t;
        t.length = L;
        t.spectra = extract_all_spectra(psi);
        const auto report = sweep(psi, t);
        CHECK(report.converged);
        CHECK(report.sweeps_used == 1);
        CHECK(report.total_error < 1e-12);
        CHECK(std::abs(std::abs(overlap(psi, report.psi)) - 1.0) < 1e-10);
    }
}

TEST_CASE("single bond from a random start")
{
    const double h = 1.0 / std::sqrt(2.0);
    const auto targets = single_bond({h, h});
    RandomStream rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto psi = random_mps(2, 2, 2, rng);
        SweepOptions opt;
        opt.delta = 1e-10;
        const auto report = sweep(psi, targets, opt);
        CHECK(report.total_error < 1e-10);
        CHECK(report.sweeps_used <= 2);
    }
}

TEST_CASE("sweep output is unit norm and canonical")
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        EnsembleSpec spec;
        spec.length = 8;
        spec.chi_max = 16;
        SweepOptions opt;
        opt.max_sweeps = seed % 5 + 1;
        const auto r = build_state(spec, RandomStream(seed), opt);
        CHECK(std::abs(norm(r.psi) - 1.0) < 1e-10);
        if (r.psi.canonical == CanonicalForm::left) {
            for (int j = 0; j + 1 < 8; ++j)
                CHECK(r.psi.sites[static_cast<std::size_t>(j)].left_normalization_error() < 1e-10);
        } else {
            REQUIRE(r.psi.canonical == CanonicalForm::right);
            for (int j = 1; j < 8; ++j)
                CHECK(r.psi.sites[static_cast<std::size_t>(j)].right_normalization_error() < 1e-10);
        }
        r.psi.validate();
        CHECK(r.per_bond_error.size() == 7);
    }
}

TEST_CASE("L=8 uniform targets: some seeds converge, and converged states are genuine")
{
    EnsembleSpec spec;
    spec.length = 8;
    spec.chi_max = 16;
    SweepOptions opt;
    opt.max_sweeps = 200;
    opt.delta = 1e-4;
    int converged = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        ConstructionReport r;
        try {
            r = build_state(spec, RandomStream(seed), opt);
        } catch (const Error&) {
            continue;
        }
        if (!r.converged)
            continue;
        ++converged;
        CHECK(dense_error(r.psi, r.targets) < 1e-4);
    }
    MESSAGE("converged " << converged << " of 1000");
    CHECK(converged > 0);

}

// Known to fail: the sweep approaches a two-cycle between its two directions
// and one branch of the cycle can drift upward by a few percent.
TEST_CASE("sweep error near the fixed point")
{
    EnsembleSpec spec;
    spec.length = 8;
    spec.chi_max = 16;
    SweepOptions opt;
    opt.max_sweeps = 200;
    opt.delta = 1e-4;
    int checked = 0, increases = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const RandomStream base(seed);
        RandomStream tr = base.derive(0), wr = base.derive(1);
        const auto targets = sample_targets(spec, tr);
        MatrixProductState start;
        try {
            start = warmup(targets, spec, wr);
        } catch (const Error&) {
            continue;
        }
        const auto full = sweep(start, targets, opt);
        if (!full.converged)
            continue;
        ++checked;
        // deterministic, so the state after k passes is a rerun with max_sweeps = k
        double prev = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= full.sweeps_used; ++k) {
            SweepOptions capped = opt;
            capped.max_sweeps = k;
            const double e = sweep(start, targets, capped).total_error;
            if (prev < 10 * opt.delta && e > prev + 1e-9)
                ++increases;
            prev = e;
        }
    }
    MESSAGE(increases << " pass-to-pass increases over " << checked << " converged seeds");
    CHECK(checked > 0);
    CHECK(increases == 0);
}

TEST_CASE("build_state near the maximally entangled point")
{
    EnsembleSpec spec;
    spec.length = 4;
    spec.chi_max = 4;
    spec.sigma = 1e-9;
    const auto r = build_state(spec, RandomStream(11));
    CHECK(r.converged);
    const auto mid = extract_spectrum(r.psi, 2);
    double s = 0.0;
    for (double x : mid.values)
        if (x > 0)
            s -= x * x * std::log(x * x);
    CHECK(std::abs(s - 2 * std::log(2.0)) < 1e-4);
}

TEST_CASE("build_state is deterministic")
{
    EnsembleSpec spec;
    spec.length = 8;
    spec.chi_max = 16;
    const auto a = build_state(spec, RandomStream(99));
    const auto b = build_state(spec, RandomStream(99));
    CHECK(report_to_json(a).dump() == report_to_json(b).dump());
    for (int j = 0; j < 8; ++j)
        for (int s = 0; s < 2; ++s)
            REQUIRE((a.psi.sites[j].block(s) - b.psi.sites[j].block(s)).norm() == 0.0);
    const auto c = build_state(spec, RandomStream(100));
    CHECK(report_to_json(a).dump() != report_to_json(c).dump());
}

TEST_CASE("mismatched state and targets are rejected")
{
    RandomStream rng(6);
    const auto psi = random_mps(5, 2, 4, rng);
    try {
        sweep(psi, flat_targets(6));
        FAIL("mismatch accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_input);
    }
    auto bad = flat_targets(4);
    bad.spectra[1].values[0] = 2.0;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("bond planning and imposed spectra")
{
    auto t = flat_targets(8);
    const auto m = plan_bond_dimensions(t, 5);
    const std::vector<Eigen::Index> want{1, 2, 4, 5, 5, 5, 4, 2, 1};
    CHECK(m == want);

    SchmidtSpectrum s;
    s.values = {0.8, 0.6};
    const RealVector padded = imposed_spectrum(s, 3);
    CHECK(padded.size() == 3);
    CHECK(padded(2) == 0.0);
    const RealVector cut = imposed_spectrum(s, 1);
    CHECK(cut(0) == doctest::Approx(1.0));

    SchmidtSpectrum a, b;
    a.values = {1.0};
    b.values = {std::sqrt(0.5), std::sqrt(0.5)};
    // eigenvalues (1, 0) vs (1/2, 1/2)
    CHECK(spectrum_error(a, b) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
}

TEST_CASE("report and targets json")
{
    EnsembleSpec spec;
    spec.length = 5;
    spec.chi_max = 4;
    const auto r = build_state(spec, RandomStream(3));
    const auto j = report_to_json(r);
    CHECK(j.at("converged").get<bool>() == r.converged);
    CHECK(j.at("per_bond_error").size() == 4);
    const auto t = targets_from_json(targets_to_json(r.targets));
    REQUIRE(t.spectra.size() == r.targets.spectra.size());
    for (std::size_t i = 0; i < t.spectra.size(); ++i)
        CHECK(t.spectra[i].values == r.targets.spectra[i].values);
}

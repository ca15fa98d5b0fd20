#include <doctest.h>

#include "sigens/random.hpp"

using namespace sigens;

TEST_CASE("equal seeds give equal streams")
{
    RandomStream a(99), b(99);
    for (int i = 0; i < 1000; ++i)
        REQUIRE(a.standard_normal() == b.standard_normal());
}

TEST_CASE("substreams depend only on key and index")
{
    const RandomStream base(5);
    RandomStream consumed(5);
    for (int i = 0; i < 17; ++i)
        consumed.uniform(0.0, 1.0);
    // drawing from the parent must not move its children
    CHECK(base.derive(3).key() == consumed.derive(3).key());
    CHECK(base.derive(3).key() != base.derive(4).key());
    CHECK(base.derive(0).key() != RandomStream(6).derive(0).key());

    RandomStream x = base.derive(7), y = base.derive(7);
    for (int i = 0; i < 100; ++i)
        REQUIRE(x.uniform(-1.0, 1.0) == y.uniform(-1.0, 1.0));
}

TEST_CASE("normal draws have roughly unit variance")
{
    RandomStream r(1);
    const int n = 200000;
    double s = 0.0, ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = r.normal(2.0, 3.0);
        s += v;
        ss += v * v;
    }
    const double mean = s / n;
    CHECK(mean == doctest::Approx(2.0).epsilon(0.01));
    CHECK(ss / n - mean * mean == doctest::Approx(9.0).epsilon(0.02));
}

#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <sstream>

#include "sigens/mps_io.hpp"

using namespace sigens;

namespace {

void require_identical(const MatrixProductState& a, const MatrixProductState& b)
{
    REQUIRE(a.length() == b.length());
    REQUIRE(a.canonical == b.canonical);
    REQUIRE(a.center == b.center);
    for (int j = 0; j < a.length(); ++j)
        for (int s = 0; s < a.local_dim(); ++s)
            REQUIRE((a.sites[j].block(s) - b.sites[j].block(s)).norm() == 0.0);
}

} // namespace

TEST_CASE("binary round trip")
{
    RandomStream rng(1);
    auto psi = canonicalize_left(random_mps(7, 2, 6, rng));
    std::stringstream buf;
    write_mps_binary(buf, psi);
    require_identical(psi, read_mps_binary(buf));
}

TEST_CASE("binary layout is row-major little-endian re/im pairs")
{
    MatrixProductState psi;
    SiteTensor a(2, 1, 2), b(2, 2, 1);
    a.block(0)(0, 0) = {1.5, -2.0};
    a.block(0)(0, 1) = {3.0, 0.25};
    a.block(1)(0, 1) = {1.0, 0.0};
    b.block(0)(0, 0) = {1.0, 0.0};
    b.block(1)(1, 0) = {0.5, 0.0};
    psi.sites = {a, b};
    std::stringstream buf;
    write_mps_binary(buf, psi);
    const std::string bytes = buf.str();
    // magic 8, version 4, L 4, d 4, form 4, center 4, dims 3*8 = 52 bytes of header
    const std::size_t header = 8 + 4 * 5 + 3 * 8;
    REQUIRE(bytes.size() == header + 16 * (2 * 2 + 2 * 2));
    auto f64 = [&](std::size_t offset) {
        unsigned char raw[8];
        std::memcpy(raw, bytes.data() + offset, 8);
        std::uint64_t bits = 0;
        for (int i = 7; i >= 0; --i)
            bits = (bits << 8) | raw[i];
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    };
    CHECK(f64(header) == 1.5);
    CHECK(f64(header + 8) == -2.0);
    CHECK(f64(header + 16) == 3.0);
    CHECK(f64(header + 24) == 0.25);
    CHECK(bytes.compare(0, 6, "SIGMPS") == 0);
}

TEST_CASE("binary reader rejects garbage")
{
    std::stringstream junk("definitely not an mps");
    try {
        read_mps_binary(junk);
        FAIL("junk accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::io);
    }
    RandomStream rng(2);
    std::stringstream buf;
    write_mps_binary(buf, random_mps(4, 2, 3, rng));
    std::stringstream cut(buf.str().substr(0, buf.str().size() - 5));
    CHECK_THROWS_AS(read_mps_binary(cut), Error);
}

TEST_CASE("json round trip and file helpers")
{
    RandomStream rng(3);
    auto psi = canonicalize_right(random_mps(5, 3, 4, rng));
    const auto j = mps_to_json(psi);
    CHECK(j.at("bond_dims").size() == 6);
    require_identical(psi, mps_from_json(nlohmann::json::parse(j.dump())));

    auto bad = j;
    bad["sites"][0]["blocks"][0]["data"].erase(0);
    CHECK_THROWS_AS(mps_from_json(bad), Error);

    const auto path = (std::filesystem::temp_directory_path() / "sigens_io_test.mps").string();
    save_mps_binary(path, psi);
    require_identical(psi, load_mps_binary(path));
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_mps_binary(path), Error);
}

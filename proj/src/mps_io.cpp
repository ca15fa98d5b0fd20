#include "sigens/mps_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace sigens {

namespace {

constexpr std::array<char, 8> kMagic{'S', 'I', 'G', 'M', 'P', 'S', '\0', '\1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
T to_little_endian(T value)
{
    if constexpr (std::endian::native == std::endian::big) {
        std::array<unsigned char, sizeof(T)> bytes;
        std::memcpy(bytes.data(), &value, sizeof(T));
        std::reverse(bytes.begin(), bytes.end());
        std::memcpy(&value, bytes.data(), sizeof(T));
    }
    return value;
}

template <typename T>
void put(std::ostream& out, T value)
{
    value = to_little_endian(value);
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in)
{
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in)
        throw Error(ErrorKind::io, "truncated MPS checkpoint");
    return to_little_endian(value);
}

std::uint32_t form_code(CanonicalForm f)
{
    return static_cast<std::uint32_t>(f);
}

CanonicalForm form_from_code(std::uint32_t c)
{
    if (c > 3)
        throw Error(ErrorKind::io, "unknown canonical form code " + std::to_string(c));
    return static_cast<CanonicalForm>(c);
}

} // namespace

std::string to_string(CanonicalForm form)
{
    switch (form) {
    case CanonicalForm::none: return "none";
    case CanonicalForm::left: return "left";
    case CanonicalForm::right: return "right";
    case CanonicalForm::mixed: return "mixed";
    }
    return "none";
}

CanonicalForm canonical_form_from_string(const std::string& s)
{
    if (s == "none") return CanonicalForm::none;
    if (s == "left") return CanonicalForm::left;
    if (s == "right") return CanonicalForm::right;
    if (s == "mixed") return CanonicalForm::mixed;
    throw Error(ErrorKind::io, "unknown canonical form '" + s + "'");
}

void write_mps_binary(std::ostream& out, const MatrixProductState& psi)
{
    psi.validate();
    out.write(kMagic.data(), kMagic.size());
    put<std::uint32_t>(out, kVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(psi.length()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(psi.local_dim()));
    put<std::uint32_t>(out, form_code(psi.canonical));
    put<std::int32_t>(out, psi.center);
    for (Eigen::Index m : psi.bond_dims())
        put<std::uint64_t>(out, static_cast<std::uint64_t>(m));
    for (const auto& site : psi.sites)
        for (const auto& b : site.blocks())
            for (Eigen::Index r = 0; r < b.rows(); ++r)
                for (Eigen::Index c = 0; c < b.cols(); ++c) {
                    put<double>(out, b(r, c).real());
                    put<double>(out, b(r, c).imag());
                }
    if (!out)
        throw Error(ErrorKind::io, "failed writing MPS checkpoint");
}

MatrixProductState read_mps_binary(std::istream& in)
{
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic)
        throw Error(ErrorKind::io, "not an MPS checkpoint (bad magic)");
    const auto version = get<std::uint32_t>(in);
    if (version != kVersion)
        throw Error(ErrorKind::io, "unsupported checkpoint version " + std::to_string(version));
    const auto length = get<std::uint32_t>(in);
    const auto d = get<std::uint32_t>(in);
    if (length < 1 || d < 1 || length > 4096 || d > 4096)
        throw Error(ErrorKind::io, "implausible checkpoint header");
    MatrixProductState psi;
    psi.canonical = form_from_code(get<std::uint32_t>(in));
    psi.center = get<std::int32_t>(in);
    std::vector<Eigen::Index> dims(length + 1);
    for (auto& m : dims) {
        const auto v = get<std::uint64_t>(in);
        if (v < 1 || v > (1u << 20))
            throw Error(ErrorKind::io, "implausible bond dimension in checkpoint");
        m = static_cast<Eigen::Index>(v);
    }
    for (std::uint32_t j = 0; j < length; ++j) {
        SiteTensor site(static_cast<int>(d), dims[j], dims[j + 1]);
        for (std::uint32_t s = 0; s < d; ++s) {
            auto& b = site.block(static_cast<int>(s));
            for (Eigen::Index r = 0; r < b.rows(); ++r)
                for (Eigen::Index c = 0; c < b.cols(); ++c) {
                    const double re = get<double>(in);
                    const double im = get<double>(in);
                    b(r, c) = {re, im};
                }
        }
        psi.sites.push_back(std::move(site));
    }
    psi.validate();
    return psi;
}

void save_mps_binary(const std::string& path, const MatrixProductState& psi)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorKind::io, "cannot open '" + path + "' for writing");
    write_mps_binary(out, psi);
}

MatrixProductState load_mps_binary(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::io, "cannot open '" + path + "'");
    return read_mps_binary(in);
}

nlohmann::json mps_to_json(const MatrixProductState& psi)
{
    psi.validate();
    nlohmann::json sites = nlohmann::json::array();
    for (const auto& site : psi.sites) {
        nlohmann::json blocks = nlohmann::json::array();
        for (const auto& b : site.blocks()) {
            std::vector<double> data;
            data.reserve(static_cast<std::size_t>(2 * b.size()));
            for (Eigen::Index r = 0; r < b.rows(); ++r)
                for (Eigen::Index c = 0; c < b.cols(); ++c) {
                    data.push_back(b(r, c).real());
                    data.push_back(b(r, c).imag());
                }
            blocks.push_back({{"rows", b.rows()}, {"cols", b.cols()}, {"data", std::move(data)}});
        }
        sites.push_back({{"blocks", std::move(blocks)}});
    }
    std::vector<long long> dims;
    for (Eigen::Index m : psi.bond_dims())
        dims.push_back(static_cast<long long>(m));
    return {{"format", "sigens-mps"},
            {"version", kVersion},
            {"length", psi.length()},
            {"local_dim", psi.local_dim()},
            {"canonical", to_string(psi.canonical)},
            {"center", psi.center},
            {"bond_dims", dims},
            {"sites", std::move(sites)}};
}

MatrixProductState mps_from_json(const nlohmann::json& j)
{
    try {
        if (j.at("format").get<std::string>() != "sigens-mps")
            throw Error(ErrorKind::io, "JSON is not an MPS document");
        MatrixProductState psi;
        psi.canonical = canonical_form_from_string(j.at("canonical").get<std::string>());
        psi.center = j.at("center").get<int>();
        for (const auto& site_json : j.at("sites")) {
            std::vector<ComplexMatrix> blocks;
            for (const auto& bj : site_json.at("blocks")) {
                const auto rows = bj.at("rows").get<Eigen::Index>();
                const auto cols = bj.at("cols").get<Eigen::Index>();
                const auto& data = bj.at("data");
                if (static_cast<Eigen::Index>(data.size()) != 2 * rows * cols)
                    throw Error(ErrorKind::io, "block data length does not match its shape");
                ComplexMatrix b(rows, cols);
                std::size_t k = 0;
                for (Eigen::Index r = 0; r < rows; ++r)
                    for (Eigen::Index c = 0; c < cols; ++c, k += 2)
                        b(r, c) = {data[k].get<double>(), data[k + 1].get<double>()};
                blocks.push_back(std::move(b));
            }
            psi.sites.emplace_back(std::move(blocks));
        }
        psi.validate();
        return psi;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::io, std::string("malformed MPS JSON: ") + e.what());
    }
}

} // namespace sigens

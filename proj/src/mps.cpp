#include "sigens/mps.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sigens {

namespace {

struct ThinQr {
    ComplexMatrix q;
    ComplexMatrix r;
};

ThinQr thin_qr(const ComplexMatrix& m)
{
    const Eigen::Index k = std::min(m.rows(), m.cols());
    Eigen::HouseholderQR<ComplexMatrix> qr(m);
    ThinQr out;
    out.q = qr.householderQ() * ComplexMatrix::Identity(m.rows(), k);
    out.r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    return out;
}

double identity_deviation(const ComplexMatrix& gram)
{
    return (gram - ComplexMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

void check_bond(const MatrixProductState& psi, int bond)
{
    if (bond < 1 || bond >= psi.length())
        throw Error(ErrorKind::index_out_of_range,
                    "bond " + std::to_string(bond) + " outside 1.." + std::to_string(psi.length() - 1));
}

// Right-to-left SVD pass over a left-canonical, unit-norm state, recording
// spectra down to `stop_bond`.
std::vector<SchmidtSpectrum> spectra_from_left_canonical(MatrixProductState psi, int stop_bond)
{
    std::vector<SchmidtSpectrum> out;
    for (int j = psi.length() - 1; j >= stop_bond; --j) {
        auto& site = psi.sites[static_cast<std::size_t>(j)];
        const Svd svd = thin_svd(site.stacked_cols());
        SchmidtSpectrum spec;
        spec.bond = j;
        spec.values.assign(svd.s.data(), svd.s.data() + svd.s.size());
        out.push_back(std::move(spec));
        site = SiteTensor::from_stacked_cols(svd.vh, site.local_dim());
        psi.sites[static_cast<std::size_t>(j - 1)].apply_right(svd.u * svd.s.cast<std::complex<double>>().asDiagonal());
    }
    std::reverse(out.begin(), out.end());
    return out;
}

} // namespace

SiteTensor::SiteTensor(int local_dim, Eigen::Index left, Eigen::Index right)
    : blocks_(static_cast<std::size_t>(local_dim), ComplexMatrix::Zero(left, right))
{
}

SiteTensor::SiteTensor(std::vector<ComplexMatrix> blocks) : blocks_(std::move(blocks))
{
    for (const auto& b : blocks_)
        if (b.rows() != left_dim() || b.cols() != right_dim())
            throw Error(ErrorKind::invalid_input, "site blocks have inconsistent shapes");
}

SiteTensor SiteTensor::from_stacked_rows(const ComplexMatrix& m, int local_dim)
{
    if (local_dim < 1 || m.rows() % local_dim != 0)
        throw Error(ErrorKind::invalid_dimension, "row count not divisible by local dimension");
    const Eigen::Index left = m.rows() / local_dim;
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(local_dim));
    for (int s = 0; s < local_dim; ++s)
        blocks.emplace_back(m.middleRows(s * left, left));
    return SiteTensor(std::move(blocks));
}

SiteTensor SiteTensor::from_stacked_cols(const ComplexMatrix& m, int local_dim)
{
    if (local_dim < 1 || m.cols() % local_dim != 0)
        throw Error(ErrorKind::invalid_dimension, "column count not divisible by local dimension");
    const Eigen::Index right = m.cols() / local_dim;
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(local_dim));
    for (int s = 0; s < local_dim; ++s)
        blocks.emplace_back(m.middleCols(s * right, right));
    return SiteTensor(std::move(blocks));
}

ComplexMatrix SiteTensor::stacked_rows() const
{
    const Eigen::Index left = left_dim();
    ComplexMatrix out(left * local_dim(), right_dim());
    for (int s = 0; s < local_dim(); ++s)
        out.middleRows(s * left, left) = block(s);
    return out;
}

ComplexMatrix SiteTensor::stacked_cols() const
{
    const Eigen::Index right = right_dim();
    ComplexMatrix out(left_dim(), right * local_dim());
    for (int s = 0; s < local_dim(); ++s)
        out.middleCols(s * right, right) = block(s);
    return out;
}

void SiteTensor::apply_left(const ComplexMatrix& lhs)
{
    for (auto& b : blocks_)
        b = lhs * b;
}

void SiteTensor::apply_right(const ComplexMatrix& rhs)
{
    for (auto& b : blocks_)
        b = b * rhs;
}

double SiteTensor::left_normalization_error() const
{
    ComplexMatrix gram = ComplexMatrix::Zero(right_dim(), right_dim());
    for (const auto& b : blocks_)
        gram.noalias() += b.adjoint() * b;
    return identity_deviation(gram);
}

double SiteTensor::right_normalization_error() const
{
    ComplexMatrix gram = ComplexMatrix::Zero(left_dim(), left_dim());
    for (const auto& b : blocks_)
        gram.noalias() += b * b.adjoint();
    return identity_deviation(gram);
}

std::vector<Eigen::Index> MatrixProductState::bond_dims() const
{
    std::vector<Eigen::Index> dims;
    dims.reserve(sites.size() + 1);
    if (sites.empty())
        return dims;
    dims.push_back(sites.front().left_dim());
    for (const auto& s : sites)
        dims.push_back(s.right_dim());
    return dims;
}

void MatrixProductState::validate() const
{
    if (sites.empty())
        throw Error(ErrorKind::invalid_input, "MPS has no sites");
    const int d = local_dim();
    for (std::size_t j = 0; j < sites.size(); ++j) {
        if (sites[j].local_dim() != d)
            throw Error(ErrorKind::invalid_input, "site " + std::to_string(j) + " has a different local dimension");
        if (j + 1 < sites.size() && sites[j].right_dim() != sites[j + 1].left_dim())
            throw Error(ErrorKind::invalid_input, "bond mismatch after site " + std::to_string(j));
    }
    if (sites.front().left_dim() != 1 || sites.back().right_dim() != 1)
        throw Error(ErrorKind::invalid_input, "boundary bond dimensions must be 1");
}

MatrixProductState product_state(int length, int local_dim)
{
    if (length < 1 || local_dim < 1)
        throw Error(ErrorKind::invalid_dimension, "product state needs L >= 1 and d >= 1");
    MatrixProductState psi;
    for (int j = 0; j < length; ++j) {
        SiteTensor site(local_dim, 1, 1);
        site.block(0)(0, 0) = 1.0;
        psi.sites.push_back(std::move(site));
    }
    psi.canonical = CanonicalForm::left;
    return psi;
}

MatrixProductState random_mps(int length, int local_dim, int chi, RandomStream& rng)
{
    if (length < 1 || local_dim < 2 || chi < 1)
        throw Error(ErrorKind::invalid_dimension, "random MPS needs L >= 1, d >= 2, chi >= 1");
    std::vector<Eigen::Index> dims(static_cast<std::size_t>(length) + 1);
    for (int l = 0; l <= length; ++l)
        dims[static_cast<std::size_t>(l)] = static_cast<Eigen::Index>(
            std::min<std::size_t>(subsystem_dimension(l, length, local_dim), static_cast<std::size_t>(chi)));
    MatrixProductState psi;
    for (int j = 0; j < length; ++j) {
        SiteTensor site(local_dim, dims[static_cast<std::size_t>(j)], dims[static_cast<std::size_t>(j) + 1]);
        for (int s = 0; s < local_dim; ++s)
            for (Eigen::Index c = 0; c < site.right_dim(); ++c)
                for (Eigen::Index r = 0; r < site.left_dim(); ++r) {
                    const double re = rng.standard_normal();
                    const double im = rng.standard_normal();
                    site.block(s)(r, c) = {re, im};
                }
        psi.sites.push_back(std::move(site));
    }
    return psi;
}

MatrixProductState concatenate(const MatrixProductState& a, const MatrixProductState& b)
{
    a.validate();
    b.validate();
    if (a.local_dim() != b.local_dim())
        throw Error(ErrorKind::invalid_input, "cannot concatenate states with different local dimensions");
    MatrixProductState out = a;
    out.sites.insert(out.sites.end(), b.sites.begin(), b.sites.end());
    const bool left = a.canonical == CanonicalForm::left && b.canonical == CanonicalForm::left;
    out.canonical = left ? CanonicalForm::left : CanonicalForm::none;
    return out;
}

ComplexVector statevector(const MatrixProductState& psi)
{
    psi.validate();
    if (psi.length() > kMaxStatevectorSites)
        throw Error(ErrorKind::capacity, "statevector limited to " + std::to_string(kMaxStatevectorSites) +
                                             " sites, got " + std::to_string(psi.length()));
    const int d = psi.local_dim();
    ComplexMatrix acc = ComplexMatrix::Ones(1, 1);
    for (const auto& site : psi.sites) {
        ComplexMatrix next(acc.rows() * d, site.right_dim());
        for (int s = 0; s < d; ++s) {
            const ComplexMatrix part = acc * site.block(s);
            for (Eigen::Index p = 0; p < acc.rows(); ++p)
                next.row(p * d + s) = part.row(p);
        }
        acc = std::move(next);
    }
    return acc.col(0);
}

std::complex<double> overlap(const MatrixProductState& bra, const MatrixProductState& ket)
{
    bra.validate();
    ket.validate();
    if (bra.length() != ket.length() || bra.local_dim() != ket.local_dim())
        throw Error(ErrorKind::invalid_input, "overlap of states with different shapes");
    ComplexMatrix env = ComplexMatrix::Ones(1, 1);
    for (std::size_t j = 0; j < bra.sites.size(); ++j) {
        const auto& a = bra.sites[j];
        const auto& b = ket.sites[j];
        ComplexMatrix next = ComplexMatrix::Zero(a.right_dim(), b.right_dim());
        for (int s = 0; s < a.local_dim(); ++s)
            next.noalias() += a.block(s).adjoint() * env * b.block(s);
        env = std::move(next);
    }
    return env(0, 0);
}

double norm(const MatrixProductState& psi)
{
    return std::sqrt(std::max(0.0, overlap(psi, psi).real()));
}

MatrixProductState canonicalize_left(const MatrixProductState& psi)
{
    psi.validate();
    MatrixProductState out = psi;
    const int d = out.local_dim();
    const int last = out.length() - 1;
    for (int j = 0; j < last; ++j) {
        auto& site = out.sites[static_cast<std::size_t>(j)];
        ThinQr qr = thin_qr(site.stacked_rows());
        site = SiteTensor::from_stacked_rows(qr.q, d);
        out.sites[static_cast<std::size_t>(j) + 1].apply_left(qr.r);
    }
    auto& tail = out.sites[static_cast<std::size_t>(last)];
    ComplexMatrix m = tail.stacked_rows();
    const double nrm = m.norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm))
        throw Error(ErrorKind::degenerate_state, "state has zero norm");
    tail = SiteTensor::from_stacked_rows(m / nrm, d);
    out.canonical = CanonicalForm::left;
    out.center = last;
    return out;
}

MatrixProductState canonicalize_right(const MatrixProductState& psi)
{
    psi.validate();
    MatrixProductState out = psi;
    const int d = out.local_dim();
    for (int j = out.length() - 1; j > 0; --j) {
        auto& site = out.sites[static_cast<std::size_t>(j)];
        ThinQr qr = thin_qr(site.stacked_cols().adjoint());
        site = SiteTensor::from_stacked_cols(qr.q.adjoint(), d);
        out.sites[static_cast<std::size_t>(j) - 1].apply_right(qr.r.adjoint());
    }
    auto& head = out.sites.front();
    ComplexMatrix m = head.stacked_cols();
    const double nrm = m.norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm))
        throw Error(ErrorKind::degenerate_state, "state has zero norm");
    head = SiteTensor::from_stacked_cols(m / nrm, d);
    out.canonical = CanonicalForm::right;
    out.center = 0;
    return out;
}

SchmidtSpectrum extract_spectrum(const MatrixProductState& psi, int bond)
{
    check_bond(psi, bond);
    auto spectra = spectra_from_left_canonical(canonicalize_left(psi), bond);
    return spectra.front();
}

std::vector<SchmidtSpectrum> extract_all_spectra(const MatrixProductState& psi)
{
    if (psi.length() < 2)
        return {};
    return spectra_from_left_canonical(canonicalize_left(psi), 1);
}

SchmidtSpectrum dense_spectrum(const ComplexVector& v, int length, int local_dim, int bond)
{
    if (bond < 1 || bond >= length)
        throw Error(ErrorKind::index_out_of_range, "bond outside 1..L-1");
    Eigen::Index rows = 1;
    for (int i = 0; i < bond; ++i)
        rows *= local_dim;
    if (v.size() % rows != 0)
        throw Error(ErrorKind::invalid_dimension, "vector length does not match L and d");
    const Eigen::Index cols = v.size() / rows;
    const double nrm = v.norm();
    if (!(nrm > 0.0))
        throw Error(ErrorKind::degenerate_state, "zero vector");
    // Row-major reshape: amplitude index = row * cols + col.
    Eigen::Map<const ComplexMatrix> transposed(v.data(), cols, rows);
    const RealVector s = singular_values(transposed / nrm);
    SchmidtSpectrum out;
    out.bond = bond;
    out.values.assign(s.data(), s.data() + s.size());
    return out;
}

} // namespace sigens

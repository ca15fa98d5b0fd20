#pragma once

#include <cstddef>
#include <vector>

#include "sigens/linalg.hpp"
#include "sigens/random.hpp"
#include "sigens/types.hpp"

namespace sigens {

// One site of a matrix product state: d blocks A^sigma of shape m_left x m_right.
//
// Two matricizations are used throughout:
//   stacked_rows  (d*m_left) x m_right, block sigma at rows [sigma*m_left, ...)
//   stacked_cols  m_left x (d*m_right), block sigma at cols [sigma*m_right, ...)
// Left normalization is stacked_rows()^dag stacked_rows() = 1, right
// normalization is stacked_cols() stacked_cols()^dag = 1.
class SiteTensor {
public:
    SiteTensor() = default;
    SiteTensor(int local_dim, Eigen::Index left, Eigen::Index right);
    explicit SiteTensor(std::vector<ComplexMatrix> blocks);

    static SiteTensor from_stacked_rows(const ComplexMatrix& m, int local_dim);
    static SiteTensor from_stacked_cols(const ComplexMatrix& m, int local_dim);

    int local_dim() const { return static_cast<int>(blocks_.size()); }
    Eigen::Index left_dim() const { return blocks_.empty() ? 0 : blocks_.front().rows(); }
    Eigen::Index right_dim() const { return blocks_.empty() ? 0 : blocks_.front().cols(); }

    const ComplexMatrix& block(int sigma) const { return blocks_[static_cast<std::size_t>(sigma)]; }
    ComplexMatrix& block(int sigma) { return blocks_[static_cast<std::size_t>(sigma)]; }
    const std::vector<ComplexMatrix>& blocks() const { return blocks_; }

    ComplexMatrix stacked_rows() const;
    ComplexMatrix stacked_cols() const;

    /// Replace every block A^sigma by lhs * A^sigma.
    void apply_left(const ComplexMatrix& lhs);
    /// Replace every block A^sigma by A^sigma * rhs.
    void apply_right(const ComplexMatrix& rhs);

    /// Max-abs deviation of sum_sigma A^dag A from the identity.
    double left_normalization_error() const;
    /// Max-abs deviation of sum_sigma A A^dag from the identity.
    double right_normalization_error() const;

private:
    std::vector<ComplexMatrix> blocks_;
};

enum class CanonicalForm { none, left, right, mixed };

/// Finite open-boundary MPS. For CanonicalForm::mixed, `center` is the site
/// carrying the orthogonality center (sites left of it are left-normalized,
/// sites right of it right-normalized).
struct MatrixProductState {
    std::vector<SiteTensor> sites;
    CanonicalForm canonical = CanonicalForm::none;
    int center = 0;

    int length() const { return static_cast<int>(sites.size()); }
    int local_dim() const { return sites.empty() ? 0 : sites.front().local_dim(); }
    /// m_0 ... m_L.
    std::vector<Eigen::Index> bond_dims() const;

    /// Checks site shapes and boundary dimensions; throws invalid_input.
    void validate() const;
};

/// |0...0> as a bond-dimension-1 MPS.
MatrixProductState product_state(int length, int local_dim);

/// MPS with i.i.d. complex Gaussian entries and bonds min(d^l, d^(L-l), chi).
MatrixProductState random_mps(int length, int local_dim, int chi, RandomStream& rng);

/// Tensor product |a>|b>: sites of b appended after those of a.
MatrixProductState concatenate(const MatrixProductState& a, const MatrixProductState& b);

inline constexpr int kMaxStatevectorSites = 14;

/// Dense amplitudes, site 0 most significant. Throws capacity for L > 14.
ComplexVector statevector(const MatrixProductState& psi);

std::complex<double> overlap(const MatrixProductState& bra, const MatrixProductState& ket);
double norm(const MatrixProductState& psi);

/// QR sweep left to right; the result is unit norm and left-canonical.
/// Throws degenerate_state for a zero-norm input.
MatrixProductState canonicalize_left(const MatrixProductState& psi);
/// QR sweep right to left; unit norm and right-canonical.
MatrixProductState canonicalize_right(const MatrixProductState& psi);

/// Schmidt values of the normalized state at the cut after `bond` sites,
/// 1 <= bond <= L-1. The input is not modified.
SchmidtSpectrum extract_spectrum(const MatrixProductState& psi, int bond);
/// Spectra at every bond 1 ... L-1 from a single canonicalization pass.
std::vector<SchmidtSpectrum> extract_all_spectra(const MatrixProductState& psi);

/// Schmidt values of a dense state vector at the cut after `bond` sites.
SchmidtSpectrum dense_spectrum(const ComplexVector& v, int length, int local_dim, int bond);

} // namespace sigens

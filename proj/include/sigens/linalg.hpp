#pragma once

#include <Eigen/Dense>

#include "sigens/random.hpp"

namespace sigens {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Thin SVD a = u * diag(s) * vh with s descending.
///
/// Gauge: the largest-magnitude entry of every column of u is real and
/// positive (first such entry on ties), so results do not depend on the
/// backend's phase conventions.
struct Svd {
    ComplexMatrix u;
    RealVector s;
    ComplexMatrix vh;
};

Svd thin_svd(const ComplexMatrix& a);
RealVector singular_values(const ComplexMatrix& a);

/// rows x cols matrix with orthonormal columns drawn from the Haar measure
/// (QR of a complex Ginibre matrix with the R-diagonal phases divided out).
ComplexMatrix haar_random_isometry(Eigen::Index rows, Eigen::Index cols, RandomStream& rng);

} // namespace sigens

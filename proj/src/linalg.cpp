#include "sigens/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <lapacke.h>

#include "sigens/types.hpp"

namespace sigens {

namespace {

lapack_complex_double* as_lapack(std::complex<double>* p)
{
    return reinterpret_cast<lapack_complex_double*>(p);
}

void fix_gauge(Svd& out)
{
    for (Eigen::Index k = 0; k < out.u.cols(); ++k) {
        Eigen::Index best = 0;
        double best_abs = -1.0;
        for (Eigen::Index i = 0; i < out.u.rows(); ++i) {
            const double a = std::abs(out.u(i, k));
            if (a > best_abs) {
                best_abs = a;
                best = i;
            }
        }
        if (best_abs <= 0.0)
            continue;
        const std::complex<double> phase = std::conj(out.u(best, k)) / best_abs;
        out.u.col(k) *= phase;
        out.vh.row(k) *= std::conj(phase);
    }
}

} // namespace

Svd thin_svd(const ComplexMatrix& a)
{
    const lapack_int m = static_cast<lapack_int>(a.rows());
    const lapack_int n = static_cast<lapack_int>(a.cols());
    const lapack_int k = std::min(m, n);
    if (k == 0)
        throw Error(ErrorKind::invalid_dimension, "svd of an empty matrix");

    Svd out;
    out.u.resize(m, k);
    out.s.resize(k);
    out.vh.resize(k, n);

    ComplexMatrix work = a;
    lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n, as_lapack(work.data()), m,
                                     out.s.data(), as_lapack(out.u.data()), m,
                                     as_lapack(out.vh.data()), k);
    if (info > 0) {
        // divide and conquer failed to converge; fall back to QR iteration
        work = a;
        RealVector superb(std::max<lapack_int>(k - 1, 1));
        info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'S', 'S', m, n, as_lapack(work.data()), m,
                              out.s.data(), as_lapack(out.u.data()), m,
                              as_lapack(out.vh.data()), k, superb.data());
    }
    if (info != 0)
        throw Error(ErrorKind::domain, "svd failed, lapack info " + std::to_string(info));
    fix_gauge(out);
    return out;
}

RealVector singular_values(const ComplexMatrix& a)
{
    const lapack_int m = static_cast<lapack_int>(a.rows());
    const lapack_int n = static_cast<lapack_int>(a.cols());
    const lapack_int k = std::min(m, n);
    if (k == 0)
        throw Error(ErrorKind::invalid_dimension, "svd of an empty matrix");
    ComplexMatrix work = a;
    RealVector s(k);
    lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, as_lapack(work.data()), m,
                                     s.data(), nullptr, 1, nullptr, 1);
    if (info != 0)
        throw Error(ErrorKind::domain, "singular values failed, lapack info " + std::to_string(info));
    return s;
}

ComplexMatrix haar_random_isometry(Eigen::Index rows, Eigen::Index cols, RandomStream& rng)
{
    if (cols < 1 || rows < cols)
        throw Error(ErrorKind::invalid_dimension,
                    "isometry needs rows >= cols >= 1, got " + std::to_string(rows) + "x" + std::to_string(cols));
    ComplexMatrix g(rows, cols);
    const double scale = std::sqrt(0.5);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = rng.standard_normal();
            const double im = rng.standard_normal();
            g(i, j) = {scale * re, scale * im};
        }
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, cols);
    const ComplexMatrix& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < cols; ++j) {
        const std::complex<double> d = r(j, j);
        const double mag = std::abs(d);
        if (mag > 0.0)
            q.col(j) *= d / mag;
    }
    return q;
}

} // namespace sigens

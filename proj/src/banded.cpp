#include "sqz/banded.hpp"

#include <algorithm>
#include <cmath>

#include <lapacke.h>

#include "sqz/errors.hpp"

namespace sqz {

namespace {
lapack_complex_double* as_lapack(Complex* p) { return reinterpret_cast<lapack_complex_double*>(p); }
const lapack_complex_double* as_lapack(const Complex* p) { return reinterpret_cast<const lapack_complex_double*>(p); }
} // namespace

BandedMatrix::BandedMatrix(Index n, Index kl, Index ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1)
{
    const double bytes = static_cast<double>(ldab_) * static_cast<double>(n_) * sizeof(Complex);
    if (bytes > 3.5e9) {
        throw Error(ErrorKind::ResourceLimit, "banded generator block would need more than 3.5 GB");
    }
    ab_.assign(static_cast<std::size_t>(ldab_ * n_), Complex(0.0, 0.0));
}

void BandedMatrix::clear_row(Index i)
{
    const Index lo = std::max<Index>(0, i - kl_);
    const Index hi = std::min<Index>(n_ - 1, i + ku_);
    for (Index j = lo; j <= hi; ++j) at(i, j) = 0.0;
}

double BandedMatrix::norm_1() const
{
    double best = 0.0;
    for (Index j = 0; j < n_; ++j) {
        const Index lo = std::max<Index>(0, j - ku_);
        const Index hi = std::min<Index>(n_ - 1, j + kl_);
        double col = 0.0;
        for (Index i = lo; i <= hi; ++i) col += std::abs(at(i, j));
        best = std::max(best, col);
    }
    return best;
}

BandedLU::BandedLU(BandedMatrix m)
    : m_(std::move(m)), pivots_(static_cast<std::size_t>(m_.n_))
{
    anorm_ = m_.norm_1();
    const auto n = static_cast<lapack_int>(m_.n_);
    const lapack_int info = LAPACKE_zgbtrf(LAPACK_COL_MAJOR, n, n, static_cast<lapack_int>(m_.kl_),
                                           static_cast<lapack_int>(m_.ku_), as_lapack(m_.ab_.data()),
                                           static_cast<lapack_int>(m_.ldab_), pivots_.data());
    if (info < 0) throw Error(ErrorKind::Convergence, "zgbtrf rejected its arguments");
    singular_ = info > 0;
}

double BandedLU::rcond() const
{
    if (singular_) return 0.0;
    double rc = 0.0;
    const auto n = static_cast<lapack_int>(m_.n_);
    LAPACKE_zgbcon(LAPACK_COL_MAJOR, '1', n, static_cast<lapack_int>(m_.kl_), static_cast<lapack_int>(m_.ku_),
                   as_lapack(m_.ab_.data()), static_cast<lapack_int>(m_.ldab_), pivots_.data(), anorm_, &rc);
    return rc;
}

Vector BandedLU::solve(const Vector& rhs) const
{
    if (singular_) throw Error(ErrorKind::Convergence, "solve with a singular banded factorization");
    if (rhs.size() != m_.n_) throw Error(ErrorKind::DimensionMismatch, "banded solve: rhs size mismatch");
    Vector x = rhs;
    const auto n = static_cast<lapack_int>(m_.n_);
    const lapack_int info = LAPACKE_zgbtrs(LAPACK_COL_MAJOR, 'N', n, static_cast<lapack_int>(m_.kl_),
                                           static_cast<lapack_int>(m_.ku_), 1, as_lapack(m_.ab_.data()),
                                           static_cast<lapack_int>(m_.ldab_), pivots_.data(), as_lapack(x.data()), n);
    if (info != 0) throw Error(ErrorKind::Convergence, "zgbtrs failed");
    return x;
}

} // namespace sqz

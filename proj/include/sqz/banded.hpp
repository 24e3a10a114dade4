#pragma once

// Band-storage complex matrix and its LU factorization (LAPACK zgbtrf/zgbtrs).

#include <vector>

#include "sqz/operators.hpp"

namespace sqz {

class BandedMatrix {
public:
    BandedMatrix(Index n, Index kl, Index ku);

    Index size() const noexcept { return n_; }
    Index lower() const noexcept { return kl_; }
    Index upper() const noexcept { return ku_; }

    bool in_band(Index i, Index j) const noexcept { return j - i <= ku_ && i - j <= kl_; }
    /// Entry (i, j); must lie within the band.
    Complex& at(Index i, Index j) { return ab_[static_cast<std::size_t>(kl_ + ku_ + i - j + j * ldab_)]; }
    Complex at(Index i, Index j) const { return ab_[static_cast<std::size_t>(kl_ + ku_ + i - j + j * ldab_)]; }

    /// Zero row i inside the band.
    void clear_row(Index i);
    double norm_1() const;

private:
    friend class BandedLU;
    Index n_, kl_, ku_, ldab_;
    std::vector<Complex> ab_;
};

class BandedLU {
public:
    /// Factorizes in place. A zero pivot is recorded, not thrown; check singular().
    explicit BandedLU(BandedMatrix m);

    bool singular() const noexcept { return singular_; }
    /// Reciprocal 1-norm condition estimate (zgbcon); 0 when singular.
    double rcond() const;
    Vector solve(const Vector& rhs) const;

private:
    BandedMatrix m_;
    std::vector<int> pivots_;
    double anorm_ = 0.0;
    bool singular_ = false;
};

} // namespace sqz

#pragma once

// Lindblad generator on column-stacked density operators:
//   d rho / dt = -i [H, rho] + sum_k (L_k rho L_k^dag - {L_k^dag L_k, rho} / 2)
//
// The generator is held as its list of nonzero entries. Entries split into
// connected blocks (parity sectors for the models here); every solver works
// on one block at a time, factorized in band storage.

#include <vector>

#include "sqz/banded.hpp"
#include "sqz/operators.hpp"

namespace sqz {

struct SuperEntry {
    Index row;
    Index col;
    Complex value;
};

class Liouvillian {
public:
    /// Throws DimensionMismatch when H and the collapse operators differ in size.
    Liouvillian(Operator hamiltonian, std::vector<Operator> collapse);

    Index hilbert_dim() const noexcept { return d_; }
    Index dim() const noexcept { return d_ * d_; }

    const Operator& hamiltonian() const noexcept { return h_; }
    const std::vector<Operator>& collapse() const noexcept { return ls_; }

    /// Nonzero entries, sorted by (row, col), duplicates merged.
    const std::vector<SuperEntry>& entries() const noexcept { return entries_; }

    /// Full dense generator. Refuses above 6000 x 6000.
    Matrix dense() const;
    Vector apply(const Vector& x) const;
    Matrix apply(const Matrix& rho) const;
    /// Max absolute column sum.
    double norm_1() const noexcept { return norm_1_; }

    // Block structure.
    int block_count() const noexcept { return static_cast<int>(blocks_.size()); }
    const std::vector<Index>& block(int b) const { return blocks_[static_cast<std::size_t>(b)]; }
    int block_of(Index k) const { return block_id_[static_cast<std::size_t>(k)]; }
    Index local_index(Index k) const { return local_[static_cast<std::size_t>(k)]; }
    /// Blocks on which x has support (|x_k| > 0).
    std::vector<int> support_blocks(const Vector& x) const;

    /// (L - shift) restricted to block b, in band storage.
    BandedMatrix banded_block(int b, Complex shift = Complex(0.0, 0.0)) const;
    /// Dense (L - shift) restricted to block b.
    Matrix dense_block(int b, Complex shift = Complex(0.0, 0.0)) const;

    Vector gather(int b, const Vector& full) const;
    void scatter(int b, const Vector& local, Vector& full) const;

    static Vector vec(const Matrix& m);
    static Matrix unvec(const Vector& v, Index d);
    /// Row functional f with f . vec(X) = Tr[A X].
    static Vector trace_functional(const Matrix& a);

private:
    void build_entries();
    void build_blocks();

    Index d_;
    Operator h_;
    std::vector<Operator> ls_;
    std::vector<SuperEntry> entries_;
    std::vector<Index> row_start_;  // CSR offsets into entries_
    double norm_1_ = 0.0;

    std::vector<std::vector<Index>> blocks_;
    std::vector<int> block_id_;
    std::vector<Index> local_;
    std::vector<std::vector<Index>> block_entries_;  // entry ids per block
};

} // namespace sqz

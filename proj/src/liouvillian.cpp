#include "sqz/liouvillian.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "sqz/errors.hpp"

namespace sqz {

namespace {

struct NonZero {
    Index i;
    Index j;
    Complex v;
};

std::vector<NonZero> nonzeros(const Matrix& m)
{
    std::vector<NonZero> out;
    for (Index j = 0; j < m.cols(); ++j) {
        for (Index i = 0; i < m.rows(); ++i) {
            if (m(i, j) != Complex(0.0, 0.0)) out.push_back({i, j, m(i, j)});
        }
    }
    return out;
}

class DisjointSets {
public:
    explicit DisjointSets(Index n) : parent_(static_cast<std::size_t>(n))
    {
        std::iota(parent_.begin(), parent_.end(), Index{0});
    }
    Index find(Index x)
    {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            auto& p = parent_[static_cast<std::size_t>(x)];
            p = parent_[static_cast<std::size_t>(p)];
            x = p;
        }
        return x;
    }
    void unite(Index a, Index b)
    {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) std::swap(a, b);
        parent_[static_cast<std::size_t>(a)] = b;
    }

private:
    std::vector<Index> parent_;
};

} // namespace

Liouvillian::Liouvillian(Operator hamiltonian, std::vector<Operator> collapse)
    : d_(hamiltonian.dim()), h_(std::move(hamiltonian)), ls_(std::move(collapse))
{
    for (const auto& l : ls_) {
        if (l.dim() != d_) {
            std::ostringstream msg;
            msg << "collapse operator '" << l.label() << "' has dimension " << l.dim() << ", Hamiltonian has " << d_;
            throw Error(ErrorKind::DimensionMismatch, msg.str());
        }
    }
    build_entries();
    build_blocks();
}

void Liouvillian::build_entries()
{
    const Index d = d_;
    const Complex I(0.0, 1.0);
    std::vector<SuperEntry> raw;

    Matrix k_sum = Matrix::Zero(d, d);
    for (const auto& l : ls_) k_sum += l.matrix().adjoint() * l.matrix();

    // -i H rho + i rho H
    for (const auto& nz : nonzeros(h_.matrix())) {
        for (Index j = 0; j < d; ++j) raw.push_back({nz.i + d * j, nz.j + d * j, -I * nz.v});
        for (Index i = 0; i < d; ++i) raw.push_back({i + d * nz.j, i + d * nz.i, I * nz.v});
    }
    // -K rho / 2 - rho K / 2
    for (const auto& nz : nonzeros(k_sum)) {
        for (Index j = 0; j < d; ++j) raw.push_back({nz.i + d * j, nz.j + d * j, -0.5 * nz.v});
        for (Index i = 0; i < d; ++i) raw.push_back({i + d * nz.j, i + d * nz.i, -0.5 * nz.v});
    }
    // L rho L^dag
    for (const auto& l : ls_) {
        const auto nzl = nonzeros(l.matrix());
        for (const auto& left : nzl) {
            for (const auto& right : nzl) {
                raw.push_back({left.i + d * right.i, left.j + d * right.j, left.v * std::conj(right.v)});
            }
        }
    }

    std::sort(raw.begin(), raw.end(), [](const SuperEntry& a, const SuperEntry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    entries_.clear();
    for (const auto& e : raw) {
        if (!entries_.empty() && entries_.back().row == e.row && entries_.back().col == e.col) {
            entries_.back().value += e.value;
        } else {
            entries_.push_back(e);
        }
    }
    entries_.erase(std::remove_if(entries_.begin(), entries_.end(),
                                  [](const SuperEntry& e) { return e.value == Complex(0.0, 0.0); }),
                   entries_.end());

    row_start_.assign(static_cast<std::size_t>(dim() + 1), 0);
    for (const auto& e : entries_) ++row_start_[static_cast<std::size_t>(e.row + 1)];
    std::partial_sum(row_start_.begin(), row_start_.end(), row_start_.begin());

    std::vector<double> col_sum(static_cast<std::size_t>(dim()), 0.0);
    for (const auto& e : entries_) col_sum[static_cast<std::size_t>(e.col)] += std::abs(e.value);
    norm_1_ = col_sum.empty() ? 0.0 : *std::max_element(col_sum.begin(), col_sum.end());
}

void Liouvillian::build_blocks()
{
    const Index n = dim();
    DisjointSets sets(n);
    for (const auto& e : entries_) sets.unite(e.row, e.col);

    block_id_.assign(static_cast<std::size_t>(n), -1);
    local_.assign(static_cast<std::size_t>(n), -1);
    blocks_.clear();
    std::vector<int> root_to_block(static_cast<std::size_t>(n), -1);
    for (Index k = 0; k < n; ++k) {
        const Index root = sets.find(k);
        int& b = root_to_block[static_cast<std::size_t>(root)];
        if (b < 0) {
            b = static_cast<int>(blocks_.size());
            blocks_.emplace_back();
        }
        block_id_[static_cast<std::size_t>(k)] = b;
        local_[static_cast<std::size_t>(k)] = static_cast<Index>(blocks_[static_cast<std::size_t>(b)].size());
        blocks_[static_cast<std::size_t>(b)].push_back(k);
    }
    block_entries_.assign(blocks_.size(), {});
    for (std::size_t id = 0; id < entries_.size(); ++id) {
        block_entries_[static_cast<std::size_t>(block_of(entries_[id].row))].push_back(static_cast<Index>(id));
    }
}

Matrix Liouvillian::dense() const
{
    if (dim() > 6000) {
        throw Error(ErrorKind::ResourceLimit, "dense Liouvillian above 6000 x 6000 refused; use the block solvers");
    }
    Matrix out = Matrix::Zero(dim(), dim());
    for (const auto& e : entries_) out(e.row, e.col) = e.value;
    return out;
}

Vector Liouvillian::apply(const Vector& x) const
{
    if (x.size() != dim()) throw Error(ErrorKind::DimensionMismatch, "Liouvillian::apply: size mismatch");
    Vector y = Vector::Zero(dim());
    for (Index r = 0; r < dim(); ++r) {
        Complex acc(0.0, 0.0);
        for (Index id = row_start_[static_cast<std::size_t>(r)]; id < row_start_[static_cast<std::size_t>(r + 1)]; ++id) {
            const auto& e = entries_[static_cast<std::size_t>(id)];
            acc += e.value * x(e.col);
        }
        y(r) = acc;
    }
    return y;
}

Matrix Liouvillian::apply(const Matrix& rho) const
{
    return unvec(apply(vec(rho)), d_);
}

std::vector<int> Liouvillian::support_blocks(const Vector& x) const
{
    std::vector<char> hit(blocks_.size(), 0);
    for (Index k = 0; k < x.size(); ++k) {
        if (x(k) != Complex(0.0, 0.0)) hit[static_cast<std::size_t>(block_of(k))] = 1;
    }
    std::vector<int> out;
    for (std::size_t b = 0; b < hit.size(); ++b) {
        if (hit[b]) out.push_back(static_cast<int>(b));
    }
    return out;
}

BandedMatrix Liouvillian::banded_block(int b, Complex shift) const
{
    const auto& ids = block_entries_[static_cast<std::size_t>(b)];
    Index kl = 0;
    Index ku = 0;
    for (const Index id : ids) {
        const auto& e = entries_[static_cast<std::size_t>(id)];
        const Index off = local_index(e.row) - local_index(e.col);
        kl = std::max(kl, off);
        ku = std::max(ku, -off);
    }
    const Index n = static_cast<Index>(block(b).size());
    BandedMatrix out(n, kl, ku);
    for (const Index id : ids) {
        const auto& e = entries_[static_cast<std::size_t>(id)];
        out.at(local_index(e.row), local_index(e.col)) += e.value;
    }
    if (shift != Complex(0.0, 0.0)) {
        for (Index i = 0; i < n; ++i) out.at(i, i) -= shift;
    }
    return out;
}

Matrix Liouvillian::dense_block(int b, Complex shift) const
{
    const Index n = static_cast<Index>(block(b).size());
    if (n > 6000) throw Error(ErrorKind::ResourceLimit, "dense block above 6000 x 6000 refused");
    Matrix out = Matrix::Zero(n, n);
    for (const Index id : block_entries_[static_cast<std::size_t>(b)]) {
        const auto& e = entries_[static_cast<std::size_t>(id)];
        out(local_index(e.row), local_index(e.col)) += e.value;
    }
    if (shift != Complex(0.0, 0.0)) out.diagonal().array() -= shift;
    return out;
}

Vector Liouvillian::gather(int b, const Vector& full) const
{
    const auto& idx = block(b);
    Vector out(static_cast<Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Index>(i)) = full(idx[i]);
    return out;
}

void Liouvillian::scatter(int b, const Vector& local, Vector& full) const
{
    const auto& idx = block(b);
    for (std::size_t i = 0; i < idx.size(); ++i) full(idx[i]) = local(static_cast<Index>(i));
}

Vector Liouvillian::vec(const Matrix& m)
{
    return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix Liouvillian::unvec(const Vector& v, Index d)
{
    return Eigen::Map<const Matrix>(v.data(), d, d);
}

Vector Liouvillian::trace_functional(const Matrix& a)
{
    return vec(a.transpose());
}

} // namespace sqz

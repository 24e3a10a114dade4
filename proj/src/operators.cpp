#include "sqz/operators.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "sqz/errors.hpp"

namespace sqz {

Operator::Operator(Matrix entries, std::string label)
    : m_(std::move(entries)), label_(std::move(label))
{
    if (m_.rows() != m_.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "operator matrix must be square");
    }
}

Operator Operator::adjoint() const
{
    return Operator(m_.adjoint(), label_ + "^dag");
}

Operator Operator::relabeled(std::string label) const
{
    return Operator(m_, std::move(label));
}

double Operator::hermiticity_defect() const
{
    if (m_.size() == 0) return 0.0;
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

namespace {

void require_same_dim(const Operator& a, const Operator& b, const char* what)
{
    if (a.dim() != b.dim()) {
        std::ostringstream msg;
        msg << what << ": dimension mismatch (" << a.dim() << " vs " << b.dim() << ")";
        throw Error(ErrorKind::DimensionMismatch, msg.str());
    }
}

} // namespace

Operator operator+(const Operator& a, const Operator& b)
{
    require_same_dim(a, b, "operator sum");
    return Operator(a.m_ + b.m_, a.label_ + "+" + b.label_);
}

Operator operator-(const Operator& a, const Operator& b)
{
    require_same_dim(a, b, "operator difference");
    return Operator(a.m_ - b.m_, a.label_ + "-" + b.label_);
}

Operator operator*(const Operator& a, const Operator& b)
{
    require_same_dim(a, b, "operator product");
    return Operator(a.m_ * b.m_, a.label_ + "*" + b.label_);
}

Operator operator*(Complex s, const Operator& a)
{
    return Operator(s * a.m_, a.label_);
}

HilbertLayout HilbertLayout::composite(int n_fock)
{
    return HilbertLayout{n_fock, 2, TensorOrdering::ResonatorSpin};
}

HilbertLayout HilbertLayout::resonator_only(int n_fock)
{
    return HilbertLayout{n_fock, 1, TensorOrdering::ResonatorSpin};
}

Operator HilbertLayout::resonator(const Operator& op) const
{
    if (op.dim() != n_fock) {
        throw Error(ErrorKind::DimensionMismatch, "resonator operator does not match n_fock");
    }
    if (!has_spin()) return op;
    return tensor(op, identity(2)).relabeled(op.label());
}

Operator HilbertLayout::spin(const Operator& op) const
{
    if (!has_spin()) {
        throw Error(ErrorKind::UnsupportedCombination, "layout has no spin factor");
    }
    if (op.dim() != 2) {
        throw Error(ErrorKind::DimensionMismatch, "spin operator must be 2x2");
    }
    return tensor(identity(n_fock), op).relabeled(op.label());
}

Index HilbertLayout::basis_index(int n, int spin_index) const
{
    return static_cast<Index>(n) * spin_dim + spin_index;
}

std::string HilbertLayout::describe() const
{
    std::ostringstream out;
    out << "N=" << n_fock << ";spin_dim=" << spin_dim << ";ordering=resonator(x)spin";
    return out.str();
}

LadderPair fock_ladder(int n_fock)
{
    if (n_fock < 2) {
        throw Error(ErrorKind::InvalidTruncation, "n_fock must be >= 2, got " + std::to_string(n_fock));
    }
    Matrix a = Matrix::Zero(n_fock, n_fock);
    for (int k = 1; k < n_fock; ++k) {
        a(k - 1, k) = std::sqrt(static_cast<double>(k));
    }
    Matrix a_dag = a.adjoint();
    return {Operator(std::move(a), "a"), Operator(std::move(a_dag), "a^dag")};
}

Operator number_operator(int n_fock)
{
    if (n_fock < 2) {
        throw Error(ErrorKind::InvalidTruncation, "n_fock must be >= 2, got " + std::to_string(n_fock));
    }
    Matrix n = Matrix::Zero(n_fock, n_fock);
    for (int k = 0; k < n_fock; ++k) n(k, k) = static_cast<double>(k);
    return Operator(std::move(n), "n");
}

Operator identity(Index dim, std::string label)
{
    return Operator(Matrix::Identity(dim, dim), std::move(label));
}

PauliSet pauli_set()
{
    Matrix x(2, 2), z(2, 2), plus(2, 2), minus(2, 2);
    x << 0, 1, 1, 0;
    z << 1, 0, 0, -1;
    plus << 0, 1, 0, 0;  // |up><down|
    minus << 0, 0, 1, 0; // |down><up|
    return {Operator(x, "sx"), Operator(z, "sz"), Operator(plus, "s+"), Operator(minus, "s-")};
}

Operator tensor(const Operator& a, const Operator& b)
{
    const Index na = a.dim();
    const Index nb = b.dim();
    Matrix out(na * nb, na * nb);
    for (Index i = 0; i < na; ++i) {
        for (Index j = 0; j < na; ++j) {
            out.block(i * nb, j * nb, nb, nb) = a.matrix()(i, j) * b.matrix();
        }
    }
    return Operator(std::move(out), a.label() + "(x)" + b.label());
}

LadderPair bogoliubov_pair(const Operator& a, const Operator& a_dag, double r)
{
    if (a.dim() != a_dag.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "bogoliubov_pair: a and a^dag differ in size");
    }
    if (r == 0.0) {
        return {a.relabeled("gamma"), a_dag.relabeled("gamma^dag")};
    }
    const double c = std::cosh(r);
    const double s = std::sinh(r);
    Matrix gamma = c * a.matrix() - s * a_dag.matrix();
    Matrix gamma_dag = c * a_dag.matrix() - s * a.matrix();
    return {Operator(std::move(gamma), "gamma"), Operator(std::move(gamma_dag), "gamma^dag")};
}

} // namespace sqz

#pragma once

// Truncated bosonic and spin operators on the resonator (x) spin space.

#include <complex>
#include <string>

#include <Eigen/Dense>

namespace sqz {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Dense square operator on a truncated Hilbert space. Immutable value type.
class Operator {
public:
    Operator() = default;
    explicit Operator(Matrix entries, std::string label = {});

    Index dim() const noexcept { return m_.rows(); }
    const Matrix& matrix() const noexcept { return m_; }
    const std::string& label() const noexcept { return label_; }

    Operator adjoint() const;
    Operator relabeled(std::string label) const;
    Complex trace() const { return m_.trace(); }

    /// max |M - M^dagger| over all entries.
    double hermiticity_defect() const;
    bool is_zero() const { return m_.cwiseAbs().maxCoeff() == 0.0; }

    friend Operator operator+(const Operator& a, const Operator& b);
    friend Operator operator-(const Operator& a, const Operator& b);
    friend Operator operator*(const Operator& a, const Operator& b);
    friend Operator operator*(Complex s, const Operator& a);
    friend Operator operator*(double s, const Operator& a) { return Complex(s, 0.0) * a; }

private:
    Matrix m_;
    std::string label_;
};

enum class TensorOrdering { ResonatorSpin };

/// Layout of the composite space. Ordering is fixed to resonator (x) spin.
/// spin_dim == 1 drops the spin factor entirely; it is used for studies of the
/// bare resonator (g = 0), where the spin would only add a degenerate block.
struct HilbertLayout {
    int n_fock = 30;
    int spin_dim = 2;
    TensorOrdering ordering = TensorOrdering::ResonatorSpin;

    static HilbertLayout composite(int n_fock);
    static HilbertLayout resonator_only(int n_fock);

    int dim() const noexcept { return n_fock * spin_dim; }
    bool has_spin() const noexcept { return spin_dim == 2; }

    /// Lift a resonator operator (n_fock x n_fock) into the layout.
    Operator resonator(const Operator& op) const;
    /// Lift a spin operator (2 x 2); requires has_spin().
    Operator spin(const Operator& op) const;
    /// Index of |n> (x) |spin_index> in the composite basis.
    Index basis_index(int n, int spin_index = 0) const;

    std::string describe() const;
};

struct LadderPair {
    Operator lower;
    Operator raise;
};

/// a and a^dagger on Fock levels 0..n_fock-1. Throws InvalidTruncation for n_fock < 2.
LadderPair fock_ladder(int n_fock);

/// a^dagger a with diagonal exactly (0, 1, ..., n_fock-1).
Operator number_operator(int n_fock);

Operator identity(Index dim, std::string label = "1");

/// Spin basis: index 0 = up (sigma_z = +1), index 1 = down.
struct PauliSet {
    Operator x;
    Operator z;
    Operator plus;
    Operator minus;
};

PauliSet pauli_set();

/// Kronecker product A (x) B.
Operator tensor(const Operator& a, const Operator& b);

/// gamma = a cosh r - a^dagger sinh r and its adjoint. r = 0 returns (a, a^dagger).
LadderPair bogoliubov_pair(const Operator& a, const Operator& a_dag, double r);

} // namespace sqz

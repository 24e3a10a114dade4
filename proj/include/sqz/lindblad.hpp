#pragma once

// Open-system dynamics on top of a Liouvillian: steady state, propagation,
// two-time correlators and power spectra.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sqz/liouvillian.hpp"

namespace sqz {

struct DensityOperator {
    Matrix matrix;

    Index dim() const noexcept { return matrix.rows(); }
    /// Tr[op rho]
    Complex expect(const Operator& op) const;
    Complex expect(const Matrix& op) const;
    double hermiticity_defect() const;
    double min_eigenvalue() const;
};

/// Steady state of a Liouvillian, solved as the null vector of the block that
/// holds the populations with one row pinned. The factorization is kept so
/// that later traceless solves (integrated correlators) reuse it.
///
/// Holds a reference to the Liouvillian; it must outlive this object.
class SteadyState {
public:
    /// Throws DegenerateSteadyState when the kernel is not one-dimensional,
    /// Convergence when the residual exceeds 1e-8 (relative).
    explicit SteadyState(const Liouvillian& liou);
    ~SteadyState();
    SteadyState(SteadyState&&) noexcept;
    SteadyState& operator=(SteadyState&&) noexcept;

    const Liouvillian& liouvillian() const noexcept { return *liou_; }
    const DensityOperator& rho() const noexcept { return rho_; }
    int block() const noexcept { return block_; }
    /// ||L vec(rho)|| / (||L||_1 ||vec(rho)||)
    double residual() const noexcept { return residual_; }
    double rcond() const noexcept { return rcond_; }

    /// x solving L x = -b with Tr x = 0, for traceless b supported on the
    /// steady block (given and returned in local block coordinates).
    Vector solve_traceless(const Vector& b_local) const;

private:
    struct Factor;
    const Liouvillian* liou_;
    int block_ = 0;
    Index pin_ = 0;
    std::unique_ptr<Factor> lu_;
    DensityOperator rho_;
    double residual_ = 0.0;
    double rcond_ = 0.0;
};

DensityOperator steady_state(const Liouvillian& liou);

/// exp(L tau) vec(X), reshaped. Dense per-block exponential; blocks above
/// 2500 states are refused with ResourceLimit.
Matrix propagate(const Liouvillian& liou, const Matrix& x, double tau);

struct CorrelationSeries {
    std::vector<double> tau;
    std::vector<Complex> values;
    std::string a_label;
    std::string b_label;
};

/// Uniform grid 0, dt, ..., tau_max with the given number of points.
std::vector<double> uniform_grid(double start, double stop, int points);

/// values[k] = Tr[A exp(L tau_k)(B rho)]. With subtract_mean the stationary
/// part is removed, giving <A(tau) B> - <A><B>. tau must be uniform from 0.
CorrelationSeries two_time_correlation(const Liouvillian& liou, const Operator& a, const Operator& b,
                                       const DensityOperator& rho, const std::vector<double>& tau,
                                       bool subtract_mean = false);

/// Smallest nonzero |Re| eigenvalue over the blocks on which x is supported.
double slowest_decay_rate(const Liouvillian& liou, const Matrix& x);

/// 0 .. 12 / kappa_eff with `points` samples, kappa_eff from slowest_decay_rate of B rho.
std::vector<double> default_tau_grid(const Liouvillian& liou, const Operator& b, const DensityOperator& rho,
                                     int points = 4096);

struct Spectrum {
    std::vector<double> omega;
    std::vector<double> values;
    std::string target;
};

/// S(w) = 2 Re int_0^inf C(tau) e^{-i w tau} dtau by the trapezoid rule.
/// Throws GridTooShort if |C| has not fallen below 1e-6 |C(0)| at the end.
Spectrum power_spectrum(const CorrelationSeries& series, const std::vector<double>& omega);

/// C(tau) ~ sum_k c_k exp(mu_k tau); resolvent R(w) = sum_k c_k / (i w - mu_k).
struct PoleExpansion {
    std::vector<Complex> poles;
    std::vector<Complex> weights;
    int krylov_dim = 0;
    double achieved_tol = 0.0;

    Complex resolvent(double omega) const;
    double spectrum(double omega) const { return 2.0 * resolvent(omega).real(); }
    Complex correlation(double tau) const;
    Spectrum sample(const std::vector<double>& omega, std::string target = {}) const;
};

struct PoleOptions {
    double omega_center = 0.0;              // shift of the shift-invert Arnoldi
    double window_lo = 0.0;                 // convergence is checked on [lo, hi]
    double window_hi = 0.0;
    int probe_points = 201;
    int chunk = 20;
    int max_dim = 600;
    double tol = 1e-7;                      // relative to max |S| on the window
    bool subtract_mean = true;
};

/// Pole expansion of <A(tau) B> by shift-invert Arnoldi on each block of B rho.
/// Poles near i * omega_center are resolved first. Throws Convergence if the
/// window spectrum has not settled by max_dim.
PoleExpansion pole_expansion(const Liouvillian& liou, const Operator& a, const Operator& b,
                             const DensityOperator& rho, const PoleOptions& opt);

/// Exact resolvent value Tr[A (i w - L)^-1 (B rho)] by one banded solve per
/// block; reference path for checking the pole expansion.
Complex resolvent_direct(const Liouvillian& liou, const Operator& a, const Operator& b, const DensityOperator& rho,
                         double omega, bool subtract_mean = true);

/// int_0^inf (<A(tau) B> - <A><B>) dtau via traceless linear solves.
Complex integrated_correlation(const SteadyState& ss, const Operator& a, const Operator& b);

} // namespace sqz

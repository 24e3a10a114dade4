#pragma once

// Closed-form side: moment equations of the bare parametric resonator,
// their steady states and regression correlators, integrated photon noise,
// and the dispersive shift / Purcell / dephasing rates of the spin.

#include <string>
#include <vector>

#include "sqz/model.hpp"

namespace sqz {

enum class MomentOrder {
    Quadratic4,  // (n, a^2, a^dag^2, 1); for a coherent drive (n, a, a^dag, 1)
    Quartic9,    // (n, a^2, a^dag^2, a^dag^2 a^2, a^dag^3 a, a^dag a^3, a^4, a^dag^4, 1)
};

/// d<O>/dt = G <O> over a fixed operator basis. The last basis entry is 1.
struct MomentSystem {
    std::vector<std::string> basis;
    Matrix generator;
    ModelParams params;
    BathSpec bath;
    MomentOrder order = MomentOrder::Quadratic4;

    Index size() const noexcept { return generator.rows(); }
    Index unit_index() const noexcept { return generator.rows() - 1; }
    /// Position of a basis label; throws InvalidConfig when absent.
    Index index_of(const std::string& label) const;
};

/// Throws UnsupportedCombination for g != 0, for Quartic9 with a bath other
/// than vacuum, for the squeezed-vacuum reference bath, and for a coherent
/// drive with lambda != 0.
MomentSystem moment_generator(const ModelParams& p, const BathSpec& bath, MomentOrder order);

/// Solves G <O> = 0 with <1> = 1. Throws ParametricInstability when the
/// system is singular beyond the identity direction.
Vector steady_moments(const MomentSystem& sys);

/// The printed quartic steady vector, with D = 4 omega_r^2 + kappa^2 - 4 lambda^2.
Vector quartic_steady_closed(double omega_r, double lambda, double kappa);

/// tau -> <O_i(tau) seed(0)> for every basis entry O_i, from the regression
/// equations and the initial data <O_i seed> at tau = 0.
class ClosedCorrelator {
public:
    ClosedCorrelator(Matrix generator, Vector initial, std::vector<std::string> basis);

    const Vector& initial() const noexcept { return initial_; }
    const std::vector<std::string>& basis() const noexcept { return basis_; }
    bool diagonalized() const noexcept { return diagonalized_; }

    Vector at(double tau) const;
    Complex component(double tau, Index i) const { return at(tau)(i); }

private:
    Matrix g_;
    Vector initial_;
    std::vector<std::string> basis_;
    bool diagonalized_ = false;
    Vector eig_;
    Matrix w_;
    Vector coeff_;  // W^-1 initial
};

/// Correlator <O_i(tau) n(0)> for the Quadratic4 system; seed must be "n".
/// Quartic initial data for the squeezed case come from the Quartic9 steady
/// moments through the normal-ordering table.
ClosedCorrelator qrt_correlation_closed(const MomentSystem& sys, const std::string& seed = "n");

/// Connected equal-time block <dO_i dO_j> over (n, a^2, a^dag^2), squeezed vacuum.
Matrix connected_quadratic_block(const Vector& psi);

struct NoiseIntegrals {
    double eta = 0.0;        // int_{-inf}^{inf} <dn(tau) dn(0)> dtau, closed form
    double eta_tilde = 0.0;  // same for the effective occupation n~, exact linear solve
};

/// Closed forms for eta (squeezed vacuum, thermal, coherent) and eta~.
/// Throws DivergentNoise for kappa = 0.
NoiseIntegrals integrated_noise(const ModelParams& p, const BathSpec& bath);

/// eta~ by trapezoid integration of the closed regression correlator of n~
/// over [0, tau_max], tau_max = 40 / kappa by default.
double eta_tilde_trapezoid(const ModelParams& p, int points = 20001, double tau_max = 0.0);

/// Coefficients of n~ = c_n n + c_a (a^2 + a^dag^2) + const.
struct OccupationWeights {
    double c_n = 1.0;
    double c_a = 0.0;
};
OccupationWeights effective_occupation(const ModelParams& p);

struct AnalyticRates {
    double Delta = 0.0;  // omega_s - Omega_r
    double chi_r = 0.0;
    double chi_0 = 0.0;
    double C1 = 0.0;
    double C2 = 0.0;
    double dispersive_shift = 0.0;
    double gamma_purcell = 0.0;
    double gamma_phi_photon = 0.0;
    double gamma_total = 0.0;  // gamma_purcell / 2 + gamma_phi_photon
    bool reliable = true;      // false when |Delta| < g
    std::vector<std::string> warnings;
};

/// Rates for the squeezed vacuum (default), thermal or coherent bath. Thermal
/// and coherent baths use lambda = 0 forms. Throws ResonanceDivergence when
/// Delta = 0 and DivergentNoise for kappa = 0.
AnalyticRates analytic_rates(const ModelParams& p, const BathSpec& bath = bath::Vacuum{});

} // namespace sqz

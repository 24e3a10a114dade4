#pragma once

// Physical parameters, Hamiltonians and collapse operators of a spin coupled
// to a parametrically squeezed resonator. Frequencies are angular, rad/us.

#include <string>
#include <variant>
#include <vector>

#include "sqz/operators.hpp"

namespace sqz {

enum class Frame { Rotating, Squeezed };

std::string to_string(Frame frame);
Frame frame_from_string(const std::string& name);

struct ModelParams {
    double omega_r_t = 1.0;  // resonator, frame rotating at omega_p / 2
    double omega_s_t = 0.6;  // spin, same frame
    double g = 0.005;        // spin-resonator coupling
    double lambda = 0.0;     // squeeze drive amplitude
    double kappa = 0.04;     // photon loss rate
    int n_fock = 30;
    Frame frame = Frame::Squeezed;

    /// Default operating point: omega_r = 1, omega_s = 0.6, g = 0.005, kappa = 0.04, N = 30.
    static ModelParams defaults() { return {}; }

    /// lambda = omega_r_t * tanh(2 r)
    static double lambda_for_r(double omega_r_t, double r);
    ModelParams with_r(double r) const;

    /// Throws on n_fock < 2, g < 0, kappa < 0, or |lambda| >= omega_r_t.
    void validate() const;
};

struct SqueezedFrameParams {
    double r = 0.0;
    double omega_r = 0.0;  // dressed resonator frequency Omega_r
};

/// r = atanh(lambda / omega_r_t) / 2, Omega_r = omega_r_t / cosh(2 r).
/// Throws ParametricInstability when |lambda| >= omega_r_t.
SqueezedFrameParams squeezed_frame_params(const ModelParams& p);

/// SQUID-loop parameters. Fluxes are in units of the reduced flux quantum.
struct CircuitParams {
    double E_J_over_hbar = 0.0;
    double Phi_AC = 0.0;
    double Phi_DC = 0.0;
    double phi_ZPF = 0.0;
    double omega_p = 0.0;
    double omega_r_bare = 0.0;
};

struct FluxDrive {
    double lambda = 0.0;
    double omega_r_shifted = 0.0;  // omega'_r
    double omega_r_t = 0.0;        // omega'_r - omega_p / 2
    std::vector<std::string> warnings;
};

FluxDrive lambda_from_flux(const CircuitParams& c);

namespace bath {
struct Vacuum {};
struct Thermal {
    double n_bar = 0.0;
};
struct CoherentDrive {
    Complex alpha{0.0, 0.0};
};
/// L' = sqrt(kappa) gamma: the resonator sits in a squeezed vacuum matched to
/// its own squeezing. Only meaningful in the squeezed frame.
struct SqueezedVacuumReference {};
} // namespace bath

using BathSpec = std::variant<bath::Vacuum, bath::Thermal, bath::CoherentDrive, bath::SqueezedVacuumReference>;

std::string bath_name(const BathSpec& spec);

/// Physical ladder operators a, a^dagger (resonator block) expressed in the
/// frame's Fock basis. In the squeezed frame a = gamma cosh r + gamma^dag sinh r.
LadderPair physical_ladder(const ModelParams& p);

/// Rotating: omega_r a^dag a + omega_s sz / 2 - lambda (a^2 + a^dag^2) / 2 + g (a s+ + a^dag s-).
/// Squeezed: Omega_r gamma^dag gamma + omega_s sz / 2 + g e^r (gamma + gamma^dag) sx / 2
///           - g e^-r (gamma^dag - gamma)(s+ - s-) / 2, with gamma the elementary ladder matrix.
Operator build_hamiltonian(const ModelParams& p, const HilbertLayout& layout);

/// Collapse operators, each scaled so that L^dag L is a rate. Zero operators are dropped.
std::vector<Operator> build_collapse(const ModelParams& p, const BathSpec& bath, const HilbertLayout& layout);

struct OpenSystem {
    Operator hamiltonian;
    std::vector<Operator> collapse;
    HilbertLayout layout;
};

/// Hamiltonian plus collapse list. For CoherentDrive the resonator Hamiltonian
/// is zero (displaced, co-rotating frame); that construction needs lambda = 0 and g = 0.
OpenSystem build_open_system(const ModelParams& p, const BathSpec& bath, const HilbertLayout& layout);

} // namespace sqz

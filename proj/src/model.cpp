#include "sqz/model.hpp"

#include <cmath>
#include <sstream>

#include "sqz/errors.hpp"

namespace sqz {

std::string to_string(Frame frame)
{
    return frame == Frame::Rotating ? "rotating" : "squeezed";
}

Frame frame_from_string(const std::string& name)
{
    if (name == "rotating" || name == "Rotating" || name == "original") return Frame::Rotating;
    if (name == "squeezed" || name == "Squeezed") return Frame::Squeezed;
    throw Error(ErrorKind::InvalidConfig, "unknown frame '" + name + "'");
}

double ModelParams::lambda_for_r(double omega_r_t, double r)
{
    return omega_r_t * std::tanh(2.0 * r);
}

ModelParams ModelParams::with_r(double r) const
{
    ModelParams out = *this;
    out.lambda = lambda_for_r(omega_r_t, r);
    return out;
}

void ModelParams::validate() const
{
    if (n_fock < 2) {
        throw Error(ErrorKind::InvalidTruncation, "n_fock must be >= 2, got " + std::to_string(n_fock));
    }
    if (!(g >= 0.0)) throw Error(ErrorKind::InvalidConfig, "coupling g must be >= 0");
    if (!(kappa >= 0.0)) throw Error(ErrorKind::InvalidConfig, "kappa must be >= 0");
    if (!(omega_r_t > 0.0)) throw Error(ErrorKind::InvalidConfig, "omega_r must be > 0");
    if (!(std::abs(lambda) < omega_r_t)) {
        std::ostringstream msg;
        msg << "|lambda| = " << std::abs(lambda) << " >= omega_r = " << omega_r_t
            << ": the parametric resonator is unstable";
        throw Error(ErrorKind::ParametricInstability, msg.str());
    }
}

SqueezedFrameParams squeezed_frame_params(const ModelParams& p)
{
    if (!(std::abs(p.lambda) < p.omega_r_t)) {
        std::ostringstream msg;
        msg << "no Bogoliubov transform for |lambda| = " << std::abs(p.lambda)
            << " >= omega_r = " << p.omega_r_t;
        throw Error(ErrorKind::ParametricInstability, msg.str());
    }
    SqueezedFrameParams out;
    out.r = 0.5 * std::atanh(p.lambda / p.omega_r_t);
    out.omega_r = p.omega_r_t / std::cosh(2.0 * out.r);
    return out;
}

FluxDrive lambda_from_flux(const CircuitParams& c)
{
    if (!(c.E_J_over_hbar > 0.0) || !(c.omega_p > 0.0) || !(c.omega_r_bare > 0.0)) {
        throw Error(ErrorKind::InvalidConfig, "circuit frequencies must be positive");
    }
    FluxDrive out;
    const double half_dc = 0.5 * c.Phi_DC;
    const double zpf2 = c.phi_ZPF * c.phi_ZPF;
    out.lambda = c.E_J_over_hbar * c.Phi_AC * zpf2 * std::sin(half_dc);
    out.omega_r_shifted = c.omega_r_bare + 4.0 * zpf2 * c.E_J_over_hbar * std::cos(half_dc);
    out.omega_r_t = out.omega_r_shifted - 0.5 * c.omega_p;
    if (std::abs(c.Phi_AC) / 2.0 > 0.1) {
        out.warnings.emplace_back("Phi_AC is not small compared to 2 phi_0; first-order flux expansion is unreliable");
    }
    return out;
}

std::string bath_name(const BathSpec& spec)
{
    struct Visitor {
        std::string operator()(const bath::Vacuum&) const { return "vacuum"; }
        std::string operator()(const bath::Thermal&) const { return "thermal"; }
        std::string operator()(const bath::CoherentDrive&) const { return "coherent"; }
        std::string operator()(const bath::SqueezedVacuumReference&) const { return "squeezed_vacuum_reference"; }
    };
    return std::visit(Visitor{}, spec);
}

LadderPair physical_ladder(const ModelParams& p)
{
    auto [a, a_dag] = fock_ladder(p.n_fock);
    if (p.frame == Frame::Rotating) return {a, a_dag};
    // a = gamma cosh r + gamma^dag sinh r, i.e. the Bogoliubov map with -r.
    const double r = squeezed_frame_params(p).r;
    auto phys = bogoliubov_pair(a, a_dag, -r);
    return {phys.lower.relabeled("a"), phys.raise.relabeled("a^dag")};
}

namespace {

void require_layout(const ModelParams& p, const HilbertLayout& layout)
{
    if (layout.n_fock != p.n_fock) {
        throw Error(ErrorKind::DimensionMismatch, "layout n_fock differs from model n_fock");
    }
    if (!layout.has_spin() && p.g != 0.0) {
        throw Error(ErrorKind::UnsupportedCombination, "a resonator-only layout requires g = 0");
    }
}

Operator resonator_hamiltonian(const ModelParams& p)
{
    if (p.frame == Frame::Squeezed) {
        const auto sf = squeezed_frame_params(p);
        return (sf.omega_r * number_operator(p.n_fock)).relabeled("H_r");
    }
    const auto [a, a_dag] = fock_ladder(p.n_fock);
    const Operator squeeze = a * a + a_dag * a_dag;
    return (p.omega_r_t * number_operator(p.n_fock) - (0.5 * p.lambda) * squeeze).relabeled("H_r");
}

} // namespace

Operator build_hamiltonian(const ModelParams& p, const HilbertLayout& layout)
{
    p.validate();
    require_layout(p, layout);

    Operator h = layout.resonator(resonator_hamiltonian(p));
    if (!layout.has_spin()) return h.relabeled("H");

    const auto pauli = pauli_set();
    h = h + layout.spin((0.5 * p.omega_s_t) * pauli.z);
    if (p.g == 0.0) return h.relabeled("H");

    const auto [a, a_dag] = fock_ladder(p.n_fock);
    if (p.frame == Frame::Rotating) {
        h = h + p.g * (tensor(a, pauli.plus) + tensor(a_dag, pauli.minus));
    } else {
        const double r = squeezed_frame_params(p).r;
        const Operator quad_x = a + a_dag;  // gamma + gamma^dag
        const Operator quad_p = a_dag - a;  // gamma^dag - gamma
        h = h + (0.5 * p.g * std::exp(r)) * tensor(quad_x, pauli.x)
              - (0.5 * p.g * std::exp(-r)) * tensor(quad_p, pauli.plus - pauli.minus);
    }
    return h.relabeled("H");
}

std::vector<Operator> build_collapse(const ModelParams& p, const BathSpec& spec, const HilbertLayout& layout)
{
    p.validate();
    require_layout(p, layout);

    const double sqrt_kappa = std::sqrt(p.kappa);
    std::vector<Operator> out;
    auto push = [&](Operator op, std::string label) {
        if (!op.is_zero()) out.push_back(layout.resonator(op).relabeled(std::move(label)));
    };

    if (std::holds_alternative<bath::SqueezedVacuumReference>(spec)) {
        if (p.frame != Frame::Squeezed) {
            throw Error(ErrorKind::UnsupportedCombination,
                        "the squeezed-vacuum reference bath is defined in the squeezed frame only");
        }
        const auto gamma = fock_ladder(p.n_fock).lower;
        push(sqrt_kappa * gamma, "sqrt(kappa) gamma");
        return out;
    }

    const auto [a, a_dag] = physical_ladder(p);
    if (std::holds_alternative<bath::Vacuum>(spec)) {
        push(sqrt_kappa * a, "sqrt(kappa) a");
    } else if (const auto* th = std::get_if<bath::Thermal>(&spec)) {
        if (!(th->n_bar >= 0.0)) throw Error(ErrorKind::InvalidConfig, "thermal n_bar must be >= 0");
        push(std::sqrt(p.kappa * (th->n_bar + 1.0)) * a, "sqrt(kappa (n+1)) a");
        if (th->n_bar > 0.0) push(std::sqrt(p.kappa * th->n_bar) * a_dag, "sqrt(kappa n) a^dag");
    } else if (const auto* coh = std::get_if<bath::CoherentDrive>(&spec)) {
        if (p.lambda != 0.0) {
            throw Error(ErrorKind::UnsupportedCombination, "the coherent-drive bath requires lambda = 0");
        }
        push(sqrt_kappa * (a - coh->alpha * identity(p.n_fock)), "sqrt(kappa) (a - alpha)");
    }
    return out;
}

OpenSystem build_open_system(const ModelParams& p, const BathSpec& spec, const HilbertLayout& layout)
{
    OpenSystem sys{Operator(), build_collapse(p, spec, layout), layout};
    if (std::holds_alternative<bath::CoherentDrive>(spec)) {
        if (p.g != 0.0) {
            throw Error(ErrorKind::UnsupportedCombination, "the coherent-drive bath requires g = 0");
        }
        Matrix zero = Matrix::Zero(layout.dim(), layout.dim());
        sys.hamiltonian = Operator(zero, "H");
        if (layout.has_spin()) {
            sys.hamiltonian = (sys.hamiltonian + layout.spin((0.5 * p.omega_s_t) * pauli_set().z)).relabeled("H");
        }
    } else {
        sys.hamiltonian = build_hamiltonian(p, layout);
    }
    return sys;
}

} // namespace sqz

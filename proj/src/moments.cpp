#include "sqz/moments.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "sqz/errors.hpp"

namespace sqz {

namespace {

const Complex I(0.0, 1.0);

// Quartic9 layout.
enum Psi : Index { kN = 0, kA2, kAd2, kAd2A2, kAd3A, kAdA3, kA4, kAd4, kOne };

void require_bare_resonator(const ModelParams& p)
{
    if (p.g != 0.0) {
        throw Error(ErrorKind::UnsupportedCombination,
                    "moment equations close only for the bare resonator (g = 0)");
    }
}

void require_kappa(const ModelParams& p)
{
    if (!(p.kappa > 0.0)) {
        throw Error(ErrorKind::DivergentNoise, "integrated photon noise diverges for kappa = 0");
    }
}

Matrix quadratic_generator(double w, double l, double k, double nbar)
{
    Matrix g = Matrix::Zero(4, 4);
    g.row(0) << -k, -I * l, I * l, k * nbar;
    g.row(1) << 2.0 * I * l, -2.0 * I * w - k, 0.0, I * l;
    g.row(2) << -2.0 * I * l, 0.0, 2.0 * I * w - k, -I * l;
    return g;
}

Matrix coherent_generator(double k, Complex alpha)
{
    Matrix g = Matrix::Zero(4, 4);
    g.row(0) << -k, 0.5 * std::conj(alpha) * k, 0.5 * alpha * k, 0.0;
    g.row(1) << 0.0, -0.5 * k, 0.0, 0.5 * alpha * k;
    g.row(2) << 0.0, 0.0, -0.5 * k, 0.5 * std::conj(alpha) * k;
    return g;
}

Matrix quartic_generator(double w, double l, double k)
{
    Matrix m = Matrix::Zero(9, 9);
    const Complex il = I * l;
    m.row(0) << -k, -il, il, 0, 0, 0, 0, 0, 0;
    m.row(1) << 2.0 * il, -2.0 * I * w - k, 0, 0, 0, 0, 0, 0, il;
    m.row(2) << -2.0 * il, 0, 2.0 * I * w - k, 0, 0, 0, 0, 0, -il;
    m.row(3) << 0, -il, il, -2.0 * k, 2.0 * il, -2.0 * il, 0, 0, 0;
    m.row(4) << -3.0 * il, 0, 0, -3.0 * il, 2.0 * I * w - 2.0 * k, 0, 0, il, 0;
    m.row(5) << 3.0 * il, 0, 0, 3.0 * il, 0, -2.0 * I * w - 2.0 * k, -il, 0, 0;
    m.row(6) << 0, 6.0 * il, 0, 0, 0, 4.0 * il, -2.0 * k - 4.0 * I * w, 0, 0;
    m.row(7) << 0, 0, -6.0 * il, 0, -4.0 * il, 0, 0, -2.0 * k + 4.0 * I * w, 0;
    return m;
}

/// Squeezed-vacuum quartic moments from the Quartic9 system.
Vector squeezed_quartic_moments(const ModelParams& p)
{
    return steady_moments(moment_generator(p, bath::Vacuum{}, MomentOrder::Quartic9));
}

Matrix quadratic_block(const ModelParams& p)
{
    return quadratic_generator(p.omega_r_t, p.lambda, p.kappa, 0.0).topLeftCorner(3, 3);
}

} // namespace

Index MomentSystem::index_of(const std::string& label) const
{
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis[i] == label) return static_cast<Index>(i);
    }
    throw Error(ErrorKind::InvalidConfig, "moment basis has no entry '" + label + "'");
}

MomentSystem moment_generator(const ModelParams& p, const BathSpec& bath, MomentOrder order)
{
    require_bare_resonator(p);
    p.validate();
    MomentSystem sys;
    sys.params = p;
    sys.bath = bath;
    sys.order = order;

    if (std::holds_alternative<bath::SqueezedVacuumReference>(bath)) {
        throw Error(ErrorKind::UnsupportedCombination, "no moment system for the squeezed-vacuum reference bath");
    }
    if (order == MomentOrder::Quartic9) {
        if (!std::holds_alternative<bath::Vacuum>(bath)) {
            throw Error(ErrorKind::UnsupportedCombination, "the quartic moment system is for the vacuum bath");
        }
        sys.basis = {"n", "a2", "ad2", "ad2a2", "ad3a", "ada3", "a4", "ad4", "1"};
        sys.generator = quartic_generator(p.omega_r_t, p.lambda, p.kappa);
        return sys;
    }

    if (const auto* coh = std::get_if<bath::CoherentDrive>(&bath)) {
        if (p.lambda != 0.0) {
            throw Error(ErrorKind::UnsupportedCombination, "the coherent-drive moment system requires lambda = 0");
        }
        sys.basis = {"n", "a", "ad", "1"};
        sys.generator = coherent_generator(p.kappa, coh->alpha);
        return sys;
    }
    double nbar = 0.0;
    if (const auto* th = std::get_if<bath::Thermal>(&bath)) {
        if (!(th->n_bar >= 0.0)) throw Error(ErrorKind::InvalidConfig, "thermal n_bar must be >= 0");
        nbar = th->n_bar;
    }
    sys.basis = {"n", "a2", "ad2", "1"};
    sys.generator = quadratic_generator(p.omega_r_t, p.lambda, p.kappa, nbar);
    return sys;
}

Vector steady_moments(const MomentSystem& sys)
{
    const Index n = sys.size() - 1;
    const Matrix a = sys.generator.topLeftCorner(n, n);
    const Vector rhs = -sys.generator.col(n).head(n);
    Eigen::PartialPivLU<Matrix> lu(a);
    if (!(lu.rcond() > 1e-13)) {
        std::ostringstream msg;
        msg << "moment generator is singular beyond the identity direction (rcond " << lu.rcond() << ")";
        throw Error(ErrorKind::ParametricInstability, msg.str());
    }
    Vector out(n + 1);
    out.head(n) = lu.solve(rhs);
    out(n) = 1.0;
    return out;
}

Vector quartic_steady_closed(double w, double l, double k)
{
    const double d = 4.0 * w * w + k * k - 4.0 * l * l;
    const double d2 = d * d;
    const double l2 = l * l;
    Vector psi(9);
    psi(kN) = 2.0 * l2 / d;
    psi(kA2) = l * Complex(2.0 * w, k) / d;
    psi(kAd2) = l * Complex(2.0 * w, -k) / d;
    psi(kAd2A2) = (4.0 * w * w * l2 + k * k * l2 + 8.0 * l2 * l2) / d2;
    psi(kAd3A) = 6.0 * l2 * l * Complex(2.0 * w, -k) / d2;
    psi(kAdA3) = 6.0 * l2 * l * Complex(2.0 * w, k) / d2;
    psi(kA4) = 3.0 * l2 * Complex(4.0 * w * w - k * k, 4.0 * w * k) / d2;
    psi(kAd4) = 3.0 * l2 * Complex(4.0 * w * w - k * k, -4.0 * w * k) / d2;
    psi(kOne) = 1.0;
    return psi;
}

// ---------------------------------------------------------------------------

ClosedCorrelator::ClosedCorrelator(Matrix generator, Vector initial, std::vector<std::string> basis)
    : g_(std::move(generator)), initial_(std::move(initial)), basis_(std::move(basis))
{
    if (g_.rows() != g_.cols() || g_.rows() != initial_.size()) {
        throw Error(ErrorKind::DimensionMismatch, "correlator generator and initial vector differ in size");
    }
    Eigen::ComplexEigenSolver<Matrix> es(g_);
    if (es.info() == Eigen::Success) {
        const Eigen::JacobiSVD<Matrix> svd(es.eigenvectors());
        const auto& sv = svd.singularValues();
        const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
        if (cond < 1e12) {
            diagonalized_ = true;
            eig_ = es.eigenvalues();
            w_ = es.eigenvectors();
            coeff_ = w_.partialPivLu().solve(initial_);
        }
    }
}

Vector ClosedCorrelator::at(double tau) const
{
    if (diagonalized_) {
        Vector e(eig_.size());
        for (Index k = 0; k < eig_.size(); ++k) e(k) = std::exp(eig_(k) * tau) * coeff_(k);
        return w_ * e;
    }
    return (g_ * tau).exp() * initial_;
}

ClosedCorrelator qrt_correlation_closed(const MomentSystem& sys, const std::string& seed)
{
    if (seed != "n") {
        throw Error(ErrorKind::UnsupportedCombination, "closed correlators are available for seed 'n' only");
    }
    if (sys.order != MomentOrder::Quadratic4) {
        throw Error(ErrorKind::UnsupportedCombination, "closed correlators use the Quadratic4 system");
    }
    Vector init(4);
    if (const auto* coh = std::get_if<bath::CoherentDrive>(&sys.bath)) {
        const Complex al = coh->alpha;
        const double n = std::norm(al);
        init << n * n + n, al * (n + 1.0), std::conj(al) * n, n;
    } else if (const auto* th = std::get_if<bath::Thermal>(&sys.bath)) {
        if (sys.params.lambda != 0.0) {
            throw Error(ErrorKind::UnsupportedCombination, "thermal correlators require lambda = 0");
        }
        const double nb = th->n_bar;
        init << nb * (2.0 * nb + 1.0), 0.0, 0.0, nb;
    } else {
        const Vector psi = squeezed_quartic_moments(sys.params);
        // <n n> = <ad2a2> + <n>, <a2 n> = <ada3> + 2<a2>, <ad2 n> = <ad3a>
        init << psi(kAd2A2) + psi(kN), psi(kAdA3) + 2.0 * psi(kA2), psi(kAd3A), psi(kN);
    }
    return ClosedCorrelator(sys.generator, init, sys.basis);
}

Matrix connected_quadratic_block(const Vector& psi)
{
    if (psi.size() != 9) throw Error(ErrorKind::DimensionMismatch, "expected the nine quartic moments");
    Matrix c(3, 3);
    // Row operator acts at tau, column operator at 0.
    c(0, 0) = psi(kAd2A2) + psi(kN);
    c(0, 1) = psi(kAdA3);
    c(0, 2) = psi(kAd3A) + 2.0 * psi(kAd2);
    c(1, 0) = psi(kAdA3) + 2.0 * psi(kA2);
    c(1, 1) = psi(kA4);
    c(1, 2) = psi(kAd2A2) + 4.0 * psi(kN) + 2.0;
    c(2, 0) = psi(kAd3A);
    c(2, 1) = psi(kAd2A2);
    c(2, 2) = psi(kAd4);
    const Vector mean = psi.head(3);
    return c - mean * mean.transpose();
}

OccupationWeights effective_occupation(const ModelParams& p)
{
    const double omega = squeezed_frame_params(p).omega_r;
    const double denom = p.omega_s_t + omega;
    return {(p.omega_s_t + p.omega_r_t) / denom, -p.lambda / (2.0 * denom)};
}

NoiseIntegrals integrated_noise(const ModelParams& p, const BathSpec& bath)
{
    require_kappa(p);
    p.validate();
    NoiseIntegrals out;
    if (const auto* th = std::get_if<bath::Thermal>(&bath)) {
        if (p.lambda != 0.0) throw Error(ErrorKind::UnsupportedCombination, "thermal noise requires lambda = 0");
        out.eta = 2.0 * (th->n_bar * th->n_bar + th->n_bar) / p.kappa;
        out.eta_tilde = out.eta;
        return out;
    }
    if (const auto* coh = std::get_if<bath::CoherentDrive>(&bath)) {
        if (p.lambda != 0.0) throw Error(ErrorKind::UnsupportedCombination, "coherent noise requires lambda = 0");
        out.eta = 4.0 * std::norm(coh->alpha) / p.kappa;
        out.eta_tilde = out.eta;
        return out;
    }
    if (std::holds_alternative<bath::SqueezedVacuumReference>(bath)) {
        throw Error(ErrorKind::UnsupportedCombination, "no closed noise form for the squeezed-vacuum reference bath");
    }

    const double w = p.omega_r_t;
    const double l = p.lambda;
    const double k = p.kappa;
    const double d = 4.0 * w * w + k * k - 4.0 * l * l;
    out.eta = 2.0 * l * l * (4.0 * w * w + k * k) * (4.0 * w * w + 5.0 * k * k - 4.0 * l * l) / (k * d * d * d);

    ModelParams bare = p;
    bare.g = 0.0;
    const Matrix c0 = connected_quadratic_block(squeezed_quartic_moments(bare));
    const Matrix integral = -quadratic_block(bare).partialPivLu().solve(c0);
    const auto wts = effective_occupation(p);
    Vector c(3);
    c << wts.c_n, wts.c_a, wts.c_a;
    out.eta_tilde = 2.0 * (c.transpose() * integral * c)(0).real();
    return out;
}

double eta_tilde_trapezoid(const ModelParams& p, int points, double tau_max)
{
    require_kappa(p);
    p.validate();
    if (points < 3) throw Error(ErrorKind::InvalidConfig, "trapezoid needs at least three points");
    if (!(tau_max > 0.0)) tau_max = 40.0 / p.kappa;

    ModelParams bare = p;
    bare.g = 0.0;
    const Matrix c0 = connected_quadratic_block(squeezed_quartic_moments(bare));
    const auto wts = effective_occupation(p);
    Vector c(3);
    c << wts.c_n, wts.c_a, wts.c_a;
    // f(tau) = c^T exp(G3 tau) C0 c
    const ClosedCorrelator corr(quadratic_block(bare), c0 * c, {"n", "a2", "ad2"});

    const double dt = tau_max / (points - 1);
    Complex acc(0.0, 0.0);
    for (int k = 0; k < points; ++k) {
        const double weight = (k == 0 || k == points - 1) ? 0.5 : 1.0;
        acc += weight * (c.transpose() * corr.at(dt * k))(0);
    }
    return 2.0 * (acc * dt).real();
}

AnalyticRates analytic_rates(const ModelParams& p, const BathSpec& bath)
{
    require_kappa(p);
    const auto sf = squeezed_frame_params(p);
    const double ws = p.omega_s_t;
    const double wr = p.omega_r_t;
    const double om = sf.omega_r;
    const double l = p.lambda;
    const double k = p.kappa;
    const double g2 = p.g * p.g;

    AnalyticRates out;
    out.Delta = ws - om;
    if (out.Delta == 0.0) {
        throw Error(ErrorKind::ResonanceDivergence, "Delta = omega_s - Omega_r vanishes; the dispersive expansion diverges");
    }
    out.chi_r = g2 / out.Delta;
    out.chi_0 = (ws != wr) ? g2 / (ws - wr) : std::numeric_limits<double>::infinity();
    out.C1 = (p.g / out.Delta) * (ws + wr) / (ws + om);
    out.C2 = (p.g / out.Delta) * l / (ws + om);
    out.gamma_purcell = k * (out.C1 * out.C1 + out.C2 * out.C2);

    const double pp = 4.0 * om * om + k * k;
    if (std::holds_alternative<bath::Vacuum>(bath)) {
        out.dispersive_shift = g2 / (ws * ws - om * om) * (4.0 * l * l * ws / pp + wr + ws);
        const double pref = 2.0 * out.chi_r * out.chi_r * l * l / (k * (om + ws) * (om + ws));
        out.gamma_phi_photon = pref * ((2.0 * om * om + k * k) / pp
                                       + 4.0 * wr * ws * (4.0 * om * om + 3.0 * k * k) / (pp * pp)
                                       + 2.0 * ws * ws * (4.0 * wr * wr + k * k) * (4.0 * om * om + 5.0 * k * k)
                                             / (pp * pp * pp));
    } else if (const auto* th = std::get_if<bath::Thermal>(&bath)) {
        if (l != 0.0) throw Error(ErrorKind::UnsupportedCombination, "thermal rates require lambda = 0");
        const double nb = th->n_bar;
        out.dispersive_shift = out.chi_0 * (2.0 * nb + 1.0);
        out.gamma_phi_photon = 4.0 * out.chi_0 * out.chi_0 * (nb * nb + nb) / k;
    } else if (const auto* coh = std::get_if<bath::CoherentDrive>(&bath)) {
        if (l != 0.0) throw Error(ErrorKind::UnsupportedCombination, "coherent rates require lambda = 0");
        const double nb = std::norm(coh->alpha);
        out.dispersive_shift = out.chi_0 * (2.0 * nb + 1.0);
        out.gamma_phi_photon = 8.0 * out.chi_0 * out.chi_0 * nb / k;
    } else {
        throw Error(ErrorKind::UnsupportedCombination, "no analytic rates for the squeezed-vacuum reference bath");
    }
    out.gamma_total = 0.5 * out.gamma_purcell + out.gamma_phi_photon;

    if (std::abs(out.Delta) < p.g) {
        out.reliable = false;
        out.warnings.emplace_back("|Delta| < g: the Schrieffer-Wolff expansion is unreliable here");
    }
    return out;
}

} // namespace sqz

#include "sqz/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "sqz/errors.hpp"

namespace sqz {

namespace {

constexpr Index kDenseBlockLimit = 2500;

Complex dot_plain(const Vector& f, const Vector& x)
{
    return (f.array() * x.array()).sum();
}

/// vec(B rho), optionally minus Tr(B rho) vec(rho).
Vector seed_vector(const Operator& b, const DensityOperator& rho, bool subtract_mean)
{
    const Matrix b_rho = b.matrix() * rho.matrix;
    Vector out = Liouvillian::vec(b_rho);
    if (subtract_mean) out -= b_rho.trace() * Liouvillian::vec(rho.matrix);
    return out;
}

void require_dims(const Liouvillian& liou, const Operator& a, const Operator& b, const DensityOperator& rho)
{
    const Index d = liou.hilbert_dim();
    if (a.dim() != d || b.dim() != d || rho.dim() != d) {
        throw Error(ErrorKind::DimensionMismatch, "operator or state dimension differs from the Liouvillian");
    }
}

Matrix dense_block_checked(const Liouvillian& liou, int b)
{
    const auto n = static_cast<Index>(liou.block(b).size());
    if (n > kDenseBlockLimit) {
        std::ostringstream msg;
        msg << "time-domain propagation needs a dense exponential of a " << n
            << "-state block (limit " << kDenseBlockLimit << "); use the pole-expansion spectra instead";
        throw Error(ErrorKind::ResourceLimit, msg.str());
    }
    return liou.dense_block(b);
}

} // namespace

Complex DensityOperator::expect(const Operator& op) const
{
    return expect(op.matrix());
}

Complex DensityOperator::expect(const Matrix& op) const
{
    return (op * matrix).trace();
}

double DensityOperator::hermiticity_defect() const
{
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

double DensityOperator::min_eigenvalue() const
{
    const Matrix herm = 0.5 * (matrix + matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------
// Steady state

struct SteadyState::Factor {
    explicit Factor(BandedMatrix m) : lu(std::move(m)) {}
    BandedLU lu;
    std::vector<Index> diag_local;  // local indices of populations
    Vector rho_local;
};

SteadyState::~SteadyState() = default;
SteadyState::SteadyState(SteadyState&&) noexcept = default;
SteadyState& SteadyState::operator=(SteadyState&&) noexcept = default;

SteadyState::SteadyState(const Liouvillian& liou) : liou_(&liou)
{
    const Index d = liou.hilbert_dim();
    std::vector<int> diag_blocks;
    for (Index i = 0; i < d; ++i) diag_blocks.push_back(liou.block_of(i + d * i));
    std::sort(diag_blocks.begin(), diag_blocks.end());
    diag_blocks.erase(std::unique(diag_blocks.begin(), diag_blocks.end()), diag_blocks.end());
    if (diag_blocks.size() != 1) {
        std::ostringstream msg;
        msg << "populations split into " << diag_blocks.size()
            << " disconnected sectors; the steady state is not unique";
        throw Error(ErrorKind::DegenerateSteadyState, msg.str());
    }
    block_ = diag_blocks.front();

    std::vector<Index> diag_local;
    for (Index i = 0; i < d; ++i) diag_local.push_back(liou.local_index(i + d * i));

    // Pin the population of the lowest-energy basis state first.
    const auto& h = liou.hamiltonian().matrix();
    Index pin_state = 0;
    for (Index i = 1; i < d; ++i) {
        if (h(i, i).real() < h(pin_state, pin_state).real()) pin_state = i;
    }

    const auto n = static_cast<Index>(liou.block(block_).size());
    Vector x;
    for (int attempt = 0; attempt < 2; ++attempt) {
        pin_ = diag_local[static_cast<std::size_t>(pin_state)];
        BandedMatrix m = liou.banded_block(block_);
        m.clear_row(pin_);
        m.at(pin_, pin_) = 1.0;
        lu_ = std::make_unique<Factor>(std::move(m));
        rcond_ = lu_->lu.rcond();
        if (lu_->lu.singular() || rcond_ < 1e-14) {
            std::ostringstream msg;
            msg << "generator kernel is not one-dimensional (rcond " << rcond_ << ")";
            throw Error(ErrorKind::DegenerateSteadyState, msg.str());
        }
        Vector rhs = Vector::Zero(n);
        rhs(pin_) = 1.0;
        x = lu_->lu.solve(rhs);

        // A pinned population far below the largest one loses accuracy; re-pin.
        Index best = 0;
        for (Index i = 1; i < d; ++i) {
            if (std::abs(x(diag_local[static_cast<std::size_t>(i)])) >
                std::abs(x(diag_local[static_cast<std::size_t>(best)]))) {
                best = i;
            }
        }
        if (std::abs(x(diag_local[static_cast<std::size_t>(best)])) < 1e6 || best == pin_state) break;
        pin_state = best;
    }

    Vector full = Vector::Zero(liou.dim());
    liou.scatter(block_, x, full);
    Matrix rho = Liouvillian::unvec(full, d);
    rho /= rho.trace();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho_.matrix = rho;

    const Vector v = Liouvillian::vec(rho);
    const double denom = liou.norm_1() * v.norm();
    residual_ = denom > 0.0 ? liou.apply(v).norm() / denom : 0.0;
    if (residual_ > 1e-8) {
        std::ostringstream msg;
        msg << "steady-state residual " << residual_ << " exceeds 1e-8";
        throw Error(ErrorKind::Convergence, msg.str());
    }

    lu_->diag_local = std::move(diag_local);
    lu_->rho_local = liou.gather(block_, v);
}

Vector SteadyState::solve_traceless(const Vector& b_local) const
{
    Vector rhs = -b_local;
    rhs(pin_) = 0.0;
    Vector y = lu_->lu.solve(rhs);
    Complex tr(0.0, 0.0);
    for (const Index k : lu_->diag_local) tr += y(k);
    return y - tr * lu_->rho_local;
}

DensityOperator steady_state(const Liouvillian& liou)
{
    return SteadyState(liou).rho();
}

// ---------------------------------------------------------------------------
// Time domain

Matrix propagate(const Liouvillian& liou, const Matrix& x, double tau)
{
    if (!(tau >= 0.0)) throw Error(ErrorKind::InvalidConfig, "propagate: tau must be >= 0");
    if (x.rows() != liou.hilbert_dim() || x.cols() != liou.hilbert_dim()) {
        throw Error(ErrorKind::DimensionMismatch, "propagate: operator dimension differs from the Liouvillian");
    }
    const Vector v = Liouvillian::vec(x);
    if (tau == 0.0) return x;
    Vector out = Vector::Zero(v.size());
    for (const int b : liou.support_blocks(v)) {
        const Matrix e = (dense_block_checked(liou, b) * tau).exp();
        liou.scatter(b, e * liou.gather(b, v), out);
    }
    return Liouvillian::unvec(out, liou.hilbert_dim());
}

std::vector<double> uniform_grid(double start, double stop, int points)
{
    if (points < 2) throw Error(ErrorKind::InvalidConfig, "a grid needs at least two points");
    std::vector<double> out(static_cast<std::size_t>(points));
    const double step = (stop - start) / (points - 1);
    for (int k = 0; k < points; ++k) out[static_cast<std::size_t>(k)] = start + step * k;
    out.back() = stop;
    return out;
}

CorrelationSeries two_time_correlation(const Liouvillian& liou, const Operator& a, const Operator& b,
                                       const DensityOperator& rho, const std::vector<double>& tau,
                                       bool subtract_mean)
{
    require_dims(liou, a, b, rho);
    if (tau.empty() || tau.front() != 0.0) {
        throw Error(ErrorKind::InvalidConfig, "tau grid must start at 0");
    }
    CorrelationSeries out;
    out.tau = tau;
    out.a_label = a.label();
    out.b_label = b.label();
    out.values.assign(tau.size(), Complex(0.0, 0.0));

    const Vector seed = seed_vector(b, rho, subtract_mean);
    const Vector f = Liouvillian::trace_functional(a.matrix());
    if (tau.size() == 1) {
        out.values[0] = dot_plain(f, seed);
        return out;
    }
    const double dt = tau[1] - tau[0];
    for (std::size_t k = 1; k < tau.size(); ++k) {
        if (std::abs((tau[k] - tau[k - 1]) - dt) > 1e-9 * std::max(1.0, tau.back())) {
            throw Error(ErrorKind::InvalidConfig, "tau grid must be uniformly spaced");
        }
    }
    if (!(dt > 0.0)) throw Error(ErrorKind::InvalidConfig, "tau grid must be strictly increasing");

    for (const int blk : liou.support_blocks(seed)) {
        const Matrix step = (dense_block_checked(liou, blk) * dt).exp();
        const Vector fl = liou.gather(blk, f);
        Vector x = liou.gather(blk, seed);
        for (std::size_t k = 0; k < tau.size(); ++k) {
            out.values[k] += dot_plain(fl, x);
            if (k + 1 < tau.size()) x = step * x;
        }
    }
    return out;
}

double slowest_decay_rate(const Liouvillian& liou, const Matrix& x)
{
    const Vector v = Liouvillian::vec(x);
    double best = std::numeric_limits<double>::infinity();
    const double floor = 1e-10 * std::max(1.0, liou.norm_1());
    for (const int b : liou.support_blocks(v)) {
        Eigen::ComplexEigenSolver<Matrix> es(dense_block_checked(liou, b), false);
        for (Index k = 0; k < es.eigenvalues().size(); ++k) {
            const double rate = -es.eigenvalues()(k).real();
            if (rate > floor) best = std::min(best, rate);
        }
    }
    if (!std::isfinite(best)) {
        throw Error(ErrorKind::Convergence, "no decaying mode found; the correlator never decays");
    }
    return best;
}

std::vector<double> default_tau_grid(const Liouvillian& liou, const Operator& b, const DensityOperator& rho,
                                     int points)
{
    const Vector seed = seed_vector(b, rho, true);
    const double rate = slowest_decay_rate(liou, Liouvillian::unvec(seed, liou.hilbert_dim()));
    return uniform_grid(0.0, 12.0 / rate, points);
}

Spectrum power_spectrum(const CorrelationSeries& series, const std::vector<double>& omega)
{
    const auto& t = series.tau;
    const auto& c = series.values;
    if (t.size() < 2 || c.size() != t.size()) {
        throw Error(ErrorKind::InvalidConfig, "correlation series needs at least two samples");
    }
    const double c0 = std::abs(c.front());
    const double cend = std::abs(c.back());
    if (c0 > 0.0 && cend > 1e-6 * c0) {
        const double rate = std::log(c0 / cend) / (t.back() - t.front());
        std::ostringstream msg;
        msg << "correlator decayed only to " << cend / c0 << " of its initial value by tau = " << t.back();
        if (rate > 0.0) msg << "; suggested tau_max = " << 1.2 * std::log(1e6) / rate;
        throw Error(ErrorKind::GridTooShort, msg.str());
    }

    Spectrum out;
    out.omega = omega;
    out.target = series.a_label + "," + series.b_label;
    out.values.assign(omega.size(), 0.0);
    for (std::size_t w = 0; w < omega.size(); ++w) {
        Complex acc(0.0, 0.0);
        Complex prev = c[0];
        for (std::size_t k = 1; k < t.size(); ++k) {
            const Complex cur = c[k] * std::exp(Complex(0.0, -omega[w] * t[k]));
            acc += 0.5 * (t[k] - t[k - 1]) * (prev + cur);
            prev = cur;
        }
        out.values[w] = 2.0 * acc.real();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pole expansion

Complex PoleExpansion::resolvent(double omega) const
{
    const Complex z(0.0, omega);
    Complex acc(0.0, 0.0);
    for (std::size_t k = 0; k < poles.size(); ++k) acc += weights[k] / (z - poles[k]);
    return acc;
}

Complex PoleExpansion::correlation(double tau) const
{
    Complex acc(0.0, 0.0);
    for (std::size_t k = 0; k < poles.size(); ++k) acc += weights[k] * std::exp(poles[k] * tau);
    return acc;
}

Spectrum PoleExpansion::sample(const std::vector<double>& omega, std::string target) const
{
    Spectrum out;
    out.omega = omega;
    out.target = std::move(target);
    out.values.reserve(omega.size());
    for (const double w : omega) out.values.push_back(spectrum(w));
    return out;
}

namespace {

struct KrylovResult {
    std::vector<Complex> poles;
    std::vector<Complex> weights;
};

/// Ritz poles and weights from the first m Arnoldi vectors.
KrylovResult ritz_expansion(const Matrix& v, const Matrix& h, Index m, double beta, const Vector& f, Complex sigma)
{
    KrylovResult out;
    const Matrix hm = h.topLeftCorner(m, m);
    Eigen::ComplexEigenSolver<Matrix> es(hm);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::Convergence, "Ritz eigenproblem failed");
    const Matrix& w = es.eigenvectors();
    const Eigen::RowVectorXcd u = (f.transpose() * v.leftCols(m)) * w;
    Vector e1 = Vector::Zero(m);
    e1(0) = 1.0;
    const Vector s = w.partialPivLu().solve(e1);
    const double theta_max = es.eigenvalues().cwiseAbs().maxCoeff();
    for (Index k = 0; k < m; ++k) {
        const Complex theta = es.eigenvalues()(k);
        if (std::abs(theta) <= 1e-14 * theta_max) continue;
        out.poles.push_back(sigma + 1.0 / theta);
        out.weights.push_back(beta * u(k) * s(k));
    }
    return out;
}

std::vector<double> probe_grid(const PoleOptions& opt, const std::vector<Complex>& poles)
{
    std::vector<double> out = uniform_grid(opt.window_lo, opt.window_hi, std::max(opt.probe_points, 2));
    for (const auto& p : poles) {
        if (p.imag() >= opt.window_lo && p.imag() <= opt.window_hi) out.push_back(p.imag());
    }
    return out;
}

double window_change(const PoleExpansion& prev, const PoleExpansion& next, const std::vector<double>& probes)
{
    double diff = 0.0;
    double scale = 0.0;
    for (const double w : probes) {
        const double s1 = next.spectrum(w);
        diff = std::max(diff, std::abs(s1 - prev.spectrum(w)));
        scale = std::max(scale, std::abs(s1));
    }
    return scale > 0.0 ? diff / scale : diff;
}

} // namespace

PoleExpansion pole_expansion(const Liouvillian& liou, const Operator& a, const Operator& b,
                             const DensityOperator& rho, const PoleOptions& opt_in)
{
    require_dims(liou, a, b, rho);
    PoleOptions opt = opt_in;
    if (!(opt.window_hi > opt.window_lo)) {
        opt.window_lo = opt.omega_center - 0.5;
        opt.window_hi = opt.omega_center + 0.5;
    }
    const Complex sigma(0.0, opt.omega_center);
    const Vector seed = seed_vector(b, rho, opt.subtract_mean);
    const Vector f_full = Liouvillian::trace_functional(a.matrix());

    PoleExpansion total;
    for (const int blk : liou.support_blocks(seed)) {
        const Vector v0 = liou.gather(blk, seed);
        const Vector f = liou.gather(blk, f_full);
        const double beta = v0.norm();
        if (beta == 0.0) continue;
        const Index n = v0.size();
        const BandedLU lu(liou.banded_block(blk, sigma));
        if (lu.singular()) {
            throw Error(ErrorKind::Convergence, "shift coincides with a Liouvillian eigenvalue; move omega_center");
        }

        const Index max_dim = std::min<Index>(opt.max_dim, n);
        Matrix v = Matrix::Zero(n, max_dim + 1);
        Matrix h = Matrix::Zero(max_dim + 1, max_dim);
        v.col(0) = v0 / beta;

        PoleExpansion block_prev;
        bool have_prev = false;
        bool converged = false;
        Index m = 0;
        double change = 0.0;
        while (m < max_dim) {
            Vector w = lu.solve(v.col(m));
            const double w_norm0 = w.norm();
            for (int pass = 0; pass < 2; ++pass) {
                const Vector proj = v.leftCols(m + 1).adjoint() * w;
                w -= v.leftCols(m + 1) * proj;
                h.col(m).head(m + 1) += proj;
            }
            const double hn = w.norm();
            h(m + 1, m) = hn;
            ++m;
            const bool breakdown = hn <= 1e-13 * w_norm0;
            if (!breakdown && m < max_dim) v.col(m) = w / hn;

            const bool checkpoint = breakdown || m == max_dim || m % opt.chunk == 0;
            if (!checkpoint) continue;
            const KrylovResult kr = ritz_expansion(v, h, m, beta, f, sigma);
            PoleExpansion cur;
            cur.poles = kr.poles;
            cur.weights = kr.weights;
            if (breakdown || m == n) {
                block_prev = cur;
                converged = true;
                change = 0.0;
                break;
            }
            if (have_prev) {
                change = window_change(block_prev, cur, probe_grid(opt, cur.poles));
                if (change <= opt.tol) {
                    block_prev = cur;
                    converged = true;
                    break;
                }
            }
            block_prev = cur;
            have_prev = true;
        }
        if (!converged) {
            std::ostringstream msg;
            msg << "pole expansion not converged at Krylov dimension " << m << " (window change " << change << ")";
            throw Error(ErrorKind::Convergence, msg.str());
        }
        total.poles.insert(total.poles.end(), block_prev.poles.begin(), block_prev.poles.end());
        total.weights.insert(total.weights.end(), block_prev.weights.begin(), block_prev.weights.end());
        total.krylov_dim = std::max(total.krylov_dim, static_cast<int>(m));
        total.achieved_tol = std::max(total.achieved_tol, change);
    }
    return total;
}

Complex resolvent_direct(const Liouvillian& liou, const Operator& a, const Operator& b, const DensityOperator& rho,
                         double omega, bool subtract_mean)
{
    require_dims(liou, a, b, rho);
    const Vector seed = seed_vector(b, rho, subtract_mean);
    const Vector f = Liouvillian::trace_functional(a.matrix());
    Complex acc(0.0, 0.0);
    for (const int blk : liou.support_blocks(seed)) {
        const BandedLU lu(liou.banded_block(blk, Complex(0.0, omega)));
        if (lu.singular()) throw Error(ErrorKind::Convergence, "resolvent evaluated on an eigenvalue");
        acc -= dot_plain(liou.gather(blk, f), lu.solve(liou.gather(blk, seed)));
    }
    return acc;
}

Complex integrated_correlation(const SteadyState& ss, const Operator& a, const Operator& b)
{
    const Liouvillian& liou = ss.liouvillian();
    require_dims(liou, a, b, ss.rho());
    const Vector seed = seed_vector(b, ss.rho(), true);
    const Vector f = Liouvillian::trace_functional(a.matrix());
    Complex acc(0.0, 0.0);
    for (const int blk : liou.support_blocks(seed)) {
        const Vector bl = liou.gather(blk, seed);
        Vector x;
        if (blk == ss.block()) {
            x = ss.solve_traceless(bl);
        } else {
            const BandedLU lu(liou.banded_block(blk));
            if (lu.singular()) throw Error(ErrorKind::DegenerateSteadyState, "second stationary sector found");
            x = -lu.solve(bl);
        }
        acc += dot_plain(liou.gather(blk, f), x);
    }
    return acc;
}

} // namespace sqz

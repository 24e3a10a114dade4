#include "sqz/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/NonLinearOptimization>

#include "sqz/errors.hpp"

namespace sqz {

namespace {

/// Vertex of the parabola through three samples, clamped to [x0, x2].
std::pair<double, double> parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2)
{
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double a = (d12 - d01) / (x2 - x0);
    if (a == 0.0 || !std::isfinite(a)) return {x1, y1};
    const double xv = std::clamp(0.5 * (x0 + x1) - d01 / (2.0 * a), std::min(x0, x2), std::max(x0, x2));
    return {xv, y0 + d01 * (xv - x0) + a * (xv - x0) * (xv - x1)};
}

double prominence_at(const std::vector<double>& v, std::size_t i)
{
    const double h = v[i];
    double left_min = h;
    for (std::size_t j = i; j-- > 0;) {
        if (v[j] > h) break;
        left_min = std::min(left_min, v[j]);
    }
    double right_min = h;
    for (std::size_t j = i + 1; j < v.size(); ++j) {
        if (v[j] > h) break;
        right_min = std::min(right_min, v[j]);
    }
    return h - std::max(left_min, right_min);
}

void require_samples(const Spectrum& s)
{
    if (s.omega.size() != s.values.size()) {
        throw Error(ErrorKind::DimensionMismatch, "spectrum grid and values differ in length");
    }
    if (s.omega.size() < 64) throw Error(ErrorKind::InvalidConfig, "spectrum needs at least 64 samples");
}

struct LorentzFunctor {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    LorentzFunctor(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {}
    int inputs() const { return 3; }
    int values() const { return static_cast<int>(x_.size()); }

    // p = (height, center, half width)
    int operator()(const InputType& p, ValueType& f) const
    {
        for (std::size_t i = 0; i < x_.size(); ++i) {
            const double u = (x_[i] - p(1)) / p(2);
            f(static_cast<Index>(i)) = p(0) / (1.0 + u * u) - y_[i];
        }
        return 0;
    }
    int df(const InputType& p, JacobianType& j) const
    {
        for (std::size_t i = 0; i < x_.size(); ++i) {
            const double u = (x_[i] - p(1)) / p(2);
            const double q = 1.0 / (1.0 + u * u);
            const auto r = static_cast<Index>(i);
            j(r, 0) = q;
            j(r, 1) = p(0) * q * q * 2.0 * u / p(2);
            j(r, 2) = p(0) * q * q * 2.0 * u * u / p(2);
        }
        return 0;
    }
    std::vector<double> x_, y_;
};

/// Linear interpolation of the half-maximum crossing walking from i in direction dir.
std::optional<double> half_crossing(const Spectrum& s, std::size_t i, int dir, double half)
{
    std::size_t j = i;
    while (true) {
        if ((dir < 0 && j == 0) || (dir > 0 && j + 1 >= s.values.size())) return std::nullopt;
        const std::size_t k = dir < 0 ? j - 1 : j + 1;
        if (s.values[k] <= half) {
            const double t = (s.values[j] - half) / (s.values[j] - s.values[k]);
            return s.omega[j] + t * (s.omega[k] - s.omega[j]);
        }
        j = k;
    }
}

} // namespace

std::vector<Peak> find_peaks(const Spectrum& s, double rel_threshold)
{
    require_samples(s);
    const auto& v = s.values;
    const double vmax = *std::max_element(v.begin(), v.end());
    std::vector<Peak> out;
    if (!(vmax > 0.0)) return out;
    const double floor = rel_threshold * vmax;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (!(v[i] > v[i - 1] && v[i] >= v[i + 1])) continue;
        const double prom = prominence_at(v, i);
        if (prom < floor) continue;
        const auto [x, y] = parabola_vertex(s.omega[i - 1], v[i - 1], s.omega[i], v[i], s.omega[i + 1], v[i + 1]);
        out.push_back({x, y, prom, i});
    }
    std::sort(out.begin(), out.end(), [](const Peak& a, const Peak& b) { return a.height > b.height; });
    return out;
}

double golden_section(const std::function<double(double)>& f, double lo, double hi, bool maximize, double tol)
{
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    auto score = [&](double x) { return maximize ? -f(x) : f(x); };
    double a = lo, b = hi;
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = score(c), fd = score(d);
    for (int it = 0; it < 200 && (b - a) > tol * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = score(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = score(d);
        }
    }
    return 0.5 * (a + b);
}

SpectrumFeatures anticrossing_features(const Spectrum& s, const std::function<double(double)>& exact)
{
    const auto peaks = find_peaks(s);
    SpectrumFeatures out;
    for (const auto& pk : peaks) {
        out.peak_positions.push_back(pk.omega);
        out.peak_heights.push_back(pk.height);
    }
    if (peaks.size() < 2) {
        out.status = "unresolved";
        return out;
    }
    const auto& v = s.values;
    const auto& w = s.omega;
    const std::size_t lo = std::min(peaks[0].index, peaks[1].index);
    const std::size_t hi = std::max(peaks[0].index, peaks[1].index);
    std::size_t imin = lo;
    for (std::size_t i = lo; i <= hi; ++i) {
        if (v[i] < v[imin]) imin = i;
    }
    double w_max = peaks[0].omega;
    double s_max = peaks[0].height;
    double w_min = w[imin];
    double s_min = v[imin];
    if (imin > 0 && imin + 1 < v.size()) {
        const auto [x, y] = parabola_vertex(w[imin - 1], v[imin - 1], w[imin], v[imin], w[imin + 1], v[imin + 1]);
        w_min = x;
        s_min = y;
    }
    if (exact) {
        const std::size_t ip = peaks[0].index;
        if (ip > 0 && ip + 1 < v.size()) {
            w_max = golden_section(exact, w[ip - 1], w[ip + 1], true);
            s_max = exact(w_max);
        }
        if (imin > 0 && imin + 1 < v.size()) {
            w_min = golden_section(exact, w[imin - 1], w[imin + 1], false);
            s_min = exact(w_min);
        }
    }
    out.chi = std::abs(w_max - w_min);
    out.omega_min = w_min;
    out.contrast = std::clamp(1.0 - s_min / s_max, 0.0, 1.0);
    return out;
}

LinewidthResult linewidth(const Spectrum& s)
{
    require_samples(s);
    const auto& v = s.values;
    const auto& w = s.omega;
    const auto it = std::max_element(v.begin(), v.end());
    const auto ip = static_cast<std::size_t>(it - v.begin());
    if (!(*it > 0.0)) throw Error(ErrorKind::InvalidConfig, "linewidth of an empty spectrum");
    if (ip == 0 || ip + 1 == v.size()) {
        throw Error(ErrorKind::GridEdge, "dominant peak sits on the grid edge; widen the omega grid");
    }
    const double half = 0.5 * *it;
    const auto left = half_crossing(s, ip, -1, half);
    const auto right = half_crossing(s, ip, +1, half);
    if (!left || !right) {
        throw Error(ErrorKind::GridEdge, "half-maximum of the dominant peak lies outside the grid; widen the omega grid");
    }
    const double step = std::abs(w[ip + 1] - w[ip - 1]) / 2.0;
    LinewidthResult out;
    out.center = parabola_vertex(w[ip - 1], v[ip - 1], w[ip], v[ip], w[ip + 1], v[ip + 1]).first;
    out.height = *it;
    const double hm_fwhm = *right - *left;
    out.resolution_limited = hm_fwhm < 3.0 * step;
    if (out.resolution_limited) {
        out.fwhm = hm_fwhm;
        out.fit_used = false;
        return out;
    }

    // Fit in scaled coordinates over +-3 half-widths.
    const double hw = 0.5 * hm_fwhm;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (std::abs(w[i] - out.center) <= 3.0 * hw) {
            xs.push_back((w[i] - out.center) / hw);
            ys.push_back(v[i] / out.height);
        }
    }
    LorentzFunctor functor(xs, ys);
    Eigen::VectorXd p(3);
    p << 1.0, 0.0, 1.0;
    Eigen::LevenbergMarquardt<LorentzFunctor> lm(functor);
    lm.minimize(p);
    Eigen::VectorXd resid(static_cast<Index>(xs.size()));
    functor(p, resid);
    double ynorm = 0.0;
    for (const double y : ys) ynorm += y * y;
    out.fit_residual = std::sqrt(resid.squaredNorm() / ynorm);
    if (out.fit_residual > 0.05 || !(p(2) != 0.0) || !std::isfinite(p(2))) {
        out.fwhm = hm_fwhm;
        out.fit_used = false;
    } else {
        out.fwhm = 2.0 * std::abs(p(2)) * hw;
        out.center += p(1) * hw;
        out.height *= p(0);
    }
    return out;
}

// ---------------------------------------------------------------------------

std::string to_string(SpectrumTarget t)
{
    return t == SpectrumTarget::Resonator ? "resonator" : "spin";
}

SpectrumTarget target_from_string(const std::string& name)
{
    if (name == "resonator") return SpectrumTarget::Resonator;
    if (name == "spin") return SpectrumTarget::Spin;
    throw Error(ErrorKind::InvalidConfig, "unknown spectrum target '" + name + "'");
}

Spectrum ModelSpectrum::sample(const std::vector<double>& omega) const
{
    return poles.sample(omega, to_string(target));
}

std::pair<double, double> ModelSpectrum::dominant_line(double omega_ref, double max_offset) const
{
    double best_height = -1.0;
    std::pair<double, double> best{omega_ref, 0.0};
    for (std::size_t k = 0; k < poles.poles.size(); ++k) {
        const Complex mu = poles.poles[k];
        if (std::abs(mu.imag() - omega_ref) > max_offset || !(mu.real() < 0.0)) continue;
        const double height = 2.0 * poles.weights[k].real() / -mu.real();
        if (height > best_height) {
            best_height = height;
            best = {mu.imag(), -mu.real()};
        }
    }
    if (best_height <= 0.0) {
        throw Error(ErrorKind::Convergence, "no decaying spectral line near the requested frequency");
    }
    return best;
}

ModelSpectrum model_spectrum(const ModelParams& p, const BathSpec& bath, SpectrumTarget target, double omega_center,
                             double half_window)
{
    const HilbertLayout layout = (target == SpectrumTarget::Resonator && p.g == 0.0)
                                     ? HilbertLayout::resonator_only(p.n_fock)
                                     : HilbertLayout::composite(p.n_fock);
    const OpenSystem sys = build_open_system(p, bath, layout);
    const Liouvillian liou(sys.hamiltonian, sys.collapse);
    const SteadyState ss(liou);

    const auto [a, a_dag] = physical_ladder(p);
    const Operator a_full = layout.resonator(a);
    const Operator a_dag_full = layout.resonator(a_dag);

    ModelSpectrum out;
    out.target = target;
    out.steady_residual = ss.residual();
    out.n_photons = ss.rho().expect(a_dag_full * a_full).real();

    PoleOptions opt;
    if (target == SpectrumTarget::Resonator) {
        opt.omega_center = omega_center;
        opt.window_lo = omega_center - half_window;
        opt.window_hi = omega_center + half_window;
        out.poles = pole_expansion(liou, a_dag_full, a_full, ss.rho(), opt);
    } else {
        const Operator sx = layout.spin(pauli_set().x);
        opt.omega_center = -omega_center;
        opt.window_lo = -omega_center - half_window;
        opt.window_hi = -omega_center + half_window;
        PoleExpansion raw = pole_expansion(liou, sx, sx, ss.rho(), opt);
        // S(-w): conjugate poles and weights.
        for (auto& mu : raw.poles) mu = std::conj(mu);
        for (auto& c : raw.weights) c = std::conj(c);
        out.poles = std::move(raw);
    }
    return out;
}

std::vector<double> centered_grid(double center, double half_width, int points)
{
    return uniform_grid(center - half_width, center + half_width, points);
}

SpinLine spin_line(const ModelParams& p, const BathSpec& bath, int points)
{
    const double ws = p.omega_s_t;
    const double reach = std::max(10.0 * p.g, 1e-3);
    const ModelSpectrum ms = model_spectrum(p, bath, SpectrumTarget::Spin, ws, reach);
    const auto [w_line, gamma_line] = ms.dominant_line(ws, reach);
    const double half = 40.0 * std::max(gamma_line, 1e-9);

    SpinLine out;
    out.spectrum = ms.sample(centered_grid(w_line, half, points));
    const LinewidthResult lw = linewidth(out.spectrum);
    const auto& w = out.spectrum.omega;
    const auto ip = static_cast<std::size_t>(
        std::max_element(out.spectrum.values.begin(), out.spectrum.values.end()) - out.spectrum.values.begin());
    const double peak = golden_section([&](double x) { return ms(x); }, w[ip - 1], w[ip + 1], true);
    out.shift = peak - ws;
    out.fwhm = lw.fwhm;
    out.half_width = 0.5 * lw.fwhm;
    out.fit_used = lw.fit_used;
    out.resolution_limited = lw.resolution_limited;
    return out;
}

ResonancePoint resonance_point(const ModelParams& p, const BathSpec& bath)
{
    const double om = squeezed_frame_params(p).omega_r;
    const double center = 0.5 * (om + p.omega_s_t);
    const double coarse = std::min(5.0 * p.kappa, 0.8 * center) + 0.5 * std::abs(om - p.omega_s_t);
    const ModelSpectrum ms = model_spectrum(p, bath, SpectrumTarget::Resonator, center, coarse);

    std::vector<double> grid = centered_grid(center, coarse);
    const std::vector<double> fine = centered_grid(center, 20.0 * p.g);
    grid.insert(grid.end(), fine.begin(), fine.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    ResonancePoint out;
    out.n_photons = ms.n_photons;
    out.spectrum = ms.sample(grid);
    out.features = anticrossing_features(out.spectrum, [&](double w) { return ms(w); });
    return out;
}

ResonancePoint spin_doublet(const ModelParams& p, const BathSpec& bath, int points)
{
    const double r = squeezed_frame_params(p).r;
    const double ws = p.omega_s_t;
    const double half = std::min(5.0 * p.kappa + 10.0 * p.g * std::cosh(r), 0.8 * ws);
    const ModelSpectrum ms = model_spectrum(p, bath, SpectrumTarget::Spin, ws, half);

    ResonancePoint out;
    out.n_photons = ms.n_photons;
    out.spectrum = ms.sample(centered_grid(ws, half, points));
    out.features = anticrossing_features(out.spectrum, [&](double w) { return ms(w); });
    return out;
}

double find_rc_analytic(const ModelParams& p)
{
    if (!(p.omega_s_t < p.omega_r_t) || !(p.omega_s_t > 0.0)) {
        std::ostringstream msg;
        msg << "omega_s = " << p.omega_s_t << " is not below omega_r = " << p.omega_r_t
            << "; squeezing cannot bring the resonator into resonance";
        throw Error(ErrorKind::NoCrossing, msg.str());
    }
    return 0.5 * std::acosh(p.omega_r_t / p.omega_s_t);
}

double find_rc_spectral(const ModelParams& p, double lo, double hi, int points)
{
    const double rc = find_rc_analytic(p);
    if (!(hi > lo)) {
        lo = std::max(0.0, rc - 0.2);
        hi = rc + 0.2;
    }
    const std::vector<double> rs = uniform_grid(lo, hi, points);
    std::vector<double> gaps;
    for (const double r : rs) {
        const ModelParams q = p.with_r(r);
        const double om = squeezed_frame_params(q).omega_r;
        const double center = 0.5 * (om + q.omega_s_t);
        const double half = 0.5 * std::abs(om - q.omega_s_t) + 5.0 * q.kappa + 10.0 * q.g;
        const ModelSpectrum ms = model_spectrum(q, bath::Vacuum{}, SpectrumTarget::Resonator, center, half);
        const auto peaks = find_peaks(ms.sample(centered_grid(center, half)));
        gaps.push_back(peaks.size() >= 2 ? std::abs(peaks[0].omega - peaks[1].omega) : 0.0);
    }
    // Minimum gap; a run of merged (zero-gap) points resolves to its middle.
    const double gmin = *std::min_element(gaps.begin(), gaps.end());
    std::size_t first = 0;
    while (gaps[first] != gmin) ++first;
    std::size_t last = first;
    while (last + 1 < gaps.size() && gaps[last + 1] == gmin) ++last;
    if (last > first) return 0.5 * (rs[first] + rs[last]);
    const std::size_t i = first;
    if (i == 0 || i + 1 == rs.size()) return rs[i];
    return parabola_vertex(rs[i - 1], gaps[i - 1], rs[i], gaps[i], rs[i + 1], gaps[i + 1]).first;
}

RcResult find_rc(const ModelParams& p, bool spectral)
{
    RcResult out;
    out.analytic = find_rc_analytic(p);
    if (spectral) out.spectral = find_rc_spectral(p);
    return out;
}

} // namespace sqz

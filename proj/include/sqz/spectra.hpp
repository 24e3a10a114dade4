#pragma once

// Spectra of the coupled model and feature extraction: peaks, anticrossing
// gap and contrast, linewidth, dispersive shift, resonance point r_c.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sqz/lindblad.hpp"
#include "sqz/model.hpp"

namespace sqz {

struct Peak {
    double omega = 0.0;
    double height = 0.0;
    double prominence = 0.0;
    std::size_t index = 0;  // grid sample nearest the refined position
};

/// Local maxima whose prominence is at least rel_threshold * global max,
/// refined by three-point quadratic interpolation, sorted by height
/// (descending). Requires >= 64 samples; an all-zero spectrum gives no peaks.
std::vector<Peak> find_peaks(const Spectrum& s, double rel_threshold = 0.01);

struct SpectrumFeatures {
    std::vector<double> peak_positions;
    std::vector<double> peak_heights;
    std::optional<double> chi;
    std::optional<double> contrast;
    std::optional<double> omega_min;  // position of the inter-peak minimum
    std::optional<double> linewidth;
    std::optional<double> shift;
    bool resolution_limited = false;
    std::string status = "ok";  // "unresolved" when fewer than two peaks
};

/// chi = |w(S_max) - w(S_min)| and contrast = 1 - S_min / S_max, with S_min
/// the minimum between the two dominant peaks. When `exact` is given, the
/// extrema are polished on it (golden section within one grid step).
SpectrumFeatures anticrossing_features(const Spectrum& s, const std::function<double(double)>& exact = {});

struct LinewidthResult {
    double fwhm = 0.0;
    double center = 0.0;
    double height = 0.0;
    bool fit_used = true;         // false: half-maximum crossings were used
    double fit_residual = 0.0;    // relative rms residual of the Lorentzian fit
    bool resolution_limited = false;
};

/// FWHM of the dominant peak from a Lorentzian least-squares fit over +-3
/// half-widths, falling back to half-maximum crossings when the fit residual
/// exceeds 5%. Throws GridEdge when the peak or its half-maximum points are
/// not inside the grid.
LinewidthResult linewidth(const Spectrum& s);

/// Extremum of f on [lo, hi] by golden-section search.
double golden_section(const std::function<double(double)>& f, double lo, double hi, bool maximize,
                      double tol = 1e-12);

// ---------------------------------------------------------------------------
// Spectra of the model

enum class SpectrumTarget { Resonator, Spin };

std::string to_string(SpectrumTarget t);
SpectrumTarget target_from_string(const std::string& name);

/// Pole expansion of a model spectrum at one parameter point.
/// Resonator: <a^dag(tau) a(0)> with the physical a, peaks at +Omega_r.
/// Spin: <sx(tau) sx(0)> reported at -omega so that the spin line sits at
/// +omega_s + shift.
struct ModelSpectrum {
    PoleExpansion poles;
    SpectrumTarget target = SpectrumTarget::Resonator;
    double n_photons = 0.0;    // Tr(a^dag a rho_ss)
    double steady_residual = 0.0;

    double operator()(double omega) const { return poles.spectrum(omega); }
    Spectrum sample(const std::vector<double>& omega) const;
    /// Frequency and half-width of the pole that dominates the peak height
    /// near omega_ref.
    std::pair<double, double> dominant_line(double omega_ref, double max_offset) const;
};

/// Builds the open system in layout composite(N) (resonator-only when g = 0),
/// solves the steady state and expands the spectrum around omega_center.
ModelSpectrum model_spectrum(const ModelParams& p, const BathSpec& bath, SpectrumTarget target,
                             double omega_center, double half_window);

/// Uniform grid of `points` samples on [center - half_width, center + half_width].
std::vector<double> centered_grid(double center, double half_width, int points = 2001);

struct SpinLine {
    double shift = 0.0;       // peak position - omega_s
    double fwhm = 0.0;
    double half_width = 0.0;  // fwhm / 2, comparable with a decay rate
    bool fit_used = true;
    bool resolution_limited = false;
    Spectrum spectrum;
};

/// Spin spectrum on omega_s + shift +- 20 linewidths (2001 points), peak
/// position polished on the pole expansion, linewidth from the sampled grid.
SpinLine spin_line(const ModelParams& p, const BathSpec& bath = bath::Vacuum{}, int points = 2001);

struct ResonancePoint {
    double n_photons = 0.0;
    SpectrumFeatures features;
    Spectrum spectrum;
};

/// Resonator spectrum around the midpoint of Omega_r and omega_s on the union
/// of a coarse grid (+-min(5 kappa, 0.8 centre) plus half the detuning, 2001
/// points) and a fine grid (+-20 g, 2001 points), with anticrossing features
/// polished on the pole expansion.
ResonancePoint resonance_point(const ModelParams& p, const BathSpec& bath = bath::Vacuum{});

/// Spin spectrum around omega_s over +-min(5 kappa + 10 g cosh r, 0.8 omega_s)
/// with anticrossing features, used to look for a split spin line.
ResonancePoint spin_doublet(const ModelParams& p, const BathSpec& bath, int points = 4001);

struct RcResult {
    double analytic = 0.0;
    std::optional<double> spectral;
};

/// r_c = arccosh(omega_r / omega_s) / 2. Throws NoCrossing for omega_s >= omega_r.
double find_rc_analytic(const ModelParams& p);

/// Scans r over [lo, hi] (default analytic +- 0.2) and returns the r where the
/// two dominant resonator-spectrum peaks are closest, refined by a parabola.
double find_rc_spectral(const ModelParams& p, double lo = 0.0, double hi = 0.0, int points = 17);

RcResult find_rc(const ModelParams& p, bool spectral = true);

} // namespace sqz

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "sqz/errors.hpp"
#include "sqz/moments.hpp"
#include "sqz/spectra.hpp"

using namespace sqz;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double lorentzian(double w, double center, double fwhm, double height)
{
    const double h = 0.5 * fwhm;
    return height * h * h / ((w - center) * (w - center) + h * h);
}

Spectrum sampled(const std::function<double(double)>& f, double center, double half_width, int points)
{
    Spectrum s;
    s.omega = centered_grid(center, half_width, points);
    for (const double w : s.omega) s.values.push_back(f(w));
    return s;
}

} // namespace

TEST_CASE("peak finding", "[spectra]")
{
    const auto f = [](double w) { return lorentzian(w, 0.9, 0.02, 1.0) + lorentzian(w, 1.05, 0.03, 0.5); };
    const Spectrum s = sampled(f, 1.0, 0.3, 2001);
    const auto peaks = find_peaks(s);
    REQUIRE(peaks.size() == 2);
    CHECK_THAT(peaks[0].omega, WithinAbs(0.9, 1e-4));
    CHECK_THAT(peaks[1].omega, WithinAbs(1.05, 1e-4));
    CHECK(peaks[0].height > peaks[1].height);

    SECTION("scale invariance")
    {
        Spectrum scaled = s;
        for (auto& v : scaled.values) v *= 1e-7;
        const auto again = find_peaks(scaled);
        REQUIRE(again.size() == 2);
        CHECK(again[0].omega == peaks[0].omega);
        CHECK(again[1].omega == peaks[1].omega);
    }

    SECTION("weak peaks fall below the prominence threshold")
    {
        const auto g = [](double w) { return lorentzian(w, 0.9, 0.02, 1.0) + lorentzian(w, 1.05, 0.03, 0.005); };
        CHECK(find_peaks(sampled(g, 1.0, 0.3, 2001)).size() == 1);
        CHECK(find_peaks(sampled(g, 1.0, 0.3, 2001), 0.001).size() == 2);
    }

    SECTION("degenerate inputs")
    {
        CHECK(find_peaks(sampled([](double) { return 0.0; }, 1.0, 0.3, 2001)).empty());
        CHECK_THROWS_AS(find_peaks(sampled(f, 1.0, 0.3, 32)), Error);
    }
}

TEST_CASE("lorentzian linewidth", "[spectra]")
{
    const double fwhm = 0.04;
    const auto f = [&](double w) { return lorentzian(w, 1.0, fwhm, 2.0); };
    const LinewidthResult a = linewidth(sampled(f, 1.0, 20 * fwhm, 2001));
    CHECK(a.fit_used);
    CHECK_THAT(a.fwhm, WithinRel(fwhm, 1e-3));
    CHECK_THAT(a.center, WithinAbs(1.0, 1e-6));
    const LinewidthResult b = linewidth(sampled(f, 1.0, 20 * fwhm, 4001));
    CHECK(std::abs(a.fwhm - b.fwhm) < 2e-3 * b.fwhm);

    // A peak at the grid edge is refused.
    try {
        linewidth(sampled(f, 1.0 + 20 * fwhm, 20 * fwhm, 2001));
        FAIL("expected GridEdge");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::GridEdge);
    }
}

TEST_CASE("anticrossing features of a synthetic doublet", "[spectra]")
{
    const auto f = [](double w) { return lorentzian(w, 0.93, 0.02, 1.0) + lorentzian(w, 0.97, 0.02, 0.8); };
    const Spectrum s = sampled(f, 0.95, 0.15, 2001);
    const SpectrumFeatures x = anticrossing_features(s, f);
    REQUIRE(x.status == "ok");
    REQUIRE(x.chi);
    REQUIRE(x.contrast);
    const double w_max = golden_section(f, 0.92, 0.94, true);
    const double w_min = golden_section(f, 0.94, 0.965, false);
    CHECK_THAT(*x.chi, WithinRel(std::abs(w_max - w_min), 1e-6));
    CHECK_THAT(*x.contrast, WithinRel(1.0 - f(w_min) / f(w_max), 1e-6));
    REQUIRE(x.omega_min);
    CHECK_THAT(*x.omega_min, WithinAbs(w_min, 1e-6));

    const auto single = [](double w) { return lorentzian(w, 0.95, 0.02, 1.0); };
    const SpectrumFeatures y = anticrossing_features(sampled(single, 0.95, 0.15, 2001), single);
    CHECK(y.status == "unresolved");
    CHECK_FALSE(y.chi);
}

TEST_CASE("golden section", "[spectra]")
{
    const auto f = [](double x) { return -(x - 0.3) * (x - 0.3); };
    CHECK_THAT(golden_section(f, 0.0, 1.0, true), WithinAbs(0.3, 1e-8));
    CHECK_THAT(golden_section([](double x) { return std::cos(x); }, 2.0, 4.0, false), WithinAbs(M_PI, 1e-7));
}

TEST_CASE("empty resonator has no spectrum", "[spectra]")
{
    ModelParams p = ModelParams::defaults();
    p.g = 0.0;
    p.n_fock = 10;
    const ModelSpectrum ms = model_spectrum(p, bath::Vacuum{}, SpectrumTarget::Resonator, 1.0, 0.2);
    for (const double w : centered_grid(1.0, 0.2, 101)) CHECK(ms(w) == 0.0);
    CHECK(ms.n_photons == 0.0);
}

TEST_CASE("dispersive spin line", "[spectra]")
{
    const ModelParams p = ModelParams::defaults().with_r(0.3);
    const SpinLine line = spin_line(p);
    // Reference values from an independent dense eigendecomposition.
    CHECK_THAT(line.shift, WithinRel(-1.300578e-4, 1e-4));
    CHECK_THAT(line.half_width, WithinRel(1.1553231724420594e-5, 1e-3));
    CHECK(line.fit_used);

    const AnalyticRates rates = analytic_rates(p);
    CHECK_THAT(line.shift, WithinRel(rates.dispersive_shift, 0.02));
    CHECK_THAT(line.half_width, WithinRel(rates.gamma_total, 0.02));

    const double peak = *std::max_element(line.spectrum.values.begin(), line.spectrum.values.end());
    const double low = *std::min_element(line.spectrum.values.begin(), line.spectrum.values.end());
    CHECK(low >= -1e-3 * peak);
}

TEST_CASE("resonance point", "[spectra]")
{
    ModelParams p = ModelParams::defaults();
    const double rc = find_rc_analytic(p);
    CHECK_THAT(rc, WithinRel(0.5 * std::log(3.0), 1e-14));

    const ResonancePoint at = resonance_point(p.with_r(rc));
    REQUIRE(at.features.status == "ok");
    REQUIRE(at.features.peak_positions.size() >= 2);
    const double om = squeezed_frame_params(p.with_r(rc)).omega_r;
    for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(at.features.peak_positions[k] - om) < 0.05);
    const double peak = *std::max_element(at.spectrum.values.begin(), at.spectrum.values.end());
    const double low = *std::min_element(at.spectrum.values.begin(), at.spectrum.values.end());
    CHECK(low >= -1e-3 * peak);

    p.n_fock = 20;
    CHECK_THAT(find_rc_spectral(p), WithinAbs(rc, 0.02));

    ModelParams above = ModelParams::defaults();
    above.omega_s_t = 1.2;
    try {
        find_rc_analytic(above);
        FAIL("expected NoCrossing");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoCrossing);
    }
}

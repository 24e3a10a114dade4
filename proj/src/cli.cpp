#include "sqz/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sqz/errors.hpp"
#include "sqz/liouvillian.hpp"
#include "sqz/moments.hpp"
#include "sqz/spectra.hpp"

#ifndef SQZ_VERSION
#define SQZ_VERSION "0.0.0"
#endif

namespace sqz::cli {

const char* const kVersion = SQZ_VERSION;

using json = nlohmann::json;

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

Error config_error(const std::string& message)
{
    return Error(ErrorKind::InvalidConfig, message);
}

double parse_double(const std::string& key, const std::string& value)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw config_error("key '" + key + "': '" + value + "' is not a number");
    }
    if (used != value.size()) throw config_error("key '" + key + "': '" + value + "' is not a number");
    return v;
}

int parse_int(const std::string& key, const std::string& value)
{
    const double v = parse_double(key, value);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
        throw config_error("key '" + key + "': '" + value + "' is not an integer");
    }
    return static_cast<int>(v);
}

const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys = {
        "omega_r", "omega_s", "g", "kappa", "r", "lambda", "n_fock", "frame",
        "bath.kind", "bath.nbar", "bath.alpha_re", "bath.alpha_im",
        "sweep.axis", "sweep.start", "sweep.stop", "sweep.points",
        "sweep2.axis", "sweep2.start", "sweep2.stop", "sweep2.points",
        "out_dir", "target",
        "spectrum.center", "spectrum.half_width", "spectrum.points",
        "anticross.resonant", "frame_compare.resonant",
        "n_fock.high", "n_fock.switch_r",
        "truncation.r", "truncation.n", "truncation.frames",
        "photon.r", "tau.stop", "tau.points",
    };
    return keys;
}

std::optional<SweepAxis> sweep_from(const KeyValues& kv, const std::string& prefix)
{
    const auto axis = kv.find(prefix + ".axis");
    if (axis == kv.end()) {
        for (const auto& suffix : {".start", ".stop", ".points"}) {
            if (kv.count(prefix + suffix)) throw config_error(prefix + suffix + " given without " + prefix + ".axis");
        }
        return std::nullopt;
    }
    static const std::set<std::string> axes = {"r", "kappa", "omega_s", "tau"};
    if (!axes.count(axis->second)) {
        throw config_error("unknown sweep axis '" + axis->second + "' (expected r, kappa, omega_s or tau)");
    }
    SweepAxis s;
    s.axis = axis->second;
    auto need = [&](const std::string& key) {
        const auto it = kv.find(prefix + "." + key);
        if (it == kv.end()) throw config_error("missing " + prefix + "." + key);
        return it->second;
    };
    s.start = parse_double(prefix + ".start", need("start"));
    s.stop = parse_double(prefix + ".stop", need("stop"));
    s.points = parse_int(prefix + ".points", need("points"));
    if (s.points < 1) throw config_error(prefix + ".points must be >= 1");
    return s;
}

std::string status_of(const std::exception& e)
{
    if (const auto* err = dynamic_cast<const Error*>(&e)) return std::string(to_string(err->kind()));
    return "error";
}

const double kNaN = std::numeric_limits<double>::quiet_NaN();

json optional_json(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

json features_json(const SpectrumFeatures& f)
{
    json peaks = json::array();
    for (std::size_t k = 0; k < f.peak_positions.size(); ++k) {
        peaks.push_back({{"omega", f.peak_positions[k]}, {"height", f.peak_heights[k]}});
    }
    return {{"peaks", peaks},
            {"chi", optional_json(f.chi)},
            {"contrast", optional_json(f.contrast)},
            {"omega_min", optional_json(f.omega_min)},
            {"linewidth", optional_json(f.linewidth)},
            {"shift", optional_json(f.shift)},
            {"resolution_limited", f.resolution_limited},
            {"status", f.status}};
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot write '" + path.string() + "'");
    out << text;
}

void write_spectrum_csv(const std::filesystem::path& path, const std::string& header, const Spectrum& s)
{
    CsvWriter csv(path, header, {"omega", "S"});
    for (std::size_t i = 0; i < s.omega.size(); ++i) csv.row({format_number(s.omega[i]), format_number(s.values[i])});
    csv.flush();
}

std::string flag_cell(bool unreliable)
{
    return unreliable ? "1" : "0";
}

/// Two dominant peak positions in ascending order, NaN when absent.
std::pair<double, double> two_peaks(const SpectrumFeatures& f)
{
    double p1 = f.peak_positions.size() > 0 ? f.peak_positions[0] : kNaN;
    double p2 = f.peak_positions.size() > 1 ? f.peak_positions[1] : kNaN;
    if (p1 > p2) std::swap(p1, p2);
    return {p1, p2};
}

const SweepAxis& require_sweep(const RunConfig& cfg, const std::string& axis, const std::string& command)
{
    if (!cfg.sweep || cfg.sweep->axis != axis) {
        throw config_error(command + " needs sweep.axis = " + axis);
    }
    return *cfg.sweep;
}

} // namespace

// ---------------------------------------------------------------------------
// Configuration

KeyValues parse_key_values(std::istream& in, const std::string& source)
{
    KeyValues kv;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error(source + ":" + std::to_string(number) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key.empty()) throw config_error(source + ":" + std::to_string(number) + ": empty key");
        if (!kv.emplace(key, value).second) {
            throw config_error(source + ":" + std::to_string(number) + ": duplicate key '" + key + "'");
        }
    }
    return kv;
}

KeyValues load_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw config_error("cannot read config file '" + path.string() + "'");
    return parse_key_values(in, path.string());
}

void apply_override(KeyValues& kv, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw config_error("--set expects key=value, got '" + assignment + "'");
    const std::string key = trim(assignment.substr(0, eq));
    if (key.empty()) throw config_error("--set expects key=value, got '" + assignment + "'");
    kv[key] = trim(assignment.substr(eq + 1));
}

std::vector<double> SweepAxis::values() const
{
    if (points == 1) return {start};
    return uniform_grid(start, stop, points);
}

BathSpec bath_from_name(const std::string& kind, double n_bar, Complex alpha)
{
    if (kind == "vacuum") return bath::Vacuum{};
    if (kind == "thermal") {
        if (n_bar < 0.0) throw config_error("bath.nbar must be >= 0");
        return bath::Thermal{n_bar};
    }
    if (kind == "coherent") return bath::CoherentDrive{alpha};
    if (kind == "squeezed_vacuum_reference" || kind == "squeezed_reference") return bath::SqueezedVacuumReference{};
    throw config_error("unknown bath.kind '" + kind +
                       "' (expected vacuum, thermal, coherent or squeezed_vacuum_reference)");
}

RunConfig RunConfig::from(const KeyValues& kv)
{
    for (const auto& [key, value] : kv) {
        if (!known_keys().count(key)) throw config_error("unknown config key '" + key + "'");
    }
    RunConfig cfg;
    cfg.raw = kv;
    ModelParams& p = cfg.model;
    p.omega_r_t = cfg.number("omega_r", p.omega_r_t);
    p.omega_s_t = cfg.number("omega_s", p.omega_s_t);
    p.g = cfg.number("g", p.g);
    p.kappa = cfg.number("kappa", p.kappa);
    p.n_fock = cfg.integer("n_fock", p.n_fock);
    if (kv.count("frame")) p.frame = frame_from_string(kv.at("frame"));
    if (kv.count("r") && kv.count("lambda")) throw config_error("give either r or lambda, not both");
    if (kv.count("r")) p = p.with_r(cfg.number("r", 0.0));
    if (kv.count("lambda")) p.lambda = cfg.number("lambda", 0.0);
    p.validate();

    cfg.bath = bath_from_name(cfg.text("bath.kind", "vacuum"), cfg.number("bath.nbar", 0.0),
                              Complex(cfg.number("bath.alpha_re", 0.0), cfg.number("bath.alpha_im", 0.0)));
    cfg.sweep = sweep_from(kv, "sweep");
    cfg.sweep2 = sweep_from(kv, "sweep2");
    cfg.out_dir = cfg.text("out_dir", ".");

    for (const auto* s : {&cfg.sweep, &cfg.sweep2}) {
        if (!*s || (*s)->axis == "tau") continue;
        for (const double v : (*s)->values()) cfg.at((*s)->axis, v).validate();
    }
    return cfg;
}

double RunConfig::number(const std::string& key, double fallback) const
{
    const auto it = raw.find(key);
    return it == raw.end() ? fallback : parse_double(key, it->second);
}

int RunConfig::integer(const std::string& key, int fallback) const
{
    const auto it = raw.find(key);
    return it == raw.end() ? fallback : parse_int(key, it->second);
}

bool RunConfig::flag(const std::string& key, bool fallback) const
{
    const auto it = raw.find(key);
    if (it == raw.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw config_error("key '" + key + "': expected true or false");
}

std::string RunConfig::text(const std::string& key, const std::string& fallback) const
{
    const auto it = raw.find(key);
    return it == raw.end() ? fallback : it->second;
}

std::vector<double> RunConfig::numbers(const std::string& key, const std::vector<double>& fallback) const
{
    const auto it = raw.find(key);
    if (it == raw.end()) return fallback;
    std::vector<double> out;
    for (const auto& item : split(it->second, ',')) out.push_back(parse_double(key, item));
    if (out.empty()) throw config_error("key '" + key + "' is empty");
    return out;
}

std::vector<std::string> RunConfig::words(const std::string& key, const std::vector<std::string>& fallback) const
{
    const auto it = raw.find(key);
    if (it == raw.end()) return fallback;
    auto out = split(it->second, ',');
    if (out.empty()) throw config_error("key '" + key + "' is empty");
    return out;
}

ModelParams RunConfig::at(const std::string& axis, double value) const
{
    ModelParams p = model;
    if (axis == "r") {
        p = p.with_r(value);
    } else if (axis == "kappa") {
        p.kappa = value;
    } else if (axis == "omega_s") {
        p.omega_s_t = value;
    } else {
        throw config_error("axis '" + axis + "' does not map onto a model parameter");
    }
    return p;
}

// ---------------------------------------------------------------------------
// Output

std::string header_block(const std::string& command, const RunConfig& cfg)
{
    const ModelParams& p = cfg.model;
    std::ostringstream out;
    out << "# sqz " << kVersion << "\n";
    out << "# command: " << command << "\n";
    out << "# frame: " << to_string(p.frame) << "\n";
    out << "# n_fock: " << p.n_fock << "\n";
    out << "# ordering: resonator-spin\n";
    out << "# bath: " << bath_name(cfg.bath) << "\n";
    out << "# omega_r: " << format_number(p.omega_r_t) << "\n";
    out << "# omega_s: " << format_number(p.omega_s_t) << "\n";
    out << "# g: " << format_number(p.g) << "\n";
    out << "# kappa: " << format_number(p.kappa) << "\n";
    out << "# lambda: " << format_number(p.lambda) << "\n";
    out << "# r: " << format_number(squeezed_frame_params(p).r) << "\n";
    for (const auto& [key, value] : cfg.raw) out << "# config." << key << ": " << value << "\n";
    return out.str();
}

std::string format_number(double v)
{
    if (!std::isfinite(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::string& header,
                     const std::vector<std::string>& columns)
    : path_(path), text_(header), columns_(columns.size())
{
    row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells)
{
    if (cells.size() != columns_) {
        throw Error(ErrorKind::DimensionMismatch, "CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                                                      std::to_string(columns_));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
}

void CsvWriter::flush()
{
    write_text(path_, text_);
}

std::string error_json(const std::exception& e)
{
    return json{{"error", status_of(e)}, {"message", e.what()}}.dump();
}

// ---------------------------------------------------------------------------
// Worker pool

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& f)
{
    const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = n;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------
// Numeric studies

int truncation_for(double r, int n_fock, int n_high, double r_switch)
{
    return r > r_switch ? std::max(n_fock, n_high) : n_fock;
}

double eta_numeric(const ModelParams& p, const BathSpec& bath)
{
    if (p.g != 0.0) throw Error(ErrorKind::UnsupportedCombination, "photon-number noise is computed for g = 0");
    const HilbertLayout layout = HilbertLayout::resonator_only(p.n_fock);
    const OpenSystem sys = build_open_system(p, bath, layout);
    const Liouvillian liou(sys.hamiltonian, sys.collapse);
    const SteadyState ss(liou);
    const auto [a, a_dag] = physical_ladder(p);
    const Operator n = a_dag * a;
    return 2.0 * integrated_correlation(ss, n, n).real();
}

CorrelationSeries photon_correlation_numeric(const ModelParams& p, const BathSpec& bath,
                                             const std::vector<double>& tau)
{
    if (p.g != 0.0) throw Error(ErrorKind::UnsupportedCombination, "the photon correlator is computed for g = 0");
    const HilbertLayout layout = HilbertLayout::resonator_only(p.n_fock);
    const OpenSystem sys = build_open_system(p, bath, layout);
    const Liouvillian liou(sys.hamiltonian, sys.collapse);
    const DensityOperator rho = steady_state(liou);
    const auto [a, a_dag] = physical_ladder(p);
    const Operator n = (a_dag * a).relabeled("n");
    return two_time_correlation(liou, n, n, rho, tau, false);
}

std::vector<double> photon_correlation_closed(const ModelParams& p, const BathSpec& bath,
                                              const std::vector<double>& tau)
{
    const MomentSystem sys = moment_generator(p, bath, MomentOrder::Quadratic4);
    const ClosedCorrelator corr = qrt_correlation_closed(sys, "n");
    const Index i = sys.index_of("n");
    std::vector<double> out;
    out.reserve(tau.size());
    for (const double t : tau) out.push_back(corr.component(t, i).real());
    return out;
}

std::uint64_t operator_hash(const Operator& op)
{
    std::uint64_t h = 1469598103934665603ULL;
    const auto* bytes = reinterpret_cast<const unsigned char*>(op.matrix().data());
    const std::size_t count = static_cast<std::size_t>(op.matrix().size()) * sizeof(Complex);
    for (std::size_t i = 0; i < count; ++i) {
        h ^= bytes[i];
        h *= 1099511628211ULL;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Commands

CommandResult cmd_spectrum(const RunConfig& cfg, const std::string& target_name, int /*jobs*/)
{
    const SpectrumTarget target = target_from_string(target_name);
    const ModelParams& p = cfg.model;
    const std::string header = header_block("spectrum " + target_name, cfg);
    Spectrum spectrum;
    SpectrumFeatures features;

    if (target == SpectrumTarget::Resonator) {
        const double om = squeezed_frame_params(p).omega_r;
        const bool custom = cfg.raw.count("spectrum.center") || cfg.raw.count("spectrum.half_width");
        if (custom) {
            const double center = cfg.number("spectrum.center", om);
            const double half = cfg.number("spectrum.half_width", std::min(5.0 * p.kappa + 20.0 * p.g, 0.8 * center));
            const ModelSpectrum ms = model_spectrum(p, cfg.bath, target, center, half);
            spectrum = ms.sample(centered_grid(center, half, cfg.integer("spectrum.points", 2001)));
            features = anticrossing_features(spectrum, [&](double w) { return ms(w); });
        } else {
            const ResonancePoint rp = resonance_point(p, cfg.bath);
            spectrum = rp.spectrum;
            features = rp.features;
        }
        if (!features.peak_positions.empty()) features.shift = features.peak_positions.front() - om;
    } else {
        const SpinLine line = spin_line(p, cfg.bath, cfg.integer("spectrum.points", 2001));
        spectrum = line.spectrum;
        features = anticrossing_features(spectrum);
        features.shift = line.shift;
        features.linewidth = line.fwhm;
        features.resolution_limited = line.resolution_limited;
    }
    if (target == SpectrumTarget::Resonator && !features.peak_positions.empty() && !features.linewidth) {
        try {
            const LinewidthResult lw = linewidth(spectrum);
            features.linewidth = lw.fwhm;
            features.resolution_limited = lw.resolution_limited;
        } catch (const Error&) {
            features.linewidth.reset();
        }
    }

    CommandResult out;
    const auto csv = cfg.out_dir / ("spectrum_" + target_name + ".csv");
    const auto sidecar = cfg.out_dir / ("spectrum_" + target_name + ".features.json");
    write_spectrum_csv(csv, header, spectrum);
    write_text(sidecar, features_json(features).dump(2) + "\n");
    out.files = {csv, sidecar};
    return out;
}

CommandResult cmd_anticross(const RunConfig& cfg, int jobs)
{
    const SweepAxis& sweep = require_sweep(cfg, "r", "anticross");
    const bool resonant = cfg.flag("anticross.resonant", true);
    const std::vector<double> rs = sweep.values();

    struct Row {
        double omega_s = kNaN, p1 = kNaN, p2 = kNaN, chi = kNaN, contrast = kNaN, n = kNaN;
        std::string status = "ok";
    };
    std::vector<Row> rows(rs.size());
    parallel_for(rs.size(), jobs, [&](std::size_t i) {
        Row& row = rows[i];
        try {
            ModelParams p = cfg.at("r", rs[i]);
            if (resonant) p.omega_s_t = squeezed_frame_params(p).omega_r;
            row.omega_s = p.omega_s_t;
            const ResonancePoint rp = resonance_point(p, cfg.bath);
            row.n = rp.n_photons;
            std::tie(row.p1, row.p2) = two_peaks(rp.features);
            row.chi = rp.features.chi.value_or(kNaN);
            row.contrast = rp.features.contrast.value_or(kNaN);
            row.status = rp.features.status;
        } catch (const std::exception& e) {
            row.status = status_of(e);
        }
    });

    CommandResult out;
    CsvWriter csv(cfg.out_dir / "anticross.csv", header_block("anticross", cfg),
                  {"r", "omega_s", "peak1", "peak2", "chi", "contrast", "n_photons", "status"});
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const Row& r = rows[i];
        csv.row({format_number(rs[i]), format_number(r.omega_s), format_number(r.p1), format_number(r.p2),
                 format_number(r.chi), format_number(r.contrast), format_number(r.n), r.status});
        if (r.status != "ok" && r.status != "unresolved") out.exit_code = 2;
    }
    csv.flush();
    out.files = {csv.path()};
    return out;
}

CommandResult cmd_shift_width(const RunConfig& cfg, int jobs)
{
    const SweepAxis& sweep = require_sweep(cfg, "r", "shift-width");
    const std::vector<double> rs = sweep.values();

    struct Row {
        double shift = kNaN, shift_an = kNaN, width = kNaN, gamma_an = kNaN;
        bool unreliable = false;
        std::string status = "ok";
    };
    std::vector<Row> rows(rs.size());
    parallel_for(rs.size(), jobs, [&](std::size_t i) {
        Row& row = rows[i];
        const ModelParams p = cfg.at("r", rs[i]);
        try {
            const AnalyticRates a = analytic_rates(p);
            row.shift_an = a.dispersive_shift;
            row.gamma_an = a.gamma_total;
            row.unreliable = !a.reliable;
        } catch (const std::exception& e) {
            row.unreliable = true;
            row.status = status_of(e);
        }
        try {
            const SpinLine line = spin_line(p, cfg.bath);
            row.shift = line.shift;
            row.width = line.half_width;
        } catch (const std::exception& e) {
            row.status = status_of(e);
        }
    });

    CommandResult out;
    CsvWriter csv(cfg.out_dir / "shift_width.csv", header_block("shift-width", cfg),
                  {"r", "shift_numeric", "shift_analytic", "width_numeric", "gamma_total_analytic", "reliability_flag",
                   "status"});
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const Row& r = rows[i];
        csv.row({format_number(rs[i]), format_number(r.shift), format_number(r.shift_an), format_number(r.width),
                 format_number(r.gamma_an), flag_cell(r.unreliable), r.status});
        if (r.status != "ok" && r.status != "ResonanceDivergence") out.exit_code = 2;
    }
    csv.flush();
    out.files = {csv.path()};
    return out;
}

CommandResult cmd_ratio_map(const RunConfig& cfg, int jobs)
{
    const SweepAxis& sweep = require_sweep(cfg, "r", "ratio-map");
    if (!cfg.sweep2 || cfg.sweep2->axis != "kappa") throw config_error("ratio-map needs sweep2.axis = kappa");
    const std::vector<double> rs = sweep.values();
    const std::vector<double> kappas = cfg.sweep2->values();
    const int n_high = cfg.integer("n_fock.high", 60);
    const double r_switch = cfg.number("n_fock.switch_r", 1.2);

    struct Row {
        int n_fock = 0;
        double numeric = kNaN, analytic = kNaN;
        bool unreliable = false;
        std::string status = "ok";
    };
    std::vector<Row> rows(rs.size() * kappas.size());
    parallel_for(rows.size(), jobs, [&](std::size_t k) {
        Row& row = rows[k];
        const double r = rs[k % rs.size()];
        ModelParams p = cfg.at("r", r);
        p.kappa = kappas[k / rs.size()];
        p.n_fock = truncation_for(r, p.n_fock, n_high, r_switch);
        row.n_fock = p.n_fock;
        try {
            const AnalyticRates a = analytic_rates(p);
            row.analytic = std::abs(a.dispersive_shift) / a.gamma_total;
            row.unreliable = !a.reliable;
        } catch (const std::exception& e) {
            row.unreliable = true;
            row.status = status_of(e);
        }
        try {
            const SpinLine line = spin_line(p, cfg.bath);
            row.numeric = std::abs(line.shift) / line.half_width;
        } catch (const std::exception& e) {
            row.status = status_of(e);
        }
    });

    CommandResult out;
    CsvWriter csv(cfg.out_dir / "ratio_map.csv", header_block("ratio-map", cfg),
                  {"r", "kappa", "n_fock", "ratio_numeric", "ratio_analytic", "reliability_flag", "status"});
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const Row& r = rows[k];
        csv.row({format_number(rs[k % rs.size()]), format_number(kappas[k / rs.size()]), std::to_string(r.n_fock),
                 format_number(r.numeric), format_number(r.analytic), flag_cell(r.unreliable), r.status});
        if (r.status != "ok" && r.status != "ResonanceDivergence") out.exit_code = 2;
    }
    csv.flush();
    out.files = {csv.path()};
    return out;
}

CommandResult cmd_truncation_study(const RunConfig& cfg, int jobs)
{
    const std::vector<double> rs = cfg.numbers("truncation.r", {0.0, 0.5, 1.0, 1.2, 1.5});
    std::vector<int> ns;
    for (const double n : cfg.numbers("truncation.n", {30, 60, 100, 150})) ns.push_back(static_cast<int>(n));
    std::vector<Frame> frames;
    for (const auto& name : cfg.words("truncation.frames", {"squeezed", "rotating"})) {
        frames.push_back(frame_from_string(name));
    }
    for (const Frame f : frames) {
        for (const int n : ns) {
            if (f == Frame::Rotating && n > 200) {
                throw Error(ErrorKind::ResourceLimit,
                            "rotating frame with N = " + std::to_string(n) +
                                " exceeds the N <= 200 guard; the squeezed frame converges at far smaller N");
            }
        }
    }

    struct Job {
        double r;
        int n;
        Frame frame;
    };
    std::vector<Job> plan;
    for (const Frame f : frames) {
        for (const double r : rs) {
            for (const int n : ns) plan.push_back({r, n, f});
        }
    }
    struct Row {
        double eta = kNaN, closed = kNaN;
        std::string status = "ok";
    };
    std::vector<Row> rows(plan.size());
    parallel_for(plan.size(), jobs, [&](std::size_t k) {
        Row& row = rows[k];
        ModelParams p = cfg.at("r", plan[k].r);
        p.g = 0.0;
        p.n_fock = plan[k].n;
        p.frame = plan[k].frame;
        try {
            row.closed = integrated_noise(p, cfg.bath).eta;
        } catch (const std::exception& e) {
            row.status = status_of(e);
        }
        try {
            row.eta = eta_numeric(p, cfg.bath);
        } catch (const std::exception& e) {
            row.status = status_of(e);
        }
    });

    CommandResult out;
    CsvWriter csv(cfg.out_dir / "truncation.csv", header_block("truncation", cfg),
                  {"r", "N", "frame", "eta_numeric", "eta_closed_form", "status"});
    for (std::size_t k = 0; k < plan.size(); ++k) {
        csv.row({format_number(plan[k].r), std::to_string(plan[k].n), to_string(plan[k].frame),
                 format_number(rows[k].eta), format_number(rows[k].closed), rows[k].status});
        if (rows[k].status != "ok") out.exit_code = 2;
    }
    csv.flush();
    out.files = {csv.path()};
    return out;
}

CommandResult cmd_frame_compare(const RunConfig& cfg, int jobs)
{
    ModelParams p = cfg.model;
    if (p.frame != Frame::Squeezed) {
        throw Error(ErrorKind::UnsupportedCombination, "frame-compare runs in the squeezed frame");
    }
    if (cfg.flag("frame_compare.resonant", true)) p.omega_s_t = squeezed_frame_params(p).omega_r;
    const int points = cfg.integer("spectrum.points", 4001);

    const std::vector<BathSpec> baths = {bath::Vacuum{}, bath::SqueezedVacuumReference{}};
    std::vector<ResonancePoint> results(baths.size());
    parallel_for(baths.size(), jobs, [&](std::size_t k) { results[k] = spin_doublet(p, baths[k], points); });

    const HilbertLayout layout = HilbertLayout::composite(p.n_fock);
    json doc;
    doc["omega_s"] = p.omega_s_t;
    CommandResult out;
    const std::vector<std::string> names = {"vacuum", "reference"};
    for (std::size_t k = 0; k < baths.size(); ++k) {
        const auto csv = cfg.out_dir / ("frame_compare_" + names[k] + ".csv");
        write_spectrum_csv(csv, header_block("frame-compare " + bath_name(baths[k]), cfg), results[k].spectrum);
        json entry = features_json(results[k].features);
        const OpenSystem sys = build_open_system(p, baths[k], layout);
        char hash[17];
        std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(operator_hash(sys.hamiltonian)));
        entry["hamiltonian_hash"] = hash;
        entry["bath"] = bath_name(baths[k]);
        doc[names[k]] = entry;
        out.files.push_back(csv);
    }
    const auto sidecar = cfg.out_dir / "frame_compare.features.json";
    write_text(sidecar, doc.dump(2) + "\n");
    out.files.push_back(sidecar);
    return out;
}

CommandResult cmd_photon_correlation(const RunConfig& cfg, int jobs)
{
    if (cfg.model.g != 0.0) {
        throw Error(ErrorKind::UnsupportedCombination, "photon-corr needs g = 0 (set g = 0)");
    }
    const double r0 = squeezed_frame_params(cfg.model).r;
    const std::vector<double> rs = cfg.numbers("photon.r", {r0});
    std::vector<double> tau;
    if (cfg.sweep && cfg.sweep->axis == "tau") {
        tau = cfg.sweep->values();
        if (tau.front() != 0.0) throw config_error("the tau sweep must start at 0");
    } else {
        tau = uniform_grid(0.0, cfg.number("tau.stop", 8.0 / cfg.model.kappa), cfg.integer("tau.points", 401));
    }

    struct Row {
        CorrelationSeries numeric;
        std::vector<double> closed;
        std::string status = "ok";
    };
    std::vector<Row> rows(rs.size());
    parallel_for(rs.size(), jobs, [&](std::size_t i) {
        ModelParams p = cfg.model.with_r(rs[i]);
        try {
            rows[i].numeric = photon_correlation_numeric(p, cfg.bath, tau);
            rows[i].closed = photon_correlation_closed(p, cfg.bath, tau);
        } catch (const std::exception& e) {
            rows[i].status = status_of(e);
        }
    });

    CommandResult out;
    CsvWriter csv(cfg.out_dir / "photon_corr.csv", header_block("photon-corr", cfg),
                  {"r", "tau", "re_corr", "im_corr", "closed_form", "status"});
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const Row& row = rows[i];
        for (std::size_t k = 0; k < tau.size(); ++k) {
            const bool ok = row.status == "ok";
            csv.row({format_number(rs[i]), format_number(tau[k]),
                     format_number(ok ? row.numeric.values[k].real() : kNaN),
                     format_number(ok ? row.numeric.values[k].imag() : kNaN),
                     format_number(ok ? row.closed[k] : kNaN), row.status});
        }
        if (row.status != "ok") out.exit_code = 2;
    }
    csv.flush();
    out.files = {csv.path()};
    return out;
}

CommandResult cmd_rates(const RunConfig& cfg)
{
    const AnalyticRates a = analytic_rates(cfg.model, cfg.bath);
    const json doc = {{"r", squeezed_frame_params(cfg.model).r},
                      {"Delta", a.Delta},
                      {"chi_r", a.chi_r},
                      {"chi_0", a.chi_0},
                      {"C1", a.C1},
                      {"C2", a.C2},
                      {"dispersive_shift", a.dispersive_shift},
                      {"gamma_purcell", a.gamma_purcell},
                      {"gamma_phi_photon", a.gamma_phi_photon},
                      {"gamma_total", a.gamma_total},
                      {"reliable", a.reliable},
                      {"warnings", a.warnings},
                      {"bath", bath_name(cfg.bath)}};
    CommandResult out;
    out.stdout_text = doc.dump(2) + "\n";
    const auto path = cfg.out_dir / "rates.json";
    write_text(path, out.stdout_text);
    out.files = {path};
    return out;
}

} // namespace sqz::cli

#pragma once

// Reproduction harness: flat key=value configuration, sweeps dispatched to a
// worker pool, CSV and JSON emission.

#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sqz/lindblad.hpp"
#include "sqz/model.hpp"

namespace sqz::cli {

extern const char* const kVersion;

using KeyValues = std::map<std::string, std::string>;

/// Parses `key = value` lines. '#' starts a comment; blank lines are ignored;
/// surrounding double quotes are stripped. Throws InvalidConfig on malformed
/// lines and duplicate keys.
KeyValues parse_key_values(std::istream& in, const std::string& source = "config");
KeyValues load_config_file(const std::filesystem::path& path);

/// Applies one `key=value` override (the --set flag).
void apply_override(KeyValues& kv, const std::string& assignment);

struct SweepAxis {
    std::string axis;  // r, kappa, omega_s or tau
    double start = 0.0;
    double stop = 0.0;
    int points = 1;

    std::vector<double> values() const;
};

struct RunConfig {
    ModelParams model;
    BathSpec bath = bath::Vacuum{};
    std::optional<SweepAxis> sweep;
    std::optional<SweepAxis> sweep2;
    std::filesystem::path out_dir = ".";
    KeyValues raw;

    /// Builds and validates a configuration. Unknown keys, r together with
    /// lambda, and sweep points outside the stable region (|lambda| < omega_r)
    /// throw InvalidConfig or ParametricInstability.
    static RunConfig from(const KeyValues& kv);

    double number(const std::string& key, double fallback) const;
    int integer(const std::string& key, int fallback) const;
    bool flag(const std::string& key, bool fallback) const;
    std::string text(const std::string& key, const std::string& fallback) const;
    std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;
    std::vector<std::string> words(const std::string& key, const std::vector<std::string>& fallback) const;

    /// Model parameters with one sweep coordinate applied.
    ModelParams at(const std::string& axis, double value) const;
};

BathSpec bath_from_name(const std::string& kind, double n_bar, Complex alpha);

// ---------------------------------------------------------------------------
// Output

/// Comment block echoing the command, version, frame, truncation, ordering and
/// every configuration value, one `# key: value` line each.
std::string header_block(const std::string& command, const RunConfig& cfg);

/// Full-precision scientific notation ("%.17e"); non-finite values print as nan.
std::string format_number(double v);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::string& header, const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);
    /// Writes the collected text with LF line endings.
    void flush();
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    std::string text_;
    std::size_t columns_ = 0;
};

struct CommandResult {
    int exit_code = 0;  // 0 all points succeeded, 2 some points failed
    std::vector<std::filesystem::path> files;
    std::string stdout_text;
};

/// Machine-readable error record: {"error": kind, "message": text}.
std::string error_json(const std::exception& e);

// ---------------------------------------------------------------------------
// Worker pool

/// Runs f(i) for i in [0, n) on up to `jobs` threads. Results are indexed, so
/// callers write them in sweep order. The first exception thrown by f is
/// rethrown after all workers stop.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& f);

// ---------------------------------------------------------------------------
// Numeric studies shared by the commands and the tests

/// Truncation used at squeezing r: n_fock up to r_switch, n_high above it.
int truncation_for(double r, int n_fock, int n_high, double r_switch);

/// eta = 2 Re int_0^inf <dn(tau) dn(0)> dtau from the resonator-only Liouvillian.
double eta_numeric(const ModelParams& p, const BathSpec& bath = bath::Vacuum{});

/// <n(tau) n(0)> from the resonator-only Liouvillian on a uniform tau grid from 0.
CorrelationSeries photon_correlation_numeric(const ModelParams& p, const BathSpec& bath,
                                             const std::vector<double>& tau);

/// The same correlator from the closed regression equations.
std::vector<double> photon_correlation_closed(const ModelParams& p, const BathSpec& bath,
                                              const std::vector<double>& tau);

/// FNV-1a hash over the bytes of a dense operator.
std::uint64_t operator_hash(const Operator& op);

// ---------------------------------------------------------------------------
// Commands

CommandResult cmd_spectrum(const RunConfig& cfg, const std::string& target, int jobs = 1);
CommandResult cmd_anticross(const RunConfig& cfg, int jobs = 1);
CommandResult cmd_shift_width(const RunConfig& cfg, int jobs = 1);
CommandResult cmd_ratio_map(const RunConfig& cfg, int jobs = 1);
CommandResult cmd_truncation_study(const RunConfig& cfg, int jobs = 1);
CommandResult cmd_frame_compare(const RunConfig& cfg, int jobs = 1);
CommandResult cmd_photon_correlation(const RunConfig& cfg, int jobs = 1);
CommandResult cmd_rates(const RunConfig& cfg);

} // namespace sqz::cli

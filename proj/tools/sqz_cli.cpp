// Command-line front end for the reproduction harness.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sqz/cli.hpp"

namespace {

void report_error(const std::exception& e, const std::filesystem::path& out_dir)
{
    const std::string record = sqz::cli::error_json(e);
    std::cerr << record << "\n";
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    std::ofstream(out_dir / "error.json") << record << "\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spin coupled to a squeezed resonator: spectra, rates and studies"};
    app.set_version_flag("--version", sqz::cli::kVersion);
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    int jobs = 1;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "Flat key=value configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "Output directory (overrides out_dir)");
    app.add_option("--jobs", jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber);
    app.add_option("--set", overrides, "Override one config value, key=value (repeatable)")->allow_extra_args(false);

    std::string target = "resonator";
    auto* spectrum = app.add_subcommand("spectrum", "Resonator or spin spectrum at one parameter point");
    spectrum->add_option("--target", target, "resonator or spin")->check(CLI::IsMember({"resonator", "spin"}));
    auto* anticross = app.add_subcommand("anticross", "Anticrossing gap and contrast along an r sweep");
    auto* shift_width = app.add_subcommand("shift-width", "Spin shift and linewidth along an r sweep");
    auto* ratio_map = app.add_subcommand("ratio-map", "Shift over linewidth on an (r, kappa) grid");
    auto* truncation = app.add_subcommand("truncation", "Photon-noise integral versus truncation in both frames");
    auto* frame_compare = app.add_subcommand("frame-compare", "Spin spectra with the physical and reference baths");
    auto* photon_corr = app.add_subcommand("photon-corr", "Photon-number autocorrelation, numeric and closed form");
    auto* rates = app.add_subcommand("rates", "Closed-form shift, Purcell and dephasing rates as JSON");

    CLI11_PARSE(app, argc, argv);

    std::filesystem::path error_dir = out_dir.empty() ? "." : out_dir;
    try {
        sqz::cli::KeyValues kv;
        if (!config_path.empty()) kv = sqz::cli::load_config_file(config_path);
        for (const auto& assignment : overrides) sqz::cli::apply_override(kv, assignment);
        if (!out_dir.empty()) kv["out_dir"] = out_dir;
        if (kv.count("out_dir")) error_dir = kv.at("out_dir");
        if (spectrum->parsed() && kv.count("target") && target == "resonator") target = kv.at("target");
        kv.erase("target");
        const auto cfg = sqz::cli::RunConfig::from(kv);

        sqz::cli::CommandResult result;
        if (spectrum->parsed()) result = sqz::cli::cmd_spectrum(cfg, target, jobs);
        else if (anticross->parsed()) result = sqz::cli::cmd_anticross(cfg, jobs);
        else if (shift_width->parsed()) result = sqz::cli::cmd_shift_width(cfg, jobs);
        else if (ratio_map->parsed()) result = sqz::cli::cmd_ratio_map(cfg, jobs);
        else if (truncation->parsed()) result = sqz::cli::cmd_truncation_study(cfg, jobs);
        else if (frame_compare->parsed()) result = sqz::cli::cmd_frame_compare(cfg, jobs);
        else if (photon_corr->parsed()) result = sqz::cli::cmd_photon_correlation(cfg, jobs);
        else if (rates->parsed()) result = sqz::cli::cmd_rates(cfg);

        std::cout << result.stdout_text;
        for (const auto& f : result.files) std::cerr << "wrote " << f.string() << "\n";
        return result.exit_code;
    } catch (const std::exception& e) {
        report_error(e, error_dir);
        return 1;
    }
}

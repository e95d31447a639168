// spectra — command-line front end: preset and config-driven spectrum
// sweeps, oracle cross-checks and dark-line reports.
//
// Exit codes: 0 ok, 1 I/O or unexpected failure, 2 config error,
// 3 numerical failure, 4 oracle mismatch, 5 pole-bound violation.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spectra/cli/config.hpp"
#include "spectra/cli/emit.hpp"
#include "spectra/cli/sweep.hpp"

namespace sc = spectra::cli;

namespace {

int run_and_emit(sc::RunConfig cfg, bool oracle, const std::string& out, const std::string& format) {
    if (oracle) cfg.oracle_check = true;
    if (!out.empty()) cfg.output.path = out;
    if (format == "csv") cfg.output.format = sc::Format::csv;
    else if (format == "json") cfg.output.format = sc::Format::json;

    const sc::SweepResult result = sc::run_sweep(cfg);
    sc::emit(result, cfg, cfg.output.format, cfg.output.path);

    if (!result.pole_bound_violations.empty()) {
        const auto& z = result.pole_bound_violations.front();
        std::cerr << "pole bound violated: root (" << z.real() << ", " << z.imag() << ")\n";
        return 5;
    }
    if (!result.oracle_ok) {
        std::cerr << "oracle mismatch: max deviation " << *result.oracle_max_deviation << " > tolerance "
                  << cfg.oracle_tolerance << '\n';
        return 4;
    }
    return 0;
}

nlohmann::json zero_json(const spectra::FourLevelSystem& sys, spectra::Channel ch, spectra::DriveSign sign) {
    try {
        const auto z = spectra::spectral_zero(sys, ch, sign);
        return {{"frequency", sc::complex_json(z)}, {"dark", spectra::is_dark_line(z)}};
    } catch (const spectra::ZeroInitialAmplitude&) {
        return nullptr;
    }
}

int darkline(const sc::RunConfig& cfg, double tolerance) {
    if (cfg.model != sc::Model::four_level) throw sc::SchemaError("darkline needs a four_level config", "/model");
    const auto r = spectra::dark_line_check(cfg.four, tolerance, cfg.drive_sign);
    nlohmann::json j = {
        {"conditions_met",
         {{"frequency", r.frequency_clause}, {"shifts", r.shift_clause}, {"widths", r.width_clause},
          {"coupling", r.coupling_clause}, {"all", r.conditions_met()}}},
        {"predicted_frequency", r.predicted_frequency ? nlohmann::json(*r.predicted_frequency) : nlohmann::json(nullptr)},
        {"candidate_frequency", r.candidate_frequency},
        {"measured_min_ratio", r.measured_min_ratio},
        {"measured_min_frequency", r.measured_min_frequency},
        {"spectral_zero",
         {{"channel_13", zero_json(cfg.four, spectra::Channel::one_three, cfg.drive_sign)},
          {"channel_24", zero_json(cfg.four, spectra::Channel::two_four, cfg.drive_sign)}}}};
    std::cout << j.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spontaneous-emission spectra of driven four- and five-level atoms"};
    app.require_subcommand(1);

    std::string config_path, out_path, format, preset_name;
    std::vector<std::string> overrides;
    bool oracle = false;
    double tolerance = 1e-9;

    auto* run = app.add_subcommand("run", "Sweep the spectrum described by a JSON config");
    run->add_option("--config", config_path, "Config file")->required();
    run->add_flag("--oracle", oracle, "Cross-check against the time-domain oracle");
    run->add_option("--out", out_path, "Output path (default stdout)");
    run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* preset = app.add_subcommand("preset", "Sweep a built-in figure preset");
    preset->add_option("name", preset_name, "Preset name")->required()->check(CLI::IsMember(sc::preset_names()));
    preset->add_option("--set", overrides, "Override, key=value (value parsed as JSON)");
    preset->add_flag("--oracle", oracle, "Cross-check against the time-domain oracle");
    preset->add_option("--out", out_path, "Output path (default stdout)");
    preset->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* dark = app.add_subcommand("darkline", "Report dark-line conditions and spectral zeros");
    dark->add_option("--config", config_path, "Config file (four_level)")->required();
    dark->add_option("--tolerance", tolerance, "Condition tolerance");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_and_emit(sc::load_config(config_path), oracle, out_path, format);
        if (preset->parsed()) {
            nlohmann::json doc = {{"preset", preset_name}};
            for (const auto& o : overrides) sc::apply_override(doc, o);
            return run_and_emit(sc::parse_config(doc), oracle, out_path, format);
        }
        if (dark->parsed()) return darkline(sc::load_config(config_path), tolerance);
    } catch (const sc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const spectra::ValidationError& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return 2;
    } catch (const spectra::PoleBoundViolation& e) {
        std::cerr << "pole bound violated: " << e.what() << '\n';
        return 5;
    } catch (const spectra::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const sc::OracleMismatch& e) {
        std::cerr << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

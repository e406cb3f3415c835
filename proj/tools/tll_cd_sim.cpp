#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tllcd/config.hpp"
#include "tllcd/dynamics.hpp"
#include "tllcd/errors.hpp"
#include "tllcd/outputs.hpp"
#include "tllcd/svg_plot.hpp"
#include "tllcd/validation.hpp"

namespace {

using namespace tllcd;

enum ExitCode { exit_ok = 0, exit_config = 2, exit_instability = 3, exit_integration = 4, exit_validation = 5 };

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::luttinger_instability:
        case ErrorKind::cd_instability: return exit_instability;
        case ErrorKind::integration: return exit_integration;
        case ErrorKind::validation:
        case ErrorKind::cutoff_unsafe: return exit_validation;
        case ErrorKind::contract:
        case ErrorKind::range:
        case ErrorKind::config:
        case ErrorKind::io: return exit_config;
    }
    return exit_config;
}

struct CommonArgs {
    std::string config_path;
    std::optional<std::string> out;
    std::optional<std::string> cd;
    std::optional<double> tf;
    std::optional<int> modes;
};

void add_common(CLI::App* app, CommonArgs& args) {
    app->add_option("--config", args.config_path, "key = value config file")->required();
    app->add_option("--out", args.out, "output directory (overrides output_dir)");
    app->add_option("--cd", args.cd, "counterdiabatic term")->check(CLI::IsMember({"on", "off"}));
    app->add_option("--tf", args.tf, "ramp duration (overrides t_f)");
    app->add_option("--modes", args.modes, "number of modes (overrides n_modes)");
}

RunConfig load(const CommonArgs& args) {
    auto config = load_config(args.config_path);
    if (args.out) config.output_dir = *args.out;
    if (args.cd) config.protocol.cd_enabled = *args.cd == "on";
    if (args.tf) config.protocol.t_f = *args.tf;
    if (args.modes) config.protocol.n_modes = *args.modes;
    validate(config);
    return config;
}

RunManifest base_manifest(const RunConfig& config, std::string command) {
    RunManifest m;
    m.config = config;
    m.command = std::move(command);
    m.stability = stability_margin(config.protocol, config.stability_points);
    m.speed_window = speed_window(config.protocol, config.adiabatic_threshold, config.stability_points);
    m.reference_sound_velocity = reference_sound_velocity(config);
    m.dimensional_window = dimensional_speed_window(config.protocol.L, *m.reference_sound_velocity);
    return m;
}

void write_timing(const RunConfig& config, std::chrono::steady_clock::time_point start) {
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_text_file((std::filesystem::path(config.output_dir) / "timing.txt").string(),
                    "wall_time_s = " + format_double(seconds) + "\n");
}

void emit_plots(const std::string& dir);

int cmd_simulate(const CommonArgs& args) {
    const auto start = std::chrono::steady_clock::now();
    const auto config = load(args);
    auto manifest = base_manifest(config, "simulate");
    const auto manifest_path = (std::filesystem::path(config.output_dir) / "manifest.txt").string();

    if (config.protocol.cd_enabled && !manifest.stability->pass) {
        manifest.status = std::string(to_string(ErrorKind::cd_instability));
        manifest.failure_cause = "stability pre-check failed: margin " + format_double(manifest.stability->margin) +
                                 " at t = " + format_double(manifest.stability->worst_time) +
                                 ", p = " + format_double(manifest.stability->worst_p);
        write_text_file(manifest_path, format_manifest(manifest));
        std::cerr << "cd-instability: " << manifest.failure_cause << '\n';
        return exit_instability;
    }

    EvolveOptions opts;
    opts.ode = ode_tolerance(config);
    opts.record_points = config.record_points;
    const auto result = run_simulation(config.protocol, opts, config.workers);
    manifest.mode_errors = result.errors;
    int code = exit_ok;
    if (!result.complete()) {
        const auto& first = result.errors.front();
        manifest.status = std::string(to_string(first.kind));
        manifest.failure_cause = first.message;
        code = exit_code_for(first.kind);
        std::cerr << first.message << '\n';
    }
    write_outputs(result, manifest);
    write_timing(config, start);
    if (config.emit_plots) emit_plots(config.output_dir);
    std::cout << "wrote " << config.output_dir << " (" << result.modes.size() << " modes, "
              << result.errors.size() << " failed)\n";
    return code;
}

int cmd_stability(const CommonArgs& args) {
    const auto config = load(args);
    const auto m = base_manifest(config, "stability");
    const std::string time_unit = config.units == Units::experimental ? "ms" : "natural";
    std::cout << "units = " << to_string(config.units) << '\n'
              << "stability_margin = " << format_double(m.stability->margin) << '\n'
              << "stability_pass = " << (m.stability->pass ? "true" : "false") << '\n'
              << "stability_worst_time = " << format_double(m.stability->worst_time) << '\n'
              << "stability_worst_p = " << format_double(m.stability->worst_p) << '\n';
    if (m.stability->closed_form_tf_bound)
        std::cout << "closed_form_tf_bound = " << format_double(*m.stability->closed_form_tf_bound) << '\n';
    std::cout << "speed_window_t_min = " << format_double(m.speed_window->t_min) << '\n'
              << "speed_window_t_adiabatic = " << format_double(m.speed_window->t_adiabatic) << '\n'
              << "reference_sound_velocity = " << format_double(*m.reference_sound_velocity) << '\n'
              << "dimensional_t_min = " << format_double(m.dimensional_window->t_min) << '\n'
              << "dimensional_t_upper = " << format_double(m.dimensional_window->t_upper) << '\n'
              << "time_unit = " << time_unit << '\n';
    char line[160];
    std::snprintf(line, sizeof line, "speed window: t_min = %.2f %s, upper estimate = %.1f %s\n",
                  m.dimensional_window->t_min, time_unit.c_str(), m.dimensional_window->t_upper, time_unit.c_str());
    std::cout << line;
    return config.protocol.cd_enabled && !m.stability->pass ? exit_instability : exit_ok;
}

int cmd_sweep(const CommonArgs& args) {
    const auto start = std::chrono::steady_clock::now();
    auto config = load(args);
    if (config.sweep_tf.empty()) fail(ErrorKind::config, "sweep needs a non-empty sweep_tf list");
    auto manifest = base_manifest(config, "sweep");
    EvolveOptions opts;
    opts.ode = ode_tolerance(config);
    opts.record_points = config.record_points;
    const auto rows = sweep_tf(config.protocol, config.sweep_tf, opts, config.workers);
    for (const auto& r : rows)
        if (r.status != "ok") {
            manifest.status = "partial";
            manifest.failure_cause = "t_f = " + format_double(r.t_f) + ": " + r.status;
            break;
        }
    const std::filesystem::path dir(config.output_dir);
    write_text_file((dir / "sweep.csv").string(), format_sweep_csv(rows));
    write_text_file((dir / "manifest.txt").string(), format_manifest(manifest));
    write_timing(config, start);
    if (config.emit_plots) emit_plots(config.output_dir);
    std::cout << "wrote " << (dir / "sweep.csv").string() << " (" << rows.size() << " rows)\n";
    return exit_ok;
}

int cmd_validate(const CommonArgs& args) {
    const auto config = load(args);
    const auto checks = oracle_validation(config.protocol);
    bool all = true;
    for (const auto& c : checks) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " error = " << format_double(c.error)
                  << " tolerance = " << format_double(c.tolerance) << '\n';
        all = all && c.pass;
    }
    return all ? exit_ok : exit_validation;
}

PlotSeries column_series(const CsvTable& t, const std::string& x, const std::string& y, std::string label) {
    const auto xi = t.columns.find(x), yi = t.columns.find(y);
    if (xi == t.columns.end() || yi == t.columns.end()) fail(ErrorKind::io, "CSV lacks column '" + x + "' or '" + y + "'");
    return {std::move(label), xi->second, yi->second};
}

void emit_plots(const std::string& dir) {
    const std::filesystem::path d(dir);
    bool any = false;
    if (std::filesystem::exists(d / "aggregate.csv")) {
        const auto t = parse_csv(read_text_file((d / "aggregate.csv").string()));
        write_text_file((d / "parameters.svg").string(),
                        render_svg({"Luttinger parameters of the slowest mode", "t", "value", false,
                                    {column_series(t, "t", "K", "K"), column_series(t, "t", "v_s", "v_s"),
                                     column_series(t, "t", "chi", "chi")}}));
        write_text_file((d / "residual.svg").string(),
                        render_svg({"Residual energy", "t", "total residual", false,
                                    {column_series(t, "t", "total_residual", "residual")}}));
        any = true;
    }
    if (std::filesystem::exists(d / "sweep.csv")) {
        const auto t = parse_csv(read_text_file((d / "sweep.csv").string()));
        write_text_file((d / "sweep.svg").string(),
                        render_svg({"Final residual energy vs ramp time", "t_f", "final residual (log10)", true,
                                    {column_series(t, "t_f", "final_residual", "residual")}}));
        any = true;
    }
    if (!any) fail(ErrorKind::io, "no aggregate.csv or sweep.csv in '" + dir + "'");
}

int cmd_plot(const CommonArgs& args) {
    const auto config = load(args);
    emit_plots(config.output_dir);
    std::cout << "wrote plots to " << config.output_dir << '\n';
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Counterdiabatic driving of Tomonaga-Luttinger liquids"};
    app.require_subcommand(1);
    CommonArgs args;
    auto* simulate = app.add_subcommand("simulate", "full run: per-mode and aggregate CSV plus manifest");
    auto* stability = app.add_subcommand("stability", "stability criterion and speed window only");
    auto* sweep = app.add_subcommand("sweep", "residual energy over the sweep_tf list");
    auto* validate_cmd = app.add_subcommand("validate", "Gaussian route vs Fock-space oracle");
    auto* plot = app.add_subcommand("plot", "SVG panels from the CSVs in the output directory");
    for (auto* sub : {simulate, stability, sweep, validate_cmd, plot}) add_common(sub, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try {
        if (*simulate) return cmd_simulate(args);
        if (*stability) return cmd_stability(args);
        if (*sweep) return cmd_sweep(args);
        if (*validate_cmd) return cmd_validate(args);
        if (*plot) return cmd_plot(args);
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_config;
    }
    return exit_config;
}

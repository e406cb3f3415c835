#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tllcd/cd_control.hpp"
#include "tllcd/config.hpp"
#include "tllcd/dynamics.hpp"

namespace tllcd {

inline constexpr std::string_view code_version = "0.1.0";

/// Header: t,p,n_bare,n_qp,fidelity,pair_energy,residual,epsilon_cd,chi.
/// Rows are grouped by mode in grid order.
std::string format_mode_csv(std::span<const ModeTrajectory> modes);

/// Header: t,total_residual,total_energy,v_s,K,chi,min_margin.
std::string format_aggregate_csv(std::span<const AggregatePoint> aggregate);

/// Header: t_f,cd,stability_pass,stability_margin,final_residual,min_final_fidelity,max_final_occupation,status.
std::string format_sweep_csv(std::span<const SweepRow> rows);

struct RunManifest {
    RunConfig config;
    std::string command;
    std::string status = "ok";  // "ok" or the error kind that stopped the run
    std::string failure_cause;
    std::optional<StabilityReport> stability;
    std::optional<SpeedWindow> speed_window;
    std::optional<DimensionalWindow> dimensional_window;
    std::optional<double> reference_sound_velocity;
    std::vector<ModeError> mode_errors;
};

/// Config echo followed by `run.*` keys, in the config's key = value format.
/// Holds no wall time, so identical runs give identical bytes.
std::string format_manifest(const RunManifest& manifest);

/// Writes `content` to `path`, creating parent directories. Throws an io error naming the path.
void write_text_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

/// CSV with a header row; columns keyed by header name. Cells that are not
/// numbers read as NaN.
struct CsvTable {
    std::vector<std::string> header;
    std::map<std::string, std::vector<double>> columns;
};

CsvTable parse_csv(const std::string& text);

struct OutputFiles {
    std::string modes;
    std::string aggregate;
    std::string manifest;
};

/// Writes modes.csv, aggregate.csv and manifest.txt into config.output_dir.
OutputFiles write_outputs(const SimulationResult& result, const RunManifest& manifest);

}  // namespace tllcd

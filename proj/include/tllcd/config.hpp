#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tllcd/ode.hpp"
#include "tllcd/protocol.hpp"
#include "tllcd/units.hpp"

namespace tllcd {

/// natural: dimensionless, v_F typically 1.
/// experimental: lengths in um, times in ms, velocities and couplings in um/ms.
/// The model is homogeneous in these units, so no rescaling is applied.
enum class Units { natural, experimental };

struct RunConfig {
    DriveProtocol protocol;
    std::string output_dir = "out";
    int record_points = 201;
    bool emit_plots = false;
    Units units = Units::natural;
    double rtol = 1e-10;
    double atol = 1e-12;
    int stability_points = 2001;
    double adiabatic_threshold = 0.01;
    int workers = 1;
    std::vector<double> sweep_tf;
    /// Measured sound velocity for the dimensional speed window.
    std::optional<double> sound_velocity;
    std::optional<GasParameters> gas;

    bool operator==(const RunConfig&) const = default;
};

/// Flat `key = value` text, one pair per line, `#` starts a comment.
/// Unknown and repeated keys are config errors carrying the line number.
/// The result is validated (protocol stability included).
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::string& path);

/// Every key in a fixed order; doubles in shortest round-trip form.
std::string serialize_config(const RunConfig& config);

/// Field checks plus validate(protocol).
void validate(const RunConfig& config);

OdeTolerance ode_tolerance(const RunConfig& config);

/// Sound velocity used for the dimensional window: the explicit value, else the
/// gas formula, else v_s of the slowest mode at t_f.
double reference_sound_velocity(const RunConfig& config);

/// Shortest round-trip decimal representation, locale independent.
std::string format_double(double x);

std::string_view to_string(Units units);
std::string_view to_string(CouplingFamily family);
std::string_view to_string(ScheduleKind kind);

}  // namespace tllcd

#pragma once

#include <utility>
#include <vector>

namespace tllcd {

enum class ScheduleKind { poly5, linear, custom_samples };

/// Interpolating ramp P(s), s = t / t_f, with P(0) = 0 and P(1) = 1.
/// custom_samples is piecewise linear through (s, value) samples that must
/// start at (0, 0) and end at (1, 1).
struct Schedule {
    ScheduleKind kind = ScheduleKind::poly5;
    std::vector<std::pair<double, double>> samples;

    bool operator==(const Schedule&) const = default;
};

void validate(const Schedule& schedule);

struct ScheduleValue {
    double value = 0.0;
    double slope = 0.0;  // dP/ds
};

/// P(s) and dP/ds. poly5: 10 s^3 - 15 s^4 + 6 s^5 with slope 30 s^2 (1-s)^2.
/// Throws a contract error for s outside [0, 1].
ScheduleValue schedule_value(double s, const Schedule& schedule);

/// max over s of |dP/ds| (1.875 for poly5).
double max_schedule_slope(const Schedule& schedule);

/// [min P, max P] over s in [0, 1]; [0, 1] unless custom samples overshoot.
std::pair<double, double> schedule_range(const Schedule& schedule);

}  // namespace tllcd

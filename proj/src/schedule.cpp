#include "tllcd/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tllcd/errors.hpp"

namespace tllcd {

void validate(const Schedule& schedule) {
    if (schedule.kind != ScheduleKind::custom_samples) return;
    const auto& s = schedule.samples;
    require(s.size() >= 2, "custom schedule needs at least two samples");
    require(s.front().first == 0.0 && s.back().first == 1.0,
            "custom schedule samples must span s = 0 to s = 1");
    require(s.front().second == 0.0 && s.back().second == 1.0,
            "custom schedule must satisfy P(0) = 0 and P(1) = 1");
    for (std::size_t i = 1; i < s.size(); ++i) {
        require(std::isfinite(s[i].second), "custom schedule values must be finite");
        require(s[i].first > s[i - 1].first, "custom schedule abscissae must be increasing");
    }
}

ScheduleValue schedule_value(double s, const Schedule& schedule) {
    if (!(s >= 0.0 && s <= 1.0)) {
        std::ostringstream os;
        os << "schedule argument s = " << s << " outside [0, 1]";
        fail(ErrorKind::contract, os.str());
    }
    switch (schedule.kind) {
        case ScheduleKind::poly5: {
            const double s2 = s * s;
            const double one_minus = 1.0 - s;
            return {s2 * s * (10.0 - 15.0 * s + 6.0 * s2), 30.0 * s2 * one_minus * one_minus};
        }
        case ScheduleKind::linear:
            return {s, 1.0};
        case ScheduleKind::custom_samples: {
            const auto& pts = schedule.samples;
            auto hi = std::upper_bound(pts.begin(), pts.end(), s,
                                       [](double x, const auto& pt) { return x < pt.first; });
            if (hi == pts.end()) --hi;  // s == 1 lands on the last segment
            auto lo = hi - 1;
            const double slope = (hi->second - lo->second) / (hi->first - lo->first);
            return {lo->second + slope * (s - lo->first), slope};
        }
    }
    return {};
}

double max_schedule_slope(const Schedule& schedule) {
    switch (schedule.kind) {
        case ScheduleKind::poly5:
            return 1.875;
        case ScheduleKind::linear:
            return 1.0;
        case ScheduleKind::custom_samples: {
            double best = 0.0;
            const auto& pts = schedule.samples;
            for (std::size_t i = 1; i < pts.size(); ++i)
                best = std::max(best, std::abs((pts[i].second - pts[i - 1].second) /
                                               (pts[i].first - pts[i - 1].first)));
            return best;
        }
    }
    return 0.0;
}

std::pair<double, double> schedule_range(const Schedule& schedule) {
    if (schedule.kind != ScheduleKind::custom_samples) return {0.0, 1.0};
    double lo = 0.0, hi = 1.0;
    for (const auto& [s, value] : schedule.samples) {
        lo = std::min(lo, value);
        hi = std::max(hi, value);
    }
    return {lo, hi};
}

}  // namespace tllcd

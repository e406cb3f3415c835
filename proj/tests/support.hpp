#pragma once

#include <random>

#include "tllcd/protocol.hpp"

namespace tllcd::testing {

/// Fixed-seed source for property tests; each test owns its generator.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

private:
    std::mt19937_64 engine_;
};

inline constexpr int property_samples = 1000;

/// poly5 ramp g2: 0 -> 1, g4: 0 -> 0.5 on L = 100 with v_F = 1.
inline DriveProtocol reference_ramp(double t_f, int n_modes = 64, bool cd = true) {
    DriveProtocol p;
    p.coupling.family = CouplingFamily::contact;
    p.coupling.g2_end = 1.0;
    p.coupling.g4_end = 0.5;
    p.schedule.kind = ScheduleKind::poly5;
    p.t_f = t_f;
    p.L = 100.0;
    p.n_modes = n_modes;
    p.cd_enabled = cd;
    p.v_F = 1.0;
    return p;
}

}  // namespace tllcd::testing

#include "tllcd/protocol.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "tllcd/errors.hpp"

namespace tllcd {

void validate(const DriveProtocol& protocol) {
    require(protocol.t_f > 0.0 && std::isfinite(protocol.t_f), "t_f must be positive");
    require(protocol.L > 0.0 && std::isfinite(protocol.L), "L must be positive");
    require(protocol.n_modes >= 1, "n_modes must be at least 1");
    require(protocol.v_F > 0.0 && std::isfinite(protocol.v_F), "v_F must be positive");
    validate(protocol.coupling);
    validate(protocol.schedule);
    if (protocol.lorentzian_chi == LorentzianChiMode::linearized) {
        const auto& c = protocol.coupling;
        require(c.family == CouplingFamily::lorentzian,
                "linearized CD amplitude is only defined for lorentzian couplings");
        require(c.g2_start == c.g4_start && c.g2_end == c.g4_end,
                "linearized lorentzian CD amplitude requires g2 = g4");
    }

    const auto [p_lo, p_hi] = schedule_range(protocol.schedule);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (double p : momentum_grid(protocol)) {
        for (double progress : {p_lo, p_hi}) {
            const auto g = couplings_at(protocol.coupling, p, progress);
            if (!(two_pi * protocol.v_F + g.g4 > std::abs(g.g2))) {
                std::ostringstream os;
                os << "mode p = " << p << " unstable at schedule value P = " << progress
                   << " (g2 = " << g.g2 << ", g4 = " << g.g4 << ")";
                fail(ErrorKind::luttinger_instability, os.str());
            }
        }
    }
}

ProtocolProgress protocol_progress(const DriveProtocol& protocol, double t) {
    if (!(t >= 0.0 && t <= protocol.t_f)) {
        std::ostringstream os;
        os << "time " << t << " outside [0, " << protocol.t_f << "]";
        fail(ErrorKind::contract, os.str());
    }
    const auto sv = schedule_value(t / protocol.t_f, protocol.schedule);
    return {sv.value, sv.slope / protocol.t_f};
}

ModeCouplings mode_couplings(const DriveProtocol& protocol, double p, double t) {
    const auto progress = protocol_progress(protocol, t);
    return {couplings_at(protocol.coupling, p, progress.value),
            coupling_rates(protocol.coupling, p, progress.rate)};
}

std::vector<double> momentum_grid(const DriveProtocol& protocol) {
    return momentum_grid(protocol.L, protocol.n_modes);
}

}  // namespace tllcd

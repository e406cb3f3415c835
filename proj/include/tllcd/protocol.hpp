#pragma once

#include "tllcd/schedule.hpp"
#include "tllcd/tll_model.hpp"

namespace tllcd {

/// Which CD amplitude drives Lorentzian runs: the exact K_p-derivative or the
/// first-order expansion in R0 |p|.
enum class LorentzianChiMode { exact, linearized };

/// Initial pair state: the free vacuum |Omega>, or the ground state of H_TL(0)
/// (differs from the vacuum when the couplings start nonzero).
enum class InitialState { vacuum, ground };

/// Interaction ramp g_{2/4}(p,t) = g(0) + [g(t_f) - g(0)] P(t/t_f) on a ring
/// of length L with modes p_n = 2 pi n / L, n = 1..n_modes.
struct DriveProtocol {
    CouplingSpec coupling;
    Schedule schedule;
    double t_f = 1.0;
    double L = 1.0;
    int n_modes = 128;
    bool cd_enabled = true;
    double v_F = 1.0;
    LorentzianChiMode lorentzian_chi = LorentzianChiMode::exact;
    InitialState initial_state = InitialState::vacuum;

    bool operator==(const DriveProtocol&) const = default;
};

/// Field checks plus Luttinger stability (2 pi v_F + g4 > |g2|) of every grid
/// mode over the whole ramp. Stability is tested at the extremes of the
/// schedule range, which is exact because the condition is concave in P.
void validate(const DriveProtocol& protocol);

struct ProtocolProgress {
    double value = 0.0;  // P(t/t_f)
    double rate = 0.0;   // dP/dt
};

/// Throws a contract error for t outside [0, t_f].
ProtocolProgress protocol_progress(const DriveProtocol& protocol, double t);

/// Couplings of mode p at time t together with their time derivatives.
struct ModeCouplings {
    MomentumCouplings value;
    MomentumCouplings rate;
};

ModeCouplings mode_couplings(const DriveProtocol& protocol, double p, double t);

std::vector<double> momentum_grid(const DriveProtocol& protocol);

}  // namespace tllcd

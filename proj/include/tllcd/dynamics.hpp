#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tllcd/cd_control.hpp"
#include "tllcd/errors.hpp"
#include "tllcd/ode.hpp"
#include "tllcd/protocol.hpp"
#include "tllcd/su11.hpp"

namespace tllcd {

/// Generator of one unordered pair (p, -p):
///   H_pair = 2 omega K0 + g (K+ + K-) + i chi (K+ - K-)
/// with chi = K_p'/(2 K_p) when CD is on and 0 otherwise.
struct PairCoefficients {
    double omega = 0.0;
    double g = 0.0;
    double chi = 0.0;
};

PairCoefficients pair_generator(double p, double t, const DriveProtocol& protocol);

struct ObservableRecord {
    double t = 0.0;
    double p = 0.0;
    double occupation_bare = 0.0;           // <b^dag(p) b(p)>
    double occupation_quasiparticle = 0.0;  // <a^dag(p,t) a(p,t)>
    double fidelity_instantaneous_gs = 1.0;
    double pair_energy = 0.0;        // <H_TL> of the pair, zero point subtracted
    double controlled_energy = 0.0;  // <H_TL + H_CD> of the pair, zero point included
    double residual_energy = 0.0;    // pair_energy - (eps - omega)
    double epsilon_cd = 0.0;         // sqrt(v_s^2 p^2 - chi^2) for the applied chi
    double chi = 0.0;                // applied CD amplitude
    double phase_integral = 0.0;     // int_0^t ds / sigma_s^2 = int_0^t v_{s,p}(s)/v_F ds
};

struct ModeTrajectory {
    double p = 0.0;
    std::vector<double> times;
    std::vector<BogoliubovMap> maps;
    std::vector<ObservableRecord> records;
    double max_invariant_drift = 0.0;
    OdeStats stats;
};

struct EvolveOptions {
    OdeTolerance ode;
    int record_points = 201;
    InvariantTolerance invariant;
    /// Overrides the protocol's initial state when set.
    std::optional<BogoliubovMap> initial;
};

/// Initial pair state selected by the protocol.
BogoliubovMap initial_pair_state(double p, const DriveProtocol& protocol);

/// Integrates the Bogoliubov coefficients of mode p,
///   du/dt = i omega u - (i g + chi) v,    dv/dt = (i g - chi) u - i omega v,
/// and records observables on a uniform grid of `record_points` times.
/// Throws cd-instability when v_{s,p} p <= |chi| at an accepted step, an
/// integration error (with time stamp) on step-size underflow, and a contract
/// error when the invariant drifts past options.invariant.error. Drift past
/// options.invariant.warn is reported once per mode.
ModeTrajectory evolve_pair(double p, const DriveProtocol& protocol, const EvolveOptions& options = {});

/// Expresses `state` relative to the instantaneous ground state
/// squeeze_from_angle(eta_t): vacuum_observables of the result give the
/// quasiparticle occupation and state_overlap with the identity the fidelity.
BogoliubovMap quasiparticle_frame(const BogoliubovMap& state, double eta_t,
                                  const InvariantTolerance& tol = {});

struct PairEnergy {
    double reference = 0.0;   // <H_TL,pair> = 2 omega n + 2 g Re<bb>
    double controlled = 0.0;  // omega (2n+1) + 2 g Re<bb> + 2 chi Im<bb>
    double ground = 0.0;      // eps - omega
    double residual = 0.0;    // reference - ground
};

PairEnergy pair_energy(const BogoliubovMap& state, const PairCoefficients& coeffs);

/// max_t |<H(t)> - sum_p (v_{s,p}(t)/v_{s,p}(0)) <H_p(0)>| / <H(0)>, using the
/// controlled energies (zero point included). For a free start v_{s,p}(0) = v_F.
/// Throws a contract error when CD is off.
double mean_energy_scaling_check(std::span<const ModeTrajectory> trajectories,
                                 const DriveProtocol& protocol);
double mean_energy_scaling_check(const ModeTrajectory& trajectory, const DriveProtocol& protocol);

struct AggregatePoint {
    double t = 0.0;
    double total_residual = 0.0;
    double total_energy = 0.0;  // sum of controlled energies
    double v_s = 0.0;           // at the slowest mode
    double K = 0.0;             // at the slowest mode
    double chi = 0.0;           // CD amplitude of the protocol at the slowest mode
    double min_margin = 0.0;    // min over modes of p - |chi_p| / v_{s,p}
};

struct ModeError {
    int mode_index = 0;
    double p = 0.0;
    ErrorKind kind = ErrorKind::integration;
    std::string message;
};

struct SimulationResult {
    std::vector<ModeTrajectory> modes;  // failed modes keep the records up to the failure
    std::vector<AggregatePoint> aggregate;
    std::vector<ModeError> errors;
    bool complete() const { return errors.empty(); }
};

/// Evolves all modes independently (optionally on several worker threads) and
/// aggregates in fixed mode order, so results do not depend on `workers`.
SimulationResult run_simulation(const DriveProtocol& protocol, const EvolveOptions& options = {},
                                int workers = 1);

struct SweepRow {
    double t_f = 0.0;
    bool cd_enabled = false;
    bool stability_pass = false;
    double stability_margin = 0.0;
    double final_residual = 0.0;
    double min_final_fidelity = 0.0;
    double max_final_occupation = 0.0;
    std::string status;  // "ok", or the error kind that stopped the row
};

std::vector<SweepRow> sweep_tf(const DriveProtocol& protocol_template, std::span<const double> tf_list,
                               const EvolveOptions& options = {}, int workers = 1);

}  // namespace tllcd

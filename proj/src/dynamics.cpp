#include "tllcd/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

namespace tllcd {

namespace {

using State = DormandPrince54<5>::State;  // Re u, Im u, Re v, Im v, phase integral

BogoliubovMap to_map(const State& y) { return {cplx(y[0], y[1]), cplx(y[2], y[3])}; }

std::vector<double> record_times(double t_f, int record_points) {
    require(record_points >= 2, "record_points must be at least 2");
    std::vector<double> times(static_cast<std::size_t>(record_points));
    for (int k = 0; k < record_points; ++k)
        times[static_cast<std::size_t>(k)] = t_f * static_cast<double>(k) / (record_points - 1);
    times.back() = t_f;
    return times;
}

double mode_sound_velocity(double p, double t, const DriveProtocol& protocol) {
    const auto mc = mode_couplings(protocol, p, t);
    return luttinger_params(mc.value.g2, mc.value.g4, protocol.v_F).v_s;
}

ObservableRecord make_record(double t, double p, const BogoliubovMap& map, double phase_integral,
                             const DriveProtocol& protocol) {
    const auto coeffs = pair_generator(p, t, protocol);
    const double eta = bogoliubov_angle(coeffs.omega, coeffs.g);
    // The caller has already checked the invariant of `map`.
    const InvariantTolerance unchecked{std::numeric_limits<double>::infinity(),
                                       std::numeric_limits<double>::infinity()};
    const auto frame = quasiparticle_frame(map, eta, unchecked);
    const auto energy = pair_energy(map, coeffs);

    ObservableRecord rec;
    rec.t = t;
    rec.p = p;
    rec.occupation_bare = std::norm(map.v);
    rec.occupation_quasiparticle = std::norm(frame.v);
    rec.fidelity_instantaneous_gs = state_overlap(BogoliubovMap::identity(), frame);
    rec.pair_energy = energy.reference;
    rec.controlled_energy = energy.controlled;
    rec.residual_energy = energy.residual;
    rec.chi = coeffs.chi;
    rec.epsilon_cd = spectrum_with_cd(mode_sound_velocity(p, t, protocol), p, coeffs.chi);
    rec.phase_integral = phase_integral;
    return rec;
}

struct PartialEvolution {
    ModeTrajectory trajectory;
    std::optional<ModeError> error;
    std::exception_ptr exception;
};

PartialEvolution evolve_pair_partial(double p, const DriveProtocol& protocol, const EvolveOptions& options,
                                     bool warn_drift) {
    PartialEvolution out;
    auto& traj = out.trajectory;
    traj.p = p;
    try {
        require(p > 0.0, "evolve_pair requires p > 0");
        const auto times = record_times(protocol.t_f, options.record_points);
        const BogoliubovMap start = options.initial ? *options.initial : initial_pair_state(p, protocol);
        validate(start, options.invariant);

        State y{start.u.real(), start.u.imag(), start.v.real(), start.v.imag(), 0.0};
        const double v_F = protocol.v_F;
        auto rhs = [&](double t, const State& s, State& dydt) {
            // Trial stages can overshoot t_f by rounding only; clamp for the schedule.
            const double tc = std::min(t, protocol.t_f);
            const auto c = pair_generator(p, tc, protocol);
            const cplx u(s[0], s[1]), v(s[2], s[3]);
            const cplx i(0.0, 1.0);
            const cplx du = i * c.omega * u - cplx(c.chi, c.g) * v;
            const cplx dv = cplx(-c.chi, c.g) * u - i * c.omega * v;
            dydt = {du.real(), du.imag(), dv.real(), dv.imag(), mode_sound_velocity(p, tc, protocol) / v_F};
        };
        bool warned = false;
        auto observer = [&](double t, const State& s) {
            const auto map = to_map(s);
            const double drift = std::abs(map.invariant_drift());
            traj.max_invariant_drift = std::max(traj.max_invariant_drift, drift);
            if (!(drift <= options.invariant.error)) {
                std::ostringstream os;
                os << "mode p = " << p << " at t = " << t << ": invariant drift " << drift << " exceeds "
                   << options.invariant.error;
                fail(ErrorKind::contract, os.str());
            }
            if (warn_drift && drift > options.invariant.warn && !warned) {
                std::ostringstream os;
                os << "mode p = " << p << ": invariant drift " << drift << " exceeds " << options.invariant.warn
                   << " from t = " << t;
                warn(os.str());
                warned = true;
            }
            traj.times.push_back(t);
            traj.maps.push_back(map);
            traj.records.push_back(make_record(t, p, map, s[4], protocol));
        };
        auto on_step = [&](double t, const State&) {
            if (!protocol.cd_enabled) return;
            const double chi = drive_cd_amplitude(p, t, protocol);
            const double v_s = mode_sound_velocity(p, t, protocol);
            if (!(v_s * p > std::abs(chi))) {
                std::ostringstream os;
                os << "mode p = " << p << " at t = " << t << ": v_s*p = " << v_s * p
                   << " <= |chi| = " << std::abs(chi);
                fail(ErrorKind::cd_instability, os.str());
            }
        };
        DormandPrince54<5> integrator(options.ode);
        traj.stats = integrator.integrate(rhs, y, times, observer, on_step);
    } catch (const Error& e) {
        out.error = ModeError{0, p, e.kind(), e.what()};
        out.exception = std::current_exception();
    }
    return out;
}

}  // namespace

PairCoefficients pair_generator(double p, double t, const DriveProtocol& protocol) {
    const auto mc = mode_couplings(protocol, p, t);
    const auto f = pair_frequencies(p, mc.value, protocol.v_F);
    return {f.omega, f.g, drive_cd_amplitude(p, t, protocol)};
}

BogoliubovMap initial_pair_state(double p, const DriveProtocol& protocol) {
    if (protocol.initial_state == InitialState::vacuum) return BogoliubovMap::identity();
    const auto c = pair_generator(p, 0.0, protocol);
    return squeeze_from_angle(bogoliubov_angle(c.omega, c.g));
}

ModeTrajectory evolve_pair(double p, const DriveProtocol& protocol, const EvolveOptions& options) {
    auto result = evolve_pair_partial(p, protocol, options, true);
    if (result.exception) std::rethrow_exception(result.exception);
    return std::move(result.trajectory);
}

BogoliubovMap quasiparticle_frame(const BogoliubovMap& state, double eta_t, const InvariantTolerance& tol) {
    return compose(inverse(squeeze_from_angle(eta_t)), state, tol);
}

PairEnergy pair_energy(const BogoliubovMap& state, const PairCoefficients& coeffs) {
    const auto obs = vacuum_observables(state);
    const double n = obs.occupation;
    const cplx c = obs.pair_correlator;
    PairEnergy e;
    e.reference = 2.0 * coeffs.omega * n + 2.0 * coeffs.g * c.real();
    e.controlled = coeffs.omega * (2.0 * n + 1.0) + 2.0 * coeffs.g * c.real() + 2.0 * coeffs.chi * c.imag();
    e.ground = instantaneous_spectrum(coeffs.omega, coeffs.g) - coeffs.omega;
    e.residual = e.reference - e.ground;
    return e;
}

double mean_energy_scaling_check(std::span<const ModeTrajectory> trajectories,
                                 const DriveProtocol& protocol) {
    require(protocol.cd_enabled, "mean-energy scaling holds only with CD enabled");
    if (trajectories.empty()) return 0.0;
    const std::size_t n_times = trajectories.front().records.size();
    for (const auto& tr : trajectories)
        require(tr.records.size() == n_times && n_times > 0,
                "mean-energy scaling needs complete trajectories on a common grid");

    double initial_total = 0.0;
    for (const auto& tr : trajectories) initial_total += tr.records.front().controlled_energy;
    require(initial_total != 0.0, "initial mean energy vanishes");

    double worst = 0.0;
    for (std::size_t k = 0; k < n_times; ++k) {
        double actual = 0.0, expected = 0.0;
        for (const auto& tr : trajectories) {
            const double t = tr.records[k].t;
            const double ratio =
                mode_sound_velocity(tr.p, t, protocol) / mode_sound_velocity(tr.p, 0.0, protocol);
            actual += tr.records[k].controlled_energy;
            expected += ratio * tr.records.front().controlled_energy;
        }
        worst = std::max(worst, std::abs(actual - expected) / std::abs(initial_total));
    }
    return worst;
}

double mean_energy_scaling_check(const ModeTrajectory& trajectory, const DriveProtocol& protocol) {
    return mean_energy_scaling_check(std::span<const ModeTrajectory>(&trajectory, 1), protocol);
}

SimulationResult run_simulation(const DriveProtocol& protocol, const EvolveOptions& options, int workers) {
    validate(protocol);
    const auto grid = momentum_grid(protocol);
    const std::size_t n = grid.size();
    std::vector<PartialEvolution> partial(n);

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
            partial[i] = evolve_pair_partial(grid[i], protocol, options, false);
    };
    const int n_workers = std::clamp(workers, 1, static_cast<int>(n));
    if (n_workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
    }

    SimulationResult result;
    result.modes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (partial[i].error) {
            auto err = *partial[i].error;
            err.mode_index = static_cast<int>(i) + 1;
            result.errors.push_back(std::move(err));
        }
        result.modes.push_back(std::move(partial[i].trajectory));
    }
    int drifting = 0;
    double worst_drift = 0.0;
    for (const auto& m : result.modes) {
        worst_drift = std::max(worst_drift, m.max_invariant_drift);
        if (m.max_invariant_drift > options.invariant.warn) ++drifting;
    }
    if (drifting > 0) {
        std::ostringstream os;
        os << drifting << " of " << n << " modes have invariant drift above " << options.invariant.warn
           << " (max " << worst_drift << ")";
        warn(os.str());
    }

    // Aggregate over the record grid; rows stop where the shortest trajectory stops.
    std::size_t n_rows = std::numeric_limits<std::size_t>::max();
    for (const auto& m : result.modes) n_rows = std::min(n_rows, m.records.size());
    if (result.modes.empty()) n_rows = 0;
    const double p_slow = grid.front();
    DriveProtocol cd_on = protocol;  // margins and chi describe the protocol, not the switch
    cd_on.cd_enabled = true;
    for (std::size_t k = 0; k < n_rows; ++k) {
        AggregatePoint row;
        row.t = result.modes.front().records[k].t;
        for (const auto& m : result.modes) {
            row.total_residual += m.records[k].residual_energy;
            row.total_energy += m.records[k].controlled_energy;
        }
        const auto mc = mode_couplings(protocol, p_slow, row.t);
        const auto lp = luttinger_params(mc.value.g2, mc.value.g4, protocol.v_F);
        row.v_s = lp.v_s;
        row.K = lp.K;
        row.chi = drive_cd_amplitude(p_slow, row.t, cd_on);
        row.min_margin = std::numeric_limits<double>::infinity();
        for (double p : grid) {
            const double chi = drive_cd_amplitude(p, row.t, cd_on);
            row.min_margin = std::min(row.min_margin, p - std::abs(chi) / mode_sound_velocity(p, row.t, protocol));
        }
        result.aggregate.push_back(row);
    }
    return result;
}

std::vector<SweepRow> sweep_tf(const DriveProtocol& protocol_template, std::span<const double> tf_list,
                               const EvolveOptions& options, int workers) {
    require(!tf_list.empty(), "sweep needs at least one t_f");
    std::vector<SweepRow> rows;
    rows.reserve(tf_list.size());
    for (double t_f : tf_list) {
        DriveProtocol protocol = protocol_template;
        protocol.t_f = t_f;
        SweepRow row;
        row.t_f = t_f;
        row.cd_enabled = protocol.cd_enabled;
        const auto nan = std::numeric_limits<double>::quiet_NaN();
        row.final_residual = row.min_final_fidelity = row.max_final_occupation = nan;
        try {
            validate(protocol);
            const auto stability = stability_margin(protocol);
            row.stability_pass = stability.pass;
            row.stability_margin = stability.margin;
            if (protocol.cd_enabled && !stability.pass) {
                row.status = std::string(to_string(ErrorKind::cd_instability));
                rows.push_back(row);
                continue;
            }
            const auto sim = run_simulation(protocol, options, workers);
            if (!sim.complete()) {
                row.status = std::string(to_string(sim.errors.front().kind));
                rows.push_back(row);
                continue;
            }
            row.final_residual = 0.0;
            row.min_final_fidelity = 1.0;
            row.max_final_occupation = 0.0;
            for (const auto& m : sim.modes) {
                const auto& last = m.records.back();
                row.final_residual += last.residual_energy;
                row.min_final_fidelity = std::min(row.min_final_fidelity, last.fidelity_instantaneous_gs);
                row.max_final_occupation = std::max(row.max_final_occupation, last.occupation_quasiparticle);
            }
            row.status = "ok";
        } catch (const Error& e) {
            row.status = std::string(to_string(e.kind()));
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace tllcd

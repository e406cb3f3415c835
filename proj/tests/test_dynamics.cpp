#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "support.hpp"
#include "tllcd/dynamics.hpp"

using namespace tllcd;
using doctest::Approx;
using std::numbers::pi;

namespace {

constexpr double ramp_tf = 2.0 * 4.749430483234583;

/// Single-mode protocol with coupling ratio g/omega = r at the end of the ramp:
/// with v_F = 1 and g4 = 0, g/omega = g2 / (2 pi).
DriveProtocol quench_protocol(double ratio, double t_f, bool cd) {
    DriveProtocol p;
    p.coupling.g2_end = 2 * pi * ratio;
    p.t_f = t_f;
    p.L = 2 * pi;
    p.n_modes = 1;
    p.cd_enabled = cd;
    return p;
}

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::contract;
}

}  // namespace

TEST_CASE("pair_generator follows the protocol") {
    const auto p = testing::reference_ramp(ramp_tf);
    const auto start = pair_generator(0.5, 0.0, p);
    CHECK(start.omega == Approx(0.5));
    CHECK(start.g == 0.0);
    CHECK(start.chi == 0.0);
    const auto end = pair_generator(1.0, ramp_tf, p);
    CHECK(end.omega == Approx(1.0795774715459477).epsilon(1e-14));
    CHECK(end.g == Approx(0.15915494309189534).epsilon(1e-14));
    CHECK(end.chi == Approx(0.0).scale(1.0));
    auto off = p;
    off.cd_enabled = false;
    CHECK(pair_generator(0.5, 0.5 * ramp_tf, off).chi == 0.0);
    CHECK(pair_generator(0.5, 0.5 * ramp_tf, p).chi < 0.0);
}

TEST_CASE("free static evolution stays in the vacuum") {
    DriveProtocol free;
    free.t_f = 3.0;
    free.n_modes = 1;
    const auto tr = evolve_pair(1.0, free);
    CHECK(tr.records.size() == 201);
    for (const auto& r : tr.records) {
        CHECK(r.occupation_bare == 0.0);
        CHECK(r.fidelity_instantaneous_gs == Approx(1.0));
    }
    // The phase integral of v_s/v_F is t when nothing is ramped.
    CHECK(tr.records.back().phase_integral == Approx(3.0).epsilon(1e-10));
}

TEST_CASE("CD drive reaches the squeezed ground state of the final Hamiltonian") {
    const auto protocol = testing::reference_ramp(ramp_tf);
    for (double p : {2 * pi / 100.0, 1.0, 4.0}) {
        const auto tr = evolve_pair(p, protocol);
        for (const auto& r : tr.records) {
            CHECK(r.fidelity_instantaneous_gs >= 1.0 - 1e-9);
            CHECK(r.occupation_quasiparticle <= 1e-9);
        }
        const auto c = pair_generator(p, ramp_tf, protocol);
        const auto lp = luttinger_params(1.0, 0.5, 1.0);
        // ln gamma_p = ln sqrt(K_p) is the diagonalizing angle.
        CHECK(bogoliubov_angle(c.omega, c.g) == Approx(0.5 * std::log(lp.K)).epsilon(1e-12));
        CHECK(state_overlap(tr.maps.back(), squeeze_from_angle(0.5 * std::log(lp.K))) >= 1.0 - 1e-9);
        CHECK(tr.max_invariant_drift < 1e-8);
    }
}

TEST_CASE("sudden quench excites sinh^2 eta_f quasiparticles") {
    for (double ratio : {0.2, 0.5, 0.8}) {
        const auto protocol = quench_protocol(ratio, 1e-4, false);
        const auto tr = evolve_pair(1.0, protocol);
        const double eta_f = -0.5 * std::atanh(ratio);
        CHECK(tr.records.back().occupation_quasiparticle ==
              Approx(std::sinh(eta_f) * std::sinh(eta_f)).epsilon(1e-6));
    }
}

TEST_CASE("cd-instability when the drive is too fast") {
    const auto protocol = testing::reference_ramp(0.5);
    CHECK(kind_of([&] { evolve_pair(2 * pi / 100.0, protocol); }) == ErrorKind::cd_instability);
    auto off = protocol;
    off.cd_enabled = false;
    CHECK_NOTHROW(evolve_pair(2 * pi / 100.0, off));
}

TEST_CASE("integration failures are reported with the mode") {
    auto protocol = testing::reference_ramp(ramp_tf, 3);
    EvolveOptions opts;
    opts.ode.max_steps = 3;
    const auto sim = run_simulation(protocol, opts);
    CHECK_FALSE(sim.complete());
    REQUIRE(sim.errors.size() == 3);
    CHECK(sim.errors.front().mode_index == 1);
    CHECK(sim.errors.front().kind == ErrorKind::integration);
    CHECK(sim.aggregate.size() <= sim.modes.front().records.size());
}

TEST_CASE("pair_energy conventions") {
    const PairCoefficients c{2.0, 1.0, 0.0};
    const auto gs = squeeze_from_angle(bogoliubov_angle(2.0, 1.0));
    const auto e = pair_energy(gs, c);
    CHECK(e.ground == Approx(std::sqrt(3.0) - 2.0));
    CHECK(e.reference == Approx(e.ground).epsilon(1e-14));
    CHECK(e.residual == Approx(0.0).scale(1.0));
    CHECK(e.controlled == Approx(std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("property: residual energy is non-negative along CD-off ramps") {
    testing::Sampler s(41);
    for (int k = 0; k < 40; ++k) {
        auto protocol = testing::reference_ramp(s.uniform(0.5, 30.0), 1, false);
        protocol.coupling.g2_end = s.uniform(-3.0, 3.0);
        protocol.coupling.g4_end = s.uniform(-2.0, 3.0);
        protocol.L = s.uniform(1.0, 50.0);
        EvolveOptions opts;
        opts.record_points = 41;
        const auto tr = evolve_pair(momentum_grid(protocol).front(), protocol, opts);
        for (const auto& r : tr.records) CHECK(r.residual_energy >= -1e-9);
    }
}

TEST_CASE("mean energy scales with v_s under CD") {
    const auto protocol = testing::reference_ramp(ramp_tf, 16);
    const auto sim = run_simulation(protocol);
    REQUIRE(sim.complete());
    CHECK(mean_energy_scaling_check(sim.modes, protocol) < 1e-8);
    auto off = protocol;
    off.cd_enabled = false;
    CHECK_THROWS_AS(mean_energy_scaling_check(sim.modes, off), Error);

    // Interacting start: the ratio uses v_s(0) instead of v_F.
    auto ground = protocol;
    ground.coupling.g2_start = 0.4;
    ground.coupling.g4_start = 0.2;
    ground.initial_state = InitialState::ground;
    const auto sim_g = run_simulation(ground);
    REQUIRE(sim_g.complete());
    CHECK(mean_energy_scaling_check(sim_g.modes, ground) < 1e-8);
    CHECK(sim_g.modes.front().records.front().fidelity_instantaneous_gs == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("run_simulation is independent of the worker count") {
    const auto protocol = testing::reference_ramp(ramp_tf, 24);
    const auto a = run_simulation(protocol, {}, 1);
    const auto b = run_simulation(protocol, {}, 5);
    REQUIRE(a.modes.size() == b.modes.size());
    for (std::size_t i = 0; i < a.modes.size(); ++i) {
        const auto& ra = a.modes[i].records.back();
        const auto& rb = b.modes[i].records.back();
        CHECK(std::memcmp(&ra, &rb, sizeof ra) == 0);
    }
    REQUIRE(a.aggregate.size() == b.aggregate.size());
    for (std::size_t k = 0; k < a.aggregate.size(); ++k)
        CHECK(std::memcmp(&a.aggregate[k], &b.aggregate[k], sizeof a.aggregate[k]) == 0);
    CHECK(a.aggregate.back().K == Approx(0.86199524255638199).epsilon(1e-12));
    CHECK(a.aggregate.front().min_margin == Approx(2 * pi / 100.0));
}

TEST_CASE("sweep_tf") {
    const auto protocol = testing::reference_ramp(1.0, 16, false);
    const std::vector<double> tfs{5.0, 10.0, 20.0, 40.0};
    const auto rows = sweep_tf(protocol, tfs);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].status == "ok");
        if (i) CHECK(rows[i].final_residual < rows[i - 1].final_residual);
    }

    auto on = protocol;
    on.cd_enabled = true;
    const std::vector<double> mixed{0.5, ramp_tf};
    const auto cd_rows = sweep_tf(on, mixed);
    CHECK(cd_rows[0].status == "cd-instability");
    CHECK(std::isnan(cd_rows[0].final_residual));
    CHECK(cd_rows[1].status == "ok");
    CHECK(cd_rows[1].final_residual < 1e-8);
}

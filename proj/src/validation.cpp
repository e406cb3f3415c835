#include "tllcd/validation.hpp"

#include <algorithm>
#include <cmath>

#include "tllcd/dynamics.hpp"
#include "tllcd/fock_oracle.hpp"

namespace tllcd {

namespace {

ValidationCheck make_check(std::string name, double error, double tolerance) {
    return {std::move(name), error, tolerance, std::isfinite(error) && error <= tolerance};
}

void compare_routes(const DriveProtocol& protocol, double p, int n_max, int record_points, const std::string& tag,
                    std::vector<ValidationCheck>& out) {
    EvolveOptions opts;
    opts.record_points = record_points;
    const auto gauss = evolve_pair(p, protocol, opts);
    const auto start = gaussian_amplitudes(gauss.maps.front(), n_max);
    const auto fock = evolve_fock(start, protocol, p, n_max, 1e-11, record_points);

    double worst = 0.0;
    for (std::size_t k = 0; k < fock.states.size(); ++k) {
        const auto predicted = gaussian_amplitudes(gauss.maps[k], n_max);
        worst = std::max(worst, 1.0 - fock_overlap(predicted, fock.states[k]));
    }
    out.push_back(make_check("overlap_" + tag, worst, 1e-6));
    out.push_back(make_check("cutoff_tail_" + tag, fock.max_tail_mass, 1e-10));
    out.push_back(make_check("norm_drift_" + tag, fock.max_norm_drift, 1e-9));

    const auto& final_map = gauss.maps.back();
    const auto& final_state = fock.states.back();
    const auto g_obs = vacuum_observables(final_map);
    const auto f_obs = fock_observables(final_state);
    out.push_back(make_check("occupation_" + tag, std::abs(g_obs.occupation - f_obs.occupation), 1e-6));
    out.push_back(make_check("pair_correlator_" + tag, std::abs(g_obs.pair_correlator - f_obs.pair_correlator), 1e-6));

    const auto coeffs = pair_generator(p, protocol.t_f, protocol);
    const double e_gauss = pair_energy(final_map, coeffs).controlled;
    const double e_fock = fock_energy(final_state, coeffs);
    out.push_back(make_check("energy_" + tag, std::abs(e_gauss - e_fock) / std::max(1.0, std::abs(e_fock)), 1e-6));
}

}  // namespace

std::vector<ValidationCheck> oracle_validation(const DriveProtocol& protocol, int n_max, int record_points) {
    validate(protocol);
    std::vector<ValidationCheck> out;
    const double p = momentum_grid(protocol).front();

    DriveProtocol on = protocol, off = protocol;
    on.cd_enabled = true;
    off.cd_enabled = false;
    compare_routes(on, p, n_max, record_points, "cd_on", out);
    compare_routes(off, p, n_max, record_points, "cd_off", out);

    // Controlled spectrum at mid-ramp: eigenvalues eps_cd (2k + 1).
    const double t_mid = 0.5 * protocol.t_f;
    const auto c = pair_generator(p, t_mid, on);
    const auto mc = mode_couplings(on, p, t_mid);
    const double v_s = luttinger_params(mc.value.g2, mc.value.g4, on.v_F).v_s;
    const double eps_cd = spectrum_with_cd(v_s, p, c.chi);
    const auto spec = pair_spectrum(c, 200);
    out.push_back(make_check("spectrum_ground", std::abs(spec.ground - eps_cd) / eps_cd, 1e-6));
    out.push_back(make_check("spectrum_gap", std::abs(0.5 * spec.first_gap - eps_cd) / eps_cd, 1e-6));

    // Transitionless end state: the squeezed vacuum of the final ground state.
    const auto start = initial_pair_state(p, on);
    const auto fock = evolve_fock(gaussian_amplitudes(start, n_max), on, p, n_max, 1e-11, 2);
    const auto cf = pair_generator(p, on.t_f, on);
    const double eta_f = bogoliubov_angle(cf.omega, cf.g);
    const auto target = tmsv_amplitudes(eta_f, n_max);
    out.push_back(make_check("transitionless_end_state", 1.0 - fock_overlap(target, fock.states.back()), 1e-8));
    out.push_back(make_check("tmsv_annihilation", annihilation_residual(target, squeeze_from_angle(eta_f)), 1e-8));
    return out;
}

}  // namespace tllcd

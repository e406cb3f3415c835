// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.
// Exit status is 0 only when every criterion passes, unless --allow-red lists
// the criteria whose failure is analysed and accepted.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "support.hpp"
#include "tllcd/cd_control.hpp"
#include "tllcd/config.hpp"
#include "tllcd/dynamics.hpp"
#include "tllcd/errors.hpp"
#include "tllcd/fock_oracle.hpp"
#include "tllcd/outputs.hpp"
#include "tllcd/units.hpp"

using namespace tllcd;
using std::numbers::pi;

namespace {

constexpr double ramp_bound = 4.749430483234583;  // L |g24 max P'| / (2 pi v_F)^2, L = 100, g24 = 1
constexpr double ramp_tf = 2.0 * ramp_bound;

constexpr double tol_fidelity = 1e-8;
constexpr double tol_occupation = 1e-8;
constexpr double max_seconds_ramp = 10.0;
constexpr double tol_energy_scaling = 1e-8;
constexpr double tol_endpoint = 1e-4;
constexpr double tol_t_min_ms = 0.01;
constexpr double tol_t_upper_ms = 0.5;
constexpr double tol_gas_velocity = 0.02;
constexpr double tol_spectrum = 1e-6;
constexpr double tol_overlap = 1e-6;
constexpr double max_seconds_oracle = 5.0;
constexpr double tol_quench = 1e-6;
constexpr double min_residual_drop = 10.0;
constexpr double tol_identity_rel = 1e-8;
constexpr double tol_fd = 1e-5;
constexpr double tol_delta_nu_rel = 1e-6;
constexpr int samples = 1000;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Outcome criterion_1_2(const SimulationResult*& out) {
    static SimulationResult result;
    static double elapsed = 0.0;
    static bool ran = false;
    if (!ran) {
        const auto t0 = std::chrono::steady_clock::now();
        result = run_simulation(testing::reference_ramp(ramp_tf));
        elapsed = seconds_since(t0);
        ran = true;
    }
    out = &result;
    if (!result.complete()) return {false, "run failed: " + result.errors.front().message};
    double worst_fid = 0.0, worst_occ = 0.0;
    for (const auto& m : result.modes) {
        for (const auto& r : m.records) worst_fid = std::max(worst_fid, 1.0 - r.fidelity_instantaneous_gs);
        worst_occ = std::max(worst_occ, m.records.back().occupation_quasiparticle);
    }
    const bool pass = result.modes.size() == 64 && worst_fid <= tol_fidelity && worst_occ <= tol_occupation &&
                      elapsed < max_seconds_ramp;
    return {pass, "max(1-F) = " + fmt(worst_fid) + ", max final n_qp = " + fmt(worst_occ) +
                      ", runtime = " + fmt(elapsed) + " s"};
}

Outcome criterion_1() {
    const SimulationResult* r = nullptr;
    return criterion_1_2(r);
}

Outcome criterion_2() {
    const SimulationResult* r = nullptr;
    criterion_1_2(r);
    if (!r->complete()) return {false, "reference ramp run failed"};
    const double dev = mean_energy_scaling_check(r->modes, testing::reference_ramp(ramp_tf));
    return {dev < tol_energy_scaling, "max relative deviation = " + fmt(dev)};
}

Outcome criterion_3() {
    const auto lp = luttinger_params(1.0, 0.5, 1.0);
    const bool pass = std::abs(lp.K - 0.8620) <= tol_endpoint && std::abs(lp.v_s - 1.0678) <= tol_endpoint;
    return {pass, "K = " + format_double(lp.K) + ", v_s = " + format_double(lp.v_s)};
}

std::map<std::string, std::string> run_stability(const std::string& config_path, int& code) {
    const std::string cmd = std::string(TLL_CD_SIM_PATH) + " stability --config " + config_path + " 2>&1";
    std::map<std::string, std::string> kv;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        code = -1;
        return kv;
    }
    char buf[512];
    while (std::fgets(buf, sizeof buf, pipe)) {
        std::string line(buf);
        const auto eq = line.find(" = ");
        if (eq == std::string::npos || line.find(':') != std::string::npos) continue;
        auto value = line.substr(eq + 3);
        while (!value.empty() && (value.back() == '\n' || value.back() == '\r')) value.pop_back();
        kv[line.substr(0, eq)] = value;
    }
    const int status = pclose(pipe);
    code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return kv;
}

Outcome criterion_4() {
    const auto dir = std::filesystem::temp_directory_path() / "tllcd_acceptance";
    std::filesystem::create_directories(dir);
    const auto cfg = (dir / "experimental.cfg").string();
    write_text_file(cfg,
                    "units = experimental\nL = 50\nsound_velocity = 2.04\nfamily = contact\n"
                    "g2_end = 1\ng4_end = 0.5\nt_f = 20\nn_modes = 8\ncd = off\noutput_dir = " +
                        (dir / "out").string() + "\n");
    int code = 0;
    const auto kv = run_stability(cfg, code);
    const auto t_min_it = kv.find("dimensional_t_min"), upper_it = kv.find("dimensional_t_upper");
    if (code != 0 || t_min_it == kv.end() || upper_it == kv.end())
        return {false, "stability subcommand exit " + std::to_string(code) + " or missing output"};
    const double t_min = std::stod(t_min_it->second), upper = std::stod(upper_it->second);
    const double v_gas = experimental_sound_velocity(GasParameters{5.2, 1.44e-25, 1400.0, 70.0});
    const bool pass = std::abs(t_min - 3.90) <= tol_t_min_ms && std::abs(upper - 39.0) <= tol_t_upper_ms &&
                      std::abs(v_gas - 2.04) <= tol_gas_velocity;
    return {pass, "t_min = " + fmt(t_min) + " ms, upper = " + fmt(upper) + " ms, gas v_s = " + fmt(v_gas) +
                      " um/ms"};
}

Outcome criterion_5() {
    const auto protocol = testing::reference_ramp(ramp_tf);
    testing::Sampler s(905);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double p = s.uniform(2 * pi / protocol.L, 2.0), t = s.uniform(0.0, protocol.t_f);
        const auto pc = pair_generator(p, t, protocol);
        const auto mc = mode_couplings(protocol, p, t);
        const double v_s = luttinger_params(mc.value.g2, mc.value.g4, protocol.v_F).v_s;
        const double eps = spectrum_with_cd(v_s, p, pc.chi);
        const auto sp = pair_spectrum(pc, 200);
        worst = std::max({worst, std::abs(sp.ground - eps), std::abs(0.5 * sp.first_gap - eps)});
    }
    int wrong_trigger = 0;
    for (int k = 0; k < samples; ++k) {
        const double v_s = s.uniform(0.2, 3.0), p = s.uniform(0.01, 3.0), sign = s.integer(0, 1) ? 1.0 : -1.0;
        const double edge = v_s * p;
        for (double chi : {edge, edge * (1 + 1e-12), edge * s.uniform(1.0, 3.0), edge * (1 - 1e-12),
                           edge * s.uniform(0.0, 1.0)}) {
            bool threw = false;
            try {
                spectrum_with_cd(v_s, p, sign * chi);
            } catch (const Error& e) {
                threw = e.kind() == ErrorKind::cd_instability;
            }
            if (threw != (edge <= chi)) ++wrong_trigger;
        }
    }
    return {worst <= tol_spectrum && wrong_trigger == 0,
            "max |eps_cd - eigen| = " + fmt(worst) + ", misclassified instability cases = " +
                std::to_string(wrong_trigger)};
}

Outcome criterion_6() {
    const auto t0 = std::chrono::steady_clock::now();
    const double p = 2 * pi / 100.0;
    const int n_max = 120, points = 51;
    double worst = 0.0;
    bool safe = true;
    for (bool cd : {true, false}) {
        const auto protocol = testing::reference_ramp(ramp_tf, 64, cd);
        EvolveOptions opts;
        opts.record_points = points;
        const auto tr = evolve_pair(p, protocol, opts);
        const auto fk = evolve_fock(FockState::vacuum(n_max), protocol, p, n_max, 1e-11, points);
        safe = safe && fk.cutoff_safe;
        for (std::size_t k = 0; k < tr.maps.size(); ++k)
            worst = std::max(worst, 1.0 - fock_overlap(gaussian_amplitudes(tr.maps[k], n_max), fk.states[k]));
    }
    const double elapsed = seconds_since(t0);
    return {safe && worst <= tol_overlap && elapsed < max_seconds_oracle,
            "max(1-overlap) = " + fmt(worst) + " (CD on and off), runtime = " + fmt(elapsed) + " s"};
}

Outcome criterion_7() {
    double worst = 0.0;
    for (double ratio : {0.2, 0.5, 0.8}) {
        DriveProtocol protocol;
        protocol.coupling.g2_end = 2 * pi * ratio;  // g/omega = g2/(2 pi) with v_F = 1, g4 = 0
        protocol.t_f = 1e-4;
        protocol.L = 2 * pi;
        protocol.n_modes = 1;
        protocol.cd_enabled = false;
        const auto tr = evolve_pair(1.0, protocol);
        const double eta_f = -0.5 * std::atanh(ratio);
        worst = std::max(worst, std::abs(tr.records.back().occupation_quasiparticle - std::sinh(eta_f) * std::sinh(eta_f)));
    }
    return {worst <= tol_quench, "max |n - sinh^2 eta_f| = " + fmt(worst)};
}

double final_residual(double t_f) {
    const auto r = run_simulation(testing::reference_ramp(t_f, 64, false));
    if (!r.complete()) return std::nan("");
    return r.aggregate.back().total_residual;
}

Outcome criterion_8() {
    const double a = final_residual(ramp_tf), b = final_residual(10 * ramp_tf);
    const double drop = a / b;
    return {drop >= min_residual_drop, "residual(t_f) = " + fmt(a) + ", residual(10 t_f) = " + fmt(b) +
                                           ", ratio = " + fmt(drop)};
}

DriveProtocol random_protocol(testing::Sampler& s) {
    DriveProtocol p;
    p.coupling.g2_start = s.uniform(-1.0, 1.0);
    p.coupling.g2_end = s.uniform(-2.0, 2.0);
    p.coupling.g4_start = s.uniform(-1.0, 1.0);
    p.coupling.g4_end = s.uniform(-1.0, 2.0);
    p.schedule.kind = s.integer(0, 1) ? ScheduleKind::poly5 : ScheduleKind::linear;
    p.t_f = s.uniform(0.5, 20.0);
    p.L = s.uniform(5.0, 200.0);
    p.n_modes = 4;
    return p;
}

Outcome criterion_9() {
    testing::Sampler s(909);
    double coeff = 0.0, chi_fd = 0.0, omega_mass = 0.0, r0_limit = 0.0, delta_nu = 0.0, ratio_dev = 0.0;
    for (int k = 0; k < samples; ++k) {
        const auto protocol = random_protocol(s);
        const double p = s.uniform(0.01, 5.0), t = s.uniform(0.01 * protocol.t_f, 0.99 * protocol.t_f);

        // Invariant-built coefficients against the direct Hamiltonian coefficients.
        const auto cc = controlled_coefficients(p, t, protocol);
        const auto f = pair_frequencies(p, mode_couplings(protocol, p, t).value, protocol.v_F);
        coeff = std::max({coeff, rel(cc.omega_cd, f.omega), std::abs(cc.g_cd - f.g) / f.omega});

        const double h = 1e-5 * protocol.t_f;
        auto params = [&](double tt) {
            const auto mc = mode_couplings(protocol, p, tt);
            return luttinger_params(mc.value.g2, mc.value.g4, protocol.v_F);
        };
        const auto lo = params(t - h), hi = params(t + h);
        const double chi = drive_cd_amplitude(p, t, protocol);
        const double fd_log_sqrt_k = (0.5 * std::log(hi.K) - 0.5 * std::log(lo.K)) / (2 * h);
        chi_fd = std::max(chi_fd, std::abs(chi - fd_log_sqrt_k));

        const auto mf_lo = mass_frequency(p, lo.K, lo.v_s, protocol.v_F);
        const auto mf_hi = mass_frequency(p, hi.K, hi.v_s, protocol.v_F);
        const double fd = 0.5 * ((std::log(mf_hi.mass) - std::log(mf_lo.mass)) +
                                 (std::log(mf_hi.frequency) - std::log(mf_lo.frequency))) / (2 * h);
        omega_mass = std::max(omega_mass, std::abs(fd + chi));

        const double lambda = s.uniform(-1.0, 5.0), ldot = s.uniform(-2.0, 2.0), v_F = s.uniform(0.5, 2.0);
        const auto l0 = cd_amplitude_lorentzian(lambda, ldot, 0.0, p, v_F);
        const double contact = cd_amplitude_contact(lambda, lambda, ldot, ldot, v_F);
        r0_limit = std::max({r0_limit, std::abs(l0.exact - contact), std::abs(l0.linearized - contact)});

        const double R0 = s.uniform(0.01, 1.0), L = s.uniform(1.0, 100.0);
        const double nu = gauge_field_amplitude(lambda, ldot, R0, v_F, L);
        const double d2 = delta_coefficients(lambda, ldot, R0, v_F).delta2;
        if (d2 != 0.0) {
            const double first_order = -2.0 * (pi * v_F + lambda) * L * L * nu;
            delta_nu = std::max(delta_nu, rel(first_order, d2));
            ratio_dev = std::max(ratio_dev, rel(d2 / first_order, pi * v_F));
        }
    }
    std::vector<std::string> failed;
    if (coeff > tol_identity_rel) failed.push_back("coefficients");
    if (chi_fd > tol_fd) failed.push_back("chi");
    if (omega_mass > tol_fd) failed.push_back("Omega/M");
    if (r0_limit > tol_identity_rel) failed.push_back("R0->0");
    if (delta_nu > tol_delta_nu_rel) failed.push_back("Delta2<->nu");
    std::string detail = "coefficients " + fmt(coeff) + ", chi fd " + fmt(chi_fd) + ", Omega/M fd " +
                         fmt(omega_mass) + ", R0->0 " + fmt(r0_limit) + ", Delta2<->nu rel " + fmt(delta_nu) +
                         " (Delta2 / first-order = pi v_F within " + fmt(ratio_dev) + ")";
    if (!failed.empty()) {
        detail += "; failing:";
        for (const auto& name : failed) detail += " " + name;
    }
    return {failed.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
    set_warnings_enabled(false);
    std::set<int> allowed_red;
    for (int i = 1; i < argc; ++i) {
        if (std::string(argv[i]) == "--allow-red" && i + 1 < argc) {
            std::stringstream list(argv[++i]);
            for (std::string item; std::getline(list, item, ',');) allowed_red.insert(std::stoi(item));
        }
    }

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"transitionless driving (reference ramp, 64 modes)", criterion_1},
        {"mean-energy scaling", criterion_2},
        {"endpoint K and v_s", criterion_3},
        {"stability window reproduction", criterion_4},
        {"spectrum under CD", criterion_5},
        {"Gaussian vs Fock oracle", criterion_6},
        {"sudden-quench limit", criterion_7},
        {"adiabatic convergence without CD", criterion_8},
        {"algebraic identity suite", criterion_9},
    };

    int failures = 0, unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << id << ' ' << criteria[i].first << ": " << o.detail;
        if (!o.pass && allowed_red.count(id)) std::cout << " [known red]";
        std::cout << '\n';
        if (!o.pass) {
            ++failures;
            if (!allowed_red.count(id)) ++unexpected;
        }
    }
    std::cout << criteria.size() - failures << '/' << criteria.size() << " criteria pass\n";
    return unexpected == 0 && (failures == 0 || !allowed_red.empty()) ? 0 : 1;
}

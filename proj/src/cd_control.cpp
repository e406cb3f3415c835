#include "tllcd/cd_control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "tllcd/errors.hpp"

namespace tllcd {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * pi;

double cd_amplitude_ignoring_switch(double p, double t, const DriveProtocol& protocol) {
    const auto mc = mode_couplings(protocol, p, t);
    if (protocol.lorentzian_chi == LorentzianChiMode::linearized) {
        const auto progress = protocol_progress(protocol, t);
        const auto& c = protocol.coupling;
        const double lambda = c.g2_start + (c.g2_end - c.g2_start) * progress.value;
        const double dlambda = (c.g2_end - c.g2_start) * progress.rate;
        return cd_amplitude_lorentzian(lambda, dlambda, c.R0, p, protocol.v_F).linearized;
    }
    return cd_amplitude_contact(mc.value.g2, mc.value.g4, mc.rate.g2, mc.rate.g4, protocol.v_F);
}

std::vector<double> uniform_times(double t_f, int n_points) {
    require(n_points >= 2, "time grid needs at least two points");
    std::vector<double> times(static_cast<std::size_t>(n_points));
    for (int k = 0; k < n_points; ++k)
        times[static_cast<std::size_t>(k)] = t_f * static_cast<double>(k) / (n_points - 1);
    times.back() = t_f;
    return times;
}

}  // namespace

double cd_amplitude_contact(double g2, double g4, double dg2_dt, double dg4_dt, double v_F) {
    const double base = two_pi * v_F + g4;
    const double denom = base * base - g2 * g2;
    if (!(denom > 0.0)) {
        std::ostringstream os;
        os << "(2*pi*v_F + g4)^2 - g2^2 = " << denom << " is not positive";
        fail(ErrorKind::luttinger_instability, os.str());
    }
    const double kdot_over_k = (dg4_dt * g2 - dg2_dt * base) / denom;
    return 0.5 * kdot_over_k;
}

LorentzianCdAmplitude cd_amplitude_lorentzian(double lambda, double dlambda_dt, double R0, double p,
                                              double v_F) {
    const double base = pi * v_F + lambda;
    require(base > 0.0, "lorentzian CD amplitude requires pi*v_F + lambda > 0");
    if (R0 * std::abs(p) > 0.3) {
        std::ostringstream os;
        os << "R0*|p| = " << R0 * std::abs(p) << " > 0.3: linearized lorentzian CD amplitude is inaccurate";
        warn(os.str());
    }
    LorentzianCdAmplitude out;
    out.linearized =
        -0.25 * dlambda_dt * (1.0 / base - R0 * pi * v_F * std::abs(p) / (base * base));
    const double decay = std::exp(-R0 * std::abs(p));
    const double g24 = lambda * decay;
    require(pi * v_F + g24 > 0.0, "lorentzian CD amplitude requires pi*v_F + g24 > 0");
    out.exact = -0.25 * dlambda_dt * decay / (pi * v_F + g24);
    return out;
}

ControlledCoefficients controlled_coefficients(double p, double t, const DriveProtocol& protocol) {
    require(p > 0.0, "controlled_coefficients requires p > 0");
    const auto mc = mode_couplings(protocol, p, t);
    const auto lp = luttinger_params(mc.value.g2, mc.value.g4, protocol.v_F);

    ControlledCoefficients cc;
    cc.gamma = std::sqrt(lp.K);
    cc.sigma_sq = protocol.v_F / lp.v_s;
    cc.omega0 = protocol.v_F * p;
    const double gamma_sq = lp.K;
    const double a = gamma_sq / cc.sigma_sq;           // (gamma/sigma)^2
    const double b = 1.0 / (cc.sigma_sq * gamma_sq);   // 1/(sigma gamma)^2
    cc.omega_cd = 0.5 * cc.omega0 * (a + b);
    cc.g_cd = 0.5 * cc.omega0 * (b - a);
    cc.chi = cd_amplitude_contact(mc.value.g2, mc.value.g4, mc.rate.g2, mc.rate.g4, protocol.v_F);
    return cc;
}

double drive_cd_amplitude(double p, double t, const DriveProtocol& protocol) {
    if (!protocol.cd_enabled) return 0.0;
    return cd_amplitude_ignoring_switch(p, t, protocol);
}

double spectrum_with_cd(double v_s, double p, double chi) {
    const double bare = v_s * std::abs(p);
    if (!(bare > std::abs(chi))) {
        std::ostringstream os;
        os << "v_s*|p| = " << bare << " does not exceed |chi| = " << std::abs(chi);
        fail(ErrorKind::cd_instability, os.str());
    }
    return std::sqrt((bare - chi) * (bare + chi));
}

StabilityReport stability_margin(const DriveProtocol& protocol, int n_points) {
    StabilityReport report;
    report.n_points = n_points;
    report.margin = std::numeric_limits<double>::infinity();
    const auto grid = momentum_grid(protocol);
    for (double t : uniform_times(protocol.t_f, n_points)) {
        for (double p : grid) {
            const auto mc = mode_couplings(protocol, p, t);
            const double v_s = luttinger_params(mc.value.g2, mc.value.g4, protocol.v_F).v_s;
            const double chi = cd_amplitude_ignoring_switch(p, t, protocol);
            const double margin = p - std::abs(chi) / v_s;
            if (margin < report.margin) {
                report.margin = margin;
                report.worst_time = t;
                report.worst_p = p;
            }
        }
    }
    report.pass = report.margin > 0.0;

    const auto& c = protocol.coupling;
    if (c.family == CouplingFamily::contact && c.g2_start == 0.0 && c.g4_start == 0.0 &&
        c.g2_end == c.g4_end) {
        report.closed_form_tf_bound = closed_form_tf_bound(protocol.L, c.g2_end, protocol.v_F,
                                                           max_schedule_slope(protocol.schedule));
    }
    return report;
}

double closed_form_tf_bound(double L, double g24_end, double v_F, double max_schedule_slope) {
    require(L > 0.0 && v_F > 0.0, "closed_form_tf_bound requires L > 0 and v_F > 0");
    return L * std::abs(g24_end * max_schedule_slope) / (two_pi * v_F * two_pi * v_F);
}

double adiabaticity_parameter(const DriveProtocol& protocol, double p, double t) {
    require(p > 0.0, "adiabaticity_parameter requires p > 0");
    const auto mc = mode_couplings(protocol, p, t);
    const double v_s = luttinger_params(mc.value.g2, mc.value.g4, protocol.v_F).v_s;
    const double a = protocol.v_F + mc.value.g4 / two_pi;
    const double b = mc.value.g2 / two_pi;
    const double v_s_rate = (a * mc.rate.g4 - b * mc.rate.g2) / (two_pi * v_s);
    return std::abs(v_s_rate / (v_s * v_s * p));
}

SpeedWindow speed_window(const DriveProtocol& protocol, double threshold, int n_points) {
    require(threshold > 0.0, "adiabaticity threshold must be positive");
    double worst_ratio = 0.0;
    double worst_adiabaticity = 0.0;
    const auto grid = momentum_grid(protocol);
    for (double t : uniform_times(protocol.t_f, n_points)) {
        for (double p : grid) {
            const auto mc = mode_couplings(protocol, p, t);
            const double v_s = luttinger_params(mc.value.g2, mc.value.g4, protocol.v_F).v_s;
            const double chi = cd_amplitude_ignoring_switch(p, t, protocol);
            worst_ratio = std::max(worst_ratio, std::abs(chi) / (v_s * p));
            worst_adiabaticity = std::max(worst_adiabaticity, adiabaticity_parameter(protocol, p, t));
        }
    }
    return {protocol.t_f * worst_ratio, protocol.t_f * worst_adiabaticity / threshold, threshold};
}

DimensionalWindow dimensional_speed_window(double L, double v_s, double adiabatic_factor) {
    require(L > 0.0 && v_s > 0.0 && adiabatic_factor > 0.0,
            "dimensional_speed_window requires positive inputs");
    const double t_min = L / (two_pi * v_s);
    return {t_min, adiabatic_factor * t_min};
}

DeltaCoefficients delta_coefficients(double lambda, double dlambda_dt, double R0, double v_F) {
    const double base = pi * v_F + lambda;
    require(base > 0.0, "delta_coefficients requires pi*v_F + lambda > 0");
    return {-0.25 * pi * dlambda_dt / base, 0.25 * dlambda_dt * R0 * pi * v_F / (base * base)};
}

double gauge_field_amplitude(double lambda, double dlambda_dt, double R0, double v_F, double L) {
    const double base = pi * v_F + lambda;
    require(base > 0.0, "gauge_field_amplitude requires pi*v_F + lambda > 0");
    require(L > 0.0, "gauge_field_amplitude requires L > 0");
    return -R0 * dlambda_dt / (8.0 * L * L * base * base * base);
}

KernelValue realspace_cd_kernel(double x, double x_prime, double L, double chi, CouplingFamily family,
                                double delta1, double delta2) {
    require(L > 0.0, "realspace_cd_kernel requires L > 0");
    require(x >= 0.0 && x <= L && x_prime >= 0.0 && x_prime <= L,
            "realspace_cd_kernel requires 0 <= x, x' <= L");
    switch (family) {
        case CouplingFamily::contact:
            return {pi * chi * (x_prime - x) / L, false};
        case CouplingFamily::lorentzian: {
            if (x == x_prime) {
                return {std::copysign(std::numeric_limits<double>::infinity(), delta2), true};
            }
            return {delta1 * (x_prime - x) / L + delta2 / (x - x_prime), false};
        }
        case CouplingFamily::custom_table:
            break;
    }
    fail(ErrorKind::contract, "real-space CD kernel is defined for contact and lorentzian couplings only");
}

}  // namespace tllcd

#pragma once

#include <optional>

#include "tllcd/protocol.hpp"

namespace tllcd {

/// chi = Kdot/(2K) for momentum-independent (or single-mode) couplings, with
///   Kdot/K = [g4' g2 - g2' (2 pi v_F + g4)] / [(2 pi v_F + g4)^2 - g2^2].
/// Throws luttinger-instability when the denominator is not positive.
double cd_amplitude_contact(double g2, double g4, double dg2_dt, double dg4_dt, double v_F);

/// CD amplitude for g2 = g4 = lambda exp(-R0 |p|).
struct LorentzianCdAmplitude {
    double linearized = 0.0;  // first order in R0 |p|
    double exact = 0.0;       // -(1/4) g24' / (pi v_F + g24)
};

/// Warns when R0 |p| > 0.3, where the expansion is no longer small.
LorentzianCdAmplitude cd_amplitude_lorentzian(double lambda, double dlambda_dt, double R0, double p,
                                              double v_F);

/// Coefficients of the invariant-built controlled pair Hamiltonian.
struct ControlledCoefficients {
    double omega_cd = 0.0;
    double g_cd = 0.0;
    double chi = 0.0;       // gamma_p' / gamma_p = K_p' / (2 K_p)
    double gamma = 1.0;     // sqrt(K_p)
    double sigma_sq = 1.0;  // v_F / v_{s,p}
    double omega0 = 0.0;    // v_F |p|
};

ControlledCoefficients controlled_coefficients(double p, double t, const DriveProtocol& protocol);

/// The CD amplitude that actually drives mode p at time t: the exact chi, or
/// the linearized Lorentzian chi when the protocol asks for it. Zero when CD
/// is disabled.
double drive_cd_amplitude(double p, double t, const DriveProtocol& protocol);

/// Instantaneous spectrum under CD, sqrt(v_s^2 p^2 - chi^2).
/// Throws cd-instability when v_s p <= |chi|.
double spectrum_with_cd(double v_s, double p, double chi);

struct StabilityReport {
    double margin = 0.0;  // min over (t, p) of p - |chi_p| / v_{s,p}; 2 pi / L when static
    bool pass = true;
    double worst_time = 0.0;
    double worst_p = 0.0;
    int n_points = 0;
    /// Closed-form lower bound on t_f, set when g2 = g4 = g24 with g24(0) = 0.
    std::optional<double> closed_form_tf_bound;
};

/// Evaluates |chi_p(t)| < v_{s,p}(t) p on a uniform time grid for every mode.
/// The CD amplitude is evaluated as if CD were enabled.
StabilityReport stability_margin(const DriveProtocol& protocol, int n_points = 2001);

/// t_f > L |g24(t_f) max P'| / (2 pi v_F)^2.
double closed_form_tf_bound(double L, double g24_end, double v_F, double max_schedule_slope);

/// |v_{s,p}' / (v_{s,p}^2 p)|.
double adiabaticity_parameter(const DriveProtocol& protocol, double p, double t);

/// Range of ramp durations where CD matters. Both ends scale as 1/t_f at fixed
/// s = t/t_f, so they are obtained from one dense scan of the given protocol:
/// t_min is the shortest stable t_f and t_adiabatic the t_f at which the
/// largest adiabaticity parameter drops to `threshold`.
struct SpeedWindow {
    double t_min = 0.0;
    double t_adiabatic = 0.0;
    double threshold = 0.01;
};

SpeedWindow speed_window(const DriveProtocol& protocol, double threshold = 0.01,
                         int n_points = 2001);

/// Dimensional estimate from a measured sound velocity: |v_s'/v_s^2| ~ 1/(t_f v_s)
/// gives t_min = L / (2 pi v_s); the upper end is `adiabatic_factor` times that.
struct DimensionalWindow {
    double t_min = 0.0;
    double t_upper = 0.0;
};

DimensionalWindow dimensional_speed_window(double L, double v_s, double adiabatic_factor = 10.0);

struct DeltaCoefficients {
    double delta1 = 0.0;
    double delta2 = 0.0;
};

/// Amplitudes of the linear and inverse-distance real-space CD kernels for
/// the Lorentzian potential (hbar = 1).
DeltaCoefficients delta_coefficients(double lambda, double dlambda_dt, double R0, double v_F);

/// nu = -R0 lambda' / (8 L^2 (pi v_F + lambda)^3).
double gauge_field_amplitude(double lambda, double dlambda_dt, double R0, double v_F, double L);

struct KernelValue {
    double value = 0.0;
    bool singular = false;  // x == x' for the lorentzian kernel; value is a signed infinity
};

/// Antisymmetric kernel multiplying rho_1(x) rho_-1(x') - rho_1(x') rho_-1(x).
/// contact: pi chi (x' - x) / L, i.e. the prefactor pi Kdot/(2K) with chi = Kdot/(2K).
/// lorentzian: delta1 (x' - x) / L + delta2 / (x - x'); chi is unused.
KernelValue realspace_cd_kernel(double x, double x_prime, double L, double chi, CouplingFamily family,
                                double delta1, double delta2);

}  // namespace tllcd

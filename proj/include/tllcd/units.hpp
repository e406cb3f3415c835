#pragma once

namespace tllcd {

inline constexpr double hbar_si = 1.054571817e-34;  // J s

/// Trapped-gas parameters in laboratory units.
struct GasParameters {
    double a_s_nm = 0.0;          // scattering length
    double mass_kg = 0.0;
    double omega_perp_hz = 0.0;   // transverse trap frequency omega_perp / (2 pi)
    double n1d_per_um = 0.0;      // linear density

    bool operator==(const GasParameters&) const = default;
};

/// v_s = sqrt(g1D n / m) with g1D = hbar omega_perp a (2 + 3 a n)/(1 + 2 a n),
/// omega_perp in rad/s. Returns um/ms (= mm/s). Throws a contract error on
/// nonpositive inputs.
double experimental_sound_velocity(double a_s_nm, double mass_kg, double omega_perp_rad_s,
                                   double n1d_per_um);

double experimental_sound_velocity(const GasParameters& gas);

}  // namespace tllcd

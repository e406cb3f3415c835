#include "tllcd/units.hpp"

#include <cmath>
#include <numbers>

#include "tllcd/errors.hpp"

namespace tllcd {

double experimental_sound_velocity(double a_s_nm, double mass_kg, double omega_perp_rad_s,
                                   double n1d_per_um) {
    require(a_s_nm > 0.0 && mass_kg > 0.0 && omega_perp_rad_s > 0.0 && n1d_per_um > 0.0,
            "experimental_sound_velocity requires positive a_s, m, omega_perp and n_1D");
    const double a = a_s_nm * 1e-9;
    const double n = n1d_per_um * 1e6;
    const double an = a * n;
    const double g1d = hbar_si * omega_perp_rad_s * a * (2.0 + 3.0 * an) / (1.0 + 2.0 * an);
    return std::sqrt(g1d * n / mass_kg) * 1e3;  // m/s -> um/ms
}

double experimental_sound_velocity(const GasParameters& gas) {
    return experimental_sound_velocity(gas.a_s_nm, gas.mass_kg, 2.0 * std::numbers::pi * gas.omega_perp_hz,
                                       gas.n1d_per_um);
}

}  // namespace tllcd

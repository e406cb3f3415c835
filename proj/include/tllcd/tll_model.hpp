#pragma once

#include <span>
#include <vector>

namespace tllcd {

enum class CouplingFamily { contact, lorentzian, custom_table };

struct CouplingTableRow {
    double p = 0.0;
    double g2 = 0.0;
    double g4 = 0.0;

    bool operator==(const CouplingTableRow&) const = default;
};

/// Interaction potentials g2(p,t), g4(p,t), expressed as a scalar strength
/// ramped between start and end values times a momentum profile:
///   g_{2/4}(p,t) = [start + (end - start) P(t/t_f)] * f_{2/4}(p)
/// with f = 1 (contact), f = exp(-R0 |p|) (lorentzian) or a linearly
/// interpolated table clamped at its edges (custom_table).
/// Couplings are in units where they enter as v_F + g/(2 pi).
struct CouplingSpec {
    CouplingFamily family = CouplingFamily::contact;
    double g2_start = 0.0;
    double g2_end = 0.0;
    double g4_start = 0.0;
    double g4_end = 0.0;
    double R0 = 0.0;
    std::vector<CouplingTableRow> table;

    bool operator==(const CouplingSpec&) const = default;
};

/// Checks family-specific fields (R0 > 0 for lorentzian, sorted non-empty table
/// for custom_table). Throws a contract error.
void validate(const CouplingSpec& spec);

struct MomentumCouplings {
    double g2 = 0.0;
    double g4 = 0.0;
};

/// The momentum profile f_{2/4}(p).
MomentumCouplings coupling_profile(const CouplingSpec& spec, double p);

/// g_{2/4}(p) at schedule progress P.
MomentumCouplings couplings_at(const CouplingSpec& spec, double p, double progress);

/// d g_{2/4}(p)/dt given dP/dt.
MomentumCouplings coupling_rates(const CouplingSpec& spec, double p, double dprogress_dt);

struct LuttingerParams {
    double K = 1.0;
    double v_s = 1.0;
};

/// K and v_s from g2, g4. Throws luttinger-instability unless 2 pi v_F + g4 > |g2|.
LuttingerParams luttinger_params(double g2, double g4, double v_F);

struct PairFrequencies {
    double omega = 0.0;
    double g = 0.0;
};

/// omega = |p| [v_F + g4/(2 pi)], g = |p| g2/(2 pi).
PairFrequencies pair_frequencies(double p, MomentumCouplings couplings, double v_F);
PairFrequencies pair_frequencies(double p, const CouplingSpec& spec, double progress, double v_F);

/// Diagonalizing angle with tanh(2 eta) = -g/omega.
double bogoliubov_angle(double omega, double g);

/// sqrt(omega^2 - g^2).
double instantaneous_spectrum(double omega, double g);

/// p_n = 2 pi n / L for n = 1..n_modes.
std::vector<double> momentum_grid(double L, int n_modes);

/// Ground-state energy sum over unordered pairs, sum_{p>0} [eps - omega].
/// For contact couplings the sum grows linearly with the cutoff, so the value is
/// only meaningful together with the cutoff it was computed at.
struct GroundStateEnergy {
    double value = 0.0;
    int n_modes = 0;
    double p_cutoff = 0.0;
    bool cutoff_dependent = false;  // true when the couplings do not decay in p
};

GroundStateEnergy ground_state_energy(std::span<const double> grid, const CouplingSpec& spec,
                                      double progress, double v_F);

/// Oscillator picture of one mode: Omega = v_sp |p|, M = omega_0p / (K_p v_sp |p|).
struct MassFrequency {
    double mass = 1.0;
    double frequency = 0.0;
};

MassFrequency mass_frequency(double p, double K_p, double v_sp, double v_F);

}  // namespace tllcd

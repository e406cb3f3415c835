#include "tllcd/tll_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tllcd/errors.hpp"

namespace tllcd {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

MomentumCouplings interpolate_table(const std::vector<CouplingTableRow>& table, double p) {
    if (p <= table.front().p) return {table.front().g2, table.front().g4};
    if (p >= table.back().p) return {table.back().g2, table.back().g4};
    auto hi = std::upper_bound(table.begin(), table.end(), p,
                               [](double x, const CouplingTableRow& row) { return x < row.p; });
    auto lo = hi - 1;
    const double w = (p - lo->p) / (hi->p - lo->p);
    return {lo->g2 + w * (hi->g2 - lo->g2), lo->g4 + w * (hi->g4 - lo->g4)};
}

}  // namespace

void validate(const CouplingSpec& spec) {
    const bool finite = std::isfinite(spec.g2_start) && std::isfinite(spec.g2_end) &&
                        std::isfinite(spec.g4_start) && std::isfinite(spec.g4_end) &&
                        std::isfinite(spec.R0);
    require(finite, "coupling values must be finite");
    switch (spec.family) {
        case CouplingFamily::contact:
            break;
        case CouplingFamily::lorentzian:
            require(spec.R0 > 0.0, "lorentzian couplings require R0 > 0");
            break;
        case CouplingFamily::custom_table: {
            require(!spec.table.empty(), "custom_table couplings require at least one table row");
            for (std::size_t i = 0; i < spec.table.size(); ++i) {
                const auto& row = spec.table[i];
                require(std::isfinite(row.p) && std::isfinite(row.g2) && std::isfinite(row.g4),
                        "coupling table entries must be finite");
                if (i > 0)
                    require(row.p > spec.table[i - 1].p,
                            "coupling table momenta must be strictly increasing");
            }
            break;
        }
    }
}

MomentumCouplings coupling_profile(const CouplingSpec& spec, double p) {
    switch (spec.family) {
        case CouplingFamily::contact:
            return {1.0, 1.0};
        case CouplingFamily::lorentzian: {
            const double f = std::exp(-spec.R0 * std::abs(p));
            return {f, f};
        }
        case CouplingFamily::custom_table:
            return interpolate_table(spec.table, std::abs(p));
    }
    return {1.0, 1.0};
}

MomentumCouplings couplings_at(const CouplingSpec& spec, double p, double progress) {
    const auto f = coupling_profile(spec, p);
    return {(spec.g2_start + (spec.g2_end - spec.g2_start) * progress) * f.g2,
            (spec.g4_start + (spec.g4_end - spec.g4_start) * progress) * f.g4};
}

MomentumCouplings coupling_rates(const CouplingSpec& spec, double p, double dprogress_dt) {
    const auto f = coupling_profile(spec, p);
    return {(spec.g2_end - spec.g2_start) * dprogress_dt * f.g2,
            (spec.g4_end - spec.g4_start) * dprogress_dt * f.g4};
}

LuttingerParams luttinger_params(double g2, double g4, double v_F) {
    const double base = two_pi * v_F + g4;
    if (!(base > std::abs(g2))) {
        std::ostringstream os;
        os << "2*pi*v_F + g4 = " << base << " must exceed |g2| = " << std::abs(g2);
        fail(ErrorKind::luttinger_instability, os.str());
    }
    const double K = std::sqrt((base - g2) / (base + g2));
    const double a = v_F + g4 / two_pi;
    const double b = g2 / two_pi;
    // (a-b)(a+b) avoids cancellation in a^2 - b^2
    const double v_s = std::sqrt((a - b) * (a + b));
    return {K, v_s};
}

PairFrequencies pair_frequencies(double p, MomentumCouplings couplings, double v_F) {
    require(p > 0.0, "pair_frequencies requires p > 0");
    return {p * (v_F + couplings.g4 / two_pi), p * couplings.g2 / two_pi};
}

PairFrequencies pair_frequencies(double p, const CouplingSpec& spec, double progress, double v_F) {
    return pair_frequencies(p, couplings_at(spec, p, progress), v_F);
}

double bogoliubov_angle(double omega, double g) {
    if (!(std::abs(g) < omega)) {
        std::ostringstream os;
        os << "|g| = " << std::abs(g) << " must be below omega = " << omega;
        fail(ErrorKind::luttinger_instability, os.str());
    }
    return -0.5 * std::atanh(g / omega);
}

double instantaneous_spectrum(double omega, double g) {
    if (!(std::abs(g) < omega)) {
        std::ostringstream os;
        os << "|g| = " << std::abs(g) << " must be below omega = " << omega;
        fail(ErrorKind::luttinger_instability, os.str());
    }
    return std::sqrt((omega - g) * (omega + g));
}

std::vector<double> momentum_grid(double L, int n_modes) {
    require(L > 0.0, "system length L must be positive");
    require(n_modes >= 1, "n_modes must be at least 1");
    std::vector<double> grid(static_cast<std::size_t>(n_modes));
    for (int n = 1; n <= n_modes; ++n) grid[static_cast<std::size_t>(n - 1)] = two_pi * n / L;
    return grid;
}

GroundStateEnergy ground_state_energy(std::span<const double> grid, const CouplingSpec& spec,
                                      double progress, double v_F) {
    GroundStateEnergy out;
    out.n_modes = static_cast<int>(grid.size());
    for (double p : grid) {
        const auto f = pair_frequencies(p, spec, progress, v_F);
        out.value += instantaneous_spectrum(f.omega, f.g) - f.omega;
        out.p_cutoff = std::max(out.p_cutoff, p);
    }
    switch (spec.family) {
        case CouplingFamily::contact: out.cutoff_dependent = true; break;
        case CouplingFamily::lorentzian: out.cutoff_dependent = false; break;
        case CouplingFamily::custom_table:
            out.cutoff_dependent = spec.table.back().g2 != 0.0 || spec.table.back().g4 != 0.0;
            break;
    }
    return out;
}

MassFrequency mass_frequency(double p, double K_p, double v_sp, double v_F) {
    require(p > 0.0 && K_p > 0.0 && v_sp > 0.0 && v_F > 0.0,
            "mass_frequency requires positive inputs");
    const double frequency = v_sp * p;
    return {v_F * p / (K_p * frequency), frequency};
}

}  // namespace tllcd

#pragma once

#include <complex>

namespace tllcd {

using cplx = std::complex<double>;

/// Drift thresholds for |u|^2 - |v|^2 - 1. Above `warn` a warning is emitted,
/// above `error` the map is rejected. Maps are never renormalized.
struct InvariantTolerance {
    double warn = 1e-9;
    double error = 1e-6;
};

/// Bogoliubov map of one momentum pair (p, -p).
///
/// The map stands for the transformed annihilator A = u b(p) + v b^dagger(-p)
/// with |u|^2 - |v|^2 = 1. Read as a state, it is the two-mode squeezed vacuum
/// annihilated by A; read as a transformation, it is the unitary U with
/// U b(p) U^dagger = A. Multiplying (u, v) by a common phase leaves the state
/// unchanged.
struct BogoliubovMap {
    cplx u{1.0, 0.0};
    cplx v{0.0, 0.0};

    static BogoliubovMap identity() { return {}; }

    /// |u|^2 - |v|^2 - 1
    double invariant_drift() const;
};

/// Throws a contract error when the drift exceeds `tol.error`; warns above `tol.warn`.
void validate(const BogoliubovMap& map, const InvariantTolerance& tol = {});

struct PairObservables {
    double occupation = 0.0;       // <b^dagger(p) b(p)>, equal for both modes
    cplx pair_correlator{};        // <b(p) b(-p)>
    double k0_expectation = 0.5;   // <K0> = n + 1/2
};

/// Real two-mode squeeze U = exp[eta (K+ - K-)]: u = cosh(eta), v = -sinh(eta).
/// Angles with |eta| > max_squeeze_angle raise a range error.
BogoliubovMap squeeze_from_angle(double eta);
inline constexpr double max_squeeze_angle = 354.0;

/// Map of the product U_outer U_inner.
BogoliubovMap compose(const BogoliubovMap& outer, const BogoliubovMap& inner,
                      const InvariantTolerance& tol = {});

/// Map of U^dagger: (conj(u), -v).
BogoliubovMap inverse(const BogoliubovMap& map);

PairObservables vacuum_observables(const BogoliubovMap& state);

/// |<psi_a|psi_b>| for the squeezed vacua represented by the two maps,
/// 1 / |conj(u_a) u_b - conj(v_a) v_b|.
double state_overlap(const BogoliubovMap& a, const BogoliubovMap& b);

}  // namespace tllcd

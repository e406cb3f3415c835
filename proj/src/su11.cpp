#include "tllcd/su11.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tllcd/errors.hpp"

namespace tllcd {

double BogoliubovMap::invariant_drift() const { return std::norm(u) - std::norm(v) - 1.0; }

void validate(const BogoliubovMap& map, const InvariantTolerance& tol) {
    const double drift = std::abs(map.invariant_drift());
    if (!(drift <= tol.error)) {
        std::ostringstream os;
        os << "Bogoliubov invariant |u|^2-|v|^2=1 violated (drift " << drift << ")";
        fail(ErrorKind::contract, os.str());
    }
    if (drift > tol.warn) {
        std::ostringstream os;
        os << "Bogoliubov invariant drift " << drift << " exceeds " << tol.warn;
        warn(os.str());
    }
}

BogoliubovMap squeeze_from_angle(double eta) {
    if (!std::isfinite(eta) || std::abs(eta) > max_squeeze_angle) {
        std::ostringstream os;
        os << "squeeze angle " << eta << " outside representable range |eta| <= "
           << max_squeeze_angle;
        fail(ErrorKind::range, os.str());
    }
    return {cplx(std::cosh(eta), 0.0), cplx(-std::sinh(eta), 0.0)};
}

BogoliubovMap compose(const BogoliubovMap& outer, const BogoliubovMap& inner,
                      const InvariantTolerance& tol) {
    validate(outer, tol);
    validate(inner, tol);
    // U_o (u_i b + v_i b~^dag) U_o^dag with U_o b U_o^dag = u_o b + v_o b~^dag
    // and U_o b~^dag U_o^dag = conj(u_o) b~^dag + conj(v_o) b.
    return {inner.u * outer.u + inner.v * std::conj(outer.v),
            inner.u * outer.v + inner.v * std::conj(outer.u)};
}

BogoliubovMap inverse(const BogoliubovMap& map) { return {std::conj(map.u), -map.v}; }

PairObservables vacuum_observables(const BogoliubovMap& state) {
    PairObservables obs;
    obs.occupation = std::norm(state.v);
    obs.pair_correlator = -std::conj(state.u) * state.v;
    obs.k0_expectation = obs.occupation + 0.5;
    return obs;
}

double state_overlap(const BogoliubovMap& a, const BogoliubovMap& b) {
    const double denom = std::abs(std::conj(a.u) * b.u - std::conj(a.v) * b.v);
    // Rounding can push the ratio a hair above one for coincident states.
    return std::min(1.0, 1.0 / denom);
}

}  // namespace tllcd

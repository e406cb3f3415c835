#include "tllcd/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

namespace tllcd {

namespace {

constexpr double cutoff_threshold = 1e-10;

std::size_t dim_of(int n_max) {
    require(n_max >= 1, "Fock cutoff n_max must be at least 1");
    return static_cast<std::size_t>(n_max) + 1;
}

}  // namespace

double FockState::norm_squared() const {
    double s = 0.0;
    for (const auto& c : amplitudes) s += std::norm(c);
    return s;
}

double FockState::tail_mass() const { return amplitudes.empty() ? 0.0 : std::norm(amplitudes.back()); }

FockState FockState::vacuum(int n_max) {
    FockState s;
    s.amplitudes.assign(dim_of(n_max), cplx{});
    s.amplitudes[0] = 1.0;
    return s;
}

TridiagonalMatrix pair_hamiltonian_matrix(const PairCoefficients& coeffs, int n_max) {
    const std::size_t dim = dim_of(n_max);
    TridiagonalMatrix m;
    m.diagonal.resize(dim);
    m.upper.resize(dim - 1);
    m.lower.resize(dim - 1);
    for (std::size_t n = 0; n < dim; ++n) m.diagonal[n] = coeffs.omega * (2.0 * static_cast<double>(n) + 1.0);
    for (std::size_t n = 0; n + 1 < dim; ++n) {
        const double k = static_cast<double>(n) + 1.0;
        m.upper[n] = cplx(coeffs.g, -coeffs.chi) * k;
        m.lower[n] = cplx(coeffs.g, coeffs.chi) * k;
    }
    return m;
}

void apply(const TridiagonalMatrix& m, std::span<const cplx> in, std::span<cplx> out) {
    const std::size_t dim = m.diagonal.size();
    require(in.size() == dim && out.size() == dim, "apply: dimension mismatch");
    for (std::size_t n = 0; n < dim; ++n) {
        cplx acc = m.diagonal[n] * in[n];
        if (n + 1 < dim) acc += m.upper[n] * in[n + 1];
        if (n > 0) acc += m.lower[n - 1] * in[n - 1];
        out[n] = acc;
    }
}

DenseGenerators su11_generators(int n_max) {
    const std::size_t dim = dim_of(n_max);
    DenseGenerators gens;
    gens.dim = static_cast<int>(dim);
    gens.k0.assign(dim * dim, cplx{});
    gens.k_plus.assign(dim * dim, cplx{});
    gens.k_minus.assign(dim * dim, cplx{});
    for (std::size_t n = 0; n < dim; ++n) {
        gens.k0[n * dim + n] = static_cast<double>(n) + 0.5;
        if (n + 1 < dim) {
            // K+ |n,n> = (n+1) |n+1,n+1>
            gens.k_plus[(n + 1) * dim + n] = static_cast<double>(n) + 1.0;
            gens.k_minus[n * dim + (n + 1)] = static_cast<double>(n) + 1.0;
        }
    }
    return gens;
}

FockState tmsv_amplitudes(double eta, int n_max) {
    require(std::isfinite(eta), "tmsv_amplitudes requires a finite angle");
    const std::size_t dim = dim_of(n_max);
    const double t = std::tanh(eta);
    const double c0 = 1.0 / std::cosh(eta);
    FockState s;
    s.amplitudes.resize(dim);
    double a = c0;
    for (std::size_t n = 0; n < dim; ++n) {
        s.amplitudes[n] = a;
        a *= t;
    }
    if (s.tail_mass() > cutoff_threshold) {
        std::ostringstream os;
        os << "tail mass " << s.tail_mass() << " at n_max = " << n_max << " for eta = " << eta;
        fail(ErrorKind::cutoff_unsafe, os.str());
    }
    return s;
}

FockState gaussian_amplitudes(const BogoliubovMap& map, int n_max) {
    const std::size_t dim = dim_of(n_max);
    require(std::abs(map.u) > 0.0, "gaussian_amplitudes requires u != 0");
    const cplx ratio = -map.v / map.u;
    FockState s;
    s.amplitudes.resize(dim);
    cplx a = 1.0 / map.u;
    for (std::size_t n = 0; n < dim; ++n) {
        s.amplitudes[n] = a;
        a *= ratio;
    }
    return s;
}

double annihilation_residual(const FockState& psi, const BogoliubovMap& map) {
    // (u b + v b~^dag)|psi> lies in span{|m, m+1>}; component m:
    // sqrt(m+1) (u c_{m+1} + v c_m).
    const auto& c = psi.amplitudes;
    double s = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) {
        const cplx next = m + 1 < c.size() ? c[m + 1] : cplx{};
        s += static_cast<double>(m + 1) * std::norm(map.u * next + map.v * c[m]);
    }
    return std::sqrt(s);
}

double fock_overlap(const FockState& a, const FockState& b) {
    const std::size_t n = std::min(a.amplitudes.size(), b.amplitudes.size());
    cplx s{};
    for (std::size_t k = 0; k < n; ++k) s += std::conj(a.amplitudes[k]) * b.amplitudes[k];
    return std::abs(s);
}

FockObservables fock_observables(const FockState& psi) {
    const auto& c = psi.amplitudes;
    const double norm = psi.norm_squared();
    require(norm > 0.0, "fock_observables on a null state");
    FockObservables obs;
    for (std::size_t n = 0; n < c.size(); ++n) {
        obs.occupation += static_cast<double>(n) * std::norm(c[n]);
        // b b~ |n,n> = n |n-1,n-1>
        if (n + 1 < c.size()) obs.pair_correlator += std::conj(c[n]) * c[n + 1] * (static_cast<double>(n) + 1.0);
    }
    obs.occupation /= norm;
    obs.pair_correlator /= norm;
    return obs;
}

double fock_energy(const FockState& psi, const PairCoefficients& coeffs) {
    const auto m = pair_hamiltonian_matrix(coeffs, psi.n_max());
    std::vector<cplx> h(psi.amplitudes.size());
    apply(m, psi.amplitudes, h);
    cplx s{};
    for (std::size_t n = 0; n < h.size(); ++n) s += std::conj(psi.amplitudes[n]) * h[n];
    return s.real() / psi.norm_squared();
}

PairSpectrum pair_spectrum(const PairCoefficients& coeffs, int n_max) {
    const auto m = pair_hamiltonian_matrix(coeffs, n_max);
    const Eigen::Index dim = m.dim();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index n = 0; n < dim; ++n) {
        h(n, n) = m.diagonal[static_cast<std::size_t>(n)];
        if (n + 1 < dim) {
            h(n, n + 1) = m.upper[static_cast<std::size_t>(n)];
            h(n + 1, n) = m.lower[static_cast<std::size_t>(n)];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) fail(ErrorKind::integration, "pair_spectrum: eigen-solve failed");
    const auto& ev = solver.eigenvalues();
    return {ev(0), ev(1) - ev(0)};
}

FockTrajectory evolve_fock(const FockState& initial, const DriveProtocol& protocol, double p, int n_max,
                           double tol, int record_points) {
    namespace odeint = boost::numeric::odeint;
    using StateVec = std::vector<cplx>;

    require(p > 0.0, "evolve_fock requires p > 0");
    require(tol > 0.0, "evolve_fock requires tol > 0");
    require(record_points >= 2, "record_points must be at least 2");
    const std::size_t dim = dim_of(n_max);

    StateVec psi(dim, cplx{});
    std::copy_n(initial.amplitudes.begin(), std::min(dim, initial.amplitudes.size()), psi.begin());
    const double norm0 = std::accumulate(psi.begin(), psi.end(), 0.0,
                                         [](double s, const cplx& c) { return s + std::norm(c); });

    std::vector<double> times(static_cast<std::size_t>(record_points));
    for (int k = 0; k < record_points; ++k)
        times[static_cast<std::size_t>(k)] = protocol.t_f * static_cast<double>(k) / (record_points - 1);
    times.back() = protocol.t_f;

    auto rhs = [&](const StateVec& x, StateVec& dxdt, double t) {
        const auto m = pair_hamiltonian_matrix(pair_generator(p, std::min(t, protocol.t_f), protocol), n_max);
        apply(m, x, dxdt);
        for (auto& d : dxdt) d *= cplx(0.0, -1.0);
    };

    FockTrajectory traj;
    traj.p = p;
    auto observer = [&](const StateVec& x, double t) {
        FockState s{x};
        traj.max_tail_mass = std::max(traj.max_tail_mass, s.tail_mass());
        traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(s.norm_squared() - norm0));
        traj.times.push_back(t);
        traj.states.push_back(std::move(s));
    };

    auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<StateVec>());
    const double dt0 = protocol.t_f / (10.0 * (record_points - 1));
    odeint::integrate_times(stepper, rhs, psi, times.begin(), times.end(), dt0, observer);
    traj.cutoff_safe = traj.max_tail_mass < cutoff_threshold;
    return traj;
}

}  // namespace tllcd

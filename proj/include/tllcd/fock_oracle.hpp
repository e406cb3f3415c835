#pragma once

#include <span>
#include <vector>

#include "tllcd/dynamics.hpp"
#include "tllcd/su11.hpp"

namespace tllcd {

/// Pair state in the diagonal sector span{|n,n>}, n = 0..n_max.
struct FockState {
    std::vector<cplx> amplitudes;

    int n_max() const { return static_cast<int>(amplitudes.size()) - 1; }
    double norm_squared() const;
    double tail_mass() const;  // |c_{n_max}|^2
    bool cutoff_safe(double threshold = 1e-10) const { return tail_mass() < threshold; }

    static FockState vacuum(int n_max);
};

inline constexpr int default_fock_cutoff = 120;

/// Hermitian tridiagonal matrix of the pair generator in the |n,n> basis:
/// diagonal 2 omega (n + 1/2), upper <n|H|n+1> = (g - i chi)(n+1),
/// lower <n+1|H|n> = (g + i chi)(n+1). Zero point included, no -omega shift.
struct TridiagonalMatrix {
    std::vector<double> diagonal;
    std::vector<cplx> upper;
    std::vector<cplx> lower;

    int dim() const { return static_cast<int>(diagonal.size()); }
};

TridiagonalMatrix pair_hamiltonian_matrix(const PairCoefficients& coeffs, int n_max);

/// out = M in
void apply(const TridiagonalMatrix& m, std::span<const cplx> in, std::span<cplx> out);

/// Truncated generators K0, K+, K- as dense matrices (row-major, (n_max+1)^2).
struct DenseGenerators {
    int dim = 0;
    std::vector<cplx> k0, k_plus, k_minus;
};
DenseGenerators su11_generators(int n_max);

/// Amplitudes c_n = (tanh eta)^n / cosh eta of the state of squeeze_from_angle(eta),
/// annihilated by cosh(eta) b(p) - sinh(eta) b^dag(-p).
/// Throws cutoff-unsafe when |c_{n_max}|^2 exceeds 1e-10.
FockState tmsv_amplitudes(double eta, int n_max);

/// Amplitudes of the squeezed vacuum of a general map: c_n = (-v/u)^n / u.
/// Never throws; check cutoff_safe() on the result.
FockState gaussian_amplitudes(const BogoliubovMap& map, int n_max);

/// || (u b(p) + v b^dag(-p)) psi ||, zero iff psi is the state of the map.
double annihilation_residual(const FockState& psi, const BogoliubovMap& map);

/// |<a|b>| (states need not be normalized to the same cutoff; the shorter one is zero-padded).
double fock_overlap(const FockState& a, const FockState& b);

struct FockObservables {
    double occupation = 0.0;  // <b^dag(p) b(p)>
    cplx pair_correlator{};   // <b(p) b(-p)>
};

FockObservables fock_observables(const FockState& psi);

/// <psi|H|psi> / <psi|psi> with the pair matrix (zero point included).
double fock_energy(const FockState& psi, const PairCoefficients& coeffs);

struct PairSpectrum {
    double ground = 0.0;     // lowest eigenvalue of the truncated pair matrix
    double first_gap = 0.0;  // second-lowest minus lowest
};

/// Dense Hermitian eigen-solve of the truncated pair matrix.
PairSpectrum pair_spectrum(const PairCoefficients& coeffs, int n_max);

struct FockTrajectory {
    double p = 0.0;
    std::vector<double> times;
    std::vector<FockState> states;
    double max_tail_mass = 0.0;
    double max_norm_drift = 0.0;
    bool cutoff_safe = true;  // false when the tail mass exceeded 1e-10 at any record
};

/// Schrodinger evolution of mode p under pair_generator(p, t, protocol) on a
/// uniform grid of `record_points` times (adaptive Dormand-Prince from Boost.Odeint).
FockTrajectory evolve_fock(const FockState& initial, const DriveProtocol& protocol, double p,
                           int n_max = default_fock_cutoff, double tol = 1e-11,
                           int record_points = 201);

}  // namespace tllcd

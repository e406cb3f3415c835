#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>

#include "tllcd/errors.hpp"

namespace tllcd {

struct OdeTolerance {
    double rtol = 1e-10;
    double atol = 1e-12;
    long max_steps = 50'000'000;
};

struct OdeStats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evals = 0;
};

/// Embedded Dormand-Prince 5(4) integrator with FSAL and PI-free step control.
///
/// Steps are clipped so that every requested output time is hit exactly, so
/// recorded states carry the full local accuracy of the scheme rather than an
/// interpolant's. `rhs(t, y, dydt)` must be a pure function of its inputs.
template <std::size_t N>
class DormandPrince54 {
public:
    using State = std::array<double, N>;

    explicit DormandPrince54(OdeTolerance tol = {}) : tol_(tol) {}

    /// Integrates from times.front() through every entry of `times` (sorted,
    /// non-decreasing). `observer(t, y)` is called at each output time,
    /// `on_step(t, y)` after every accepted step. Either may throw to abort.
    template <class Rhs, class Observer, class StepHook>
    OdeStats integrate(Rhs&& rhs, State& y, std::span<const double> times, Observer&& observer,
                       StepHook&& on_step) const {
        OdeStats stats;
        if (times.empty()) return stats;
        double t = times.front();
        observer(t, y);
        if (times.size() == 1) return stats;

        State k1{};
        rhs(t, y, k1);
        ++stats.rhs_evals;
        double h = initial_step(rhs, t, y, k1, times.back() - t, stats);

        std::size_t next = 1;
        while (next < times.size() && times[next] <= t) observer(times[next++], y);
        while (next < times.size()) {
            const double target = times[next];
            const double h_min = 64.0 * std::numeric_limits<double>::epsilon() *
                                 std::max(1.0, std::abs(t));
            bool hit_target = false;
            double h_try = h;
            if (t + h_try >= target || target - (t + h_try) < h_min) {
                h_try = target - t;
                hit_target = true;
            }

            State y_new{}, k7{};
            const double err = step(rhs, t, h_try, y, k1, y_new, k7, stats);
            if (!std::isfinite(err)) {
                std::ostringstream os;
                os << "non-finite state at t = " << t;
                fail(ErrorKind::integration, os.str());
            }
            if (err <= 1.0) {
                t = hit_target ? target : t + h_try;
                y = y_new;
                k1 = k7;
                ++stats.accepted;
                on_step(t, y);
                if (hit_target) {
                    while (next < times.size() && times[next] <= t) observer(times[next++], y);
                }
                // Keep the controller's step if we were only clipped by an output time.
                const double factor = err == 0.0 ? 5.0
                                                 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
                h = hit_target ? std::max(h, h_try * factor) : h_try * factor;
            } else {
                ++stats.rejected;
                h = h_try * std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
            }
            if (h < h_min) {
                std::ostringstream os;
                os << "step size underflow (h = " << h << ") at t = " << t;
                fail(ErrorKind::integration, os.str());
            }
            if (stats.accepted + stats.rejected > tol_.max_steps) {
                std::ostringstream os;
                os << "step limit " << tol_.max_steps << " exceeded at t = " << t;
                fail(ErrorKind::integration, os.str());
            }
        }
        return stats;
    }

    template <class Rhs, class Observer>
    OdeStats integrate(Rhs&& rhs, State& y, std::span<const double> times, Observer&& observer) const {
        return integrate(rhs, y, times, observer, [](double, const State&) {});
    }

private:
    OdeTolerance tol_;

    double error_norm(const State& y0, const State& y1, const State& err) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double scale = tol_.atol + tol_.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
            const double r = err[i] / scale;
            acc += r * r;
        }
        return std::sqrt(acc / static_cast<double>(N));
    }

    template <class Rhs>
    double initial_step(Rhs& rhs, double t, const State& y, const State& f0, double span,
                        OdeStats& stats) const {
        State scale{};
        for (std::size_t i = 0; i < N; ++i) scale[i] = tol_.atol + tol_.rtol * std::abs(y[i]);
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            d0 += (y[i] / scale[i]) * (y[i] / scale[i]);
            d1 += (f0[i] / scale[i]) * (f0[i] / scale[i]);
        }
        d0 = std::sqrt(d0 / N);
        d1 = std::sqrt(d1 / N);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, span);
        State y1{}, f1{};
        for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + h0 * f0[i];
        rhs(t + h0, y1, f1);
        ++stats.rhs_evals;
        double d2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double r = (f1[i] - f0[i]) / scale[i];
            d2 += r * r;
        }
        d2 = std::sqrt(d2 / N) / h0;
        const double dmax = std::max(d1, d2);
        const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
        return std::min({100.0 * h0, h1, span});
    }

    template <class Rhs>
    double step(Rhs& rhs, double t, double h, const State& y, const State& k1, State& y_new,
                State& k7, OdeStats& stats) const {
        constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                         a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                         a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                         b6 = 11.0 / 84;
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                         e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        State k2{}, k3{}, k4{}, k5{}, k6{}, tmp{};
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, tmp, k2);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, tmp, k3);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, tmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, tmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, tmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, y_new, k7);
        stats.rhs_evals += 6;

        State err{};
        for (std::size_t i = 0; i < N; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        return error_norm(y, y_new, err);
    }
};

}  // namespace tllcd

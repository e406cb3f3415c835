#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tllcd/errors.hpp"
#include "tllcd/fock_oracle.hpp"
#include "tllcd/su11.hpp"

using namespace tllcd;
using doctest::Approx;

namespace {

BogoliubovMap random_map(testing::Sampler& s, double max_r = 2.0) {
    const double r = s.uniform(0.0, max_r);
    const double a = s.uniform(-M_PI, M_PI), b = s.uniform(-M_PI, M_PI);
    return {std::polar(std::cosh(r), a), std::polar(std::sinh(r), b)};
}

bool throws_kind(auto&& f, ErrorKind kind) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind() == kind;
    }
    return false;
}

}  // namespace

TEST_CASE("squeeze_from_angle") {
    const auto id = squeeze_from_angle(0.0);
    CHECK(id.u == cplx(1.0));
    CHECK(id.v == cplx(0.0));

    const auto m = squeeze_from_angle(-0.27465);
    CHECK(m.u.real() == Approx(1.0379539948784165).epsilon(1e-14));
    CHECK(m.v.real() == Approx(0.27811597488109845).epsilon(1e-14));
    CHECK(std::abs(m.invariant_drift()) < 1e-15);

    const auto h = squeeze_from_angle(0.5);
    CHECK((h.v / h.u).real() == Approx(-0.46211715726000976).epsilon(1e-14));

    CHECK(throws_kind([] { squeeze_from_angle(400.0); }, ErrorKind::range));
    CHECK(throws_kind([] { squeeze_from_angle(std::nan("")); }, ErrorKind::range));
    CHECK(std::isfinite(squeeze_from_angle(350.0).u.real()));
}

TEST_CASE("compose and inverse") {
    testing::Sampler s(11);
    const auto m = random_map(s);
    const auto left = compose(BogoliubovMap::identity(), m);
    CHECK(std::abs(left.u - m.u) < 1e-15);
    CHECK(std::abs(left.v - m.v) < 1e-15);

    const auto ab = compose(squeeze_from_angle(0.3), squeeze_from_angle(-0.8));
    const auto sum = squeeze_from_angle(-0.5);
    CHECK(std::abs(ab.u - sum.u) < 1e-14);
    CHECK(std::abs(ab.v - sum.v) < 1e-14);

    const auto one = compose(m, inverse(m));
    CHECK(std::abs(one.u) == Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(one.v) < 1e-12);

    const BogoliubovMap broken{cplx(1.0), cplx(0.1)};
    CHECK(throws_kind([&] { compose(broken, m); }, ErrorKind::contract));
}

TEST_CASE("property: compose preserves the invariant") {
    testing::Sampler s(12);
    for (int k = 0; k < testing::property_samples; ++k) {
        const auto c = compose(random_map(s), random_map(s));
        CHECK(std::abs(c.invariant_drift()) < 1e-12 * std::max(1.0, std::norm(c.u)));
    }
}

TEST_CASE("vacuum_observables") {
    const auto vac = vacuum_observables(BogoliubovMap::identity());
    CHECK(vac.occupation == 0.0);
    CHECK(vac.pair_correlator == cplx(0.0));
    CHECK(vac.k0_expectation == 0.5);

    CHECK(vacuum_observables(squeeze_from_angle(0.5)).occupation == Approx(0.27154031740762189).epsilon(1e-14));
}

TEST_CASE("property: Gaussian identity |<bb>|^2 = n(n+1)") {
    testing::Sampler s(13);
    for (int k = 0; k < testing::property_samples; ++k) {
        const auto obs = vacuum_observables(random_map(s));
        const double n = obs.occupation;
        CHECK(std::norm(obs.pair_correlator) == Approx(n * (n + 1.0)).epsilon(1e-12));
        CHECK(obs.k0_expectation == Approx(n + 0.5));
    }
}

TEST_CASE("state_overlap") {
    testing::Sampler s(14);
    const auto m = random_map(s);
    CHECK(state_overlap(m, m) == Approx(1.0).epsilon(1e-14));
    CHECK(state_overlap(BogoliubovMap::identity(), squeeze_from_angle(0.7)) == Approx(1.0 / std::cosh(0.7)));
    CHECK(state_overlap(squeeze_from_angle(0.3), squeeze_from_angle(0.7)) ==
          Approx(0.92500745190575502).epsilon(1e-14));
    // A global phase does not change the state.
    const BogoliubovMap phased{m.u * std::polar(1.0, 0.9), m.v * std::polar(1.0, 0.9)};
    CHECK(state_overlap(m, phased) == Approx(1.0).epsilon(1e-13));
}

TEST_CASE("property: overlap is symmetric and matches the Fock inner product") {
    testing::Sampler s(15);
    for (int k = 0; k < testing::property_samples; ++k) {
        // n_max = 120 truncates |v| near 5; the cutoff grows so the tail stays below 1e-24.
        const auto a = random_map(s, std::asinh(5.0));
        const auto b = random_map(s, std::asinh(5.0));
        const double ov = state_overlap(a, b);
        CHECK(ov == Approx(state_overlap(b, a)).epsilon(1e-12));
        CHECK(ov <= 1.0);
        const double ratio = std::max(std::abs(a.v / a.u), std::abs(b.v / b.u));
        const int n_max = std::max(120, static_cast<int>(std::ceil(std::log(1e-12) / std::log(ratio))));
        const auto fa = gaussian_amplitudes(a, n_max), fb = gaussian_amplitudes(b, n_max);
        CHECK(fa.cutoff_safe());
        CHECK(fock_overlap(fa, fb) == Approx(ov).epsilon(1e-8));
    }
}

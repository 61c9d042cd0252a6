#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "vex/quad.hpp"
#include "vex/test_function.hpp"

#include "oracle.hpp"

using namespace vex;

namespace {
const QuadratureSpec kSpec;

Integrand one(int n) {
    return Integrand::radial(n, [](double) { return 1.0; });
}
}  // namespace

TEST_CASE("annulus integrals") {
    CHECK(integrate_annulus(one(1), 0, kSpec).value == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(integrate_annulus(one(2), 1, kSpec).value == Catch::Approx(3.0 * pi).epsilon(1e-12));

    auto g = Integrand::radial(1, [](double r) { return 1.0 / r; });
    CHECK(integrate_annulus(g, 0, kSpec).value == Catch::Approx(2.0 * std::log(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(integrate_annulus(one(1), kSpec.k_max + 1, kSpec), config_error);
}

TEST_CASE("ball integrals with origin grading") {
    CHECK(integrate_ball(one(1), 0, kSpec).value == Catch::Approx(2.0).epsilon(1e-12));

    auto g = Integrand::radial(1, [](double r) { return 1.0 / std::sqrt(r); }).with_singularities({0.0});
    auto v = integrate_ball(g, 0, kSpec);
    CHECK(v.value == Catch::Approx(4.0).epsilon(1e-8));
    CHECK(std::abs(v.value - 4.0) <= v.err_estimate + 4.0 * 1e-8);

    CHECK(integrate_ball(one(3), 1, kSpec).value == Catch::Approx(4.0 * pi / 3.0 * 8.0).epsilon(1e-12));
}

TEST_CASE("exterior integrals: tails and refusal") {
    auto g2 = Integrand::radial(1, [](double t) { return 1.0 / (t * t); });
    auto v = integrate_exterior(g2, 0, kSpec);
    CHECK(v.value == Catch::Approx(2.0).epsilon(1e-9));

    // indicator of B_3 \ B_0 seen from radius 1
    auto chi = Integrand::radial(1, [](double t) { return (t > 1.0 && t <= 8.0) ? 1.0 : 0.0; })
                   .with_support(1.0, 8.0)
                   .with_breakpoints({8.0});
    CHECK(integrate_exterior(chi, 0, kSpec).value == Catch::Approx(14.0).epsilon(1e-12));

    auto slow = Integrand::radial(1, [](double t) { return 1.0 / t; });
    CHECK_THROWS_AS(integrate_exterior(slow, 0, kSpec), truncation_error);
}

TEST_CASE("additivity: ball equals annuli plus origin panel") {
    auto g = Integrand::radial(1, [](double r) { return std::exp(-r) / std::sqrt(r); })
                 .with_singularities({0.0});
    QuadratureSpec spec = kSpec;
    spec.k_min = -12;
    auto ball = integrate_ball(g, 2, spec);
    double sum = 0, err = 0;
    for (int j = spec.k_min; j <= 2; ++j) {
        auto a = integrate_annulus(g, j, spec);
        sum += a.value;
        err += a.err_estimate;
    }
    auto origin = detail::integrate_shell(g, 0.0, dyadic_radius(spec.k_min - 1), spec);
    sum += origin.value;
    err += origin.err_estimate;
    CHECK(std::abs(ball.value - sum) <= ball.err_estimate + err + 1e-14);
}

TEST_CASE("linearity on random pairs") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 20; ++it) {
        const double a = 0.25 + (rng() >> 11) * 0x1.0p-53 * 2.0;
        const double b = 0.25 + (rng() >> 11) * 0x1.0p-53 * 2.0;
        const double s1 = 0.5 + (rng() >> 11) * 0x1.0p-53;
        const double s2 = 0.5 + (rng() >> 11) * 0x1.0p-53;
        auto g = Integrand::radial(1, [s1](double r) { return std::exp(-s1 * r * r); });
        auto h = Integrand::radial(1, [s2](double r) { return 1.0 / (1.0 + s2 * r * r); });
        auto gh = Integrand::radial(1, [a, b, s1, s2](double r) {
            return a * std::exp(-s1 * r * r) + b * 1.0 / (1.0 + s2 * r * r);
        });
        auto vg = integrate_annulus(g, 1, kSpec);
        auto vh = integrate_annulus(h, 1, kSpec);
        auto vgh = integrate_annulus(gh, 1, kSpec);
        CHECK(std::abs(vgh.value - (a * vg.value + b * vh.value)) <=
              vgh.err_estimate + a * vg.err_estimate + b * vh.err_estimate + 1e-12);
    }
}

TEST_CASE("dilation law for radial integrands") {
    QuadratureSpec spec = kSpec;
    for (int n = 1; n <= 3; ++n) {
        const double s = 2.0;
        auto g = Integrand::radial(n, [](double r) { return std::exp(-r * r); });
        auto gs = Integrand::radial(n, [s](double r) { return std::exp(-(s * r) * (s * r)); });
        // integrate over a large ball (effectively R^n)
        auto vg = integrate_ball(g, 5, spec);
        auto vgs = integrate_ball(gs, 5, spec);
        CHECK(vgs.value == Catch::Approx(vg.value * std::pow(s, -n)).epsilon(1e-9));
    }
}

TEST_CASE("error-estimate honesty on antiderivative oracles") {
    std::mt19937_64 rng(99);
    int honest = 0, total = 0;
    for (int it = 0; it < 120; ++it) {
        const double e = -0.9 + 2.5 * ((rng() >> 11) * 0x1.0p-53);  // exponent in (-0.9, 1.6)
        const int k = static_cast<int>((rng() >> 11) * 0x1.0p-53 * 6) - 3;
        auto g = Integrand::radial(1, [e](double r) { return std::pow(r, e); }).with_singularities({0.0});
        auto v = integrate_ball(g, k, kSpec);
        const double R = dyadic_radius(k);
        const double truth = 2.0 * std::pow(R, e + 1.0) / (e + 1.0);
        ++total;
        if (std::abs(v.value - truth) <= std::max(v.err_estimate, 2e-15 * std::abs(truth))) ++honest;
    }
    CHECK(honest >= total * 99 / 100);
}

TEST_CASE("nonconvergence carries the best estimate") {
    QuadratureSpec tiny = kSpec;
    tiny.rel_tol = 1e-14;
    tiny.max_subdivisions = 8;
    auto nasty = Integrand::radial(1, [](double r) { return std::sin(50.0 / (r + 0.01)); });
    try {
        integrate_annulus(nasty, 0, tiny);
        FAIL("expected quadrature_error");
    } catch (const quadrature_error& e) {
        CHECK(e.panels_used >= 8);
        CHECK(std::isfinite(e.best_value));
    }
}

TEST_CASE("modular of indicators") {
    auto q = ExponentField::radial_log(2.0, 1.0, 1);
    auto f = TestFunction::ball_indicator(1, 0);
    CHECK(modular(f, q, kSpec).value == Catch::Approx(2.0).epsilon(1e-10));

    auto f2 = TestFunction::annulus_indicator(1, 0).scaled(2.0);
    auto qc = ExponentField::constant(2.0, 1);
    CHECK(modular(f2, qc, kSpec).value == Catch::Approx(4.0).epsilon(1e-12));

    // indicator modular is insensitive to the exponent
    auto qp = ExponentField::piecewise_radial(
        {1.0}, {ExponentField::radial_affine(2.0, 1.0, 1), ExponentField::constant(3.0, 1)});
    CHECK(modular(f, qp, kSpec).value == Catch::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("angular product rule for non-radial integrands") {
    // n = 2: integral of x^2 over A_0
    auto g2 = Integrand::pointwise(2, [](double x, double, double) { return x * x; });
    const double expect2 = pi / 4.0 * (1.0 - 1.0 / 16.0);
    CHECK(integrate_annulus(g2, 0, kSpec).value == Catch::Approx(expect2).epsilon(1e-9));

    // n = 3: integral of z^2 over the unit ball
    auto g3 = Integrand::pointwise(3, [](double, double, double z) { return z * z; });
    CHECK(integrate_ball(g3, 0, kSpec).value == Catch::Approx(4.0 * pi / 15.0).epsilon(1e-9));
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "vex/operators.hpp"

#include "oracle.hpp"

using namespace vex;

namespace {
const QuadratureSpec kSpec;
const TestFunction kBall = TestFunction::ball_indicator(1, 0);

double hardy_oracle(double r, double beta, int n = 1) {
    // v_n min(1,r)^n |x|^{beta-n} for the unit-ball source
    return sphere_measure(n) / n * std::pow(std::min(1.0, r), n) * std::pow(r, beta - n);
}
}  // namespace

TEST_CASE("hardy on the unit ball") {
    auto b0 = ExponentField::constant(0.0, 1);
    CHECK(hardy_radial(kBall, b0, 2.0) == Catch::Approx(1.0).epsilon(1e-13));
    CHECK(hardy_radial(kBall, b0, 0.5) == Catch::Approx(2.0).epsilon(1e-13));
    auto bh = ExponentField::constant(0.5, 1);
    CHECK(hardy_radial(kBall, bh, 4.0) == Catch::Approx(1.0).epsilon(1e-13));
    CHECK(hardy(kBall, bh, Vec{4.0, 0.0, 0.0}) == Catch::Approx(1.0).epsilon(1e-13));
    CHECK_THROWS_AS(hardy_radial(kBall, b0, 0.0), domain_error);
}

TEST_CASE("adjoint hardy on the unit ball") {
    auto b0 = ExponentField::constant(0.0, 1);
    CHECK(hardy_star_radial(kBall, b0, std::exp(-1.0)) == Catch::Approx(2.0).epsilon(1e-12));
    CHECK(hardy_star_radial(kBall, b0, 1.0) == 0.0);
    CHECK(hardy_star_radial(kBall, b0, 3.0) == 0.0);
    auto bh = ExponentField::constant(0.5, 1);
    CHECK(hardy_star_radial(kBall, bh, 0.25) == Catch::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("riesz potential, n = 1") {
    auto b1 = ExponentField::constant(1.0, 1);
    for (double r : {0.0, 0.3, 0.99, 1.5, 4.0}) {
        CHECK(riesz_radial(kBall, b1, r, kSpec) == Catch::Approx(2.0).epsilon(1e-9));
    }
    auto bh = ExponentField::constant(0.5, 1);
    CHECK(riesz_radial(kBall, bh, 0.0, kSpec) == Catch::Approx(4.0).epsilon(1e-8));

    CHECK_THROWS_AS(riesz_radial(kBall, ExponentField::constant(0.0, 1), 1.0, kSpec), domain_error);
    CHECK_THROWS_AS(riesz_radial(kBall, ExponentField::constant(1.5, 1), 1.0, kSpec), domain_error);
}

TEST_CASE("riesz potential, n = 2 and n = 3 sanity") {
    auto ball2 = TestFunction::ball_indicator(2, 0);
    auto b2 = ExponentField::constant(1.0, 2);
    CHECK(riesz_radial(ball2, b2, 0.0, kSpec) == Catch::Approx(2.0 * pi).epsilon(1e-7));

    auto ball3 = TestFunction::ball_indicator(3, 0);
    auto b3 = ExponentField::constant(2.0, 3);
    CHECK(riesz_radial(ball3, b3, 0.0, kSpec) == Catch::Approx(2.0 * pi).epsilon(1e-8));
    // off-centre value against a radial-kernel oracle
    const double r = 0.5, e = 2.0;
    const double expect = oracle::integrate(
        [&](double s) {
            const double kern = 2.0 * pi / (r * s * (e - 1.0)) *
                                (std::pow(r + s, e - 1.0) - std::pow(std::abs(r - s), e - 1.0));
            return s * s * kern;
        },
        0.0, 1.0, 1e-12);
    CHECK(riesz_radial(ball3, b3, r, kSpec) == Catch::Approx(expect).epsilon(1e-7));
}

TEST_CASE("pointwise lower bound for the potential of ball indicators") {
    auto bh = ExponentField::constant(0.5, 1);
    double c_min = inf;
    for (int k = -2; k <= 2; ++k) {
        auto ball = TestFunction::ball_indicator(1, k);
        for (int i = 0; i < 12; ++i) {
            const double r = dyadic_radius(k - 1) * std::pow(2.0, (i + 0.5) / 12.0);
            const double v = riesz_radial(ball, bh, r, kSpec);
            c_min = std::min(c_min, v / std::pow(r, 0.5));
        }
    }
    CHECK(c_min > 0.0);
    CHECK(std::isfinite(c_min));
}

TEST_CASE("linearity and positivity") {
    std::mt19937_64 rng(5);
    auto u01 = [&]() { return (rng() >> 11) * 0x1.0p-53; };
    auto b = ExponentField::constant(0.25, 1);
    for (int it = 0; it < 8; ++it) {
        TestFunction f(1, {Term{u01() + 0.1, Primitive::annulus_indicator(0)}});
        TestFunction g(1, {Term{u01() + 0.1, Primitive::annulus_indicator(1)}});
        const double a = 1.0 + u01(), c = 0.5 + u01();
        auto combo = f.scaled(a).plus(g.scaled(c));
        for (double r : {0.7, 1.4, 3.0}) {
            CHECK(hardy_radial(combo, b, r) ==
                  Catch::Approx(a * hardy_radial(f, b, r) + c * hardy_radial(g, b, r)).margin(1e-12));
            CHECK(hardy_star_radial(combo, b, r) ==
                  Catch::Approx(a * hardy_star_radial(f, b, r) + c * hardy_star_radial(g, b, r))
                      .margin(1e-12));
            CHECK(riesz_radial(combo, b, r, kSpec) ==
                  Catch::Approx(a * riesz_radial(f, b, r, kSpec) + c * riesz_radial(g, b, r, kSpec))
                      .margin(1e-8));
            CHECK(hardy_radial(combo, b, r) >= 0.0);
            CHECK(hardy_star_radial(combo, b, r) >= 0.0);
            CHECK(riesz_radial(combo, b, r, kSpec) >= 0.0);
        }
    }
}

TEST_CASE("support laws") {
    auto b = ExponentField::constant(0.25, 1);
    auto far = TestFunction::annulus_indicator(1, 5);
    CHECK(hardy_radial(far, b, dyadic_radius(4)) == 0.0);       // ball below the support
    CHECK(hardy_radial(far, b, dyadic_radius(4) * 1.5) == 0.0); // still inside A_5's inner edge
    auto near = TestFunction::annulus_indicator(1, 0);
    CHECK(hardy_star_radial(near, b, 2.0) == 0.0);  // exterior misses the support
}

TEST_CASE("classical collapse at beta = 0") {
    auto b0 = ExponentField::constant(0.0, 1);
    for (int i = 0; i < 50; ++i) {
        const double r = 0.05 + 0.2 * i;
        CHECK(hardy_radial(kBall, b0, r) == Catch::Approx(hardy_oracle(r, 0.0)).epsilon(1e-12));
    }
}

TEST_CASE("apply_weight") {
    auto b = ExponentField::constant(0.5, 1);
    auto g0 = ExponentField::constant(0.0, 1);
    auto img = make_operator_image(OperatorKind::hardy, kBall, b);
    auto unweighted = img.field(kSpec);
    auto weighted = apply_weight(img, ExponentField::constant(1.0, 1)).field(kSpec);
    CHECK(unweighted.profile(1.0, 1) == Catch::Approx(hardy_radial(kBall, b, 1.0)));
    CHECK(weighted.profile(1.0, 1) == Catch::Approx(0.5 * hardy_radial(kBall, b, 1.0)));
    CHECK(apply_weight(img, g0).field(kSpec).profile(2.0, 1) ==
          Catch::Approx(hardy_radial(kBall, b, 2.0)));
    CHECK_THROWS_AS(apply_weight(img, ExponentField::constant(-1.0, 1)), domain_error);

    // weight-equivalence probe: for a (2.3)-type beta the two weights stay in a band
    auto beta = ExponentField::radial_log(0.5, 0.1, 1);
    auto gamma = gamma_weight_exponent(beta, 1.0);
    const double gi = gamma.limit_at_infinity();
    double mn = inf, mx = 0;
    for (double r : ProbeGrid::log_spaced(1e-6, 1e6, 64).radii) {
        const double ratio = std::pow(1.0 + r, gi - gamma.value_radial(r));
        mn = std::min(mn, ratio);
        mx = std::max(mx, ratio);
    }
    CHECK(mn > 0.0);
    CHECK(mx < inf);
}

TEST_CASE("operator block norms") {
    auto q2 = ExponentField::constant(2.0, 1);
    auto b0 = ExponentField::constant(0.0, 1);
    auto g0 = ExponentField::constant(0.0, 1);

    // || (2/|x|) chi_{A_2} ||_2 = sqrt(2)
    auto nv = operator_block_norm(OperatorKind::hardy, kBall, b0, g0, 2, q2, kSpec);
    CHECK(nv.value == Catch::Approx(std::sqrt(2.0)).epsilon(1e-9));

    auto far = TestFunction::annulus_indicator(1, 5);
    CHECK(operator_block_norm(OperatorKind::hardy, far, b0, g0, 3, q2, kSpec).value == 0.0);
    auto near = TestFunction::annulus_indicator(1, 0);
    CHECK(operator_block_norm(OperatorKind::hardy_star, near, b0, g0, 5, q2, kSpec).value == 0.0);
}

TEST_CASE("operator image evaluator stays finite on probe grids") {
    auto b = ExponentField::constant(0.25, 1);
    TestFunction f(1, {Term{1.0, Primitive::annulus_indicator(0)},
                       Term{-0.5, Primitive::annulus_indicator(1)}});
    for (OperatorKind kind : {OperatorKind::hardy, OperatorKind::hardy_star, OperatorKind::riesz}) {
        auto field = make_operator_image(kind, f, b).field(kSpec);
        for (double r : ProbeGrid::log_spaced(1e-4, 1e3, 8).radii) {
            CHECK(std::isfinite(field.profile(r, 1)));
        }
    }
}

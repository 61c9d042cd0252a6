#pragma once

// Variable-order fractional Hardy operators, the adjoint Hardy operator and
// the Riesz-type potential, evaluated pointwise (exact cumulative integrals
// where the primitives admit them) and exposed as radial integrands for the
// norm machinery. The order beta is frozen at the evaluation point x, so the
// kernel exponent is constant within one call.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "vex/common.hpp"
#include "vex/exponent.hpp"
#include "vex/norms.hpp"
#include "vex/quad.hpp"
#include "vex/test_function.hpp"

namespace vex {

enum class OperatorKind { hardy, hardy_star, riesz };

inline const char* to_string(OperatorKind k) {
    switch (k) {
        case OperatorKind::hardy: return "hardy";
        case OperatorKind::hardy_star: return "hardy_star";
        case OperatorKind::riesz: return "riesz";
    }
    return "?";
}

/// H_beta f(x) = |x|^{beta(x)-n} int_{|t|<|x|} f(t) dt.
inline double hardy_radial(const TestFunction& f, const ExponentField& beta, double r) {
    if (!(r > 0)) throw domain_error("hardy: requires x != 0");
    if (f.dim() != beta.dim()) throw config_error("hardy: dimension mismatch");
    const double mass = f.mass_in_ball(r);
    if (mass == 0.0) return 0.0;
    return std::pow(r, beta.value_radial(r) - f.dim()) * mass;
}

inline double hardy(const TestFunction& f, const ExponentField& beta, const Vec& x) {
    return hardy_radial(f, beta, radius_of(x));
}

/// H*_beta f(x) = int_{|t|>=|x|} f(t) |t|^{beta(x)-n} dt.
inline double hardy_star_radial(const TestFunction& f, const ExponentField& beta, double r) {
    if (!(r > 0)) throw domain_error("hardy_star: requires x != 0");
    if (f.dim() != beta.dim()) throw config_error("hardy_star: dimension mismatch");
    auto [lo, hi] = f.support_radii();
    if (hi <= r) return 0.0;  // nothing outside |x|
    (void)lo;
    return f.exterior_kernel_integral(r, beta.value_radial(r));
}

inline double hardy_star(const TestFunction& f, const ExponentField& beta, const Vec& x) {
    return hardy_star_radial(f, beta, radius_of(x));
}

namespace detail {

// Angular kernel of the Riesz potential for radial sources:
//   K_n(r, s) = int_{S^{n-1}} |x - s w|^{beta-n} dw,  |x| = r.
// n = 1 is a two-point sum, n = 3 is closed-form, n = 2 is a 1-D adaptive
// angular integral with grading toward theta = 0.
inline double riesz_angular_kernel(int n, double r, double s, double e, double rel_tol) {
    const double mx = std::max(r, s), mn = std::min(r, s);
    switch (n) {
        case 1: {
            const double d = std::abs(r - s);
            const double a = d > 0 ? std::pow(d, e - 1.0) : inf;
            return a + std::pow(r + s, e - 1.0);
        }
        case 2: {
            if (mx == 0.0) return 2.0 * pi * std::pow(mn, e - 2.0);  // degenerate
            auto f = [&](double th) {
                const double d2 = (r - s) * (r - s) + 4.0 * r * s * std::sin(0.5 * th) * std::sin(0.5 * th);
                return std::pow(d2, 0.5 * (e - 2.0));
            };
            std::vector<double> sing;
            if (mn / mx > 0.9) sing.push_back(0.0);
            return 2.0 * adaptive_interval(f, 0.0, pi, rel_tol, 1 << 18, {}, sing).value;
        }
        case 3: {
            if (mx == 0.0) return 4.0 * pi * std::pow(mn, e - 3.0);
            const double u = mn / mx;
            if (u < 1e-7) return 4.0 * pi * std::pow(mx, e - 3.0);
            if (std::abs(e - 1.0) < 1e-13)
                return 2.0 * pi / (r * s) * std::log((r + s) / std::abs(r - s));
            return 2.0 * pi / (r * s * (e - 1.0)) *
                   (std::pow(r + s, e - 1.0) - std::pow(std::abs(r - s), e - 1.0));
        }
    }
    throw domain_error("riesz: dimension");
}

}  // namespace detail

/// I_beta f(x) = int f(y) |x-y|^{beta(x)-n} dy, weakly singular at y = x.
/// x = 0 is admitted when beta(0) > 0.
inline double riesz_radial(const TestFunction& f, const ExponentField& beta, double r,
                           const QuadratureSpec& spec) {
    if (f.dim() != beta.dim()) throw config_error("riesz: dimension mismatch");
    if (!(r >= 0)) throw domain_error("riesz: negative radius");
    const int n = f.dim();
    const double e = beta.value_radial(r);
    // e = n is the degenerate constant-kernel case and is admitted
    if (!(e > 0) || !(e <= n)) throw domain_error("riesz: requires 0 < beta(x) <= n at the evaluation point");
    if (f.is_zero()) return 0.0;

    auto [lo, hi] = f.support_radii();
    if (hi == inf) hi = dyadic_radius(spec.k_max);
    const double inner_tol = std::min(spec.rel_tol, 1e-9);

    auto integrand = [&](double s) {
        return std::pow(s, n - 1.0) * f.value_radial(s) *
               detail::riesz_angular_kernel(n, r, s, e, inner_tol * 0.1);
    };
    std::vector<double> edges = f.breakpoints();
    std::vector<double> sing;
    if (r >= lo && r <= hi) sing.push_back(r);  // kernel singularity
    for (double z : f.singular_radii()) sing.push_back(z);
    if (lo == 0.0) sing.push_back(0.0);
    IntegralValue v = detail::adaptive_interval(integrand, lo, hi, inner_tol, spec.max_subdivisions,
                                                edges, sing);
    return v.value;
}

inline double riesz(const TestFunction& f, const ExponentField& beta, const Vec& x,
                    const QuadratureSpec& spec) {
    return riesz_radial(f, beta, radius_of(x), spec);
}

// ---------------------------------------------------------------------------
// operator images as radial integrands

/// A lazily evaluated operator image w(x) * (T f)(x) with exact support hints.
struct OperatorImage {
    OperatorKind kind = OperatorKind::hardy;
    TestFunction source;
    ExponentField beta;
    ExponentField gamma;  // identically zero when unweighted

    /// Radial integrand; expensive kinds (riesz) are memoized.
    Integrand field(const QuadratureSpec& spec) const {
        const TestFunction f = source;
        const ExponentField b = beta;
        Integrand g = [&]() {
            switch (kind) {
                case OperatorKind::hardy: {
                    auto [lo, hi] = f.support_radii();
                    (void)hi;
                    return Integrand::radial(f.dim(), [f, b](double r) { return hardy_radial(f, b, r); })
                        .with_support(lo, inf)
                        .with_breakpoints(f.breakpoints());
                }
                case OperatorKind::hardy_star: {
                    auto [lo, hi] = f.support_radii();
                    (void)lo;
                    return Integrand::radial(f.dim(),
                                             [f, b](double r) { return hardy_star_radial(f, b, r); })
                        .with_support(0.0, hi)
                        .with_breakpoints(f.breakpoints());
                }
                case OperatorKind::riesz: {
                    const QuadratureSpec sp = spec;
                    return memoized(
                        Integrand::radial(f.dim(), [f, b, sp](double r) { return riesz_radial(f, b, r, sp); })
                            .with_support(0.0, inf)
                            .with_breakpoints(f.breakpoints()));
                }
            }
            throw domain_error("OperatorImage: unknown kind");
        }();
        if (gamma.ess_sup() != 0.0 || gamma.ess_inf() != 0.0)
            return g.multiplied(power_weight(gamma));
        return g;
    }
};

inline OperatorImage make_operator_image(OperatorKind kind, TestFunction f, ExponentField beta) {
    OperatorImage img;
    img.kind = kind;
    img.gamma = ExponentField::constant(0.0, f.dim());
    img.source = std::move(f);
    img.beta = std::move(beta);
    return img;
}

/// Attach the weight (1+|x|)^{-gamma(x)}.
inline OperatorImage apply_weight(OperatorImage img, ExponentField gamma) {
    if (!(gamma.ess_inf() >= 0)) throw domain_error("apply_weight: requires gamma >= 0");
    img.gamma = std::move(gamma);
    return img;
}

inline Integrand apply_weight(const TestFunction& f, const ExponentField& gamma) {
    if (!(gamma.ess_inf() >= 0)) throw domain_error("apply_weight: requires gamma >= 0");
    return f.integrand().multiplied(power_weight(gamma));
}

/// || (1+|x|)^{-gamma(x)} (T f) chi_k ||_{L^{q(.)}}, with exact zero blocks
/// decided from support alone.
inline NormValue operator_block_norm(OperatorKind kind, const TestFunction& f, const ExponentField& beta,
                                     const ExponentField& gamma, int k, const ExponentField& q,
                                     const QuadratureSpec& spec) {
    spec.validate();
    auto [lo, hi] = f.support_radii();
    if (kind == OperatorKind::hardy && dyadic_radius(k) <= lo) return {};
    if (kind == OperatorKind::hardy_star && dyadic_radius(k - 1) >= hi) return {};
    if (f.is_zero()) return {};
    OperatorImage img = apply_weight(make_operator_image(kind, f, beta), gamma);
    return luxemburg_norm_field(img.field(spec), q, spec,
                                std::make_pair(dyadic_radius(k - 1), dyadic_radius(k)));
}

}  // namespace vex

#pragma once

// Test-side reference numerics, deliberately independent of the library's
// Gauss-Kronrod engine and Luxemburg implementation: adaptive Simpson
// quadrature, a Simpson-backed Luxemburg bisection, and a golden-section
// maximizer. Used to freeze expected values.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

using Fn = std::function<double(double)>;

inline double simpson_rec(const Fn& f, double a, double b, double fa, double fm, double fb, double whole,
                          double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

/// Adaptive Simpson on [a, b]; endpoints are nudged inward so integrable
/// endpoint singularities are tolerated.
inline double integrate(const Fn& f, double a, double b, double tol = 1e-12) {
    if (!(b > a)) return 0.0;
    const double eps = 1e-14 * (std::abs(a) + std::abs(b) + 1.0);
    const double aa = a + eps, bb = b - eps;
    if (!(bb > aa)) return 0.0;
    const double fa = f(aa), fb = f(bb), fm = f(0.5 * (aa + bb));
    const double whole = (bb - aa) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, aa, bb, fa, fm, fb, whole, tol, 60);
}

/// Integrate with interior breakpoints (union of both lists, sorted).
inline double integrate_pieces(const Fn& f, std::vector<double> edges, double tol = 1e-12) {
    if (edges.size() < 2) return 0.0;
    double acc = 0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) acc += integrate(f, edges[i], edges[i + 1], tol);
    return acc;
}

inline double sphere_measure(int n) { return n == 1 ? 2.0 : (n == 2 ? 2.0 * M_PI : 4.0 * M_PI); }

/// Radial volume integral: sigma_{n-1} int r^{n-1} g(r) dr over [a, b].
inline double integrate_radial(const Fn& g, double a, double b, int n, double tol = 1e-12) {
    const double s = sphere_measure(n);
    return s * integrate([&](double r) { return std::pow(r, n - 1) * g(r); }, a, b, tol);
}

/// Independent Luxemburg norm: bisection on eta with Simpson modulars.
/// `profile` is the radial |f|, `q` the radial exponent, support [a, b].
inline double luxemburg(const Fn& profile, const Fn& q, double a, double b, int n,
                        std::vector<double> edges = {}, double tol = 1e-11) {
    edges.push_back(a);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::vector<double> inside;
    for (double e : edges)
        if (e >= a && e <= b) inside.push_back(e);
    const double sigma = sphere_measure(n);
    auto modular = [&](double eta) {
        return sigma * integrate_pieces(
                           [&](double r) {
                               const double v = std::abs(profile(r)) / eta;
                               return v == 0.0 ? 0.0 : std::pow(r, n - 1) * std::pow(v, q(r));
                           },
                           inside, tol);
    };
    double lo = 1e-12, hi = 1e12;
    if (!(modular(lo) > 1.0) || !(modular(hi) < 1.0)) throw std::runtime_error("oracle luxemburg: bad bracket");
    for (int i = 0; i < 200; ++i) {
        const double mid = std::sqrt(lo * hi);
        if (modular(mid) >= 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi / lo < 1.0 + 1e-13) break;
    }
    return std::sqrt(lo * hi);
}

/// Golden-section maximizer on [a, b] (unimodal f).
inline double argmax(const Fn& f, double a, double b, double tol = 1e-12) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol * (std::abs(a) + std::abs(b) + 1.0)) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

/// Max over a dense grid followed by golden refinement between neighbours.
inline double grid_max(const Fn& f, double a, double b, int samples = 4096) {
    double best = -1e300, where = a;
    for (int i = 0; i <= samples; ++i) {
        const double x = a + (b - a) * i / samples;
        const double v = f(x);
        if (v > best) { best = v; where = x; }
    }
    const double lo = std::max(a, where - (b - a) / samples);
    const double hi = std::min(b, where + (b - a) / samples);
    const double xr = argmax(f, lo, hi);
    return std::max(best, f(xr));
}

}  // namespace oracle

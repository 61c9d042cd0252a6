#pragma once

// Adaptive radial quadrature over balls, annuli and exterior domains in
// dimensions 1..3. The core is a Gauss-Kronrod 7/15 panel rule with
// error-driven bisection; singular radii get seeded geometric grading
// (ratio 1/2) and refinement continues toward them as needed. Non-radial
// integrands in n = 2, 3 go through a fixed angular product rule.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "vex/common.hpp"

namespace vex {

struct QuadratureSpec {
    double rel_tol = 1e-8;           // target relative error per integral
    long max_subdivisions = 1 << 20; // adaptive panel cap per integral
    int k_min = -40;                 // dyadic truncation window
    int k_max = 40;
    int angular_points = 64;         // angular nodes for non-radial integrands

    void validate() const {
        if (!(rel_tol > 0)) throw config_error("rel_tol must be positive");
        if (max_subdivisions <= 0) throw config_error("max_subdivisions must be positive");
        if (k_min >= k_max) throw config_error("dyadic_window requires k_min < k_max");
        if (angular_points <= 0) throw config_error("angular_points must be positive");
    }
};

struct IntegralValue {
    double value = 0;
    double err_estimate = 0;  // a-posteriori absolute bound
    long panels_used = 0;
};

// ---------------------------------------------------------------------------
// panel engine

namespace detail {

// QUADPACK dqk15 nodes/weights on [-1, 1]; index 7 is the centre.
inline constexpr double kXgk15[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kWgk15[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kWg7[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelEval {
    double val = 0;
    double err = 0;
    double resabs = 0;
};

template <class F>
inline PanelEval gk15_panel(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resg = fc * kWg7[3];
    double resk = fc * kWgk15[7];
    double resabs = std::abs(fc) * kWgk15[7];
    double f1v[7], f2v[7];
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kXgk15[i];
        f1v[i] = f(c - dx);
        f2v[i] = f(c + dx);
        resk += kWgk15[i] * (f1v[i] + f2v[i]);
        resabs += kWgk15[i] * (std::abs(f1v[i]) + std::abs(f2v[i]));
        if (i % 2 == 1) resg += kWg7[i / 2] * (f1v[i] + f2v[i]);
    }
    const double reskh = resk * 0.5;
    double resasc = kWgk15[7] * std::abs(fc - reskh);
    for (int i = 0; i < 7; ++i)
        resasc += kWgk15[i] * (std::abs(f1v[i] - reskh) + std::abs(f2v[i] - reskh));
    PanelEval out;
    out.val = resk * h;
    out.resabs = resabs * std::abs(h);
    resasc *= std::abs(h);
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (out.resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        err = std::max(err, 50.0 * eps * out.resabs);
    out.err = err;
    return out;
}

struct Panel {
    double a, b, val, err;
};
struct PanelOrder {
    bool operator()(const Panel& x, const Panel& y) const { return x.err < y.err; }
};

/// Adaptive integration of f over [a, b]. `edges` are forced initial panel
/// boundaries. Each singular point gets geometric panel grading (ratio 1/2)
/// toward it across the whole adjacent gap; the unresolvable innermost stub
/// is estimated by ratio extrapolation of the graded panel values and its
/// uncertainty is carried in the error. Throws quadrature_error when the
/// budget runs out before err <= rel_tol*|value| + 1e-30 (up to roundoff
/// resolution) is met.
template <class F>
inline IntegralValue adaptive_interval(F&& f, double a, double b, double rel_tol, long max_panels,
                                       const std::vector<double>& edges,
                                       const std::vector<double>& singular) {
    IntegralValue out;
    if (!(b > a)) return out;
    const double eps = std::numeric_limits<double>::epsilon();

    std::vector<double> pts{a, b};
    for (double e : edges)
        if (e > a && e < b) pts.push_back(e);
    for (double s : singular)
        if (s >= a && s <= b) pts.push_back(s);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::priority_queue<Panel, std::vector<Panel>, PanelOrder> heap;
    double sum_val = 0, sum_err = 0, resabs_sum = 0;
    double fixed_err = 0;  // stub extrapolation uncertainty and unsplittable panels
    long panels = 0;

    auto add_panel = [&](double lo, double hi) {
        PanelEval pe = gk15_panel(f, lo, hi);
        ++panels;
        sum_val += pe.val;
        resabs_sum += pe.resabs;
        const double width_floor = 8.0 * eps * (std::abs(lo) + std::abs(hi) + 1e-300);
        if (hi - lo <= width_floor) {
            fixed_err += pe.err;
        } else {
            sum_err += pe.err;
            heap.push(Panel{lo, hi, pe.val, pe.err});
        }
    };

    // geometric grading runs toward singular points; each covers the whole
    // gap up to the adjacent edge and replaces the plain panel there
    std::vector<std::pair<double, double>> handled;
    for (double s : singular) {
        if (s < a || s > b) continue;
        const auto it = std::lower_bound(pts.begin(), pts.end(), s);
        for (int side : {+1, -1}) {
            double gap = 0;
            if (side > 0 && it + 1 != pts.end() && *it == s) gap = *(it + 1) - s;
            if (side < 0 && it != pts.begin() && *it == s) gap = s - *(it - 1);
            if (!(gap > 0)) continue;
            int levels = 44;
            const double min_width = 16.0 * eps * (std::abs(s) + 1e-300) + 1e-300;
            while (levels > 0 && gap * std::ldexp(1.0, -levels) < min_width) --levels;
            if (levels < 6) continue;  // gap already at roundoff scale
            double v[3] = {0, 0, 0};   // three innermost graded panel values
            for (int j = levels; j >= 1; --j) {
                const double lo_off = gap * std::ldexp(1.0, -j);
                const double hi_off = gap * std::ldexp(1.0, -(j - 1));
                const double lo = side > 0 ? s + lo_off : s - hi_off;
                const double hi = side > 0 ? s + hi_off : s - lo_off;
                PanelEval pe = gk15_panel(f, lo, hi);
                ++panels;
                sum_val += pe.val;
                resabs_sum += pe.resabs;
                sum_err += pe.err;
                heap.push(Panel{lo, hi, pe.val, pe.err});
                if (j >= levels - 2) v[levels - j] = pe.val;  // v[0] innermost
            }
            // ratio-extrapolated stub [s, s +/- gap*2^-levels]
            const double rho = v[1] != 0 ? v[0] / v[1] : 0.0;
            const double rho_prev = v[2] != 0 ? v[1] / v[2] : 0.0;
            if (std::abs(rho) < 0.995) {
                const double tail = v[0] * rho / (1.0 - rho);
                double tail_prev = tail;
                if (std::abs(rho_prev) < 0.995) tail_prev = v[0] * rho_prev / (1.0 - rho_prev);
                sum_val += tail;
                fixed_err += 2.0 * std::abs(tail - tail_prev) + 1e-300;
            } else {
                fixed_err += std::abs(v[0]) * 1e3;  // not certifiably integrable
            }
            handled.emplace_back(side > 0 ? s : s - gap, side > 0 ? s + gap : s);
        }
    }

    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        bool skip = false;
        for (const auto& [lo, hi] : handled)
            if (pts[i] >= lo && pts[i + 1] <= hi) skip = true;
        if (!skip) add_panel(pts[i], pts[i + 1]);
    }

    auto target = [&]() { return rel_tol * std::abs(sum_val) + 1e-30; };
    while (sum_err + fixed_err > target()) {
        const bool roundoff_limited = sum_err + fixed_err <= target() + 200.0 * eps * resabs_sum;
        if (heap.empty() || panels >= max_panels || roundoff_limited) {
            if (roundoff_limited || (heap.empty() && sum_err + fixed_err <= 10.0 * target())) break;
            throw quadrature_error("adaptive quadrature did not converge", sum_val, sum_err + fixed_err,
                                   panels);
        }
        Panel worst = heap.top();
        heap.pop();
        sum_val -= worst.val;
        sum_err -= worst.err;
        const double mid = 0.5 * (worst.a + worst.b);
        add_panel(worst.a, mid);
        add_panel(mid, worst.b);
    }
    out.value = sum_val;
    out.err_estimate = sum_err + fixed_err;
    out.panels_used = panels;
    return out;
}

/// Gauss-Legendre nodes/weights on [-1, 1] (Newton on Legendre polynomials).
inline void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w) {
    x.assign(m, 0.0);
    w.assign(m, 0.0);
    const int half = (m + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(pi * (i + 0.75) / (m + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < m; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = m * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = w[m - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
}

inline const std::pair<std::vector<double>, std::vector<double>>& gl_table(int m) {
    thread_local std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    auto it = cache.find(m);
    if (it == cache.end()) {
        std::pair<std::vector<double>, std::vector<double>> t;
        gauss_legendre(m, t.first, t.second);
        it = cache.emplace(m, std::move(t)).first;
    }
    return it->second;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// integrands

/// An integrand over R^n. Radial integrands carry a 1-D profile; general
/// pointwise integrands are reduced to a radial profile through the fixed
/// angular rule (trapezoid on S^1; Gauss-Legendre x trapezoid on S^2).
/// Breakpoint/singularity/support hints steer the adaptive panels.
class Integrand {
public:
    using RadialFn = std::function<double(double)>;
    using PointFn = std::function<double(double, double, double)>;

    static Integrand radial(int dim, RadialFn f) {
        Integrand g;
        g.dim_ = dim;
        g.radial_ = std::move(f);
        return g;
    }

    static Integrand pointwise(int dim, PointFn f) {
        Integrand g;
        g.dim_ = dim;
        g.point_ = std::move(f);
        return g;
    }

    Integrand with_breakpoints(std::vector<double> b) const {
        Integrand g = *this;
        g.breakpoints_ = std::move(b);
        return g;
    }
    Integrand with_singularities(std::vector<double> s) const {
        Integrand g = *this;
        g.singularities_ = std::move(s);
        return g;
    }
    Integrand with_support(double lo, double hi) const {
        Integrand g = *this;
        g.support_lo_ = lo;
        g.support_hi_ = hi;
        return g;
    }

    /// Pointwise post-map v(x) -> op(v(x), |x|); hints carry over.
    Integrand transformed(std::function<double(double, double)> op) const {
        Integrand g = *this;
        if (radial_) {
            auto base = radial_;
            g.radial_ = [base, op](double r) { return op(base(r), r); };
        } else {
            auto base = point_;
            g.point_ = [base, op](double x, double y, double z) {
                return op(base(x, y, z), std::sqrt(x * x + y * y + z * z));
            };
        }
        return g;
    }

    /// Multiply by a radial factor m(|x|); hints carry over.
    Integrand multiplied(std::function<double(double)> m) const {
        return transformed([m = std::move(m)](double v, double r) { return v * m(r); });
    }

    int dim() const { return dim_; }
    bool is_radial() const { return static_cast<bool>(radial_); }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& singularities() const { return singularities_; }
    double support_lo() const { return support_lo_; }
    double support_hi() const { return support_hi_; }

    /// Angular average over the sphere of radius r (equals the profile for
    /// radial integrands).
    double profile(double r, int angular_points) const {
        if (radial_) return radial_(r);
        switch (dim_) {
            case 1:
                return 0.5 * (point_(r, 0, 0) + point_(-r, 0, 0));
            case 2: {
                double acc = 0;
                const int m = angular_points;
                for (int i = 0; i < m; ++i) {
                    const double th = 2.0 * pi * (i + 0.5) / m;
                    acc += point_(r * std::cos(th), r * std::sin(th), 0);
                }
                return acc / m;
            }
            case 3: {
                const int mu = std::max(4, angular_points / 4);
                const int mphi = angular_points;
                const auto& [xs, ws] = detail::gl_table(mu);
                double acc = 0;
                for (int i = 0; i < mu; ++i) {
                    const double u = xs[i];  // cos(theta)
                    const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
                    double ring = 0;
                    for (int k = 0; k < mphi; ++k) {
                        const double ph = 2.0 * pi * (k + 0.5) / mphi;
                        ring += point_(r * s * std::cos(ph), r * s * std::sin(ph), r * u);
                    }
                    acc += ws[i] * ring / mphi;
                }
                return acc / 2.0;  // GL weights sum to 2
            }
        }
        throw domain_error("Integrand: unsupported dimension");
    }

private:
    int dim_ = 1;
    RadialFn radial_;
    PointFn point_;
    std::vector<double> breakpoints_;
    std::vector<double> singularities_;
    double support_lo_ = 0;
    double support_hi_ = inf;
};

namespace detail {

/// Integrate g over the radial shell [r_lo, r_hi] (volume integral of the
/// n-dimensional region between the two spheres).
inline IntegralValue integrate_shell(const Integrand& g, double r_lo, double r_hi,
                                     const QuadratureSpec& spec) {
    const double lo = std::max(r_lo, g.support_lo());
    const double hi = std::min(r_hi, g.support_hi());
    if (!(hi > lo)) return {};
    const double sigma = sphere_measure(g.dim());
    const int n = g.dim();
    const int ap = spec.angular_points;
    auto f = [&g, sigma, n, ap](double r) {
        return sigma * std::pow(r, n - 1) * g.profile(r, ap);
    };
    std::vector<double> edges;
    for (double b : g.breakpoints())
        if (b > lo && b < hi) edges.push_back(b);
    std::vector<double> sing;
    for (double s : g.singularities())
        if (s >= lo && s <= hi) sing.push_back(s);
    if (lo == 0.0 && std::find(sing.begin(), sing.end(), 0.0) == sing.end()) sing.push_back(0.0);
    return adaptive_interval(f, lo, hi, spec.rel_tol, spec.max_subdivisions, edges, sing);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// public integrators over dyadic regions

/// Integral over the annulus A_k = {2^{k-1} < |x| <= 2^k}.
inline IntegralValue integrate_annulus(const Integrand& g, int k, const QuadratureSpec& spec) {
    spec.validate();
    if (k < spec.k_min || k > spec.k_max)
        throw config_error("integrate_annulus: k outside the dyadic window");
    return detail::integrate_shell(g, dyadic_radius(k - 1), dyadic_radius(k), spec);
}

/// Integral over the ball B_k = {|x| <= 2^k}: annuli k_min..k plus an origin
/// panel on [0, 2^{k_min-1}] with geometric grading toward 0.
inline IntegralValue integrate_ball(const Integrand& g, int k, const QuadratureSpec& spec) {
    spec.validate();
    if (k < spec.k_min || k > spec.k_max)
        throw config_error("integrate_ball: k outside the dyadic window");
    IntegralValue acc;
    for (int j = k; j >= spec.k_min; --j) {
        if (g.support_lo() >= dyadic_radius(j)) break;  // annuli below are empty
        IntegralValue shell = detail::integrate_shell(g, dyadic_radius(j - 1), dyadic_radius(j), spec);
        acc.value += shell.value;
        acc.err_estimate += shell.err_estimate;
        acc.panels_used += shell.panels_used;
    }
    if (g.support_lo() < dyadic_radius(spec.k_min - 1)) {
        IntegralValue origin = detail::integrate_shell(g, 0.0, dyadic_radius(spec.k_min - 1), spec);
        acc.value += origin.value;
        acc.err_estimate += origin.err_estimate;
        acc.panels_used += origin.panels_used;
    }
    return acc;
}

/// Integral over the exterior {|t| >= 2^k}, truncated at 2^{k_max}. The tail
/// beyond the window is estimated by Richardson comparison of the last two
/// dyadic shells (or a caller-supplied bound) and folded into err_estimate;
/// a tail that cannot be certified raises truncation_error.
inline IntegralValue integrate_exterior(const Integrand& g, int k, const QuadratureSpec& spec,
                                        std::optional<double> tail_bound = std::nullopt) {
    spec.validate();
    if (k < spec.k_min || k >= spec.k_max)
        throw config_error("integrate_exterior: k outside the dyadic window");
    IntegralValue acc;
    double prev = 0, last = 0;
    bool have_prev = false;
    for (int j = k; j < spec.k_max; ++j) {
        IntegralValue shell = detail::integrate_shell(g, dyadic_radius(j), dyadic_radius(j + 1), spec);
        acc.value += shell.value;
        acc.err_estimate += shell.err_estimate;
        acc.panels_used += shell.panels_used;
        prev = last;
        have_prev = j > k;
        last = std::abs(shell.value);
        if (g.support_hi() <= dyadic_radius(j + 1)) {
            return acc;  // support exhausted: no tail
        }
    }
    double tail;
    if (tail_bound) {
        tail = *tail_bound;
    } else if (last == 0.0) {
        tail = 0.0;
    } else {
        const double rho = have_prev && prev > 0 ? last / prev : 1.0;
        if (!(rho < 0.95)) {
            throw truncation_error("integrate_exterior: tail is not decaying within the window", -1);
        }
        tail = last * rho / (1.0 - rho);
    }
    const double budget = spec.rel_tol * std::abs(acc.value) + 1e-30;
    if (tail > 2.0 * budget) {
        int extra = -1;
        if (have_prev && prev > 0 && last > 0 && last < prev) {
            const double rho = last / prev;
            extra = spec.k_max + static_cast<int>(std::ceil(std::log(tail / budget) / std::log(1.0 / rho)));
        }
        throw truncation_error("integrate_exterior: tail beyond the dyadic window exceeds the tolerance", extra);
    }
    acc.err_estimate += tail;
    return acc;
}

/// Continuous-radius variants used by the operators.
inline IntegralValue integrate_shell_radii(const Integrand& g, double r_lo, double r_hi,
                                           const QuadratureSpec& spec) {
    spec.validate();
    return detail::integrate_shell(g, r_lo, r_hi, spec);
}

/// Integral over all of R^n within the dyadic window: origin panel, annuli,
/// and a Richardson bound for any tail escaping the window (folded into the
/// error; raises truncation_error when it cannot be certified).
/// `domain` optionally restricts to a radial interval.
inline IntegralValue integrate_window(const Integrand& g, const QuadratureSpec& spec,
                                      std::optional<std::pair<double, double>> domain = std::nullopt) {
    spec.validate();
    double d_lo = 0, d_hi = inf;
    if (domain) {
        d_lo = domain->first;
        d_hi = domain->second;
    }
    const double lo = std::max(d_lo, g.support_lo());
    const double hi = std::min(d_hi, g.support_hi());
    IntegralValue acc;
    if (!(hi > lo)) return acc;

    const double origin_edge = dyadic_radius(spec.k_min - 1);
    if (lo < origin_edge) {
        IntegralValue origin = detail::integrate_shell(g, lo, std::min(hi, origin_edge), spec);
        acc.value += origin.value;
        acc.err_estimate += origin.err_estimate;
        acc.panels_used += origin.panels_used;
    }
    double prev = 0, last = 0;
    bool have_prev = false, reached_window_end = false;
    for (int j = spec.k_min; j <= spec.k_max; ++j) {
        const double a = dyadic_radius(j - 1), b = dyadic_radius(j);
        if (b <= lo) continue;
        if (a >= hi) break;
        IntegralValue shell = detail::integrate_shell(g, std::max(a, lo), std::min(b, hi), spec);
        acc.value += shell.value;
        acc.err_estimate += shell.err_estimate;
        acc.panels_used += shell.panels_used;
        prev = last;
        have_prev = j > spec.k_min;
        last = std::abs(shell.value);
        if (j == spec.k_max && hi > b) reached_window_end = true;
    }
    if (reached_window_end && last > 0) {
        const double rho = have_prev && prev > 0 ? last / prev : 1.0;
        const double budget = spec.rel_tol * std::abs(acc.value) + 1e-30;
        if (!(rho < 0.95)) {
            throw truncation_error("integrate_window: tail is not decaying within the dyadic window", -1);
        }
        const double tail = last * rho / (1.0 - rho);
        if (tail > 2.0 * budget)
            throw truncation_error("integrate_window: tail beyond the dyadic window exceeds the tolerance",
                                   -1);
        acc.err_estimate += tail;
    }
    return acc;
}

}  // namespace vex

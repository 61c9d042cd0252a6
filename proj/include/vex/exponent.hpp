#pragma once

// Variable exponent fields on R^n (radial, closed-form) together with the
// admissibility machinery: conjugation, Sobolev exponents, power-weight
// exponents, log-Hoelder estimates and the boundedness/minimality checks.
//
// All fields are immutable values; every operation here is a pure function.

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vex/common.hpp"
#include "vex/json_util.hpp"

namespace vex {

using Vec = std::array<double, 3>;  // points in R^n, n <= 3; unused entries zero

inline double radius_of(const Vec& x) {
    return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
}

/// A closed-form radial exponent function with exactly computed bounds and
/// limits. Base forms:
///   constant(c)                 q(x) = c
///   radial_log(c_inf, a)        q(x) = c_inf + a/ln(e+|x|)
///   radial_origin_log(c0, a)    q(x) = c0 + a/ln(e+1/|x|) for |x|<1, glued
///                               continuously to a constant for |x|>=1
///   radial_affine(c, slope)     q(x) = c + slope*|x|
///   piecewise_radial            breakpoints 0 < b_1 < ... < b_m and m+1 pieces
/// Derived forms (conjugate, Sobolev exponent, weight exponent) keep symbolic
/// children so bounds and limits propagate.
class ExponentField {
public:
    enum class Form {
        Constant,
        RadialLog,
        RadialOriginLog,
        RadialAffine,
        Piecewise,
        Conjugate,
        Sobolev,
        GammaWeight,
    };

private:
    struct Node {
        Form form = Form::Constant;
        int dim = 1;
        double p0 = 0, p1 = 0;       // form parameters
        double c_inf = 0;            // gamma-weight constant
        std::vector<double> breakpoints;
        std::vector<ExponentField> pieces;
        std::shared_ptr<const Node> child_a, child_b;

        // caches
        double ess_inf = 0, ess_sup = 0;
        double at_origin = 0, at_infinity = 0;
        bool has_limit = true;
        bool exact_bounds = true;

        double eval(double r) const;
        std::pair<double, double> bounds_on(double lo, double hi) const;
        double origin_value() const;
        std::optional<double> infinity_value() const;
    };

    std::shared_ptr<const Node> n_;

    explicit ExponentField(std::shared_ptr<Node> node) {
        finalize(*node);
        n_ = std::move(node);
    }

    static void finalize(Node& n) {
        n.at_origin = n.origin_value();
        if (auto lim = n.infinity_value()) {
            n.at_infinity = *lim;
            n.has_limit = true;
        } else {
            n.at_infinity = std::numeric_limits<double>::quiet_NaN();
            n.has_limit = false;
        }
        auto b = n.bounds_on(0.0, inf);
        n.ess_inf = b.first;
        n.ess_sup = b.second;
    }

    const Node& node() const {
        if (!n_) throw domain_error("ExponentField: empty field");
        return *n_;
    }

public:
    ExponentField() = default;

    static ExponentField constant(double c, int dim) {
        check_dim(dim);
        if (!std::isfinite(c)) throw config_error("constant exponent must be finite");
        auto n = std::make_shared<Node>();
        n->form = Form::Constant;
        n->dim = dim;
        n->p0 = c;
        return ExponentField(std::move(n));
    }

    static ExponentField radial_log(double c_inf, double a, int dim) {
        check_dim(dim);
        if (!std::isfinite(c_inf) || !std::isfinite(a)) throw config_error("radial_log parameters must be finite");
        auto n = std::make_shared<Node>();
        n->form = Form::RadialLog;
        n->dim = dim;
        n->p0 = c_inf;
        n->p1 = a;
        return ExponentField(std::move(n));
    }

    static ExponentField radial_origin_log(double c0, double a, int dim) {
        check_dim(dim);
        if (!std::isfinite(c0) || !std::isfinite(a)) throw config_error("radial_origin_log parameters must be finite");
        auto n = std::make_shared<Node>();
        n->form = Form::RadialOriginLog;
        n->dim = dim;
        n->p0 = c0;
        n->p1 = a;
        return ExponentField(std::move(n));
    }

    static ExponentField radial_affine(double c, double slope, int dim) {
        check_dim(dim);
        if (!std::isfinite(c) || !std::isfinite(slope)) throw config_error("radial_affine parameters must be finite");
        auto n = std::make_shared<Node>();
        n->form = Form::RadialAffine;
        n->dim = dim;
        n->p0 = c;
        n->p1 = slope;
        return ExponentField(std::move(n));
    }

    static ExponentField piecewise_radial(std::vector<double> breakpoints, std::vector<ExponentField> pieces) {
        if (pieces.empty()) throw config_error("piecewise_radial: needs at least one piece");
        if (pieces.size() != breakpoints.size() + 1)
            throw config_error("piecewise_radial: pieces must be breakpoints+1");
        for (std::size_t i = 0; i < breakpoints.size(); ++i) {
            if (!(breakpoints[i] > 0) || !std::isfinite(breakpoints[i]))
                throw config_error("piecewise_radial: breakpoints must be positive and finite");
            if (i > 0 && !(breakpoints[i] > breakpoints[i - 1]))
                throw config_error("piecewise_radial: overlapping or unsorted breakpoints");
        }
        const int dim = pieces.front().dim();
        for (const auto& p : pieces)
            if (p.dim() != dim) throw config_error("piecewise_radial: pieces must share the dimension");
        auto n = std::make_shared<Node>();
        n->form = Form::Piecewise;
        n->dim = dim;
        n->breakpoints = std::move(breakpoints);
        n->pieces = std::move(pieces);
        return ExponentField(std::move(n));
    }

    int dim() const { return node().dim; }
    Form form() const { return node().form; }
    double ess_inf() const { return node().ess_inf; }
    double ess_sup() const { return node().ess_sup; }
    double value_at_origin() const { return node().at_origin; }
    bool has_radial_limit() const { return node().has_limit; }
    double limit_at_infinity() const {
        if (!node().has_limit) throw domain_error("ExponentField: no radial limit at infinity");
        return node().at_infinity;
    }
    /// True when ess_inf/ess_sup come from closed-form analysis (all base
    /// forms, and derived forms with a constant co-factor).
    bool exact_bounds() const { return node().exact_bounds; }

    double value_radial(double r) const {
        if (!(r >= 0)) throw domain_error("ExponentField: radius must be >= 0");
        return node().eval(r);
    }
    double value(const Vec& x) const { return value_radial(radius_of(x)); }

    std::vector<double> radial_breakpoints() const {
        std::vector<double> out;
        collect_breakpoints(node(), out);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    nlohmann::json descriptor() const;
    static ExponentField from_descriptor(const nlohmann::json& j);

    friend ExponentField conjugate(const ExponentField& q);
    friend ExponentField sobolev_exponent(const ExponentField& q1, const ExponentField& beta);
    friend ExponentField gamma_weight_exponent(const ExponentField& beta, double c_inf);

private:
    static void check_dim(int dim) {
        if (dim < 1 || dim > 3) throw config_error("dimension must be 1, 2 or 3");
    }

    static void collect_breakpoints(const Node& n, std::vector<double>& out) {
        switch (n.form) {
            case Form::Piecewise:
                for (double b : n.breakpoints) out.push_back(b);
                for (const auto& p : n.pieces) collect_breakpoints(p.node(), out);
                break;
            case Form::RadialOriginLog:
                out.push_back(1.0);
                break;
            case Form::Conjugate:
            case Form::GammaWeight:
                collect_breakpoints(*n.child_a, out);
                break;
            case Form::Sobolev:
                collect_breakpoints(*n.child_a, out);
                collect_breakpoints(*n.child_b, out);
                break;
            default:
                break;
        }
    }

    // Scan-based bounds for derived forms with two varying children. Uses the
    // default probe density plus origin/limit values, so the cached bounds are
    // probe-grid accurate rather than exact; exact_bounds() records that.
    static std::pair<double, double> scan_bounds(const Node& n, double lo, double hi) {
        double v_lo = std::max(lo, 1e-8), v_hi = std::min(hi, 1e6);
        double mn = inf, mx = -inf;
        auto consider = [&](double v) {
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        };
        if (v_hi > v_lo) {
            const ProbeGrid g = ProbeGrid::log_spaced(v_lo, v_hi, 512);
            for (double r : g.radii) consider(n.eval(r));
        } else {
            consider(n.eval(std::max(lo, 1e-8)));
        }
        if (lo == 0.0) consider(n.origin_value());
        if (hi == inf) {
            if (auto l = n.infinity_value()) consider(*l);
        }
        if (lo > 0 && std::isfinite(lo)) consider(n.eval(lo));
        if (std::isfinite(hi) && hi > 0) consider(n.eval(hi));
        return {mn, mx};
    }
};

inline double ExponentField::Node::eval(double r) const {
    switch (form) {
        case Form::Constant:
            return p0;
        case Form::RadialLog:
            return p0 + p1 / std::log(std::exp(1.0) + r);
        case Form::RadialOriginLog: {
            if (r >= 1.0) return p0 + p1 / std::log(std::exp(1.0) + 1.0);
            if (r == 0.0) return p0;
            return p0 + p1 / std::log(std::exp(1.0) + 1.0 / r);
        }
        case Form::RadialAffine:
            return p0 + p1 * r;
        case Form::Piecewise: {
            const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), r);
            const std::size_t idx = static_cast<std::size_t>(it - breakpoints.begin());
            return pieces[idx].value_radial(r);
        }
        case Form::Conjugate: {
            const double t = child_a->eval(r);
            return t / (t - 1.0);
        }
        case Form::Sobolev: {
            const double q1 = child_a->eval(r);
            const double b = child_b->eval(r);
            return 1.0 / (1.0 / q1 - b / dim);
        }
        case Form::GammaWeight: {
            const double b = child_a->eval(r);
            return c_inf * b * (1.0 - b / dim);
        }
    }
    throw domain_error("ExponentField: unknown form");
}

inline double ExponentField::Node::origin_value() const {
    switch (form) {
        case Form::Constant: return p0;
        case Form::RadialLog: return p0 + p1;  // ln(e) = 1
        case Form::RadialOriginLog: return p0;
        case Form::RadialAffine: return p0;
        case Form::Piecewise: return pieces.front().value_at_origin();
        case Form::Conjugate: {
            const double t = child_a->origin_value();
            return t / (t - 1.0);
        }
        case Form::Sobolev:
            return 1.0 / (1.0 / child_a->origin_value() - child_b->origin_value() / dim);
        case Form::GammaWeight: {
            const double b = child_a->origin_value();
            return c_inf * b * (1.0 - b / dim);
        }
    }
    throw domain_error("ExponentField: unknown form");
}

inline std::optional<double> ExponentField::Node::infinity_value() const {
    switch (form) {
        case Form::Constant: return p0;
        case Form::RadialLog: return p0;
        case Form::RadialOriginLog: return p0 + p1 / std::log(std::exp(1.0) + 1.0);
        case Form::RadialAffine:
            if (p1 == 0.0) return p0;
            return std::nullopt;
        case Form::Piecewise: {
            const auto& last = pieces.back();
            if (!last.has_radial_limit()) return std::nullopt;
            return last.limit_at_infinity();
        }
        case Form::Conjugate: {
            auto l = child_a->infinity_value();
            if (!l) return std::nullopt;
            return *l / (*l - 1.0);
        }
        case Form::Sobolev: {
            auto a = child_a->infinity_value();
            auto b = child_b->infinity_value();
            if (!a || !b) return std::nullopt;
            return 1.0 / (1.0 / *a - *b / dim);
        }
        case Form::GammaWeight: {
            auto b = child_a->infinity_value();
            if (!b) return std::nullopt;
            return c_inf * *b * (1.0 - *b / dim);
        }
    }
    throw domain_error("ExponentField: unknown form");
}

inline std::pair<double, double> ExponentField::Node::bounds_on(double lo, double hi) const {
    auto minmax2 = [](double a, double b) { return std::pair<double, double>{std::min(a, b), std::max(a, b)}; };
    switch (form) {
        case Form::Constant:
            return {p0, p0};
        case Form::RadialLog: {
            // monotone in r
            const double v_lo = lo == 0.0 ? p0 + p1 : eval(lo);
            const double v_hi = hi == inf ? p0 : eval(hi);
            return minmax2(v_lo, v_hi);
        }
        case Form::RadialOriginLog: {
            // monotone on (0,1), constant beyond: globally monotone
            const double v_lo = lo == 0.0 ? p0 : eval(lo);
            const double v_hi = hi == inf ? p0 + p1 / std::log(std::exp(1.0) + 1.0) : eval(hi);
            return minmax2(v_lo, v_hi);
        }
        case Form::RadialAffine: {
            const double v_lo = eval(lo);
            if (hi == inf) {
                if (p1 == 0.0) return {p0, p0};
                return p1 > 0 ? std::pair<double, double>{v_lo, inf} : std::pair<double, double>{-inf, v_lo};
            }
            return minmax2(v_lo, eval(hi));
        }
        case Form::Piecewise: {
            double mn = inf, mx = -inf;
            double prev = 0.0;
            for (std::size_t i = 0; i < pieces.size(); ++i) {
                const double edge = i < breakpoints.size() ? breakpoints[i] : inf;
                const double a = std::max(lo, prev), b = std::min(hi, edge);
                if (a < b || (a == b && a >= lo && a <= hi)) {
                    auto pb = pieces[i].node().bounds_on(a, b);
                    mn = std::min(mn, pb.first);
                    mx = std::max(mx, pb.second);
                }
                prev = edge;
            }
            return {mn, mx};
        }
        case Form::Conjugate: {
            auto cb = child_a->bounds_on(lo, hi);
            const double lo_c = cb.second == inf ? 1.0 : cb.second / (cb.second - 1.0);
            const double hi_c = cb.first / (cb.first - 1.0);
            return {lo_c, hi_c};
        }
        case Form::Sobolev: {
            if (child_b->form == Form::Constant) {
                auto qb = child_a->bounds_on(lo, hi);
                const double bc = child_b->p0;
                return {1.0 / (1.0 / qb.first - bc / dim), 1.0 / (1.0 / qb.second - bc / dim)};
            }
            if (child_a->form == Form::Constant) {
                auto bb = child_b->bounds_on(lo, hi);
                const double qc = child_a->p0;
                return {1.0 / (1.0 / qc - bb.first / dim), 1.0 / (1.0 / qc - bb.second / dim)};
            }
            return ExponentField::scan_bounds(*this, lo, hi);
        }
        case Form::GammaWeight: {
            // range of the parabola t -> c*t*(1-t/n) over beta's range
            auto bb = child_a->bounds_on(lo, hi);
            auto g = [&](double t) { return c_inf * t * (1.0 - t / dim); };
            double mn = std::min(g(bb.first), g(bb.second));
            double mx = std::max(g(bb.first), g(bb.second));
            const double vertex = dim / 2.0;
            if (bb.first <= vertex && vertex <= bb.second) mx = std::max(mx, g(vertex));
            return {mn, mx};
        }
    }
    throw domain_error("ExponentField: unknown form");
}

/// Pointwise conjugate q'(x) = q(x)/(q(x)-1). Requires 1 < ess inf and
/// ess sup < infinity; the cached bounds use the closed-form swap.
inline ExponentField conjugate(const ExponentField& q) {
    if (!(q.ess_inf() > 1.0))
        throw domain_error("conjugate: requires ess inf q > 1");
    if (!(q.ess_sup() < inf))
        throw domain_error("conjugate: requires ess sup q < infinity");
    auto n = std::make_shared<ExponentField::Node>();
    n->form = ExponentField::Form::Conjugate;
    n->dim = q.dim();
    n->child_a = q.n_;
    ExponentField out(std::move(n));
    return out;
}

namespace detail {
/// sup over R^n of q(x)*beta(x), with a witness radius. Exact when either
/// factor is constant; probe-grid otherwise.
inline std::pair<double, double> sup_product(const ExponentField& q, const ExponentField& beta) {
    if (beta.form() == ExponentField::Form::Constant) {
        const double c = beta.value_at_origin();
        return {c >= 0 ? c * q.ess_sup() : c * q.ess_inf(), inf};
    }
    if (q.form() == ExponentField::Form::Constant) {
        const double c = q.value_at_origin();
        return {c >= 0 ? c * beta.ess_sup() : c * beta.ess_inf(), inf};
    }
    double best = -inf, where = 0;
    for (double r : ProbeGrid::standard().radii) {
        const double v = q.value_radial(r) * beta.value_radial(r);
        if (v > best) { best = v; where = r; }
    }
    const double v0 = q.value_at_origin() * beta.value_at_origin();
    if (v0 > best) { best = v0; where = 0; }
    if (q.has_radial_limit() && beta.has_radial_limit()) {
        const double vi = q.limit_at_infinity() * beta.limit_at_infinity();
        if (vi > best) { best = vi; where = inf; }
    }
    return {best, where};
}
}  // namespace detail

/// Sobolev exponent: 1/q2(x) = 1/q1(x) - beta(x)/n.
inline ExponentField sobolev_exponent(const ExponentField& q1, const ExponentField& beta) {
    if (q1.dim() != beta.dim()) throw config_error("sobolev_exponent: dimension mismatch");
    if (!(beta.ess_inf() >= 0)) throw admissibility_error("sobolev_exponent: requires beta >= 0");
    const double sup_qb = detail::sup_product(q1, beta).first;
    if (!(sup_qb < q1.dim()))
        throw admissibility_error("sobolev_exponent: requires sup q1(x)*beta(x) < n");
    auto n = std::make_shared<ExponentField::Node>();
    n->form = ExponentField::Form::Sobolev;
    n->dim = q1.dim();
    n->child_a = q1.n_;
    n->child_b = beta.n_;
    n->exact_bounds = (q1.form() == ExponentField::Form::Constant) ||
                      (beta.form() == ExponentField::Form::Constant);
    ExponentField out(std::move(n));
    return out;
}

/// Weight exponent gamma(x) = c_inf * beta(x) * (1 - beta(x)/n); always
/// bounded by (n/4)*c_inf.
inline ExponentField gamma_weight_exponent(const ExponentField& beta, double c_inf) {
    if (!(c_inf >= 0)) throw domain_error("gamma_weight_exponent: requires c_inf >= 0");
    if (!(beta.ess_inf() >= 0) || !(beta.ess_sup() < beta.dim()))
        throw domain_error("gamma_weight_exponent: requires 0 <= beta(x) < n");
    auto n = std::make_shared<ExponentField::Node>();
    n->form = ExponentField::Form::GammaWeight;
    n->dim = beta.dim();
    n->c_inf = c_inf;
    n->child_a = beta.n_;
    n->exact_bounds = beta.exact_bounds();
    ExponentField out(std::move(n));
    return out;
}

// ---------------------------------------------------------------------------
// log-Hoelder estimates and admissibility reports

struct LogHolderEstimate {
    double constant = 0;      // smallest C (resp. C_inf) found over the grid
    double worst_radius = 0;  // probe achieving the supremum
    std::size_t grid_size = 0;
};

/// C from |q(x) - q(0)| <= C / ln(e + 1/|x|), maximized over the grid.
inline LogHolderEstimate estimate_log_holder_origin(const ExponentField& q, const ProbeGrid& grid) {
    if (grid.empty()) throw config_error("estimate_log_holder_origin: empty grid");
    if (!(grid.radii.front() <= 1e-8) || !(grid.radii.back() >= 1.0))
        throw config_error("estimate_log_holder_origin: grid must span [1e-8, 1]");
    const double q0 = q.value_at_origin();
    LogHolderEstimate est;
    est.grid_size = grid.radii.size();
    for (double r : grid.radii) {
        const double c = std::abs(q.value_radial(r) - q0) * std::log(std::exp(1.0) + 1.0 / r);
        if (c > est.constant) { est.constant = c; est.worst_radius = r; }
    }
    return est;
}

/// C_inf from |q(x) - q(inf)| <= C_inf / ln(e + |x|), maximized over the grid.
inline LogHolderEstimate estimate_log_holder_infinity(const ExponentField& q, const ProbeGrid& grid) {
    if (grid.empty()) throw config_error("estimate_log_holder_infinity: empty grid");
    if (!q.has_radial_limit()) throw domain_error("estimate_log_holder_infinity: field has no radial limit");
    if (!(grid.radii.front() <= 1.0) || !(grid.radii.back() >= 1e6))
        throw config_error("estimate_log_holder_infinity: grid must span [1, 1e6]");
    const double qi = q.limit_at_infinity();
    LogHolderEstimate est;
    est.grid_size = grid.radii.size();
    for (double r : grid.radii) {
        const double c = std::abs(q.value_radial(r) - qi) * std::log(std::exp(1.0) + r);
        if (c > est.constant) { est.constant = c; est.worst_radius = r; }
    }
    return est;
}

/// The three admissibility conditions on a variable order beta relative to an
/// exponent q1: ess inf beta > 0, sup q1(x)beta(x) < n, sup q1(inf)beta(x) < n.
struct BetaAdmissibility {
    bool beta_positive = false;
    double beta_inf = 0;
    bool sup_q_beta_ok = false;
    double sup_q_beta = 0;
    double sup_q_beta_radius = 0;
    bool sup_qinf_beta_ok = false;
    double sup_qinf_beta = 0;
    bool all() const { return beta_positive && sup_q_beta_ok && sup_qinf_beta_ok; }
};

inline BetaAdmissibility check_beta_admissible(const ExponentField& beta, const ExponentField& q1) {
    if (beta.dim() != q1.dim()) throw config_error("check_beta_admissible: dimension mismatch");
    const int n = beta.dim();
    BetaAdmissibility rep;
    rep.beta_inf = beta.ess_inf();
    rep.beta_positive = rep.beta_inf > 0;
    auto [sup_qb, where] = detail::sup_product(q1, beta);
    rep.sup_q_beta = sup_qb;
    rep.sup_q_beta_radius = where;
    rep.sup_q_beta_ok = sup_qb < n;
    if (q1.has_radial_limit()) {
        rep.sup_qinf_beta = q1.limit_at_infinity() * beta.ess_sup();
        rep.sup_qinf_beta_ok = rep.sup_qinf_beta < n;
    }
    return rep;
}

/// Checks 1 < q(inf) <= q(x) <= ess sup q < infinity (the minimal-at-infinity
/// condition); the pointwise comparison tolerates 1e-12 of rounding.
struct MinimalAtInfinityReport {
    bool ok = false;
    bool limit_gt_one = false;
    bool bounded = false;
    double limit = 0;
    double worst_gap = 0;     // most negative value of q(x) - q(inf) found
    double worst_radius = 0;
};

inline MinimalAtInfinityReport check_minimal_at_infinity(const ExponentField& q, const ProbeGrid& grid) {
    if (!q.has_radial_limit()) throw domain_error("check_minimal_at_infinity: field has no radial limit");
    MinimalAtInfinityReport rep;
    rep.limit = q.limit_at_infinity();
    rep.limit_gt_one = rep.limit > 1.0;
    rep.bounded = q.ess_sup() < inf;
    bool pointwise = true;
    for (double r : grid.radii) {
        const double gap = q.value_radial(r) - rep.limit;
        if (gap < rep.worst_gap) { rep.worst_gap = gap; rep.worst_radius = r; }
        if (gap < -1e-12) pointwise = false;
    }
    rep.ok = rep.limit_gt_one && rep.bounded && pointwise;
    return rep;
}

// ---------------------------------------------------------------------------
// JSON descriptors

inline nlohmann::json ExponentField::descriptor() const {
    const Node& n = node();
    nlohmann::json j;
    auto wrap = [](std::shared_ptr<const Node> p) {
        ExponentField f;
        f.n_ = std::move(p);
        return f;
    };
    switch (n.form) {
        case Form::Constant:
            j = {{"form", "constant"}, {"c", n.p0}, {"n", n.dim}};
            break;
        case Form::RadialLog:
            j = {{"form", "radial_log"}, {"c_inf", n.p0}, {"a", n.p1}, {"n", n.dim}};
            break;
        case Form::RadialOriginLog:
            j = {{"form", "radial_origin_log"}, {"c0", n.p0}, {"a", n.p1}, {"n", n.dim}};
            break;
        case Form::RadialAffine:
            j = {{"form", "radial_affine"}, {"c", n.p0}, {"slope", n.p1}, {"n", n.dim}};
            break;
        case Form::Piecewise: {
            j["form"] = "piecewise_radial";
            j["n"] = n.dim;
            j["breakpoints"] = n.breakpoints;
            nlohmann::json pcs = nlohmann::json::array();
            for (const auto& p : n.pieces) pcs.push_back(p.descriptor());
            j["pieces"] = std::move(pcs);
            break;
        }
        case Form::Conjugate:
            j["form"] = "conjugate";
            j["of"] = wrap(n.child_a).descriptor();
            break;
        case Form::Sobolev:
            j["form"] = "sobolev";
            j["q1"] = wrap(n.child_a).descriptor();
            j["beta"] = wrap(n.child_b).descriptor();
            break;
        case Form::GammaWeight:
            j["form"] = "gamma_weight";
            j["beta"] = wrap(n.child_a).descriptor();
            j["c_inf"] = n.c_inf;
            break;
    }
    return j;
}

inline ExponentField ExponentField::from_descriptor(const nlohmann::json& j) {
    using detail::check_keys;
    using detail::get_int;
    using detail::get_number;
    using detail::get_string;
    const std::string path = "exponent";
    detail::require_object(j, path);
    if (!j.contains("form")) throw config_error(path + ": missing required field 'form'");
    const std::string form = get_string(j, path, "form");
    if (form == "constant") {
        check_keys(j, path, {"form", "c", "n"});
        return constant(get_number(j, path, "c"), get_int(j, path, "n"));
    }
    if (form == "radial_log") {
        check_keys(j, path, {"form", "c_inf", "a", "n"});
        return radial_log(get_number(j, path, "c_inf"), get_number(j, path, "a"), get_int(j, path, "n"));
    }
    if (form == "radial_origin_log") {
        check_keys(j, path, {"form", "c0", "a", "n"});
        return radial_origin_log(get_number(j, path, "c0"), get_number(j, path, "a"), get_int(j, path, "n"));
    }
    if (form == "radial_affine") {
        check_keys(j, path, {"form", "c", "slope", "n"});
        return radial_affine(get_number(j, path, "c"), get_number(j, path, "slope"), get_int(j, path, "n"));
    }
    if (form == "piecewise_radial") {
        check_keys(j, path, {"form", "n", "breakpoints", "pieces"});
        if (!j.at("breakpoints").is_array() || !j.at("pieces").is_array())
            throw config_error(path + ": breakpoints and pieces must be arrays");
        std::vector<double> bps;
        for (const auto& b : j.at("breakpoints")) {
            if (!b.is_number()) throw config_error(path + ".breakpoints entries must be numbers");
            bps.push_back(b.get<double>());
        }
        std::vector<ExponentField> pieces;
        const int n = get_int(j, path, "n");
        for (const auto& p : j.at("pieces")) {
            ExponentField f = from_descriptor(p);
            if (f.dim() != n) throw config_error(path + ": piece dimension differs from outer 'n'");
            pieces.push_back(std::move(f));
        }
        return piecewise_radial(std::move(bps), std::move(pieces));
    }
    if (form == "conjugate") {
        check_keys(j, path, {"form", "of"});
        return conjugate(from_descriptor(j.at("of")));
    }
    if (form == "sobolev") {
        check_keys(j, path, {"form", "q1", "beta"});
        return sobolev_exponent(from_descriptor(j.at("q1")), from_descriptor(j.at("beta")));
    }
    if (form == "gamma_weight") {
        check_keys(j, path, {"form", "beta", "c_inf"});
        return gamma_weight_exponent(from_descriptor(j.at("beta")), get_number(j, path, "c_inf"));
    }
    throw config_error(path + ": unknown form '" + form + "'");
}

}  // namespace vex

#pragma once

// Luxemburg norms, weighted norms, dyadic block norms and the Herz-Morrey
// norm in its defining form (variable factor 2^{k alpha(.)} inside the block
// norm) and its split form (scalar factors 2^{k alpha(0)} / 2^{k alpha_inf}
// outside). The Luxemburg value is found by bracket doubling followed by
// bisection on the strictly decreasing map eta -> F_q(f/eta).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vex/common.hpp"
#include "vex/exponent.hpp"
#include "vex/quad.hpp"
#include "vex/test_function.hpp"

namespace vex {

struct NormMeta {
    int bracket_doublings = 0;
    int bisection_iterations = 0;
    double modular_residual = 0;  // |F_q(f/eta*) - 1|
    long panels = 0;
    int k_lo = 0, k_hi = 0;       // dyadic block range actually summed (Herz-Morrey)
    double tail_bound = 0;        // certified effect of blocks outside the window

    nlohmann::json to_json() const {
        return {{"bracket_doublings", bracket_doublings},
                {"bisection_iterations", bisection_iterations},
                {"modular_residual", modular_residual},
                {"panels", panels},
                {"k_lo", k_lo},
                {"k_hi", k_hi},
                {"tail_bound", tail_bound}};
    }
};

struct NormValue {
    double value = 0;
    double err_estimate = 0;
    NormMeta meta;

    nlohmann::json to_json() const {
        return {{"value", value}, {"err_estimate", err_estimate}, {"meta", meta.to_json()}};
    }
};

namespace detail {

inline Integrand with_exponent_breakpoints(Integrand g, const ExponentField& q) {
    std::vector<double> bps = g.breakpoints();
    for (double b : q.radial_breakpoints()) bps.push_back(b);
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
    return g.with_breakpoints(std::move(bps));
}

inline IntegralValue modular_scaled(const Integrand& g, const ExponentField& q, double eta,
                                    const QuadratureSpec& spec,
                                    std::optional<std::pair<double, double>> domain) {
    Integrand powered = g.transformed([&q, eta](double v, double r) {
        const double av = std::abs(v) / eta;
        if (av == 0.0) return 0.0;
        const double w = std::pow(av, q.value_radial(r));
        return std::min(w, 1e280);  // saturate far-off brackets instead of overflowing
    });
    return integrate_window(powered, spec, domain);
}

}  // namespace detail

/// Luxemburg norm of a general radial integrand (operator images included).
/// `domain` optionally restricts to a radial interval, which is how block
/// norms are computed.
inline NormValue luxemburg_norm_field(const Integrand& g, const ExponentField& q,
                                      const QuadratureSpec& spec,
                                      std::optional<std::pair<double, double>> domain = std::nullopt) {
    spec.validate();
    NormValue out;
    double lo_r = g.support_lo(), hi_r = g.support_hi();
    if (domain) {
        lo_r = std::max(lo_r, domain->first);
        hi_r = std::min(hi_r, domain->second);
    }
    if (!(hi_r > lo_r)) return out;  // empty support: zero norm, exactly

    const Integrand gb = detail::with_exponent_breakpoints(g, q);
    long panels = 0;
    auto modular_at = [&](double eta) {
        IntegralValue m = detail::modular_scaled(gb, q, eta, spec, domain);
        panels += m.panels_used;
        return m;
    };

    // bracket: eta_lo has F >= 1, eta_hi has F <= 1
    double eta = 1.0;
    IntegralValue F = modular_at(eta);
    int doublings = 0;
    double eta_lo = eta, eta_hi = eta;
    if (F.value >= 1.0) {
        while (F.value > 1.0) {
            if (++doublings > 200) throw divergence_error("luxemburg_norm: bracket not found (norm diverges)");
            eta_lo = eta;
            eta *= 2.0;
            F = modular_at(eta);
        }
        eta_hi = eta;
    } else {
        while (F.value < 1.0) {
            if (++doublings > 200) {
                if (F.value == 0.0) return out;  // vanishes a.e. on the domain
                throw divergence_error("luxemburg_norm: bracket not found");
            }
            eta_hi = eta;
            eta /= 2.0;
            F = modular_at(eta);
            if (F.value == 0.0 && eta < 1e-200) return out;
        }
        eta_lo = eta;
    }

    // bisection in log(eta); strictly decreasing modular makes this safe
    int iters = 0;
    double residual = std::abs(F.value - 1.0);
    double best_eta = eta, best_res = residual;
    double modular_err = F.err_estimate;
    while (eta_hi / eta_lo > 1.0 + 1e-12 && iters < 300) {
        ++iters;
        const double mid = std::sqrt(eta_lo * eta_hi);
        F = modular_at(mid);
        const double res = std::abs(F.value - 1.0);
        if (res < best_res) {
            best_res = res;
            best_eta = mid;
            modular_err = F.err_estimate;
        }
        if (F.value >= 1.0) {
            eta_lo = mid;
        } else {
            eta_hi = mid;
        }
        if (res <= 1e-8 && eta_hi / eta_lo < 1.0 + 1e-10) break;
    }

    out.value = best_eta;
    const double q_lo = std::max(q.ess_inf(), 1.0);
    out.err_estimate = best_eta * ((best_res + modular_err) / q_lo + 1e-12);
    out.meta.bracket_doublings = doublings;
    out.meta.bisection_iterations = iters;
    out.meta.modular_residual = best_res;
    out.meta.panels = panels;
    return out;
}

inline NormValue luxemburg_norm(const TestFunction& f, const ExponentField& q,
                                const QuadratureSpec& spec) {
    if (f.dim() != q.dim()) throw config_error("luxemburg_norm: dimension mismatch");
    if (f.is_zero()) return {};
    return luxemburg_norm_field(f.integrand(), q, spec);
}

/// Radial weight (1+|x|)^{-gamma(x)} as a multiplier.
inline std::function<double(double)> power_weight(const ExponentField& gamma) {
    return [gamma](double r) { return std::pow(1.0 + r, -gamma.value_radial(r)); };
}

inline NormValue weighted_norm_field(const Integrand& g, const ExponentField& gamma,
                                     const ExponentField& q, const QuadratureSpec& spec) {
    if (!(gamma.ess_inf() >= 0)) throw domain_error("weighted_norm: requires gamma >= 0");
    return luxemburg_norm_field(g.multiplied(power_weight(gamma)), q, spec);
}

inline NormValue weighted_norm(const TestFunction& f, const ExponentField& gamma,
                               const ExponentField& q, const QuadratureSpec& spec) {
    if (f.dim() != q.dim() || gamma.dim() != q.dim()) throw config_error("weighted_norm: dimension mismatch");
    if (f.is_zero()) return {};
    return weighted_norm_field(f.integrand(), gamma, q, spec);
}

/// Block norms ||f . chi_k|| for every candidate k in the support-intersected
/// dyadic window. Blocks outside the exact support are skipped without
/// quadrature.
inline std::vector<std::pair<int, NormValue>> block_norms(const TestFunction& f, const ExponentField& q,
                                                          const QuadratureSpec& spec) {
    spec.validate();
    std::vector<std::pair<int, NormValue>> out;
    if (f.is_zero()) return out;
    const Integrand g = f.integrand();
    for (int k = spec.k_min; k <= spec.k_max; ++k) {
        if (!f.intersects_annulus(k)) continue;
        out.emplace_back(k, luxemburg_norm_field(g, q, spec,
                                                 std::make_pair(dyadic_radius(k - 1), dyadic_radius(k))));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Herz-Morrey norms

namespace detail {

struct BlockSeq {
    std::vector<int> k;        // ascending
    std::vector<double> b;     // block values
    std::vector<double> berr;  // block error estimates
};

/// sup_{k0} 2^{-k0 lambda} (sum_{k<=k0} a_k^p)^{1/p} over the window, with
/// edge screens: decide divergence or bound the tails geometrically.
struct WindowedSup {
    double value = 0;
    double value_hi = 0;   // with block errors added
    double tail_bound = 0;
    int argmax_k0 = 0;
};

inline WindowedSup mk_sup(const BlockSeq& s, double lambda, double p, bool support_below_window,
                          bool support_above_window) {
    WindowedSup out;
    if (s.k.empty()) return out;
    double S = 0, S_hi = 0;
    for (std::size_t i = 0; i < s.k.size(); ++i) {
        S += std::pow(s.b[i], p);
        S_hi += std::pow(s.b[i] + s.berr[i], p);
        const double cand = std::exp2(-s.k[i] * lambda) * std::pow(S, 1.0 / p);
        if (cand > out.value) {
            out.value = cand;
            out.argmax_k0 = s.k[i];
        }
        out.value_hi = std::max(out.value_hi, std::exp2(-s.k[i] * lambda) * std::pow(S_hi, 1.0 / p));
    }

    const std::size_t m = s.k.size();
    // blocks escaping below the window: they enter every cumulative sum and
    // provide their own sup candidates 2^{-k0 lambda} S(k0)^{1/p}
    if (support_below_window && m >= 2 && s.b[0] > 0) {
        const double rho = s.b[0] / std::max(s.b[1], 1e-300);
        if (!(rho * std::exp2(lambda) < 0.999))
            throw divergence_error("herz_morrey_norm: block sums do not decay toward the origin");
        const double tail_p = std::pow(s.b[0], p) * std::pow(rho, p) / (1.0 - std::pow(rho, p));
        const double bumped = std::exp2(-out.argmax_k0 * lambda) * std::pow(S + tail_p, 1.0 / p);
        const double below_cand = std::exp2(-(s.k[0] - 1) * lambda) *
                                  std::pow(tail_p / std::max(1.0 - std::pow(rho * std::exp2(lambda), p), 1e-12),
                                           1.0 / p);
        out.tail_bound += std::max(0.0, bumped - out.value) + std::max(0.0, below_cand - out.value);
    }
    // blocks escaping above the window
    if (support_above_window && m >= 2 && s.b[m - 1] > 0) {
        const double rho = s.b[m - 1] / std::max(s.b[m - 2], 1e-300);
        const double rho_eff = rho * std::exp2(-lambda);
        if (!(rho_eff < 0.999)) {
            if (lambda == 0.0)
                throw divergence_error("herz_morrey_norm: blocks not summable (lambda = 0)");
            throw truncation_error("herz_morrey_norm: block growth outruns the dyadic window", -1);
        }
        const double tail_p = std::pow(s.b[m - 1], p) * std::pow(rho, p) / std::max(1.0 - std::pow(rho, p), 1e-12);
        const double cand = std::exp2(-s.k[m - 1] * lambda) * std::pow(S + tail_p, 1.0 / p);
        out.tail_bound += std::max(0.0, cand - out.value);
    }
    out.value_hi += out.tail_bound;
    return out;
}

}  // namespace detail

/// Herz-Morrey norm of a radial integrand:
///   sup_{k0} 2^{-k0 lambda} ( sum_{k <= k0} || 2^{k alpha(.)} g chi_k ||_{L^{q(.)}}^p )^{1/p}
/// The factor 2^{k alpha(.)} is a variable multiplier inside the block norm.
inline NormValue herz_morrey_norm_field(const Integrand& g, const ExponentField& alpha, double lambda,
                                        double p, const ExponentField& q, const QuadratureSpec& spec) {
    spec.validate();
    if (!(lambda >= 0)) throw config_error("herz_morrey_norm: requires lambda >= 0");
    if (!(p > 0)) throw config_error("herz_morrey_norm: requires p > 0");
    if (!(std::abs(alpha.ess_inf()) < inf) || !(std::abs(alpha.ess_sup()) < inf))
        throw config_error("herz_morrey_norm: alpha must be essentially bounded");

    detail::BlockSeq seq;
    long panels = 0;
    for (int k = spec.k_min; k <= spec.k_max; ++k) {
        const double a = dyadic_radius(k - 1), b = dyadic_radius(k);
        if (g.support_hi() <= a || g.support_lo() >= b) continue;
        const int kk = k;
        Integrand gk = g.multiplied([&alpha, kk](double r) { return std::exp2(kk * alpha.value_radial(r)); });
        NormValue nb = luxemburg_norm_field(gk, q, spec, std::make_pair(a, b));
        panels += nb.meta.panels;
        seq.k.push_back(k);
        seq.b.push_back(nb.value);
        seq.berr.push_back(nb.err_estimate);
    }

    NormValue out;
    if (seq.k.empty()) return out;
    const bool below = g.support_lo() < dyadic_radius(spec.k_min - 1);
    const bool above = g.support_hi() > dyadic_radius(spec.k_max);
    detail::WindowedSup sup = detail::mk_sup(seq, lambda, p, below, above);
    out.value = sup.value;
    out.err_estimate = std::max(0.0, sup.value_hi - sup.value);
    out.meta.k_lo = seq.k.front();
    out.meta.k_hi = seq.k.back();
    out.meta.tail_bound = sup.tail_bound;
    out.meta.panels = panels;
    return out;
}

inline NormValue herz_morrey_norm(const TestFunction& f, const ExponentField& alpha, double lambda,
                                  double p, const ExponentField& q, const QuadratureSpec& spec) {
    if (f.dim() != q.dim() || alpha.dim() != q.dim())
        throw config_error("herz_morrey_norm: dimension mismatch");
    if (f.is_zero()) return {};
    return herz_morrey_norm_field(f.integrand(), alpha, lambda, p, q, spec);
}

/// Split (equivalent) form: scalar factors 2^{k alpha(0)} for k < 0 and
/// 2^{k alpha_inf} for k >= 0 applied outside the block norms, and the
/// max of the two branch suprema.
inline NormValue herz_morrey_norm_split_field(const Integrand& g, const ExponentField& alpha,
                                              double lambda, double p, const ExponentField& q,
                                              const QuadratureSpec& spec) {
    spec.validate();
    if (!(lambda >= 0)) throw config_error("herz_morrey_norm_split: requires lambda >= 0");
    if (!(p > 0)) throw config_error("herz_morrey_norm_split: requires p > 0");
    if (!alpha.has_radial_limit())
        throw domain_error("herz_morrey_norm_split: alpha needs a radial limit at infinity");
    const double a0 = alpha.value_at_origin();
    const double ai = alpha.limit_at_infinity();

    std::vector<int> ks;
    std::vector<double> bv, be;
    long panels = 0;
    for (int k = spec.k_min; k <= spec.k_max; ++k) {
        const double a = dyadic_radius(k - 1), b = dyadic_radius(k);
        if (g.support_hi() <= a || g.support_lo() >= b) continue;
        NormValue nb = luxemburg_norm_field(g, q, spec, std::make_pair(a, b));
        panels += nb.meta.panels;
        ks.push_back(k);
        bv.push_back(nb.value);
        be.push_back(nb.err_estimate);
    }
    NormValue out;
    if (ks.empty()) return out;

    const bool below = g.support_lo() < dyadic_radius(spec.k_min - 1);
    const bool above = g.support_hi() > dyadic_radius(spec.k_max);

    // branch 1: sup_{k0 < 0} with scalar factor 2^{k alpha(0)}
    detail::BlockSeq neg;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (ks[i] >= 0) break;
        neg.k.push_back(ks[i]);
        neg.b.push_back(std::exp2(ks[i] * a0) * bv[i]);
        neg.berr.push_back(std::exp2(ks[i] * a0) * be[i]);
    }
    detail::WindowedSup b1 = detail::mk_sup(neg, lambda, p, below, false);

    // branch 2: sup_{k0 >= 0} of 2^{-k0 lambda} [ (sum_{k<=-1} 2^{k a0 p} b^p)^{1/p}
    //                                            + (sum_{0<=k<=k0} 2^{k ai p} b^p)^{1/p} ]
    double neg_sum_p = 0, neg_sum_p_hi = 0;
    for (std::size_t i = 0; i < neg.k.size(); ++i) {
        neg_sum_p += std::pow(neg.b[i], p);
        neg_sum_p_hi += std::pow(neg.b[i] + neg.berr[i], p);
    }
    double neg_tail_p = 0;
    if (below && neg.k.size() >= 2 && neg.b[0] > 0) {
        const double rho = neg.b[0] / std::max(neg.b[1], 1e-300);
        if (!(rho * std::exp2(lambda) < 0.999))
            throw divergence_error("herz_morrey_norm_split: block sums do not decay toward the origin");
        neg_tail_p = std::pow(neg.b[0], p) * std::pow(rho, p) / (1.0 - std::pow(rho, p));
    }

    double b2 = 0, b2_hi = 0;
    {
        double S = 0, S_hi = 0;
        std::vector<std::pair<int, std::size_t>> pos;  // (k, index)
        for (std::size_t i = 0; i < ks.size(); ++i)
            if (ks[i] >= 0) pos.emplace_back(ks[i], i);
        const double neg_part = std::pow(neg_sum_p, 1.0 / p);
        const double neg_part_hi = std::pow(neg_sum_p_hi + neg_tail_p, 1.0 / p);
        b2 = neg_part;  // k0 = 0 candidate (second sum possibly empty)
        b2_hi = neg_part_hi;
        double last = 0, prev = 0;
        for (std::size_t idx = 0; idx < pos.size(); ++idx) {
            auto [k, i] = pos[idx];
            const double a_k = std::exp2(k * ai) * bv[i];
            prev = last;
            last = a_k;
            S += std::pow(a_k, p);
            S_hi += std::pow(std::exp2(k * ai) * (bv[i] + be[i]), p);
            const double damp = std::exp2(-k * lambda);
            b2 = std::max(b2, damp * (std::pow(S, 1.0 / p) + neg_part));
            b2_hi = std::max(b2_hi, damp * (std::pow(S_hi, 1.0 / p) + neg_part_hi));
        }
        if (above && pos.size() >= 2 && last > 0) {
            const double rho = last / std::max(prev, 1e-300);
            const double rho_eff = rho * std::exp2(-lambda);
            if (!(rho_eff < 0.999)) {
                if (lambda == 0.0)
                    throw divergence_error("herz_morrey_norm_split: blocks not summable (lambda = 0)");
                throw truncation_error("herz_morrey_norm_split: block growth outruns the dyadic window", -1);
            }
            const double tail_p = std::pow(last, p) * std::pow(rho, p) / std::max(1.0 - std::pow(rho, p), 1e-12);
            const double cand = std::exp2(-pos.back().first * lambda) *
                                (std::pow(S + tail_p, 1.0 / p) + neg_part);
            b2_hi = std::max(b2_hi, cand);
        }
    }

    out.value = std::max(b1.value, b2);
    out.err_estimate = std::max(0.0, std::max(b1.value_hi, b2_hi) - out.value);
    out.meta.k_lo = ks.front();
    out.meta.k_hi = ks.back();
    out.meta.tail_bound = b1.tail_bound;
    out.meta.panels = panels;
    return out;
}

inline NormValue herz_morrey_norm_split(const TestFunction& f, const ExponentField& alpha, double lambda,
                                        double p, const ExponentField& q, const QuadratureSpec& spec) {
    if (f.dim() != q.dim() || alpha.dim() != q.dim())
        throw config_error("herz_morrey_norm_split: dimension mismatch");
    if (f.is_zero()) return {};
    return herz_morrey_norm_split_field(f.integrand(), alpha, lambda, p, q, spec);
}

/// Memoize a radial integrand on its evaluation radii. The adaptive panels
/// revisit the same nodes across Luxemburg bisection steps, so expensive
/// evaluators (nested operator quadrature) should be wrapped in this.
inline Integrand memoized(const Integrand& g) {
    if (!g.is_radial()) return g;
    auto cache = std::make_shared<std::unordered_map<std::uint64_t, double>>();
    return Integrand::radial(g.dim(),
                             [g, cache](double r) {
                                 std::uint64_t key;
                                 static_assert(sizeof(key) == sizeof(r));
                                 std::memcpy(&key, &r, sizeof(key));
                                 auto it = cache->find(key);
                                 if (it != cache->end()) return it->second;
                                 const double v = g.profile(r, 1);
                                 cache->emplace(key, v);
                                 return v;
                             })
        .with_breakpoints(g.breakpoints())
        .with_singularities(g.singularities())
        .with_support(g.support_lo(), g.support_hi());
}

}  // namespace vex

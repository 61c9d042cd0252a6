#pragma once

// Shared scaffolding: error types, dyadic geometry, probe grids.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vex {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double inf = std::numeric_limits<double>::infinity();

/// Base class of every error thrown by this library.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed descriptor, invalid quadrature spec, or invalid experiment config.
class config_error : public error {
public:
    using error::error;
};

/// Operation applied outside its mathematical domain.
class domain_error : public error {
public:
    using error::error;
};

/// A stated admissibility precondition fails.
class admissibility_error : public error {
public:
    using error::error;
};

/// Adaptive quadrature could not meet its tolerance within the panel budget.
/// Carries the best available estimate.
class quadrature_error : public error {
public:
    quadrature_error(const std::string& what, double best, double err, long panels)
        : error(what), best_value(best), err_estimate(err), panels_used(panels) {}
    double best_value;
    double err_estimate;
    long panels_used;
};

/// A tail beyond the dyadic window cannot be certified at the requested tolerance.
class truncation_error : public error {
public:
    truncation_error(const std::string& what, int required_k_max)
        : error(what), required_k_max(required_k_max) {}
    int required_k_max;  // -1 when the tail looks outright divergent
};

/// A quantity diverges (Luxemburg bracket not found, non-summable block sums).
class divergence_error : public error {
public:
    using error::error;
};

/// 2^k, exact.
inline double dyadic_radius(int k) { return std::ldexp(1.0, k); }

inline bool is_power_of_two(double r) {
    int e = 0;
    return r > 0 && std::frexp(r, &e) == 0.5;
}

/// Index k of the dyadic annulus A_k = {2^{k-1} < |x| <= 2^k} containing radius r > 0.
inline int annulus_index(double r) {
    if (!(r > 0) || !std::isfinite(r)) throw domain_error("annulus_index: radius must be positive and finite");
    int e = 0;
    double m = std::frexp(r, &e);  // r = m * 2^e, m in [0.5, 1)
    return m == 0.5 ? e - 1 : e;
}

/// Measure of the unit sphere S^{n-1}; supported dimensions 1..3.
inline double sphere_measure(int dim) {
    switch (dim) {
        case 1: return 2.0;
        case 2: return 2.0 * pi;
        case 3: return 4.0 * pi;
        default: throw domain_error("sphere_measure: dimension must be 1, 2 or 3");
    }
}

inline double ball_volume(int dim, double r) {
    return sphere_measure(dim) / dim * std::pow(r, dim);
}

inline double annulus_measure(int dim, int k) {
    return ball_volume(dim, dyadic_radius(k)) - ball_volume(dim, dyadic_radius(k - 1));
}

/// Logarithmically spaced radii used by admissibility checks and weight scans.
struct ProbeGrid {
    std::vector<double> radii;  // ascending, all positive

    static ProbeGrid log_spaced(double r_lo, double r_hi, int per_decade = 512) {
        if (!(r_lo > 0) || !(r_hi > r_lo)) throw config_error("ProbeGrid: need 0 < r_lo < r_hi");
        if (per_decade < 1) throw config_error("ProbeGrid: per_decade must be positive");
        const double decades = std::log10(r_hi / r_lo);
        const std::size_t m = static_cast<std::size_t>(std::ceil(per_decade * decades)) + 1;
        ProbeGrid g;
        g.radii.reserve(m);
        for (std::size_t i = 0; i < m; ++i) {
            double t = static_cast<double>(i) / static_cast<double>(m - 1);
            g.radii.push_back(r_lo * std::pow(r_hi / r_lo, t));
        }
        g.radii.back() = r_hi;
        return g;
    }

    // Default probe range covering both log-Hoelder regimes.
    static ProbeGrid standard(int per_decade = 512) { return log_spaced(1e-8, 1e6, per_decade); }

    ProbeGrid refined(int factor) const {
        if (factor < 2) return *this;
        ProbeGrid g;
        g.radii.reserve(radii.size() * factor);
        for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
            for (int j = 0; j < factor; ++j) {
                double t = static_cast<double>(j) / factor;
                g.radii.push_back(radii[i] * std::pow(radii[i + 1] / radii[i], t));
            }
        }
        g.radii.push_back(radii.back());
        return g;
    }

    bool empty() const { return radii.empty(); }
};

}  // namespace vex

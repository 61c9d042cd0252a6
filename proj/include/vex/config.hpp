#pragma once

// Experiment configuration: strict JSON schema (unknown fields rejected,
// explicit version), dotted-path overrides, and the dispatcher that executes
// a validated config and serializes its report.

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vex/common.hpp"
#include "vex/exponent.hpp"
#include "vex/json_util.hpp"
#include "vex/norms.hpp"
#include "vex/operators.hpp"
#include "vex/quad.hpp"
#include "vex/test_function.hpp"
#include "vex/verify.hpp"

namespace vex {

inline constexpr const char* config_version = "1";

struct CatalogEntry {
    std::string id;
    std::string anchor;  // one-line description of the claim it exercises
};

/// Stable (lexicographic) experiment catalog.
inline std::vector<CatalogEntry> list_experiments() {
    return {
        {"block_estimate_check",
         "per-annulus weighted operator norm against damped dyadic block sums"},
        {"case_estimate_check",
         "single-block Lebesgue norm against the damped Herz-Morrey norm"},
        {"holder_check",
         "generalized Hoelder inequality on variable-exponent Lebesgue spaces"},
        {"lemma2_delta_fit",
         "shrinking-exponent fit for nested ball indicator norm ratios"},
        {"lemma2_duality_check",
         "normalized duality products of ball indicators"},
        {"norm",
         "direct norm computation (luxemburg | weighted | herz_morrey | herz_morrey_split)"},
        {"operator",
         "pointwise operator evaluation (hardy | hardy_star | riesz)"},
        {"theorem_ratio",
         "weighted operator boundedness: norm-ratio stabilization over structured families"},
        {"weight_equivalence_check",
         "power-log weight against its limit-exponent form"},
    };
}

namespace detail {

inline QuadratureSpec spec_from_json(const json& j, const std::string& path) {
    QuadratureSpec s;
    if (j.is_null()) return s;
    check_keys(j, path, {}, {"rel_tol", "max_subdivisions", "dyadic_window", "angular_points"});
    if (j.contains("rel_tol")) s.rel_tol = get_number(j, path, "rel_tol");
    if (j.contains("max_subdivisions")) s.max_subdivisions = j.at("max_subdivisions").get<long>();
    if (j.contains("dyadic_window")) {
        const auto& w = j.at("dyadic_window");
        if (!w.is_array() || w.size() != 2) throw config_error(path + ".dyadic_window must be [k_min, k_max]");
        s.k_min = w[0].get<int>();
        s.k_max = w[1].get<int>();
    }
    if (j.contains("angular_points")) s.angular_points = get_int(j, path, "angular_points");
    s.validate();
    return s;
}

inline std::vector<std::pair<TestFunction, TestFunction>> pairs_from_json(const json& inputs,
                                                                          std::uint64_t& seed_out) {
    std::vector<std::pair<TestFunction, TestFunction>> pairs;
    if (inputs.contains("pairs")) {
        const auto& pj = inputs.at("pairs");
        check_keys(pj, "inputs.pairs", {"count", "seed", "dim"},
                   {"min_terms", "max_terms", "index_lo", "index_hi", "coeff_lo", "coeff_hi",
                    "allow_powers", "allow_gaussian", "signed_coeffs"});
        FamilySpec gen_f = FamilySpec::from_json(
            [&] {
                json g = pj;
                g["kind"] = "random_combinations";
                return g;
            }(),
            "inputs.pairs");
        FamilySpec gen_g = gen_f;
        gen_g.seed = gen_f.seed + 0x9e3779b97f4a7c15ull;  // independent stream, derived deterministically
        seed_out = gen_f.seed;
        auto fs = gen_f.generate();
        auto gs = gen_g.generate();
        for (std::size_t i = 0; i < fs.size(); ++i) pairs.emplace_back(fs[i].second, gs[i].second);
    }
    if (inputs.contains("explicit_pairs")) {
        const auto& e = inputs.at("explicit_pairs");
        if (!e.is_array()) throw config_error("inputs.explicit_pairs must be an array of [f, g]");
        for (const auto& fg : e) {
            if (!fg.is_array() || fg.size() != 2)
                throw config_error("inputs.explicit_pairs entries must be [f, g]");
            pairs.emplace_back(TestFunction::from_descriptor(fg[0]), TestFunction::from_descriptor(fg[1]));
        }
    }
    if (pairs.empty()) throw config_error("inputs: holder_check needs 'pairs' or 'explicit_pairs'");
    return pairs;
}

}  // namespace detail

/// Parse and apply one `key=value` override with a dotted path.
inline void apply_override(nlohmann::json& cfg, const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw config_error("override must look like path.to.key=value");
    std::string path = kv.substr(0, eq);
    const std::string raw = kv.substr(eq + 1);
    std::string ptr = "/";
    for (char c : path) ptr += (c == '.') ? '/' : c;
    nlohmann::json value;
    try {
        value = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::parse_error&) {
        value = raw;  // plain string
    }
    cfg[nlohmann::json::json_pointer(ptr)] = value;
}

/// Validate the envelope: version, experiment id, inputs object, output spec.
inline void validate_envelope(const nlohmann::json& cfg) {
    detail::check_keys(cfg, "config", {"version", "experiment", "inputs"}, {"output"});
    const std::string version = detail::get_string(cfg, "config", "version");
    if (version != config_version)
        throw config_error("config.version mismatch: expected '" + std::string(config_version) + "', got '" +
                           version + "'");
    const std::string id = detail::get_string(cfg, "config", "experiment");
    bool known = false;
    for (const auto& e : list_experiments())
        if (e.id == id) known = true;
    if (!known) throw config_error("config.experiment: unknown experiment '" + id + "'");
    detail::require_object(cfg.at("inputs"), "config.inputs");
    if (cfg.contains("output")) {
        detail::check_keys(cfg.at("output"), "config.output", {"prefix"}, {"formats"});
        if (cfg.at("output").contains("formats")) {
            for (const auto& f : cfg.at("output").at("formats")) {
                const std::string s = f.get<std::string>();
                if (s != "json" && s != "csv")
                    throw config_error("config.output.formats entries must be 'json' or 'csv'");
            }
        }
    }
}

/// Execute a validated config. Throws on configuration or numeric errors.
inline ExperimentReport run_config(const nlohmann::json& cfg) {
    validate_envelope(cfg);
    const std::string id = cfg.at("experiment").get<std::string>();
    const auto& inputs = cfg.at("inputs");
    const QuadratureSpec spec = inputs.contains("spec")
                                    ? detail::spec_from_json(inputs.at("spec"), "inputs.spec")
                                    : QuadratureSpec{};

    if (id == "norm") {
        detail::check_keys(inputs, "inputs", {"function", "q", "norm"}, {"spec"});
        const TestFunction f = TestFunction::from_descriptor(inputs.at("function"));
        const ExponentField q = ExponentField::from_descriptor(inputs.at("q"));
        const auto& nj = inputs.at("norm");
        const std::string type = detail::get_string(nj, "inputs.norm", "type");
        NormValue nv;
        if (type == "luxemburg") {
            detail::check_keys(nj, "inputs.norm", {"type"});
            nv = luxemburg_norm(f, q, spec);
        } else if (type == "weighted") {
            detail::check_keys(nj, "inputs.norm", {"type", "gamma"});
            nv = weighted_norm(f, ExponentField::from_descriptor(nj.at("gamma")), q, spec);
        } else if (type == "herz_morrey" || type == "herz_morrey_split") {
            detail::check_keys(nj, "inputs.norm", {"type", "alpha", "lambda", "p"});
            const ExponentField alpha = ExponentField::from_descriptor(nj.at("alpha"));
            const double lambda = detail::get_number(nj, "inputs.norm", "lambda");
            const double p = detail::get_number(nj, "inputs.norm", "p");
            nv = type == "herz_morrey" ? herz_morrey_norm(f, alpha, lambda, p, q, spec)
                                       : herz_morrey_norm_split(f, alpha, lambda, p, q, spec);
        } else {
            throw config_error("inputs.norm.type: unknown norm type '" + type + "'");
        }
        ExperimentReport rep;
        rep.experiment_id = "norm";
        rep.config = cfg;
        Measurement m;
        m.key = type;
        m.lhs = nv.value;
        m.rhs = nv.err_estimate;
        m.ratio = nv.value;
        rep.measurements.push_back(std::move(m));
        rep.measured_constant = nv.value;
        rep.details = nv.to_json();
        rep.verdict = "pass";
        return rep;
    }

    if (id == "operator") {
        detail::check_keys(inputs, "inputs", {"function", "kind", "beta", "radii"}, {"gamma", "spec"});
        const TestFunction f = TestFunction::from_descriptor(inputs.at("function"));
        const ExponentField beta = ExponentField::from_descriptor(inputs.at("beta"));
        const std::string kind = detail::get_string(inputs, "inputs", "kind");
        ExperimentReport rep;
        rep.experiment_id = "operator";
        rep.config = cfg;
        const bool weighted = inputs.contains("gamma");
        const ExponentField gamma = weighted ? ExponentField::from_descriptor(inputs.at("gamma"))
                                             : ExponentField::constant(0.0, f.dim());
        for (const auto& rj : inputs.at("radii")) {
            const double r = rj.get<double>();
            double v;
            if (kind == "hardy") {
                v = hardy_radial(f, beta, r);
            } else if (kind == "hardy_star") {
                v = hardy_star_radial(f, beta, r);
            } else if (kind == "riesz") {
                v = riesz_radial(f, beta, r, spec);
            } else {
                throw config_error("inputs.kind: unknown operator kind '" + kind + "'");
            }
            if (weighted) v *= std::pow(1.0 + r, -gamma.value_radial(r));
            Measurement m;
            m.key = "r=" + std::to_string(r);
            m.lhs = v;
            m.ratio = v;
            rep.measurements.push_back(std::move(m));
        }
        detail::fold_constant(rep);
        rep.verdict = "pass";
        return rep;
    }

    if (id == "holder_check") {
        detail::check_keys(inputs, "inputs", {"q"}, {"pairs", "explicit_pairs", "spec"});
        const ExponentField q = ExponentField::from_descriptor(inputs.at("q"));
        std::uint64_t seed = 0;
        auto pairs = detail::pairs_from_json(inputs, seed);
        ExperimentReport rep = holder_check(pairs, q, spec, cfg);
        rep.seed = seed;
        return rep;
    }

    if (id == "lemma2_delta_fit" || id == "lemma2_duality_check") {
        detail::check_keys(inputs, "inputs", {"q", "j_lo", "j_hi"}, {"threshold", "spec"});
        const ExponentField q = ExponentField::from_descriptor(inputs.at("q"));
        const int j_lo = detail::get_int(inputs, "inputs", "j_lo");
        const int j_hi = detail::get_int(inputs, "inputs", "j_hi");
        const auto radii = detail::dyadic_radii(j_lo, j_hi);
        if (id == "lemma2_delta_fit") return lemma2_delta_fit(q, radii, spec, cfg);
        const double threshold =
            inputs.contains("threshold") ? detail::get_number(inputs, "inputs", "threshold") : 100.0;
        return lemma2_duality_check(q, radii, spec, threshold, cfg);
    }

    if (id == "block_estimate_check") {
        detail::check_keys(inputs, "inputs", {"function", "q1", "beta", "c_inf", "kind", "k_lo", "k_hi"},
                           {"spec"});
        const TestFunction f = TestFunction::from_descriptor(inputs.at("function"));
        const ExponentField q1 = ExponentField::from_descriptor(inputs.at("q1"));
        const ExponentField beta = ExponentField::from_descriptor(inputs.at("beta"));
        const std::string kind = detail::get_string(inputs, "inputs", "kind");
        if (kind != "hardy" && kind != "hardy_star")
            throw config_error("inputs.kind must be 'hardy' or 'hardy_star'");
        return block_estimate_check(f, q1, beta, detail::get_number(inputs, "inputs", "c_inf"),
                                    kind == "hardy" ? OperatorKind::hardy : OperatorKind::hardy_star,
                                    detail::get_int(inputs, "inputs", "k_lo"),
                                    detail::get_int(inputs, "inputs", "k_hi"), spec, cfg);
    }

    if (id == "case_estimate_check") {
        detail::check_keys(inputs, "inputs", {"function", "q1", "alpha", "lambda", "p1"},
                           {"threshold", "spec"});
        const TestFunction f = TestFunction::from_descriptor(inputs.at("function"));
        const ExponentField q1 = ExponentField::from_descriptor(inputs.at("q1"));
        const ExponentField alpha = ExponentField::from_descriptor(inputs.at("alpha"));
        const double threshold =
            inputs.contains("threshold") ? detail::get_number(inputs, "inputs", "threshold") : inf;
        return case_estimate_check(f, alpha, detail::get_number(inputs, "inputs", "lambda"),
                                   detail::get_number(inputs, "inputs", "p1"), q1, spec, threshold, cfg);
    }

    if (id == "theorem_ratio") {
        detail::check_keys(inputs, "inputs", {"kind", "q1", "beta", "c_inf", "families"},
                           {"alpha", "lambda", "p1", "p2", "spec"});
        TheoremParams par;
        const std::string kind = detail::get_string(inputs, "inputs", "kind");
        if (kind == "hardy") {
            par.kind = OperatorKind::hardy;
        } else if (kind == "hardy_star") {
            par.kind = OperatorKind::hardy_star;
        } else if (kind == "riesz") {
            par.kind = OperatorKind::riesz;
        } else {
            throw config_error("inputs.kind: unknown operator kind '" + kind + "'");
        }
        par.q1 = ExponentField::from_descriptor(inputs.at("q1"));
        par.beta = ExponentField::from_descriptor(inputs.at("beta"));
        par.c_inf = detail::get_number(inputs, "inputs", "c_inf");
        if (par.kind != OperatorKind::riesz) {
            for (const char* k : {"alpha", "lambda", "p1", "p2"})
                if (!inputs.contains(k))
                    throw config_error(std::string("inputs: theorem_ratio(") + kind + ") requires '" + k + "'");
            par.alpha = ExponentField::from_descriptor(inputs.at("alpha"));
            par.lambda = detail::get_number(inputs, "inputs", "lambda");
            par.p1 = detail::get_number(inputs, "inputs", "p1");
            par.p2 = detail::get_number(inputs, "inputs", "p2");
        } else {
            par.alpha = ExponentField::constant(0.0, par.q1.dim());
        }
        std::vector<FamilySpec> fams;
        std::size_t fi = 0;
        for (const auto& fj : inputs.at("families"))
            fams.push_back(FamilySpec::from_json(fj, "inputs.families[" + std::to_string(fi++) + "]"));
        return theorem_ratio(par, fams, spec, cfg);
    }

    if (id == "weight_equivalence_check") {
        detail::check_keys(inputs, "inputs", {"beta", "c_inf"}, {"grid", "spec"});
        const ExponentField beta = ExponentField::from_descriptor(inputs.at("beta"));
        ProbeGrid grid = ProbeGrid::standard();
        if (inputs.contains("grid")) {
            const auto& gj = inputs.at("grid");
            detail::check_keys(gj, "inputs.grid", {"r_lo", "r_hi"}, {"per_decade"});
            const int pd = gj.contains("per_decade") ? detail::get_int(gj, "inputs.grid", "per_decade") : 512;
            grid = ProbeGrid::log_spaced(detail::get_number(gj, "inputs.grid", "r_lo"),
                                         detail::get_number(gj, "inputs.grid", "r_hi"), pd);
        }
        return weight_equivalence_check(beta, detail::get_number(inputs, "inputs", "c_inf"), grid, cfg);
    }

    throw config_error("config.experiment: unknown experiment '" + id + "'");
}

/// Write `<dir>/<experiment_id>-<seed>.{json,csv}` per the output spec.
/// Returns the written paths (deterministic order).
inline std::vector<std::string> write_report_files(const ExperimentReport& rep, const std::string& dir,
                                                   const std::vector<std::string>& formats) {
    namespace fs = std::filesystem;
    std::vector<std::string> written;
    if (formats.empty()) return written;
    fs::create_directories(dir);
    const std::string stem = rep.experiment_id + "-" + std::to_string(rep.seed);
    for (const auto& fmt : formats) {
        const fs::path p = fs::path(dir) / (stem + "." + fmt);
        std::ofstream out(p, std::ios::binary);
        if (!out) throw config_error("cannot open output file " + p.string());
        if (fmt == "json") {
            out << rep.to_json().dump(2) << "\n";
        } else if (fmt == "csv") {
            out << rep.to_csv();
        } else {
            throw config_error("unknown report format '" + fmt + "'");
        }
        written.push_back(p.string());
    }
    return written;
}

}  // namespace vex

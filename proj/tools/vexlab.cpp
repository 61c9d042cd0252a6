// Command-line front end: run experiments from JSON configs, list the
// experiment catalog, validate configs. Exit codes: 0 pass verdict,
// 2 fail/withheld verdict, 1 configuration or numeric error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vex/vex.hpp"

namespace {

nlohmann::json load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw vex::config_error("cannot read config file " + path);
    nlohmann::json cfg;
    try {
        in >> cfg;
    } catch (const nlohmann::json::parse_error& e) {
        throw vex::config_error("config is not valid JSON: " + std::string(e.what()));
    }
    return cfg;
}

std::string resolve_output_dir(const std::string& prefix) {
    std::filesystem::path p(prefix);
    if (p.is_relative()) {
        if (const char* base = std::getenv("VEXLAB_OUT")) return (std::filesystem::path(base) / p).string();
    }
    return p.string();
}

int run_command(const std::string& config_path, const std::vector<std::string>& overrides) {
    nlohmann::json cfg = load_config(config_path);
    for (const auto& kv : overrides) vex::apply_override(cfg, kv);
    vex::ExperimentReport rep = vex::run_config(cfg);

    std::printf("experiment: %s\n", rep.experiment_id.c_str());
    if (rep.experiment_id == "norm") {
        std::printf("value = %.8f (err <= %.3g)\n", rep.measured_constant,
                    rep.details.value("err_estimate", 0.0));
    } else if (rep.experiment_id == "operator") {
        for (const auto& m : rep.measurements)
            std::printf("%s  value = %.12g\n", m.key.c_str(), m.lhs);
    } else {
        std::printf("cases: %zu   measured constant: %.12g   threshold: %.12g\n",
                    rep.measurements.size(), rep.measured_constant, rep.threshold);
    }
    std::printf("verdict: %s\n", rep.verdict.c_str());

    if (cfg.contains("output")) {
        const auto& oj = cfg.at("output");
        std::vector<std::string> formats{"json"};
        if (oj.contains("formats")) {
            formats.clear();
            for (const auto& f : oj.at("formats")) formats.push_back(f.get<std::string>());
        }
        const auto written =
            vex::write_report_files(rep, resolve_output_dir(oj.at("prefix").get<std::string>()), formats);
        for (const auto& p : written) std::printf("wrote %s\n", p.c_str());
    }
    return rep.passed() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"variable-exponent function-space laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    auto* run = app.add_subcommand("run", "run an experiment config and write reports");
    run->add_option("config", config_path, "JSON config path")->required();
    run->add_option("--set", overrides, "dotted-path override key=value (repeatable)");

    auto* list = app.add_subcommand("list", "list the experiment catalog");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "validate a config without running it");
    validate->add_option("config", validate_path, "JSON config path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_command(config_path, overrides);
        if (list->parsed()) {
            for (const auto& e : vex::list_experiments())
                std::printf("%-26s %s\n", e.id.c_str(), e.anchor.c_str());
            return 0;
        }
        if (validate->parsed()) {
            nlohmann::json cfg = load_config(validate_path);
            vex::validate_envelope(cfg);
            std::printf("config ok: %s\n", cfg.at("experiment").get<std::string>().c_str());
            return 0;
        }
    } catch (const vex::error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}

#include <catch2/catch_amalgamated.hpp>

#include "vex/config.hpp"

using namespace vex;
using nlohmann::json;

namespace {
json norm_config() {
    return json{{"version", "1"},
                {"experiment", "norm"},
                {"inputs",
                 {{"function", TestFunction::ball_indicator(1, 0).descriptor()},
                  {"q", ExponentField::constant(2.0, 1).descriptor()},
                  {"norm", {{"type", "luxemburg"}}}}}};
}
}  // namespace

TEST_CASE("envelope validation") {
    CHECK_NOTHROW(validate_envelope(norm_config()));

    json bad_version = norm_config();
    bad_version["version"] = "0";
    CHECK_THROWS_WITH(validate_envelope(bad_version), Catch::Matchers::ContainsSubstring("version"));

    json unknown_field = norm_config();
    unknown_field["extra"] = 1;
    CHECK_THROWS_WITH(validate_envelope(unknown_field), Catch::Matchers::ContainsSubstring("extra"));

    json unknown_exp = norm_config();
    unknown_exp["experiment"] = "fourier";
    CHECK_THROWS_WITH(validate_envelope(unknown_exp), Catch::Matchers::ContainsSubstring("fourier"));

    json no_inputs = {{"version", "1"}, {"experiment", "norm"}};
    CHECK_THROWS_AS(validate_envelope(no_inputs), config_error);
}

TEST_CASE("run_config computes the unit-ball L^2 norm") {
    auto rep = run_config(norm_config());
    CHECK(rep.measured_constant == Catch::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(rep.passed());
}

TEST_CASE("negative rel_tol is rejected with a field diagnostic") {
    json cfg = norm_config();
    cfg["inputs"]["spec"] = {{"rel_tol", -1e-8}};
    CHECK_THROWS_WITH(run_config(cfg), Catch::Matchers::ContainsSubstring("rel_tol must be positive"));
}

TEST_CASE("unknown input fields are rejected with their name") {
    json cfg = norm_config();
    cfg["inputs"]["qq"] = 1;
    CHECK_THROWS_WITH(run_config(cfg), Catch::Matchers::ContainsSubstring("qq"));
}

TEST_CASE("overrides use dotted paths") {
    json cfg = norm_config();
    apply_override(cfg, "inputs.spec.rel_tol=1e-6");
    CHECK(cfg["inputs"]["spec"]["rel_tol"].get<double>() == 1e-6);
    apply_override(cfg, "experiment=norm");
    CHECK(cfg["experiment"] == "norm");
    CHECK_THROWS_AS(apply_override(cfg, "no_equals_sign"), config_error);
}

TEST_CASE("lemma2 duality config (constant exponent)") {
    json cfg = {{"version", "1"},
                {"experiment", "lemma2_duality_check"},
                {"inputs",
                 {{"q", ExponentField::constant(3.0, 1).descriptor()}, {"j_lo", -10}, {"j_hi", 10}}}};
    auto rep = run_config(cfg);
    CHECK(rep.passed());
    for (const auto& m : rep.measurements) CHECK(m.lhs == Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("catalog is lexicographic and complete") {
    auto cat = list_experiments();
    REQUIRE(cat.size() == 9);
    for (std::size_t i = 0; i + 1 < cat.size(); ++i) CHECK(cat[i].id < cat[i + 1].id);
    for (const auto& e : cat) CHECK_FALSE(e.anchor.empty());
}

TEST_CASE("report files are written with the canonical names") {
    auto rep = run_config(norm_config());
    const auto dir = std::filesystem::temp_directory_path() / "vex_cfg_test";
    std::filesystem::remove_all(dir);
    auto written = write_report_files(rep, dir.string(), {"json", "csv"});
    REQUIRE(written.size() == 2);
    CHECK(written[0].ends_with("norm-0.json"));
    CHECK(written[1].ends_with("norm-0.csv"));
    for (const auto& p : written) CHECK(std::filesystem::file_size(p) > 0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("operator experiment through the config layer") {
    json cfg = {{"version", "1"},
                {"experiment", "operator"},
                {"inputs",
                 {{"function", TestFunction::ball_indicator(1, 0).descriptor()},
                  {"kind", "hardy"},
                  {"beta", ExponentField::constant(0.0, 1).descriptor()},
                  {"radii", {0.5, 2.0}}}}};
    auto rep = run_config(cfg);
    REQUIRE(rep.measurements.size() == 2);
    CHECK(rep.measurements[0].lhs == Catch::Approx(2.0));
    CHECK(rep.measurements[1].lhs == Catch::Approx(1.0));
}

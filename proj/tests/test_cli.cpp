// Exercises the installed CLI binary end to end (path via VEXLAB_BIN).

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

std::string bin_path() {
    const char* p = std::getenv("VEXLAB_BIN");
    REQUIRE(p != nullptr);
    return p;
}

fs::path tmp_dir() {
    const char* p = std::getenv("VEXLAB_TMP");
    fs::path dir = p ? fs::path(p) : fs::temp_directory_path() / "vexlab_cli";
    fs::create_directories(dir);
    return dir;
}

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const fs::path out_file = tmp_dir() / "stdout.txt";
    const std::string cmd = bin_path() + " " + args + " > " + out_file.string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WEXITSTATUS(rc), ss.str()};
}

std::string write_config(const std::string& name, const std::string& body) {
    const fs::path p = tmp_dir() / name;
    std::ofstream out(p);
    out << body;
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kNormConfig = R"({
  "version": "1",
  "experiment": "norm",
  "inputs": {
    "function": {"dimension": 1, "terms": [{"coeff": 1.0, "primitive": {"type": "ball_indicator", "k": 0}}]},
    "q": {"form": "constant", "c": 2.0, "n": 1},
    "norm": {"type": "luxemburg"}
  }
})";

}  // namespace

TEST_CASE("cli: norm run prints the value and exits 0") {
    const auto cfg = write_config("norm.json", kNormConfig);
    auto r = run_cli("run " + cfg);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("1.41421356") != std::string::npos);
    CHECK(r.out.find("verdict: pass") != std::string::npos);
}

TEST_CASE("cli: negative rel_tol exits 1 with a diagnostic") {
    const auto cfg = write_config("norm2.json", kNormConfig);
    auto r = run_cli("run " + cfg + " --set inputs.spec.rel_tol=-1e-8");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("rel_tol must be positive") != std::string::npos);
}

TEST_CASE("cli: unreadable config exits 1 naming the problem") {
    auto r = run_cli("run /nonexistent/cfg.json");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("error:") != std::string::npos);
}

TEST_CASE("cli: list prints the catalog in stable order") {
    auto r = run_cli("list");
    CHECK(r.exit_code == 0);
    const auto pos_block = r.out.find("block_estimate_check");
    const auto pos_theorem = r.out.find("theorem_ratio");
    const auto pos_weight = r.out.find("weight_equivalence_check");
    CHECK(pos_block != std::string::npos);
    CHECK(pos_theorem != std::string::npos);
    CHECK(pos_weight != std::string::npos);
    CHECK(pos_block < pos_theorem);
    CHECK(pos_theorem < pos_weight);
}

TEST_CASE("cli: validate accepts good configs and rejects bad ones") {
    const auto cfg = write_config("norm3.json", kNormConfig);
    CHECK(run_cli("validate " + cfg).exit_code == 0);
    const auto bad = write_config("bad.json", "{\"version\": \"1\"}");
    CHECK(run_cli("validate " + bad).exit_code == 1);
    const auto garbage = write_config("garbage.json", "not json at all");
    CHECK(run_cli("validate " + garbage).exit_code == 1);
}

TEST_CASE("cli: repeated runs write byte-identical reports") {
    const std::string cfg_body = R"({
  "version": "1",
  "experiment": "holder_check",
  "inputs": {
    "q": {"form": "radial_log", "c_inf": 2.0, "a": 1.0, "n": 1},
    "pairs": {"count": 8, "seed": 99, "dim": 1}
  },
  "output": {"prefix": "OUTDIR", "formats": ["json", "csv"]}
})";
    const fs::path out = tmp_dir() / "det";
    fs::remove_all(out);
    std::string body = cfg_body;
    body.replace(body.find("OUTDIR"), 6, out.string());
    const auto cfg = write_config("det.json", body);
    REQUIRE(run_cli("run " + cfg).exit_code == 0);
    const std::string json1 = slurp(out / "holder_check-99.json");
    const std::string csv1 = slurp(out / "holder_check-99.csv");
    REQUIRE(run_cli("run " + cfg).exit_code == 0);
    CHECK(slurp(out / "holder_check-99.json") == json1);
    CHECK(slurp(out / "holder_check-99.csv") == csv1);
    CHECK_FALSE(json1.empty());
}

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gcp/cli/config.hpp"
#include "gcp/cli/runner.hpp"
#include "gcp/error.hpp"

using namespace gcp;
using namespace gcp::cli;
using nlohmann::json;
using doctest::Approx;

namespace {

json minimal_uniform(const std::string& prefix) {
    return json::parse(R"({"experiment":"uniform","model":{"k":1,"lambda":2.0},"ic":{"type":"uniform","v":[0.9,0.1]},
                           "numerics":{"dt":0.001,"t_end":20.0},"output":{"prefix":"x"}})")
        .patch(json::array({{{"op", "replace"}, {"path", "/output/prefix"}, {"value", prefix}}}));
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "gcp_cli_tests" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("minimal uniform config parses with defaults") {
    const auto cfg = parse_config(minimal_uniform("out/u1"));
    CHECK(cfg.experiment == Experiment::uniform);
    CHECK(cfg.model.k() == 1);
    CHECK(cfg.numerics.dt == 0.001);
    CHECK(cfg.prefix == "out/u1");
    CHECK(cfg.resolved["numerics"]["snapshot_stride"] == 100);
}

TEST_CASE("invalid configs are rejected with the key named") {
    auto doc = minimal_uniform("p");
    doc["model"]["lambda"] = -1.0;
    CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("lambda"), ConfigError);

    doc = minimal_uniform("p");
    doc["model"]["extra"] = 1;
    CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("model.extra: unknown key"), ConfigError);

    doc = minimal_uniform("p");
    doc["bogus"] = true;
    CHECK_THROWS_AS(parse_config(doc), ConfigError);

    doc = minimal_uniform("p");
    doc["experiment"] = "fourier";
    CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("experiment"), ConfigError);

    doc = minimal_uniform("p");
    doc["ic"]["v"] = json::array({0.5, 0.6});
    CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("ic"), ConfigError);

    doc = minimal_uniform("p");
    doc["numerics"].erase("t_end");
    CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("numerics.t_end"), ConfigError);

    doc = minimal_uniform("p");
    doc["model"]["k"] = 1.5;
    CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("model.k"), ConfigError);

    const json spatial = json::parse(R"({"experiment":"spatial","model":{"k":1,"lambda":2.0},
        "kernel":{"type":"box","b":6.0},"grid":{"L":10.0,"n":100},"ic":{"type":"step","x0":0.0},
        "numerics":{"t_end":1.0},"output":{"prefix":"p"}})");
    CHECK_THROWS_WITH_AS(parse_config(spatial), doctest::Contains("kernel"), ConfigError);
}

TEST_CASE("overrides replace dotted keys") {
    auto doc = minimal_uniform("p");
    apply_overrides(doc, {"model.lambda=3", "numerics.t_end=5.5", "output.prefix=elsewhere/run"});
    const auto cfg = parse_config(doc);
    CHECK(cfg.model.lambda() == 3.0);
    CHECK(cfg.numerics.t_end == 5.5);
    CHECK(cfg.prefix == "elsewhere/run");
    CHECK_THROWS_AS(apply_overrides(doc, {"no_equals_sign"}), ConfigError);
}

TEST_CASE("uniform run writes trajectory and manifest") {
    const auto dir = scratch("uniform");
    std::ostringstream log;
    const auto result = run(parse_config(minimal_uniform((dir / "u1").string())), 1, log);
    REQUIRE(result.outputs.size() == 2);
    CHECK(std::filesystem::exists(dir / "u1_trajectory.csv"));
    const auto manifest = json::parse(slurp(dir / "u1_manifest.json"));
    CHECK(manifest["headline"]["v1_final"].get<double>() == Approx(0.5).epsilon(1e-8));
    CHECK(manifest["headline"]["outcome"] == "sustaining");
    CHECK(manifest["invariants"]["max_sum_deviation"].get<double>() < 1e-12);
    CHECK(manifest["config"]["model"]["lambda"] == 2.0);
}

TEST_CASE("basin run marks the sustaining point") {
    const auto dir = scratch("basin");
    const json doc = {{"experiment", "basin"},
                      {"model", {{"k", 2}, {"lambda", 2.0}}},
                      {"numerics", {{"resolution", 400}}},
                      {"output", {{"prefix", (dir / "b").string()}}}};
    std::ostringstream log;
    const auto result = run(parse_config(doc), 2, log);
    CHECK(result.manifest["headline"]["sustaining_point_outcome"] == "sustaining");
    const std::string csv = slurp(dir / "b_basin.csv");
    CHECK(csv.rfind("v0_init,v1_init,outcome,r0\n", 0) == 0);
}

TEST_CASE("same config gives byte-identical CSVs for any thread count") {
    const auto dir = scratch("determinism");
    json doc = json::parse(R"({"experiment":"front","model":{"k":1,"lambda":1.5},
        "kernel":{"type":"box","b":0.5},"grid":{"L":100.0,"n":2048},"ic":{"type":"step","x0":-30.0},
        "numerics":{"t_end":10.0,"sample_interval":1.0},"output":{"prefix":"p"}})");
    std::ostringstream log;
    doc["output"]["prefix"] = (dir / "a").string();
    run(parse_config(doc), 1, log);
    doc["output"]["prefix"] = (dir / "b").string();
    run(parse_config(doc), 4, log);
    CHECK(slurp(dir / "a_front.csv") == slurp(dir / "b_front.csv"));
    CHECK(slurp(dir / "a_positions.csv") == slurp(dir / "b_positions.csv"));
}

TEST_CASE("exit codes by error family") {
    CHECK(exit_code_for(ConfigError("x")) == 2);
    CHECK(exit_code_for(DomainError("x")) == 2);
    CHECK(exit_code_for(InvariantViolation("x")) == 3);
    CHECK(exit_code_for(ConvergenceError("x", 1, 0.0)) == 3);
    CHECK(exit_code_for(MeasurementError("x")) == 3);
    CHECK(exit_code_for(std::runtime_error("x")) == 1);
}

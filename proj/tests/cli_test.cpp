#include "experiment.hpp"

#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace coexist;
using namespace coexist::cli;

namespace {

const char* const kScenario = R"({
  "scenario": {
    "alpha": 4, "channels": 5, "fading": "rayleigh",
    "rats": [
      {"id": "s", "lambda_per_m2": 1e-4, "power_w": 1.0, "sense_radius_m": 50, "sir_threshold_linear": 0.5},
      {"id": "w", "lambda_per_m2": 3e-4, "power_w": 0.5, "sense_radius_m": 30, "sir_threshold_db": -3.0103}
    ]
  },
)";

ExperimentSpec spec_of(const std::string& tail)
{
    auto spec = parse_spec_text(kScenario + tail);
    finalize(spec, {});
    return spec;
}

std::string where_of(const std::string& text)
{
    try {
        auto spec = parse_spec_text(text);
        finalize(spec, {});
    } catch (const ConfigError& e) {
        return e.where();
    }
    FAIL("config accepted");
    return {};
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("scenario parsing")
{
    const auto spec = spec_of(R"("experiment": "analytic"})");
    CHECK(spec.experiment == ExperimentKind::analytic);
    CHECK(spec.scenario.channels == 5);
    CHECK(spec.scenario.rats[1].sir_threshold == doctest::Approx(0.5).epsilon(1e-5));
    CHECK_FALSE(spec.mc);
}

TEST_CASE("config diagnostics point at the offending field")
{
    std::string bad = kScenario;
    bad.replace(bad.find("\"alpha\": 4"), 10, "\"alpha\": 1.5");
    CHECK(where_of(bad + R"("experiment": "analytic"})") == "/scenario");

    CHECK(where_of(kScenario + std::string(R"("experiment": "sweep-m"})")) == "/sweep");
    CHECK(where_of(kScenario + std::string(R"("experiment": "simulate"})")) == "/mc");
    CHECK(where_of(kScenario + std::string(R"("experiment": "dance"})")) == "/experiment");
    CHECK(where_of(kScenario + std::string("\"experiment\": \"analytic\",\n\"mc\": {\"drops\": -4}}"))
          == "/mc/drops");
    CHECK(where_of(std::string("{\n\"scenario\": {\n,}}")) == "line 3");
}

TEST_CASE("overrides")
{
    auto spec = parse_spec_text(kScenario + std::string(R"("experiment": "analytic"})"));
    Overrides o;
    o.seed = 5;
    o.drops = 10;
    o.format = OutputFormat::json;
    finalize(spec, o);
    REQUIRE(spec.mc);
    CHECK(spec.mc->seed == 5);
    CHECK(spec.mc->drops == 10);
    CHECK(spec.output.format == OutputFormat::json);
}

TEST_CASE("number and csv formatting")
{
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(1e-4) == "0.0001");

    RunResult r;
    r.columns = {"rat", "value, with comma"};
    r.row_labels = {"a\"b"};
    r.rows = {{2.5}};
    CHECK(format_csv(r) == "rat,\"value, with comma\"\r\n\"a\"\"b\",2.5\r\n");
}

TEST_CASE("analytic run reports the optimum")
{
    const auto result = run(spec_of(R"("experiment": "analytic"})"));
    CHECK(result.rows.size() == 2);
    CHECK(result.summary["lambda_ratio_star"].get<double>() == doctest::Approx(1.414).epsilon(1e-3));
}

TEST_CASE("sweep-m columns")
{
    const auto result = run(spec_of(R"("experiment": "sweep-m",
        "sweep": {"variable": "channels", "start": 1, "stop": 4, "step": 1},
        "mc": {"drops": 200}})"));
    const std::vector<std::string> head(result.columns.begin(), result.columns.begin() + 8);
    CHECK(head == std::vector<std::string>{"m", "eta_s", "eta_w", "rho_s_analytic", "rho_w_analytic",
                                           "rho_ce_analytic", "rho_s_mc", "rho_s_mc_ci"});
    CHECK(result.rows.size() == 4);
}

TEST_CASE("optimize run")
{
    const auto result = run(spec_of(R"("experiment": "optimize",
        "sweep": {"variable": "lambda_ratio", "start": 0.5, "stop": 4, "step": 0.05}})"));
    CHECK(std::abs(result.summary["lambda_ratio_star"].get<double>() - 1.4) < 0.1);
    CHECK(result.rows.size() == 71);
}

TEST_CASE("outputs are byte-identical for a fixed seed")
{
    const auto dir = std::filesystem::temp_directory_path() / "coexist_cli_test";
    std::filesystem::remove_all(dir);
    auto spec = spec_of(R"("experiment": "simulate", "mc": {"drops": 300, "seed": 9}})");
    spec.output.dir = dir / "a";
    const auto first = write_outputs(spec, run(spec));
    spec.output.dir = dir / "b";
    const auto second = write_outputs(spec, run(spec));
    REQUIRE(first.size() == 2);
    REQUIRE(second.size() == 2);
    CHECK(first[0].filename() == "simulate.csv");
    CHECK(slurp(first[0]) == slurp(second[0]));
    CHECK(slurp(first[1]) == slurp(second[1]));
    std::filesystem::remove_all(dir);
}

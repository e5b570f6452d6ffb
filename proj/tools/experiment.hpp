#pragma once

#include <coexist/model.hpp>
#include <coexist/montecarlo.hpp>

#include "json.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coexist::cli {

/// Malformed or invalid experiment file. `where` is a JSON pointer or "line N".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string where, const std::string& what)
        : std::runtime_error(where + ": " + what), where_(std::move(where)) {}

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

enum class ExperimentKind { analytic, simulate, sweep_m, sweep_ratio, optimize, throughput };
enum class OutputFormat { csv, json };

std::string to_string(ExperimentKind kind);

struct SweepSpec {
    std::string variable;   // "channels" or "lambda_ratio"
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;
};

struct MonteCarloSpec {
    std::size_t drops = 100'000;
    std::uint64_t seed = kDefaultSeed;
    ContentionMode mode = ContentionMode::thinned_ppp;
    std::optional<double> window_half_width;   // meters
};

struct OutputSpec {
    std::filesystem::path dir = "out";
    OutputFormat format = OutputFormat::csv;
};

struct ExperimentSpec {
    NetworkConfig scenario;
    ExperimentKind experiment = ExperimentKind::analytic;
    std::optional<SweepSpec> sweep;
    std::optional<MonteCarloSpec> mc;
    OutputSpec output;
    std::optional<std::string> baseline_rat;   // single-RAT reference for throughput gains
};

/// Command-line overrides; unset fields leave the file's values alone.
struct Overrides {
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> drops;
    std::optional<ContentionMode> mode;
    std::optional<OutputFormat> format;
};

ExperimentSpec parse_spec(const nlohmann::json& doc);
ExperimentSpec parse_spec_text(const std::string& text);
ExperimentSpec load_spec(const std::filesystem::path& path);

/// Applies overrides and checks cross-field requirements.
void finalize(ExperimentSpec& spec, const Overrides& overrides);

/// Tabular result plus scalar summary of one run.
struct RunResult {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> row_labels;   // optional leading text column (RAT ids)
    nlohmann::json summary;
};

RunResult run(const ExperimentSpec& spec);

/// Writes <dir>/<experiment>.csv (or .json) and <dir>/<experiment>.summary.json.
/// Returns the written paths.
std::vector<std::filesystem::path> write_outputs(const ExperimentSpec& spec, const RunResult& result);

std::string format_csv(const RunResult& result);

/// 12 significant digits, '.' decimal separator.
std::string format_number(double value);

} // namespace coexist::cli

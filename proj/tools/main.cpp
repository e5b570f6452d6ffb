#include "experiment.hpp"

#include <coexist/error.hpp>

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    using namespace coexist;

    CLI::App app{"Coexistence model of multi-RAT unlicensed-band networks: closed forms, "
                 "Monte Carlo validation and figure sweeps"};
    std::string config_path;
    cli::Overrides overrides;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::size_t drops = 0;
    std::string mode;
    std::string format;

    app.add_option("--config", config_path, "Experiment file (JSON)")->required()->check(CLI::ExistingFile);
    auto* out_opt = app.add_option("--out", out_dir, "Output directory");
    auto* seed_opt = app.add_option("--seed", seed, "Monte Carlo seed");
    auto* drops_opt = app.add_option("--drops", drops, "Monte Carlo drops per point");
    auto* mode_opt = app.add_option("--mode", mode, "Contention mode")->check(CLI::IsMember({"thinned", "matern"}));
    auto* format_opt = app.add_option("--format", format, "Table format")->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*out_opt)
        overrides.out = out_dir;
    if (*seed_opt)
        overrides.seed = seed;
    if (*drops_opt)
        overrides.drops = drops;
    if (*mode_opt)
        overrides.mode = parse_contention_mode(mode);
    if (*format_opt)
        overrides.format = format == "json" ? cli::OutputFormat::json : cli::OutputFormat::csv;

    cli::ExperimentSpec spec;
    try {
        spec = cli::load_spec(config_path);
        cli::finalize(spec, overrides);
    } catch (const cli::ConfigError& e) {
        std::cerr << "config error at " << e.what() << '\n';
        return 2;
    }

    try {
        const auto result = cli::run(spec);
        for (const auto& path : cli::write_outputs(spec, result))
            std::cout << path.string() << '\n';
    } catch (const cli::ConfigError& e) {
        std::cerr << "config error at " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return is_config_error(e.code()) ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

#pragma once

#include <coexist/geometry.hpp>
#include <coexist/model.hpp>
#include <coexist/rng.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace coexist {

enum class ContentionMode { thinned_ppp, matern };

std::string_view to_string(ContentionMode mode) noexcept;
ContentionMode parse_contention_mode(std::string_view name);

struct McOptions {
    std::size_t drops = 100'000;
    std::uint64_t seed = kDefaultSeed;
    ContentionMode mode = ContentionMode::thinned_ppp;
    /// Defaults to a 1 km^2 square centered on the typical user.
    std::optional<Window> window;
    bool torus = true;
    unsigned threads = 0;
};

struct McEstimate {
    double mean = 0.0;
    double ci_half_width = 0.0;  // 95 %, normal approximation
    std::size_t drops = 0;
    std::uint64_t seed = 0;
    ContentionMode mode = ContentionMode::thinned_ppp;
};

/// Outcome for the typical user of one RAT in one drop.
struct RatOutcome {
    std::optional<double> serving_distance;
    double interference = 0.0;   // sum of P_t G |A|^{-alpha}, W
    double sir = 0.0;
    bool success = false;
};

struct DropRecord {
    std::vector<RatOutcome> rats;
};

/// All estimators computed from one shared set of drops.
struct McSummary {
    std::vector<McEstimate> success;       // rho_r
    McEstimate coexisting_success;         // rho_ce
    std::vector<McEstimate> rate;          // E[log2(1 + SIR_r)]
    McEstimate throughput;                 // C_ce
    std::vector<std::size_t> no_serving;   // drops without a transmitting RAT-r AP
};

Window default_window();

/// Contended AP layout of drop `drop_index`; exposed for distributional tests.
PointPattern sample_drop_pattern(const NetworkConfig& config, const McOptions& options,
                                 std::size_t drop_index);

/// One drop: sample every RAT, contend, and evaluate the SIR of each RAT's
/// typical user at the window center on its serving AP's channel.
DropRecord simulate_drop(const NetworkConfig& config, const McOptions& options,
                         std::size_t drop_index);

McSummary simulate(const NetworkConfig& config, const McOptions& options);

McEstimate estimate_success(const NetworkConfig& config, std::size_t rat, const McOptions& options);
McEstimate estimate_coexisting_success(const NetworkConfig& config, const McOptions& options);
McEstimate estimate_throughput(const NetworkConfig& config, const McOptions& options);

} // namespace coexist

#pragma once

#include <coexist/fading.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace coexist {

/// Deployment description of one radio access technology (RAT) subnetwork.
/// Units: lambda in APs/m^2, power in W, sense_radius in m, sir_threshold linear.
struct RatParams {
    std::string id;
    double lambda = 0.0;
    double power = 0.0;
    double sense_radius = 0.0;
    double sir_threshold = 0.0;
};

/// How APs obtain a channel. `csma` applies the carrier-sense retaining
/// probability; `none` disables sensing so every AP transmits.
enum class Contention { csma, none };

struct NetworkConfig {
    std::vector<RatParams> rats;
    int channels = 1;
    double alpha = 4.0;
    FadingModel fading{};
    Contention contention = Contention::csma;

    std::size_t size() const noexcept { return rats.size(); }

    /// Index of the RAT with the given id; throws Errc::unknown_rat.
    std::size_t index_of(const std::string& id) const;

    double total_density() const noexcept;
};

/// Returns the config unchanged when every invariant holds, throws coexist::Error otherwise.
const NetworkConfig& validate(const NetworkConfig& config);

/// Throws Errc::not_two_rat unless the config has exactly two RATs.
void require_two_rat(const NetworkConfig& config);

/// Power-weighted density quantities used by the two-RAT optimality analysis.
/// Index 0 is treated as the small-cell RAT and index 1 as WiFi.
struct AnalyticIntermediates {
    double tau_alpha = 0.0;
    std::vector<double> ell;  // ell(theta_r)
    std::vector<double> c;    // 1 + theta_r^{2/alpha} (tau - ell_r) / m
    std::vector<double> d;    // tau theta_r^{2/alpha} / m
    double y = 0.0;           // (eta_s lambda_s / eta_w lambda_w) (P_s / P_w)^{2/alpha}
};

} // namespace coexist

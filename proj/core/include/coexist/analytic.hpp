#pragma once

#include <coexist/model.hpp>

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace coexist {

/// Closed-form performance of one scenario.
struct AnalyticReport {
    std::vector<double> eta;         // transmit (retaining) probability per RAT
    std::vector<double> rho;         // success probability per RAT
    double rho_ce = 0.0;             // mean of rho
    std::vector<double> rate;        // E[log2(1 + SIR)] per RAT, bps/Hz
    double c_ce = 0.0;               // coexisting throughput, bps/Hz/channel
};

/// Probability that a RAT-`rat` AP wins at least one of the m channels under CSMA.
/// Every AP of every RAT inside the sensing disc of radius R_rat counts as a contender.
double transmit_probability(const NetworkConfig& config, std::size_t rat);

/// transmit_probability for every RAT; all ones when contention is disabled.
std::vector<double> transmit_probabilities(const NetworkConfig& config);

/// Gamma(1 - 2/alpha) E[G^{2/alpha}], evaluated through the fading model's fractional moment.
double tau_alpha(double alpha, const FadingModel& fading = {});

/// 2 pi csc(2 pi / alpha) / alpha, the Rayleigh closed form of tau_alpha.
double tau_alpha_cosecant(double alpha);

/// ell(theta) = integral over [0, theta^{-2/alpha}] of dt / (1 + t^{alpha/2}).
/// Relative tolerance 1e-9.
double ell(double theta, double alpha, const FadingModel& fading = {});

/// Success probability of the typical RAT-`rat` user with nearest-AP association.
double success_probability(const NetworkConfig& config, std::size_t rat);

/// Same formula with explicit transmit probabilities and SIR threshold.
double success_probability(const NetworkConfig& config, std::size_t rat,
                           std::span<const double> eta, double theta);

/// The two-RAT form written out with the other RAT's term separated. Must agree
/// with success_probability; kept as an independent arithmetic route.
double success_probability_two_rat(const NetworkConfig& config, std::size_t rat);

double coexisting_success_probability(const NetworkConfig& config);

/// Integral over x in [0, inf) of success(2^x - 1), i.e. E[log2(1 + SIR)].
/// `tail_constant` K must bound the integrand as success(theta) <= K theta^{-2/alpha};
/// the integral is truncated once the implied tail is below 1e-10 of the accumulated mass.
/// Relative tolerance 1e-6.
double spectral_efficiency(const std::function<double(double)>& success, double alpha,
                           double tail_constant);

/// E[log2(1 + SIR)] of the typical RAT-`rat` user.
double rat_spectral_efficiency(const NetworkConfig& config, std::size_t rat);

/// (1/m) sum over RATs of the per-RAT spectral efficiency.
double coexisting_throughput(const NetworkConfig& config);

/// Two-RAT quantities (index 0 = small cell, index 1 = WiFi).
AnalyticIntermediates intermediates(const NetworkConfig& config);

/// Everything above for one scenario. `with_throughput = false` skips the quadrature.
AnalyticReport analyze(const NetworkConfig& config, bool with_throughput = true);

} // namespace coexist

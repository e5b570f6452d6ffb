#pragma once

#include <coexist/model.hpp>

#include <optional>
#include <string_view>
#include <vector>

namespace coexist {

struct ConstraintCheck {
    bool feasible = false;
    double margin = 0.0;   // min(c_s, c_w) - (theta_s theta_w)^{1/alpha} tau / m
    double c_s = 0.0;
    double c_w = 0.0;
    double bound = 0.0;    // (theta_s theta_w)^{1/alpha} tau / m
};

/// Existence condition for an interior maximizer of rho_ce over the density ratio.
ConstraintCheck check_constraint(const NetworkConfig& config);

/// rho_ce as a function of y = (eta_s lambda_s / eta_w lambda_w)(P_s / P_w)^{2/alpha},
/// with c and d taken from `im`.
double coexisting_success_of_y(const AnalyticIntermediates& im, double y);

/// Maximizer of coexisting_success_of_y. Throws Errc::infeasible_constraint.
double optimal_y(const NetworkConfig& config);

/// Optimal eta_s lambda_s / (eta_w lambda_w). Throws Errc::infeasible_constraint.
double optimal_weighted_ratio(const NetworkConfig& config);

/// lambda_w / lambda_s that attains optimal_weighted_ratio with lambda_s held at
/// the configured value and both eta re-evaluated at every trial lambda_w.
/// Bisection over [1e-3, 1e3] lambda_s to relative tolerance 1e-6, after
/// checking that the objective is monotone on the bracket.
double solve_lambda_ratio(const NetworkConfig& config);

enum class OptimizationMethod { closed_form, sweep };
std::string_view to_string(OptimizationMethod method) noexcept;

struct OptimalityResult {
    bool feasible = false;
    std::optional<double> y_star;            // optimal eta_s lambda_s / eta_w lambda_w
    std::optional<double> lambda_ratio_star; // optimal lambda_w / lambda_s
    double rho_ce_at_star = 0.0;
    OptimizationMethod method = OptimizationMethod::closed_form;
};

/// Config with lambda_w = ratio * lambda_s.
NetworkConfig with_lambda_ratio(const NetworkConfig& config, double ratio);

/// Closed form plus fixed point.
OptimalityResult optimize(const NetworkConfig& config);

struct RatioSweepPoint {
    double ratio = 0.0;   // lambda_w / lambda_s
    double rho_ce = 0.0;
};

/// Analytic rho_ce over ratio = start, start + step, ..., stop.
std::vector<RatioSweepPoint> sweep_lambda_ratio(const NetworkConfig& config, double start,
                                                double stop, double step, unsigned threads = 0);

/// Grid argmax of the analytic rho_ce over the lambda ratio.
OptimalityResult optimize_by_sweep(const NetworkConfig& config, double start, double stop,
                                   double step, unsigned threads = 0);

struct ConcavityReport {
    std::vector<int> channels;
    std::vector<double> rho_ce;
    std::vector<double> first_diff;   // rho_ce(m+1) - rho_ce(m)
    std::vector<double> second_diff;  // rho_ce(m+2) - 2 rho_ce(m+1) + rho_ce(m)
};

/// Evaluates rho_ce for m = 1..m_max and throws Errc::concavity_violation unless
/// every first difference is positive and every second difference negative.
ConcavityReport verify_concavity_in_m(const NetworkConfig& config, int m_max);

/// Grid points of a closed [start, stop] range; tolerant to accumulated rounding at stop.
std::vector<double> grid(double start, double stop, double step);

} // namespace coexist

#include <coexist/analytic.hpp>
#include <coexist/error.hpp>
#include <coexist/optimizer.hpp>
#include <coexist/parallel.hpp>

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <string>

namespace coexist {

namespace {

constexpr double kBracketLow = 1e-3;
constexpr double kBracketHigh = 1e3;
constexpr double kRelTolerance = 1e-6;
constexpr int kMonotoneSamples = 400;

double threshold_cross(const NetworkConfig& config, double tau)
{
    const double ts = config.rats[0].sir_threshold;
    const double tw = config.rats[1].sir_threshold;
    return std::pow(ts * tw, 1.0 / config.alpha) * tau;
}

} // namespace

std::string_view to_string(OptimizationMethod method) noexcept
{
    return method == OptimizationMethod::closed_form ? "closed-form" : "sweep";
}

ConstraintCheck check_constraint(const NetworkConfig& config)
{
    require_two_rat(validate(config));
    const auto im = intermediates(config);
    ConstraintCheck out;
    out.c_s = im.c[0];
    out.c_w = im.c[1];
    out.bound = threshold_cross(config, im.tau_alpha) / config.channels;
    out.margin = std::min(out.c_s, out.c_w) - out.bound;
    out.feasible = out.margin > 0.0;
    return out;
}

double coexisting_success_of_y(const AnalyticIntermediates& im, double y)
{
    return 0.5 * y / (im.c[0] * y + im.d[0]) + 0.5 / (im.c[1] + im.d[1] * y);
}

double optimal_weighted_ratio(const NetworkConfig& config)
{
    const auto check = check_constraint(config);
    if (!check.feasible)
        throw Error(Errc::infeasible_constraint,
                    "constraint margin " + std::to_string(check.margin) + " <= 0");
    const double a = config.alpha;
    const double m = config.channels;
    const double ps = config.rats[0].power;
    const double pw = config.rats[1].power;
    const double ts = config.rats[0].sir_threshold;
    const double tw = config.rats[1].sir_threshold;
    const double cross = threshold_cross(config, tau_alpha(a, config.fading));
    return std::pow(std::sqrt(ts) * pw / (std::sqrt(tw) * ps), 2.0 / a)
         * ((m * check.c_w - cross) / (m * check.c_s - cross));
}

double optimal_y(const NetworkConfig& config)
{
    const double ratio = optimal_weighted_ratio(config);
    return ratio * std::pow(config.rats[0].power / config.rats[1].power, 2.0 / config.alpha);
}

NetworkConfig with_lambda_ratio(const NetworkConfig& config, double ratio)
{
    require_two_rat(config);
    NetworkConfig out = config;
    out.rats[1].lambda = ratio * config.rats[0].lambda;
    return out;
}

double solve_lambda_ratio(const NetworkConfig& config)
{
    const double target = optimal_weighted_ratio(config);
    const double lambda_s = config.rats[0].lambda;

    auto objective = [&](double lambda_w) {
        NetworkConfig trial = config;
        trial.rats[1].lambda = lambda_w;
        const auto eta = transmit_probabilities(trial);
        return eta[0] * lambda_s / (eta[1] * lambda_w) - target;
    };

    const double lo = kBracketLow * lambda_s;
    const double hi = kBracketHigh * lambda_s;

    // log-spaced scan for monotonicity before trusting bisection
    double prev = objective(lo);
    int direction = 0;
    for (int i = 1; i <= kMonotoneSamples; ++i) {
        const double x = lo * std::pow(hi / lo, static_cast<double>(i) / kMonotoneSamples);
        const double v = objective(x);
        const int dir = v > prev ? 1 : (v < prev ? -1 : 0);
        if (dir == 0 || (direction != 0 && dir != direction))
            throw Error(Errc::no_root_in_bracket, "objective is not strictly monotone on the bracket");
        direction = dir;
        prev = v;
    }

    const double f_lo = objective(lo);
    const double f_hi = objective(hi);
    if (f_lo == 0.0)
        return lo / lambda_s;
    if (f_hi == 0.0)
        return hi / lambda_s;
    if ((f_lo > 0.0) == (f_hi > 0.0))
        throw Error(Errc::no_root_in_bracket,
                    "no sign change of the density-ratio objective on [1e-3, 1e3] lambda_s");

    std::uintmax_t max_iter = 200;
    auto tol = [](double a, double b) { return std::abs(b - a) <= kRelTolerance * std::min(a, b); };
    const auto [a, b] = boost::math::tools::bisect(objective, lo, hi, tol, max_iter);
    return 0.5 * (a + b) / lambda_s;
}

OptimalityResult optimize(const NetworkConfig& config)
{
    OptimalityResult out;
    out.method = OptimizationMethod::closed_form;
    out.feasible = check_constraint(config).feasible;
    if (!out.feasible)
        return out;
    out.y_star = optimal_weighted_ratio(config);
    out.lambda_ratio_star = solve_lambda_ratio(config);
    out.rho_ce_at_star = coexisting_success_probability(with_lambda_ratio(config, *out.lambda_ratio_star));
    return out;
}

std::vector<double> grid(double start, double stop, double step)
{
    if (!(step > 0.0) || stop < start)
        throw Error(Errc::non_positive_parameter, "sweep needs step > 0 and stop >= start");
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i)
        out.push_back(start + static_cast<double>(i) * step);
    return out;
}

std::vector<RatioSweepPoint> sweep_lambda_ratio(const NetworkConfig& config, double start,
                                                double stop, double step, unsigned threads)
{
    require_two_rat(validate(config));
    const auto ratios = grid(start, stop, step);
    std::vector<RatioSweepPoint> out(ratios.size());
    parallel_for(ratios.size(), threads, [&](std::size_t i) {
        out[i] = {ratios[i], coexisting_success_probability(with_lambda_ratio(config, ratios[i]))};
    });
    return out;
}

OptimalityResult optimize_by_sweep(const NetworkConfig& config, double start, double stop,
                                   double step, unsigned threads)
{
    const auto points = sweep_lambda_ratio(config, start, stop, step, threads);
    OptimalityResult out;
    out.method = OptimizationMethod::sweep;
    out.feasible = check_constraint(config).feasible;
    const RatioSweepPoint* best = &points.front();
    for (const auto& p : points)
        if (p.rho_ce > best->rho_ce)
            best = &p;
    out.lambda_ratio_star = best->ratio;
    out.rho_ce_at_star = best->rho_ce;
    const auto eta = transmit_probabilities(with_lambda_ratio(config, best->ratio));
    out.y_star = eta[0] / (eta[1] * best->ratio);
    return out;
}

ConcavityReport verify_concavity_in_m(const NetworkConfig& config, int m_max)
{
    validate(config);
    if (m_max < 3)
        throw Error(Errc::non_positive_parameter, "m_max must be >= 3");
    ConcavityReport report;
    for (int m = 1; m <= m_max; ++m) {
        NetworkConfig c = config;
        c.channels = m;
        report.channels.push_back(m);
        report.rho_ce.push_back(coexisting_success_probability(c));
    }
    const auto& v = report.rho_ce;
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        report.first_diff.push_back(v[i + 1] - v[i]);
    for (std::size_t i = 0; i + 2 < v.size(); ++i)
        report.second_diff.push_back(v[i + 2] - 2.0 * v[i + 1] + v[i]);

    for (std::size_t i = 0; i < report.first_diff.size(); ++i)
        if (!(report.first_diff[i] > 0.0))
            throw Error(Errc::concavity_violation,
                        "rho_ce not increasing at m = " + std::to_string(i + 1));
    for (std::size_t i = 0; i < report.second_diff.size(); ++i)
        if (!(report.second_diff[i] < 0.0))
            throw Error(Errc::concavity_violation,
                        "rho_ce not concave at m = " + std::to_string(i + 1));
    return report;
}

} // namespace coexist

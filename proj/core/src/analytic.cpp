#include <coexist/analytic.hpp>
#include <coexist/error.hpp>
#include <coexist/quadrature.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace coexist {

namespace {

constexpr double kEllTolerance = 1e-9;
constexpr double kRateTolerance = 1e-6;
constexpr double kTailFraction = 1e-10;
// Below this contention load the retaining probability uses its Taylor limit.
constexpr double kLoadFloor = 1e-12;

double retaining_probability(double load_per_channel, int channels)
{
    double p = 0.0;
    if (load_per_channel < kLoadFloor)
        p = 1.0 - load_per_channel / 2.0;
    else
        p = -std::expm1(-load_per_channel) / load_per_channel;
    return 1.0 - std::pow(1.0 - p, channels);
}

double power_ratio_term(const NetworkConfig& config, std::size_t t, std::size_t r,
                        std::span<const double> eta)
{
    const auto& rt = config.rats[t];
    const auto& rr = config.rats[r];
    return (eta[t] * rt.lambda) / (eta[r] * rr.lambda)
         * std::pow(rt.power / rr.power, 2.0 / config.alpha);
}

double success_from_sum(const NetworkConfig& config, double theta, double density_sum,
                        double tau)
{
    const double a = config.alpha;
    const double bracket = tau * density_sum - ell(theta, a, config.fading);
    return 1.0 / (1.0 + std::pow(theta, 2.0 / a) / config.channels * bracket);
}

double density_sum(const NetworkConfig& config, std::size_t r, std::span<const double> eta)
{
    double sum = 0.0;
    for (std::size_t t = 0; t < config.size(); ++t)
        sum += power_ratio_term(config, t, r, eta);
    return sum;
}

double rat_rate(const NetworkConfig& config, std::size_t r, std::span<const double> eta)
{
    const double tau = tau_alpha(config.alpha, config.fading);
    const double sum = density_sum(config, r, eta);
    auto success = [&](double theta) {
        if (theta <= 0.0)
            return 1.0;
        return success_from_sum(config, theta, sum, tau);
    };
    // 1 + theta^{2/a}(tau S - ell)/m > theta^{2/a} tau S / m because theta^{2/a} ell(theta) < 1 <= m
    const double tail_constant = config.channels / (tau * sum);
    return spectral_efficiency(success, config.alpha, tail_constant);
}

} // namespace

double transmit_probability(const NetworkConfig& config, std::size_t rat)
{
    validate(config);
    if (config.contention == Contention::none)
        return 1.0;
    const double radius = config.rats.at(rat).sense_radius;
    const double load = std::numbers::pi * radius * radius * config.total_density() / config.channels;
    return retaining_probability(load, config.channels);
}

std::vector<double> transmit_probabilities(const NetworkConfig& config)
{
    std::vector<double> eta(config.size());
    for (std::size_t r = 0; r < config.size(); ++r)
        eta[r] = transmit_probability(config, r);
    return eta;
}

double tau_alpha(double alpha, const FadingModel& fading)
{
    if (!(alpha > 2.0))
        throw Error(Errc::alpha_out_of_range, "tau_alpha needs alpha > 2");
    const double moment = fading.fractional_moment(alpha);
    return std::tgamma(1.0 - 2.0 / alpha) * moment;
}

double tau_alpha_cosecant(double alpha)
{
    if (!(alpha > 2.0))
        throw Error(Errc::alpha_out_of_range, "tau_alpha needs alpha > 2");
    if (std::isinf(alpha))
        return 1.0;
    const double x = 2.0 * std::numbers::pi / alpha;
    return x / std::sin(x);
}

double ell(double theta, double alpha, const FadingModel& fading)
{
    fading.require_rayleigh();
    if (!(alpha > 2.0))
        throw Error(Errc::alpha_out_of_range, "ell needs alpha > 2");
    if (!(theta > 0.0))
        throw Error(Errc::non_positive_parameter, "ell needs theta > 0");
    const double upper = std::pow(theta, -2.0 / alpha);
    if (upper == 0.0)
        return 0.0;
    const double half = alpha / 2.0;
    return quad::integrate([half](double t) { return 1.0 / (1.0 + std::pow(t, half)); }, 0.0,
                           upper, kEllTolerance);
}

double success_probability(const NetworkConfig& config, std::size_t rat)
{
    const auto eta = transmit_probabilities(config);
    return success_probability(config, rat, eta, config.rats.at(rat).sir_threshold);
}

double success_probability(const NetworkConfig& config, std::size_t rat,
                           std::span<const double> eta, double theta)
{
    validate(config);
    if (rat >= config.size() || eta.size() != config.size())
        throw Error(Errc::unknown_rat, "RAT index or eta vector out of range");
    const double tau = tau_alpha(config.alpha, config.fading);
    return success_from_sum(config, theta, density_sum(config, rat, eta), tau);
}

double success_probability_two_rat(const NetworkConfig& config, std::size_t rat)
{
    require_two_rat(config);
    const auto eta = transmit_probabilities(config);
    const std::size_t other = 1 - rat;
    const auto& self = config.rats.at(rat);
    const double a = config.alpha;
    const double tau = tau_alpha(a, config.fading);
    const double cross = (eta[other] * config.rats[other].lambda) / (eta[rat] * self.lambda)
                       * std::pow(config.rats[other].power / self.power, 2.0 / a);
    const double theta = self.sir_threshold;
    return 1.0
         / (1.0 + std::pow(theta, 2.0 / a) / config.channels
                      * (tau * (1.0 + cross) - ell(theta, a, config.fading)));
}

double coexisting_success_probability(const NetworkConfig& config)
{
    const auto eta = transmit_probabilities(config);
    double sum = 0.0;
    for (std::size_t r = 0; r < config.size(); ++r)
        sum += success_probability(config, r, eta, config.rats[r].sir_threshold);
    return sum / static_cast<double>(config.size());
}

double spectral_efficiency(const std::function<double(double)>& success, double alpha,
                           double tail_constant)
{
    auto integrand = [&](double x) { return success(std::exp2(x) - 1.0); };
    // For x >= 1, theta = 2^x - 1 >= 2^{x-1}, so the tail beyond X is at most
    // K alpha / (2 ln 2) 2^{-2(X-1)/alpha}.
    auto tail_bound = [&](double x) {
        return tail_constant * alpha / (2.0 * std::numbers::ln2) * std::exp2(-2.0 * (x - 1.0) / alpha);
    };
    constexpr double kHardStop = 1e5;

    double total = quad::integrate(integrand, 0.0, 1.0, kRateTolerance);
    double lo = 1.0;
    while (lo < kHardStop && tail_bound(lo) > kTailFraction * total) {
        const double hi = 2.0 * lo;
        total += quad::integrate(integrand, lo, hi, kRateTolerance);
        lo = hi;
    }
    return total;
}

double rat_spectral_efficiency(const NetworkConfig& config, std::size_t rat)
{
    const auto eta = transmit_probabilities(config);
    return rat_rate(config, rat, eta);
}

double coexisting_throughput(const NetworkConfig& config)
{
    const auto eta = transmit_probabilities(config);
    double sum = 0.0;
    for (std::size_t r = 0; r < config.size(); ++r)
        sum += rat_rate(config, r, eta);
    return sum / config.channels;
}

AnalyticIntermediates intermediates(const NetworkConfig& config)
{
    require_two_rat(config);
    const auto eta = transmit_probabilities(config);
    const double a = config.alpha;
    const double m = config.channels;

    AnalyticIntermediates out;
    out.tau_alpha = tau_alpha(a, config.fading);
    for (const auto& r : config.rats) {
        const double scale = std::pow(r.sir_threshold, 2.0 / a);
        const double l = ell(r.sir_threshold, a, config.fading);
        out.ell.push_back(l);
        out.c.push_back(1.0 + scale * (out.tau_alpha - l) / m);
        out.d.push_back(out.tau_alpha * scale / m);
    }
    const auto& s = config.rats[0];
    const auto& w = config.rats[1];
    out.y = (eta[0] * s.lambda) / (eta[1] * w.lambda) * std::pow(s.power / w.power, 2.0 / a);
    return out;
}

AnalyticReport analyze(const NetworkConfig& config, bool with_throughput)
{
    AnalyticReport report;
    report.eta = transmit_probabilities(config);
    double sum = 0.0;
    for (std::size_t r = 0; r < config.size(); ++r) {
        report.rho.push_back(
            success_probability(config, r, report.eta, config.rats[r].sir_threshold));
        sum += report.rho.back();
    }
    report.rho_ce = sum / static_cast<double>(config.size());
    if (with_throughput) {
        double rate_sum = 0.0;
        for (std::size_t r = 0; r < config.size(); ++r) {
            report.rate.push_back(rat_rate(config, r, report.eta));
            rate_sum += report.rate.back();
        }
        report.c_ce = rate_sum / config.channels;
    }
    return report;
}

} // namespace coexist

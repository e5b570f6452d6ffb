#include <coexist/error.hpp>
#include <coexist/model.hpp>

#include <cmath>
#include <set>

namespace coexist {

std::string_view to_string(Errc code) noexcept
{
    switch (code) {
    case Errc::alpha_out_of_range: return "AlphaOutOfRange";
    case Errc::non_positive_parameter: return "NonPositiveParameter";
    case Errc::duplicate_rat_id: return "DuplicateRatId";
    case Errc::zero_channels: return "ZeroChannels";
    case Errc::unknown_rat: return "UnknownRat";
    case Errc::not_two_rat: return "NotTwoRat";
    case Errc::degenerate_scenario: return "DegenerateScenario";
    case Errc::unsupported_fading: return "UnsupportedFading";
    case Errc::quadrature_failure: return "QuadratureFailure";
    case Errc::no_root_in_bracket: return "NoRootInBracket";
    case Errc::infeasible_constraint: return "InfeasibleConstraint";
    case Errc::concavity_violation: return "ConcavityViolation";
    }
    return "Unknown";
}

bool is_config_error(Errc code) noexcept
{
    switch (code) {
    case Errc::quadrature_failure:
    case Errc::no_root_in_bracket:
    case Errc::infeasible_constraint:
    case Errc::concavity_violation:
        return false;
    default:
        return true;
    }
}

std::size_t NetworkConfig::index_of(const std::string& id) const
{
    for (std::size_t i = 0; i < rats.size(); ++i)
        if (rats[i].id == id)
            return i;
    throw Error(Errc::unknown_rat, "no RAT with id '" + id + "'");
}

double NetworkConfig::total_density() const noexcept
{
    double sum = 0.0;
    for (const auto& r : rats)
        sum += r.lambda;
    return sum;
}

namespace {

void require_positive(double value, const std::string& field)
{
    if (!(value > 0.0) || !std::isfinite(value))
        throw Error(Errc::non_positive_parameter, field + " must be finite and > 0");
}

} // namespace

const NetworkConfig& validate(const NetworkConfig& config)
{
    // NaN fails the comparison as well
    if (!(config.alpha > 2.0))
        throw Error(Errc::alpha_out_of_range, "alpha must be > 2");
    if (config.channels < 1)
        throw Error(Errc::zero_channels, "channel count must be >= 1");
    if (config.rats.empty())
        throw Error(Errc::non_positive_parameter, "at least one RAT is required");

    std::set<std::string> ids;
    for (std::size_t i = 0; i < config.rats.size(); ++i) {
        const auto& r = config.rats[i];
        const std::string where = "rats[" + std::to_string(i) + "]";
        require_positive(r.lambda, where + ".lambda");
        require_positive(r.power, where + ".power");
        require_positive(r.sense_radius, where + ".sense_radius");
        require_positive(r.sir_threshold, where + ".sir_threshold");
        if (!ids.insert(r.id).second)
            throw Error(Errc::duplicate_rat_id, "RAT id '" + r.id + "' appears twice");
    }
    return config;
}

void require_two_rat(const NetworkConfig& config)
{
    if (config.size() != 2)
        throw Error(Errc::not_two_rat,
                    "operation needs exactly two RATs, got " + std::to_string(config.size()));
}

std::string_view to_string(FadingKind kind) noexcept
{
    switch (kind) {
    case FadingKind::rayleigh: return "rayleigh";
    case FadingKind::nakagami: return "nakagami";
    }
    return "unknown";
}

FadingKind parse_fading_kind(std::string_view name)
{
    if (name == "rayleigh")
        return FadingKind::rayleigh;
    if (name == "nakagami")
        return FadingKind::nakagami;
    throw Error(Errc::unsupported_fading, "unknown fading model '" + std::string(name) + "'");
}

void FadingModel::require_rayleigh() const
{
    if (kind != FadingKind::rayleigh)
        throw Error(Errc::unsupported_fading,
                    std::string(to_string(kind)) + " fading is not implemented");
}

double FadingModel::fractional_moment(double alpha) const
{
    require_rayleigh();
    // E[G^s] = Gamma(1 + s) for unit-mean exponential G
    return std::tgamma(1.0 + 2.0 / alpha);
}

double FadingModel::laplace(double s) const
{
    require_rayleigh();
    return 1.0 / (1.0 + s);
}

} // namespace coexist

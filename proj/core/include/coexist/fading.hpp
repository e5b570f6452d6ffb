#pragma once

#include <random>
#include <string_view>

namespace coexist {

enum class FadingKind { rayleigh, nakagami };

std::string_view to_string(FadingKind kind) noexcept;
FadingKind parse_fading_kind(std::string_view name);

/// Channel power-gain distribution shared by the serving link (H) and the
/// interference links (G). All gains have unit mean. Only Rayleigh is
/// wired; every hook throws Errc::unsupported_fading for other kinds.
struct FadingModel {
    FadingKind kind = FadingKind::rayleigh;

    /// E[G^{2/alpha}]
    double fractional_moment(double alpha) const;

    /// L_G(s) = E[exp(-s G)]
    double laplace(double s) const;

    template <class Urbg>
    double sample(Urbg& rng) const
    {
        require_rayleigh();
        return std::exponential_distribution<double>(1.0)(rng);
    }

    void require_rayleigh() const;
};

} // namespace coexist

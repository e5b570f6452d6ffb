#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coexist {

enum class Errc {
    // configuration
    alpha_out_of_range,
    non_positive_parameter,
    duplicate_rat_id,
    zero_channels,
    unknown_rat,
    not_two_rat,
    degenerate_scenario,
    unsupported_fading,
    // numerics
    quadrature_failure,
    no_root_in_bracket,
    infeasible_constraint,
    concavity_violation,
};

std::string_view to_string(Errc code) noexcept;

/// True for errors caused by the scenario itself rather than by a numerical routine.
bool is_config_error(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace coexist

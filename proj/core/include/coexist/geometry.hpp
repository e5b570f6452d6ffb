#pragma once

#include <coexist/model.hpp>
#include <coexist/rng.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace coexist {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Axis-aligned rectangle in meters.
struct Window {
    double x_min = -500.0;
    double y_min = -500.0;
    double x_max = 500.0;
    double y_max = 500.0;

    static Window centered(double half_width) { return {-half_width, -half_width, half_width, half_width}; }

    double width() const noexcept { return x_max - x_min; }
    double height() const noexcept { return y_max - y_min; }
    double area() const noexcept { return width() * height(); }
    Point center() const noexcept { return {(x_min + x_max) / 2.0, (y_min + y_max) / 2.0}; }
    bool contains(Point p) const noexcept
    {
        return p.x >= x_min && p.x < x_max && p.y >= y_min && p.y < y_max;
    }
};

inline constexpr int kNoChannel = 0;

struct AccessPoint {
    Point position;
    std::size_t rat = 0;
    double mark = 0.0;      // contention priority in [0, 1), lower wins
    int channel = kNoChannel; // 1..m when assigned
    bool transmitting = false;
};

struct PointPattern {
    std::vector<AccessPoint> points;
    Window window;
    bool torus = true;

    /// Euclidean distance, using the minimum image when `torus` is set.
    double distance(Point a, Point b) const noexcept;
    double distance_squared(Point a, Point b) const noexcept;

    void append(const PointPattern& other);
};

/// Homogeneous PPP of `density` APs/m^2 on `window`, all tagged with `rat`.
///
/// Points are generated as arrivals of a unit-rate Poisson process on
/// [0, density * area], so for a fixed seed the pattern at a lower density is a
/// prefix of the pattern at a higher one. Density sweeps inherit common random
/// numbers from this.
PointPattern sample_ppp(double density, const Window& window, std::size_t rat, std::uint64_t seed,
                        bool torus = true);

/// Appends PPP points to `pattern` using its window.
void sample_ppp(PointPattern& pattern, double density, std::size_t rat, Rng& rng);

/// Independent thinning: each RAT-r AP transmits with probability eta[r] on a
/// uniformly chosen channel in 1..channels.
void contend_thinned_ppp(PointPattern& pattern, std::span<const double> eta, int channels, Rng& rng);

/// Thinning with eta taken from the CSMA retaining probability of `config`.
PointPattern contend_thinned_ppp(PointPattern pattern, const NetworkConfig& config,
                                 std::uint64_t seed);

/// Sequential Matern type-II style CSMA. APs are processed by increasing mark;
/// each sees the channels already claimed by earlier APs (any RAT) within its
/// own sensing radius and claims a uniformly chosen free channel, or stays silent.
void contend_matern_csma(PointPattern& pattern, const NetworkConfig& config, Rng& rng);

PointPattern contend_matern_csma(PointPattern pattern, const NetworkConfig& config,
                                 std::uint64_t seed);

struct NearestAp {
    std::size_t index = 0;
    double distance = 0.0;
};

/// Closest transmitting RAT-`rat` AP to `origin`, or nullopt.
std::optional<NearestAp> nearest_transmitting(const PointPattern& pattern, std::size_t rat,
                                              Point origin);

/// Square window centered at the origin whose half-width is at least five mean
/// nearest-AP distances plus 10 / sqrt(pi lambda_min), and never below 500 m.
Window recommended_window(const NetworkConfig& config);

/// Number of same-channel transmitting pairs (i, j), mark_i < mark_j, with
/// distance(i, j) < R_j. Zero for any Matern-contended pattern.
std::size_t count_hard_core_violations(const PointPattern& pattern, const NetworkConfig& config);

} // namespace coexist

#include <coexist/analytic.hpp>
#include <coexist/geometry.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace coexist {

double PointPattern::distance_squared(Point a, Point b) const noexcept
{
    double dx = std::abs(a.x - b.x);
    double dy = std::abs(a.y - b.y);
    if (torus) {
        dx = std::min(dx, window.width() - dx);
        dy = std::min(dy, window.height() - dy);
    }
    return dx * dx + dy * dy;
}

double PointPattern::distance(Point a, Point b) const noexcept
{
    return std::sqrt(distance_squared(a, b));
}

void PointPattern::append(const PointPattern& other)
{
    points.insert(points.end(), other.points.begin(), other.points.end());
}

void sample_ppp(PointPattern& pattern, double density, std::size_t rat, Rng& rng)
{
    const Window& w = pattern.window;
    const double mass = density * w.area();
    if (!(mass > 0.0))
        return;
    std::exponential_distribution<double> gap(1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double arrival = gap(rng);
    while (arrival <= mass) {
        AccessPoint ap;
        ap.position = {w.x_min + unit(rng) * w.width(), w.y_min + unit(rng) * w.height()};
        ap.rat = rat;
        ap.mark = unit(rng);
        pattern.points.push_back(ap);
        arrival += gap(rng);
    }
}

PointPattern sample_ppp(double density, const Window& window, std::size_t rat, std::uint64_t seed,
                        bool torus)
{
    PointPattern pattern;
    pattern.window = window;
    pattern.torus = torus;
    Rng rng = make_stream(seed, 0);
    sample_ppp(pattern, density, rat, rng);
    return pattern;
}

void contend_thinned_ppp(PointPattern& pattern, std::span<const double> eta, int channels, Rng& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> pick(1, channels);
    for (auto& ap : pattern.points) {
        // both draws always happen so each AP consumes a fixed slice of the stream
        const double u = unit(rng);
        const int channel = pick(rng);
        ap.transmitting = u < eta[ap.rat];
        ap.channel = ap.transmitting ? channel : kNoChannel;
    }
}

PointPattern contend_thinned_ppp(PointPattern pattern, const NetworkConfig& config,
                                 std::uint64_t seed)
{
    const auto eta = transmit_probabilities(config);
    Rng rng = make_stream(seed, 0, 1);
    contend_thinned_ppp(pattern, eta, config.channels, rng);
    return pattern;
}

namespace {

/// Uniform grid over the window holding indices of APs that already claimed a channel.
class ClaimGrid {
public:
    ClaimGrid(const PointPattern& pattern, double cell_size)
        : pattern_(pattern)
    {
        const Window& w = pattern.window;
        nx_ = std::max(1, static_cast<int>(std::floor(w.width() / cell_size)));
        ny_ = std::max(1, static_cast<int>(std::floor(w.height() / cell_size)));
        cells_.resize(static_cast<std::size_t>(nx_) * ny_);
    }

    void insert(std::size_t index)
    {
        cells_[cell_of(pattern_.points[index].position)].push_back(index);
    }

    template <class F>
    void for_each_near(Point p, F&& f) const
    {
        const auto [cx, cy] = coords(p);
        int xs[3];
        int ys[3];
        const int nxs = neighbours(cx, nx_, xs);
        const int nys = neighbours(cy, ny_, ys);
        for (int i = 0; i < nxs; ++i)
            for (int j = 0; j < nys; ++j)
                for (std::size_t idx : cells_[static_cast<std::size_t>(ys[j]) * nx_ + xs[i]])
                    f(idx);
    }

private:
    std::pair<int, int> coords(Point p) const
    {
        const Window& w = pattern_.window;
        int cx = static_cast<int>((p.x - w.x_min) / w.width() * nx_);
        int cy = static_cast<int>((p.y - w.y_min) / w.height() * ny_);
        return {std::clamp(cx, 0, nx_ - 1), std::clamp(cy, 0, ny_ - 1)};
    }

    std::size_t cell_of(Point p) const
    {
        const auto [cx, cy] = coords(p);
        return static_cast<std::size_t>(cy) * nx_ + cx;
    }

    // Distinct neighbouring cell coordinates along one axis.
    int neighbours(int c, int n, int out[3]) const
    {
        int count = 0;
        for (int d = -1; d <= 1; ++d) {
            int v = c + d;
            if (pattern_.torus)
                v = (v + n) % n;
            else if (v < 0 || v >= n)
                continue;
            if (std::find(out, out + count, v) == out + count)
                out[count++] = v;
        }
        return count;
    }

    const PointPattern& pattern_;
    int nx_ = 1;
    int ny_ = 1;
    std::vector<std::vector<std::size_t>> cells_;
};

} // namespace

void contend_matern_csma(PointPattern& pattern, const NetworkConfig& config, Rng& rng)
{
    const int m = config.channels;
    if (config.contention == Contention::none) {
        std::vector<double> ones(config.size(), 1.0);
        contend_thinned_ppp(pattern, ones, m, rng);
        return;
    }

    double cell = 0.0;
    for (const auto& r : config.rats)
        cell = std::max(cell, r.sense_radius);

    std::vector<std::size_t> order(pattern.points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pattern.points[a].mark < pattern.points[b].mark;
    });

    ClaimGrid grid(pattern, cell);
    std::vector<int> occupied;
    for (std::size_t idx : order) {
        AccessPoint& ap = pattern.points[idx];
        const double radius = config.rats[ap.rat].sense_radius;
        occupied.clear();
        grid.for_each_near(ap.position, [&](std::size_t other) {
            const AccessPoint& o = pattern.points[other];
            if (pattern.distance(ap.position, o.position) < radius)
                occupied.push_back(o.channel);
        });
        std::sort(occupied.begin(), occupied.end());
        occupied.erase(std::unique(occupied.begin(), occupied.end()), occupied.end());

        const int free_count = m - static_cast<int>(occupied.size());
        if (free_count <= 0) {
            ap.transmitting = false;
            ap.channel = kNoChannel;
            continue;
        }
        // k-th free channel, skipping the sorted occupied list
        int k = std::uniform_int_distribution<int>(0, free_count - 1)(rng);
        int channel = 1;
        for (int c : occupied) {
            if (c - channel > k)
                break;
            k -= c - channel;
            channel = c + 1;
        }
        ap.channel = channel + k;
        ap.transmitting = true;
        grid.insert(idx);
    }
}

PointPattern contend_matern_csma(PointPattern pattern, const NetworkConfig& config,
                                 std::uint64_t seed)
{
    Rng rng = make_stream(seed, 0, 1);
    contend_matern_csma(pattern, config, rng);
    return pattern;
}

std::optional<NearestAp> nearest_transmitting(const PointPattern& pattern, std::size_t rat,
                                              Point origin)
{
    std::optional<NearestAp> best;
    for (std::size_t i = 0; i < pattern.points.size(); ++i) {
        const auto& ap = pattern.points[i];
        if (!ap.transmitting || ap.rat != rat)
            continue;
        const double d = pattern.distance(origin, ap.position);
        if (!best || d < best->distance)
            best = NearestAp{i, d};
    }
    return best;
}

Window recommended_window(const NetworkConfig& config)
{
    const auto eta = transmit_probabilities(config);
    double lambda_min = config.rats.front().lambda;
    double mean_nn = 0.0;
    for (std::size_t r = 0; r < config.size(); ++r) {
        lambda_min = std::min(lambda_min, config.rats[r].lambda);
        // E[D] = 1 / (2 sqrt(density)) for the nearest point of a PPP
        mean_nn = std::max(mean_nn, 0.5 / std::sqrt(eta[r] * config.rats[r].lambda));
    }
    const double half = 5.0 * mean_nn + 10.0 / std::sqrt(std::numbers::pi * lambda_min);
    return Window::centered(std::max(500.0, half));
}

std::size_t count_hard_core_violations(const PointPattern& pattern, const NetworkConfig& config)
{
    std::size_t violations = 0;
    const auto& pts = pattern.points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!pts[i].transmitting)
            continue;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (i == j || !pts[j].transmitting || pts[i].channel != pts[j].channel)
                continue;
            if (!(pts[i].mark < pts[j].mark))
                continue;
            if (pattern.distance(pts[i].position, pts[j].position) < config.rats[pts[j].rat].sense_radius)
                ++violations;
        }
    }
    return violations;
}

} // namespace coexist

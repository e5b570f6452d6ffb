#include <coexist/analytic.hpp>
#include <coexist/geometry.hpp>
#include <coexist/montecarlo.hpp>

#include <boost/math/distributions/chi_squared.hpp>

#include "doctest.h"
#include "scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace coexist;

namespace {

double mean_of(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v)
        s += x;
    return s / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v)
{
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v)
        s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

AccessPoint ap_at(double x, double y, double mark, std::size_t rat = 0)
{
    AccessPoint ap;
    ap.position = {x, y};
    ap.mark = mark;
    ap.rat = rat;
    return ap;
}

} // namespace

TEST_CASE("torus distance uses the minimum image")
{
    PointPattern p;
    CHECK(p.distance({-490, 0}, {490, 0}) == doctest::Approx(20.0));
    CHECK(p.distance({0, 0}, {3, 4}) == doctest::Approx(5.0));
    p.torus = false;
    CHECK(p.distance({-490, 0}, {490, 0}) == doctest::Approx(980.0));
}

TEST_CASE("ppp: empty, deterministic, nested in density")
{
    const Window w;
    CHECK(sample_ppp(0.0, w, 0, 1).points.empty());

    const auto a = sample_ppp(1e-4, w, 0, 42);
    const auto b = sample_ppp(1e-4, w, 0, 42);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].position.x == b.points[i].position.x);
        CHECK(a.points[i].mark == b.points[i].mark);
    }
    for (const auto& p : a.points)
        CHECK(w.contains(p.position));

    const auto dense = sample_ppp(3e-4, w, 0, 42);
    REQUIRE(dense.points.size() >= a.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i)
        CHECK(dense.points[i].position.y == a.points[i].position.y);
}

TEST_CASE("ppp: count is Poisson(lambda area)")
{
    const int reps = 10'000;
    std::vector<double> counts;
    for (int i = 0; i < reps; ++i)
        counts.push_back(static_cast<double>(sample_ppp(1e-4, Window{}, 0, 1000 + i).points.size()));
    const double mu = 100.0;
    // sd of the sample mean: sqrt(mu / n); of the sample variance: sqrt((mu + 2 mu^2) / n)
    CHECK(std::abs(mean_of(counts) - mu) < 3.0 * std::sqrt(mu / reps));
    CHECK(std::abs(variance_of(counts) - mu) < 3.0 * std::sqrt((mu + 2 * mu * mu) / reps));
}

TEST_CASE("thinning with eta = 1 on one channel keeps everything on channel 1")
{
    auto p = sample_ppp(2e-4, Window{}, 0, 5);
    Rng rng = make_stream(5, 0, 1);
    const double ones[] = {1.0};
    contend_thinned_ppp(p, ones, 1, rng);
    for (const auto& ap : p.points) {
        CHECK(ap.transmitting);
        CHECK(ap.channel == 1);
    }
}

TEST_CASE("thinning: transmitting fraction and channel occupancy")
{
    const auto c = testing::fig1(5);
    const double eta_s = transmit_probability(c, 0);
    McOptions opt;
    opt.seed = 99;
    std::size_t total = 0;
    std::size_t on = 0;
    std::vector<double> per_channel(5, 0.0);
    std::vector<std::vector<double>> counts(5);   // per-channel transmitting count per drop, RAT s
    const int drops = 2000;
    for (int d = 0; d < drops; ++d) {
        const auto p = sample_drop_pattern(c, opt, d);
        std::vector<double> local(5, 0.0);
        for (const auto& ap : p.points) {
            if (ap.transmitting) {
                REQUIRE(ap.channel >= 1);
                REQUIRE(ap.channel <= 5);
                per_channel[ap.channel - 1] += 1.0;
            } else {
                CHECK(ap.channel == kNoChannel);
            }
            if (ap.rat != 0)
                continue;
            ++total;
            on += ap.transmitting ? 1 : 0;
            if (ap.transmitting)
                local[ap.channel - 1] += 1.0;
        }
        for (int k = 0; k < 5; ++k)
            counts[k].push_back(local[k]);
    }
    const double frac = static_cast<double>(on) / static_cast<double>(total);
    CHECK(std::abs(frac - eta_s) < 4.0 * std::sqrt(eta_s * (1 - eta_s) / total) + 1e-12);

    const double expected = mean_of(per_channel);
    double chi2 = 0.0;
    for (double o : per_channel)
        chi2 += (o - expected) * (o - expected) / expected;
    CHECK(chi2 < quantile(boost::math::chi_squared(4.0), 0.99));

    // Poisson per channel: index of dispersion 1 with sd about sqrt(2 / (n - 1))
    for (const auto& v : counts)
        CHECK(std::abs(variance_of(v) / mean_of(v) - 1.0) < 3.0 * std::sqrt(2.0 / (drops - 1)));
}

TEST_CASE("squared nearest-transmitter distance is exponential(pi eta lambda)")
{
    const auto c = testing::fig1(1);   // eta_s = 0.30, the thinning matters
    McOptions opt;
    opt.seed = 2024;
    for (std::size_t r = 0; r < 2; ++r) {
        const double rate = std::numbers::pi * transmit_probability(c, r) * c.rats[r].lambda;
        std::vector<double> d2;
        const int n = 4000;
        for (int d = 0; d < n; ++d) {
            const auto p = sample_drop_pattern(c, opt, d);
            const auto near = nearest_transmitting(p, r, p.window.center());
            REQUIRE(near);
            d2.push_back(near->distance * near->distance);
        }
        std::sort(d2.begin(), d2.end());
        double ks = 0.0;
        for (int i = 0; i < n; ++i) {
            const double f = -std::expm1(-rate * d2[i]);
            ks = std::max({ks, f - double(i) / n, double(i + 1) / n - f});
        }
        CHECK(ks < 1.6276 / std::sqrt(double(n)));
    }
}

TEST_CASE("nearest transmitting AP")
{
    PointPattern p;
    CHECK_FALSE(nearest_transmitting(p, 0, {0, 0}));
    p.points = {ap_at(30, 40, 0.1), ap_at(1, 1, 0.2), ap_at(5, 0, 0.3, 1)};
    p.points[0].transmitting = true;
    p.points[2].transmitting = true;
    const auto n = nearest_transmitting(p, 0, {0, 0});
    REQUIRE(n);
    CHECK(n->index == 0);
    CHECK(n->distance == doctest::Approx(50.0));
    CHECK(nearest_transmitting(p, 1, {0, 0})->index == 2);
}

TEST_CASE("matern: isolated and paired access points")
{
    auto c = testing::fig1(1);
    PointPattern lone;
    lone.points = {ap_at(0, 0, 0.7)};
    CHECK(contend_matern_csma(lone, c, 1).points[0].transmitting);

    PointPattern pair;
    pair.points = {ap_at(0, 0, 0.6), ap_at(10, 0, 0.2, 1)};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        c.channels = 1;
        const auto one = contend_matern_csma(pair, c, seed);
        CHECK_FALSE(one.points[0].transmitting);
        CHECK(one.points[1].transmitting);

        c.channels = 2;
        const auto two = contend_matern_csma(pair, c, seed);
        CHECK(two.points[0].transmitting);
        CHECK(two.points[1].transmitting);
        CHECK(two.points[0].channel != two.points[1].channel);
    }
}

TEST_CASE("matern: hard core holds and free channels are chosen uniformly")
{
    const auto c = testing::fig1(2);
    McOptions opt;
    opt.mode = ContentionMode::matern;
    std::vector<double> per_channel(2, 0.0);
    for (int d = 0; d < 200; ++d) {
        const auto p = sample_drop_pattern(c, opt, d);
        CHECK(count_hard_core_violations(p, c) == 0);
        for (const auto& ap : p.points)
            if (ap.transmitting)
                per_channel[ap.channel - 1] += 1.0;
    }
    const double expected = mean_of(per_channel);
    double chi2 = 0.0;
    for (double o : per_channel)
        chi2 += (o - expected) * (o - expected) / expected;
    CHECK(chi2 < quantile(boost::math::chi_squared(1.0), 0.99));
}

TEST_CASE("matern without sensing transmits everything")
{
    auto c = testing::fig1(3);
    c.contention = Contention::none;
    const auto p = contend_matern_csma(sample_ppp(1e-3, Window{}, 0, 3), c, 3);
    for (const auto& ap : p.points)
        CHECK(ap.transmitting);
}

TEST_CASE("contention is deterministic given pattern and seed")
{
    const auto c = testing::fig1(2);
    const auto base = sample_ppp(4e-4, Window{}, 0, 11);
    for (auto contend : {+[](const PointPattern& p, const NetworkConfig& cfg, std::uint64_t s) {
                             return contend_thinned_ppp(p, cfg, s);
                         },
                         +[](const PointPattern& p, const NetworkConfig& cfg, std::uint64_t s) {
                             return contend_matern_csma(p, cfg, s);
                         }}) {
        const auto a = contend(base, c, 8);
        const auto b = contend(base, c, 8);
        for (std::size_t i = 0; i < a.points.size(); ++i) {
            CHECK(a.points[i].channel == b.points[i].channel);
            CHECK(a.points[i].transmitting == b.points[i].transmitting);
        }
    }
}

TEST_CASE("recommended window covers the guard distance")
{
    const auto c = testing::fig1(5);
    const auto w = recommended_window(c);
    const double guard = 10.0 / std::sqrt(std::numbers::pi * 1e-4);
    CHECK(w.width() / 2 >= guard);
    CHECK(w.width() / 2 >= 500.0);
    CHECK(w.center().x == 0.0);
}

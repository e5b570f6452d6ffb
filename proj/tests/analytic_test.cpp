#include <coexist/analytic.hpp>
#include <coexist/error.hpp>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "doctest.h"
#include "scenarios.hpp"

#include <cmath>
#include <numbers>
#include <limits>
#include <random>

using namespace coexist;
using std::numbers::pi;

TEST_CASE("tau_alpha: gamma product against cosecant form")
{
    CHECK(std::abs(tau_alpha(4.0) - pi / 2) < 1e-12);
    CHECK(std::abs(tau_alpha_cosecant(4.0) - pi / 2) < 1e-12);
    for (double a : {2.1, 2.5, 3.0, 4.0, 6.0})
        CHECK(std::abs(tau_alpha(a) - tau_alpha_cosecant(a)) < 1e-12 * tau_alpha(a));
    CHECK(tau_alpha(1e9) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(tau_alpha_cosecant(std::numeric_limits<double>::infinity()) == 1.0);
    CHECK_THROWS_AS(tau_alpha(4.0, FadingModel{FadingKind::nakagami}), Error);
}

TEST_CASE("ell against the arctan antiderivative at alpha = 4")
{
    // integrand 1/(1+t^2): ell(theta) = atan(theta^{-1/2})
    CHECK(std::abs(ell(0.5, 4.0) - std::atan(std::sqrt(2.0))) < 1e-9);
    CHECK(std::abs(ell(1.0, 4.0) - pi / 4) < 1e-9);
    for (double theta : {1e-3, 0.1, 3.0, 100.0, 1e6})
        CHECK(ell(theta, 4.0) == doctest::Approx(std::atan(1.0 / std::sqrt(theta))).epsilon(1e-9));
}

TEST_CASE("ell limits and ordering")
{
    CHECK(std::abs(ell(1e-8, 4.0) - pi / 2) < 1e-4);
    for (double a : {2.5, 3.0, 4.0, 5.0}) {
        const double tau = tau_alpha(a);
        // the missing tail beyond x = theta^{-2/alpha} is below x^{1 - alpha/2} / (alpha/2 - 1)
        const double x = std::pow(1e-8, -2.0 / a);
        CHECK(tau - ell(1e-8, a) < std::pow(x, 1.0 - a / 2) / (a / 2 - 1));
        double prev = tau;
        for (double theta = 1e-3; theta < 1e4; theta *= 3.0) {
            const double v = ell(theta, a);
            CHECK(v > 0.0);
            CHECK(v < prev);
            CHECK(v < std::pow(theta, -2.0 / a) * (1.0 + 1e-12));
            prev = v;
        }
    }
    CHECK(ell(1e20, 4.0) < 1e-9);
    CHECK_THROWS_AS(ell(0.0, 4.0), Error);
}

TEST_CASE("transmit probability")
{
    const auto c = testing::fig1(5);
    // 1 - (1 - (1 - e^{-N/m})/(N/m))^m, N_s = pi 50^2 4e-4 = pi
    auto oracle = [](double n, int m) {
        const double x = n / m;
        return 1.0 - std::pow(1.0 - (1.0 - std::exp(-x)) / x, m);
    };
    CHECK(transmit_probability(c, 0) == doctest::Approx(oracle(pi, 5)).epsilon(1e-12));
    CHECK(transmit_probability(c, 0) == doctest::Approx(0.99887).epsilon(1e-5));
    CHECK(transmit_probability(c, 1) == doctest::Approx(oracle(pi * 0.36, 5)).epsilon(1e-12));
    CHECK(transmit_probability(c, 1) == doctest::Approx(0.99999).epsilon(1e-5));

    auto sparse = c;
    sparse.rats[0].lambda = sparse.rats[1].lambda = 1e-300;
    CHECK(transmit_probability(sparse, 0) == 1.0);

    auto off = c;
    off.contention = Contention::none;
    CHECK(transmit_probabilities(off) == std::vector<double>{1.0, 1.0});
}

TEST_CASE("transmit probability increases to one in m")
{
    auto c = testing::fig1(1);
    double prev = 0.0;
    for (int m = 1; m <= 50; ++m) {
        c.channels = m;
        const double eta = transmit_probability(c, 0);
        if (eta < 1.0)
            CHECK(eta > prev);
        CHECK(eta <= 1.0);
        prev = eta;
    }
    c.channels = 1'000'000;
    CHECK(transmit_probability(c, 0) > 1.0 - 1e-6);
}

TEST_CASE("single RAT, one channel, sensing off, theta = 1")
{
    auto c = testing::single_rat(1e-4, 1.0);
    c.contention = Contention::none;
    CHECK(std::abs(success_probability(c, 0) - 1.0 / (1.0 + pi / 4)) < 1e-9);
    CHECK(success_probability(c, 0) == doctest::Approx(0.5601).epsilon(1e-4));
}

TEST_CASE("general form agrees with the two-RAT form on random scenarios")
{
    std::mt19937_64 gen(7);
    auto logu = [&](double lo, double hi) {
        return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(gen));
    };
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        NetworkConfig c;
        c.alpha = std::uniform_real_distribution<double>(2.2, 6.0)(gen);
        c.channels = std::uniform_int_distribution<int>(1, 12)(gen);
        c.rats = {{"s", logu(1e-6, 1e-3), logu(0.01, 10), logu(5, 200), logu(1e-2, 1e2)},
                  {"w", logu(1e-6, 1e-3), logu(0.01, 10), logu(5, 200), logu(1e-2, 1e2)}};
        for (std::size_t r = 0; r < 2; ++r)
            worst = std::max(worst, std::abs(success_probability(c, r) - success_probability_two_rat(c, r)));
    }
    CHECK(worst <= 1e-14);
}

TEST_CASE("success probability properties")
{
    const auto c = testing::fig1(5);
    const auto report = analyze(c, false);
    CHECK(report.rho_ce == (report.rho[0] + report.rho[1]) / 2.0);
    for (double p : report.rho) {
        CHECK(p > 0.0);
        CHECK(p < 1.0);
    }

    // symmetry
    auto sym = c;
    sym.rats[1] = {"w", 1e-4, 1.0, 50.0, 0.5};
    CHECK(success_probability(sym, 0) == doctest::Approx(success_probability(sym, 1)).epsilon(1e-15));
    CHECK(coexisting_success_probability(sym) == doctest::Approx(success_probability(sym, 0)).epsilon(1e-15));

    // decreasing in theta
    auto t = c;
    double prev = 1.0;
    for (double theta = 0.01; theta < 100.0; theta *= 2.0) {
        t.rats[0].sir_threshold = theta;
        const double p = success_probability(t, 0);
        CHECK(p < prev);
        prev = p;
    }

    // m -> infinity
    auto big = c;
    big.channels = 1'000'000;
    CHECK(coexisting_success_probability(big) > 1.0 - 1e-3);
}

TEST_CASE("scale invariances")
{
    const auto c = testing::fig1(5);
    auto loud = c;
    for (auto& r : loud.rats)
        r.power *= 8.0;
    CHECK(success_probability(loud, 0) == doctest::Approx(success_probability(c, 0)).epsilon(1e-15));
    CHECK(success_probability(loud, 1) == doctest::Approx(success_probability(c, 1)).epsilon(1e-15));

    auto off = c;
    off.contention = Contention::none;
    auto dense = off;
    for (auto& r : dense.rats)
        r.lambda *= 7.0;
    for (std::size_t r = 0; r < 2; ++r)
        CHECK(success_probability(dense, r) == doctest::Approx(success_probability(off, r)).epsilon(1e-14));
}

TEST_CASE("coexisting success is increasing and concave in m")
{
    auto c = testing::fig1(1);
    std::vector<double> v;
    for (int m = 1; m <= 22; ++m) {
        c.channels = m;
        v.push_back(coexisting_success_probability(c));
    }
    for (std::size_t i = 0; i + 2 < v.size(); ++i) {
        CHECK(v[i + 1] > v[i]);
        CHECK(v[i + 2] - 2.0 * v[i + 1] + v[i] < 0.0);
    }
}

TEST_CASE("spectral efficiency against the closed-form single-RAT rate")
{
    // alpha = 4, eta = 1: rho(theta) = 1 / (1 + sqrt(theta) atan(sqrt(theta)) / m)
    for (int m : {1, 5}) {
        auto c = testing::single_rat(1e-4, 1.0, m);
        c.contention = Contention::none;
        auto rho = [m](double x) {
            const double s = std::sqrt(std::expm1(x * std::numbers::ln2));
            return 1.0 / (1.0 + s * std::atan(s) / m);
        };
        boost::math::quadrature::exp_sinh<double> integrator;
        const double oracle = integrator.integrate(rho, 1e-13);
        CHECK(rat_spectral_efficiency(c, 0) == doctest::Approx(oracle).epsilon(1e-6));
        CHECK(coexisting_throughput(c) == doctest::Approx(oracle / m).epsilon(1e-6));
    }
}

TEST_CASE("spectral efficiency of a vanishing integrand is zero")
{
    CHECK(spectral_efficiency([](double) { return 0.0; }, 4.0, 1.0) == 0.0);
}

TEST_CASE("throughput is power-scale invariant")
{
    const auto c = testing::fig1(5);
    auto loud = c;
    for (auto& r : loud.rats)
        r.power *= 4.0;
    CHECK(coexisting_throughput(loud) == doctest::Approx(coexisting_throughput(c)).epsilon(1e-12));
}

TEST_CASE("intermediates at the reference scenario")
{
    const auto im = intermediates(testing::fig1(5));
    const double c_oracle = 1.0 + std::sqrt(0.5) * (pi / 2 - std::atan(std::sqrt(2.0))) / 5.0;
    CHECK(im.tau_alpha == doctest::Approx(pi / 2));
    CHECK(im.c[0] == doctest::Approx(c_oracle).epsilon(1e-9));
    CHECK(im.c[1] == doctest::Approx(c_oracle).epsilon(1e-9));
    CHECK(im.d[0] == doctest::Approx(std::sqrt(0.5) * pi / 2 / 5.0).epsilon(1e-12));
}

#pragma once

#include <coexist/error.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace coexist::quad {

struct Segment {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double error = 0.0;   // |K15 - G7|
    double l1 = 0.0;      // K15 estimate of the integral of |f|

    bool operator<(const Segment& o) const noexcept { return error < o.error; }
};

/// 7-point Gauss / 15-point Kronrod pair on [a, b].
template <class F>
Segment gauss_kronrod_15(F& f, double a, double b)
{
    static constexpr std::array<double, 8> xk = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.0};
    static constexpr std::array<double, 8> wk = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    // Gauss weights for xk[1], xk[3], xk[5] and the center
    static constexpr std::array<double, 4> wg = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = wk[7] * fc;
    double gauss = wg[3] * fc;
    double l1 = wk[7] * std::abs(fc);
    for (int i = 0; i < 7; ++i) {
        const double dx = half * xk[i];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        kronrod += wk[i] * (f1 + f2);
        l1 += wk[i] * (std::abs(f1) + std::abs(f2));
        if (i % 2 == 1)
            gauss += wg[i / 2] * (f1 + f2);
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half), std::abs(l1 * half)};
}

/// Globally adaptive Gauss-Kronrod over the finite interval [a, b]: the segment with
/// the largest error estimate is bisected until the summed error is within
/// rel_tol of the integral (or at roundoff level). Throws Errc::quadrature_failure
/// when `max_segments` is exhausted first.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol, std::size_t max_segments = 2000)
{
    if (a == b)
        return 0.0;
    std::vector<Segment> heap{gauss_kronrod_15(f, a, b)};
    double value = heap.front().value;
    double error = heap.front().error;
    double l1 = heap.front().l1;

    auto converged = [&] {
        const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * l1;
        return error <= std::max(rel_tol * std::abs(value), roundoff);
    };

    while (!converged()) {
        if (heap.size() >= max_segments || !std::isfinite(value))
            throw Error(Errc::quadrature_failure,
                        "integral over [" + std::to_string(a) + ", " + std::to_string(b)
                            + "] stalled at error " + std::to_string(error) + " for value "
                            + std::to_string(value));
        std::pop_heap(heap.begin(), heap.end());
        const Segment worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        const Segment left = gauss_kronrod_15(f, worst.a, mid);
        const Segment right = gauss_kronrod_15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        l1 += left.l1 + right.l1 - worst.l1;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end());
    }
    // resum to shed the drift of the running total
    double total = 0.0;
    for (const auto& s : heap)
        total += s.value;
    return total;
}

} // namespace coexist::quad

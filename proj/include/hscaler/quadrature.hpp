#pragma once

#include "hscaler/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace hscaler {

struct QuadratureOptions {
    double rtol = 1e-10;
    double atol = 1e-14;
    int max_intervals = 4000;
};

struct QuadratureResult {
    double value = 0;
    double error_estimate = 0;
    int intervals = 1;
};

namespace detail {

// 15-point Kronrod / 7-point Gauss rule (QUADPACK dqk15 constants).
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
inline constexpr double kGK15WeightsK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr double kGK15WeightsG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

template <typename F>
inline void gk15(F&& f, double a, double b, double& value, double& error) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fc = f(center);
    double result_g = fc * kGK15WeightsG[3];
    double result_k = fc * kGK15WeightsK[7];
    for (int j = 0; j < 7; ++j) {
        double x = half * kGK15Nodes[j];
        double f1 = f(center - x);
        double f2 = f(center + x);
        result_k += kGK15WeightsK[j] * (f1 + f2);
        if (j % 2 == 1) result_g += kGK15WeightsG[j / 2] * (f1 + f2);
    }
    value = result_k * half;
    error = std::abs((result_k - result_g) * half);
}

} // namespace detail

// Globally adaptive bisection on the worst interval.
template <typename F>
QuadratureResult integrate_adaptive(F&& f, double a, double b,
                                    const QuadratureOptions& opt = {}) {
    struct Interval {
        double a, b, value, error;
        bool operator<(const Interval& o) const { return error < o.error; }
    };

    if (a == b) return {0.0, 0.0, 0};

    std::priority_queue<Interval> heap;
    Interval whole{a, b, 0, 0};
    detail::gk15(f, a, b, whole.value, whole.error);
    heap.push(whole);
    double total = whole.value;
    double total_err = whole.error;
    int n = 1;

    while (total_err > std::max(opt.atol, opt.rtol * std::abs(total))) {
        if (n >= opt.max_intervals)
            throw IntegratorFailure("quadrature: interval limit exceeded");
        Interval worst = heap.top();
        heap.pop();
        double mid = 0.5 * (worst.a + worst.b);
        Interval left{worst.a, mid, 0, 0}, right{mid, worst.b, 0, 0};
        detail::gk15(f, left.a, left.b, left.value, left.error);
        detail::gk15(f, right.a, right.b, right.value, right.error);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++n;
    }
    return {total, total_err, n};
}

} // namespace hscaler

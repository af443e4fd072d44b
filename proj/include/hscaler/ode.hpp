#pragma once

#include "hscaler/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace hscaler {

struct IntegratorOptions {
    double rtol = 1e-12;
    double atol = 1e-14;
    double h_init = 0.0; // 0: pick automatically
    long max_steps = 1000000;
};

// Embedded Dormand-Prince 5(4) pair with the classic quartic interpolant for
// dense output. State is any fixed-size Eigen vector type; Scalar may be
// double or long double (the fundamental-matrix path runs in long double so
// boundary entries that vanish analytically come out at the 1e-15 level).
template <typename State>
class DenseSolution {
public:
    using Scalar = typename State::Scalar;

    State at(Scalar t) const {
        const auto& ts = node_times_;
        std::size_t i = segment_index(t);
        const Segment& seg = segments_[i];
        Scalar h = ts[i + 1] - ts[i];
        Scalar theta = (t - ts[i]) / h;
        Scalar th1 = Scalar(1) - theta;
        return seg.r1 +
               theta * (seg.r2 + th1 * (seg.r3 + theta * (seg.r4 + th1 * seg.r5)));
    }

    Scalar t_begin() const { return node_times_.front(); }
    Scalar t_end() const { return node_times_.back(); }
    std::size_t steps() const { return segments_.size(); }

private:
    struct Segment {
        State r1, r2, r3, r4, r5;
    };
    std::vector<Scalar> node_times_;
    std::vector<Segment> segments_;

    std::size_t segment_index(Scalar t) const {
        const auto& ts = node_times_;
        auto it = std::upper_bound(ts.begin(), ts.end(), t);
        std::size_t i = (it == ts.begin()) ? 0 : static_cast<std::size_t>(it - ts.begin()) - 1;
        return std::min(i, segments_.size() - 1);
    }

    template <typename S, typename Rhs>
    friend DenseSolution<S> integrate_dense(Rhs&& f, S y0, typename S::Scalar t0,
                                            typename S::Scalar t1, const IntegratorOptions& opt);
};

namespace detail {
// Dormand-Prince coefficients.
template <typename T> struct DP5 {
    static constexpr T c2 = T(1) / 5, c3 = T(3) / 10, c4 = T(4) / 5, c5 = T(8) / 9;
    static constexpr T a21 = T(1) / 5;
    static constexpr T a31 = T(3) / 40, a32 = T(9) / 40;
    static constexpr T a41 = T(44) / 45, a42 = T(-56) / 15, a43 = T(32) / 9;
    static constexpr T a51 = T(19372) / 6561, a52 = T(-25360) / 2187,
                       a53 = T(64448) / 6561, a54 = T(-212) / 729;
    static constexpr T a61 = T(9017) / 3168, a62 = T(-355) / 33, a63 = T(46732) / 5247,
                       a64 = T(49) / 176, a65 = T(-5103) / 18656;
    static constexpr T b1 = T(35) / 384, b3 = T(500) / 1113, b4 = T(125) / 192,
                       b5 = T(-2187) / 6784, b6 = T(11) / 84;
    // b - b_hat (5th-order weights minus embedded 4th-order weights)
    static constexpr T e1 = T(71) / 57600, e3 = T(-71) / 16695, e4 = T(71) / 1920,
                       e5 = T(-17253) / 339200, e6 = T(22) / 525, e7 = T(-1) / 40;
    // dense-output weights
    static constexpr T d1 = T(-12715105075.0L) / T(11282082432.0L);
    static constexpr T d3 = T(87487479700.0L) / T(32700410799.0L);
    static constexpr T d4 = T(-10690763975.0L) / T(1880347072.0L);
    static constexpr T d5 = T(701980252875.0L) / T(199316789632.0L);
    static constexpr T d6 = T(-1453857185.0L) / T(822651844.0L);
    static constexpr T d7 = T(69997945.0L) / T(29380423.0L);
};
} // namespace detail

// Integrate y' = f(t, y) from t0 to t1, keeping per-step interpolation data.
template <typename State, typename Rhs>
DenseSolution<State> integrate_dense(Rhs&& f, State y0, typename State::Scalar t0,
                                     typename State::Scalar t1,
                                     const IntegratorOptions& opt = {}) {
    using Scalar = typename State::Scalar;
    using D = detail::DP5<Scalar>;

    DenseSolution<State> sol;
    sol.node_times_.push_back(t0);

    const Scalar span = t1 - t0;
    const Scalar dir = span >= 0 ? Scalar(1) : Scalar(-1);
    Scalar h = opt.h_init != 0.0 ? Scalar(opt.h_init) : span / Scalar(100);
    h = dir * std::min(std::abs(h), std::abs(span));

    Scalar t = t0;
    State y = y0;
    State k1 = f(t, y);
    long n_steps = 0;

    while (dir * (t1 - t) > Scalar(0)) {
        if (++n_steps > opt.max_steps)
            throw IntegratorFailure("ode: step limit exceeded");
        if (std::abs(h) < std::abs(span) * Scalar(1e-15))
            throw IntegratorFailure("ode: step size underflow");
        if (dir * (t + h - t1) > Scalar(0)) h = t1 - t;

        State k2 = f(t + D::c2 * h, State(y + h * (D::a21 * k1)));
        State k3 = f(t + D::c3 * h, State(y + h * (D::a31 * k1 + D::a32 * k2)));
        State k4 = f(t + D::c4 * h, State(y + h * (D::a41 * k1 + D::a42 * k2 + D::a43 * k3)));
        State k5 = f(t + D::c5 * h,
                     State(y + h * (D::a51 * k1 + D::a52 * k2 + D::a53 * k3 + D::a54 * k4)));
        State k6 = f(t + h, State(y + h * (D::a61 * k1 + D::a62 * k2 + D::a63 * k3 +
                                           D::a64 * k4 + D::a65 * k5)));
        State ynew = y + h * (D::b1 * k1 + D::b3 * k3 + D::b4 * k4 + D::b5 * k5 + D::b6 * k6);
        State k7 = f(t + h, ynew);

        State err_vec = h * (D::e1 * k1 + D::e3 * k3 + D::e4 * k4 + D::e5 * k5 +
                             D::e6 * k6 + D::e7 * k7);
        Scalar err = 0;
        for (int i = 0; i < y.size(); ++i) {
            Scalar sc = Scalar(opt.atol) +
                        Scalar(opt.rtol) * std::max(std::abs(y[i]), std::abs(ynew[i]));
            Scalar r = err_vec[i] / sc;
            err += r * r;
        }
        err = std::sqrt(err / Scalar(y.size()));

        if (err <= Scalar(1)) {
            typename DenseSolution<State>::Segment seg;
            State ydiff = ynew - y;
            State bspl = h * k1 - ydiff;
            seg.r1 = y;
            seg.r2 = ydiff;
            seg.r3 = bspl;
            seg.r4 = ydiff - h * k7 - bspl;
            seg.r5 = h * (D::d1 * k1 + D::d3 * k3 + D::d4 * k4 + D::d5 * k5 + D::d6 * k6 +
                          D::d7 * k7);
            sol.segments_.push_back(seg);

            t += h;
            y = ynew;
            k1 = k7; // FSAL
            sol.node_times_.push_back(t);
        }

        Scalar fac = err > Scalar(0)
                         ? Scalar(0.9) * std::pow(err, Scalar(-0.2))
                         : Scalar(5);
        h *= std::clamp(fac, Scalar(0.2), Scalar(5));
    }

    if (sol.segments_.empty()) {
        // Degenerate zero-length interval.
        typename DenseSolution<State>::Segment seg;
        seg.r1 = y0;
        seg.r2 = seg.r3 = seg.r4 = seg.r5 = State(y0 * Scalar(0));
        sol.segments_.push_back(seg);
        sol.node_times_.push_back(t1);
    }
    return sol;
}

template <typename State, typename Rhs>
State integrate(Rhs&& f, State y0, typename State::Scalar t0, typename State::Scalar t1,
                const IntegratorOptions& opt = {}) {
    if (t0 == t1) return y0;
    auto sol = integrate_dense(std::forward<Rhs>(f), std::move(y0), t0, t1, opt);
    return sol.at(t1);
}

} // namespace hscaler

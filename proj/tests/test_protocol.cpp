#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hscaler/errors.hpp"
#include "hscaler/protocol.hpp"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

using namespace hscaler;

namespace {

// Exact rational arithmetic for the trajectory oracles: the designed
// polynomials have small integer coefficients, so boundary and midpoint
// values can be checked without any floating-point error at all.
struct Frac {
    long long n = 0, d = 1;
    Frac() = default;
    Frac(long long num, long long den = 1) : n(num), d(den) { reduce(); }
    void reduce() {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
    }
    Frac operator+(const Frac& o) const { return Frac(n * o.d + o.n * d, d * o.d); }
    Frac operator*(const Frac& o) const { return Frac(n * o.n, d * o.d); }
    Frac operator/(const Frac& o) const { return Frac(n * o.d, d * o.n); }
    bool operator==(const Frac& o) const { return n == o.n && d == o.d; }
    double value() const { return double(n) / double(d); }
};

Frac eval(const std::vector<Frac>& coeffs, Frac x) {
    Frac acc = coeffs.back();
    for (std::size_t i = coeffs.size() - 1; i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

std::vector<Frac> diff(const std::vector<Frac>& coeffs) {
    std::vector<Frac> d;
    for (std::size_t k = 1; k < coeffs.size(); ++k) d.push_back(Frac((long long)k) * coeffs[k]);
    return d;
}

ScalingSpec momentum_spec(double scale, double t_f = 1.0) {
    ScalingSpec s;
    s.mode = ScalingMode::MomentumScaling;
    s.scale_factor = scale;
    s.t_f = t_f;
    return s;
}

ScalingSpec position_spec(double scale, double t_f = 1.0) {
    ScalingSpec s;
    s.mode = ScalingMode::PositionScaling;
    s.scale_factor = scale;
    s.t_f = t_f;
    return s;
}

} // namespace

TEST_CASE("identity momentum trajectory is constant") {
    ReferenceTrajectory traj = design_momentum_trajectory(momentum_spec(1.0));
    for (double t : {0.0, 0.31, 0.5, 1.0}) {
        CHECK(traj.u(t) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(traj.udot(t) == 0.0);
        CHECK(traj.uddot(t) == 0.0);
    }
    FrequencyProgram prog = synthesize_omega2(traj);
    for (double s : {0.0, 0.2, 0.77, 1.0}) CHECK(prog.omega2_s(s) == 0.0);
    CHECK(prog.peak_abs_omega2() == 0.0);
}

TEST_CASE("quintic boundary conditions and endpoint values") {
    // u0/uf = 1/5, so u runs from 1 to 5.
    ReferenceTrajectory traj = design_momentum_trajectory(momentum_spec(0.2));
    CHECK(traj.u0() == doctest::Approx(1.0));
    CHECK(traj.uf() == doctest::Approx(5.0));
    CHECK(traj.udot(0.0) == 0.0);
    CHECK(traj.udot(1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(traj.uddot(0.0) == 0.0);
    CHECK(std::abs(traj.uddot(1.0)) < 1e-12);

    // Monotone between the endpoints for a positive scale factor.
    double prev = traj.u(0.0);
    for (int i = 1; i <= 200; ++i) {
        double cur = traj.u(double(i) / 200.0);
        CHECK(cur >= prev - 1e-12);
        prev = cur;
    }
}

TEST_CASE("quintic symmetry property") {
    for (double scale : {5.0, 2.0, 0.5, 0.2, -1.0}) {
        ReferenceTrajectory traj = design_momentum_trajectory(momentum_spec(scale));
        const double target = traj.u0() + traj.uf();
        const double tol = 1e-13 * (std::abs(traj.u0()) + std::abs(traj.uf()));
        for (int i = 0; i <= 400; ++i) {
            double tau = 0.5 * double(i) / 400.0;
            CHECK(std::abs(traj.u(0.5 + tau) + traj.u(0.5 - tau) - target) <= tol);
        }
    }
}

TEST_CASE("momentum mirror: shared root of u and u'' at s = 1/2") {
    // Exact-rational oracle: u(s) = 1 - 20 s^3 + 30 s^4 - 12 s^5.
    std::vector<Frac> u = {Frac(1), Frac(0), Frac(0), Frac(-20), Frac(30), Frac(-12)};
    std::vector<Frac> du = diff(u);
    std::vector<Frac> d2u = diff(du);
    std::vector<Frac> d3u = diff(d2u);
    Frac half(1, 2);

    CHECK(eval(u, half) == Frac(0));
    CHECK(eval(d2u, half) == Frac(0));
    CHECK(eval(du, half) == Frac(-15, 4));
    CHECK(eval(d3u, half) == Frac(60));
    // L'Hopital: omega^2(1/2) = -u'''/u' = 16 (units t_f^-2).
    Frac omega2_mid = Frac(-1) * eval(d3u, half) / eval(du, half);
    CHECK(omega2_mid == Frac(16));

    ReferenceTrajectory traj = design_momentum_trajectory(momentum_spec(-1.0));
    CHECK(traj.u(0.5) == 0.0);
    CHECK(traj.uddot(0.5) == 0.0);
    CHECK(traj.udot(0.5) == doctest::Approx(-15.0 / 4.0));

    FrequencyProgram prog = synthesize_omega2(traj);
    CHECK(std::abs(prog.omega2_s(0.5) - 16.0) <= 1e-12);
    // Continuity across the deflated node.
    CHECK(prog.omega2_s(0.5 - 1e-9) == doctest::Approx(16.0).epsilon(1e-6));
    CHECK(prog.omega2_s(0.5 + 1e-9) == doctest::Approx(16.0).epsilon(1e-6));
}

TEST_CASE("mirror scales as t_f^-2 at the node") {
    for (double t_f : {0.5, 1.0, 4.0}) {
        ReferenceTrajectory traj = design_momentum_trajectory(momentum_spec(-1.0, t_f));
        FrequencyProgram prog = synthesize_omega2(traj);
        CHECK(prog.omega2(0.5 * t_f) == doctest::Approx(16.0 / (t_f * t_f)).epsilon(1e-12));
    }
}

TEST_CASE("design rejects invalid specs") {
    CHECK_THROWS_AS(design_momentum_trajectory(momentum_spec(0.0)), std::invalid_argument);
    CHECK_THROWS_AS(design_momentum_trajectory(momentum_spec(1.0, -2.0)),
                    std::invalid_argument);
    ScalingSpec bad_u0 = momentum_spec(2.0);
    bad_u0.u0 = 0.0;
    CHECK_THROWS_AS(design_momentum_trajectory(bad_u0), std::invalid_argument);
    ScalingSpec bad_udot = position_spec(2.0);
    bad_udot.udot0 = 0.0;
    CHECK_THROWS_AS(design_position_trajectory(bad_udot), std::invalid_argument);
}

TEST_CASE("negative momentum factors other than -1 are genuine poles") {
    for (double scale : {-2.0, -0.5, -5.0}) {
        ReferenceTrajectory traj = design_momentum_trajectory(momentum_spec(scale));
        CHECK_THROWS_AS(synthesize_omega2(traj), GenuineSingularity);
    }
}

TEST_CASE("position trajectory boundary conditions") {
    for (double scale : {1.0, -0.5, -2.0}) {
        ReferenceTrajectory traj = design_position_trajectory(position_spec(scale));
        CHECK(traj.u(0.0) == 0.0);
        CHECK(std::abs(traj.u(1.0)) < 1e-13);
        CHECK(traj.uddot(0.0) == 0.0);
        CHECK(std::abs(traj.uddot(1.0)) < 1e-11);
        CHECK(traj.udddot(0.0) == 0.0);
        CHECK(std::abs(traj.udddot(1.0)) < 1e-10);
        CHECK(traj.udot(0.0) == doctest::Approx(1.0));
        CHECK(traj.udot(1.0) == doctest::Approx(1.0 / scale).epsilon(1e-12));
    }
}

TEST_CASE("position trajectory boundary conditions, exact rational oracle") {
    // scale = -1/2: v0 = 1, v1 = -2; coefficients from the closed form.
    std::vector<Frac> u = {Frac(0), Frac(1), Frac(0), Frac(0),
                           Frac(10), Frac(-33), Frac(32), Frac(-10)};
    std::vector<Frac> du = diff(u);
    std::vector<Frac> d2u = diff(du);
    std::vector<Frac> d3u = diff(d2u);
    CHECK(eval(u, Frac(1)) == Frac(0));
    CHECK(eval(du, Frac(0)) == Frac(1));
    CHECK(eval(du, Frac(1)) == Frac(-2));
    CHECK(eval(d2u, Frac(0)) == Frac(0));
    CHECK(eval(d2u, Frac(1)) == Frac(0));
    CHECK(eval(d3u, Frac(0)) == Frac(0));
    CHECK(eval(d3u, Frac(1)) == Frac(0));

    ReferenceTrajectory traj = design_position_trajectory(position_spec(-0.5));
    for (int k = 0; k <= 7; ++k)
        CHECK(traj.poly().coeff(k) == doctest::Approx(u[k].value()).epsilon(1e-15));
}

TEST_CASE("position omega2 vanishes at the boundaries after deflation") {
    for (double scale : {1.0, -0.5, -2.0}) {
        ReferenceTrajectory traj = design_position_trajectory(position_spec(scale));
        FrequencyProgram prog = synthesize_omega2(traj);
        CHECK(std::abs(prog.omega2_s(0.0)) < 1e-12);
        CHECK(std::abs(prog.omega2_s(1.0)) < 1e-12);
        // Series-expansion check of the limit: the deflated ratio vanishes
        // linearly at both ends, so value/eps approaches a constant.
        const double c0 = std::abs(prog.omega2_s(1e-3)) / 1e-3;
        const double c1 = std::abs(prog.omega2_s(1.0 - 1e-3)) / 1e-3;
        for (double eps : {1e-4, 1e-5}) {
            CHECK(std::abs(prog.omega2_s(eps)) / eps ==
                  doctest::Approx(c0).epsilon(2e-2));
            CHECK(std::abs(prog.omega2_s(1.0 - eps)) / eps ==
                  doctest::Approx(c1).epsilon(2e-2));
        }
    }
}

TEST_CASE("identity position scaling is nontrivial and deflates its interior node") {
    ReferenceTrajectory traj = design_position_trajectory(position_spec(1.0));
    CHECK(traj.udot(1.0) == doctest::Approx(1.0));
    // u is odd about s = 1/2 here, so u(1/2) = u''(1/2) = 0 is a removable node.
    CHECK(traj.u(0.5) == 0.0);
    CHECK(traj.uddot(0.5) == 0.0);
    FrequencyProgram prog = synthesize_omega2(traj);
    double expected = -traj.udddot(0.5) / traj.udot(0.5);
    CHECK(prog.omega2_s(0.5) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(prog.peak_abs_omega2() > 1.0); // far from identically zero
}

TEST_CASE("equation-of-motion residual over all designed protocols") {
    std::vector<ReferenceTrajectory> trajs;
    for (double scale : {5.0, 2.0, 0.5, 0.2, -1.0})
        trajs.push_back(design_momentum_trajectory(momentum_spec(scale)));
    for (double scale : {1.0, -0.5, -2.0})
        trajs.push_back(design_position_trajectory(position_spec(scale)));

    for (const auto& traj : trajs) {
        FrequencyProgram prog = synthesize_omega2(traj);
        const auto& u = traj.poly();
        const auto d2u = u.derivative().derivative();
        const double uscale = u.max_abs_on(0.0, 1.0);
        const double d2scale = d2u.max_abs_on(0.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i <= 4000; ++i) {
            double s = double(i) / 4000.0;
            if (std::abs(u(s)) <= 1e-8 * uscale) continue;
            worst = std::max(worst, std::abs(d2u(s) + prog.omega2_s(s) * u(s)));
        }
        CHECK(worst <= 1e-10 * d2scale);
    }
}

TEST_CASE("omega2 is scale invariant in t_f") {
    for (double scale : {0.2, -1.0}) {
        ReferenceTrajectory t1 = design_momentum_trajectory(momentum_spec(scale, 1.0));
        ReferenceTrajectory t2 = design_momentum_trajectory(momentum_spec(scale, 3.7));
        FrequencyProgram p1 = synthesize_omega2(t1);
        FrequencyProgram p2 = synthesize_omega2(t2);
        for (int i = 0; i <= 50; ++i) {
            double s = double(i) / 50.0;
            CHECK(p2.omega2_s(s) == doctest::Approx(p1.omega2_s(s)).epsilon(1e-13));
        }
        CHECK(p2.peak_abs_omega2() ==
              doctest::Approx(p1.peak_abs_omega2() / (3.7 * 3.7)).epsilon(1e-9));
    }
}

TEST_CASE("peak search matches a brute-force scan") {
    ReferenceTrajectory traj = design_momentum_trajectory(momentum_spec(0.2));
    FrequencyProgram prog = synthesize_omega2(traj);
    double brute = 0.0;
    for (int i = 0; i <= 2000000; ++i)
        brute = std::max(brute, std::abs(prog.omega2_s(double(i) / 2000000.0)));
    CHECK(prog.peak_abs_omega2() == doctest::Approx(brute).epsilon(1e-8));
    CHECK(prog.peak_abs_omega2() >= brute - 1e-12);
}

TEST_CASE("validate_protocol reports") {
    SUBCASE("identity: every residual is zero") {
        ReferenceTrajectory traj = design_momentum_trajectory(momentum_spec(1.0));
        ValidationReport rep = validate_protocol(traj, synthesize_omega2(traj));
        CHECK(rep.passed());
        CHECK(rep.eq_motion_residual == 0.0);
        CHECK(rep.symmetry_defect == 0.0);
        CHECK(rep.peak_abs_omega2 == 0.0);
    }
    SUBCASE("scale 1/5: equation residual below 1e-12") {
        ReferenceTrajectory traj = design_momentum_trajectory(momentum_spec(0.2));
        ValidationReport rep = validate_protocol(traj, synthesize_omega2(traj));
        CHECK(rep.passed());
        CHECK(rep.eq_motion_residual <= 1e-12);
    }
    SUBCASE("mirror: symmetry defect and boundary residuals vanish") {
        ReferenceTrajectory traj = design_momentum_trajectory(momentum_spec(-1.0));
        ValidationReport rep = validate_protocol(traj, synthesize_omega2(traj),
                                                 Eigen::Vector2d(1.0, 1.0));
        CHECK(rep.passed());
        CHECK(rep.symmetry_defect <= 2e-13);
        CHECK(rep.max_abs_q_mean > 0.0);
    }
}

TEST_CASE("frequency program tabulation") {
    ReferenceTrajectory traj = design_momentum_trajectory(momentum_spec(0.2, 2.0));
    FrequencyProgram prog = synthesize_omega2(traj);
    auto rows = prog.tabulate(11);
    REQUIRE(rows.size() == 11);
    CHECK(rows.front().first == 0.0);
    CHECK(rows.back().first == doctest::Approx(2.0));
    CHECK(rows.front().second == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rows[5].second == doctest::Approx(prog.omega2(1.0)));
}

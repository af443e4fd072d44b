#include "hscaler/protocol.hpp"

#include "hscaler/errors.hpp"
#include "hscaler/moments.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hscaler {

void ScalingSpec::validate() const {
    if (!(t_f > 0.0) || !std::isfinite(t_f))
        throw std::invalid_argument("ScalingSpec: t_f must be positive and finite");
    if (scale_factor == 0.0 || !std::isfinite(scale_factor))
        throw std::invalid_argument("ScalingSpec: scale_factor must be nonzero and finite");
    if (mode == ScalingMode::MomentumScaling && u0 == 0.0)
        throw std::invalid_argument("ScalingSpec: momentum scaling requires u0 != 0");
    if (mode == ScalingMode::PositionScaling && udot0 == 0.0)
        throw std::invalid_argument("ScalingSpec: position scaling requires udot0 != 0");
    if (!(mass > 0.0) || !(hbar > 0.0))
        throw std::invalid_argument("ScalingSpec: mass and hbar must be positive");
}

ReferenceTrajectory::ReferenceTrajectory(Polynomial<double> u_of_s, double t_f,
                                         ScalingMode mode, double mass, double hbar)
    : u_(std::move(u_of_s)),
      du_(u_.derivative()),
      d2u_(du_.derivative()),
      d3u_(d2u_.derivative()),
      t_f_(t_f),
      mode_(mode),
      mass_(mass),
      hbar_(hbar) {
    if (!(t_f_ > 0.0)) throw std::invalid_argument("ReferenceTrajectory: t_f must be positive");
}

ReferenceTrajectory design_momentum_trajectory(const ScalingSpec& spec) {
    if (spec.mode != ScalingMode::MomentumScaling)
        throw std::invalid_argument("design_momentum_trajectory: wrong mode");
    spec.validate();

    // u(s) = u0 + (uf - u0) s^3 (10 - 15 s + 6 s^2)
    const double uf = spec.u0 / spec.scale_factor;
    const double d = uf - spec.u0;
    Polynomial<double> u({spec.u0, 0.0, 0.0, 10.0 * d, -15.0 * d, 6.0 * d});
    return ReferenceTrajectory(std::move(u), spec.t_f, spec.mode, spec.mass, spec.hbar);
}

ReferenceTrajectory design_position_trajectory(const ScalingSpec& spec) {
    if (spec.mode != ScalingMode::PositionScaling)
        throw std::invalid_argument("design_position_trajectory: wrong mode");
    spec.validate();

    // Minimal-degree polynomial with u = u'' = u''' = 0 at s = 0 and s = 1,
    // du/ds(0) = v0, du/ds(1) = v1. Closed-form solution of the 8x8 boundary
    // system (coefficients are exact small integers times v0, v1).
    const double v0 = spec.udot0 * spec.t_f;
    const double v1 = (spec.udot0 / spec.scale_factor) * spec.t_f;
    Polynomial<double> u({0.0, v0, 0.0, 0.0,
                          -20.0 * v0 - 15.0 * v1,
                          45.0 * v0 + 39.0 * v1,
                          -36.0 * v0 - 34.0 * v1,
                          10.0 * (v0 + v1)});
    return ReferenceTrajectory(std::move(u), spec.t_f, spec.mode, spec.mass, spec.hbar);
}

ReferenceTrajectory design_trajectory(const ScalingSpec& spec) {
    return spec.mode == ScalingMode::MomentumScaling ? design_momentum_trajectory(spec)
                                                     : design_position_trajectory(spec);
}

FrequencyProgram::FrequencyProgram(Polynomial<double> numerator,
                                   Polynomial<double> denominator, double t_f,
                                   ScalingMode mode)
    : num_(std::move(numerator)), den_(std::move(denominator)), t_f_(t_f), mode_(mode) {}

double FrequencyProgram::omega2_s(double s) const {
    if (num_.is_zero()) return 0.0;
    return num_(s) / den_(s);
}

double FrequencyProgram::peak_abs_omega2() const {
    if (num_.is_zero()) return 0.0;

    auto f = [this](double s) { return std::abs(omega2_s(s)); };
    const int n = 4096;
    std::vector<double> vals(n + 1);
    for (int i = 0; i <= n; ++i) vals[i] = f(double(i) / n);

    // Golden-section refinement around every local maximum of the sampling.
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double best = 0.0;
    for (int i = 0; i <= n; ++i) {
        bool local_max = (i == 0 || vals[i] >= vals[i - 1]) &&
                         (i == n || vals[i] >= vals[i + 1]);
        if (!local_max) continue;
        double a = double(std::max(i - 1, 0)) / n;
        double b = double(std::min(i + 1, n)) / n;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = f(x1), f2 = f(x2);
        while (b - a > 1e-12) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = f(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = f(x1);
            }
        }
        best = std::max({best, f1, f2});
    }
    return best / (t_f_ * t_f_);
}

std::vector<std::pair<double, double>> FrequencyProgram::tabulate(int n_samples) const {
    std::vector<std::pair<double, double>> rows;
    rows.reserve(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        double s = (n_samples == 1) ? 0.0 : double(i) / (n_samples - 1);
        rows.emplace_back(s * t_f_, omega2_s(s) / (t_f_ * t_f_));
    }
    return rows;
}

FrequencyProgram synthesize_omega2(const ReferenceTrajectory& traj) {
    const Polynomial<double>& u = traj.poly();
    Polynomial<double> num = u.derivative().derivative() * (-1.0); // -u''(s)
    Polynomial<double> den = u;

    if (num.is_zero())
        return FrequencyProgram(Polynomial<double>::constant(0.0), den, traj.t_f(),
                                traj.mode());

    // Each root of u in [0,1] must be cancelled by a root of -u'' of at least
    // equal multiplicity; otherwise the frequency genuinely diverges there.
    const double den_scale = den.max_abs_on(0.0, 1.0);
    const double num_scale = num.max_abs_on(0.0, 1.0);
    for (double r : den.real_roots_in(0.0, 1.0)) {
        int guard = 0;
        while (std::abs(den(r)) <= 1e-9 * den_scale && den.degree() > 0) {
            if (std::abs(num(r)) > 1e-9 * num_scale)
                throw GenuineSingularity(
                    "synthesize_omega2: u vanishes at s=" + std::to_string(r) +
                    " inside [0,1] without a matching zero of u''");
            den = den.deflated(r);
            num = num.deflated(r);
            if (++guard > 16) break;
        }
    }

    // After deflation the denominator must be root-free on [0,1].
    for (double r : den.real_roots_in(0.0, 1.0)) {
        if (std::abs(den(r)) <= 1e-9 * std::max(den.max_abs_on(0.0, 1.0), 1e-300))
            throw GenuineSingularity("synthesize_omega2: residual pole at s=" +
                                     std::to_string(r));
    }

    return FrequencyProgram(std::move(num), std::move(den), traj.t_f(), traj.mode());
}

ValidationReport validate_protocol(const ReferenceTrajectory& traj,
                                   const FrequencyProgram& program,
                                   std::optional<Eigen::Vector2d> initial_first_moments) {
    ValidationReport rep;
    const Polynomial<double>& u = traj.poly();
    auto push = [&rep](const std::string& name, double value, double tol) {
        rep.checks.push_back({name, value, tol, std::abs(value) <= tol});
    };

    const double uscale = std::max(u.max_abs_on(0.0, 1.0), 1e-300);
    const Polynomial<double> du = u.derivative();
    const Polynomial<double> d2u = du.derivative();
    const Polynomial<double> d3u = d2u.derivative();

    if (traj.mode() == ScalingMode::MomentumScaling) {
        push("udot(0)", du(0.0), 1e-13 * uscale);
        push("udot(t_f)", du(1.0), 1e-13 * uscale);
        push("uddot(0)", d2u(0.0), 1e-13 * uscale);
        push("uddot(t_f)", d2u(1.0), 1e-13 * uscale);
        // u(t_f/2 + tau) + u(t_f/2 - tau) = u_f + u_0
        const double target = u(0.0) + u(1.0);
        double defect = 0.0;
        for (int i = 0; i <= 500; ++i) {
            double tau = 0.5 * double(i) / 500.0;
            defect = std::max(defect, std::abs(u(0.5 + tau) + u(0.5 - tau) - target));
        }
        rep.symmetry_defect = defect;
        push("symmetry defect", defect, 1e-13 * (std::abs(u(0.0)) + std::abs(u(1.0))));
    } else {
        push("u(0)", u(0.0), 1e-13 * uscale);
        push("u(t_f)", u(1.0), 1e-13 * uscale);
        push("uddot(0)", d2u(0.0), 1e-13 * uscale);
        push("uddot(t_f)", d2u(1.0), 1e-13 * uscale);
        push("udddot(0)", d3u(0.0), 1e-12 * uscale);
        push("udddot(t_f)", d3u(1.0), 1e-12 * uscale);
    }

    push("omega2(0)", program.omega2_s(0.0), 1e-12);
    push("omega2(t_f)", program.omega2_s(1.0), 1e-12);

    // Equation-of-motion residual u'' + Omega^2 u on a 10^4-point grid, away
    // from the deflation threshold |u| <= 1e-8 max|u|.
    const double d2scale = std::max(d2u.max_abs_on(0.0, 1.0), 1e-300);
    double residual = 0.0;
    for (int i = 0; i <= 10000; ++i) {
        double s = double(i) / 10000.0;
        double us = u(s);
        if (std::abs(us) <= 1e-8 * uscale) continue;
        residual = std::max(residual, std::abs(d2u(s) + program.omega2_s(s) * us));
    }
    rep.eq_motion_residual = residual;
    push("equation-of-motion residual", residual, 1e-10 * d2scale);

    rep.peak_abs_omega2 = program.peak_abs_omega2();

    if (initial_first_moments) {
        MomentState init;
        init.q_mean = (*initial_first_moments)(0);
        init.p_mean = (*initial_first_moments)(1);
        FundamentalSolution fs(program, traj.mass());
        double peak_q = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            double t = traj.t_f() * double(i) / 2000.0;
            Eigen::Vector2d x = fs.matrix(t) * Eigen::Vector2d(init.q_mean, init.p_mean);
            peak_q = std::max(peak_q, std::abs(x(0)));
        }
        rep.max_abs_q_mean = peak_q;
    }

    return rep;
}

} // namespace hscaler

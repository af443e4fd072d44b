#pragma once

#include "hscaler/polynomial.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace hscaler {

enum class ScalingMode { MomentumScaling, PositionScaling };

// User intent for a scaling process.
//
// Momentum mode scales every momentum by scale_factor = u0/uf; position mode
// scales every position by scale_factor = udot0/udot_f. Code units are
// m = hbar = 1 unless overridden.
struct ScalingSpec {
    ScalingMode mode = ScalingMode::MomentumScaling;
    double scale_factor = 1.0;
    double t_f = 1.0;
    double u0 = 1.0;    // reference amplitude, momentum mode
    double udot0 = 1.0; // reference slope, position mode
    double mass = 1.0;
    double hbar = 1.0;

    void validate() const; // throws std::invalid_argument
};

// Reference trajectory u(t), stored as a polynomial in s = t/t_f together
// with its first three derivatives (exact polynomial differentiation).
class ReferenceTrajectory {
public:
    ReferenceTrajectory(Polynomial<double> u_of_s, double t_f, ScalingMode mode,
                        double mass = 1.0, double hbar = 1.0);

    double t_f() const { return t_f_; }
    ScalingMode mode() const { return mode_; }
    double mass() const { return mass_; }
    double hbar() const { return hbar_; }

    const Polynomial<double>& poly() const { return u_; }

    // Dimensional evaluators (argument t in [0, t_f]).
    double u(double t) const { return u_(t / t_f_); }
    double udot(double t) const { return du_(t / t_f_) / t_f_; }
    double uddot(double t) const { return d2u_(t / t_f_) / (t_f_ * t_f_); }
    double udddot(double t) const { return d3u_(t / t_f_) / (t_f_ * t_f_ * t_f_); }

    // Scaled-variable evaluators (argument s in [0, 1], derivatives in s).
    double u_s(double s) const { return u_(s); }
    double du_ds(double s) const { return du_(s); }
    double d2u_ds2(double s) const { return d2u_(s); }

    double u0() const { return u_(0.0); }
    double uf() const { return u_(1.0); }
    double udot0() const { return du_(0.0) / t_f_; }
    double udotf() const { return du_(1.0) / t_f_; }

private:
    Polynomial<double> u_, du_, d2u_, d3u_;
    double t_f_;
    ScalingMode mode_;
    double mass_, hbar_;
};

// omega^2(t) = -u''(t)/u(t) with every removable singularity cancelled by
// exact polynomial deflation. Stored as a ratio of root-matched polynomials
// in s, so evaluation is pole-free on [0, 1].
class FrequencyProgram {
public:
    FrequencyProgram(Polynomial<double> numerator, Polynomial<double> denominator,
                     double t_f, ScalingMode mode);

    // Dimensionless squared frequency: Omega^2(s) = t_f^2 * omega^2(s*t_f).
    double omega2_s(double s) const;
    // Dimensional squared frequency.
    double omega2(double t) const { return omega2_s(t / t_f_) / (t_f_ * t_f_); }

    double t_f() const { return t_f_; }
    ScalingMode mode() const { return mode_; }
    const Polynomial<double>& numerator() const { return num_; }
    const Polynomial<double>& denominator() const { return den_; }

    // max over [0, t_f] of |omega^2(t)|, dense sampling plus golden-section
    // refinement of the best brackets.
    double peak_abs_omega2() const;

    std::vector<std::pair<double, double>> tabulate(int n_samples) const; // (t, omega^2)

private:
    Polynomial<double> num_, den_;
    double t_f_;
    ScalingMode mode_;
};

struct ValidationReport {
    struct Check {
        std::string name;
        double value = 0;
        double tolerance = 0;
        bool pass = true;
    };
    std::vector<Check> checks;
    double eq_motion_residual = 0; // sup-norm of u'' + Omega^2 u over the s grid
    double symmetry_defect = 0;    // momentum mode only
    double peak_abs_omega2 = 0;
    double max_abs_q_mean = 0; // transient excursion for the supplied first moments

    bool passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// Quintic reference trajectory for momentum scaling.
ReferenceTrajectory design_momentum_trajectory(const ScalingSpec& spec);

// Degree-7 reference trajectory for position scaling (u = u'' = u''' = 0 at
// both ends, u'(0) = udot0, u'(t_f) = udot0/scale_factor).
ReferenceTrajectory design_position_trajectory(const ScalingSpec& spec);

ReferenceTrajectory design_trajectory(const ScalingSpec& spec);

// Deflate shared roots of u and -u'' and reject genuine poles.
FrequencyProgram synthesize_omega2(const ReferenceTrajectory& traj);

// Boundary residuals, equation-of-motion residual on a 10^4-point grid,
// symmetry defect, peak |omega^2|, and the spatial excursion max_t |<q>_t|
// for the supplied initial first moments (q_mean, p_mean).
ValidationReport validate_protocol(
    const ReferenceTrajectory& traj, const FrequencyProgram& program,
    std::optional<Eigen::Vector2d> initial_first_moments = std::nullopt);

} // namespace hscaler

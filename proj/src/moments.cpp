#include "hscaler/moments.hpp"

#include "hscaler/errors.hpp"
#include "hscaler/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace hscaler {

Eigen::Matrix2d MomentState::covariance() const {
    Eigen::Matrix2d c;
    c << var_q(), cov_qp(), cov_qp(), var_p();
    return c;
}

Eigen::Matrix2d MomentState::raw_second_matrix() const {
    Eigen::Matrix2d s;
    s << q2, 0.5 * qp_sym, 0.5 * qp_sym, p2;
    return s;
}

MomentState MomentState::from_covariance(double q_mean, double p_mean,
                                         const Eigen::Matrix2d& cov, double time) {
    MomentState m;
    m.q_mean = q_mean;
    m.p_mean = p_mean;
    m.q2 = cov(0, 0) + q_mean * q_mean;
    m.p2 = cov(1, 1) + p_mean * p_mean;
    m.qp_sym = 2.0 * (0.5 * (cov(0, 1) + cov(1, 0)) + q_mean * p_mean);
    m.time = time;
    return m;
}

MomentState MomentState::minimum_uncertainty(double q_mean, double p_mean, double sigma_q,
                                             double hbar) {
    if (!(sigma_q > 0.0)) throw BadCovariance("minimum_uncertainty: sigma_q must be positive");
    Eigen::Matrix2d cov;
    double sp = 0.5 * hbar / sigma_q;
    cov << sigma_q * sigma_q, 0.0, 0.0, sp * sp;
    return from_covariance(q_mean, p_mean, cov, 0.0);
}

bool MomentState::quantum_admissible(double hbar) const {
    double det = var_q() * var_p() - cov_qp() * cov_qp();
    return det >= 0.25 * hbar * hbar * (1.0 - 1e-12);
}

void MomentState::require_valid() const {
    if (!(var_q() >= -1e-14 * std::abs(q2)) || !(var_p() >= -1e-14 * std::abs(p2)))
        throw BadCovariance("MomentState: negative variance");
}

void MomentState::require_admissible(double hbar) const {
    require_valid();
    if (!quantum_admissible(hbar))
        throw BadCovariance("MomentState: covariance violates the uncertainty floor");
}

namespace {

// Dimensionless fundamental system in s = t/t_f: columns (v1, v1') and
// (w2, w2') with v1(0)=1, v1'(0)=0, w2(0)=0, w2'(0)=1.
Eigen::Matrix2d assemble_matrix(const Eigen::Matrix<long double, 4, 1>& y, double t_f,
                                double mass) {
    Eigen::Matrix2d M;
    M(0, 0) = static_cast<double>(y[0]);
    M(0, 1) = static_cast<double>(y[2]) * t_f / mass;
    M(1, 0) = static_cast<double>(y[1]) * mass / t_f;
    M(1, 1) = static_cast<double>(y[3]);
    return M;
}

} // namespace

FundamentalSolution::FundamentalSolution(const FrequencyProgram& program, double mass)
    : t_f_(program.t_f()), mass_(mass) {
    const auto num = program.numerator().cast<long double>();
    const auto den = program.denominator().cast<long double>();
    const bool zero = program.numerator().is_zero();
    auto rhs = [&](long double s, const State4& y) -> State4 {
        long double w2 = zero ? 0.0L : num(s) / den(s);
        State4 dy;
        dy[0] = y[1];
        dy[1] = -w2 * y[0];
        dy[2] = y[3];
        dy[3] = -w2 * y[2];
        return dy;
    };
    State4 y0;
    y0 << 1.0L, 0.0L, 0.0L, 1.0L;
    IntegratorOptions opt;
    opt.rtol = 1e-15;
    opt.atol = 1e-18;
    sol_ = integrate_dense(rhs, y0, 0.0L, 1.0L, opt);
}

Eigen::Matrix2d FundamentalSolution::matrix(double t) const {
    long double s = static_cast<long double>(t / t_f_);
    s = std::clamp(s, 0.0L, 1.0L);
    return assemble_matrix(sol_.at(s), t_f_, mass_);
}

CovariancePropagator FundamentalSolution::at(double t) const {
    return CovariancePropagator{matrix(t), t};
}

CovariancePropagator fundamental_matrix(const FrequencyProgram& program, double t,
                                        double mass) {
    if (t < 0.0 || t > program.t_f() * (1.0 + 1e-12))
        throw std::invalid_argument("fundamental_matrix: t outside [0, t_f]");
    FundamentalSolution fs(program, mass);
    return fs.at(t);
}

Eigen::Vector2d propagate_first_moments(const CovariancePropagator& prop,
                                        const MomentState& initial) {
    if (initial.time != 0.0)
        throw std::invalid_argument("propagate_first_moments: initial state must be at t=0");
    return prop.M * initial.mean();
}

MomentState propagate_second_moments(const CovariancePropagator& prop,
                                     const MomentState& initial) {
    if (initial.time != 0.0)
        throw std::invalid_argument("propagate_second_moments: initial state must be at t=0");
    Eigen::Vector2d mean = prop.M * initial.mean();
    Eigen::Matrix2d S = prop.M * initial.raw_second_matrix() * prop.M.transpose();
    MomentState out;
    out.q_mean = mean(0);
    out.p_mean = mean(1);
    out.q2 = S(0, 0);
    out.p2 = S(1, 1);
    out.qp_sym = 2.0 * S(0, 1);
    out.time = prop.time;
    return out;
}

namespace {

// Interior zeros of a polynomial on (0, s_end), endpoints excluded.
bool has_interior_zero(const Polynomial<double>& p, double s_end) {
    const double margin = 1e-9;
    for (double r : p.real_roots_in(0.0, s_end)) {
        if (r > margin && r < s_end - margin &&
            std::abs(p(r)) <= 1e-9 * std::max(p.max_abs_on(0.0, 1.0), 1e-300))
            return true;
    }
    return false;
}

} // namespace

QuadratureIntegrals quadrature_integrals(const ReferenceTrajectory& traj, double t) {
    if (t < 0.0 || t > traj.t_f() * (1.0 + 1e-12))
        throw std::invalid_argument("quadrature_integrals: t outside [0, t_f]");
    const double s_end = std::min(t / traj.t_f(), 1.0);
    const double t_f = traj.t_f();
    QuadratureIntegrals out;

    const double u0 = traj.u0();
    const double udot0 = traj.udot0();
    QuadratureOptions qopt;
    qopt.rtol = 1e-10;

    if (u0 != 0.0) {
        if (has_interior_zero(traj.poly(), s_end))
            throw SingularIntegrand("quadrature_integrals: u vanishes inside (0, t)");
        out.U = traj.u_s(s_end) / u0;
        if (s_end > 0.0) {
            auto integrand = [&](double s) {
                double us = traj.u_s(s);
                return (u0 * u0) / (us * us);
            };
            out.I = t_f * integrate_adaptive(integrand, 0.0, s_end, qopt).value;
        } else {
            out.I = 0.0;
        }
        double Udot = traj.udot(s_end * t_f) / u0;
        out.A = 1.0 + out.U * Udot * out.I;
    }

    if (udot0 != 0.0) {
        const Polynomial<double> du = traj.poly().derivative();
        if (has_interior_zero(du, s_end))
            throw SingularIntegrand("quadrature_integrals: udot vanishes inside (0, t)");
        if (s_end > 0.0) {
            const double du0 = du(0.0);
            // Omega^2(s) can be singular only where u is; J's own poles are
            // zeros of udot, excluded above.
            FrequencyProgram prog = synthesize_omega2(traj);
            auto integrand = [&](double s) {
                double dus = du(s);
                return prog.omega2_s(s) * (du0 * du0) / (dus * dus);
            };
            out.J = integrate_adaptive(integrand, 0.0, s_end, qopt).value / t_f;
        } else {
            out.J = 0.0;
        }
    } else {
        out.J = 0.0;
    }
    return out;
}

MomentState position_mode_first_moments(const ReferenceTrajectory& traj, double t,
                                        const MomentState& initial) {
    if (traj.mode() != ScalingMode::PositionScaling)
        throw std::invalid_argument("position_mode_first_moments: requires position mode");

    FrequencyProgram prog = synthesize_omega2(traj);
    CovariancePropagator prop = fundamental_matrix(prog, t, traj.mass());
    MomentState out = propagate_second_moments(prop, initial);

    const double s_end = t / traj.t_f();
    const Polynomial<double> du = traj.poly().derivative();
    const double du_scale = std::max(du.max_abs_on(0.0, 1.0), 1e-300);
    bool regular = std::abs(du(s_end)) > 1e-8 * du_scale;
    if (regular) {
        try {
            QuadratureIntegrals qi = quadrature_integrals(traj, t);
            const double m = traj.mass();
            const double udot0 = traj.udot0();
            const double udot_t = traj.udot(t);
            const double u_t = traj.u(t);
            out.p_mean = (-m * qi.J * initial.q_mean + initial.p_mean) * (udot_t / udot0);
            out.q_mean = initial.p_mean * u_t / (m * udot0) +
                         initial.q_mean * (udot0 / udot_t - (u_t / udot0) * qi.J);
        } catch (const SingularIntegrand&) {
            // udot vanished somewhere inside: keep the matrix result.
        }
    }
    return out;
}

InvariantRecord invariant_expectations(const ReferenceTrajectory& traj,
                                       const MomentState& state) {
    const double u = traj.u(state.time);
    const double udot = traj.udot(state.time);
    const double m = traj.mass();
    InvariantRecord rec;
    rec.time = state.time;
    rec.G_mean = u * state.p_mean - m * udot * state.q_mean;
    rec.I_mean = u * u * state.p2 / (2.0 * m) + 0.5 * m * udot * udot * state.q2 -
                 0.5 * u * udot * state.qp_sym;
    return rec;
}

} // namespace hscaler

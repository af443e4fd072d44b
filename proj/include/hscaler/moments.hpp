#pragma once

#include "hscaler/ode.hpp"
#include "hscaler/protocol.hpp"

#include <Eigen/Dense>

namespace hscaler {

// First and second phase-space moments at a given time.
struct MomentState {
    double q_mean = 0;
    double p_mean = 0;
    double q2 = 0;     // <q^2>
    double p2 = 0;     // <p^2>
    double qp_sym = 0; // <qp + pq>
    double time = 0;

    double var_q() const { return q2 - q_mean * q_mean; }
    double var_p() const { return p2 - p_mean * p_mean; }
    double cov_qp() const { return 0.5 * qp_sym - q_mean * p_mean; }

    Eigen::Vector2d mean() const { return {q_mean, p_mean}; }
    Eigen::Matrix2d covariance() const;
    Eigen::Matrix2d raw_second_matrix() const; // [[q2, qp/2], [qp/2, p2]]

    static MomentState from_covariance(double q_mean, double p_mean,
                                       const Eigen::Matrix2d& cov, double time = 0);
    // Uncorrelated minimum-uncertainty Gaussian moments.
    static MomentState minimum_uncertainty(double q_mean, double p_mean, double sigma_q,
                                           double hbar = 1.0);

    bool quantum_admissible(double hbar = 1.0) const;
    void require_valid() const;                        // covariance positivity
    void require_admissible(double hbar = 1.0) const;  // uncertainty floor
};

// Linear map (q, p)_0 -> (q, p)_t for the classical motion q'' = -omega^2(t) q.
struct CovariancePropagator {
    Eigen::Matrix2d M = Eigen::Matrix2d::Identity();
    double time = 0;

    double det() const { return M.determinant(); }
};

// Fundamental matrix over the whole process window with dense output.
// Integration runs in long double in the scaled variable s; boundary entries
// that vanish by construction (e.g. M21 at t_f in momentum mode) come out at
// the 1e-15 level, which the elementwise scaling guarantees rely on.
class FundamentalSolution {
public:
    explicit FundamentalSolution(const FrequencyProgram& program, double mass = 1.0);

    Eigen::Matrix2d matrix(double t) const;
    CovariancePropagator at(double t) const;
    double t_f() const { return t_f_; }
    double mass() const { return mass_; }

private:
    using State4 = Eigen::Matrix<long double, 4, 1>;
    DenseSolution<State4> sol_;
    double t_f_;
    double mass_;
};

// Single-query form of the above.
CovariancePropagator fundamental_matrix(const FrequencyProgram& program, double t,
                                        double mass = 1.0);

// Means at time t; requires initial.time == 0.
Eigen::Vector2d propagate_first_moments(const CovariancePropagator& prop,
                                        const MomentState& initial);

// Full moment pushforward (means plus congruence of the raw second-moment
// matrix); requires initial.time == 0.
MomentState propagate_second_moments(const CovariancePropagator& prop,
                                     const MomentState& initial);

// The paper-style auxiliary integrals. U, I, A require u(0) != 0 and are NaN
// otherwise; J requires udot(0) != 0 and is 0 when udot(0) == 0 exactly.
struct QuadratureIntegrals {
    double U = std::numeric_limits<double>::quiet_NaN();
    double I = std::numeric_limits<double>::quiet_NaN();
    double A = std::numeric_limits<double>::quiet_NaN();
    double J = std::numeric_limits<double>::quiet_NaN();
};

// Throws SingularIntegrand when u (resp. udot) vanishes inside (0, t); the
// fundamental matrix is the right tool there.
QuadratureIntegrals quadrature_integrals(const ReferenceTrajectory& traj, double t);

// Closed-form first moments for position scaling, evaluated through the J
// integral where udot is regular, otherwise through the fundamental matrix.
// Second moments always come from the matrix pushforward.
MomentState position_mode_first_moments(const ReferenceTrajectory& traj, double t,
                                        const MomentState& initial);

struct InvariantRecord {
    double G_mean = 0; // <G> = u <p> - m udot <q>
    double I_mean = 0; // <I> per the quadratic invariant
    double time = 0;
};

InvariantRecord invariant_expectations(const ReferenceTrajectory& traj,
                                       const MomentState& state);

} // namespace hscaler

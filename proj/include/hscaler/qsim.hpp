#pragma once

#include "hscaler/moments.hpp"
#include "hscaler/protocol.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace hscaler {

// Everything in this module works in the dimensionless variables
// Q = q/l, s = t/t_f, P = p l / hbar with l = sqrt(hbar t_f / m), in which the
// Schroedinger equation reads i dPsi/ds = [P^2/2 + Omega(s)^2 Q^2/2] Psi with
// Omega(s) = t_f * omega(s t_f). FrequencyProgram::omega2_s supplies Omega^2
// directly, so programs designed at any t_f can be fed in unchanged.

// Uniform periodic grid. Positions q_min + i*dq; conjugate momenta span
// [-pi/dq, pi/dq) with spacing 2*pi/(n*dq).
struct GridSpec {
    int n_points = 2048;
    double q_min = -40.0;
    double q_max = 40.0;
    double dt = 2e-4;

    void validate() const; // power-of-two n >= 16, q_max > q_min, dt > 0

    double dq() const { return (q_max - q_min) / n_points; }
    double dp() const { return 2.0 * M_PI / (q_max - q_min); }
    double p_max() const { return M_PI / dq(); }
    double q(int i) const { return q_min + i * dq(); }
    double p_centered(int j) const { return (j - n_points / 2) * dp(); }

    Eigen::VectorXd q_grid() const;
    Eigen::VectorXd p_grid() const; // centered
};

struct WaveFunction {
    GridSpec grid;
    Eigen::VectorXcd amplitudes;
    double time = 0; // dimensionless s

    double norm() const; // sqrt(sum |psi|^2 dq)
    void normalize();
};

// Normalized Gaussian with the requested first moments and position width.
// Throws GridTooSmall unless the packet fits with 6 sigma margin in both q
// and p.
WaveFunction gaussian_state(const GridSpec& grid, double q0_mean, double p0_mean,
                            double sigma_q);

struct PropagationResult {
    std::vector<WaveFunction> snapshots; // first at s=0, last at s=1
    std::vector<double> snapshot_times;
    double max_norm_drift = 0;          // max |norm^2 - 1| seen during stepping
    bool boundary_warning = false;      // probability near the edges exceeded 1e-10
    double max_boundary_probability = 0;
};

// Split-operator propagation over s in [0, 1]. The kernel is the Strang step
// (potential half step, spectral kinetic full step, potential half step,
// Omega^2 frozen at the sub-interval midpoint); order 4 composes it into the
// Yoshida triple jump, which the production tolerances require at dt = 2e-4.
// n_snapshots includes both endpoints.
PropagationResult propagate(const WaveFunction& initial, const FrequencyProgram& program,
                            int n_snapshots = 12, int order = 4);

// <Q>, <P>, <Q^2>, <P^2>, <QP+PQ> (momentum parts spectral).
MomentState measure_moments(const WaveFunction& wf);

// Centered momentum-space amplitudes (continuum delta normalization) and the
// matching momentum grid.
Eigen::VectorXcd momentum_spectrum(const WaveFunction& wf);

// Momentum amplitude at one arbitrary p (direct transform, O(n)).
std::complex<double> momentum_amplitude(const WaveFunction& wf, double p);

double l2_distance(const WaveFunction& a, const WaveFunction& b);

// Invariant eigenfunction phi_{p0}(q, s) on the grid. Requires u(s) != 0 and
// u root-free on (0, s).
Eigen::VectorXcd invariant_eigenfunction(const ReferenceTrajectory& traj, double p0,
                                         const GridSpec& grid, double s);

// Independent oracle: rebuild psi(q, s) from the invariant-eigenbasis
// expansion of the initial state, by quadrature over the conjugate grid.
WaveFunction reconstruct_via_expansion(const WaveFunction& initial,
                                       const ReferenceTrajectory& traj, double s);

struct WignerGrid {
    Eigen::MatrixXd W;  // n_q rows, n_p columns
    Eigen::VectorXd q;  // row coordinates
    Eigen::VectorXd p;  // column coordinates
    double dq = 0, dp = 0;
};

// Symmetric-displacement Wigner transform, one FFT per position row. The
// native momentum axis of the transform has extent [-pi/(2 dq), pi/(2 dq))
// and spacing pi/(n dq); p_points (0 = full n) selects the centered subrange
// of columns to keep.
WignerGrid wigner(const WaveFunction& wf, int p_points = 0);

// Area of the region {W >= level}, cell counting with linear sub-cell
// interpolation along marched edges.
double level_set_area(const WignerGrid& grid, double level);

} // namespace hscaler

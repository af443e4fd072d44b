#include "hscaler/qsim.hpp"

#include "hscaler/errors.hpp"
#include "hscaler/parallel.hpp"
#include "hscaler/quadrature.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <map>
#include <stdexcept>

namespace hscaler {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
constexpr double kTwoPi = 2.0 * M_PI;
} // namespace

void GridSpec::validate() const {
    if (n_points < 16 || (n_points & (n_points - 1)) != 0)
        throw std::invalid_argument("GridSpec: n_points must be a power of two >= 16");
    if (!(q_max > q_min)) throw std::invalid_argument("GridSpec: q_max must exceed q_min");
    if (!(dt > 0.0)) throw std::invalid_argument("GridSpec: dt must be positive");
}

Eigen::VectorXd GridSpec::q_grid() const {
    Eigen::VectorXd g(n_points);
    for (int i = 0; i < n_points; ++i) g[i] = q(i);
    return g;
}

Eigen::VectorXd GridSpec::p_grid() const {
    Eigen::VectorXd g(n_points);
    for (int j = 0; j < n_points; ++j) g[j] = p_centered(j);
    return g;
}

double WaveFunction::norm() const {
    return std::sqrt(amplitudes.squaredNorm() * grid.dq());
}

void WaveFunction::normalize() {
    double n = norm();
    if (n > 0.0) amplitudes /= n;
}

WaveFunction gaussian_state(const GridSpec& grid, double q0_mean, double p0_mean,
                            double sigma_q) {
    grid.validate();
    if (!(sigma_q > 0.0)) throw std::invalid_argument("gaussian_state: sigma_q must be positive");

    const double sigma_p = 0.5 / sigma_q; // minimum uncertainty, hbar = 1
    if (q0_mean - 6.0 * sigma_q < grid.q_min || q0_mean + 6.0 * sigma_q > grid.q_max)
        throw GridTooSmall("gaussian_state: packet exceeds spatial grid");
    if (std::abs(p0_mean) + 6.0 * sigma_p > grid.p_max())
        throw GridTooSmall("gaussian_state: packet exceeds spectral grid");

    WaveFunction wf{grid, Eigen::VectorXcd(grid.n_points), 0.0};
    const double norm_const = std::pow(2.0 * M_PI * sigma_q * sigma_q, -0.25);
    for (int i = 0; i < grid.n_points; ++i) {
        double q = grid.q(i);
        double gauss = norm_const * std::exp(-(q - q0_mean) * (q - q0_mean) /
                                             (4.0 * sigma_q * sigma_q));
        wf.amplitudes[i] = gauss * std::exp(kI * (p0_mean * q));
    }
    wf.normalize();
    return wf;
}

namespace {

// Signed spectral frequency of raw FFT bin k.
inline double raw_momentum(int k, int n, double dp) {
    return dp * (k < n / 2 ? k : k - n);
}

double boundary_probability(const Eigen::VectorXcd& psi, double dq) {
    const int n = static_cast<int>(psi.size());
    double prob = 0.0;
    for (int i = 0; i < 6; ++i)
        prob += (std::norm(psi[i]) + std::norm(psi[n - 1 - i])) * dq;
    return prob;
}

} // namespace

namespace {

// One Strang sub-step of length h starting at s: potential half kick, exact
// spectral kinetic step, potential half kick, with Omega^2 at s + h/2.
class StrangStepper {
public:
    StrangStepper(const GridSpec& grid, const FrequencyProgram& program)
        : grid_(grid), program_(program), spec_(grid.n_points), q2_(grid.n_points) {
        for (int i = 0; i < grid_.n_points; ++i) q2_[i] = grid_.q(i) * grid_.q(i);
    }

    void advance(Eigen::VectorXcd& psi, double s, double h) {
        const int n = grid_.n_points;
        const Eigen::VectorXcd& kinetic = kinetic_factors(h);
        const double w2 = program_.omega2_s(s + 0.5 * h);
        const double kick = -0.25 * h * w2;
        for (int i = 0; i < n; ++i) psi[i] *= std::polar(1.0, kick * q2_[i]);
        fft_.fwd(spec_, psi);
        spec_.array() *= kinetic.array();
        fft_.inv(psi, spec_);
        for (int i = 0; i < n; ++i) psi[i] *= std::polar(1.0, kick * q2_[i]);
    }

private:
    const Eigen::VectorXcd& kinetic_factors(double h) {
        auto it = kinetic_.find(h);
        if (it != kinetic_.end()) return it->second;
        Eigen::VectorXcd k(grid_.n_points);
        for (int j = 0; j < grid_.n_points; ++j) {
            double p = raw_momentum(j, grid_.n_points, grid_.dp());
            k[j] = std::polar(1.0, -0.5 * p * p * h);
        }
        return kinetic_.emplace(h, std::move(k)).first->second;
    }

    const GridSpec& grid_;
    const FrequencyProgram& program_;
    Eigen::FFT<double> fft_;
    Eigen::VectorXcd spec_;
    Eigen::VectorXd q2_;
    std::map<double, Eigen::VectorXcd> kinetic_;
};

} // namespace

PropagationResult propagate(const WaveFunction& initial, const FrequencyProgram& program,
                            int n_snapshots, int order) {
    const GridSpec& grid = initial.grid;
    grid.validate();
    if (n_snapshots < 2) throw std::invalid_argument("propagate: need at least 2 snapshots");
    if (order != 2 && order != 4)
        throw std::invalid_argument("propagate: order must be 2 or 4");

    const long n_steps = std::max<long>(1, std::lround(1.0 / grid.dt));
    const double dt = 1.0 / static_cast<double>(n_steps);

    // Yoshida triple-jump coefficients (order 4 composition of Strang steps).
    const double cbrt2 = std::cbrt(2.0);
    const double w1 = 1.0 / (2.0 - cbrt2);
    const double w0 = -cbrt2 / (2.0 - cbrt2);
    std::vector<double> substeps;
    if (order == 2)
        substeps = {1.0};
    else
        substeps = {w1, w0, w1};

    // Snapshot step indices, endpoints included.
    std::vector<long> snap_idx(n_snapshots);
    for (int k = 0; k < n_snapshots; ++k)
        snap_idx[k] = std::lround(double(k) * double(n_steps) / double(n_snapshots - 1));

    PropagationResult result;
    Eigen::VectorXcd psi = initial.amplitudes;
    StrangStepper stepper(grid, program);

    auto record = [&](long step) {
        double s = double(step) / double(n_steps);
        result.snapshots.push_back(WaveFunction{grid, psi, s});
        result.snapshot_times.push_back(s);
    };

    std::size_t next_snap = 0;
    if (snap_idx[0] == 0) {
        record(0);
        next_snap = 1;
    }

    for (long step = 0; step < n_steps; ++step) {
        double s = double(step) * dt;
        for (double w : substeps) {
            stepper.advance(psi, s, w * dt);
            s += w * dt;
        }

        double norm2 = psi.squaredNorm() * grid.dq();
        result.max_norm_drift = std::max(result.max_norm_drift, std::abs(norm2 - 1.0));
        double bprob = boundary_probability(psi, grid.dq());
        result.max_boundary_probability = std::max(result.max_boundary_probability, bprob);

        while (next_snap < snap_idx.size() && snap_idx[next_snap] == step + 1) {
            record(step + 1);
            ++next_snap;
        }
    }
    result.boundary_warning = result.max_boundary_probability > 1e-10;
    return result;
}

MomentState measure_moments(const WaveFunction& wf) {
    const GridSpec& grid = wf.grid;
    const int n = grid.n_points;
    const double dq = grid.dq();

    MomentState m;
    m.time = wf.time;
    for (int i = 0; i < n; ++i) {
        double prob = std::norm(wf.amplitudes[i]) * dq;
        double q = grid.q(i);
        m.q_mean += q * prob;
        m.q2 += q * q * prob;
    }

    Eigen::FFT<double> fft;
    Eigen::VectorXcd spec(n);
    Eigen::VectorXcd src = wf.amplitudes;
    fft.fwd(spec, src);
    const double weight = dq / n; // |spec_k|^2 * weight integrates to the norm
    Eigen::VectorXcd p_psi_spec(n);
    for (int k = 0; k < n; ++k) {
        double p = raw_momentum(k, n, grid.dp());
        double prob = std::norm(spec[k]) * weight;
        m.p_mean += p * prob;
        m.p2 += p * p * prob;
        p_psi_spec[k] = p * spec[k];
    }

    // <QP + PQ> = 2 Re <psi| Q (P psi)>, P psi by spectral derivative.
    Eigen::VectorXcd p_psi(n);
    fft.inv(p_psi, p_psi_spec);
    std::complex<double> qp = 0.0;
    for (int i = 0; i < n; ++i)
        qp += std::conj(wf.amplitudes[i]) * grid.q(i) * p_psi[i] * dq;
    m.qp_sym = 2.0 * qp.real();
    return m;
}

Eigen::VectorXcd momentum_spectrum(const WaveFunction& wf) {
    const GridSpec& grid = wf.grid;
    const int n = grid.n_points;
    Eigen::VectorXcd staggered(n);
    for (int i = 0; i < n; ++i)
        staggered[i] = (i % 2 == 0) ? wf.amplitudes[i] : -wf.amplitudes[i];
    Eigen::FFT<double> fft;
    Eigen::VectorXcd spec(n);
    fft.fwd(spec, staggered);
    const double scale = grid.dq() / std::sqrt(kTwoPi);
    Eigen::VectorXcd out(n);
    for (int j = 0; j < n; ++j) {
        double p = grid.p_centered(j);
        out[j] = scale * std::polar(1.0, -p * grid.q_min) * spec[j];
    }
    return out;
}

std::complex<double> momentum_amplitude(const WaveFunction& wf, double p) {
    const GridSpec& grid = wf.grid;
    std::complex<double> acc = 0.0;
    for (int i = 0; i < grid.n_points; ++i)
        acc += wf.amplitudes[i] * std::polar(1.0, -p * grid.q(i));
    return acc * grid.dq() / std::sqrt(kTwoPi);
}

double l2_distance(const WaveFunction& a, const WaveFunction& b) {
    if (a.grid.n_points != b.grid.n_points)
        throw std::invalid_argument("l2_distance: incompatible grids");
    return std::sqrt((a.amplitudes - b.amplitudes).squaredNorm() * a.grid.dq());
}

namespace {

struct EigenbasisFactors {
    double u0, u_s, du_s, I_s;
};

EigenbasisFactors eigenbasis_factors(const ReferenceTrajectory& traj, double s) {
    const Polynomial<double>& u = traj.poly();
    const double u0 = u(0.0);
    if (u0 == 0.0)
        throw std::invalid_argument("invariant eigenbasis: requires u(0) != 0");
    const double u_scale = std::max(u.max_abs_on(0.0, 1.0), 1e-300);
    const double u_s = u(s);
    if (std::abs(u_s) <= 1e-8 * u_scale)
        throw MirrorNode("invariant eigenbasis: u(s) ~ 0 at the requested time");
    for (double r : u.real_roots_in(0.0, s)) {
        if (r > 1e-9 && r < s - 1e-9 && std::abs(u(r)) <= 1e-9 * u_scale)
            throw SingularIntegrand("invariant eigenbasis: u vanishes inside (0, s)");
    }
    double I_s = 0.0;
    if (s > 0.0) {
        auto integrand = [&](double x) {
            double ux = u(x);
            return (u0 * u0) / (ux * ux);
        };
        I_s = integrate_adaptive(integrand, 0.0, s).value;
    }
    return {u0, u_s, traj.du_ds(s), I_s};
}

} // namespace

Eigen::VectorXcd invariant_eigenfunction(const ReferenceTrajectory& traj, double p0,
                                         const GridSpec& grid, double s) {
    const EigenbasisFactors f = eigenbasis_factors(traj, s);
    const double amp = std::sqrt(f.u0 / f.u_s) / std::sqrt(kTwoPi);
    const double global_phase = -0.5 * p0 * p0 * f.I_s;

    Eigen::VectorXcd phi(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) {
        double q = grid.q(i);
        double phase = (f.u0 * p0 * q + 0.5 * f.du_s * q * q) / f.u_s + global_phase;
        phi[i] = amp * std::polar(1.0, phase);
    }
    return phi;
}

WaveFunction reconstruct_via_expansion(const WaveFunction& initial,
                                       const ReferenceTrajectory& traj, double s) {
    const GridSpec& grid = initial.grid;
    const int n = grid.n_points;
    const EigenbasisFactors f = eigenbasis_factors(traj, s);

    const Eigen::VectorXcd spec = momentum_spectrum(initial);
    const Eigen::VectorXd p = grid.p_grid();
    const double dp = grid.dp();
    const double pref = std::sqrt(f.u0 / (kTwoPi * f.u_s));

    // Half the quadrature phase is independent of q; precompute it.
    Eigen::VectorXcd weighted(n);
    for (int j = 0; j < n; ++j)
        weighted[j] = dp * std::polar(1.0, -0.5 * p[j] * p[j] * f.I_s) * spec[j];

    WaveFunction out{grid, Eigen::VectorXcd(n), s};
    parallel_for(n, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            double q = grid.q(static_cast<int>(i));
            std::complex<double> acc = 0.0;
            const double qu = f.u0 * q / f.u_s;
            for (int j = 0; j < n; ++j) acc += std::polar(1.0, p[j] * qu) * weighted[j];
            out.amplitudes[i] =
                pref * std::polar(1.0, 0.5 * f.du_s * q * q / f.u_s) * acc;
        }
    });
    return out;
}

WignerGrid wigner(const WaveFunction& wf, int p_points) {
    const GridSpec& grid = wf.grid;
    const int n = grid.n_points;
    if (p_points <= 0) p_points = n;
    if (p_points > n)
        throw std::invalid_argument("wigner: p_points cannot exceed the grid size");

    WignerGrid out;
    out.dq = grid.dq();
    out.dp = M_PI / (n * grid.dq()); // half the spectral spacing
    out.q = grid.q_grid();
    out.p = Eigen::VectorXd(p_points);
    const int j0 = n / 2 - p_points / 2;
    for (int j = 0; j < p_points; ++j) out.p[j] = (j0 + j - n / 2) * out.dp;
    out.W.resize(n, p_points);

    const double scale = grid.dq() / M_PI;
    parallel_for(n, [&](std::int64_t lo, std::int64_t hi) {
        Eigen::FFT<double> fft;
        Eigen::VectorXcd corr(n), spec(n);
        for (std::int64_t row = lo; row < hi; ++row) {
            const int m = static_cast<int>(row);
            // corr[l] = conj(psi(m+l)) psi(m-l), zero outside the grid, with
            // the (-1)^l factor that centers the momentum axis.
            for (int k = 0; k < n; ++k) {
                int l = (k < n / 2) ? k : k - n;
                int ip = m + l, im = m - l;
                std::complex<double> c = 0.0;
                if (ip >= 0 && ip < n && im >= 0 && im < n)
                    c = std::conj(wf.amplitudes[ip]) * wf.amplitudes[im];
                corr[k] = (l % 2 == 0) ? c : -c;
            }
            // Positive-exponent transform via conjugation of the forward FFT.
            corr = corr.conjugate();
            fft.fwd(spec, corr);
            for (int j = 0; j < p_points; ++j)
                out.W(m, j) = scale * std::real(std::conj(spec[j0 + j]));
        }
    });
    return out;
}

double level_set_area(const WignerGrid& grid, double level) {
    const int nq = static_cast<int>(grid.W.rows());
    const int np = static_cast<int>(grid.W.cols());
    const double cell = grid.dq * grid.dp;
    const int refine = 8;

    double area = 0.0;
    for (int i = 0; i + 1 < nq; ++i) {
        for (int j = 0; j + 1 < np; ++j) {
            double v00 = grid.W(i, j) - level;
            double v10 = grid.W(i + 1, j) - level;
            double v01 = grid.W(i, j + 1) - level;
            double v11 = grid.W(i + 1, j + 1) - level;
            bool any_in = (v00 >= 0) || (v10 >= 0) || (v01 >= 0) || (v11 >= 0);
            bool all_in = (v00 >= 0) && (v10 >= 0) && (v01 >= 0) && (v11 >= 0);
            if (!any_in) continue;
            if (all_in) {
                area += cell;
                continue;
            }
            // Boundary cell: bilinear subsampling.
            int inside = 0;
            for (int a = 0; a < refine; ++a) {
                double x = (a + 0.5) / refine;
                for (int b = 0; b < refine; ++b) {
                    double y = (b + 0.5) / refine;
                    double v = v00 * (1 - x) * (1 - y) + v10 * x * (1 - y) +
                               v01 * (1 - x) * y + v11 * x * y;
                    if (v >= 0) ++inside;
                }
            }
            area += cell * double(inside) / double(refine * refine);
        }
    }
    return area;
}

} // namespace hscaler

#include "hscaler/csim.hpp"

#include "hscaler/errors.hpp"
#include "hscaler/parallel.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace hscaler {

namespace {

// SplitMix64: the per-point substream generator. Bit-stable everywhere, so
// ensembles are reproducible across platforms and thread counts.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline double uniform01(std::uint64_t& state) {
    // (0, 1), strictly inside so log() below is safe.
    return (double(splitmix64(state) >> 11) + 0.5) * 0x1.0p-53;
}

// One standard-normal pair per point via Box-Muller.
inline void normal_pair(std::uint64_t seed, std::int64_t index, double& z0, double& z1) {
    std::uint64_t state = seed ^ (0xD1B54A32D192ED03ULL * (std::uint64_t(index) + 1));
    double u1 = uniform01(state);
    double u2 = uniform01(state);
    double r = std::sqrt(-2.0 * std::log(u1));
    z0 = r * std::cos(2.0 * M_PI * u2);
    z1 = r * std::sin(2.0 * M_PI * u2);
}

} // namespace

Ensemble sample_gaussian(const MomentState& moments, std::int64_t n, std::uint64_t seed) {
    if (n <= 0) throw std::invalid_argument("sample_gaussian: n must be positive");
    moments.require_admissible();

    Eigen::Matrix2d cov = moments.covariance();
    Eigen::LLT<Eigen::Matrix2d> llt(cov);
    if (llt.info() != Eigen::Success)
        throw BadCovariance("sample_gaussian: covariance is not positive definite");
    const Eigen::Matrix2d L = llt.matrixL();

    Ensemble e;
    e.points.resize(n, 2);
    e.weights = Eigen::ArrayXd::Constant(n, 1.0 / double(n));
    e.time = moments.time;
    e.rng_seed = seed;

    const double qm = moments.q_mean, pm = moments.p_mean;
    parallel_for(n, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            double z0, z1;
            normal_pair(seed, i, z0, z1);
            e.points(i, 0) = qm + L(0, 0) * z0;
            e.points(i, 1) = pm + L(1, 0) * z0 + L(1, 1) * z1;
        }
    });
    return e;
}

Ensemble propagate_exact(const Ensemble& ensemble, const FundamentalSolution& solution,
                         double t) {
    const Eigen::Matrix2d M = solution.matrix(t);
    Ensemble out = ensemble;
    out.time = t;
    parallel_for(ensemble.size(), [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            double q = ensemble.points(i, 0), p = ensemble.points(i, 1);
            out.points(i, 0) = M(0, 0) * q + M(0, 1) * p;
            out.points(i, 1) = M(1, 0) * q + M(1, 1) * p;
        }
    });
    return out;
}

Ensemble propagate_exact(const Ensemble& ensemble, const FrequencyProgram& program,
                         double t, double mass) {
    FundamentalSolution fs(program, mass);
    return propagate_exact(ensemble, fs, t);
}

Ensemble propagate_verlet(const Ensemble& ensemble, const FrequencyProgram& program,
                          double dt, double t_end, double mass) {
    if (!(dt > 0.0)) throw std::invalid_argument("propagate_verlet: dt must be positive");
    const double t0 = ensemble.time;
    if (t_end < t0) throw std::invalid_argument("propagate_verlet: t_end before start");

    const long n_steps = std::max<long>(1, std::lround((t_end - t0) / dt));
    const double h = (t_end - t0) / double(n_steps);

    // omega^2 at the step boundaries, shared by all points.
    std::vector<double> w2(n_steps + 1);
    for (long k = 0; k <= n_steps; ++k) w2[k] = program.omega2(t0 + h * double(k));

    Ensemble out = ensemble;
    out.time = t_end;
    parallel_for(ensemble.size(), [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            double q = ensemble.points(i, 0), p = ensemble.points(i, 1);
            for (long k = 0; k < n_steps; ++k) {
                p += -mass * w2[k] * q * 0.5 * h;
                q += p * h / mass;
                p += -mass * w2[k + 1] * q * 0.5 * h;
            }
            out.points(i, 0) = q;
            out.points(i, 1) = p;
        }
    });
    return out;
}

MomentState ensemble_moments(const Ensemble& ensemble) {
    // Kahan-compensated accumulation in index order.
    double sums[5] = {0, 0, 0, 0, 0};
    double comp[5] = {0, 0, 0, 0, 0};
    auto add = [&](int which, double value) {
        double y = value - comp[which];
        double t = sums[which] + y;
        comp[which] = (t - sums[which]) - y;
        sums[which] = t;
    };
    for (std::int64_t i = 0; i < ensemble.size(); ++i) {
        double w = ensemble.weights[i];
        double q = ensemble.points(i, 0), p = ensemble.points(i, 1);
        add(0, w * q);
        add(1, w * p);
        add(2, w * q * q);
        add(3, w * p * p);
        add(4, w * 2.0 * q * p);
    }
    MomentState m;
    m.q_mean = sums[0];
    m.p_mean = sums[1];
    m.q2 = sums[2];
    m.p2 = sums[3];
    m.qp_sym = sums[4];
    m.time = ensemble.time;
    return m;
}

} // namespace hscaler

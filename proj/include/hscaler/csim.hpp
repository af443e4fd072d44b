#pragma once

#include "hscaler/moments.hpp"
#include "hscaler/protocol.hpp"

#include <Eigen/Dense>

#include <cstdint>

namespace hscaler {

// Weighted classical phase-space ensemble. Gaussian sampling yields uniform
// positive weights; the weight column exists so non-Gaussian Wigner swarms
// (signed weights) can reuse the format.
struct Ensemble {
    Eigen::ArrayX2d points; // column 0: q, column 1: p
    Eigen::ArrayXd weights; // sums to 1
    double time = 0;
    std::uint64_t rng_seed = 0;

    std::int64_t size() const { return points.rows(); }
};

// Draw n points from the Gaussian with the given first/second moments.
// Deterministic for a fixed seed, independent of thread count: each point has
// its own counter-derived substream. Throws BadCovariance unless the moments
// are quantum-admissible.
Ensemble sample_gaussian(const MomentState& moments, std::int64_t n, std::uint64_t seed);

// Map every point by the fundamental matrix M(t).
Ensemble propagate_exact(const Ensemble& ensemble, const FrequencyProgram& program,
                         double t, double mass = 1.0);
Ensemble propagate_exact(const Ensemble& ensemble, const FundamentalSolution& solution,
                         double t);

// Velocity-Verlet stepping under the force -m omega^2(t) q from the
// ensemble's current time to t_end; independent O(dt^2) oracle for
// propagate_exact.
Ensemble propagate_verlet(const Ensemble& ensemble, const FrequencyProgram& program,
                          double dt, double t_end, double mass = 1.0);

// Weighted sample moments, fixed-order compensated summation.
MomentState ensemble_moments(const Ensemble& ensemble);

} // namespace hscaler

#pragma once

#include <stdexcept>
#include <string>

namespace hscaler {

// A zero of u(t) inside the process window that is not matched by a zero of
// u''(t) of at least equal multiplicity. The trap frequency would diverge, so
// the protocol is rejected.
struct GenuineSingularity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive ODE integration failed to meet the requested tolerance.
struct IntegratorFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The integrand of a quadrature has a pole inside the interval (u or u'
// vanishes there); the caller must switch to the fundamental-matrix path.
struct SingularIntegrand : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested wave packet does not fit inside the spatial or spectral grid.
struct GridTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invariant eigenfunctions cannot be evaluated where u(t) ~ 0.
struct MirrorNode : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Covariance matrix is not positive definite or violates the uncertainty floor.
struct BadCovariance : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent run configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace hscaler

#pragma once

#include "hscaler/moments.hpp"

#include <cmath>

namespace hscaler {

// Dimensionless code units: Q = q/l, s = t/t_f, P = p l/hbar with
// l = sqrt(hbar t_f / m). With t_f = m = hbar = 1 the conversions are
// identities.
struct CodeUnits {
    double mass = 1.0;
    double hbar = 1.0;
    double t_f = 1.0;

    double length() const { return std::sqrt(hbar * t_f / mass); }
    double momentum() const { return hbar / length(); }

    double to_Q(double q) const { return q / length(); }
    double to_P(double p) const { return p / momentum(); }
    double to_s(double t) const { return t / t_f; }
    double from_Q(double Q) const { return Q * length(); }
    double from_P(double P) const { return P * momentum(); }
    double from_s(double s) const { return s * t_f; }

    // Omega(s)^2 = t_f^2 omega(t)^2
    double to_Omega2(double omega2) const { return t_f * t_f * omega2; }
    double from_Omega2(double Omega2) const { return Omega2 / (t_f * t_f); }

    MomentState to_dimensionless(const MomentState& m) const {
        MomentState out = m;
        const double l = length(), pu = momentum();
        out.q_mean /= l;
        out.q2 /= l * l;
        out.p_mean /= pu;
        out.p2 /= pu * pu;
        out.qp_sym /= l * pu;
        out.time /= t_f;
        return out;
    }

    MomentState to_dimensional(const MomentState& m) const {
        MomentState out = m;
        const double l = length(), pu = momentum();
        out.q_mean *= l;
        out.q2 *= l * l;
        out.p_mean *= pu;
        out.p2 *= pu * pu;
        out.qp_sym *= l * pu;
        out.time *= t_f;
        return out;
    }
};

} // namespace hscaler

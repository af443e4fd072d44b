#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace hscaler {

// Dense univariate polynomial, coefficients in ascending degree.
// Scalar is double in production code; tests instantiate long double where an
// independent high-precision route is wanted.
template <typename Scalar = double>
class Polynomial {
public:
    Polynomial() : coeffs_{Scalar(0)} {}
    explicit Polynomial(std::vector<Scalar> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) coeffs_.push_back(Scalar(0));
    }

    static Polynomial constant(Scalar c) { return Polynomial(std::vector<Scalar>{c}); }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Scalar>& coeffs() const { return coeffs_; }
    Scalar coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k] : Scalar(0);
    }

    Scalar operator()(Scalar x) const {
        Scalar acc = coeffs_.back();
        for (std::size_t i = coeffs_.size() - 1; i-- > 0;) acc = acc * x + coeffs_[i];
        return acc;
    }

    Polynomial derivative() const {
        if (coeffs_.size() <= 1) return Polynomial();
        std::vector<Scalar> d(coeffs_.size() - 1);
        for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = Scalar(k) * coeffs_[k];
        return Polynomial(std::move(d));
    }

    Scalar max_abs_coeff() const {
        Scalar m = 0;
        for (Scalar c : coeffs_) m = std::max(m, std::abs(c));
        return m;
    }

    // Largest |p(x)| over a uniform sample of [lo, hi]; cheap scale estimate.
    Scalar max_abs_on(Scalar lo, Scalar hi, int samples = 257) const {
        Scalar m = 0;
        for (int i = 0; i < samples; ++i) {
            Scalar x = lo + (hi - lo) * Scalar(i) / Scalar(samples - 1);
            m = std::max(m, std::abs((*this)(x)));
        }
        return m;
    }

    bool is_zero(Scalar tol = Scalar(0)) const { return max_abs_coeff() <= tol; }

    // Synthetic division by (x - root); the remainder is dropped.
    Polynomial deflated(Scalar root) const {
        if (coeffs_.size() <= 1) return Polynomial();
        std::vector<Scalar> q(coeffs_.size() - 1);
        Scalar carry = coeffs_.back();
        for (std::size_t k = coeffs_.size() - 1; k-- > 0;) {
            q[k] = carry;
            carry = coeffs_[k] + root * carry;
        }
        return Polynomial(std::move(q));
    }

    Polynomial operator*(Scalar s) const {
        std::vector<Scalar> c(coeffs_);
        for (Scalar& v : c) v *= s;
        return Polynomial(std::move(c));
    }

    Polynomial operator+(const Polynomial& o) const {
        std::vector<Scalar> c(std::max(coeffs_.size(), o.coeffs_.size()), Scalar(0));
        for (std::size_t k = 0; k < coeffs_.size(); ++k) c[k] += coeffs_[k];
        for (std::size_t k = 0; k < o.coeffs_.size(); ++k) c[k] += o.coeffs_[k];
        return Polynomial(std::move(c));
    }

    template <typename To>
    Polynomial<To> cast() const {
        std::vector<To> c(coeffs_.size());
        for (std::size_t k = 0; k < coeffs_.size(); ++k) c[k] = static_cast<To>(coeffs_[k]);
        return Polynomial<To>(std::move(c));
    }

    // Real roots inside [lo, hi], found from the companion matrix, polished by
    // Newton iterations and clustered so a multiple root appears once.
    std::vector<Scalar> real_roots_in(Scalar lo, Scalar hi) const;

private:
    std::vector<Scalar> coeffs_;
};

template <typename Scalar>
std::vector<Scalar> Polynomial<Scalar>::real_roots_in(Scalar lo, Scalar hi) const {
    std::vector<Scalar> roots;

    // Strip numerically-dead leading coefficients before forming the companion
    // matrix.
    const Scalar scale = max_abs_coeff();
    if (scale == Scalar(0)) return roots; // zero polynomial: treated as root-free
    int deg = degree();
    while (deg > 0 && std::abs(coeffs_[deg]) < Scalar(1e-14) * scale) --deg;
    if (deg == 0) return roots;

    using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic>;
    Mat companion = Mat::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i)
        companion(i, deg - 1) = -static_cast<double>(coeffs_[i] / coeffs_[deg]);

    Eigen::EigenSolver<Mat> es(companion, /*computeEigenvectors=*/false);
    const auto& ev = es.eigenvalues();

    const Scalar width = std::max(hi - lo, Scalar(1));
    const Scalar edge = Scalar(1e-7) * width;
    const Polynomial der = derivative();
    for (int i = 0; i < ev.size(); ++i) {
        if (std::abs(ev[i].imag()) > 1e-7 * std::max(1.0, std::abs(ev[i].real()))) continue;
        Scalar r = static_cast<Scalar>(ev[i].real());
        if (r < lo - edge || r > hi + edge) continue;
        // Newton polish; multiple roots converge slowly but the seed is close.
        for (int it = 0; it < 50; ++it) {
            Scalar f = (*this)(r);
            Scalar df = der(r);
            if (df == Scalar(0)) break;
            Scalar step = f / df;
            r -= step;
            if (std::abs(step) < Scalar(1e-16) * std::max(Scalar(1), std::abs(r))) break;
        }
        r = std::clamp(r, lo, hi);
        roots.push_back(r);
    }

    std::sort(roots.begin(), roots.end());
    std::vector<Scalar> unique;
    for (Scalar r : roots) {
        if (unique.empty() || std::abs(r - unique.back()) > Scalar(1e-7) * width)
            unique.push_back(r);
    }
    return unique;
}

} // namespace hscaler

/**
 * @file basis_eval.hpp
 * @brief Internal: basis function kernels and the positively scaled
 *        D-polynomial used by sign scans
 */

#pragma once

#include "termshape/descartes.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace termshape::detail {

/// Below this argument the integrated kernel uses its Taylor series.
inline constexpr double kGTaylorSwitch = 1.0;

/// G(y) = (1 - e^{-y} - y e^{-y}) / y^2, so that g_a(x) = G(a x).
template <class T>
T g_kernel(T y) {
    if (y < T(kGTaylorSwitch)) {
        // sum_k (-y)^k / ((k+2) k!)
        T term = T(1);
        T sum = T(0.5);
        const T stop = std::numeric_limits<T>::epsilon() * T(1e-3);
        for (int k = 1; k < 60; ++k) {
            term *= -y / T(k);
            const T add = term / T(k + 2);
            sum += add;
            if (std::abs(add) < stop * std::abs(sum)) break;
        }
        return sum;
    }
    using std::exp;
    using std::expm1;
    return (-expm1(-y) - y * exp(-y)) / (y * y);
}

template <class T>
T basis_value(BasisKind kind, T alpha, T x) {
    using std::exp;
    if (kind == BasisKind::F) return exp(-alpha * x);
    return g_kernel(alpha * x);
}

struct Sample {
    double x;
    double value;  // positively scaled polynomial value
    double scale;  // same weight applied to sum |a_i phi_i(x)|
};

/// w(x) * p(x) for a positive weight w chosen so the scaled function has a
/// finite non-zero limit at both ends of [0, inf): for F, w = exp(a_min x);
/// for G, w = 1 + (a_ref x)^2. Signs of p and w*p agree everywhere.
class ScaledDPoly {
public:
    explicit ScaledDPoly(const DPolynomial& p);

    double value(double x) const;
    Sample sample(double x) const;

    /// Uniform samples x_k = k h, k = 0..n-1, evaluated with multiplicative
    /// exponential updates and periodic exact resynchronisation.
    void sample_uniform(double h, int n, std::vector<Sample>& out) const;

    double reference_decay() const noexcept { return ref_; }
    std::size_t nonzero_terms() const noexcept { return n_; }

private:
    BasisKind kind_;
    std::size_t n_ = 0;  // number of non-zero terms kept
    std::array<double, 5> a_{};
    std::array<double, 5> alpha_{};
    double ref_ = 1.0;
};

}  // namespace termshape::detail

/**
 * @file oracles.hpp
 * @brief Independent reference computations shared by the unit tests
 */

#pragma once

#include "termshape/sign_sequence.hpp"
#include "termshape/vasicek.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <random>
#include <vector>

namespace oracle {

/// Adaptive Gauss-Kronrod integral of f over [a, b].
template <class F>
double integrate(F f, double a, double b) {
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    return gauss_kronrod<double, 31>::integrate(f, a, b, 12, 1e-14, &err);
}

/// (1/x^2) int_0^x y exp(-a y) dy.
inline double g_basis(double a, double x) {
    if (x == 0.0) return 0.5;
    return integrate([a](double y) { return y * std::exp(-a * y); }, 0.0, x) / (x * x);
}

/// Every subsequence of the reduced b, reduced again, compared with reduced a.
inline bool brute_subsequence(const termshape::SignSeq& a, const termshape::SignSeq& b) {
    using termshape::Sign;
    using termshape::SignSeq;
    const SignSeq ra = termshape::reduce(a);
    const SignSeq rb = termshape::reduce(b);
    if (ra.is_empty_pure()) return true;
    if (rb.is_empty_pure()) return false;
    const std::size_t n = rb.size();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<Sign> pick;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) pick.push_back(rb[i]);
        }
        if (termshape::reduce(SignSeq(pick)) == ra) return true;
    }
    return false;
}

/// Uniform draw on [lo, hi].
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// A random two-factor model in the given regime with a random state.
inline termshape::VasicekModel random_model(std::mt19937_64& rng, termshape::ScaleRegime r) {
    termshape::VasicekModel m;
    const double l1 = uniform(rng, 0.1, 2.0);
    double l2 = 2.0 * l1;
    if (r == termshape::ScaleRegime::separated) l2 = l1 * uniform(rng, 2.1, 5.0);
    if (r == termshape::ScaleRegime::proximal) l2 = l1 * uniform(rng, 1.05, 1.95);
    m.lambda = {l1, l2};
    m.theta = {uniform(rng, -0.05, 0.1), uniform(rng, -0.05, 0.1)};
    m.kappa = {uniform(rng, 0.2, 2.0), uniform(rng, 0.2, 2.0)};
    m.kappa0 = uniform(rng, -0.02, 0.02);
    m.sigma = {uniform(rng, 0.0, 0.5), uniform(rng, 0.0, 0.5)};
    m.rho = uniform(rng, -0.95, 0.95);
    return m;
}

inline termshape::State random_state(std::mt19937_64& rng, int d = 2) {
    termshape::State s;
    for (int i = 0; i < d; ++i) s.z.push_back(uniform(rng, -0.1, 0.15));
    return s;
}

}  // namespace oracle

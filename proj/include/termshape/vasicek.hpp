/**
 * @file vasicek.hpp
 * @brief One- and two-factor Vasicek models: curves, derivative
 *        D-polynomials and exact factor transitions
 *
 * Factor dynamics under the pricing measure:
 *
 *   dZ_i = lambda_i (theta_i - Z_i) dt + sigma_i dW_i,   d<W_1, W_2> = rho dt
 *   r_t  = kappa0 + sum_i kappa_i Z_i
 *
 * With B_i(x) = (kappa_i / lambda_i)(exp(-lambda_i x) - 1), the forward curve
 * and its derivative have closed forms that never need the A(x) term of the
 * bond price. The derivative of the forward curve is
 *
 *   l(x) = u2 e^{-2 l2 x} + c e^{-(l1+l2) x} + u1 e^{-2 l1 x} + w2 e^{-l2 x} + w1 e^{-l1 x}
 *
 * and the yield derivative weight m(x) = (1/x^2) int_0^x y l(y) dy carries the
 * same coefficients on the integrated basis g_a.
 */

#pragma once

#include "termshape/descartes.hpp"

#include <span>
#include <string>
#include <vector>

namespace termshape {

enum class Curve { forward, yield };
enum class ScaleRegime { separated, proximal, critical };

std::string to_string(Curve c);
std::string to_string(ScaleRegime r);
Curve parse_curve(std::string_view text);

/// Relative tolerance on |2 l1 - l2| under which a model counts as critical.
inline constexpr double kCriticalTol = 1e-12;

struct VasicekModel {
    int d = 2;
    std::vector<double> lambda;  // strictly increasing, > 0
    std::vector<double> theta;
    std::vector<double> kappa;   // > 0
    double kappa0 = 0.0;
    std::vector<double> sigma;   // >= 0
    double rho = 0.0;            // only used for d = 2

    /// Throws std::invalid_argument on any violated parameter constraint.
    void validate() const;

    /// Instantaneous covariance of the factor increments (d x d, row-major).
    std::vector<double> covariance() const;
};

struct State {
    std::vector<double> z;
};

/// Requires d = 2; throws std::invalid_argument otherwise.
ScaleRegime regime(const VasicekModel& model);
ScaleRegime regime_of(double lambda1, double lambda2);

std::vector<double> B(const VasicekModel& model, double x);

double forward_curve(const VasicekModel& model, const State& state, double x);

/// (1/x) int_0^x f(y) dy in closed form; equals f(0) at x = 0.
double yield_curve(const VasicekModel& model, const State& state, double x);

/// The five named coefficients of l. For d = 1 only u1 and w1 are used.
struct LCoefficients {
    double u1 = 0.0;
    double u2 = 0.0;
    double c = 0.0;
    double w1 = 0.0;
    double w2 = 0.0;
};

LCoefficients l_named_coefficients(const VasicekModel& model, const State& state);

/// l as an F-basis D-polynomial, ordered per regime:
///   proximal   (2l2, l1+l2, 2l1, l2, l1)  with (u2, c, u1, w2, w1)
///   separated  (2l2, l1+l2, l2, 2l1, l1)  with (u2, c, w2, u1, w1)
///   critical   (2l2, l1+l2, l2, l1)       with (u2, c, w2+u1, w1)
/// For d = 1: (2l, l) with (u, w).
DPolynomial l_coefficients(const VasicekModel& model, const State& state);

/// Same coefficients on the G basis.
DPolynomial m_coefficients(const VasicekModel& model, const State& state);

/// Derivative of the forward curve evaluated from B and B' directly.
double l_eval_direct(const VasicekModel& model, const State& state, double x);

/// m(x) evaluated through the G-basis polynomial.
double m_eval(const VasicekModel& model, const State& state, double x);

/// Exact transition of the factor process over dt, driven by d standard
/// normal draws. The increment covariance is factored by its symmetric
/// square root.
State ou_exact_step(const VasicekModel& model, const State& state, double dt,
                    std::span<const double> noise);

/// Stationary-in-dt pieces of ou_exact_step, reusable across many draws.
struct OuTransition {
    std::vector<double> mean;  // conditional mean
    std::vector<double> root;  // symmetric square root of covariance, row-major
    int d = 0;

    State apply(std::span<const double> noise) const;
};

OuTransition ou_transition(const VasicekModel& model, const State& state, double dt);

}  // namespace termshape

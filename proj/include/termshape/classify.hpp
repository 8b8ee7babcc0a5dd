/**
 * @file classify.hpp
 * @brief Shape classification of forward and yield curves, admissible
 *        shape sets and sign-sequence bounds
 */

#pragma once

#include "termshape/descartes.hpp"
#include "termshape/sign_sequence.hpp"
#include "termshape/vasicek.hpp"

#include <vector>

namespace termshape {

enum class ExtremumKind { hump, dip };

struct Extremum {
    double location = 0.0;
    ExtremumKind kind = ExtremumKind::hump;
};

struct ShapeReport {
    Curve curve = Curve::forward;
    ShapeName shape;
    SignSeq derivative_sseq = SignSeq::empty_pure();
    std::vector<Extremum> extrema;

    // Diagnostics.
    DPolynomial dpoly;
    double window = 0.0;
    double max_residual = 0.0;
    int retries = 0;
    /// Some w_j vanished to within 1e-12 of the coefficient scale, i.e. the
    /// state lies on a region boundary.
    bool boundary = false;
};

/// Classifies the curve through the sign sequence of its derivative.
/// Propagates NumericalInconsistency from the sign scan.
ShapeReport classify(const VasicekModel& model, const State& state, Curve curve,
                     const GridSpec& grid = {});
ShapeReport classify_forward(const VasicekModel& model, const State& state,
                             const GridSpec& grid = {});
ShapeReport classify_yield(const VasicekModel& model, const State& state,
                           const GridSpec& grid = {});

/// Classification of an arbitrary derivative polynomial.
ShapeReport classify_dpoly(const DPolynomial& p, Curve curve, const GridSpec& grid = {});

enum class RhoClass { nonnegative, negative };

RhoClass rho_class_of(double rho) noexcept;
std::string to_string(RhoClass c);

/// Shapes that can occur for the given regime and correlation sign,
/// including `flat` for the degenerate identically-constant curve.
std::vector<ShapeName> admissible_shapes(ScaleRegime regime, RhoClass rho_class);
bool is_admissible(const ShapeName& shape, ScaleRegime regime, RhoClass rho_class);

/// Coefficient sign pattern bounding sseq of l or m. For the forward curve
/// the derivative sequence is a tail of `bound`, for the yield curve a plain
/// subsequence.
struct SignBound {
    SignSeq bound = SignSeq::empty_pure();
    bool tail = false;
};

/// Bound with u_j read as +, c as + (rho >= 0, dropped) or - (rho < 0),
/// and the signs of w_1, w_2 (u_1 + w_2 when critical) filled in.
SignBound sign_bound(const VasicekModel& model, const State& state, Curve curve);

/// True when the derivative sequence of `report` honours `bound`.
bool satisfies_bound(const SignSeq& derivative_sseq, const SignBound& bound);

/// z-thresholds of the one-factor model. Forward curve: normal below
/// `forward_lower`, humped in between, inverse from `forward_upper` on.
/// The yield thresholds play the same role for the yield curve.
struct OneDimRegions {
    double forward_lower = 0.0;
    double forward_upper = 0.0;
    double yield_lower = 0.0;
    double yield_upper = 0.0;
};

OneDimRegions one_dim_regions(const VasicekModel& model);

/// Shape predicted by the one-factor regions for state z.
ShapeName one_dim_predicted_shape(const VasicekModel& model, double z, Curve curve);

}  // namespace termshape

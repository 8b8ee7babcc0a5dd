/**
 * @file classify.cpp
 * @brief Forward and yield curve shape classification
 */

#include "termshape/classify.hpp"

#include <algorithm>
#include <cmath>

namespace termshape {

namespace {

using Kind = ShapeName::Kind;

constexpr double kBoundaryTol = 1e-12;

bool near_zero_w(const VasicekModel& model, const State& state) {
    const LCoefficients k = l_named_coefficients(model, state);
    const double scale = std::max({std::abs(k.u1), std::abs(k.u2), std::abs(k.c), std::abs(k.w1),
                                   std::abs(k.w2)});
    if (scale == 0.0) return true;
    if (std::abs(k.w1) < kBoundaryTol * scale) return true;
    return model.d == 2 && std::abs(k.w2) < kBoundaryTol * scale;
}

}  // namespace

ShapeReport classify_dpoly(const DPolynomial& p, Curve curve, const GridSpec& grid) {
    ShapeReport report;
    report.curve = curve;
    report.dpoly = p;
    if (p.is_zero()) {
        report.shape = ShapeName::of(Kind::flat);
        report.window = grid.x_max.value_or(20.0 / p.basis.reference_decay());
        return report;
    }
    const SignScan scan = sseq_of_dpoly(p, grid);
    report.derivative_sseq = scan.sseq;
    report.shape = shape_of(scan.sseq);
    report.window = scan.window;
    report.max_residual = scan.max_residual;
    report.retries = scan.retries;
    for (std::size_t i = 0; i < scan.zeros.size(); ++i) {
        const bool hump = scan.sseq[i] == Sign::plus;
        report.extrema.push_back({scan.zeros[i], hump ? ExtremumKind::hump : ExtremumKind::dip});
    }
    return report;
}

ShapeReport classify(const VasicekModel& model, const State& state, Curve curve,
                     const GridSpec& grid) {
    model.validate();
    const DPolynomial p =
        curve == Curve::forward ? l_coefficients(model, state) : m_coefficients(model, state);
    ShapeReport report = classify_dpoly(p, curve, grid);
    report.boundary = near_zero_w(model, state);
    return report;
}

ShapeReport classify_forward(const VasicekModel& model, const State& state, const GridSpec& grid) {
    return classify(model, state, Curve::forward, grid);
}

ShapeReport classify_yield(const VasicekModel& model, const State& state, const GridSpec& grid) {
    return classify(model, state, Curve::yield, grid);
}

RhoClass rho_class_of(double rho) noexcept {
    return rho < 0.0 ? RhoClass::negative : RhoClass::nonnegative;
}

std::string to_string(RhoClass c) { return c == RhoClass::negative ? "negative" : "nonnegative"; }

std::vector<ShapeName> admissible_shapes(ScaleRegime regime, RhoClass rho_class) {
    std::vector<Kind> kinds{Kind::flat, Kind::normal, Kind::inverse, Kind::humped, Kind::dipped,
                            Kind::HD};
    const bool proximal = regime == ScaleRegime::proximal;
    if (!proximal || rho_class == RhoClass::negative) {
        kinds.push_back(Kind::DH);
        kinds.push_back(Kind::HDH);
    }
    if (proximal && rho_class == RhoClass::negative) {
        kinds.push_back(Kind::DHD);
        kinds.push_back(Kind::HDHD);
    }
    std::vector<ShapeName> out;
    out.reserve(kinds.size());
    for (Kind k : kinds) out.push_back(ShapeName::of(k));
    return out;
}

bool is_admissible(const ShapeName& shape, ScaleRegime regime, RhoClass rho_class) {
    const auto set = admissible_shapes(regime, rho_class);
    return std::find(set.begin(), set.end(), shape) != set.end();
}

SignBound sign_bound(const VasicekModel& model, const State& state, Curve curve) {
    const LCoefficients k = l_named_coefficients(model, state);
    std::vector<Sign> seq{Sign::plus};
    if (model.d == 2) {
        const bool negative = model.rho < 0.0;
        if (negative) seq.push_back(Sign::minus);
        switch (regime(model)) {
            case ScaleRegime::proximal:
                if (negative) seq.push_back(Sign::plus);
                seq.push_back(sign_of(k.w2));
                break;
            case ScaleRegime::separated:
                seq.push_back(sign_of(k.w2));
                seq.push_back(Sign::plus);
                break;
            case ScaleRegime::critical:
                seq.push_back(sign_of(k.u1 + k.w2));
                break;
        }
    }
    seq.push_back(sign_of(k.w1));
    return {reduce(SignSeq(std::move(seq))), curve == Curve::forward};
}

bool satisfies_bound(const SignSeq& derivative_sseq, const SignBound& bound) {
    if (derivative_sseq.is_empty_pure()) return true;
    return bound.tail ? tail_subsequence(derivative_sseq, bound.bound)
                      : subsequence(derivative_sseq, bound.bound);
}

OneDimRegions one_dim_regions(const VasicekModel& model) {
    model.validate();
    if (model.d != 1) throw std::invalid_argument("one_dim_regions needs a one-factor model");
    const double lam = model.lambda[0];
    const double kap = model.kappa[0];
    const double sig = model.sigma[0];
    const double th = model.theta[0];
    const double shift = sig * sig * kap / (lam * lam);
    return {th - shift, th, th - 0.75 * shift, th};
}

ShapeName one_dim_predicted_shape(const VasicekModel& model, double z, Curve curve) {
    const OneDimRegions r = one_dim_regions(model);
    const double lower = curve == Curve::forward ? r.forward_lower : r.yield_lower;
    const double upper = curve == Curve::forward ? r.forward_upper : r.yield_upper;
    if (model.sigma[0] == 0.0 && z == upper) return ShapeName::of(Kind::flat);
    if (z <= lower) return ShapeName::of(Kind::normal);
    if (z < upper) return ShapeName::of(Kind::humped);
    return ShapeName::of(Kind::inverse);
}

}  // namespace termshape

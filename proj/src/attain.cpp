/**
 * @file attain.cpp
 * @brief Shape construction through extremal interpolants and the key system
 */

#include "termshape/attain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace termshape {

namespace {

using Kind = ShapeName::Kind;

constexpr double kSquareTol = 1e-15;
// Smallest |w_j| / (kappa_j lambda_j |theta_j|) kept after normalization.
constexpr double kStateGuard = 1e-5;
constexpr int kMaxHalvings = 60;
constexpr int kMaxTilts = 40;

enum class Slot { two_l2, l1_plus_l2, l2, two_l1, l1, merged };

struct Route {
    ProofCase proof_case = ProofCase::i;
    std::string name;
    std::vector<double> decays;
    std::vector<Slot> slots;
    std::vector<double> zeros;  // imposed zeros, possibly starting at 0
    double orientation = 1.0;
    bool shrink = false;         // scale zeros down until the rho bound holds
    bool needs_negative_rho = false;
};

double& slot_ref(DecayCoefficients& a, Slot s) {
    switch (s) {
        case Slot::two_l2: return a.two_l2;
        case Slot::l1_plus_l2: return a.l1_plus_l2;
        case Slot::l2:
        case Slot::merged: return a.l2;
        case Slot::two_l1: return a.two_l1;
        case Slot::l1: return a.l1;
    }
    return a.l1;
}

std::string join(const std::vector<ShapeName>& shapes) {
    std::string out;
    for (const auto& s : shapes) {
        if (!out.empty()) out += ", ";
        out += s.str();
    }
    return out;
}

std::vector<double> default_zeros(std::size_t count, double spacing, bool boundary) {
    std::vector<double> r;
    for (std::size_t i = 0; i < count; ++i) {
        r.push_back(spacing * static_cast<double>(boundary ? i : i + 1));
    }
    return r;
}

void check_extrema(const ShapeTarget& target) {
    if (!target.extrema) return;
    const auto& e = *target.extrema;
    if (e.size() != target.shape.extrema_count()) {
        std::ostringstream msg;
        msg << "shape " << target.shape.str() << " has " << target.shape.extrema_count()
            << " extrema but " << e.size() << " locations were given";
        throw std::invalid_argument(msg.str());
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (!(e[i] > 0.0) || !std::isfinite(e[i]) || (i > 0 && !(e[i] > e[i - 1]))) {
            throw std::invalid_argument("extrema must be positive, finite and strictly increasing");
        }
    }
}

Route select_route(const ShapeTarget& target, const VasicekModel& base, const AttainOptions& opt) {
    const double l1 = base.lambda[0];
    const double l2 = base.lambda[1];
    const ScaleRegime reg = regime(base);
    const Kind kind = target.shape.kind;
    const std::size_t k = target.shape.extrema_count();
    const bool prescribed = target.extrema.has_value();
    auto zeros_or = [&](bool boundary) {
        if (!prescribed) return default_zeros(boundary ? k + 1 : k, opt.default_spacing, boundary);
        std::vector<double> r = *target.extrema;
        if (boundary) r.insert(r.begin(), 0.0);
        return r;
    };

    Route r;
    switch (kind) {
        case Kind::normal:
        case Kind::inverse:
            r = {ProofCase::i, "(f_l1)", {l1}, {Slot::l1}, {}, kind == Kind::normal ? 1.0 : -1.0};
            break;
        case Kind::humped:
        case Kind::dipped:
            r = {ProofCase::ii, "(f_l2, f_l1)", {l2, l1}, {Slot::l2, Slot::l1}, zeros_or(false),
                 kind == Kind::humped ? 1.0 : -1.0};
            break;
        case Kind::HD:
            r = {ProofCase::iii, "(f_2l2, f_l2, f_l1)", {2 * l2, l2, l1},
                 {Slot::two_l2, Slot::l2, Slot::l1}, zeros_or(false), 1.0};
            break;
        case Kind::DH:
            if (reg == ScaleRegime::separated) {
                r = {ProofCase::iv, "(f_l2, f_2l1, f_l1)", {l2, 2 * l1, l1},
                     {Slot::l2, Slot::two_l1, Slot::l1}, zeros_or(false), -1.0};
            } else if (reg == ScaleRegime::critical) {
                r = {ProofCase::iv, "(f_2l2, f_l1+l2, f_l2=f_2l1, f_l1), first zero at 0",
                     {2 * l2, l1 + l2, l2, l1},
                     {Slot::two_l2, Slot::l1_plus_l2, Slot::merged, Slot::l1}, zeros_or(true), 1.0};
                r.needs_negative_rho = true;
            } else {
                r = {ProofCase::vi, "(f_2l2, f_l1+l2, f_2l1, f_l2), first zero at 0",
                     {2 * l2, l1 + l2, 2 * l1, l2},
                     {Slot::two_l2, Slot::l1_plus_l2, Slot::two_l1, Slot::l2}, zeros_or(true), 1.0};
                r.shrink = true;
                r.needs_negative_rho = true;
            }
            break;
        case Kind::HDH:
            if (reg == ScaleRegime::separated) {
                r = {ProofCase::v, "(f_2l2, f_l2, f_2l1, f_l1)", {2 * l2, l2, 2 * l1, l1},
                     {Slot::two_l2, Slot::l2, Slot::two_l1, Slot::l1}, zeros_or(false), 1.0};
            } else if (reg == ScaleRegime::critical) {
                r = {ProofCase::v, "(f_2l2, f_l1+l2, f_l2=f_2l1, f_l1)", {2 * l2, l1 + l2, l2, l1},
                     {Slot::two_l2, Slot::l1_plus_l2, Slot::merged, Slot::l1}, zeros_or(false),
                     1.0};
                r.needs_negative_rho = true;
            } else {
                r = {ProofCase::vi, "(f_2l2, f_l1+l2, f_2l1, f_l2)", {2 * l2, l1 + l2, 2 * l1, l2},
                     {Slot::two_l2, Slot::l1_plus_l2, Slot::two_l1, Slot::l2}, zeros_or(false),
                     1.0};
                r.shrink = true;
                r.needs_negative_rho = true;
            }
            break;
        case Kind::HDHD:
        case Kind::DHD: {
            const bool boundary = kind == Kind::DHD;
            r = {ProofCase::vii,
                 boundary ? "(f_2l2, f_l1+l2, f_2l1, f_l2, f_l1), first zero at 0"
                          : "(f_2l2, f_l1+l2, f_2l1, f_l2, f_l1)",
                 {2 * l2, l1 + l2, 2 * l1, l2, l1},
                 {Slot::two_l2, Slot::l1_plus_l2, Slot::two_l1, Slot::l2, Slot::l1},
                 zeros_or(boundary),
                 1.0};
            r.shrink = true;
            r.needs_negative_rho = true;
            break;
        }
        default:
            throw InadmissibleShape("shape " + target.shape.str() + " cannot be constructed");
    }
    return r;
}

DPolynomial build_interpolant(const Route& route, Curve curve, double scale) {
    DPolynomial p;
    p.basis.kind = curve == Curve::forward ? BasisKind::F : BasisKind::G;
    p.basis.decays = route.decays;
    if (route.decays.size() == 1) {
        p.coefficients = {route.orientation};
    } else {
        p = interpolate_prescribed_zeros(p.basis, route.zeros);
        for (double& a : p.coefficients) a *= route.orientation;
    }
    double mx = 0.0;
    for (double a : p.coefficients) mx = std::max(mx, std::abs(a));
    for (double& a : p.coefficients) a *= scale / mx;
    return p;
}

DecayCoefficients to_slots(const Route& route, const DPolynomial& p, const VasicekModel& base) {
    DecayCoefficients a;
    bool merged = false;
    for (std::size_t i = 0; i < route.slots.size(); ++i) {
        slot_ref(a, route.slots[i]) = p.coefficients[i];
        merged = merged || route.slots[i] == Slot::merged;
    }
    if (merged && a.two_l2 > 0.0 && a.l1_plus_l2 != 0.0) {
        // Split the shared f_l2 = f_2l1 coefficient so that |rho| = 1/2.
        const double l1 = base.lambda[0];
        const double l2 = base.lambda[1];
        const double root =
            2.0 * std::sqrt(l1 * l2) * std::abs(a.l1_plus_l2) / ((l1 + l2) * std::sqrt(a.two_l2));
        a.two_l1 = root * root;
        a.l2 -= a.two_l1;
    }
    return a;
}

// Scales p up when a tiny linear slot would leave z_j = theta_j to rounding.
DPolynomial resolved_for_state(const Route& route, DPolynomial p, const VasicekModel& base) {
    const DecayCoefficients a = to_slots(route, p, base);
    const double w[2] = {a.l1, a.l2};
    double factor = 1.0;
    for (std::size_t j = 0; j < 2; ++j) {
        if (w[j] == 0.0) continue;
        const double floor = kStateGuard * base.kappa[j] * base.lambda[j] * std::abs(base.theta[j]);
        factor = std::max(factor, floor / std::abs(w[j]));
    }
    for (double& c : p.coefficients) c *= factor;
    return p;
}

AttainSolution assemble(const ShapeTarget& target, const VasicekModel& base, const Route& route,
                        const DPolynomial& p, const DecayCoefficients& a) {
    const KeySolution ks = solve_key_system(a, base);
    if (ks.status == KeyStatus::rho_out_of_range) {
        std::ostringstream msg;
        msg << "key system needs rho = " << ks.rho << " outside [-1, 1]";
        throw RhoOutOfRange(msg.str(), ks.rho);
    }
    if (!ks.values) {
        throw NumericalInfeasibility("key system has no solution: " + to_string(ks.status));
    }
    AttainSolution sol;
    sol.model = with_covariance(base, *ks.values);
    sol.state = State{{ks.values->z1, ks.values->z2}};
    sol.target = target;
    sol.proof_case = route.proof_case;
    sol.route = route.name;
    sol.dpoly = p;
    sol.coefficients = a;
    sol.zeros = route.zeros;
    return sol;
}

// Moves a rho = 0 solution to rho < 0 by a small cross term, halving the
// tilt until the classified shape is unchanged.
AttainSolution tilt_negative(AttainSolution sol, const VasicekModel& base, const Route& route,
                             const AttainOptions& opt) {
    const bool critical = regime(base) == ScaleRegime::critical;
    double eta = 1e-2 * sol.coefficients.max_abs();
    for (int it = 0; it < kMaxTilts; ++it, eta *= 0.5) {
        DecayCoefficients a = sol.coefficients;
        if (a.two_l2 <= 0.0) a.two_l2 += eta;
        if (a.two_l1 <= 0.0) {
            a.two_l1 += eta;
            // f_2l1 and f_l2 coincide; keep their combined coefficient.
            if (critical) a.l2 -= eta;
        }
        a.l1_plus_l2 -= eta;
        AttainSolution cand;
        try {
            cand = assemble(sol.target, base, route, sol.dpoly, a);
        } catch (const std::exception&) {
            continue;
        }
        if (cand.model.rho >= 0.0) continue;
        const ShapeReport rep = classify(cand.model, cand.state, sol.target.curve, opt.grid);
        if (rep.shape == sol.target.shape) {
            cand.extrema_exact = false;
            cand.route = route.name + ", tilted to rho < 0";
            return cand;
        }
    }
    throw NumericalInfeasibility("could not tilt the construction to a negative correlation");
}

}  // namespace

double DecayCoefficients::max_abs() const noexcept {
    return std::max({std::abs(two_l2), std::abs(l1_plus_l2), std::abs(l2), std::abs(two_l1),
                     std::abs(l1)});
}

DecayCoefficients key_system_image(const VasicekModel& model, const State& state) {
    const LCoefficients k = l_named_coefficients(model, state);
    return {k.u2, k.c, k.w2, k.u1, k.w1};
}

std::string to_string(KeyStatus s) {
    switch (s) {
        case KeyStatus::ok: return "ok";
        case KeyStatus::negative_variance: return "negative-variance";
        case KeyStatus::cross_term_without_variance: return "cross-term-without-variance";
        case KeyStatus::rho_out_of_range: return "rho-out-of-range";
    }
    return "unknown";
}

KeySolution solve_key_system(const DecayCoefficients& a, const VasicekModel& base) {
    if (base.d != 2) throw std::invalid_argument("the key system needs a two-factor model");
    for (double v : {a.two_l2, a.l1_plus_l2, a.l2, a.two_l1, a.l1}) {
        if (!std::isfinite(v)) throw std::invalid_argument("key system coefficients must be finite");
    }
    const double l1 = base.lambda[0];
    const double l2 = base.lambda[1];
    const double k1 = base.kappa[0];
    const double k2 = base.kappa[1];
    const double scale = a.max_abs();
    const double tol = kSquareTol * (scale > 0.0 ? scale : 1.0);

    KeySolution out;
    if (a.two_l1 < -tol || a.two_l2 < -tol) {
        out.status = KeyStatus::negative_variance;
        return out;
    }
    const double s1 = a.two_l1 > tol ? a.two_l1 : 0.0;
    const double s2 = a.two_l2 > tol ? a.two_l2 : 0.0;
    if (s1 == 0.0 || s2 == 0.0) {
        if (std::abs(a.l1_plus_l2) > tol) {
            out.status = KeyStatus::cross_term_without_variance;
            return out;
        }
        out.rho = 0.0;
    } else {
        out.rho = std::sqrt(l1 * l2) / (l1 + l2) * a.l1_plus_l2 / std::sqrt(s1 * s2);
        if (std::abs(out.rho) > 1.0) {
            out.status = KeyStatus::rho_out_of_range;
            return out;
        }
    }
    KeySystemValues v;
    v.rho = out.rho;
    v.sigma1 = std::sqrt(l1 * s1) / k1;
    v.sigma2 = std::sqrt(l2 * s2) / k2;
    const double cross = v.sigma1 * v.sigma2 * k1 * k2 / (l1 * l2);
    v.z1 = base.theta[0] - (a.l1 + s1 + v.rho * l1 * cross) / (k1 * l1);
    v.z2 = base.theta[1] - (a.l2 + s2 + v.rho * l2 * cross) / (k2 * l2);
    out.values = v;
    return out;
}

VasicekModel with_covariance(const VasicekModel& base, const KeySystemValues& v) {
    VasicekModel m = base;
    m.sigma = {v.sigma1, v.sigma2};
    m.rho = v.rho;
    return m;
}

std::string to_string(ProofCase c) {
    static const char* names[] = {"i", "ii", "iii", "iv", "v", "vi", "vii"};
    return names[static_cast<int>(c)];
}

RhoPreference parse_rho_preference(std::string_view text) {
    if (text == "any") return RhoPreference::any;
    if (text == "nonnegative") return RhoPreference::nonnegative;
    if (text == "negative") return RhoPreference::negative;
    throw std::invalid_argument("rho preference must be any, nonnegative or negative");
}

AttainSolution construct(const ShapeTarget& target, const VasicekModel& base_in,
                         const AttainOptions& opt) {
    // sigma and rho of the base are replaced, so they may be left unset.
    VasicekModel base = base_in;
    if (base.sigma.empty()) base.sigma.assign(base.lambda.size(), 0.0);
    base.rho = 0.0;
    base.validate();
    if (base.d != 2) throw std::invalid_argument("construction needs a two-factor base model");
    if (!(opt.coefficient_scale > 0.0) || !(opt.default_spacing > 0.0)) {
        throw std::invalid_argument("coefficient scale and spacing must be positive");
    }
    const Kind kind = target.shape.kind;
    if (kind == Kind::flat || kind == Kind::other) {
        throw InadmissibleShape("shape " + target.shape.str() + " is not a constructible target");
    }
    check_extrema(target);

    const ScaleRegime reg = regime(base);
    const bool ok_nonneg = is_admissible(target.shape, reg, RhoClass::nonnegative);
    const bool ok_neg = is_admissible(target.shape, reg, RhoClass::negative);
    const bool admissible = opt.rho == RhoPreference::nonnegative ? ok_nonneg
                            : opt.rho == RhoPreference::negative  ? ok_neg
                                                                  : ok_nonneg || ok_neg;
    if (!admissible) {
        const RhoClass cls =
            opt.rho == RhoPreference::nonnegative ? RhoClass::nonnegative : RhoClass::negative;
        throw InadmissibleShape("shape " + target.shape.str() + " is not attainable in the " +
                                to_string(reg) + " regime; admissible shapes: " +
                                join(admissible_shapes(reg, cls)));
    }

    const Route route = select_route(target, base, opt);
    if (route.needs_negative_rho && opt.rho == RhoPreference::nonnegative) {
        throw InadmissibleShape("shape " + target.shape.str() + " needs rho < 0 in the " +
                                to_string(reg) + " regime");
    }
    if (route.shrink && target.extrema) {
        throw InadmissibleShape("prescribed extrema are not supported for shape " +
                                target.shape.str() + " in the " + to_string(reg) + " regime");
    }

    Route used = route;
    DPolynomial p = build_interpolant(used, target.curve, opt.coefficient_scale);
    double rho_bound = 0.0;
    if (route.shrink) {
        const double l1 = base.lambda[0];
        const double l2 = base.lambda[1];
        bool found = false;
        for (int h = 0; h <= kMaxHalvings; ++h) {
            const double q = coef_inequality_value(p, l1, l2);
            if (q < 2.0) {
                rho_bound = std::sqrt(l1 * l2) / (l1 + l2) * q;
                found = true;
                break;
            }
            for (double& z : used.zeros) z *= 0.5;
            p = build_interpolant(used, target.curve, opt.coefficient_scale);
        }
        if (!found) {
            throw NumericalInfeasibility("zero spacing did not reach the correlation bound after " +
                                         std::to_string(kMaxHalvings) + " halvings");
        }
    }

    p = resolved_for_state(used, p, base);
    AttainSolution sol = assemble(target, base, used, p, to_slots(used, p, base));
    sol.rho_bound = rho_bound;
    if (opt.rho == RhoPreference::negative && !(sol.model.rho < 0.0)) {
        sol = tilt_negative(sol, base, used, opt);
    }
    return sol;
}

VerifyReport verify_solution(const AttainSolution& sol, const GridSpec& grid) {
    VerifyReport rep;
    const ShapeReport shape = classify(sol.model, sol.state, sol.target.curve, grid);
    rep.observed = shape.shape;
    rep.shape_ok = shape.shape == sol.target.shape;

    const bool strong = sol.proof_case != ProofCase::vi && sol.proof_case != ProofCase::vii;
    if (strong && sol.extrema_exact && sol.target.extrema) {
        rep.extrema_checked = true;
        const auto& want = *sol.target.extrema;
        if (shape.extrema.size() != want.size()) {
            rep.extrema_ok = false;
            rep.max_extremum_error = std::numeric_limits<double>::infinity();
        } else {
            for (std::size_t i = 0; i < want.size(); ++i) {
                const double err = std::abs(shape.extrema[i].location - want[i]) / want[i];
                rep.max_extremum_error = std::max(rep.max_extremum_error, err);
            }
            rep.extrema_ok = rep.max_extremum_error <= 1e-6;
        }
    }

    const DecayCoefficients img = key_system_image(sol.model, sol.state);
    const DecayCoefficients& a = sol.coefficients;
    const double diff = std::max({std::abs(img.two_l2 - a.two_l2),
                                  std::abs(img.l1_plus_l2 - a.l1_plus_l2),
                                  std::abs(img.l2 - a.l2), std::abs(img.two_l1 - a.two_l1),
                                  std::abs(img.l1 - a.l1)});
    const double scale = a.max_abs();
    rep.residual = scale > 0.0 ? diff / scale : diff;
    rep.residual_ok = rep.residual < 1e-10;
    rep.rho_ok = std::abs(sol.model.rho) <= 1.0 && sol.model.sigma[0] >= 0.0 &&
                 sol.model.sigma[1] >= 0.0;
    rep.passed = rep.shape_ok && rep.extrema_ok && rep.residual_ok && rep.rho_ok;
    return rep;
}

}  // namespace termshape

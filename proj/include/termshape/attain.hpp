/**
 * @file attain.hpp
 * @brief Construction of covariance parameters and states that produce a
 *        requested curve shape
 *
 * A target shape with k extrema is realised by an extremal D-polynomial on a
 * (k+1)-element subsystem of the exponential basis. Padding its coefficients
 * into the five decay slots (2 l2, l1+l2, l2, 2 l1, l1) and matching them
 * with the coefficients of l (or m) gives the key system
 *
 *   sigma_1^2 kappa_1^2 / l1                 = a_{2 l1}
 *   sigma_2^2 kappa_2^2 / l2                 = a_{2 l2}
 *   rho (l1 + l2) s                          = a_{l1+l2}
 *   kappa_j l_j (theta_j - z_j) - u_j - rho l_j s = a_{l_j}
 *
 * with s = sigma_1 sigma_2 kappa_1 kappa_2 / (l1 l2), which is solved for
 * (sigma_1, sigma_2, rho, z_1, z_2) with every other parameter fixed.
 */

#pragma once

#include "termshape/classify.hpp"
#include "termshape/descartes.hpp"
#include "termshape/vasicek.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace termshape {

/// Coefficients indexed by decay rate.
struct DecayCoefficients {
    double two_l2 = 0.0;
    double l1_plus_l2 = 0.0;
    double l2 = 0.0;
    double two_l1 = 0.0;
    double l1 = 0.0;

    double max_abs() const noexcept;
};

/// The five decay-slot coefficients of l implied by a full model and state.
DecayCoefficients key_system_image(const VasicekModel& model, const State& state);

struct KeySystemValues {
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double rho = 0.0;
    double z1 = 0.0;
    double z2 = 0.0;
};

enum class KeyStatus {
    ok,
    negative_variance,            // a_{2 l1} < 0 or a_{2 l2} < 0
    cross_term_without_variance,  // a_{l1+l2} != 0 while a square coefficient is 0
    rho_out_of_range,             // |rho| > 1
};

std::string to_string(KeyStatus s);

struct KeySolution {
    KeyStatus status = KeyStatus::ok;
    double rho = 0.0;  // computed correlation, also when out of range
    std::optional<KeySystemValues> values;
};

/// Solves the key system for a two-factor base model (its sigma, rho are
/// ignored). Square coefficients within 1e-12 of the coefficient scale
/// count as zero.
KeySolution solve_key_system(const DecayCoefficients& a, const VasicekModel& base);

/// Base model with the solved covariance parameters substituted.
VasicekModel with_covariance(const VasicekModel& base, const KeySystemValues& v);

enum class ProofCase { i, ii, iii, iv, v, vi, vii };

std::string to_string(ProofCase c);

/// Correlation constraint on the constructed solution.
enum class RhoPreference {
    any,          // rho = 0 whenever such a route exists
    nonnegative,  // rho >= 0
    negative,     // rho < 0, by tilting a rho = 0 route when needed
};

RhoPreference parse_rho_preference(std::string_view text);

struct ShapeTarget {
    ShapeName shape;
    Curve curve = Curve::forward;
    /// Strictly increasing, positive; one location per extremum.
    std::optional<std::vector<double>> extrema;
};

struct AttainOptions {
    RhoPreference rho = RhoPreference::any;
    /// Interpolation coefficients are scaled so that max |a| equals this.
    double coefficient_scale = 1.0;
    /// Spacing of default zero locations r = s (1, 2, ...).
    double default_spacing = 1.0;
    GridSpec grid{};
};

struct AttainSolution {
    VasicekModel model;  // base with sigma and rho filled in
    State state;
    ShapeTarget target;
    ProofCase proof_case = ProofCase::i;
    std::string route;    // subsystem that produced the D-polynomial
    DPolynomial dpoly;    // interpolant on that subsystem
    DecayCoefficients coefficients;
    std::vector<double> zeros;  // zeros of dpoly imposed by the construction
    /// True when the extrema sit exactly at `zeros` (no tilt was applied).
    bool extrema_exact = true;
    /// GM-AM bound on |rho| for the proximal negative-rho cases, else 0.
    double rho_bound = 0.0;
};

class InadmissibleShape : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class RhoOutOfRange : public std::runtime_error {
public:
    RhoOutOfRange(const std::string& what, double rho) : std::runtime_error(what), rho_(rho) {}
    double rho() const noexcept { return rho_; }

private:
    double rho_;
};

class NumericalInfeasibility : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Builds a solution for a two-factor base model. Throws InadmissibleShape
/// for shapes the base's regime (and the requested rho sign) cannot produce,
/// or when extrema are prescribed for a case that does not support them.
AttainSolution construct(const ShapeTarget& target, const VasicekModel& base,
                         const AttainOptions& options = {});

struct VerifyReport {
    ShapeName observed;
    bool shape_ok = false;
    bool extrema_checked = false;
    bool extrema_ok = true;
    double max_extremum_error = 0.0;  // relative
    double residual = 0.0;            // relative key-system residual
    bool residual_ok = false;
    bool rho_ok = false;
    bool passed = false;
};

/// Classifies the solution's curve, compares extrema with the prescribed
/// zeros (1e-6 relative) and re-substitutes into the key system (1e-10).
VerifyReport verify_solution(const AttainSolution& sol, const GridSpec& grid = {});

}  // namespace termshape

/**
 * @file descartes.hpp
 * @brief Exponential Descartes systems and D-polynomials
 *
 * Two families of basis functions are supported, both indexed by a decay
 * rate alpha >= 0:
 *
 *   F:  f_a(x) = exp(-a x)
 *   G:  g_a(x) = (1/x^2) * integral_0^x y exp(-a y) dy,   g_a(0) = 1/2
 *
 * An ExpBasis lists decays in strictly decreasing order, which is the
 * ordering under which both families are Descartes systems on [0, inf).
 * A D-polynomial is a real combination of the basis functions.
 */

#pragma once

#include "termshape/sign_sequence.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace termshape {

enum class BasisKind { F, G };

struct ExpBasis {
    BasisKind kind = BasisKind::F;
    std::vector<double> decays;  // strictly decreasing, >= 0

    std::size_t size() const noexcept { return decays.size(); }

    /// Throws std::invalid_argument unless 1 <= n <= 5 and decays are
    /// non-negative and strictly decreasing.
    void validate() const;

    /// Smallest positive decay, or 1 when every decay is zero.
    double reference_decay() const;
};

struct DPolynomial {
    ExpBasis basis;
    std::vector<double> coefficients;

    void validate() const;
    bool is_zero() const noexcept;
};

/// Sampling and refinement parameters for sign scans.
struct GridSpec {
    std::optional<double> x_max;  // scan horizon; default 20 / smallest decay
    int n_samples = 4096;
    double refine_tol = 1e-10;    // abscissa tolerance of zero refinement
    double zero_eps = 1e-12;      // relative to sum |a_i phi_i(x)| at the sample

    void validate() const;
};

/// Thrown when a scan finds more sign changes than the basis admits.
class NumericalInconsistency : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double eval_basis_fn(BasisKind kind, double alpha, double x);

/// Determinant of [phi_{columns[j]}(xs[i])]_{i,j}, by LU with partial
/// pivoting in extended precision. xs must be strictly increasing.
double det_system(const ExpBasis& basis, std::span<const std::size_t> columns,
                  std::span<const double> xs);

/// Same, using the first xs.size() basis functions.
double det_system(const ExpBasis& basis, std::span<const double> xs);

double eval_dpoly(const DPolynomial& p, double x);

/// Sign of p(0); zero when the sum vanishes to rounding.
Sign initial_sign(const DPolynomial& p);

/// Sign of p(x) as x -> infinity.
///
/// F basis: sign of the coefficient with the smallest decay, descending to
/// the next decay while that coefficient is zero. G basis: x^2 g_a(x) -> 1/a^2,
/// so the sign of sum a_i / a_i^2; a zero-decay term dominates when present,
/// and when the sum vanishes the slowest non-zero term decides through
/// -a_i (1 + a_i x) exp(-a_i x) / a_i^2.
Sign terminal_sign(const DPolynomial& p);

/// Result of scanning a D-polynomial for strong sign changes.
struct SignScan {
    SignSeq sseq = SignSeq::empty_pure();
    /// One entry per strong sign change, increasing. A change whose zero
    /// could not be bracketed beyond the window is reported as +infinity.
    std::vector<double> zeros;
    double window = 0.0;
    double max_residual = 0.0;  // largest |scaled value| at a refined zero
    int retries = 0;            // window doublings after inconsistency
};

/// Samples p on [0, x_max], refines every bracketed strong sign change by
/// bisection, uses the analytic initial sign at 0 and appends the analytic
/// terminal sign to close the tail. Throws NumericalInconsistency when more
/// than n-1 changes survive four window doublings.
SignScan sseq_of_dpoly(const DPolynomial& p, const GridSpec& grid = {});

/// The interpolating D-polynomial D(phi_1..phi_n; x, r_1..r_{n-1}) expanded
/// along its first row: a_i = (-1)^(1+i) D(phi without phi_i; r). Vanishes at
/// every r_i; coefficients alternate in sign starting with plus.
DPolynomial interpolate_prescribed_zeros(const ExpBasis& basis, std::span<const double> r);

/// prod_{i<j} (gamma_j - gamma_i).
double vandermonde(std::span<const double> gamma);

/// det [ g_{decays[i]}^{(j)}(0) ]_{i,j} with g_a^{(j)}(0) = (-a)^j / (j+2).
/// Rows follow the given order; decreasing decays give a positive value.
double wronskian_g_at_zero(std::span<const double> decays);

/// Limit of a_i(r) / a_j(r) as r -> 0 for the interpolation polynomial of
/// `basis`; i and j are 0-based positions in basis order. Equals
/// (-1)^(i+j) prod_{k != j} |alpha_j - alpha_k| / prod_{k != i} |alpha_i - alpha_k|
/// for both kinds.
double coef_ratio_limit(const ExpBasis& basis, std::size_t i, std::size_t j);

/// |a_{l1+l2}| / sqrt(a_{2 l1} a_{2 l2}) for a polynomial whose basis holds
/// the decays 2*l1, l1+l2 and 2*l2. Throws std::domain_error when either
/// square coefficient is not positive.
double coef_inequality_value(const DPolynomial& p, double lambda1, double lambda2);

/// Perturbation directions b_i: sign of a_i, and for a block of zero
/// coefficients +1 iff the block borders a positive coefficient.
std::vector<double> perturbation_directions(std::span<const double> coefficients);

/// p with a_i replaced by a_i + eps * b_i.
DPolynomial perturb_coefficients(const DPolynomial& p, double eps);

/// One probe per sign interval of p (between consecutive zeros, plus the
/// leading and trailing intervals), where |p| is largest on a local grid.
std::vector<double> probe_points(const DPolynomial& p, const SignScan& scan);

/// min_i |p(r_i)| / sum_j max_i |phi_j(r_i)| over the probe points.
double perturbation_delta(const DPolynomial& p, std::span<const double> probes);

}  // namespace termshape

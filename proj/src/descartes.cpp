/**
 * @file descartes.cpp
 * @brief Basis evaluation, determinants, interpolation and perturbation of
 *        exponential D-polynomials
 */

#include "termshape/descartes.hpp"

#include "basis_eval.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace termshape {

namespace {

using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

void require_increasing(std::span<const double> xs, const char* what) {
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) {
            throw std::invalid_argument(std::string(what) + ": points must be strictly increasing");
        }
    }
}

long double det_lu(const MatrixL& m) {
    if (m.rows() == 0) return 1.0L;
    return Eigen::PartialPivLU<MatrixL>(m).determinant();
}

}  // namespace

void ExpBasis::validate() const {
    if (decays.empty() || decays.size() > 5) {
        throw std::invalid_argument("basis must hold between 1 and 5 functions");
    }
    for (std::size_t i = 0; i < decays.size(); ++i) {
        if (!(decays[i] >= 0.0) || !std::isfinite(decays[i])) {
            throw std::invalid_argument("basis decays must be finite and non-negative");
        }
        if (i > 0 && !(decays[i] < decays[i - 1])) {
            throw std::invalid_argument("basis decays must be strictly decreasing");
        }
    }
}

double ExpBasis::reference_decay() const {
    double ref = 0.0;
    for (double a : decays) {
        if (a > 0.0 && (ref == 0.0 || a < ref)) ref = a;
    }
    return ref > 0.0 ? ref : 1.0;
}

void DPolynomial::validate() const {
    basis.validate();
    if (coefficients.size() != basis.size()) {
        throw std::invalid_argument("coefficient count must match basis size");
    }
    for (double a : coefficients) {
        if (!std::isfinite(a)) throw std::invalid_argument("coefficients must be finite");
    }
}

bool DPolynomial::is_zero() const noexcept {
    return std::all_of(coefficients.begin(), coefficients.end(), [](double a) { return a == 0.0; });
}

void GridSpec::validate() const {
    if (x_max && !(*x_max > 0.0)) throw std::invalid_argument("grid x_max must be positive");
    if (n_samples < 64) throw std::invalid_argument("grid needs at least 64 samples");
    if (!(refine_tol > 0.0) || !(zero_eps > 0.0)) {
        throw std::invalid_argument("grid tolerances must be positive");
    }
}

double eval_basis_fn(BasisKind kind, double alpha, double x) {
    return detail::basis_value(kind, alpha, x);
}

double det_system(const ExpBasis& basis, std::span<const std::size_t> columns,
                  std::span<const double> xs) {
    basis.validate();
    require_increasing(xs, "det_system");
    if (columns.size() != xs.size()) {
        throw std::invalid_argument("det_system: need one point per column");
    }
    const auto m = static_cast<Eigen::Index>(xs.size());
    MatrixL mat(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            const std::size_t c = columns[static_cast<std::size_t>(j)];
            if (c >= basis.size()) throw std::out_of_range("det_system: column index");
            mat(i, j) = detail::basis_value<long double>(basis.kind, basis.decays[c],
                                                         xs[static_cast<std::size_t>(i)]);
        }
    }
    return static_cast<double>(det_lu(mat));
}

double det_system(const ExpBasis& basis, std::span<const double> xs) {
    if (xs.size() > basis.size()) {
        throw std::invalid_argument("det_system: more points than basis functions");
    }
    std::vector<std::size_t> cols(xs.size());
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    return det_system(basis, cols, xs);
}

double eval_dpoly(const DPolynomial& p, double x) {
    double sum = 0.0;
    for (std::size_t i = 0; i < p.coefficients.size(); ++i) {
        if (p.coefficients[i] == 0.0) continue;
        sum += p.coefficients[i] * eval_basis_fn(p.basis.kind, p.basis.decays[i], x);
    }
    return sum;
}

Sign initial_sign(const DPolynomial& p) {
    double sum = 0.0;
    double mag = 0.0;
    for (double a : p.coefficients) {
        sum += a;
        mag += std::abs(a);
    }
    return sign_of(sum, 128.0 * std::numeric_limits<double>::epsilon() * mag);
}

Sign terminal_sign(const DPolynomial& p) {
    const auto& a = p.coefficients;
    const auto& alpha = p.basis.decays;
    // Decays are decreasing, so the slowest term sits at the back.
    if (p.basis.kind == BasisKind::F) {
        for (std::size_t i = a.size(); i-- > 0;) {
            if (a[i] != 0.0) return sign_of(a[i]);
        }
        return Sign::zero;
    }
    if (!alpha.empty() && alpha.back() == 0.0 && a.back() != 0.0) return sign_of(a.back());
    double limit = 0.0;
    double mag = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        const double inv = 1.0 / (alpha[i] * alpha[i]);
        limit += a[i] * inv;
        mag += std::abs(a[i]) * inv;
    }
    const Sign s = sign_of(limit, 128.0 * std::numeric_limits<double>::epsilon() * mag);
    if (s != Sign::zero) return s;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != 0.0) return flip(sign_of(a[i]));
    }
    return Sign::zero;
}

DPolynomial interpolate_prescribed_zeros(const ExpBasis& basis, std::span<const double> r) {
    basis.validate();
    const std::size_t n = basis.size();
    if (n < 2) throw std::invalid_argument("interpolation needs at least two basis functions");
    if (r.size() != n - 1) throw std::invalid_argument("interpolation needs n-1 prescribed zeros");
    require_increasing(r, "interpolate_prescribed_zeros");
    if (r.front() < 0.0) throw std::invalid_argument("prescribed zeros must be non-negative");

    DPolynomial p{basis, std::vector<double>(n)};
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < n; ++i) {
        cols.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) cols.push_back(j);
        }
        const double minor = det_system(basis, cols, r);
        p.coefficients[i] = (i % 2 == 0) ? minor : -minor;
    }
    return p;
}

double vandermonde(std::span<const double> gamma) {
    double prod = 1.0;
    for (std::size_t j = 0; j < gamma.size(); ++j) {
        for (std::size_t i = 0; i < j; ++i) prod *= gamma[j] - gamma[i];
    }
    return prod;
}

double wronskian_g_at_zero(std::span<const double> decays) {
    const auto k = static_cast<Eigen::Index>(decays.size());
    MatrixL mat(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        long double power = 1.0L;
        const long double neg = -static_cast<long double>(decays[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < k; ++j) {
            mat(i, j) = power / static_cast<long double>(j + 2);
            power *= neg;
        }
    }
    return static_cast<double>(det_lu(mat));
}

double coef_ratio_limit(const ExpBasis& basis, std::size_t i, std::size_t j) {
    basis.validate();
    const std::size_t n = basis.size();
    if (i >= n || j >= n) throw std::out_of_range("coef_ratio_limit: index");
    // As r -> 0 each minor tends to a multiple of the Vandermonde determinant
    // of the remaining decays, so |a_i| ~ 1 / prod_{k != i} |alpha_i - alpha_k|.
    auto gaps = [&](std::size_t pos) {
        double prod = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k != pos) prod *= std::abs(basis.decays[pos] - basis.decays[k]);
        }
        return prod;
    };
    const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
    return sign * gaps(j) / gaps(i);
}

double coef_inequality_value(const DPolynomial& p, double lambda1, double lambda2) {
    p.validate();
    auto find = [&](double decay) -> double {
        for (std::size_t i = 0; i < p.basis.size(); ++i) {
            if (std::abs(p.basis.decays[i] - decay) <= 1e-12 * std::max(1.0, decay)) {
                return p.coefficients[i];
            }
        }
        throw std::invalid_argument("coef_inequality_value: basis lacks decay " +
                                    std::to_string(decay));
    };
    const double a11 = find(2.0 * lambda1);
    const double a12 = find(lambda1 + lambda2);
    const double a22 = find(2.0 * lambda2);
    if (!(a11 > 0.0) || !(a22 > 0.0)) {
        throw std::domain_error("coef_inequality_value: square coefficients must be positive");
    }
    return std::abs(a12) / std::sqrt(a11 * a22);
}

std::vector<double> perturbation_directions(std::span<const double> a) {
    std::vector<double> b(a.size());
    std::size_t i = 0;
    while (i < a.size()) {
        if (a[i] != 0.0) {
            b[i] = a[i] > 0.0 ? 1.0 : -1.0;
            ++i;
            continue;
        }
        std::size_t end = i;
        while (end < a.size() && a[end] == 0.0) ++end;
        const bool borders_positive = (i > 0 && a[i - 1] > 0.0) || (end < a.size() && a[end] > 0.0);
        for (std::size_t k = i; k < end; ++k) b[k] = borders_positive ? 1.0 : -1.0;
        i = end;
    }
    return b;
}

DPolynomial perturb_coefficients(const DPolynomial& p, double eps) {
    if (!(eps >= 0.0)) throw std::invalid_argument("perturbation size must be non-negative");
    DPolynomial out = p;
    const auto b = perturbation_directions(p.coefficients);
    for (std::size_t i = 0; i < b.size(); ++i) out.coefficients[i] += eps * b[i];
    return out;
}

std::vector<double> probe_points(const DPolynomial& p, const SignScan& scan) {
    std::vector<double> edges{0.0};
    for (double z : scan.zeros) {
        if (!std::isfinite(z)) break;
        edges.push_back(z);
    }
    const double last = edges.back();
    edges.push_back(last + std::max(last, 4.0 / p.basis.reference_decay()));

    constexpr int kCandidates = 64;
    std::vector<double> probes;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double lo = edges[k];
        const double hi = edges[k + 1];
        double best_x = 0.5 * (lo + hi);
        double best = -1.0;
        // The leading interval includes x = 0 itself; interior ones avoid zeros.
        const int first = (k == 0) ? 0 : 1;
        for (int c = first; c < kCandidates; ++c) {
            const double x = lo + (hi - lo) * c / kCandidates;
            const double v = std::abs(eval_dpoly(p, x));
            if (v > best) {
                best = v;
                best_x = x;
            }
        }
        probes.push_back(best_x);
    }
    return probes;
}

double perturbation_delta(const DPolynomial& p, std::span<const double> probes) {
    if (probes.empty()) throw std::invalid_argument("perturbation_delta: no probe points");
    double min_value = std::numeric_limits<double>::infinity();
    for (double r : probes) min_value = std::min(min_value, std::abs(eval_dpoly(p, r)));
    double denom = 0.0;
    for (std::size_t j = 0; j < p.basis.size(); ++j) {
        double mx = 0.0;
        for (double r : probes) {
            mx = std::max(mx, std::abs(eval_basis_fn(p.basis.kind, p.basis.decays[j], r)));
        }
        denom += mx;
    }
    return min_value / denom;
}

}  // namespace termshape

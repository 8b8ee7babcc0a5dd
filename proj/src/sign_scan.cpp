/**
 * @file sign_scan.cpp
 * @brief Sign sequence and zero locations of a D-polynomial on [0, inf)
 */

#include "basis_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace termshape {

namespace detail {

namespace {

// Exact exponentials are recomputed after this many multiplicative steps.
constexpr int kResyncF = 32;
constexpr int kResyncG = 16;

}  // namespace

ScaledDPoly::ScaledDPoly(const DPolynomial& p) : kind_(p.basis.kind) {
    double slowest = std::numeric_limits<double>::infinity();
    double positive_min = 0.0;
    for (std::size_t i = 0; i < p.coefficients.size(); ++i) {
        if (p.coefficients[i] == 0.0) continue;
        a_[n_] = p.coefficients[i];
        alpha_[n_] = p.basis.decays[i];
        ++n_;
        slowest = std::min(slowest, p.basis.decays[i]);
        if (p.basis.decays[i] > 0.0 && (positive_min == 0.0 || p.basis.decays[i] < positive_min)) {
            positive_min = p.basis.decays[i];
        }
    }
    ref_ = positive_min > 0.0 ? positive_min : 1.0;
    if (kind_ == BasisKind::F && n_ > 0) {
        for (std::size_t i = 0; i < n_; ++i) alpha_[i] -= slowest;
    }
}

Sample ScaledDPoly::sample(double x) const {
    double v = 0.0;
    double s = 0.0;
    if (kind_ == BasisKind::F) {
        for (std::size_t i = 0; i < n_; ++i) {
            const double t = a_[i] * std::exp(-alpha_[i] * x);
            v += t;
            s += std::abs(t);
        }
        return {x, v, s};
    }
    const double w = 1.0 + (ref_ * x) * (ref_ * x);
    for (std::size_t i = 0; i < n_; ++i) {
        const double t = a_[i] * g_kernel(alpha_[i] * x);
        v += t;
        s += std::abs(t);
    }
    return {x, v * w, s * w};
}

double ScaledDPoly::value(double x) const { return sample(x).value; }

void ScaledDPoly::sample_uniform(double h, int n, std::vector<Sample>& out) const {
    out.resize(static_cast<std::size_t>(n));
    std::array<double, 5> q{};
    std::array<double, 5> e{};
    for (std::size_t i = 0; i < n_; ++i) q[i] = std::exp(-alpha_[i] * h);
    const int resync = kind_ == BasisKind::F ? kResyncF : kResyncG;
    std::array<double, 5> inv_alpha2{};
    for (std::size_t i = 0; i < n_; ++i) {
        if (alpha_[i] > 0.0) inv_alpha2[i] = 1.0 / (alpha_[i] * alpha_[i]);
    }

    for (int k0 = 0; k0 < n; k0 += resync) {
        const int k1 = std::min(n, k0 + resync);
        for (std::size_t i = 0; i < n_; ++i) e[i] = std::exp(-alpha_[i] * (k0 * h));
        if (kind_ == BasisKind::F) {
            for (int k = k0; k < k1; ++k) {
                double v = 0.0;
                double s = 0.0;
                for (std::size_t i = 0; i < n_; ++i) {
                    const double t = a_[i] * e[i];
                    v += t;
                    s += std::abs(t);
                    e[i] *= q[i];
                }
                out[static_cast<std::size_t>(k)] = {k * h, v, s};
            }
            continue;
        }
        for (int k = k0; k < k1; ++k) {
            const double x = k * h;
            const double w = 1.0 + (ref_ * x) * (ref_ * x);
            const double inv_x2 = k > 0 ? 1.0 / (x * x) : 0.0;
            double v = 0.0;
            double s = 0.0;
            for (std::size_t i = 0; i < n_; ++i) {
                const double y = alpha_[i] * x;
                const double g = y < kGTaylorSwitch
                                     ? g_kernel(y)
                                     : (1.0 - e[i] * (1.0 + y)) * inv_x2 * inv_alpha2[i];
                const double t = a_[i] * g;
                v += t;
                s += std::abs(t);
                e[i] *= q[i];
            }
            out[static_cast<std::size_t>(k)] = {x, v * w, s * w};
        }
    }
}

}  // namespace detail

namespace {

using detail::Sample;
using detail::ScaledDPoly;

// Pointwise rounding bound of a sum of at most five scaled terms.
constexpr double kRounding = 128.0 * std::numeric_limits<double>::epsilon();
constexpr int kMaxBisections = 200;
constexpr int kMaxTailDoublings = 60;
constexpr int kMaxWindowDoublings = 4;
constexpr int kLogSamples = 64;

struct Refined {
    double x;
    double residual;
};

// lo carries sign s_lo, hi carries the opposite sign.
Refined bisect(const ScaledDPoly& f, double lo, double hi, Sign s_lo, double tol) {
    for (int it = 0; it < kMaxBisections && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const Sign s = sign_of(f.value(mid));
        if (s == Sign::zero) {
            lo = hi = mid;
            break;
        }
        if (s == s_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double x = 0.5 * (lo + hi);
    const Sample smp = f.sample(x);
    const double residual = smp.scale > 0.0 ? std::abs(smp.value) / smp.scale : 0.0;
    return {x, residual};
}

class Scanner {
public:
    Scanner(const ScaledDPoly& f, const GridSpec& grid, Sign terminal)
        : f_(f), grid_(grid), terminal_(terminal) {}

    SignScan run(double x_max) {
        collect(x_max);
        SignScan out;
        out.window = x_max;
        std::vector<Sign> seq;
        Sign last = Sign::zero;
        double last_x = 0.0;
        auto visit = [&](const Sample& s) {
            const Sign sg = local_sign(s);
            if (sg == Sign::zero) return;
            if (sg != last) {
                if (last != Sign::zero) {
                    const Refined r = bisect(f_, last_x, s.x, last, grid_.refine_tol);
                    out.zeros.push_back(r.x);
                    out.max_residual = std::max(out.max_residual, r.residual);
                }
                seq.push_back(sg);
                last = sg;
            }
            last_x = s.x;
        };
        // Merge the uniform grid with the log-spaced points near 0.
        std::size_t u = 0;
        for (const Sample& g : log_) {
            while (u < uniform_.size() && uniform_[u].x < g.x) visit(uniform_[u++]);
            visit(g);
        }
        while (u < uniform_.size()) visit(uniform_[u++]);

        if (last == Sign::zero) {
            seq.push_back(terminal_);
        } else if (terminal_ != last) {
            seq.push_back(terminal_);
            out.zeros.push_back(locate_tail(last_x, x_max, last, out));
        }
        out.sseq = SignSeq(std::move(seq));
        return out;
    }

private:
    void collect(double x_max) {
        const int n = grid_.n_samples;
        const double h = x_max / (n - 1);
        f_.sample_uniform(h, n, uniform_);
        // Log-spaced points resolve structure finer than the uniform step near 0.
        const double lo = 1e-7 * x_max;
        const double hi = std::min(x_max, 64.0 * h);
        const double ratio = std::pow(hi / lo, 1.0 / (kLogSamples - 1));
        double x = lo;
        log_.resize(kLogSamples);
        for (int k = 0; k < kLogSamples; ++k, x *= ratio) log_[k] = f_.sample(x);
    }

    // Relative to the local term magnitude, so slowly decaying tails stay visible.
    Sign local_sign(const Sample& s) const {
        const double tol = std::max(grid_.zero_eps, kRounding) * s.scale;
        if (s.value > tol) return Sign::plus;
        if (s.value < -tol) return Sign::minus;
        return Sign::zero;
    }

    double locate_tail(double lo, double x_max, Sign s_lo, SignScan& out) const {
        double hi = x_max;
        for (int k = 0; k < kMaxTailDoublings; ++k) {
            hi *= 2.0;
            const Sign sg = local_sign(f_.sample(hi));
            if (sg == s_lo) {
                lo = hi;
            } else if (sg == terminal_) {
                const double tol = std::max(grid_.refine_tol, 1e-15 * hi);
                const Refined r = bisect(f_, lo, hi, s_lo, tol);
                out.max_residual = std::max(out.max_residual, r.residual);
                return r.x;
            }
        }
        return std::numeric_limits<double>::infinity();
    }

    const ScaledDPoly& f_;
    const GridSpec& grid_;
    Sign terminal_;
    // Reused across calls on the same thread.
    static thread_local std::vector<Sample> uniform_;
    static thread_local std::vector<Sample> log_;
};

thread_local std::vector<Sample> Scanner::uniform_;
thread_local std::vector<Sample> Scanner::log_;

}  // namespace

SignScan sseq_of_dpoly(const DPolynomial& p, const GridSpec& grid) {
    p.validate();
    grid.validate();
    if (p.is_zero()) {
        SignScan out;
        out.window = grid.x_max.value_or(20.0 / p.basis.reference_decay());
        return out;
    }
    const ScaledDPoly f(p);
    const std::size_t bound = f.nonzero_terms() - 1;
    Scanner scanner(f, grid, terminal_sign(p));
    double x_max = grid.x_max.value_or(20.0 / f.reference_decay());
    std::size_t found = 0;
    for (int attempt = 0; attempt <= kMaxWindowDoublings; ++attempt, x_max *= 2.0) {
        SignScan out = scanner.run(x_max);
        found = out.zeros.size();
        if (found <= bound) {
            out.retries = attempt;
            return out;
        }
    }
    throw NumericalInconsistency("sign scan found " + std::to_string(found) +
                                 " sign changes for a D-polynomial with " +
                                 std::to_string(bound + 1) + " terms");
}

}  // namespace termshape

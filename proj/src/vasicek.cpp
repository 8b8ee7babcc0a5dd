/**
 * @file vasicek.cpp
 * @brief Closed-form curves and coefficient maps of the Vasicek model
 */

#include "termshape/vasicek.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <initializer_list>
#include <limits>
#include <stdexcept>

namespace termshape {

namespace {

// (1/x) int_0^x exp(-a y) dy
double mean_exp(double a, double x) {
    const double y = a * x;
    if (y == 0.0) return 1.0;
    return -std::expm1(-y) / y;
}

void require_state(const VasicekModel& model, const State& state) {
    if (state.z.size() != static_cast<std::size_t>(model.d)) {
        throw std::invalid_argument("state must have one entry per factor");
    }
    for (double z : state.z) {
        if (!std::isfinite(z)) throw std::invalid_argument("state entries must be finite");
    }
}

}  // namespace

std::string to_string(Curve c) { return c == Curve::forward ? "forward" : "yield"; }

std::string to_string(ScaleRegime r) {
    switch (r) {
        case ScaleRegime::separated: return "separated";
        case ScaleRegime::proximal: return "proximal";
        case ScaleRegime::critical: return "critical";
    }
    return "unknown";
}

Curve parse_curve(std::string_view text) {
    if (text == "forward") return Curve::forward;
    if (text == "yield") return Curve::yield;
    throw std::invalid_argument("curve must be 'forward' or 'yield'");
}

void VasicekModel::validate() const {
    if (d != 1 && d != 2) throw std::invalid_argument("model dimension must be 1 or 2");
    const auto n = static_cast<std::size_t>(d);
    if (lambda.size() != n || theta.size() != n || kappa.size() != n || sigma.size() != n) {
        throw std::invalid_argument("lambda, theta, kappa and sigma need one entry per factor");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(lambda[i] > 0.0) || !std::isfinite(lambda[i])) {
            throw std::invalid_argument("lambda must be positive and finite");
        }
        if (!(kappa[i] > 0.0) || !std::isfinite(kappa[i])) {
            throw std::invalid_argument("kappa must be positive and finite");
        }
        if (!(sigma[i] >= 0.0) || !std::isfinite(sigma[i])) {
            throw std::invalid_argument("sigma must be non-negative and finite");
        }
        if (!std::isfinite(theta[i])) throw std::invalid_argument("theta must be finite");
    }
    if (d == 2 && !(lambda[0] < lambda[1])) {
        throw std::invalid_argument("lambda must be strictly increasing");
    }
    if (!std::isfinite(kappa0)) throw std::invalid_argument("kappa0 must be finite");
    if (d == 2 && !(std::abs(rho) <= 1.0)) throw std::invalid_argument("rho must lie in [-1, 1]");
}

std::vector<double> VasicekModel::covariance() const {
    if (d == 1) return {sigma[0] * sigma[0]};
    const double off = rho * sigma[0] * sigma[1];
    return {sigma[0] * sigma[0], off, off, sigma[1] * sigma[1]};
}

ScaleRegime regime_of(double lambda1, double lambda2) {
    const double gap = 2.0 * lambda1 - lambda2;
    if (std::abs(gap) <= kCriticalTol * lambda2) return ScaleRegime::critical;
    return gap < 0.0 ? ScaleRegime::separated : ScaleRegime::proximal;
}

ScaleRegime regime(const VasicekModel& model) {
    if (model.d != 2) throw std::invalid_argument("scale regimes are defined for two factors only");
    return regime_of(model.lambda[0], model.lambda[1]);
}

std::vector<double> B(const VasicekModel& model, double x) {
    std::vector<double> b(static_cast<std::size_t>(model.d));
    for (std::size_t i = 0; i < b.size(); ++i) {
        b[i] = model.kappa[i] / model.lambda[i] * std::expm1(-model.lambda[i] * x);
    }
    return b;
}

double forward_curve(const VasicekModel& model, const State& state, double x) {
    require_state(model, state);
    const auto b = B(model, x);
    const auto cov = model.covariance();
    const auto n = b.size();
    double f = model.kappa0;
    for (std::size_t i = 0; i < n; ++i) {
        f += state.z[i] * model.kappa[i] * std::exp(-model.lambda[i] * x);
        f -= model.lambda[i] * model.theta[i] * b[i];
        for (std::size_t j = 0; j < n; ++j) f -= 0.5 * b[i] * cov[i * n + j] * b[j];
    }
    return f;
}

double yield_curve(const VasicekModel& model, const State& state, double x) {
    require_state(model, state);
    const auto n = static_cast<std::size_t>(model.d);
    const auto cov = model.covariance();
    const auto& lam = model.lambda;
    const auto& kap = model.kappa;
    double y = model.kappa0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ei = mean_exp(lam[i], x);
        y += state.z[i] * kap[i] * ei;
        y -= model.theta[i] * kap[i] * (ei - 1.0);
        for (std::size_t j = 0; j < n; ++j) {
            // mean of (e_i - 1)(e_j - 1)
            const double prod = mean_exp(lam[i] + lam[j], x) - ei - mean_exp(lam[j], x) + 1.0;
            y -= 0.5 * cov[i * n + j] * kap[i] * kap[j] / (lam[i] * lam[j]) * prod;
        }
    }
    return y;
}

namespace {

// Sum of terms, set to zero when it is rounding residue of cancellation.
double cancelled_sum(std::initializer_list<double> terms) {
    double sum = 0.0;
    double mag = 0.0;
    for (double t : terms) {
        sum += t;
        mag += std::abs(t);
    }
    return std::abs(sum) <= 16.0 * std::numeric_limits<double>::epsilon() * mag ? 0.0 : sum;
}

}  // namespace

LCoefficients l_named_coefficients(const VasicekModel& model, const State& state) {
    model.validate();
    require_state(model, state);
    const auto& lam = model.lambda;
    const auto& kap = model.kappa;
    const auto& sig = model.sigma;
    LCoefficients out;
    if (model.d == 1) {
        out.u1 = sig[0] * sig[0] * kap[0] * kap[0] / lam[0];
        out.w1 = cancelled_sum({kap[0] * lam[0] * model.theta[0], -kap[0] * lam[0] * state.z[0], -out.u1});
        return out;
    }
    const double cross = model.rho * sig[0] * sig[1] * kap[0] * kap[1] / (lam[0] * lam[1]);
    out.u1 = sig[0] * sig[0] * kap[0] * kap[0] / lam[0];
    out.u2 = sig[1] * sig[1] * kap[1] * kap[1] / lam[1];
    out.c = (lam[0] + lam[1]) * cross;
    out.w1 = cancelled_sum({kap[0] * lam[0] * model.theta[0], -kap[0] * lam[0] * state.z[0],
                            -out.u1, -lam[0] * cross});
    out.w2 = cancelled_sum({kap[1] * lam[1] * model.theta[1], -kap[1] * lam[1] * state.z[1],
                            -out.u2, -lam[1] * cross});
    return out;
}

namespace {

DPolynomial derivative_poly(const VasicekModel& model, const State& state, BasisKind kind) {
    const LCoefficients k = l_named_coefficients(model, state);
    const double l1 = model.lambda[0];
    DPolynomial p;
    p.basis.kind = kind;
    if (model.d == 1) {
        p.basis.decays = {2.0 * l1, l1};
        p.coefficients = {k.u1, k.w1};
        return p;
    }
    const double l2 = model.lambda[1];
    switch (regime(model)) {
        case ScaleRegime::proximal:
            p.basis.decays = {2.0 * l2, l1 + l2, 2.0 * l1, l2, l1};
            p.coefficients = {k.u2, k.c, k.u1, k.w2, k.w1};
            break;
        case ScaleRegime::separated:
            p.basis.decays = {2.0 * l2, l1 + l2, l2, 2.0 * l1, l1};
            p.coefficients = {k.u2, k.c, k.w2, k.u1, k.w1};
            break;
        case ScaleRegime::critical:
            p.basis.decays = {2.0 * l2, l1 + l2, l2, l1};
            p.coefficients = {k.u2, k.c, cancelled_sum({k.w2, k.u1}), k.w1};
            break;
    }
    return p;
}

}  // namespace

DPolynomial l_coefficients(const VasicekModel& model, const State& state) {
    return derivative_poly(model, state, BasisKind::F);
}

DPolynomial m_coefficients(const VasicekModel& model, const State& state) {
    return derivative_poly(model, state, BasisKind::G);
}

double l_eval_direct(const VasicekModel& model, const State& state, double x) {
    require_state(model, state);
    const auto n = static_cast<std::size_t>(model.d);
    const auto b = B(model, x);
    const auto cov = model.covariance();
    std::vector<double> db(n);
    for (std::size_t i = 0; i < n; ++i) db[i] = -model.kappa[i] * std::exp(-model.lambda[i] * x);
    double l = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        l -= model.lambda[i] * model.theta[i] * db[i];
        l += state.z[i] * model.lambda[i] * db[i];
        for (std::size_t j = 0; j < n; ++j) l -= b[i] * cov[i * n + j] * db[j];
    }
    return l;
}

double m_eval(const VasicekModel& model, const State& state, double x) {
    return eval_dpoly(m_coefficients(model, state), x);
}

OuTransition ou_transition(const VasicekModel& model, const State& state, double dt) {
    model.validate();
    require_state(model, state);
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    const int d = model.d;
    const auto cov = model.covariance();
    OuTransition t;
    t.d = d;
    t.mean.resize(static_cast<std::size_t>(d));
    Eigen::MatrixXd c(d, d);
    for (int i = 0; i < d; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        t.mean[ui] = model.theta[ui] + (state.z[ui] - model.theta[ui]) *
                                           std::exp(-model.lambda[ui] * dt);
        for (int j = 0; j < d; ++j) {
            const auto uj = static_cast<std::size_t>(j);
            const double rate = model.lambda[ui] + model.lambda[uj];
            c(i, j) = cov[ui * static_cast<std::size_t>(d) + uj] * -std::expm1(-rate * dt) / rate;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
    Eigen::VectorXd ev = eig.eigenvalues();
    for (int i = 0; i < d; ++i) {
        if (ev(i) < -1e-14) {
            throw std::runtime_error("transition covariance is not positive semidefinite");
        }
        ev(i) = std::sqrt(std::max(ev(i), 0.0));
    }
    const Eigen::MatrixXd root = eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().transpose();
    t.root.resize(static_cast<std::size_t>(d * d));
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) t.root[static_cast<std::size_t>(i * d + j)] = root(i, j);
    }
    return t;
}

State OuTransition::apply(std::span<const double> noise) const {
    if (noise.size() < static_cast<std::size_t>(d)) {
        throw std::invalid_argument("need one normal draw per factor");
    }
    State out{mean};
    const auto n = static_cast<std::size_t>(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) out.z[i] += root[i * n + j] * noise[j];
    }
    return out;
}

State ou_exact_step(const VasicekModel& model, const State& state, double dt,
                    std::span<const double> noise) {
    return ou_transition(model, state, dt).apply(noise);
}

}  // namespace termshape

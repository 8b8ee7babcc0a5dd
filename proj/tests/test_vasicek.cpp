#include "oracles.hpp"

#include "termshape/vasicek.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace termshape;

namespace {

// A'(x) = (1/2) B' Sigma B + (lambda theta)' B - kappa0, integrated numerically.
double log_bond_price(const VasicekModel& m, const State& s, double x) {
    const auto cov = m.covariance();
    const std::size_t d = static_cast<std::size_t>(m.d);
    auto b_of = [&](double t) {
        std::vector<double> b(d);
        for (std::size_t i = 0; i < d; ++i) b[i] = m.kappa[i] / m.lambda[i] * (std::exp(-m.lambda[i] * t) - 1.0);
        return b;
    };
    auto a_prime = [&](double t) {
        const auto b = b_of(t);
        double q = 0.0;
        double lin = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            lin += m.lambda[i] * m.theta[i] * b[i];
            for (std::size_t j = 0; j < d; ++j) q += b[i] * cov[i * d + j] * b[j];
        }
        return 0.5 * q + lin - m.kappa0;
    };
    const double a = x > 0.0 ? oracle::integrate(a_prime, 0.0, x) : 0.0;
    const auto b = b_of(x);
    double bz = 0.0;
    for (std::size_t i = 0; i < d; ++i) bz += b[i] * s.z[i];
    return a + bz;
}

double coefficient_scale(const DPolynomial& p) {
    double s = 0.0;
    for (double a : p.coefficients) s += std::abs(a);
    return s;
}

VasicekModel one_dim(double lambda, double kappa, double sigma, double theta) {
    VasicekModel m;
    m.d = 1;
    m.lambda = {lambda};
    m.kappa = {kappa};
    m.sigma = {sigma};
    m.theta = {theta};
    return m;
}

ScaleRegime any_regime(std::mt19937_64& rng) {
    const int r = static_cast<int>(rng() % 3);
    return r == 0 ? ScaleRegime::separated : r == 1 ? ScaleRegime::proximal : ScaleRegime::critical;
}

}  // namespace

TEST_CASE("regimes") {
    CHECK(regime_of(1.0, 3.0) == ScaleRegime::separated);
    CHECK(regime_of(1.0, 1.5) == ScaleRegime::proximal);
    CHECK(regime_of(1.0, 2.0) == ScaleRegime::critical);
    CHECK(regime_of(0.1, 0.2) == ScaleRegime::critical);
    CHECK(regime_of(1.0, 2.0 + 1e-9) == ScaleRegime::separated);
}

TEST_CASE("B") {
    VasicekModel m;
    m.lambda = {0.5, 2.0};
    m.kappa = {1.2, 0.7};
    m.theta = {0.0, 0.0};
    m.sigma = {0.1, 0.1};
    const auto b0 = B(m, 0.0);
    CHECK(b0[0] == 0.0);
    CHECK(b0[1] == 0.0);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(B(m, 100.0 / m.lambda[i])[i] == doctest::Approx(-m.kappa[i] / m.lambda[i]).epsilon(1e-6));
        const double h = 1e-6;
        CHECK((B(m, h)[i] - B(m, 0.0)[i]) / h == doctest::Approx(-m.kappa[i]).epsilon(1e-5));
    }
}

TEST_CASE("forward curve against the bond price") {
    std::mt19937_64 rng(21);
    for (int it = 0; it < 20; ++it) {
        const VasicekModel m = oracle::random_model(rng, any_regime(rng));
        const State s = oracle::random_state(rng);
        CHECK(forward_curve(m, s, 0.0) ==
              doctest::Approx(m.kappa0 + m.kappa[0] * s.z[0] + m.kappa[1] * s.z[1]).epsilon(1e-14));
        for (double x : {0.3, 2.0, 9.0}) {
            const double h = 1e-4;
            const double fd = -(log_bond_price(m, s, x + h) - log_bond_price(m, s, x - h)) / (2 * h);
            CHECK(std::abs(forward_curve(m, s, x) - fd) < 1e-6);
            CHECK(std::abs(yield_curve(m, s, x) + log_bond_price(m, s, x) / x) < 1e-8);
        }
    }
}

TEST_CASE("flat curve") {
    VasicekModel m;
    m.lambda = {0.4, 1.9};
    m.kappa = {1.0, 0.5};
    m.theta = {0.03, -0.01};
    m.sigma = {0.0, 0.0};
    m.kappa0 = 0.01;
    const State s{m.theta};
    const double f0 = forward_curve(m, s, 0.0);
    for (double x : {0.0, 0.5, 3.0, 40.0}) {
        CHECK(forward_curve(m, s, x) == doctest::Approx(f0).epsilon(1e-14));
        CHECK(yield_curve(m, s, x) == doctest::Approx(f0).epsilon(1e-14));
    }
    const auto c = l_named_coefficients(m, s);
    CHECK(c.u1 == 0.0);
    CHECK(c.u2 == 0.0);
    CHECK(c.c == 0.0);
    CHECK(c.w1 == 0.0);
    CHECK(c.w2 == 0.0);
}

TEST_CASE("yield curve") {
    std::mt19937_64 rng(22);
    for (int it = 0; it < 50; ++it) {
        const VasicekModel m = oracle::random_model(rng, any_regime(rng));
        const State s = oracle::random_state(rng);
        CHECK(yield_curve(m, s, 0.0) == doctest::Approx(forward_curve(m, s, 0.0)));
        const double x = oracle::uniform(rng, 0.1, 20.0);
        // Trapezoid rule on a fine grid.
        const int n = 20000;
        double sum = 0.5 * (forward_curve(m, s, 0.0) + forward_curve(m, s, x));
        for (int k = 1; k < n; ++k) sum += forward_curve(m, s, x * k / n);
        CHECK(std::abs(yield_curve(m, s, x) - sum / n) < 1e-8);
        // d/dx [x Y(x)] = f(x).
        const double h = 1e-5;
        const double fd = ((x + h) * yield_curve(m, s, x + h) - (x - h) * yield_curve(m, s, x - h)) / (2 * h);
        CHECK(std::abs(fd - forward_curve(m, s, x)) < 1e-6);
    }
}

TEST_CASE("l coefficients") {
    std::mt19937_64 rng(23);
    VasicekModel m = oracle::random_model(rng, ScaleRegime::separated);
    State s = oracle::random_state(rng);
    m.rho = 0.0;
    CHECK(l_named_coefficients(m, s).c == 0.0);
    m.sigma = {0.0, 0.0};
    const auto c = l_named_coefficients(m, s);
    CHECK(c.u1 == 0.0);
    CHECK(c.u2 == 0.0);
    for (std::size_t j = 0; j < 2; ++j) {
        const double w = j == 0 ? c.w1 : c.w2;
        CHECK(w == doctest::Approx(m.kappa[j] * m.lambda[j] * (m.theta[j] - s.z[j])));
    }
    const VasicekModel m1 = one_dim(1.0, 1.0, 1.0, 0.0);
    const DPolynomial p = l_coefficients(m1, State{{0.0}});
    CHECK(p.basis.decays == std::vector<double>{2.0, 1.0});
    CHECK(p.coefficients[0] == doctest::Approx(1.0));
    CHECK(p.coefficients[1] == doctest::Approx(-1.0));
}

TEST_CASE("coefficient ordering per regime") {
    VasicekModel m;
    m.lambda = {1.0, 1.5};
    m.kappa = {1.0, 1.0};
    m.theta = {0.0, 0.0};
    m.sigma = {0.3, 0.2};
    m.rho = -0.4;
    const State s{{0.01, 0.02}};
    const auto c = l_named_coefficients(m, s);
    const DPolynomial prox = l_coefficients(m, s);
    CHECK(prox.basis.decays == std::vector<double>{3.0, 2.5, 2.0, 1.5, 1.0});
    CHECK(prox.coefficients == std::vector<double>{c.u2, c.c, c.u1, c.w2, c.w1});
    m.lambda = {1.0, 3.0};
    const auto cs = l_named_coefficients(m, s);
    const DPolynomial sep = l_coefficients(m, s);
    CHECK(sep.basis.decays == std::vector<double>{6.0, 4.0, 3.0, 2.0, 1.0});
    CHECK(sep.coefficients == std::vector<double>{cs.u2, cs.c, cs.w2, cs.u1, cs.w1});
    m.lambda = {1.0, 2.0};
    const auto cc = l_named_coefficients(m, s);
    const DPolynomial crit = l_coefficients(m, s);
    CHECK(crit.basis.decays == std::vector<double>{4.0, 3.0, 2.0, 1.0});
    CHECK(crit.coefficients[2] == doctest::Approx(cc.w2 + cc.u1));
    const DPolynomial mp = m_coefficients(m, s);
    CHECK(mp.basis.kind == BasisKind::G);
    CHECK(mp.coefficients == crit.coefficients);
}

TEST_CASE("l evaluation paths agree") {
    std::mt19937_64 rng(24);
    for (int it = 0; it < 10000; ++it) {
        const VasicekModel m = oracle::random_model(rng, any_regime(rng));
        const State s = oracle::random_state(rng);
        const DPolynomial p = l_coefficients(m, s);
        const double x = oracle::uniform(rng, 0.0, 30.0);
        const double scale = coefficient_scale(p);
        CHECK(std::abs(eval_dpoly(p, x) - l_eval_direct(m, s, x)) <= 1e-10 * scale);
    }
}

TEST_CASE("l is the derivative of f and l(0) is explicit") {
    std::mt19937_64 rng(25);
    for (int it = 0; it < 200; ++it) {
        const VasicekModel m = oracle::random_model(rng, any_regime(rng));
        const State s = oracle::random_state(rng);
        const double x = oracle::uniform(rng, 0.01, 15.0);
        const double h = 1e-5;
        const double fd = (forward_curve(m, s, x + h) - forward_curve(m, s, x - h)) / (2 * h);
        CHECK(std::abs(fd - l_eval_direct(m, s, x)) < 1e-6);
        double l0 = 0.0;
        for (std::size_t i = 0; i < 2; ++i) {
            l0 += m.lambda[i] * m.theta[i] * m.kappa[i] - s.z[i] * m.lambda[i] * m.kappa[i];
        }
        CHECK(l_eval_direct(m, s, 0.0) == doctest::Approx(l0).scale(1e-12));
    }
}

TEST_CASE("m against quadrature") {
    std::mt19937_64 rng(26);
    for (int it = 0; it < 200; ++it) {
        const VasicekModel m = oracle::random_model(rng, any_regime(rng));
        const State s = oracle::random_state(rng);
        const double x = oracle::uniform(rng, 0.01, 25.0);
        const double q =
            oracle::integrate([&](double y) { return y * l_eval_direct(m, s, y); }, 0.0, x) / (x * x);
        CHECK(std::abs(m_eval(m, s, x) - q) < 1e-8);
        CHECK(std::abs(m_eval(m, s, 0.0) - 0.5 * l_eval_direct(m, s, 0.0)) <=
              1e-10 * std::max(1.0, std::abs(l_eval_direct(m, s, 0.0))));
    }
}

TEST_CASE("one-factor yield terminal sign") {
    std::mt19937_64 rng(27);
    for (int it = 0; it < 300; ++it) {
        const VasicekModel m = one_dim(oracle::uniform(rng, 0.1, 2.0), oracle::uniform(rng, 0.2, 2.0),
                                       oracle::uniform(rng, 0.0, 0.6), oracle::uniform(rng, -0.05, 0.1));
        const double z = oracle::uniform(rng, -0.5, 0.2);
        const double thr = m.theta[0] - 3.0 * m.sigma[0] * m.sigma[0] * m.kappa[0] /
                                            (4.0 * m.lambda[0] * m.lambda[0]);
        if (std::abs(thr - z) < 1e-9) continue;
        CHECK(terminal_sign(m_coefficients(m, State{{z}})) == sign_of(thr - z));
    }
}

TEST_CASE("exact OU step") {
    VasicekModel m;
    m.lambda = {0.8, 2.5};
    m.kappa = {1.0, 1.0};
    m.theta = {0.03, -0.01};
    m.sigma = {0.0, 0.0};
    const State z0{{0.1, 0.05}};
    const double dt = 0.7;
    const std::vector<double> noise{1.3, -0.4};
    const State det = ou_exact_step(m, z0, dt, noise);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(det.z[i] == doctest::Approx(m.theta[i] + (z0.z[i] - m.theta[i]) * std::exp(-m.lambda[i] * dt)));
    }

    m.sigma = {0.2, 0.3};
    m.rho = -0.6;
    std::mt19937_64 rng(28);
    std::normal_distribution<double> normal;
    const int n = 100000;

    // Long horizon: stationary moments.
    const double t_long = 50.0 / m.lambda[0];
    const OuTransition tr = ou_transition(m, z0, t_long);
    double s1 = 0.0, s2 = 0.0, s11 = 0.0, s22 = 0.0, s12 = 0.0;
    for (int k = 0; k < n; ++k) {
        const std::vector<double> e{normal(rng), normal(rng)};
        const State z = tr.apply(e);
        s1 += z.z[0];
        s2 += z.z[1];
        s11 += z.z[0] * z.z[0];
        s22 += z.z[1] * z.z[1];
        s12 += z.z[0] * z.z[1];
    }
    const double m1 = s1 / n, m2 = s2 / n;
    const double v1 = s11 / n - m1 * m1, v2 = s22 / n - m2 * m2, c12 = s12 / n - m1 * m2;
    CHECK(v1 == doctest::Approx(0.04 / (2 * 0.8)).epsilon(0.01));
    CHECK(v2 == doctest::Approx(0.09 / (2 * 2.5)).epsilon(0.01));
    const double c_ref = m.rho * 0.2 * 0.3 / (0.8 + 2.5);
    CHECK(std::abs(c12 - c_ref) < 4.0 * std::sqrt(v1 * v2 / n) * 1.5);

    // Short horizon: conditional mean within three standard errors.
    const double t = 0.3;
    double a1 = 0.0, a2 = 0.0;
    for (int k = 0; k < n; ++k) {
        const std::vector<double> e{normal(rng), normal(rng)};
        const State z = ou_exact_step(m, z0, t, e);
        a1 += z.z[0];
        a2 += z.z[1];
    }
    for (std::size_t i = 0; i < 2; ++i) {
        const double mean = m.theta[i] + (z0.z[i] - m.theta[i]) * std::exp(-m.lambda[i] * t);
        const double var = m.sigma[i] * m.sigma[i] / (2 * m.lambda[i]) * (1 - std::exp(-2 * m.lambda[i] * t));
        CHECK(std::abs((i == 0 ? a1 : a2) / n - mean) < 3.0 * std::sqrt(var / n));
    }
}

TEST_CASE("model validation") {
    VasicekModel m;
    m.lambda = {2.0, 1.0};
    m.kappa = {1.0, 1.0};
    m.theta = {0.0, 0.0};
    m.sigma = {0.1, 0.1};
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
    m.lambda = {1.0, 2.0};
    m.rho = 1.5;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
    m.rho = 0.0;
    m.sigma = {-0.1, 0.1};
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
    m.sigma = {0.1, 0.1};
    CHECK_NOTHROW(m.validate());
    CHECK_THROWS_AS(forward_curve(m, State{{0.0}}, 1.0), std::invalid_argument);
}

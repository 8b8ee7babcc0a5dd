/**
 * @file test_verify.cpp
 * @brief Sweeps, Monte Carlo, maps and perturbation checks
 */

#include "oracles.hpp"

#include "termshape/serialize.hpp"
#include "termshape/verify.hpp"

#include <doctest.h>

#include <cmath>

using namespace termshape;

namespace {

VasicekModel separated_base() {
    VasicekModel m;
    m.lambda = {0.5, 1.5};
    m.kappa = {1.0, 1.0};
    m.theta = {0.03, 0.01};
    m.sigma = {0.0, 0.0};
    return m;
}

}  // namespace

TEST_CASE("sampled instances honour the filters") {
    for (RegimeFilter rf : {RegimeFilter::separated, RegimeFilter::proximal, RegimeFilter::critical}) {
        for (RhoFilter pf : {RhoFilter::nonnegative, RhoFilter::negative}) {
            SweepConfig cfg;
            cfg.regime = rf;
            cfg.rho = pf;
            for (std::uint64_t i = 0; i < 500; ++i) {
                const Instance inst = sample_instance(cfg, i);
                CHECK_NOTHROW(inst.model.validate());
                CHECK(to_string(regime(inst.model)) == to_string(rf));
                CHECK((inst.model.rho < 0.0) == (pf == RhoFilter::negative));
            }
        }
    }
}

TEST_CASE("sampling is a function of seed and index") {
    SweepConfig cfg;
    cfg.seed = 99;
    const Instance a = sample_instance(cfg, 1234);
    const Instance b = sample_instance(cfg, 1234);
    CHECK(to_json(a) == to_json(b));
    CHECK(to_json(sample_instance(cfg, 1235)) != to_json(a));
}

TEST_CASE("the boundary stratum sits near 2 lambda1 = lambda2") {
    SweepConfig cfg;
    cfg.boundary_fraction = 1.0;
    for (std::uint64_t i = 0; i < 300; ++i) {
        const Instance inst = sample_instance(cfg, i);
        const double q = 2.0 * inst.model.lambda[0] / inst.model.lambda[1];
        CHECK(q >= 0.95 - 1e-12);
        CHECK(q <= 1.05 + 1e-12);
    }
}

TEST_CASE("small sweeps pass and do not depend on the thread count") {
    for (RegimeFilter rf : {RegimeFilter::separated, RegimeFilter::proximal, RegimeFilter::critical,
                            RegimeFilter::any}) {
        SweepConfig cfg;
        cfg.regime = rf;
        cfg.samples = 1500;
        cfg.seed = 5;
        cfg.threads = 1;
        const SweepReport one = sweep_theorem(cfg);
        cfg.threads = 3;
        const SweepReport three = sweep_theorem(cfg);
        INFO(to_string(rf));
        CHECK(one.passed());
        CHECK(one.samples == 1500);
        CHECK(to_json(one) == to_json(three));
        std::size_t total = 0;
        for (const auto& [k, v] : one.forward_histogram) total += v;
        CHECK(total == 1500);
    }
}

TEST_CASE("sweep configuration is validated") {
    SweepConfig cfg;
    cfg.samples = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = SweepConfig{};
    cfg.boundary_fraction = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK_THROWS_AS(parse_regime_filter("sideways"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rho_filter("positive"), std::invalid_argument);
}

TEST_CASE("state-space map") {
    VasicekModel m = separated_base();
    m.sigma = {0.2, 0.3};
    m.rho = -0.4;
    ZGrid g;
    g.n1 = 7;
    g.n2 = 5;
    const auto rows = state_space_map(m, g, 2);
    REQUIRE(rows.size() == 35);
    CHECK(rows.front().z1 == doctest::Approx(g.z1.lo));
    CHECK(rows.front().z2 == doctest::Approx(g.z2.lo));
    CHECK(rows.back().z1 == doctest::Approx(g.z1.hi));
    CHECK(rows.back().z2 == doctest::Approx(g.z2.hi));
    // z1 major.
    CHECK(rows[1].z1 == rows[0].z1);
    CHECK(rows[5].z1 > rows[4].z1);
    for (const MapRow& r : rows) {
        const State s{{r.z1, r.z2}};
        CHECK(r.forward == classify_forward(m, s).shape.str());
        CHECK(r.yield == classify_yield(m, s).shape.str());
    }

    ZGrid single;
    single.z1 = {0.01, 0.01};
    single.n1 = 1;
    single.z2 = {-0.02, -0.02};
    single.n2 = 1;
    const auto one = state_space_map(m, single);
    REQUIRE(one.size() == 1);
    CHECK(one[0].forward == classify_forward(m, State{{0.01, -0.02}}).shape.str());

    VasicekModel m1;
    m1.d = 1;
    m1.lambda = {1.0};
    m1.kappa = {1.0};
    m1.sigma = {0.5};
    m1.theta = {0.02};
    ZGrid g1;
    g1.n1 = 11;
    g1.n2 = 40;
    CHECK(state_space_map(m1, g1).size() == 11);
}

TEST_CASE("Monte Carlo without volatility is deterministic") {
    VasicekModel m = separated_base();
    const State s{{0.01, -0.02}};
    const ShapeName observed = classify_forward(m, s).shape;
    const MonteCarloResult hit = strict_attainability_mc(m, s, 0.5, 200, observed, 3);
    CHECK(hit.frequency == 1.0);
    CHECK(hit.hits == 200);
    const ShapeName other = observed == ShapeName::parse("normal") ? ShapeName::parse("inverse")
                                                                     : ShapeName::parse("normal");
    CHECK(strict_attainability_mc(m, s, 0.5, 200, other, 3).frequency == 0.0);
}

TEST_CASE("Monte Carlo frequencies agree across seeds and threads") {
    const VasicekModel base = separated_base();
    const AttainSolution sol = construct({ShapeName::parse("HD"), Curve::forward, std::nullopt}, base);
    const std::size_t n = 4000;
    const MonteCarloResult a = strict_attainability_mc(sol.model, sol.state, 0.01, n,
                                                       sol.target.shape, 1, Curve::forward, 1);
    const MonteCarloResult a3 = strict_attainability_mc(sol.model, sol.state, 0.01, n,
                                                        sol.target.shape, 1, Curve::forward, 3);
    const MonteCarloResult b = strict_attainability_mc(sol.model, sol.state, 0.01, n,
                                                       sol.target.shape, 2, Curve::forward, 1);
    CHECK(a.hits == a3.hits);
    CHECK(a.failures == 0);
    const double p = 0.5 * (a.frequency + b.frequency);
    const double se = std::sqrt(std::max(p * (1.0 - p), 1e-4) * 2.0 / static_cast<double>(n));
    CHECK(std::abs(a.frequency - b.frequency) <= 4.0 * se);
    CHECK(a.frequency > 0.0);
}

TEST_CASE("strict attainability suite covers the regime's shapes") {
    const auto rows = strict_attainability_suite(separated_base(), 0.01, 500, 4);
    std::vector<std::string> names;
    for (const StrictRow& r : rows) {
        names.push_back(r.shape.str());
        CHECK(r.result.paths == 500);
    }
    for (const char* s : {"normal", "inverse", "humped", "dipped", "HD", "DH", "HDH"}) {
        CHECK(std::find(names.begin(), names.end(), s) != names.end());
    }
}

TEST_CASE("perturbation stability") {
    const PerturbationReport r = perturbation_stability_check(300, 17);
    CHECK(r.cases == 300);
    CHECK(r.passed());
    CHECK(r.min_delta > 0.0);
    CHECK(to_json(r) == to_json(perturbation_stability_check(300, 17)));
}

TEST_CASE("parallel_for visits every index once") {
    std::vector<int> hits(1001, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
}

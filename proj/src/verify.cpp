/**
 * @file verify.cpp
 * @brief Theorem sweeps, Monte Carlo strict attainability, state-space maps
 *        and perturbation stability
 */

#include "termshape/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

namespace termshape {

namespace {

using Kind = ShapeName::Kind;

constexpr Range kBoundarySeparated{2.0, 2.0 / 0.95};
constexpr Range kBoundaryProximal{2.0 / 1.05, 2.0};
constexpr std::size_t kPathBlock = 1024;

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& rng) {
    // 53 random mantissa bits in [0, 1).
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double draw(std::mt19937_64& rng, Range r) { return r.lo + (r.hi - r.lo) * uniform01(rng); }

// Box-Muller on the same bit stream keeps draws identical across platforms.
void draw_normals(std::mt19937_64& rng, double* out, int n) {
    for (int i = 0; i < n; i += 2) {
        const double u1 = 1.0 - uniform01(rng);
        const double u2 = uniform01(rng);
        const double rad = std::sqrt(-2.0 * std::log(u1));
        out[i] = rad * std::cos(2.0 * M_PI * u2);
        if (i + 1 < n) out[i + 1] = rad * std::sin(2.0 * M_PI * u2);
    }
}

unsigned resolve_threads(unsigned threads) {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

double linspace(Range r, std::size_t n, std::size_t i) {
    if (n <= 1) return r.lo;
    return r.lo + (r.hi - r.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

void check_range(Range r, const char* what) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.hi < r.lo) {
        throw std::invalid_argument(std::string("invalid range for ") + what);
    }
}

}  // namespace

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next = n;
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

RegimeFilter parse_regime_filter(std::string_view text) {
    if (text == "separated") return RegimeFilter::separated;
    if (text == "proximal") return RegimeFilter::proximal;
    if (text == "critical") return RegimeFilter::critical;
    if (text == "any") return RegimeFilter::any;
    throw std::invalid_argument("regime must be separated, proximal, critical or any");
}

RhoFilter parse_rho_filter(std::string_view text) {
    if (text == "nonnegative") return RhoFilter::nonnegative;
    if (text == "negative") return RhoFilter::negative;
    if (text == "any") return RhoFilter::any;
    throw std::invalid_argument("rho class must be nonnegative, negative or any");
}

std::string to_string(RegimeFilter f) {
    switch (f) {
        case RegimeFilter::separated: return "separated";
        case RegimeFilter::proximal: return "proximal";
        case RegimeFilter::critical: return "critical";
        case RegimeFilter::any: return "any";
    }
    return "any";
}

std::string to_string(RhoFilter f) {
    switch (f) {
        case RhoFilter::nonnegative: return "nonnegative";
        case RhoFilter::negative: return "negative";
        case RhoFilter::any: return "any";
    }
    return "any";
}

void SweepConfig::validate() const {
    if (samples == 0) throw std::invalid_argument("sweep needs at least one sample");
    check_range(lambda1, "lambda1");
    check_range(separated_ratio, "separated ratio");
    check_range(proximal_ratio, "proximal ratio");
    check_range(kappa, "kappa");
    check_range(sigma, "sigma");
    check_range(theta, "theta");
    check_range(z, "z");
    check_range(kappa0, "kappa0");
    if (!(lambda1.lo > 0.0)) throw std::invalid_argument("lambda1 range must be positive");
    if (!(kappa.lo > 0.0)) throw std::invalid_argument("kappa range must be positive");
    if (sigma.lo < 0.0) throw std::invalid_argument("sigma range must be non-negative");
    if (separated_ratio.lo < 2.0 || !(separated_ratio.hi > 2.0)) {
        throw std::invalid_argument("separated ratio range must lie above 2");
    }
    if (proximal_ratio.lo < 1.0 || proximal_ratio.hi > 2.0 ||
        !(proximal_ratio.hi > proximal_ratio.lo)) {
        throw std::invalid_argument("proximal ratio range must lie within (1, 2)");
    }
    if (!(boundary_fraction >= 0.0 && boundary_fraction <= 1.0)) {
        throw std::invalid_argument("boundary fraction must lie in [0, 1]");
    }
    grid.validate();
}

Instance sample_instance(const SweepConfig& cfg, std::uint64_t index) {
    auto rng = make_rng(cfg.seed, index);
    RegimeFilter reg = cfg.regime;
    if (reg == RegimeFilter::any) {
        const double u = uniform01(rng);
        reg = u < 0.45 ? RegimeFilter::separated
              : u < 0.9 ? RegimeFilter::proximal
                        : RegimeFilter::critical;
    }
    const bool boundary = uniform01(rng) < cfg.boundary_fraction;

    Instance inst;
    VasicekModel& m = inst.model;
    m.d = 2;
    const double l1 = draw(rng, cfg.lambda1);
    double l2 = 2.0 * l1;
    if (reg == RegimeFilter::separated) {
        const Range r = boundary ? kBoundarySeparated : cfg.separated_ratio;
        do {
            l2 = l1 * draw(rng, r);
        } while (regime_of(l1, l2) != ScaleRegime::separated);
    } else if (reg == RegimeFilter::proximal) {
        const Range r = boundary ? kBoundaryProximal : cfg.proximal_ratio;
        do {
            l2 = l1 * draw(rng, r);
        } while (!(l2 > l1) || regime_of(l1, l2) != ScaleRegime::proximal);
    }
    m.lambda = {l1, l2};
    m.kappa = {draw(rng, cfg.kappa), draw(rng, cfg.kappa)};
    m.sigma = {draw(rng, cfg.sigma), draw(rng, cfg.sigma)};
    m.theta = {draw(rng, cfg.theta), draw(rng, cfg.theta)};
    m.kappa0 = draw(rng, cfg.kappa0);
    switch (cfg.rho) {
        case RhoFilter::nonnegative: m.rho = uniform01(rng); break;
        case RhoFilter::negative: m.rho = -(1.0 - uniform01(rng)); break;
        case RhoFilter::any: m.rho = 2.0 * uniform01(rng) - 1.0; break;
    }
    inst.state.z = {draw(rng, cfg.z), draw(rng, cfg.z)};
    return inst;
}

namespace {

struct Outcome {
    ShapeName forward;
    ShapeName yield;
    std::string forward_sseq;
    std::string yield_sseq;
    bool forward_ok = true;
    bool yield_ok = true;
    bool head_ok = true;
    bool bound_ok = true;
    std::string error;
};

Outcome evaluate(const Instance& inst, const GridSpec& grid) {
    Outcome o;
    try {
        const ShapeReport f = classify_forward(inst.model, inst.state, grid);
        const ShapeReport y = classify_yield(inst.model, inst.state, grid);
        o.forward = f.shape;
        o.yield = y.shape;
        o.forward_sseq = f.derivative_sseq.str();
        o.yield_sseq = y.derivative_sseq.str();
        const ScaleRegime reg = regime(inst.model);
        const RhoClass cls = rho_class_of(inst.model.rho);
        o.forward_ok = is_admissible(f.shape, reg, cls);
        o.yield_ok = is_admissible(y.shape, reg, cls);
        o.head_ok = head_subsequence(y.derivative_sseq, f.derivative_sseq);
        o.bound_ok =
            satisfies_bound(f.derivative_sseq, sign_bound(inst.model, inst.state, Curve::forward)) &&
            satisfies_bound(y.derivative_sseq, sign_bound(inst.model, inst.state, Curve::yield));
    } catch (const std::exception& e) {
        o.error = e.what();
    }
    return o;
}

}  // namespace

SweepReport sweep_theorem(const SweepConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    std::vector<Outcome> outcomes(cfg.samples);
    parallel_for(cfg.samples, cfg.threads, [&](std::size_t i) {
        outcomes[i] = evaluate(sample_instance(cfg, i), cfg.grid);
    });

    SweepReport rep;
    rep.config = cfg;
    rep.samples = cfg.samples;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const Outcome& o = outcomes[i];
        if (!o.error.empty()) {
            rep.numerical_failures.push_back({i, sample_instance(cfg, i), o.error});
            continue;
        }
        ++rep.forward_histogram[o.forward.str()];
        ++rep.yield_histogram[o.yield.str()];
        auto flag = [&](const char* kind) {
            rep.violations.push_back({i, kind, sample_instance(cfg, i), o.forward, o.yield,
                                      o.forward_sseq, o.yield_sseq});
        };
        if (!o.forward_ok) flag("forward-shape");
        if (!o.yield_ok) flag("yield-shape");
        if (!o.head_ok) {
            ++rep.head_failures;
            flag("head-subsequence");
        }
        if (!o.bound_ok) {
            ++rep.bound_failures;
            flag("sign-bound");
        }
    }
    rep.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

MonteCarloResult strict_attainability_mc(const VasicekModel& model, const State& state0, double t,
                                         std::size_t n_paths, const ShapeName& shape,
                                         std::uint64_t seed, Curve curve, unsigned threads,
                                         const GridSpec& grid) {
    if (n_paths == 0) throw std::invalid_argument("need at least one path");
    const OuTransition tr = ou_transition(model, state0, t);
    const std::size_t blocks = (n_paths + kPathBlock - 1) / kPathBlock;
    std::vector<std::size_t> hits(blocks);
    std::vector<std::size_t> failures(blocks);
    parallel_for(blocks, threads, [&](std::size_t b) {
        auto rng = make_rng(seed, b);
        const std::size_t end = std::min(n_paths, (b + 1) * kPathBlock);
        double noise[2];
        for (std::size_t p = b * kPathBlock; p < end; ++p) {
            draw_normals(rng, noise, model.d);
            const State s = tr.apply(std::span<const double>(noise, static_cast<std::size_t>(model.d)));
            try {
                if (classify(model, s, curve, grid).shape == shape) ++hits[b];
            } catch (const NumericalInconsistency&) {
                ++failures[b];
            }
        }
    });
    MonteCarloResult r;
    r.paths = n_paths;
    for (std::size_t b = 0; b < blocks; ++b) {
        r.hits += hits[b];
        r.failures += failures[b];
    }
    r.frequency = static_cast<double>(r.hits) / static_cast<double>(n_paths);
    return r;
}

std::vector<StrictRow> strict_attainability_suite(const VasicekModel& base, double t,
                                                  std::size_t n_paths, std::uint64_t seed,
                                                  const AttainOptions& options, unsigned threads) {
    const ScaleRegime reg = regime(base);
    std::vector<StrictRow> rows;
    std::uint64_t stream = 0;
    for (Kind k : named_shapes()) {
        const ShapeName shape = ShapeName::of(k);
        ++stream;
        const bool ok = options.rho == RhoPreference::nonnegative
                            ? is_admissible(shape, reg, RhoClass::nonnegative)
                            : is_admissible(shape, reg, RhoClass::negative) ||
                                  is_admissible(shape, reg, RhoClass::nonnegative);
        if (!ok) continue;
        AttainSolution sol;
        try {
            sol = construct(ShapeTarget{shape, Curve::forward, std::nullopt}, base, options);
        } catch (const InadmissibleShape&) {
            continue;
        }
        StrictRow row;
        row.shape = shape;
        row.proof_case = sol.proof_case;
        row.result = strict_attainability_mc(sol.model, sol.state, t, n_paths, shape,
                                             seed * 1000003ULL + stream, Curve::forward, threads,
                                             options.grid);
        rows.push_back(row);
    }
    return rows;
}

std::vector<MapRow> state_space_map(const VasicekModel& model, const ZGrid& grid, unsigned threads,
                                    const GridSpec& scan) {
    model.validate();
    if (grid.n1 == 0 || (model.d == 2 && grid.n2 == 0)) {
        throw std::invalid_argument("state grid needs at least one point per axis");
    }
    const std::size_t n2 = model.d == 2 ? grid.n2 : 1;
    std::vector<MapRow> rows(grid.n1 * n2);
    parallel_for(rows.size(), threads, [&](std::size_t idx) {
        const std::size_t i = idx / n2;
        const std::size_t j = idx % n2;
        MapRow& row = rows[idx];
        row.z1 = linspace(grid.z1, grid.n1, i);
        row.z2 = model.d == 2 ? linspace(grid.z2, n2, j) : 0.0;
        State s;
        s.z = model.d == 2 ? std::vector<double>{row.z1, row.z2} : std::vector<double>{row.z1};
        row.forward = classify_forward(model, s, scan).shape.str();
        row.yield = classify_yield(model, s, scan).shape.str();
    });
    return rows;
}

namespace {

std::vector<double> spread_sorted(std::mt19937_64& rng, std::size_t n, Range r, double min_gap) {
    std::vector<double> v(n);
    for (;;) {
        for (double& x : v) x = draw(rng, r);
        std::sort(v.begin(), v.end());
        bool ok = true;
        for (std::size_t i = 1; i < n; ++i) ok = ok && v[i] - v[i - 1] >= min_gap;
        if (ok) return v;
    }
}

}  // namespace

PerturbationReport perturbation_stability_check(std::size_t n_cases, std::uint64_t seed,
                                                const GridSpec& grid) {
    PerturbationReport rep;
    rep.cases = n_cases;
    rep.min_delta = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < n_cases; ++c) {
        auto rng = make_rng(seed, c);
        const BasisKind kind = uniform01(rng) < 0.5 ? BasisKind::F : BasisKind::G;
        const std::size_t n = 2 + static_cast<std::size_t>(uniform01(rng) * 4.0);
        ExpBasis basis{kind, spread_sorted(rng, n, {0.1, 3.0}, 0.1)};
        std::reverse(basis.decays.begin(), basis.decays.end());
        const auto r = spread_sorted(rng, n - 1, {0.2, 6.0}, 0.2);
        try {
            DPolynomial p = interpolate_prescribed_zeros(basis, r);
            double mx = 0.0;
            for (double a : p.coefficients) mx = std::max(mx, std::abs(a));
            for (double& a : p.coefficients) a /= mx;

            const SignScan base = sseq_of_dpoly(p, grid);
            if (base.zeros.size() != n - 1) {
                ++rep.numerical_failures;
                continue;
            }
            const double delta = perturbation_delta(p, probe_points(p, base));
            rep.min_delta = std::min(rep.min_delta, delta);
            auto same = [&](double eps) {
                return equivalent(sseq_of_dpoly(perturb_coefficients(p, eps), grid).sseq, base.sseq);
            };
            if (!same(0.0)) ++rep.failures_zero;
            if (!same(0.5 * delta)) ++rep.failures_half;
            if (!same(0.99 * delta)) ++rep.failures_near;
            try {
                if (!same(100.0 * delta)) ++rep.changed_at_hundred;
            } catch (const NumericalInconsistency&) {
                ++rep.changed_at_hundred;
            }
        } catch (const std::exception&) {
            ++rep.numerical_failures;
        }
    }
    if (n_cases == 0) rep.min_delta = 0.0;
    return rep;
}

}  // namespace termshape

/**
 * @file verify.hpp
 * @brief Randomised sweeps, Monte Carlo attainability estimates, state-space
 *        maps and perturbation checks
 *
 * Every random draw is a pure function of (seed, index), so results do not
 * depend on the number of worker threads.
 */

#pragma once

#include "termshape/attain.hpp"
#include "termshape/classify.hpp"
#include "termshape/vasicek.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace termshape {

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

enum class RegimeFilter { separated, proximal, critical, any };
enum class RhoFilter { nonnegative, negative, any };

RegimeFilter parse_regime_filter(std::string_view text);
RhoFilter parse_rho_filter(std::string_view text);
std::string to_string(RegimeFilter f);
std::string to_string(RhoFilter f);

struct SweepConfig {
    RegimeFilter regime = RegimeFilter::any;
    RhoFilter rho = RhoFilter::any;
    std::size_t samples = 100000;
    std::uint64_t seed = 1;

    Range lambda1{0.05, 2.0};
    Range separated_ratio{2.0, 6.0};  // lambda2 / lambda1, lower end excluded
    Range proximal_ratio{1.0, 2.0};   // both ends excluded
    Range kappa{0.1, 3.0};
    Range sigma{0.0, 1.0};
    Range theta{-0.1, 0.15};
    Range z{-0.1, 0.15};
    Range kappa0{-0.05, 0.05};
    /// Share of samples drawn with 2 lambda1 / lambda2 in [0.95, 1.05].
    double boundary_fraction = 0.1;

    unsigned threads = 0;  // 0: hardware concurrency
    GridSpec grid{};

    void validate() const;
};

struct Instance {
    VasicekModel model;
    State state;
};

/// Draw number `index` of the sweep defined by cfg.
Instance sample_instance(const SweepConfig& cfg, std::uint64_t index);

struct Violation {
    std::size_t index = 0;
    std::string kind;  // forward-shape, yield-shape, head-subsequence, sign-bound
    Instance instance;
    ShapeName forward;
    ShapeName yield;
    std::string forward_sseq;
    std::string yield_sseq;
};

struct NumericalFailure {
    std::size_t index = 0;
    Instance instance;
    std::string message;
};

struct SweepReport {
    SweepConfig config;
    std::size_t samples = 0;
    std::map<std::string, std::size_t> forward_histogram;
    std::map<std::string, std::size_t> yield_histogram;
    std::vector<Violation> violations;
    std::size_t head_failures = 0;
    std::size_t bound_failures = 0;
    std::vector<NumericalFailure> numerical_failures;
    double runtime_seconds = 0.0;

    bool passed() const noexcept { return violations.empty() && numerical_failures.empty(); }
};

/// Classifies forward and yield curves of every sample and checks shape
/// admissibility, the head-subsequence law between yield and forward
/// derivative sequences, and the coefficient sign bounds.
SweepReport sweep_theorem(const SweepConfig& cfg);

struct MonteCarloResult {
    std::size_t paths = 0;
    std::size_t hits = 0;
    std::size_t failures = 0;  // classification errors, counted as misses
    double frequency = 0.0;
};

/// Fraction of exact one-step draws of Z_t from state0 whose curve has
/// `shape`.
MonteCarloResult strict_attainability_mc(const VasicekModel& model, const State& state0, double t,
                                         std::size_t n_paths, const ShapeName& shape,
                                         std::uint64_t seed, Curve curve = Curve::forward,
                                         unsigned threads = 0, const GridSpec& grid = {});

struct StrictRow {
    ShapeName shape;
    ProofCase proof_case = ProofCase::i;
    MonteCarloResult result;
};

/// Runs strict_attainability_mc at every constructible shape of the base's
/// regime, starting from the constructed state.
std::vector<StrictRow> strict_attainability_suite(const VasicekModel& base, double t,
                                                  std::size_t n_paths, std::uint64_t seed,
                                                  const AttainOptions& options = {},
                                                  unsigned threads = 0);

struct ZGrid {
    Range z1{-0.1, 0.15};
    std::size_t n1 = 50;
    Range z2{-0.1, 0.15};
    std::size_t n2 = 50;  // ignored for one-factor models
};

struct MapRow {
    double z1 = 0.0;
    double z2 = 0.0;
    std::string forward;
    std::string yield;
};

/// Classifies every grid point, z1 major. One-factor models use z1 only.
std::vector<MapRow> state_space_map(const VasicekModel& model, const ZGrid& grid,
                                    unsigned threads = 0, const GridSpec& scan = {});

struct PerturbationReport {
    std::size_t cases = 0;
    std::size_t failures_zero = 0;
    std::size_t failures_half = 0;        // eps = delta / 2
    std::size_t failures_near = 0;        // eps = 0.99 delta
    std::size_t changed_at_hundred = 0;   // eps = 100 delta, informational
    std::size_t numerical_failures = 0;
    double min_delta = 0.0;

    bool passed() const noexcept {
        return failures_zero == 0 && failures_half == 0 && failures_near == 0 &&
               numerical_failures == 0;
    }
};

/// Random extremal interpolants with interior zeros, perturbed along the
/// sign-preserving directions.
PerturbationReport perturbation_stability_check(std::size_t n_cases, std::uint64_t seed,
                                                const GridSpec& grid = {});

/// Splits [0, n) across worker threads; fn(i) must be safe to run
/// concurrently for distinct i.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace termshape

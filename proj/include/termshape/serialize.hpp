/**
 * @file serialize.hpp
 * @brief JSON and CSV conversion for models, reports and solutions
 */

#pragma once

#include "termshape/attain.hpp"
#include "termshape/classify.hpp"
#include "termshape/verify.hpp"

#include "json.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace termshape {

using Json = nlohmann::ordered_json;

/// Reads {d, lambda, theta, kappa, kappa0, sigma, rho}. For d = 1 the
/// vector entries may also be plain numbers; d defaults to the length of
/// lambda, sigma to zeros, kappa0 and rho to 0. Throws std::invalid_argument on missing or malformed keys.
VasicekModel model_from_json(const Json& j);
Json to_json(const VasicekModel& m);

/// The optional "z" entry of a model document.
std::optional<State> state_from_json(const Json& j, int d);
Json to_json(const State& s);

Json to_json(const ShapeName& s);
Json to_json(const ShapeReport& r);
Json to_json(const DPolynomial& p);
Json to_json(const DecayCoefficients& a);
Json to_json(const AttainSolution& s);
Json to_json(const VerifyReport& r);
Json to_json(const Instance& inst);
Json to_json(const SweepReport& r, bool include_timing = false);
Json to_json(const MonteCarloResult& r);
Json to_json(const PerturbationReport& r);

/// Header x,f,Y,l,m then n rows on the uniform grid over [0, x_max].
void write_curves_csv(std::ostream& out, const VasicekModel& model, const State& state,
                      double x_max, std::size_t n);

/// Header z1,z2,forward_shape,yield_shape.
void write_map_csv(std::ostream& out, const std::vector<MapRow>& rows);

/// Comma-separated list of reals, e.g. "0.01,-0.02".
std::vector<double> parse_real_list(std::string_view text);

}  // namespace termshape

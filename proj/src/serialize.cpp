/**
 * @file serialize.cpp
 * @brief JSON and CSV conversion
 */

#include "termshape/serialize.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace termshape {

namespace {

std::vector<double> real_vector(const Json& j, const char* key) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("model is missing '") + key + "'");
    const Json& v = j.at(key);
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array()) throw std::invalid_argument(std::string("'") + key + "' must be a list");
    std::vector<double> out;
    for (const Json& e : v) {
        if (!e.is_number()) throw std::invalid_argument(std::string("'") + key + "' must hold numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

// Non-finite values become null so documents stay valid JSON.
Json real(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json reals(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(real(x));
    return a;
}

std::string fmt(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

VasicekModel model_from_json(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("model document must be a JSON object");
    VasicekModel m;
    try {
        m.lambda = real_vector(j, "lambda");
        m.d = j.contains("d") ? j.at("d").get<int>() : static_cast<int>(m.lambda.size());
        m.theta = real_vector(j, "theta");
        m.kappa = real_vector(j, "kappa");
        m.sigma = j.contains("sigma") ? real_vector(j, "sigma")
                                      : std::vector<double>(m.lambda.size(), 0.0);
        m.kappa0 = j.contains("kappa0") ? j.at("kappa0").get<double>() : 0.0;
        m.rho = j.contains("rho") ? j.at("rho").get<double>() : 0.0;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed model: ") + e.what());
    }
    m.validate();
    return m;
}

Json to_json(const VasicekModel& m) {
    Json j;
    j["d"] = m.d;
    j["lambda"] = reals(m.lambda);
    j["theta"] = reals(m.theta);
    j["kappa"] = reals(m.kappa);
    j["kappa0"] = real(m.kappa0);
    j["sigma"] = reals(m.sigma);
    j["rho"] = real(m.rho);
    return j;
}

std::optional<State> state_from_json(const Json& j, int d) {
    if (!j.is_object() || !j.contains("z")) return std::nullopt;
    State s{real_vector(j, "z")};
    if (s.z.size() != static_cast<std::size_t>(d)) {
        throw std::invalid_argument("'z' needs one entry per factor");
    }
    return s;
}

Json to_json(const State& s) { return reals(s.z); }

Json to_json(const ShapeName& s) { return s.str(); }

Json to_json(const DPolynomial& p) {
    Json j;
    j["basis"] = p.basis.kind == BasisKind::F ? "F" : "G";
    j["decays"] = reals(p.basis.decays);
    j["coefficients"] = reals(p.coefficients);
    return j;
}

Json to_json(const ShapeReport& r) {
    Json j;
    j["curve"] = to_string(r.curve);
    j["shape"] = r.shape.str();
    j["derivative_sseq"] = r.derivative_sseq.str();
    Json ex = Json::array();
    for (const Extremum& e : r.extrema) {
        ex.push_back({{"location", real(e.location)},
                      {"kind", e.kind == ExtremumKind::hump ? "hump" : "dip"}});
    }
    j["extrema"] = ex;
    j["diagnostics"] = {{"window", real(r.window)},
                        {"max_residual", real(r.max_residual)},
                        {"retries", r.retries},
                        {"boundary", r.boundary},
                        {"dpoly", to_json(r.dpoly)}};
    return j;
}

Json to_json(const DecayCoefficients& a) {
    return {{"2l2", real(a.two_l2)},
            {"l1+l2", real(a.l1_plus_l2)},
            {"l2", real(a.l2)},
            {"2l1", real(a.two_l1)},
            {"l1", real(a.l1)}};
}

Json to_json(const AttainSolution& s) {
    Json j = to_json(s.model);
    j["z"] = to_json(s.state);
    j["shape"] = s.target.shape.str();
    j["curve"] = to_string(s.target.curve);
    j["proof_case"] = to_string(s.proof_case);
    j["route"] = s.route;
    j["coefficients"] = to_json(s.coefficients);
    j["dpoly"] = to_json(s.dpoly);
    j["zeros"] = reals(s.zeros);
    j["extrema_exact"] = s.extrema_exact;
    if (s.rho_bound > 0.0) j["rho_bound"] = s.rho_bound;
    return j;
}

Json to_json(const VerifyReport& r) {
    Json j;
    j["observed"] = r.observed.str();
    j["shape_ok"] = r.shape_ok;
    j["extrema_checked"] = r.extrema_checked;
    j["extrema_ok"] = r.extrema_ok;
    j["max_extremum_error"] = real(r.max_extremum_error);
    j["residual"] = real(r.residual);
    j["residual_ok"] = r.residual_ok;
    j["rho_ok"] = r.rho_ok;
    j["passed"] = r.passed;
    return j;
}

Json to_json(const Instance& inst) {
    Json j = to_json(inst.model);
    j["z"] = to_json(inst.state);
    return j;
}

Json to_json(const SweepReport& r, bool include_timing) {
    Json j;
    j["regime"] = to_string(r.config.regime);
    j["rho"] = to_string(r.config.rho);
    j["seed"] = r.config.seed;
    j["samples"] = r.samples;
    j["passed"] = r.passed();
    Json fh = Json::object();
    for (const auto& [k, v] : r.forward_histogram) fh[k] = v;
    Json yh = Json::object();
    for (const auto& [k, v] : r.yield_histogram) yh[k] = v;
    j["forward_histogram"] = fh;
    j["yield_histogram"] = yh;
    j["head_failures"] = r.head_failures;
    j["bound_failures"] = r.bound_failures;
    Json viol = Json::array();
    for (const Violation& v : r.violations) {
        viol.push_back({{"index", v.index},
                        {"kind", v.kind},
                        {"forward", v.forward.str()},
                        {"yield", v.yield.str()},
                        {"forward_sseq", v.forward_sseq},
                        {"yield_sseq", v.yield_sseq},
                        {"instance", to_json(v.instance)}});
    }
    j["violations"] = viol;
    Json fails = Json::array();
    for (const NumericalFailure& f : r.numerical_failures) {
        fails.push_back({{"index", f.index}, {"message", f.message}, {"instance", to_json(f.instance)}});
    }
    j["numerical_failures"] = fails;
    if (include_timing) j["runtime_seconds"] = r.runtime_seconds;
    return j;
}

Json to_json(const MonteCarloResult& r) {
    return {{"paths", r.paths},
            {"hits", r.hits},
            {"failures", r.failures},
            {"frequency", real(r.frequency)}};
}

Json to_json(const PerturbationReport& r) {
    return {{"cases", r.cases},
            {"failures_zero", r.failures_zero},
            {"failures_half", r.failures_half},
            {"failures_near", r.failures_near},
            {"changed_at_hundred", r.changed_at_hundred},
            {"numerical_failures", r.numerical_failures},
            {"min_delta", real(r.min_delta)},
            {"passed", r.passed()}};
}

void write_curves_csv(std::ostream& out, const VasicekModel& model, const State& state,
                      double x_max, std::size_t n) {
    if (!(x_max > 0.0) || n < 2) throw std::invalid_argument("curve export needs x_max > 0, n >= 2");
    const DPolynomial l = l_coefficients(model, state);
    const DPolynomial m = m_coefficients(model, state);
    out << "x,f,Y,l,m\n";
    for (std::size_t i = 0; i < n; ++i) {
        const double x = x_max * static_cast<double>(i) / static_cast<double>(n - 1);
        out << fmt(x) << ',' << fmt(forward_curve(model, state, x)) << ','
            << fmt(yield_curve(model, state, x)) << ',' << fmt(eval_dpoly(l, x)) << ','
            << fmt(eval_dpoly(m, x)) << '\n';
    }
}

void write_map_csv(std::ostream& out, const std::vector<MapRow>& rows) {
    out << "z1,z2,forward_shape,yield_shape\n";
    for (const MapRow& r : rows) {
        // Shape names like other(5,+) contain a comma.
        out << fmt(r.z1) << ',' << fmt(r.z2) << ",\"" << r.forward << "\",\"" << r.yield << "\"\n";
    }
}

std::vector<double> parse_real_list(std::string_view text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find(',', pos), text.size());
        std::string item(text.substr(pos, end - pos));
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("cannot parse number '" + item + "'");
        }
        if (used != item.size() && item.find_first_not_of(' ', used) != std::string::npos) {
            throw std::invalid_argument("cannot parse number '" + item + "'");
        }
        out.push_back(v);
        pos = end + 1;
    }
    return out;
}

}  // namespace termshape

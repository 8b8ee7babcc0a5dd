/**
 * @file termshape.cpp
 * @brief Command-line front end: classify, attain, sweep, map, simulate, curves
 */

#include "termshape/attain.hpp"
#include "termshape/classify.hpp"
#include "termshape/serialize.hpp"
#include "termshape/verify.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ts = termshape;

namespace {

enum Exit : int {
    kOk = 0,
    kViolations = 1,
    kParseError = 2,
    kNumerical = 3,
    kInadmissible = 4,
    kRhoOutOfRange = 5,
};

// Input problems surface as exit code 2.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string model_path;
    std::string z;
    std::string out;
    std::string format = "json";
    std::optional<double> x_max;
    int n_samples = 4096;
};

ts::Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return ts::Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

struct Loaded {
    ts::VasicekModel model;
    std::optional<ts::State> state;
};

Loaded load_model(const Common& c) {
    const ts::Json j = read_json(c.model_path);
    Loaded out;
    try {
        out.model = ts::model_from_json(j);
        out.state = ts::state_from_json(j, out.model.d);
        if (!c.z.empty()) {
            ts::State s{ts::parse_real_list(c.z)};
            if (s.z.size() != static_cast<std::size_t>(out.model.d)) {
                throw std::invalid_argument("--z needs one entry per factor");
            }
            out.state = s;
        }
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    return out;
}

ts::State require_state(const Loaded& l) {
    if (!l.state) throw ParseError("no state: pass --z or put \"z\" in the model file");
    return *l.state;
}

ts::GridSpec grid_of(const Common& c) {
    ts::GridSpec g;
    g.x_max = c.x_max;
    g.n_samples = c.n_samples;
    try {
        g.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    return g;
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw ParseError("cannot write '" + c.out + "'");
    f << text;
}

void emit_json(const Common& c, const ts::Json& j) { emit(c, j.dump(2) + "\n"); }

template <class T, class F>
T parse_with(F&& f, const std::string& text) {
    try {
        return f(text);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

ts::Range parse_range(const std::string& text) {
    const std::vector<double> v = parse_with<std::vector<double>>(ts::parse_real_list, text);
    if (v.size() != 2 || !(v[0] <= v[1])) throw ParseError("range must be 'lo,hi' with lo <= hi");
    return {v[0], v[1]};
}

void add_model_options(CLI::App* cmd, Common& c, bool with_state) {
    cmd->add_option("--model", c.model_path, "Model JSON file")->required();
    if (with_state) cmd->add_option("--z", c.z, "State, e.g. 0.01,-0.02 (overrides the file)");
    cmd->add_option("--out", c.out, "Output file (default stdout)");
}

void add_grid_options(CLI::App* cmd, Common& c) {
    cmd->add_option("--x-max", c.x_max, "Scan horizon (default 20 / smallest decay)");
    cmd->add_option("--grid-samples", c.n_samples, "Uniform scan samples");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shapes of Vasicek term structures"};
    app.require_subcommand(1);

    Common c;
    std::string curve = "forward";
    std::string shape;
    std::string extrema;
    std::string rho = "any";
    std::string regime = "any";
    std::string dump = "violations.json";
    std::uint64_t seed = 1;
    std::size_t samples = 100000;
    unsigned threads = 0;
    std::string z1_range = "-0.1,0.15";
    std::string z2_range = "-0.1,0.15";
    std::size_t n1 = 50;
    std::size_t n2 = 50;
    double t = 0.01;
    std::size_t curve_points = 101;
    double curve_x_max = 10.0;

    auto* classify = app.add_subcommand("classify", "Classify the forward or yield curve");
    add_model_options(classify, c, true);
    add_grid_options(classify, c);
    classify->add_option("--curve", curve, "forward or yield");

    auto* attain = app.add_subcommand("attain", "Construct sigma, rho and z for a target shape");
    add_model_options(attain, c, false);
    add_grid_options(attain, c);
    attain->add_option("--shape", shape, "Target shape name")->required();
    attain->add_option("--extrema", extrema, "Extremum locations r1,r2,...");
    attain->add_option("--curve", curve, "forward or yield");
    attain->add_option("--rho", rho, "any, nonnegative or negative");

    auto* sweep = app.add_subcommand("sweep", "Randomised check of the admissible shape lists");
    add_grid_options(sweep, c);
    sweep->add_option("--out", c.out, "Report file (default stdout)");
    sweep->add_option("--regime", regime, "separated, proximal, critical or any");
    sweep->add_option("--rho", rho, "nonnegative, negative or any");
    sweep->add_option("--samples", samples, "Number of instances");
    sweep->add_option("--seed", seed, "Random seed");
    sweep->add_option("--threads", threads, "Worker threads (0: all cores)");
    sweep->add_option("--dump", dump, "Where violations are written");

    auto* map = app.add_subcommand("map", "Shape of every point of a state grid");
    add_model_options(map, c, false);
    add_grid_options(map, c);
    map->add_option("--z1", z1_range, "z1 range lo,hi");
    map->add_option("--z2", z2_range, "z2 range lo,hi");
    map->add_option("--n1", n1, "Points along z1");
    map->add_option("--n2", n2, "Points along z2");
    map->add_option("--threads", threads, "Worker threads (0: all cores)");
    map->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    map->callback([&] {
        if (!map->count("--format")) c.format = "csv";
    });

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo frequency of a shape after time t");
    add_model_options(simulate, c, true);
    add_grid_options(simulate, c);
    simulate->add_option("--shape", shape, "Shape to count")->required();
    simulate->add_option("--curve", curve, "forward or yield");
    simulate->add_option("--t", t, "Horizon of the exact step");
    simulate->add_option("--samples", samples, "Number of paths");
    simulate->add_option("--seed", seed, "Random seed");
    simulate->add_option("--threads", threads, "Worker threads (0: all cores)");

    auto* curves = app.add_subcommand("curves", "Export f, Y, l and m on a uniform grid");
    add_model_options(curves, c, true);
    curves->add_option("--x-max", curve_x_max, "Largest maturity");
    curves->add_option("--n", curve_points, "Number of rows");
    curves->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    curves->callback([&] {
        if (!curves->count("--format")) c.format = "csv";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kParseError;
    }

    const auto start = std::chrono::steady_clock::now();
    int code = kOk;
    try {
        if (*classify) {
            const Loaded l = load_model(c);
            const ts::State s = require_state(l);
            const ts::Curve cv = parse_with<ts::Curve>(ts::parse_curve, curve);
            emit_json(c, ts::to_json(ts::classify(l.model, s, cv, grid_of(c))));
        } else if (*attain) {
            const Loaded l = load_model(c);
            ts::ShapeTarget target;
            target.shape = parse_with<ts::ShapeName>(ts::ShapeName::parse, shape);
            target.curve = parse_with<ts::Curve>(ts::parse_curve, curve);
            if (!extrema.empty()) {
                target.extrema = parse_with<std::vector<double>>(ts::parse_real_list, extrema);
            }
            ts::AttainOptions opt;
            opt.rho = parse_with<ts::RhoPreference>(ts::parse_rho_preference, rho);
            opt.grid = grid_of(c);
            const ts::AttainSolution sol = ts::construct(target, l.model, opt);
            const ts::VerifyReport rep = ts::verify_solution(sol, opt.grid);
            ts::Json j;
            j["solution"] = ts::to_json(sol);
            j["verification"] = ts::to_json(rep);
            emit_json(c, j);
            if (!rep.passed) code = kNumerical;
        } else if (*sweep) {
            ts::SweepConfig cfg;
            cfg.regime = parse_with<ts::RegimeFilter>(ts::parse_regime_filter, regime);
            cfg.rho = parse_with<ts::RhoFilter>(ts::parse_rho_filter, rho);
            cfg.samples = samples;
            cfg.seed = seed;
            cfg.threads = threads;
            cfg.grid = grid_of(c);
            try {
                cfg.validate();
            } catch (const std::invalid_argument& e) {
                throw ParseError(e.what());
            }
            const ts::SweepReport rep = ts::sweep_theorem(cfg);
            const ts::Json j = ts::to_json(rep);
            emit_json(c, j);
            if (!rep.passed()) {
                Common d;
                d.out = dump;
                ts::Json v;
                v["violations"] = j["violations"];
                v["numerical_failures"] = j["numerical_failures"];
                emit_json(d, v);
                std::cerr << rep.violations.size() << " violations, "
                          << rep.numerical_failures.size() << " numerical failures; see " << dump
                          << "\n";
                code = kViolations;
            }
        } else if (*map) {
            const Loaded l = load_model(c);
            ts::ZGrid zg;
            zg.z1 = parse_range(z1_range);
            zg.z2 = parse_range(z2_range);
            zg.n1 = n1;
            zg.n2 = n2;
            const auto rows = ts::state_space_map(l.model, zg, threads, grid_of(c));
            if (c.format == "csv") {
                std::ostringstream os;
                ts::write_map_csv(os, rows);
                emit(c, os.str());
            } else {
                ts::Json a = ts::Json::array();
                for (const auto& r : rows) {
                    a.push_back({{"z1", r.z1}, {"z2", r.z2}, {"forward", r.forward}, {"yield", r.yield}});
                }
                emit_json(c, a);
            }
        } else if (*simulate) {
            const Loaded l = load_model(c);
            const ts::State s = require_state(l);
            const ts::ShapeName sh = parse_with<ts::ShapeName>(ts::ShapeName::parse, shape);
            const ts::Curve cv = parse_with<ts::Curve>(ts::parse_curve, curve);
            if (!(t > 0.0)) throw ParseError("--t must be positive");
            const auto res =
                ts::strict_attainability_mc(l.model, s, t, samples, sh, seed, cv, threads, grid_of(c));
            ts::Json j;
            j["shape"] = sh.str();
            j["curve"] = ts::to_string(cv);
            j["t"] = t;
            j["seed"] = seed;
            j["result"] = ts::to_json(res);
            emit_json(c, j);
        } else if (*curves) {
            const Loaded l = load_model(c);
            const ts::State s = require_state(l);
            std::ostringstream os;
            if (c.format == "csv") {
                ts::write_curves_csv(os, l.model, s, curve_x_max, curve_points);
                emit(c, os.str());
            } else {
                if (!(curve_x_max > 0.0) || curve_points < 2) {
                    throw ParseError("curve export needs x_max > 0, n >= 2");
                }
                ts::Json a = ts::Json::array();
                for (std::size_t i = 0; i < curve_points; ++i) {
                    const double x = curve_x_max * static_cast<double>(i) /
                                     static_cast<double>(curve_points - 1);
                    a.push_back({{"x", x},
                                 {"f", ts::forward_curve(l.model, s, x)},
                                 {"Y", ts::yield_curve(l.model, s, x)},
                                 {"l", ts::l_eval_direct(l.model, s, x)},
                                 {"m", ts::m_eval(l.model, s, x)}});
                }
                emit_json(c, a);
            }
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParseError;
    } catch (const ts::InadmissibleShape& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInadmissible;
    } catch (const ts::RhoOutOfRange& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRhoOutOfRange;
    } catch (const ts::NumericalInconsistency& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumerical;
    } catch (const ts::NumericalInfeasibility& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParseError;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "runtime " << secs << " s\n";
    return code;
}

/**
 * @file bindings.cpp
 * @brief pybind11 module termshape._core
 *
 * Models are passed as dicts with the same keys as the JSON model files;
 * results come back as plain dicts and lists.
 */

#include "termshape/attain.hpp"
#include "termshape/classify.hpp"
#include "termshape/descartes.hpp"
#include "termshape/serialize.hpp"
#include "termshape/verify.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
namespace ts = termshape;

namespace {

ts::Json to_cpp(const py::handle& obj) {
    const py::module_ json = py::module_::import("json");
    return ts::Json::parse(py::cast<std::string>(json.attr("dumps")(obj)));
}

py::object to_py(const ts::Json& j) {
    const py::module_ json = py::module_::import("json");
    return json.attr("loads")(j.dump());
}

ts::GridSpec grid_of(std::optional<double> x_max, int n_samples) {
    ts::GridSpec g;
    g.x_max = x_max;
    g.n_samples = n_samples;
    g.validate();
    return g;
}

ts::State state_of(const ts::VasicekModel& m, const ts::Json& j, const std::vector<double>& z) {
    if (!z.empty()) {
        if (z.size() != static_cast<std::size_t>(m.d)) {
            throw std::invalid_argument("z needs one entry per factor");
        }
        return ts::State{z};
    }
    if (auto s = ts::state_from_json(j, m.d)) return *s;
    throw std::invalid_argument("no state: pass z or include it in the model");
}

ts::BasisKind basis_kind(const std::string& k) {
    if (k == "F") return ts::BasisKind::F;
    if (k == "G") return ts::BasisKind::G;
    throw std::invalid_argument("basis must be 'F' or 'G'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Shapes of Vasicek term structures";

    py::register_exception<ts::NumericalInconsistency>(m, "NumericalInconsistency");
    py::register_exception<ts::InadmissibleShape>(m, "InadmissibleShape", PyExc_ValueError);
    py::register_exception<ts::RhoOutOfRange>(m, "RhoOutOfRange");
    py::register_exception<ts::NumericalInfeasibility>(m, "NumericalInfeasibility");

    m.def("reduce", [](const std::string& s) { return ts::reduce(ts::SignSeq::parse(s)).str(); },
          py::arg("sseq"));
    m.def("subsequence",
          [](const std::string& a, const std::string& b) {
              return ts::subsequence(ts::SignSeq::parse(a), ts::SignSeq::parse(b));
          },
          py::arg("a"), py::arg("b"));
    m.def("head_subsequence",
          [](const std::string& a, const std::string& b) {
              return ts::head_subsequence(ts::SignSeq::parse(a), ts::SignSeq::parse(b));
          },
          py::arg("a"), py::arg("b"));
    m.def("tail_subsequence",
          [](const std::string& a, const std::string& b) {
              return ts::tail_subsequence(ts::SignSeq::parse(a), ts::SignSeq::parse(b));
          },
          py::arg("a"), py::arg("b"));
    m.def("shape_of", [](const std::string& s) { return ts::shape_of(ts::SignSeq::parse(s)).str(); },
          py::arg("derivative_sseq"));

    m.def("sign_scan",
          [](const std::string& kind, const std::vector<double>& decays,
             const std::vector<double>& coefficients) {
              const ts::DPolynomial p{{basis_kind(kind), decays}, coefficients};
              const ts::SignScan s = ts::sseq_of_dpoly(p);
              py::dict d;
              d["sseq"] = s.sseq.str();
              d["zeros"] = s.zeros;
              return d;
          },
          py::arg("basis"), py::arg("decays"), py::arg("coefficients"));
    m.def("interpolate",
          [](const std::string& kind, const std::vector<double>& decays,
             const std::vector<double>& zeros) {
              return ts::interpolate_prescribed_zeros({basis_kind(kind), decays}, zeros).coefficients;
          },
          py::arg("basis"), py::arg("decays"), py::arg("zeros"));

    m.def("classify",
          [](const py::dict& model, std::vector<double> z, const std::string& curve,
             std::optional<double> x_max, int n_samples) {
              const ts::Json j = to_cpp(model);
              const ts::VasicekModel md = ts::model_from_json(j);
              const ts::State s = state_of(md, j, z);
              return to_py(ts::to_json(
                  ts::classify(md, s, ts::parse_curve(curve), grid_of(x_max, n_samples))));
          },
          py::arg("model"), py::arg("z") = std::vector<double>{}, py::arg("curve") = "forward",
          py::arg("x_max") = py::none(), py::arg("n_samples") = 4096);

    m.def("construct",
          [](const py::dict& base, const std::string& shape, const std::string& curve,
             std::optional<std::vector<double>> extrema, const std::string& rho) {
              const ts::VasicekModel md = ts::model_from_json(to_cpp(base));
              ts::ShapeTarget target{ts::ShapeName::parse(shape), ts::parse_curve(curve), extrema};
              ts::AttainOptions opt;
              opt.rho = ts::parse_rho_preference(rho);
              const ts::AttainSolution sol = ts::construct(target, md, opt);
              ts::Json out;
              out["solution"] = ts::to_json(sol);
              out["verification"] = ts::to_json(ts::verify_solution(sol, opt.grid));
              return to_py(out);
          },
          py::arg("base"), py::arg("shape"), py::arg("curve") = "forward",
          py::arg("extrema") = py::none(), py::arg("rho") = "any");

    m.def("sweep",
          [](const std::string& regime, const std::string& rho, std::size_t samples,
             std::uint64_t seed, unsigned threads) {
              ts::SweepConfig cfg;
              cfg.regime = ts::parse_regime_filter(regime);
              cfg.rho = ts::parse_rho_filter(rho);
              cfg.samples = samples;
              cfg.seed = seed;
              cfg.threads = threads;
              cfg.validate();
              ts::SweepReport rep;
              {
                  py::gil_scoped_release release;
                  rep = ts::sweep_theorem(cfg);
              }
              return to_py(ts::to_json(rep));
          },
          py::arg("regime") = "any", py::arg("rho") = "any", py::arg("samples") = 1000,
          py::arg("seed") = 1, py::arg("threads") = 0);

    m.def("curves",
          [](const py::dict& model, std::vector<double> z, double x_max, std::size_t n) {
              const ts::Json j = to_cpp(model);
              const ts::VasicekModel md = ts::model_from_json(j);
              const ts::State s = state_of(md, j, z);
              if (!(x_max > 0.0) || n < 2) throw std::invalid_argument("need x_max > 0, n >= 2");
              std::vector<double> xs(n), f(n), y(n), l(n), mm(n);
              for (std::size_t i = 0; i < n; ++i) {
                  xs[i] = x_max * static_cast<double>(i) / static_cast<double>(n - 1);
                  f[i] = ts::forward_curve(md, s, xs[i]);
                  y[i] = ts::yield_curve(md, s, xs[i]);
                  l[i] = ts::l_eval_direct(md, s, xs[i]);
                  mm[i] = ts::m_eval(md, s, xs[i]);
              }
              py::dict d;
              d["x"] = xs;
              d["f"] = f;
              d["Y"] = y;
              d["l"] = l;
              d["m"] = mm;
              return d;
          },
          py::arg("model"), py::arg("z") = std::vector<double>{}, py::arg("x_max") = 10.0,
          py::arg("n") = 101);

    m.def("simulate",
          [](const py::dict& model, std::vector<double> z, const std::string& shape, double t,
             std::size_t paths, std::uint64_t seed, const std::string& curve) {
              const ts::Json j = to_cpp(model);
              const ts::VasicekModel md = ts::model_from_json(j);
              const ts::State s = state_of(md, j, z);
              const ts::ShapeName sh = ts::ShapeName::parse(shape);
              const ts::Curve cv = ts::parse_curve(curve);
              ts::MonteCarloResult r;
              {
                  py::gil_scoped_release release;
                  r = ts::strict_attainability_mc(md, s, t, paths, sh, seed, cv);
              }
              return to_py(ts::to_json(r));
          },
          py::arg("model"), py::arg("z") = std::vector<double>{}, py::arg("shape") = "humped",
          py::arg("t") = 0.01, py::arg("paths") = 10000, py::arg("seed") = 1,
          py::arg("curve") = "forward");

    m.def("admissible_shapes",
          [](const std::string& regime, const std::string& rho_class) {
              ts::ScaleRegime r;
              if (regime == "separated") {
                  r = ts::ScaleRegime::separated;
              } else if (regime == "proximal") {
                  r = ts::ScaleRegime::proximal;
              } else if (regime == "critical") {
                  r = ts::ScaleRegime::critical;
              } else {
                  throw std::invalid_argument("unknown regime '" + regime + "'");
              }
              ts::RhoClass c;
              if (rho_class == "nonnegative") {
                  c = ts::RhoClass::nonnegative;
              } else if (rho_class == "negative") {
                  c = ts::RhoClass::negative;
              } else {
                  throw std::invalid_argument("rho class must be 'nonnegative' or 'negative'");
              }
              std::vector<std::string> out;
              for (const auto& s : ts::admissible_shapes(r, c)) out.push_back(s.str());
              return out;
          },
          py::arg("regime"), py::arg("rho_class"));
}

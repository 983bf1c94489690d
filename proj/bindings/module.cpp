#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "evp/certificate.hpp"
#include "evp/errors.hpp"
#include "evp/functional.hpp"
#include "evp/oracle.hpp"
#include "evp/problem.hpp"
#include "evp/solver.hpp"
#include "evp/space.hpp"

namespace py = pybind11;
using namespace evp;

namespace {

// Extended reals cross the boundary as plain floats; math.inf encodes +inf.
ExtReal ext_from_double(double v) {
  if (std::isinf(v) && v > 0) return ExtReal::infinity();
  return ExtReal(v);
}

Functional make_custom(const std::string& name, double lower_bound,
                       std::function<double(const Point&)> eval,
                       std::function<std::vector<double>(const Point&)> grad,
                       std::function<double(const Point&, std::vector<double>,
                                            std::vector<double>)> hess) {
  Functional::GradFn g = nullptr;
  Functional::HessFn h = nullptr;
  if (grad) g = [grad](const Point& p) { return grad(p); };
  if (hess) {
    h = [hess](const Point& p, std::span<const double> phi, std::span<const double> psi) {
      return hess(p, std::vector<double>(phi.begin(), phi.end()),
                  std::vector<double>(psi.begin(), psi.end()));
    };
  }
  return Functional(name, lower_bound,
                    [eval](const Point& p) { return ext_from_double(eval(p)); }, std::move(g),
                    std::move(h));
}

std::string dumps(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Constructive Ekeland variational principle: descent solver, "
            "machine-checkable certificates, and a brute-force oracle for "
            "finite metric spaces.";

  py::register_exception<RejectedStart>(m, "RejectedStartError");
  py::register_exception<SpecError>(m, "ProblemFormatError");
  static py::exception<Error> base_exc(m, "EvpError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const RejectedStart&) {
      throw;  // handled by the registered exception above
    } catch (const SpecError&) {
      throw;
    } catch (const Error& e) {
      PyErr_SetString(base_exc.ptr(), e.what());
    }
  });

  py::class_<Point>(m, "Point")
      .def_static("finite", &Point::finite, py::arg("index"))
      .def_static("normed", &Point::normed, py::arg("coords"))
      .def_property_readonly("is_index", &Point::is_index)
      .def_property_readonly("index", [](const Point& p) { return p.index(); })
      .def_property_readonly("coords", [](const Point& p) { return p.coords(); })
      .def("__eq__", [](const Point& a, const Point& b) { return a == b; })
      .def("__repr__", [](const Point& p) {
        std::ostringstream os;
        if (p.is_index()) {
          os << "Point.finite(" << p.index() << ")";
        } else {
          os << "Point.normed([";
          for (std::size_t i = 0; i < p.coords().size(); ++i) {
            os << (i ? ", " : "") << p.coords()[i];
          }
          os << "])";
        }
        return os.str();
      });

  py::enum_<NormKind>(m, "NormKind")
      .value("L1", NormKind::L1)
      .value("L2", NormKind::L2)
      .value("Linf", NormKind::Linf);

  py::class_<MetricSpace>(m, "MetricSpace")
      .def_static("finite", &MetricSpace::finite, py::arg("labels"), py::arg("dist"),
                  py::arg("metric_scale") = 1.0)
      .def_static("normed", &MetricSpace::normed, py::arg("dim"), py::arg("norm"),
                  py::arg("metric_scale") = 1.0)
      .def_property_readonly("is_finite", &MetricSpace::is_finite)
      .def_property_readonly("metric_scale", &MetricSpace::metric_scale)
      .def("point_count", &MetricSpace::point_count)
      .def("dim", &MetricSpace::dim)
      .def("with_metric_scale", &MetricSpace::with_metric_scale)
      .def("distance", &MetricSpace::distance, py::arg("a"), py::arg("b"))
      .def("base_distance", &MetricSpace::base_distance)
      .def("norm",
           [](const MetricSpace& s, const std::vector<double>& v) { return s.norm(v); })
      .def("dual_norm",
           [](const MetricSpace& s, const std::vector<double>& g) { return s.dual_norm(g); })
      .def("sample_directions", &MetricSpace::sample_directions, py::arg("count"),
           py::arg("seed"));

  py::class_<Functional>(m, "Functional")
      .def_property_readonly("name", &Functional::name)
      .def_property_readonly("lower_bound", &Functional::lower_bound)
      .def_property_readonly("has_grad", &Functional::has_grad)
      .def_property_readonly("has_hess", &Functional::has_hess)
      .def("evaluate", [](const Functional& f, const Point& p) { return f.evaluate(p).raw(); })
      .def("grad", &Functional::grad)
      .def("hess_form", [](const Functional& f, const Point& p, const std::vector<double>& phi,
                           const std::vector<double>& psi) { return f.hess_form(p, phi, psi); });

  m.def("constant", &zoo::constant, py::arg("value"));
  m.def("quadratic", &zoo::quadratic, py::arg("center"));
  m.def("quartic", &zoo::quartic, py::arg("center"));
  m.def("rosenbrock", &zoo::rosenbrock, py::arg("dim"));
  m.def("abs_sum", &zoo::abs_sum, py::arg("center"));
  m.def("boxed_quadratic", &zoo::boxed_quadratic, py::arg("coeff"), py::arg("center"),
        py::arg("lo"), py::arg("hi"));
  m.def("table",
        [](const std::vector<double>& values, double lower_bound) {
          std::vector<ExtReal> v;
          v.reserve(values.size());
          for (double x : values) v.push_back(ext_from_double(x));
          return zoo::table(std::move(v), lower_bound);
        },
        py::arg("values"), py::arg("lower_bound"),
        "Finite-space functional from a value table; math.inf marks +inf entries");
  m.def("custom_functional", &make_custom, py::arg("name"), py::arg("lower_bound"),
        py::arg("eval"), py::arg("grad") = nullptr, py::arg("hess") = nullptr,
        "Functional from python callables; eval may return math.inf");

  m.def("gateaux_fd",
        [](const Functional& f, const Point& p, const std::vector<double>& phi, double t) {
          return gateaux_fd(f, p, phi, t);
        },
        py::arg("f"), py::arg("p"), py::arg("phi"), py::arg("t") = 1e-5);
  m.def("second_variation_fd",
        [](const Functional& f, const Point& p, const std::vector<double>& phi, double t) {
          return second_variation_fd(f, p, phi, t);
        },
        py::arg("f"), py::arg("p"), py::arg("phi"), py::arg("t") = 1e-4);
  m.def("taylor_remainder",
        [](const Functional& f, const Point& p, const std::vector<double>& phi, double eps) {
          return taylor_remainder(f, p, phi, eps);
        },
        py::arg("f"), py::arg("p"), py::arg("phi"), py::arg("eps"));

  py::enum_<SamplerKind>(m, "SamplerKind")
      .value("Exhaustive", SamplerKind::Exhaustive)
      .value("LocalBall", SamplerKind::LocalBall);
  py::enum_<Termination>(m, "Termination")
      .value("Stationary", Termination::Stationary)
      .value("StepTolerance", Termination::StepTolerance)
      .value("MaxIters", Termination::MaxIters);

  py::class_<LocalBallParams>(m, "LocalBallParams")
      .def(py::init<>())
      .def_readwrite("radius_factor", &LocalBallParams::radius_factor)
      .def_readwrite("samples_per_iter", &LocalBallParams::samples_per_iter)
      .def_readwrite("seed", &LocalBallParams::seed);

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("epsilon", &SolverConfig::epsilon)
      .def_readwrite("max_iters", &SolverConfig::max_iters)
      .def_readwrite("step_tolerance", &SolverConfig::step_tolerance)
      .def_readwrite("sampler", &SolverConfig::sampler)
      .def_readwrite("ball", &SolverConfig::ball)
      .def_readwrite("second_order_mode", &SolverConfig::second_order_mode);

  py::class_<IterationTrace>(m, "IterationTrace")
      .def_readonly("points", &IterationTrace::points)
      .def_readonly("values", &IterationTrace::values)
      .def_readonly("step_dists", &IterationTrace::step_dists)
      .def_readonly("inf_estimates", &IterationTrace::inf_estimates)
      .def_readonly("terminated_by", &IterationTrace::terminated_by)
      .def_readonly("effective_epsilon", &IterationTrace::effective_epsilon)
      .def("to_json", [](const IterationTrace& t) { return dumps(trace_to_json(t)); });

  m.def("membership_S", &membership_S, py::arg("f"), py::arg("space"), py::arg("eps"),
        py::arg("u_n"), py::arg("w"));
  m.def("select_next", &select_next, py::arg("f"), py::arg("space"), py::arg("eps"),
        py::arg("u_n"), py::arg("sampler"), py::arg("ball") = LocalBallParams{},
        py::arg("iter_index") = 0);
  m.def("run",
        [](const Functional& f, const MetricSpace& s, const Point& u, const SolverConfig& cfg) {
          SolveResult r = run(f, s, u, cfg);
          return py::make_tuple(r.v, r.trace);
        },
        py::arg("f"), py::arg("space"), py::arg("u"), py::arg("config"));
  m.def("run_second_order",
        [](const Functional& f, const MetricSpace& s, const Point& u, const SolverConfig& cfg) {
          SolveResult r = run_second_order(f, s, u, cfg);
          return py::make_tuple(r.v, r.trace);
        },
        py::arg("f"), py::arg("space"), py::arg("u"), py::arg("config"));

  py::enum_<CertMode>(m, "CertMode")
      .value("Standard", CertMode::Standard)
      .value("SecondOrder", CertMode::SecondOrder)
      .value("RemarkRescaled", CertMode::RemarkRescaled);
  py::enum_<CertStatus>(m, "CertStatus")
      .value("Pass", CertStatus::Pass)
      .value("Fail", CertStatus::Fail)
      .value("NotApplicable", CertStatus::NotApplicable);
  py::enum_<CertOverall>(m, "CertOverall")
      .value("Pass", CertOverall::Pass)
      .value("Fail", CertOverall::Fail)
      .value("Partial", CertOverall::Partial);

  py::class_<CertOptions>(m, "CertOptions")
      .def(py::init<>())
      .def_readwrite("c3_samples", &CertOptions::c3_samples)
      .def_readwrite("directions", &CertOptions::directions)
      .def_readwrite("seed", &CertOptions::seed);

  py::class_<CertItem>(m, "CertItem")
      .def_readonly("id", &CertItem::id)
      .def_readonly("status", &CertItem::status)
      .def_readonly("margin", &CertItem::margin)
      .def_readonly("samples", &CertItem::samples)
      .def_readonly("note", &CertItem::note);

  py::class_<Certificate>(m, "Certificate")
      .def_readonly("mode", &Certificate::mode)
      .def_readonly("epsilon", &Certificate::epsilon)
      .def_readonly("items", &Certificate::items)
      .def_readonly("overall", &Certificate::overall)
      .def("item", [](const Certificate& c, const std::string& id) {
        const CertItem* it = c.find(id);
        if (!it) throw py::key_error(id);
        return *it;
      })
      .def("to_json", [](const Certificate& c) { return dumps(certificate_to_json(c)); });

  m.def("make_certificate",
        [](const Functional& f, const MetricSpace& s, const Point& u, const Point& v, double eps,
           CertMode mode, const IterationTrace* trace, const CertOptions& opts) {
          return make_certificate(f, s, u, v, eps, mode, trace, opts);
        },
        py::arg("f"), py::arg("space"), py::arg("u"), py::arg("v"), py::arg("eps"),
        py::arg("mode") = CertMode::Standard, py::arg("trace") = nullptr,
        py::arg("options") = CertOptions{});

  m.def("exact_inf", &oracle::exact_inf, py::arg("f"), py::arg("space"));
  m.def("ekeland_set", &oracle::ekeland_set, py::arg("f"), py::arg("space"), py::arg("eps"));
  m.def("verify_against_oracle", &oracle::verify_against_oracle, py::arg("f"), py::arg("space"),
        py::arg("u"), py::arg("eps"), py::arg("v"));

  m.def("run_problem_json",
        [](const std::string& text) {
          nlohmann::json doc;
          try {
            doc = nlohmann::json::parse(text);
          } catch (const nlohmann::json::exception& e) {
            throw SpecError(std::string("not valid JSON: ") + e.what());
          }
          ProblemSpec spec = load_problem(doc);
          RunOutcome out = run_problem(spec);
          return py::make_tuple(dumps(certificate_to_json(out.certificate, out.oracle)),
                                dumps(trace_to_json(out.trace)));
        },
        py::arg("text"),
        "Run a problem document given as a JSON string; returns "
        "(certificate_json, trace_json)");
  m.def("run_problem_file",
        [](const std::string& path, const std::string& out_dir) {
          RunOverrides o;
          std::ostringstream log;
          const int code = run_problem_file(path, out_dir, o, log);
          return py::make_tuple(code, log.str());
        },
        py::arg("path"), py::arg("out_dir") = std::string(),
        "Run a problem file like the CLI would; returns (exit_code, log)");
}

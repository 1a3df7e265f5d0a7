#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "hdrband/density.hpp"
#include "hdrband/hdr.hpp"
#include "hdrband/kernel.hpp"
#include "hdrband/models.hpp"
#include "hdrband/risk.hpp"
#include "hdrband/selector.hpp"
#include "hdrband/simulation.hpp"

namespace py = pybind11;
using namespace hdrband;

namespace {

py::object to_python(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null: return py::none();
    case nlohmann::json::value_t::boolean: return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case nlohmann::json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case nlohmann::json::value_t::number_float: return py::float_(j.get<double>());
    case nlohmann::json::value_t::string: return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
      py::list out;
      for (const auto& v : j) out.append(to_python(v));
      return out;
    }
    default: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = to_python(v);
      return out;
    }
  }
}

Sample to_sample(const py::array_t<double, py::array::c_style | py::array::forcecast>& data) {
  if (data.ndim() != 1) throw std::invalid_argument("sample must be one-dimensional");
  return Sample(std::vector<double>(data.data(), data.data() + data.size()));
}

py::array_t<double> to_array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

std::vector<py::tuple> intervals(const IntervalUnion& u) {
  std::vector<py::tuple> out;
  for (const auto& iv : u.intervals()) out.push_back(py::make_tuple(iv.lo, iv.hi));
  return out;
}

IntervalUnion to_union(const std::vector<std::pair<double, double>>& v) {
  std::vector<Interval> out;
  for (const auto& [a, b] : v) out.push_back({a, b});
  return IntervalUnion(std::move(out));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Highest density region estimation with an HDR-tailored plug-in bandwidth";

  py::class_<NormalMixture>(m, "NormalMixture")
      .def(py::init([](const std::vector<std::tuple<double, double, double>>& comps) {
             std::vector<MixtureComponent> cs;
             for (const auto& [w, mu, sd] : comps) cs.push_back({w, mu, sd});
             return NormalMixture(std::move(cs));
           }),
           py::arg("components"), "Components as (weight, mean, sd) tuples")
      .def_static("preset", &mixture_preset, py::arg("name"))
      .def_static("parse", &parse_mixture, py::arg("text"))
      .def_property_readonly("components",
                             [](const NormalMixture& mix) {
                               std::vector<std::tuple<double, double, double>> out;
                               for (const auto& c : mix.components()) out.emplace_back(c.weight, c.mean, c.sd);
                               return out;
                             })
      .def("eval",
           [](const NormalMixture& mix, int order, const py::object& x) {
             return py::vectorize([&mix, order](double v) { return mix.eval(order, v); })(x);
           },
           py::arg("order"), py::arg("x"))
      .def("pdf",
           [](const NormalMixture& mix, const py::object& x) {
             return py::vectorize([&mix](double v) { return mix.pdf(v); })(x);
           },
           py::arg("x"))
      .def("cdf",
           [](const NormalMixture& mix, const py::object& x) {
             return py::vectorize([&mix](double v) { return mix.cdf(v); })(x);
           },
           py::arg("x"))
      .def("sample",
           [](const NormalMixture& mix, std::size_t n, std::uint64_t seed) {
             const Sample s = mix.sample(n, seed);
             return to_array({s.values().begin(), s.values().end()});
           },
           py::arg("n"), py::arg("seed"))
      .def("to_json", [](const NormalMixture& mix) { return nlohmann::json(mix).dump(); });
  m.def("mixture_preset_names", &mixture_preset_names);

  m.def("hdr_oracle", [](const NormalMixture& mix, double tau) { return to_python(nlohmann::json(hdr_oracle(mix, tau))); },
        py::arg("mixture"), py::arg("tau"));

  m.def("gaussian_derivative", py::vectorize(&gaussian_derivative), py::arg("r"), py::arg("x"));
  m.def("kernel_constants", [] {
    const auto& k = kernel_constants();
    py::dict d;
    d["roughness"] = k.roughness;
    d["second_moment"] = k.second_moment;
    d["derivative_at_zero"] = std::vector<double>(k.derivative_at_zero.begin(), k.derivative_at_zero.end());
    return d;
  });

  m.def("kde_evaluate",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& data, double h, int order,
           const std::vector<double>& points) { return to_array(kde_evaluate(to_sample(data), h, order, points)); },
        py::arg("data"), py::arg("h"), py::arg("order"), py::arg("points"));

  m.def("estimate_region",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& data, double h, double tau,
           std::size_t grid_points) {
          const RegionEstimate est = estimate_region(to_sample(data), h, tau, grid_points);
          return py::make_tuple(est.level, intervals(est.region));
        },
        py::arg("data"), py::arg("h"), py::arg("tau"), py::arg("grid_points") = 2048,
        "Plug-in HDR at bandwidth h: (level, [(lo, hi), ...])");

  m.def("symmetric_difference_mass",
        [](const std::vector<std::pair<double, double>>& a, const std::vector<std::pair<double, double>>& b,
           const NormalMixture& truth) { return symmetric_difference_mass(to_union(a), to_union(b), truth); },
        py::arg("a"), py::arg("b"), py::arg("truth"));

  m.def("robust_scale", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& data) {
    return robust_scale(to_sample(data));
  });
  m.def("psi_normal_scale", &psi_normal_scale, py::arg("r"), py::arg("sigma"));
  m.def("psi_kernel_estimate",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& data, int r, double g, bool binned) {
          return psi_kernel_estimate(to_sample(data), r, g, binned);
        },
        py::arg("data"), py::arg("r"), py::arg("g"), py::arg("binned") = false);

  m.def("hdr_bandwidth",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& data, double tau,
           bool paper_literal_constants, bool binned) {
          SelectorConfig cfg;
          cfg.constants = paper_literal_constants ? ConstantConvention::paper_literal : ConstantConvention::exact;
          cfg.binned = binned;
          return to_python(nlohmann::json(hdr_bandwidth(to_sample(data), tau, cfg)));
        },
        py::arg("data"), py::arg("tau"), py::arg("paper_literal_constants") = false, py::arg("binned") = true,
        "Full selector report as a dict; the bandwidth is report['bandwidth']");

  m.def("lscv_bandwidth",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& data) {
          const LscvResult r = lscv_bandwidth(to_sample(data));
          return py::make_tuple(r.bandwidth, r.boundary);
        },
        py::arg("data"), "(bandwidth, on_boundary)");

  py::class_<RiskCoefficients>(m, "RiskCoefficients")
      .def_readonly("f_tau", &RiskCoefficients::f_tau)
      .def_readonly("d1", &RiskCoefficients::d1)
      .def_readonly("d2", &RiskCoefficients::d2)
      .def_readonly("d3", &RiskCoefficients::d3)
      .def_readonly("b1", &RiskCoefficients::b1)
      .def_readonly("b2", &RiskCoefficients::b2)
      .def_readonly("b3", &RiskCoefficients::b3)
      .def_readonly("clamped", &RiskCoefficients::clamped);

  m.def("risk_coefficients",
        [](double level, const std::vector<std::tuple<double, double, double>>& crossings) {
          std::vector<Crossing> cs;
          for (const auto& [x, s, c] : crossings) cs.push_back({x, s, c});
          return risk_coefficients(level, cs);
        },
        py::arg("level"), py::arg("crossings"), "Crossings as (x, f'(x), f''(x)) tuples");
  m.def("oracle_coefficients", [](const NormalMixture& mix, double tau) {
    const HdrOracle o = hdr_oracle(mix, tau);
    return risk_coefficients(o.level, o.crossings);
  });
  m.def("asymptotic_risk_in_h", &asymptotic_risk_in_h, py::arg("h"), py::arg("n"), py::arg("coefficients"));
  m.def("asymptotic_risk_ar", &asymptotic_risk_ar, py::arg("c"), py::arg("n"), py::arg("coefficients"));
  m.def("minimize_ar",
        [](double n, const RiskCoefficients& rc) {
          const ArMinimum r = minimize_ar(n, rc);
          return py::make_tuple(r.c_opt, r.value);
        },
        py::arg("n"), py::arg("coefficients"), "(c_opt, AR(c_opt))");

  m.def("monte_carlo_risk",
        [](const NormalMixture& mix, std::size_t n, double tau, const std::vector<double>& hs, std::size_t M,
           std::uint64_t seed) {
          const auto pts = monte_carlo_risk(mix, n, tau, hs, M, seed);
          std::vector<double> asym, mean, se;
          for (const auto& p : pts) {
            asym.push_back(p.asymptotic);
            mean.push_back(p.monte_carlo->mean);
            se.push_back(p.monte_carlo->std_error);
          }
          py::dict d;
          d["h"] = to_array(hs);
          d["asym"] = to_array(asym);
          d["mc_mean"] = to_array(mean);
          d["mc_se"] = to_array(se);
          return d;
        },
        py::arg("mixture"), py::arg("n"), py::arg("tau"), py::arg("h_values"), py::arg("M"), py::arg("seed"));

  m.def("compare_selectors",
        [](const NormalMixture& mix, std::size_t n, const std::vector<double>& taus, std::size_t reps,
           std::uint64_t seed) {
          const SimulationResult r = compare_selectors(mix, n, taus, reps, seed);
          py::list records;
          for (const auto& rec : r.records) {
            py::dict d;
            d["rep"] = rec.rep;
            d["tau"] = rec.tau;
            d["h_hdr"] = rec.h_hdr;
            d["h_lscv"] = rec.h_lscv;
            d["err_hdr"] = rec.err_hdr;
            d["err_lscv"] = rec.err_lscv;
            d["ok"] = rec.ok;
            records.append(d);
          }
          return py::make_tuple(records, to_python(nlohmann::json(r.summaries)));
        },
        py::arg("mixture"), py::arg("n"), py::arg("taus"), py::arg("reps"), py::arg("seed"),
        "(records, summaries)");
}

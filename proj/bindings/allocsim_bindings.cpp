#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "allocsim/analysis.hpp"
#include "allocsim/engine.hpp"
#include "allocsim/errors.hpp"
#include "allocsim/io.hpp"
#include "allocsim/math.hpp"
#include "allocsim/neyman.hpp"
#include "allocsim/version.hpp"

namespace py = pybind11;
using namespace allocsim;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-arm randomisation designs: allocation targets, Wald tests and "
            "Monte Carlo operating characteristics";
  m.attr("__version__") = version;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("norm_quantile", &norm_quantile, py::arg("p"),
        "Standard normal quantile, p in (0,1)");
  m.def("norm_cdf", &norm_cdf, py::arg("x"), "Standard normal CDF");
  m.def("z_crit", &z_crit, py::arg("alpha"),
        "Two-sided critical value, the upper alpha/2 normal quantile");

  m.def(
      "neyman_rho_sd",
      [](double sigma0, double sigma1) { return neyman_rho_sd(sigma0, sigma1).rho1; },
      py::arg("sigma0"), py::arg("sigma1"),
      "Variance-optimal treatment share sigma1/(sigma0+sigma1)");
  m.def(
      "neyman_rho_binary",
      [](double p0, double p1) { return neyman_rho_binary(p0, p1).rho1; },
      py::arg("p0"), py::arg("p1"),
      "Variance-optimal treatment share for Bernoulli arms");

  py::class_<NeymanPoint>(m, "NeymanPoint")
      .def_readonly("p1", &NeymanPoint::p1)
      .def_readonly("rho_n1", &NeymanPoint::rho_n1)
      .def_readonly("rho_er", &NeymanPoint::rho_er)
      .def("__repr__", [](const NeymanPoint& p) {
        return "NeymanPoint(p1=" + std::to_string(p.p1) +
               ", rho_n1=" + std::to_string(p.rho_n1) + ")";
      });
  m.def("neyman_curve", &neyman_curve, py::arg("p0"), py::arg("p1_grid"),
        "Optimal share across a grid of treatment rates");
  m.def("default_p_grid", &default_p_grid, "0.01 .. 0.99 in steps of 0.01");

  py::class_<TestOutcome>(m, "TestOutcome")
      .def_readonly("z", &TestOutcome::z)
      .def_readonly("reject", &TestOutcome::reject)
      .def_readonly("alpha", &TestOutcome::alpha)
      .def_readonly("estimate_diff", &TestOutcome::estimate_diff)
      .def("__repr__", [](const TestOutcome& t) {
        return "TestOutcome(z=" + std::to_string(t.z) +
               ", reject=" + (t.reject ? std::string("True") : std::string("False")) +
               ")";
      });
  m.def("wald_binary", &wald_binary, py::arg("n0"), py::arg("s0"), py::arg("n1"),
        py::arg("s1"), py::arg("alpha") = 0.05,
        "Unpooled two-sample Wald test on proportions");
  m.def("wald_continuous", &wald_continuous, py::arg("n0"), py::arg("mean0"),
        py::arg("ssd0"), py::arg("n1"), py::arg("mean1"), py::arg("ssd1"),
        py::arg("alpha") = 0.05,
        "Unpooled two-sample Wald test on means; ssd is the sum of squared "
        "deviations from the arm mean");

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def_readonly("n_total", &ScenarioConfig::n_total)
      .def_readonly("alpha", &ScenarioConfig::alpha)
      .def_readonly("replications", &ScenarioConfig::replications)
      .def_readonly("seed", &ScenarioConfig::master_seed)
      .def_property_readonly(
          "n_designs", [](const ScenarioConfig& c) { return c.designs.size(); })
      .def("to_json", &config_to_json);
  m.def("parse_config", &parse_config, py::arg("json_text"),
        "Parse a JSON scenario document");

  py::class_<MetricsSummary>(m, "MetricsSummary")
      .def_readonly("design", &MetricsSummary::design)
      .def_readonly("alternative", &MetricsSummary::alternative)
      .def_readonly("rejection_rate", &MetricsSummary::rejection_rate)
      .def_readonly("rejection_mcse", &MetricsSummary::rejection_mcse)
      .def_readonly("mean_prop_arm1", &MetricsSummary::mean_prop_arm1)
      .def_readonly("mean_outcome", &MetricsSummary::mean_outcome)
      .def_readonly("replications", &MetricsSummary::replications)
      .def_readonly("type1_inflated", &MetricsSummary::type1_inflated)
      .def("__repr__", [](const MetricsSummary& s) {
        return "MetricsSummary(design='" + s.design +
               "', hypothesis='" + (s.alternative ? "alternative" : "null") +
               "', rejection_rate=" + std::to_string(s.rejection_rate) + ")";
      });
  m.def("run_monte_carlo", &run_monte_carlo, py::arg("config"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>(),
        "Simulate every design under both hypotheses; null row first per design");

  py::class_<PowerScanRow>(m, "PowerScanRow")
      .def_readonly("ratio0", &PowerScanRow::ratio0)
      .def_readonly("ratio1", &PowerScanRow::ratio1)
      .def_readonly("power", &PowerScanRow::power)
      .def_readonly("mcse", &PowerScanRow::mcse)
      .def_readonly("mean_outcome", &PowerScanRow::mean_outcome);
  m.def("power_scan", &power_scan, py::arg("config"), py::arg("ratios"),
        py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>(),
        "Power under the alternative for a list of fixed (r0, r1) ratios");

  m.def("summary_csv", &summary_csv, py::arg("rows"),
        "Serialize simulation rows in the summary.csv layout");
}

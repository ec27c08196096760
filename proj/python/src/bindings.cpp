#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "kssvar/asymptotics.hpp"
#include "kssvar/config.hpp"
#include "kssvar/engine.hpp"
#include "kssvar/gaussian_matrix.hpp"
#include "kssvar/hermite.hpp"
#include "kssvar/kacrice.hpp"
#include "kssvar/rng.hpp"
#include "kssvar/rootcount.hpp"
#include "kssvar/system.hpp"

namespace py = pybind11;
using namespace kssvar;

namespace {

py::dict root_dict(const rootcount::RootCountResult& r) {
  py::dict out;
  out["count"] = r.count;
  out["certified"] = r.certified;
  out["unresolved_regions"] = r.unresolved_regions;
  out["bezout_cap"] = r.bezout_cap;
  out["method"] = rootcount::to_string(r.method);
  out["equator_root"] = r.equator_root;
  return out;
}

py::dict moments_dict(const engine::MomentEstimate& e) {
  py::dict out;
  out["m"] = e.m;
  out["d"] = e.d;
  out["n"] = e.n;
  out["master_seed"] = e.master_seed;
  out["mean"] = e.mean;
  out["variance"] = e.variance;
  out["se_mean"] = e.se_mean;
  out["se_variance"] = e.se_variance;
  out["normalized_mean"] = e.normalized_mean;
  out["normalized_mean_se"] = e.normalized_mean_se;
  out["normalized_variance"] = e.normalized_variance;
  out["normalized_variance_se"] = e.normalized_variance_se;
  out["uncertified_fraction"] = e.uncertified_fraction;
  out["redraws"] = e.redraws;
  return out;
}

py::tuple est(const Estimate& e) { return py::make_tuple(e.value, e.error); }

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Real root counts of Kostlan-Shub-Smale systems: sampling, counting, Kac-Rice variance";

  mod.def("derive_seed", &derive_seed, py::arg("seed"), py::arg("index"));
  mod.def("replicate_seed", &engine::replicate_seed, py::arg("master"), py::arg("m"), py::arg("d"), py::arg("index"));

  py::class_<KssSystem>(mod, "KssSystem")
      .def_property_readonly("m", &KssSystem::m)
      .def_property_readonly("d", &KssSystem::d)
      .def_property_readonly("seed", &KssSystem::seed)
      .def_property_readonly("homogeneous", [](const KssSystem& s) { return s.form() == Form::homogeneous; })
      .def_property_readonly("terms", &KssSystem::terms)
      .def_property_readonly("coefficients",
                             [](const KssSystem& s) {
                               const auto c = s.coefficients();
                               return std::vector<double>(c.begin(), c.end());
                             })
      .def("to_json", [](const KssSystem& s) { return to_json(s); })
      .def_static("from_json", &system_from_json, py::arg("text"));

  mod.def("sample_system", &sample_system, py::arg("m"), py::arg("d"), py::arg("seed"));
  mod.def("homogenize", &homogenize, py::arg("system"));

  mod.def(
      "count_roots",
      [](const KssSystem& s, double min_width) {
        rootcount::SubdivisionOptions o;
        o.min_width = min_width;
        py::gil_scoped_release release;
        auto r = rootcount::count_real_roots(s, o);
        py::gil_scoped_acquire acquire;
        return root_dict(r);
      },
      py::arg("system"), py::arg("min_width") = 1e-9);
  mod.def(
      "count_univariate",
      [](const std::vector<double>& coeffs) { return root_dict(rootcount::count_univariate(coeffs)); },
      py::arg("coeffs"), "Distinct real roots of sum_i coeffs[i] t^i by an exact Sturm chain.");

  mod.def(
      "scaled_kernel",
      [](double z, unsigned d) {
        const auto k = kacrice::scaled_kernel(z, d);
        py::dict out;
        out["a"] = k.a;
        out["b"] = k.b;
        out["c"] = k.c;
        out["d"] = k.dd;
        out["sigma_sq"] = k.sigma_sq;
        out["rho"] = k.rho;
        return out;
      },
      py::arg("z"), py::arg("d"));

  mod.def(
      "variance_finite_d",
      [](unsigned d, unsigned m, std::uint64_t g_samples, unsigned g_nodes, std::uint64_t seed) {
        kacrice::QuadratureSpec spec;
        spec.g_samples = g_samples;
        spec.g_nodes = g_nodes;
        kacrice::VarianceResult r;
        {
          py::gil_scoped_release release;
          r = kacrice::variance_finite_d(d, m, spec, seed);
        }
        py::dict out;
        out["value"] = r.value;
        out["second_factorial_moment"] = r.second_factorial_moment;
        out["quadrature_error"] = r.quadrature_error;
        out["mc_error"] = r.mc_error;
        out["converged"] = r.converged;
        return out;
      },
      py::arg("d"), py::arg("m"), py::arg("g_samples") = 2'000'000, py::arg("g_nodes") = 200, py::arg("seed") = 1);

  mod.def(
      "v_infinity",
      [](unsigned m, const std::string& route, std::uint64_t g_samples, std::uint64_t seed) {
        asymptotics::VInfSpec spec;
        if (route == "product")
          spec.route = asymptotics::Route::product;
        else if (route != "direct")
          throw py::value_error("route must be 'direct' or 'product'");
        spec.g_samples = g_samples;
        asymptotics::VInfResult r;
        {
          py::gil_scoped_release release;
          r = asymptotics::v_infinity(m, spec, seed);
        }
        py::dict out;
        out["value"] = r.value;
        out["quadrature_error"] = r.quadrature_error;
        out["mc_error"] = r.mc_error;
        out["route"] = route;
        return out;
      },
      py::arg("m"), py::arg("route") = "direct", py::arg("g_samples") = 400'000, py::arg("seed") = 1);

  mod.def(
      "g_functional",
      [](double rho, double dcoef, unsigned m, std::uint64_t n, std::uint64_t seed, bool control_variate) {
        return est(g_functional(rho, dcoef, m, n, seed, control_variate));
      },
      py::arg("rho"), py::arg("dcoef"), py::arg("m"), py::arg("n") = 200'000, py::arg("seed") = 1,
      py::arg("control_variate") = true);

  mod.def("hermite_eval", &hermite::hermite_eval, py::arg("n"), py::arg("x"));
  mod.def(
      "f_tilde",
      [](unsigned m, std::uint64_t n, std::uint64_t seed) {
        const auto f = hermite::f_tilde_22(m, n, seed);
        py::dict out;
        out["display"] = est(f.display);
        out["coefficient"] = est(f.coefficient);
        return out;
      },
      py::arg("m"), py::arg("n") = 200'000, py::arg("seed") = 1);
  mod.def(
      "i2d_lower_bound",
      [](unsigned d, unsigned m, std::uint64_t n, std::uint64_t seed) {
        hermite::I2dResult r;
        {
          py::gil_scoped_release release;
          r = hermite::i2d_lower_bound(d, m, {}, n, seed);
        }
        py::dict out;
        out["value"] = est(r.value);
        out["value_display"] = est(r.value_display);
        out["integral"] = r.integral;
        out["quadrature_error"] = r.quadrature_error;
        return out;
      },
      py::arg("d"), py::arg("m"), py::arg("n") = 200'000, py::arg("seed") = 1);

  mod.def(
      "estimate_moments",
      [](unsigned m, unsigned d, std::uint64_t n, std::uint64_t seed, unsigned workers) {
        engine::MomentEstimate e;
        {
          py::gil_scoped_release release;
          e = engine::estimate_moments(m, d, n, seed, workers);
        }
        return moments_dict(e);
      },
      py::arg("m"), py::arg("d"), py::arg("n"), py::arg("seed") = 1, py::arg("workers") = 1);

  mod.def(
      "run_experiment",
      [](const std::string& config_text) {
        const auto c = ExperimentConfig::from_text(config_text, false);
        engine::RunReport r;
        {
          py::gil_scoped_release release;
          r = engine::run_experiment(c);
        }
        py::dict out;
        py::list est_list;
        for (const auto& e : r.estimates) est_list.append(moments_dict(e));
        out["estimates"] = est_list;
        out["files"] = r.files;
        out["failed"] = r.failed;
        out["uncertified"] = r.uncertified;
        out["resumed"] = r.resumed;
        return out;
      },
      py::arg("config_text"), "Runs an experiment from key = value configuration text (environment ignored).");
}

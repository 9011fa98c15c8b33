#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "heunpulse/dynamics.hpp"
#include "heunpulse/errors.hpp"
#include "heunpulse/pulses.hpp"
#include "heunpulse/specfun.hpp"
#include "heunpulse/verify.hpp"
#include "heunpulse/xuv.hpp"

namespace py = pybind11;
using namespace heunpulse;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact two-level dynamics under Heun-type pulses";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto domain = py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<PoleError>(m, "PoleError", domain.ptr());
  py::register_exception<DivergenceError>(m, "DivergenceError", domain.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<IntegrationError>(m, "IntegrationError", base.ptr());
  py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());

  using pulses::DimensionlessParams;
  using pulses::PhaseMap;
  using pulses::PulseSpec;

  py::class_<DimensionlessParams>(m, "DimensionlessParams")
      .def(py::init([](double alpha, double beta, double gamma) {
             DimensionlessParams p{alpha, beta, gamma};
             p.validate();
             return p;
           }),
           py::arg("alpha") = 1.0, py::arg("beta") = 0.0, py::arg("gamma") = 0.0)
      .def_static("from_physical", &DimensionlessParams::from_physical, py::arg("omega0"),
                  py::arg("alpha"), py::arg("detuning"))
      .def_readonly("alpha", &DimensionlessParams::alpha)
      .def_readonly("beta", &DimensionlessParams::beta)
      .def_readonly("gamma", &DimensionlessParams::gamma);

  py::class_<PhaseMap>(m, "PhaseMap")
      .def(py::init<double, double>(), py::arg("mu") = 1.0, py::arg("lambda_") = 0.0)
      .def("time_of_phase", &PhaseMap::time_of_phase)
      .def("phase_of_time", [](const PhaseMap& pm, double tau) {
        return pm.phase_of_time(tau).phi;
      });

  py::class_<PulseSpec>(m, "PulseSpec")
      .def_static("sech", &PulseSpec::sech)
      .def_static("omega_delta", &PulseSpec::omega_delta, py::arg("delta"), py::arg("params"))
      .def_static("omega_one", &PulseSpec::omega_one)
      .def_static("omega_plus", &PulseSpec::omega_plus)
      .def_static("omega_minus", &PulseSpec::omega_minus)
      .def_static("box", &PulseSpec::box, py::arg("t0"), py::arg("params"))
      .def_static("smooth_box", &PulseSpec::smooth_box, py::arg("delta"), py::arg("params"))
      .def_static(
          "heun_family",
          [](double ab, double q, double c, const PhaseMap& map, const DimensionlessParams& p) {
            return PulseSpec::heun_family({ab, q, c, map}, p);
          },
          py::arg("ab"), py::arg("q"), py::arg("c"), py::arg("map"), py::arg("params"))
      .def_static(
          "confluent_family",
          [](double pp, double q, const PhaseMap& map, const DimensionlessParams& p) {
            return PulseSpec::confluent_family({pp, q, map}, p);
          },
          py::arg("p"), py::arg("q"), py::arg("map"), py::arg("params"))
      .def_property_readonly("kind",
                             [](const PulseSpec& s) { return std::string(to_string(s.kind())); })
      .def_property_readonly("params", &PulseSpec::params)
      .def("omega", &PulseSpec::omega)
      .def("omega_many", [](const PulseSpec& s, const std::vector<double>& taus) {
        std::vector<double> out;
        out.reserve(taus.size());
        for (double t : taus) out.push_back(s.omega(t));
        return out;
      });

  m.def("pulse_area", &pulses::pulse_area, py::arg("spec"), py::arg("tau_min"),
        py::arg("tau_max"), py::arg("tol") = 1e-12);

  py::class_<dynamics::IntegratorConfig>(m, "IntegratorConfig")
      .def(py::init([](double tau_min, double tau_max, std::size_t samples, double rel_tol,
                       double abs_tol) {
             dynamics::IntegratorConfig c;
             c.tau_min = tau_min;
             c.tau_max = tau_max;
             c.sample_count = samples;
             c.rel_tol = rel_tol;
             c.abs_tol = abs_tol;
             c.validate();
             return c;
           }),
           py::arg("tau_min") = -20.0, py::arg("tau_max") = 20.0, py::arg("samples") = 401,
           py::arg("rel_tol") = 1e-12, py::arg("abs_tol") = 1e-14)
      .def_readonly("tau_min", &dynamics::IntegratorConfig::tau_min)
      .def_readonly("tau_max", &dynamics::IntegratorConfig::tau_max)
      .def_readonly("samples", &dynamics::IntegratorConfig::sample_count);

  // Trajectories come back as dicts of equal-length lists.
  m.def("evolve_numeric", [](const PulseSpec& s, const dynamics::IntegratorConfig& c) {
    const auto tr = dynamics::evolve_numeric(s, c);
    std::vector<double> tau;
    std::vector<std::complex<double>> ca, cb;
    for (const auto& x : tr.samples) {
      tau.push_back(x.tau);
      ca.push_back(x.state.ca);
      cb.push_back(x.state.cb);
    }
    py::dict d;
    d["tau"] = tau;
    d["ca"] = ca;
    d["cb"] = cb;
    d["max_norm_defect"] = tr.max_norm_defect();
    return d;
  });
  m.def("analytic_trajectory", [](const PulseSpec& s, const std::vector<double>& taus) {
    const auto an = dynamics::analytic_trajectory(s, taus);
    std::vector<std::complex<double>> ca, cb;
    for (const auto& x : an) {
      ca.push_back(x.ca);
      cb.push_back(x.cb);
    }
    py::dict d;
    d["tau"] = taus;
    d["ca"] = ca;
    d["cb"] = cb;
    return d;
  });
  m.def("final_population", &dynamics::final_population);
  m.def("final_population_numeric", &dynamics::final_population_numeric);
  m.def("resonant_probability", &dynamics::resonant_probability);

  m.def("heun_local",
        [](std::complex<double> a, std::complex<double> b, std::complex<double> c,
           std::complex<double> q, std::complex<double> u, std::complex<double> v,
           std::complex<double> w, std::complex<double> z) {
          return specfun::heun_local(specfun::HeunParams(a, b, c, q, u, v, w), z).value;
        },
        py::arg("a"), py::arg("b"), py::arg("c"), py::arg("q"), py::arg("u"), py::arg("v"),
        py::arg("w"), py::arg("z"));
  m.def("hyp2f1",
        [](std::complex<double> a, std::complex<double> b, std::complex<double> c,
           std::complex<double> z) { return specfun::hyp2f1(a, b, c, z).value; });
  m.def("hyp2f1_at_one", &specfun::hyp2f1_at_one);

  py::class_<xuv::MediumParams>(m, "MediumParams")
      .def(py::init<>())
      .def_readwrite("number_density", &xuv::MediumParams::number_density)
      .def_readwrite("dipole_ab", &xuv::MediumParams::dipole_ab)
      .def_readwrite("length", &xuv::MediumParams::length)
      .def_readwrite("wavelength4", &xuv::MediumParams::wavelength4)
      .def_readwrite("rho_cb", &xuv::MediumParams::rho_cb)
      .def_readwrite("omega3_tau", &xuv::MediumParams::omega3_tau)
      .def_readwrite("pump_duration", &xuv::MediumParams::pump_duration)
      .def_readwrite("cross_section", &xuv::MediumParams::cross_section)
      .def_readwrite("rho_aa0", &xuv::MediumParams::rho_aa0)
      .def_readwrite("beam_area", &xuv::MediumParams::beam_area);
  m.def("estimate_preset", &xuv::estimate_preset);
  m.def("signal_rabi", [](const xuv::MediumParams& p) {
    const auto e = xuv::signal_rabi(p);
    py::dict d;
    d["omega4"] = e.omega4;
    d["field"] = e.field;
    d["intensity"] = e.intensity;
    d["pulse_energy"] = e.pulse_energy;
    d["coherence_lifetime"] = e.coherence_lifetime;
    return d;
  });
  m.def("theta_profile", [](double eta, double phi0, double z, double tau) {
    return xuv::theta_profile({eta, phi0}, z, tau);
  });

  m.def("verify", [] {
    py::gil_scoped_release release;
    return verify::run_all().to_json();
  });
}

#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include "heunpulse/dynamics.hpp"
#include "heunpulse/errors.hpp"
#include "heunpulse/pulses.hpp"
#include "heunpulse/verify.hpp"
#include "heunpulse/xuv.hpp"

namespace heunpulse::cli {

namespace {

using json = nlohmann::ordered_json;
using dynamics::IntegratorConfig;
using pulses::DimensionlessParams;
using pulses::PulseKind;
using pulses::PulseSpec;

constexpr const char* kTrajectoryHeader = "tau,omega,re_ca,im_ca,re_cb,im_cb,pa,pb";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Everything a pulse-driven command needs.
struct PulseOptions {
  std::string kind = "sech";
  double gamma = 0.25;
  double beta = 0.0;
  double alpha = 1.0;
  std::optional<double> omega0, detuning;
  double delta = 2.0;
  double t0 = 100.0;
  double ab = 0.0, q = -0.125, c = 2.0, p = 0.125, mu = 1.0, lambda = 0.0;

  PulseSpec build() const {
    const auto k = pulses::parse_pulse_kind(kind);
    if (!k) throw UsageError("unknown pulse kind '" + kind + "'");
    DimensionlessParams prm{alpha, beta, gamma};
    if (omega0 || detuning) {
      if (!omega0 || !detuning) throw UsageError("--omega0 and --detuning go together");
      prm = DimensionlessParams::from_physical(*omega0, alpha, *detuning);
    }
    prm.validate();
    switch (*k) {
      case PulseKind::heun_family:
        return PulseSpec::heun_family({ab, q, c, pulses::PhaseMap(mu, lambda)}, prm);
      case PulseKind::confluent_family:
        return PulseSpec::confluent_family({p, q, pulses::PhaseMap(mu, lambda)}, prm);
      case PulseKind::sech: return PulseSpec::sech(prm);
      case PulseKind::omega_delta: return PulseSpec::omega_delta(delta, prm);
      case PulseKind::omega_one: return PulseSpec::omega_one(prm);
      case PulseKind::omega_plus: return PulseSpec::omega_plus(prm);
      case PulseKind::omega_minus: return PulseSpec::omega_minus(prm);
      case PulseKind::box: return PulseSpec::box(t0, prm);
      case PulseKind::smooth_box: return PulseSpec::smooth_box(delta, prm);
    }
    throw UsageError("unhandled pulse kind");
  }
};

struct GridOptions {
  double tau_min = -20.0;
  double tau_max = 20.0;
  std::size_t samples = 401;
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;

  IntegratorConfig config() const {
    IntegratorConfig c;
    c.tau_min = tau_min;
    c.tau_max = tau_max;
    c.sample_count = samples;
    c.rel_tol = rel_tol;
    c.abs_tol = abs_tol;
    c.validate();
    return c;
  }
};

struct OutputOptions {
  std::string path;

  // Empty path: $HEUNPULSE_OUTPUT_DIR/<default_name> if the variable is set,
  // standard output otherwise. Relative paths land in that directory too.
  void write(const std::string& default_name, const std::string& text) const {
    const char* env = std::getenv("HEUNPULSE_OUTPUT_DIR");
    std::filesystem::path target;
    if (!path.empty()) {
      target = path;
      if (target.is_relative() && env && *env) target = std::filesystem::path(env) / target;
    } else if (env && *env) {
      target = std::filesystem::path(env) / default_name;
    } else {
      std::cout << text;
      std::cout.flush();
      return;
    }
    if (target.has_parent_path()) {
      std::error_code ec;
      std::filesystem::create_directories(target.parent_path(), ec);
    }
    std::ofstream out(target, std::ios::binary);
    if (!out) throw UsageError("cannot open '" + target.string() + "' for writing");
    out << text;
    out.close();
    if (!out) throw UsageError("failed writing '" + target.string() + "'");
  }
};

void add_pulse_options(CLI::App* app, PulseOptions& o) {
  app->add_option("--kind", o.kind, "sech, omega-delta, omega-one, omega-plus, omega-minus, box, "
                                    "smooth-box, heun-family, confluent-family");
  app->add_option("--gamma", o.gamma, "Omega0 / alpha");
  app->add_option("--beta", o.beta, "Delta / alpha");
  app->add_option("--alpha", o.alpha, "time scale (reference-frequency units)");
  app->add_option("--omega0", o.omega0, "peak Rabi frequency in reference-frequency units");
  app->add_option("--detuning", o.detuning, "detuning in reference-frequency units");
  app->add_option("--delta-param", o.delta, "delta of omega-delta / smooth-box");
  app->add_option("--t0", o.t0, "box duration (physical time)");
  app->add_option("--ab", o.ab, "Heun family ab");
  app->add_option("--q", o.q, "family q");
  app->add_option("--c", o.c, "Heun family c");
  app->add_option("--p", o.p, "confluent family p");
  app->add_option("--mu", o.mu, "phase map mu");
  app->add_option("--lambda", o.lambda, "phase map lambda");
}

void add_grid_options(CLI::App* app, GridOptions& g) {
  app->add_option("--tau-min", g.tau_min);
  app->add_option("--tau-max", g.tau_max);
  app->add_option("--samples", g.samples);
  app->add_option("--rel-tol", g.rel_tol);
  app->add_option("--abs-tol", g.abs_tol);
}

void add_output_option(CLI::App* app, OutputOptions& o) {
  app->add_option("-o,--output", o.path, "output file (default: stdout or $HEUNPULSE_OUTPUT_DIR)");
}

std::string trajectory_csv(const PulseSpec& spec, const std::vector<double>& taus,
                           const std::vector<std::complex<double>>& ca,
                           const std::vector<std::complex<double>>& cb) {
  std::string out = std::string(kTrajectoryHeader) + "\n";
  for (std::size_t i = 0; i < taus.size(); ++i) {
    out += csv_row({taus[i], spec.omega(taus[i]), ca[i].real(), ca[i].imag(), cb[i].real(),
                    cb[i].imag(), std::norm(ca[i]), std::norm(cb[i])});
    out += '\n';
  }
  return out;
}

std::string cmd_pulse(const PulseOptions& po, const GridOptions& go) {
  const PulseSpec spec = po.build();
  std::string out = "tau,omega\n";
  for (double t : dynamics::sample_grid(go.config())) out += csv_row({t, spec.omega(t)}) + "\n";
  return out;
}

std::string cmd_evolve(const PulseOptions& po, const GridOptions& go) {
  const PulseSpec spec = po.build();
  const auto tr = dynamics::evolve_numeric(spec, go.config());
  std::vector<double> taus;
  std::vector<std::complex<double>> ca, cb;
  for (const auto& s : tr.samples) {
    taus.push_back(s.tau);
    ca.push_back(s.state.ca);
    cb.push_back(s.state.cb);
  }
  return trajectory_csv(spec, taus, ca, cb);
}

std::string cmd_analytic(const PulseOptions& po, const GridOptions& go) {
  const PulseSpec spec = po.build();
  const auto taus = dynamics::sample_grid(go.config());
  const auto an = dynamics::analytic_trajectory(spec, taus);
  std::vector<std::complex<double>> ca, cb;
  for (const auto& s : an) {
    ca.push_back(s.ca);
    cb.push_back(s.cb);
  }
  return trajectory_csv(spec, taus, ca, cb);
}

std::string cmd_compare(const PulseOptions& po, const GridOptions& go) {
  const PulseSpec spec = po.build();
  const auto cfg = go.config();
  const auto num = dynamics::evolve_numeric(spec, cfg);
  std::vector<double> taus;
  for (const auto& s : num.samples) taus.push_back(s.tau);
  const auto an = dynamics::analytic_trajectory(spec, taus);
  std::string out = "tau,omega,re_ca_analytic,im_ca_analytic,re_ca_numeric,im_ca_numeric,abs_diff\n";
  double worst = 0.0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const auto a = an[i].ca, n = num.samples[i].state.ca;
    const double d = std::abs(a - n);
    worst = std::max(worst, d);
    out += csv_row({taus[i], spec.omega(taus[i]), a.real(), a.imag(), n.real(), n.imag(), d});
    out += '\n';
  }
  std::cerr << "max |analytic - numeric| = " << format_number(worst) << "\n";
  return out;
}

std::string cmd_final(const PulseOptions& po, const GridOptions& go) {
  const PulseSpec spec = po.build();
  const auto cfg = go.config();
  const auto tr = dynamics::evolve_numeric(spec, cfg);
  json j;
  j["kind"] = std::string(pulses::to_string(spec.kind()));
  j["gamma"] = spec.params().gamma;
  j["beta"] = spec.params().beta;
  j["tau_max"] = cfg.tau_max;
  j["population_numeric"] = tr.final_state().pa();
  j["coherence_numeric"] = std::abs(tr.final_state().ca * tr.final_state().cb);
  try {
    j["population_analytic"] = dynamics::final_population(spec);
  } catch (const UnsupportedError&) {
    j["population_analytic"] = nullptr;
  } catch (const DivergenceError&) {
    j["population_analytic"] = nullptr;
  }
  return j.dump(2) + "\n";
}

struct SweepOptions {
  std::string param = "gamma";
  double from = 0.1, to = 1.0;
  std::size_t steps = 10;
  unsigned jobs = 0;
};

std::string cmd_sweep(const PulseOptions& po, const GridOptions& go, const SweepOptions& so) {
  if (so.steps < 1) throw UsageError("--steps must be >= 1");
  if (so.param != "gamma" && so.param != "beta" && so.param != "delta-param") {
    throw UsageError("--param must be gamma, beta or delta-param");
  }
  const auto cfg = go.config();
  po.build();  // validates the base point before spawning work

  struct Row {
    double value = 0.0, numeric = 0.0, analytic = std::numeric_limits<double>::quiet_NaN();
    std::exception_ptr error;
  };
  std::vector<Row> rows(so.steps);
  auto value_at = [&](std::size_t i) {
    return so.steps == 1 ? so.from
                         : so.from + (so.to - so.from) * static_cast<double>(i) /
                                         static_cast<double>(so.steps - 1);
  };
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < rows.size();) {
      Row& r = rows[i];
      r.value = value_at(i);
      try {
        PulseOptions p = po;
        if (so.param == "gamma") p.gamma = r.value;
        else if (so.param == "beta") p.beta = r.value;
        else p.delta = r.value;
        const PulseSpec spec = p.build();
        r.numeric = dynamics::final_population_numeric(spec, cfg);
        try {
          r.analytic = dynamics::final_population(spec);
        } catch (const UnsupportedError&) {
        } catch (const DivergenceError&) {
        }
      } catch (...) {
        r.error = std::current_exception();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned n = std::min<unsigned>(so.jobs ? so.jobs : hw, static_cast<unsigned>(rows.size()));
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::string out = "index," + so.param + ",population_numeric,population_analytic\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].error) std::rethrow_exception(rows[i].error);
    out += std::to_string(i) + "," +
           csv_row({rows[i].value, rows[i].numeric, rows[i].analytic}) + "\n";
  }
  return out;
}

struct XuvOptions {
  std::string preset;
  xuv::MediumParams m;
  std::size_t scan_points = 31;
  double density_lo = xuv::kPresetDensityLo, density_hi = xuv::kPresetDensityHi;
  double omega3_tau_lo = xuv::kPresetOmega3TauLo, omega3_tau_hi = xuv::kPresetOmega3TauHi;
};

std::string cmd_xuv(const XuvOptions& xo) {
  xuv::MediumParams m = xo.m;
  if (!xo.preset.empty()) {
    if (xo.preset != "paper-sec5") throw UsageError("unknown preset '" + xo.preset + "'");
    m = xuv::estimate_preset();
  }
  m.validate();
  const auto est = xuv::signal_rabi(m);
  const auto br = xuv::scan_energy(m, xo.density_lo, xo.density_hi, xo.omega3_tau_lo,
                                   xo.omega3_tau_hi, xo.scan_points);
  const double z = m.length;
  const double tp = xuv::pulse_duration(m, z, xuv::kHydrogen2pDecayRate);
  const auto pe = xuv::pulse_power_and_energy(m, z, xuv::kHydrogen2pDecayRate, m.effective_area(),
                                              xuv::angular_frequency_of_wavelength(m.wavelength4));
  constexpr double lo = 1e-8, hi = 1e-6;

  json j;
  j["schema_version"] = 1;
  j["preset"] = xo.preset.empty() ? json(nullptr) : json(xo.preset);
  j["medium"] = {{"number_density_cm3", m.number_density}, {"dipole_debye", m.dipole_ab},
                 {"length_cm", m.length},                 {"wavelength_cm", m.wavelength4},
                 {"rho_cb", m.rho_cb},                    {"omega3_tau", m.omega3_tau},
                 {"pump_duration_s", m.pump_duration},    {"cross_section_cm2", m.cross_section},
                 {"rho_aa0", m.rho_aa0},                  {"beam_area_cm2", m.effective_area()}};
  j["estimate"] = {{"omega4_rad_s", est.omega4},
                   {"field_v_m", est.field},
                   {"intensity_w_m2", est.intensity},
                   {"pulse_energy_j", est.pulse_energy},
                   {"coherence_lifetime_s", est.coherence_lifetime}};
  j["energy_bracket"] = {{"min_j", br.min_energy},
                         {"max_j", br.max_energy},
                         {"density_at_min_cm3", br.density_at_min},
                         {"omega3_tau_at_min", br.omega3_tau_at_min},
                         {"density_at_max_cm3", br.density_at_max},
                         {"omega3_tau_at_max", br.omega3_tau_at_max},
                         {"points", br.points},
                         {"reference_j", {lo, hi}},
                         {"overlaps_reference", br.min_energy <= hi && br.max_energy >= lo}};
  j["superradiance"] = {{"decay_rate_s", xuv::kHydrogen2pDecayRate},
                        {"pulse_duration_s", tp},
                        {"energy_j", pe.energy},
                        {"power_w", pe.power}};
  return j.dump(2) + "\n";
}

struct PropagateOptions {
  double eta = 1.0;
  double rho_aa0 = 0.01;
  std::optional<double> phi0;
  double z_max = 3.0, tau_max = 20.0;
  std::size_t nz = 31, ntau = 201;
};

std::string cmd_propagate(const PropagateOptions& o) {
  const xuv::EmissionSolution sol{o.eta, o.phi0 ? *o.phi0 : xuv::tipping_angle(o.rho_aa0)};
  sol.validate();
  if (o.nz < 2 || o.ntau < 2) throw UsageError("--nz and --ntau must be >= 2");
  std::string out = "z,tau,theta,omega\n";
  for (const auto& s : xuv::emission_grid(sol, o.z_max, o.tau_max, o.nz, o.ntau)) {
    out += csv_row({s.z, s.tau, s.theta, s.omega}) + "\n";
  }
  return out;
}

}  // namespace

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_row(const std::vector<double>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += format_number(fields[i]);
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Exact two-level dynamics under Heun-type pulses"};
  app.name("heunpulse");
  app.require_subcommand(1);

  PulseOptions po;
  GridOptions go;
  OutputOptions oo;
  SweepOptions so;
  XuvOptions xo;
  PropagateOptions pr;
  bool quiet = false;

  auto* pulse = app.add_subcommand("pulse", "tabulate Omega(tau) as CSV (tau,omega)");
  auto* evolve = app.add_subcommand("evolve", "numeric amplitudes as CSV");
  auto* analytic = app.add_subcommand("analytic", "exact amplitudes as CSV");
  auto* compare = app.add_subcommand("compare", "analytic vs numeric Ca with |difference|");
  auto* final = app.add_subcommand("final", "final populations as JSON");
  auto* sweep = app.add_subcommand("sweep", "final population over a parameter range");
  for (auto* s : {pulse, evolve, analytic, compare, final, sweep}) {
    add_pulse_options(s, po);
    add_grid_options(s, go);
    add_output_option(s, oo);
  }
  sweep->add_option("--param", so.param, "gamma, beta or delta-param");
  sweep->add_option("--from", so.from);
  sweep->add_option("--to", so.to);
  sweep->add_option("--steps", so.steps);
  sweep->add_option("--jobs", so.jobs, "worker threads (0: hardware concurrency)");

  auto* x = app.add_subcommand("xuv", "XUV signal estimate as JSON");
  x->add_option("--preset", xo.preset, "paper-sec5");
  x->add_option("--density", xo.m.number_density, "cm^-3");
  x->add_option("--dipole", xo.m.dipole_ab, "Debye");
  x->add_option("--length", xo.m.length, "cm");
  x->add_option("--wavelength", xo.m.wavelength4, "cm");
  x->add_option("--rho-cb", xo.m.rho_cb);
  x->add_option("--omega3-tau", xo.m.omega3_tau);
  x->add_option("--pump-duration", xo.m.pump_duration, "s");
  x->add_option("--cross-section", xo.m.cross_section, "cm^2");
  x->add_option("--rho-aa0", xo.m.rho_aa0);
  x->add_option("--beam-area", xo.m.beam_area, "cm^2 (0: length^2)");
  x->add_option("--scan-points", xo.scan_points);
  x->add_option("--density-lo", xo.density_lo);
  x->add_option("--density-hi", xo.density_hi);
  x->add_option("--omega3-tau-lo", xo.omega3_tau_lo);
  x->add_option("--omega3-tau-hi", xo.omega3_tau_hi);
  add_output_option(x, oo);

  auto* prop = app.add_subcommand("propagate", "emission profile theta(z, tau) as CSV");
  prop->add_option("--eta", pr.eta);
  prop->add_option("--rho-aa0", pr.rho_aa0);
  prop->add_option("--phi0", pr.phi0, "overrides 2 sqrt(rho_aa0)");
  prop->add_option("--z-max", pr.z_max);
  prop->add_option("--tau-max", pr.tau_max);
  prop->add_option("--nz", pr.nz);
  prop->add_option("--ntau", pr.ntau);
  add_output_option(prop, oo);

  auto* ver = app.add_subcommand("verify", "run the acceptance checks; JSON report");
  ver->add_flag("-q,--quiet", quiet, "no per-check lines on stderr");
  add_output_option(ver, oo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "heunpulse: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*pulse) oo.write("pulse.csv", cmd_pulse(po, go));
    else if (*evolve) oo.write("evolve.csv", cmd_evolve(po, go));
    else if (*analytic) oo.write("analytic.csv", cmd_analytic(po, go));
    else if (*compare) oo.write("compare.csv", cmd_compare(po, go));
    else if (*final) oo.write("final.json", cmd_final(po, go));
    else if (*sweep) oo.write("sweep.csv", cmd_sweep(po, go, so));
    else if (*x) oo.write("xuv.json", cmd_xuv(xo));
    else if (*prop) oo.write("propagate.csv", cmd_propagate(pr));
    else if (*ver) {
      const auto rep = verify::run_all();
      if (!quiet) {
        for (const auto& c : rep.checks) std::cerr << verify::format_line(c) << "\n";
      }
      oo.write("verify.json", rep.to_json() + "\n");
      return rep.overall() ? kSuccess : kVerification;
    }
    return kSuccess;
  } catch (const UsageError& e) {
    std::cerr << "heunpulse: " << e.what() << "\n";
    return kUsage;
  } catch (const PoleError& e) {
    std::cerr << "heunpulse: numerical failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const DivergenceError& e) {
    std::cerr << "heunpulse: numerical failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const DomainError& e) {
    std::cerr << "heunpulse: invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const UnsupportedError& e) {
    std::cerr << "heunpulse: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "heunpulse: numerical failure: " << e.what() << "\n";
    return kNumeric;
  }
}

}  // namespace heunpulse::cli

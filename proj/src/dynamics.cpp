#include "heunpulse/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "heunpulse/errors.hpp"

namespace heunpulse::dynamics {

namespace {

constexpr cplx kI(0.0, 1.0);

// Sorted segment boundaries [tau_min, breakpoints..., tau_max].
std::vector<double> segments(const pulses::PulseSpec& spec, double a, double b) {
  std::vector<double> cuts{a};
  for (double t : spec.breakpoints()) {
    if (t > a && t < b) cuts.push_back(t);
  }
  cuts.push_back(b);
  return cuts;
}

// Omega evaluated just inside [a, b] so stage evaluations at a boundary see the
// envelope of the segment being integrated.
double omega_in(const pulses::PulseSpec& spec, double t, double a, double b) {
  const double ea = 1e-12 * std::max(1.0, std::abs(a));
  const double eb = 1e-12 * std::max(1.0, std::abs(b));
  return spec.omega(std::clamp(t, a + ea, b - eb));
}

ode::Tolerances tolerances(const IntegratorConfig& c) {
  ode::Tolerances t;
  t.rel_tol = c.rel_tol;
  t.abs_tol = c.abs_tol;
  t.max_steps = c.max_steps;
  return t;
}

}  // namespace

void IntegratorConfig::validate() const {
  auto in_range = [](double x) { return x >= 1e-14 && x <= 1e-3; };
  if (!in_range(rel_tol) || !in_range(abs_tol)) {
    throw DomainError("IntegratorConfig: rel_tol and abs_tol must lie in [1e-14, 1e-3]");
  }
  if (!(tau_min < tau_max) || !std::isfinite(tau_min) || !std::isfinite(tau_max)) {
    throw DomainError("IntegratorConfig: need finite tau_min < tau_max");
  }
  if (sample_count < 2) throw DomainError("IntegratorConfig: sample_count must be >= 2");
  if (max_steps == 0) throw DomainError("IntegratorConfig: max_steps must be > 0");
}

std::vector<double> sample_grid(const IntegratorConfig& c) {
  std::vector<double> g(c.sample_count);
  const double span = c.tau_max - c.tau_min;
  for (std::size_t i = 0; i < c.sample_count; ++i) {
    g[i] = c.tau_min + span * static_cast<double>(i) / static_cast<double>(c.sample_count - 1);
  }
  g.back() = c.tau_max;
  return g;
}

double Trajectory::max_norm_defect() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, std::abs(s.state.norm_defect()));
  return m;
}

Trajectory evolve_numeric(const pulses::PulseSpec& spec, const IntegratorConfig& config) {
  config.validate();
  return evolve_numeric(spec, config, sample_grid(config));
}

Trajectory evolve_numeric(const pulses::PulseSpec& spec, const IntegratorConfig& config,
                          const std::vector<double>& taus) {
  config.validate();
  if (taus.empty()) throw DomainError("evolve_numeric: empty sample grid");
  if (!std::is_sorted(taus.begin(), taus.end()) ||
      std::adjacent_find(taus.begin(), taus.end()) != taus.end()) {
    throw DomainError("evolve_numeric: sample times must be strictly increasing");
  }
  if (taus.front() < config.tau_min) {
    throw DomainError("evolve_numeric: samples before tau_min");
  }

  const double beta = spec.params().beta;
  Trajectory traj{{}, spec, config, {}};
  traj.samples.reserve(taus.size());

  ode::State<2> y{cplx(0.0), cplx(1.0)};
  const auto cuts = segments(spec, config.tau_min, std::max(config.tau_max, taus.back()));
  const ode::Tolerances tol = tolerances(config);

  std::size_t next = 0;
  while (next < taus.size() && taus[next] == config.tau_min) {
    traj.samples.push_back({taus[next], {y[0], y[1]}});
    ++next;
  }

  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    std::vector<double> outs;
    while (next < taus.size() && taus[next] <= b) outs.push_back(taus[next++]);
    const bool end_is_sample = !outs.empty() && outs.back() == b;
    if (!end_is_sample) outs.push_back(b);

    auto rhs = [&](double t, const ode::State<2>& st) {
      const double om = omega_in(spec, t, a, b);
      const cplx ph = std::polar(1.0, beta * t);
      return ode::State<2>{kI * om * ph * st[1], kI * om * std::conj(ph) * st[0]};
    };
    std::size_t seen = 0;
    const std::size_t n_samples = end_is_sample ? outs.size() : outs.size() - 1;
    try {
      const ode::Stats st = ode::integrate<2>(
          rhs, a, y, outs, tol, [&](double t, const ode::State<2>& v, const ode::State<2>&) {
            if (seen < n_samples) traj.samples.push_back({t, {v[0], v[1]}});
            ++seen;
            y = v;
          });
      traj.stats.accepted += st.accepted;
      traj.stats.rejected += st.rejected;
      traj.stats.evaluations += st.evaluations;
    } catch (const IntegrationError& e) {
      std::ostringstream os;
      os << "evolve_numeric: " << e.what() << " (" << traj.samples.size()
         << " samples recorded)";
      throw IntegrationError(os.str(), e.reached());
    }
  }
  return traj;
}

std::vector<RiccatiSample> evolve_riccati(const pulses::PulseSpec& spec,
                                          const IntegratorConfig& config) {
  config.validate();
  const double beta = spec.params().beta;
  const std::vector<double> grid = sample_grid(config);
  const auto cuts = segments(spec, config.tau_min, config.tau_max);
  const ode::Tolerances tol = tolerances(config);

  // Chunk so the variable switch is checked often enough.
  constexpr double kChunk = 0.05;
  std::vector<double> stops;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const auto n = static_cast<std::size_t>(std::ceil((b - a) / kChunk));
    for (std::size_t k = 1; k <= n; ++k) stops.push_back(k == n ? b : a + (b - a) * k / n);
  }
  for (double g : grid) stops.push_back(g);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  stops.erase(std::remove_if(stops.begin(), stops.end(),
                             [&](double t) { return t <= config.tau_min; }),
              stops.end());

  std::vector<RiccatiSample> out;
  out.reserve(grid.size());
  std::size_t gi = 0;

  bool inverted = false;  // false: f = Ca/Cb, true: g = Cb/Ca
  cplx val = 0.0;
  double t = config.tau_min;
  auto magnitude = [&]() {
    const double m = std::abs(val);
    return inverted ? 1.0 / std::sqrt(1.0 + m * m) : m / std::sqrt(1.0 + m * m);
  };
  if (grid[gi] == t) out.push_back({grid[gi++], magnitude()});

  std::size_t seg = 0;
  for (double stop : stops) {
    while (seg + 2 < cuts.size() && t >= cuts[seg + 1]) ++seg;
    const double a = cuts[seg], b = cuts[seg + 1];
    auto rhs = [&](double tt, const ode::State<1>& st) {
      const double om = omega_in(spec, tt, a, b);
      const cplx ph = std::polar(1.0, beta * tt);
      const cplx x = st[0];
      // f' = i Om e^{i b t} - i Om e^{-i b t} f^2 ; g' = i Om e^{-i b t} - i Om e^{i b t} g^2
      return inverted ? ode::State<1>{kI * om * std::conj(ph) - kI * om * ph * x * x}
                      : ode::State<1>{kI * om * ph - kI * om * std::conj(ph) * x * x};
    };
    const std::vector<double> target{stop};
    ode::integrate<1>(rhs, t, ode::State<1>{val}, target, tol,
                      [&](double, const ode::State<1>& v, const ode::State<1>&) {
                        val = v[0];
                      });
    t = stop;
    if (!std::isfinite(val.real()) || !std::isfinite(val.imag())) {
      throw IntegrationError("evolve_riccati: overflow of the Riccati variable", t);
    }
    if (gi < grid.size() && grid[gi] == t) out.push_back({grid[gi++], magnitude()});
    if (std::abs(val) > 10.0) {
      val = 1.0 / val;
      inverted = !inverted;
    }
  }
  return out;
}

double resonant_probability(double area) {
  if (!(area >= 0.0)) throw DomainError("resonant_probability: area must be >= 0");
  const double s = std::sin(0.5 * area);
  return s * s;
}

double final_population_numeric(const pulses::PulseSpec& spec, const IntegratorConfig& config) {
  IntegratorConfig c = config;
  c.sample_count = 2;
  return evolve_numeric(spec, c).final_state().pa();
}

}  // namespace heunpulse::dynamics

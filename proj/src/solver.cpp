#include "bmild/solver.hpp"

#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

#include "bmild/bilinear.hpp"
#include "bmild/spectral.hpp"

namespace bmild {

std::string to_string(InitialIterate v) {
  switch (v) {
    case InitialIterate::linear_flow: return "linear_flow";
    case InitialIterate::zero: return "zero";
    case InitialIterate::perturbed: return "perturbed";
  }
  return "unknown";
}

InitialIterate parse_initial_iterate(const std::string& name) {
  if (name == "linear_flow") return InitialIterate::linear_flow;
  if (name == "zero") return InitialIterate::zero;
  if (name == "perturbed") return InitialIterate::perturbed;
  throw ConfigError("unknown initial iterate '" + name +
                    "' (expected linear_flow, zero or perturbed)");
}

std::size_t SolveConfig::steps() const {
  const double m = horizon / dt;
  const double r = std::round(m);
  if (!(std::abs(m - r) <= 1e-9 * std::max(1.0, r))) {
    throw ConfigError("horizon T must be an integer multiple of dt");
  }
  return static_cast<std::size_t>(r);
}

void validate(const SolveConfig& cfg) {
  if (!(cfg.horizon > 0.0)) throw ConfigError("horizon T must be positive");
  if (!(cfg.dt > 0.0)) throw ConfigError("time step dt must be positive");
  if (cfg.steps() < 2) throw ConfigError("T/dt must be at least 2");
  if (!(cfg.p > 3.0)) throw ConfigError("exponent p must satisfy p > 3");
  if (!(cfg.q > 1.5 && cfg.q < 3.0)) throw ConfigError("exponent q must satisfy 3/2 < q < 3");
  if (!(1.0 / cfg.p + 1.0 / cfg.q > 2.0 / 3.0)) {
    throw ConfigError("exponents must satisfy 1/p + 1/q > 2/3");
  }
  if (cfg.max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (!(cfg.eps_fix > 0.0)) throw ConfigError("eps_fix must be positive");
  if (!(cfg.perturbation >= 0.0)) throw ConfigError("perturbation must be >= 0");
  if (cfg.reference_substeps < 1) throw ConfigError("reference_substeps must be >= 1");
}

std::string PicardReport::smallness_verdict() const {
  std::ostringstream os;
  os.precision(6);
  os << "||v0||_E = " << v0_norm << ", empirical C0 = " << c0 << " (" << c0_samples
     << " random pairs), 1/(4 C0) = " << (c0 > 0.0 ? 0.25 / c0 : kInf) << ": smallness "
     << (smallness_holds ? "holds" : "does not hold");
  return os.str();
}

Trajectory add(const Trajectory& a, const Trajectory& b, double factor) {
  require_same_time_grid(a, b, "trajectory sum");
  Trajectory out{a.grid, a.dt, a.start_time, {}, {}};
  out.u.reserve(a.size());
  out.theta.reserve(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    VectorField u = to_spectral(a.u[j]);
    u.add_scaled(factor, to_spectral(b.u[j]));
    u.divergence_free = a.u[j].divergence_free && b.u[j].divergence_free;
    ScalarField th = to_spectral(a.theta[j]);
    th.add_scaled(factor, to_spectral(b.theta[j]));
    out.u.push_back(std::move(u));
    out.theta.push_back(std::move(th));
  }
  return out;
}

namespace {

Trajectory perturbed_iterate(const Trajectory& v0, double size, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const Grid3& g = v0.grid;
  RandomTrajectoryOptions opts;
  opts.min_width = 2.0 * g.dx();
  opts.max_width = std::max(opts.min_width, g.box_length() / 8.0);
  const Trajectory noise = random_heat_trajectory(g, v0.horizon(), v0.steps(), rng, opts);
  const double scale = e_norm(noise, 4.0, 2.0);
  const double base = e_norm(v0, 4.0, 2.0);
  if (scale == 0.0) return v0;
  return add(v0, noise, size * (base > 0.0 ? base : 1.0) / scale);
}


}  // namespace

Solution picard_solve(const VectorField& u0, const ScalarField& theta0, const SolveConfig& cfg) {
  validate(cfg);
  require_same_grid(u0.grid(), theta0.grid(), "picard_solve");
  const Grid3& g = u0.grid();
  if ((cfg.n != 0 && cfg.n != g.n()) || (cfg.box_length != 0.0 && cfg.box_length != g.box_length())) {
    throw FieldMismatch("picard_solve: data grid differs from the configured grid");
  }
  const std::size_t m = cfg.steps();
  const Trajectory v0 = linear_flow_trajectory(u0, theta0, cfg.dt, m);

  PicardReport report;
  report.quadrature = cfg.quadrature;
  report.initial_iterate = cfg.initial_iterate;
  report.p = cfg.p;
  report.q = cfg.q;
  report.v0_norm = e_norm(v0, cfg.p, cfg.q);
  report.c0_samples = cfg.c0_samples;
  if (report.v0_norm > 0.0 || cfg.c0_samples > 0) {
    RandomTrajectoryOptions opts;
    opts.min_width = 2.0 * g.dx();
    opts.max_width = std::max(opts.min_width, g.box_length() / 8.0);
    report.c0 = measure_pair_constant(g, cfg.horizon, m, cfg.p, cfg.q, cfg.c0_samples, cfg.seed,
                                      {&v0}, cfg.quadrature, opts);
  }
  report.smallness_holds = report.c0 == 0.0 || report.v0_norm < 0.25 / report.c0;

  Trajectory v = v0;
  if (cfg.initial_iterate == InitialIterate::zero) {
    v = to_spectral(zero_trajectory(g, cfg.dt, m));
  } else if (cfg.initial_iterate == InitialIterate::perturbed) {
    v = perturbed_iterate(v0, cfg.perturbation, cfg.seed);
  }

  double previous = 0.0;
  int increases = 0;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    const PairOperatorResult b = pair_operator(v, v, cfg.quadrature);
    Trajectory next{g, cfg.dt, 0.0, {}, {}};
    next.u.reserve(v0.size());
    next.theta.reserve(v0.size());
    for (std::size_t j = 0; j < v0.size(); ++j) {
      VectorField u = v0.u[j] + b.u[j];
      u.divergence_free = true;
      next.u.push_back(std::move(u));
      next.theta.push_back(v0.theta[j] + b.theta[j]);
    }
    const double residual = e_norm(add(next, v, -1.0), cfg.p, cfg.q);
    PicardIteration rec;
    rec.index = it;
    rec.residual = residual;
    rec.ratio = it == 1 || previous == 0.0 ? 0.0 : residual / previous;
    rec.norm = e_norm(next, cfg.p, cfg.q);
    report.iterations.push_back(rec);
    if (!std::isfinite(residual) || !std::isfinite(rec.norm)) {
      throw BlowUp("blow-up at iteration " + std::to_string(it), report);
    }
    if (it > 1) report.max_ratio = std::max(report.max_ratio, rec.ratio);
    increases = (it > 1 && residual > previous) ? increases + 1 : 0;
    v = std::move(next);
    if (residual <= cfg.eps_fix) {
      report.converged = true;
      break;
    }
    if (increases >= 3) {
      report.solution_norm = rec.norm;
      throw ContractionFailed("contraction failed: residual increased over 3 consecutive "
                              "iterations; " + report.smallness_verdict(),
                              report);
    }
    previous = residual;
  }
  report.solution_norm = report.iterations.back().norm;
  report.bound_holds = report.solution_norm <= 2.0 * report.v0_norm + cfg.eps_fix;
  return {std::move(v), std::move(report)};
}

namespace {

struct Tendency {
  VectorField u;
  ScalarField theta;
};

Tendency nonlinear(const VectorField& u, const ScalarField& theta, bool buoyancy) {
  const auto ub = band_velocity(u);
  const ScalarField tb = band_limited_samples(theta);
  Tendency out{projected_advection(ub, ub), flux_divergence(ub, tb)};
  out.u *= -1.0;
  out.theta *= -1.0;
  if (buoyancy) {
    VectorField b(u.grid(), Representation::spectral);
    b[2] = to_spectral(theta);
    out.u += leray_project(b);
  }
  return out;
}

}  // namespace

Trajectory solve_pde_reference(const VectorField& u0, const ScalarField& theta0,
                               const SolveConfig& cfg) {
  validate(cfg);
  require_same_grid(u0.grid(), theta0.grid(), "solve_pde_reference");
  const Grid3& g = u0.grid();
  const std::size_t m = cfg.steps();
  const double h = cfg.dt / cfg.reference_substeps;
  VectorField u = to_spectral(ensure_solenoidal(u0));
  ScalarField th = to_spectral(theta0);
  std::vector<VectorField> us{u};
  std::vector<ScalarField> ths{th};
  bool warned = false;
  for (std::size_t j = 0; j < m; ++j) {
    for (int sub = 0; sub < cfg.reference_substeps; ++sub) {
      const double cfl = lp_norm(u, kInf) * h / g.dx();
      if (cfl > 0.5 && !warned) {
        std::clog << "warning: CFL number " << cfl << " exceeds 0.5 in the reference stepper\n";
        warned = true;
      }
      // Lawson RK4 in the variable e^{-t Lap} v.
      const Tendency a = nonlinear(u, th, cfg.buoyancy);
      const VectorField uh = heat_semigroup(u, 0.5 * h);
      const ScalarField thh = heat_semigroup(th, 0.5 * h);
      const Tendency b = nonlinear(heat_semigroup(u + (0.5 * h) * a.u, 0.5 * h),
                                   heat_semigroup(th + (0.5 * h) * a.theta, 0.5 * h), cfg.buoyancy);
      const Tendency c = nonlinear(uh + (0.5 * h) * b.u, thh + (0.5 * h) * b.theta, cfg.buoyancy);
      const Tendency d =
          nonlinear(heat_semigroup(u, h) + h * heat_semigroup(c.u, 0.5 * h),
                    heat_semigroup(th, h) + h * heat_semigroup(c.theta, 0.5 * h), cfg.buoyancy);
      VectorField un = heat_semigroup(u + (h / 6.0) * a.u, h);
      un += heat_semigroup((h / 3.0) * (b.u + c.u), 0.5 * h);
      un.add_scaled(h / 6.0, d.u);
      ScalarField tn = heat_semigroup(th + (h / 6.0) * a.theta, h);
      tn += heat_semigroup((h / 3.0) * (b.theta + c.theta), 0.5 * h);
      tn.add_scaled(h / 6.0, d.theta);
      u = std::move(un);
      u.divergence_free = true;
      th = std::move(tn);
    }
    us.push_back(u);
    ths.push_back(th);
  }
  return make_trajectory(g, cfg.dt, std::move(us), std::move(ths));
}

SolveConfig restart_config(const SolveConfig& cfg, double delta) {
  if (!(delta > 0.0)) throw ConfigError("semigroup step requires delta > 0");
  SolveConfig out = cfg;
  const double steps = std::max(2.0, std::round(delta / cfg.dt));
  out.horizon = delta;
  out.dt = delta / steps;
  return out;
}

FlowState state_at(const Trajectory& traj, std::size_t j) {
  if (j >= traj.size()) throw ConfigError("state index beyond the trajectory");
  return {traj.u[j], traj.theta[j]};
}

FlowState semigroup_step(const FlowState& state, double delta, const SolveConfig& cfg) {
  const Solution s = picard_solve(state.u, state.theta, restart_config(cfg, delta));
  if (!s.report.converged) {
    throw ContractionFailed("contraction failed: no convergence within max_iterations; " +
                                s.report.smallness_verdict(),
                            s.report);
  }
  return state_at(s.trajectory, s.trajectory.steps());
}

std::vector<double> velocity_ladder(double p) {
  if (!(p > 3.0)) throw ConfigError("velocity ladder requires p > 3");
  std::vector<double> out{p};
  while (std::isfinite(out.back())) {
    const double pk = out.back();
    if (pk > 6.0) {
      out.push_back(kInf);
      break;
    }
    const double lo = std::max(2.0 / pk - 1.0 / 3.0, 0.0);
    out.push_back(1.0 / (0.5 * (lo + 1.0 / pk)));
  }
  return out;
}

std::vector<double> temperature_ladder(double p, double q) {
  if (!(p > 3.0)) throw ConfigError("temperature ladder requires p > 3");
  std::vector<double> out{q};
  while (std::isfinite(out.back())) {
    const double inv_q = 1.0 / out.back();
    const double lo = 1.0 / p + inv_q - 1.0 / 3.0;
    if (lo < 0.0) {
      out.push_back(kInf);
      break;
    }
    out.push_back(1.0 / (0.5 * (lo + inv_q)));
  }
  return out;
}

std::vector<const NormProfile*> BootstrapLadder::profiles() const {
  std::vector<const NormProfile*> out;
  for (const auto& p : velocity) out.push_back(&p);
  for (const auto& p : temperature) out.push_back(&p);
  for (const auto& p : extra) out.push_back(&p);
  return out;
}

BootstrapLadder bootstrap_ladder(const Trajectory& traj, const SolveConfig& cfg,
                                 double vanishing_fraction) {
  BootstrapLadder ladder;
  ladder.p_sequence = velocity_ladder(cfg.p);
  ladder.q_sequence = temperature_ladder(cfg.p, cfg.q);
  for (double p : ladder.p_sequence) ladder.velocity.push_back(trajectory_norm(traj, velocity_norm(p)));
  for (double q : ladder.q_sequence) {
    ladder.temperature.push_back(trajectory_norm(traj, temperature_norm(q)));
  }
  ladder.extra.push_back(trajectory_norm(traj, velocity_norm(3.0)));
  ladder.extra.push_back(trajectory_norm(traj, temperature_norm(1.0)));
  ladder.extra.push_back(trajectory_norm(traj, make_norm_kind(NormFamily::KatoX, 3.0)));
  ladder.extra.push_back(trajectory_norm(traj, make_norm_kind(NormFamily::KatoY, 1.0)));
  ladder.all_finite = true;
  for (const NormProfile* p : ladder.profiles()) {
    ladder.all_finite = ladder.all_finite && std::isfinite(p->supremum);
  }
  ladder.x_inf_vanishing = diagnose_vanishing(ladder.velocity.back(), vanishing_fraction);
  ladder.y_inf_vanishing = diagnose_vanishing(ladder.temperature.back(), vanishing_fraction);
  return ladder;
}

}  // namespace bmild

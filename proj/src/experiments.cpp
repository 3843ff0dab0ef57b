#include "bmild/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>

#include "bmild/bilinear.hpp"
#include "bmild/io.hpp"
#include "bmild/kernels.hpp"
#include "bmild/norms.hpp"

namespace bmild {

namespace fs = std::filesystem;

InitialData load_data(const ExperimentConfig& cfg) {
  if (cfg.input_u.empty()) {
    if (!cfg.input_theta.empty()) throw ConfigError("input_theta requires input_u");
    return make_initial_data(make_grid(cfg.n, cfg.box_length), cfg.data);
  }
  const Snapshot su = read_snapshot(cfg.input_u);
  VectorField u = snapshot_velocity(su);
  ScalarField theta(u.grid());
  if (!cfg.input_theta.empty()) {
    theta = snapshot_scalar(read_snapshot(cfg.input_theta));
    require_same_grid(u.grid(), theta.grid(), "input snapshots");
  }
  return {std::move(u), std::move(theta)};
}

std::map<std::string, std::string> report_metadata(const ExperimentConfig& cfg,
                                                   const std::string& command) {
  return {{"command", command},
          {"config_hash", cfg.hash()},
          {"quadrature", to_string(cfg.quadrature)},
          {"seed", std::to_string(cfg.data.seed)}};
}

namespace {

SolveConfig data_solve_config(const ExperimentConfig& cfg, const InitialData& d) {
  SolveConfig s = cfg.solve_config();
  s.n = d.u.grid().n();
  s.box_length = d.u.grid().box_length();
  return s;
}

Solution solve_converged(const VectorField& u0, const ScalarField& th0, const SolveConfig& s) {
  Solution sol = picard_solve(u0, th0, s);
  if (!sol.report.converged) {
    throw ContractionFailed("contraction failed: no convergence within " +
                                std::to_string(s.max_iterations) + " iterations; " +
                                sol.report.smallness_verdict(),
                            sol.report);
  }
  return sol;
}

std::string dir_file(const ExperimentConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return (fs::path(cfg.out_dir) / name).string();
}

void write_picard_report(const ExperimentConfig& cfg, const PicardReport& r) {
  CsvWriter csv(dir_file(cfg, "picard_report.csv"), {"iteration", "residual", "ratio", "e_norm"},
                report_metadata(cfg, "solve"));
  for (const auto& it : r.iterations) {
    csv.cell(it.index).cell(it.residual).cell(it.ratio).cell(it.norm).end_row();
  }
}

bool strictly_decreasing_or_zero(const std::vector<double>& v) {
  if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) return true;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

}  // namespace

SolveOutcome run_solve(const ExperimentConfig& cfg) {
  InitialData data = load_data(cfg);
  double scale = 1.0;
  SolveConfig s = data_solve_config(cfg, data);
  if (cfg.smallness_target > 0.0) {
    const Grid3& g = data.u.grid();
    const Trajectory v0 = linear_flow_trajectory(data.u, data.theta, s.dt, s.steps());
    const double norm = e_norm(v0, s.p, s.q);
    if (norm > 0.0) {
      RandomTrajectoryOptions opts;
      opts.min_width = 2.0 * g.dx();
      opts.max_width = std::max(opts.min_width, g.box_length() / 8.0);
      const double c0 = measure_pair_constant(g, s.horizon, s.steps(), s.p, s.q, s.c0_samples,
                                              s.seed, {&v0}, s.quadrature, opts);
      if (c0 > 0.0) {
        scale = cfg.smallness_target / (c0 * norm);
        data.u *= scale;
        data.theta *= scale;
      }
    }
  }
  Solution sol = solve_converged(data.u, data.theta, s);
  BootstrapLadder ladder = bootstrap_ladder(sol.trajectory, s, cfg.vanishing_fraction);
  return {std::move(data), scale, std::move(sol), std::move(ladder)};
}

int cmd_solve(const ExperimentConfig& cfg, std::ostream& log) {
  std::optional<SolveOutcome> outcome;
  try {
    outcome.emplace(run_solve(cfg));
  } catch (const ContractionFailed& e) {
    write_picard_report(cfg, e.report());
    throw;
  } catch (const BlowUp& e) {
    write_picard_report(cfg, e.report());
    throw;
  }
  const SolveOutcome& o = *outcome;
  const auto& r = o.solution.report;
  const auto& traj = o.solution.trajectory;
  write_picard_report(cfg, r);
  const auto meta = report_metadata(cfg, "solve");
  {
    CsvWriter csv(dir_file(cfg, "norms.csv"), {"norm", "t", "value", "weighted_value"}, meta);
    for (const NormProfile* p : o.ladder.profiles()) {
      for (const auto& s : p->samples) {
        csv.cell(p->kind.name()).cell(s.t).cell(s.value).cell(s.weighted).end_row();
      }
    }
  }
  {
    CsvWriter csv(dir_file(cfg, "solve_summary.csv"), {"quantity", "value"}, meta);
    csv.cell("iterations").cell(r.iterations.size()).end_row();
    csv.cell("converged").cell(r.converged).end_row();
    csv.cell("final_residual").cell(r.iterations.back().residual).end_row();
    csv.cell("max_ratio").cell(r.max_ratio).end_row();
    csv.cell("v0_e_norm").cell(r.v0_norm).end_row();
    csv.cell("c0_empirical").cell(r.c0).end_row();
    csv.cell("smallness_holds").cell(r.smallness_holds).end_row();
    csv.cell("solution_e_norm").cell(r.solution_norm).end_row();
    csv.cell("bound_holds").cell(r.bound_holds).end_row();
    csv.cell("data_scale").cell(o.data_scale).end_row();
    csv.cell("ladder_finite").cell(o.ladder.all_finite).end_row();
    csv.cell("x_inf_vanishing").cell(o.ladder.x_inf_vanishing.vanishing).end_row();
    csv.cell("y_inf_vanishing").cell(o.ladder.y_inf_vanishing.vanishing).end_row();
  }
  std::vector<std::size_t> nodes;
  if (cfg.snapshot_times.empty()) {
    nodes = {0, traj.steps()};
  } else {
    for (double t : cfg.snapshot_times) {
      nodes.push_back(static_cast<std::size_t>(std::llround(t / traj.dt)));
    }
  }
  for (std::size_t j : nodes) {
    char name[32];
    std::snprintf(name, sizeof name, "state_%05zu.bmsf", j);
    write_snapshot(dir_file(cfg, name), make_snapshot(traj.u[j], traj.theta[j], traj.time(j)));
  }
  log << "solve: " << r.iterations.size() << " iterations, residual "
      << format_double(r.iterations.back().residual) << "; " << r.smallness_verdict()
      << "; ||v||_E = " << format_double(r.solution_norm)
      << (r.bound_holds ? " <= " : " > ") << "2||v0||_E + eps\n";
  return r.bound_holds && o.ladder.all_finite ? kExitPass : kExitCheckFailed;
}

bool KernelReport::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

KernelReport run_kernel_checks(const ExperimentConfig& cfg) {
  const Grid3 g = make_grid(cfg.n, cfg.box_length);
  check_kernel_resolution(g, 1.0);
  for (double t : cfg.kernel_t_grid) check_kernel_resolution(g, t);
  check_kernel_resolution(g, cfg.selfsim_t1);
  check_kernel_resolution(g, cfg.selfsim_t2);
  for (double t : cfg.buoyancy_t_grid) check_kernel_resolution(g, t + cfg.buoyancy_gaussian_time);

  KernelReport rep;
  auto add = [&](std::string check, std::string subject, std::string param, double measured,
                 double expected, double tol, bool pass) {
    rep.rows.push_back({std::move(check), std::move(subject), std::move(param), measured,
                        expected, tol, pass});
  };
  const double dtol = cfg.decay_tolerance;
  const double k_slope = verify_decay(KernelKind::oseen, g, cfg.decay_r_min, cfg.decay_shells).slope;
  add("decay", "K", "t=1", k_slope, -3.0, dtol, std::abs(k_slope + 3.0) <= dtol);
  const double f_slope =
      verify_decay(KernelKind::projected_div, g, cfg.decay_r_min, cfg.decay_shells).slope;
  add("decay", "F_projected", "t=1", f_slope, -4.0, dtol, std::abs(f_slope + 4.0) <= dtol);
  const double fp_slope =
      verify_decay(KernelKind::plain_div, g, cfg.decay_r_min, cfg.decay_shells).slope;
  add("decay_upper_bound", "F_plain", "t=1", fp_slope, -4.0, dtol, fp_slope <= -4.0 + dtol);
  const double h_slope = verify_decay(KernelKind::heat, g, cfg.decay_r_min, cfg.decay_shells).slope;
  add("decay_superpolynomial", "heat", "t=1", h_slope, -6.0, 0.0, h_slope < -6.0);

  for (double beta : cfg.kernel_betas) {
    const double expected = -2.0 + (std::isinf(beta) ? 0.0 : 1.5 / beta);
    const std::string param = "beta=" + format_double(beta);
    for (auto [kind, name] : {std::pair{KernelKind::projected_div, "F_projected"},
                              std::pair{KernelKind::plain_div, "F_plain"}}) {
      const double s = kernel_lbeta_law(kind, g, beta, cfg.kernel_t_grid).slope;
      add("lbeta_law", name, param, s, expected, cfg.slope_tolerance,
          std::abs(s - expected) <= cfg.slope_tolerance);
    }
  }
  for (double s : {2.0, kInf}) {
    const double expected = -1.5 * (1.0 - (std::isinf(s) ? 0.0 : 1.0 / s));
    const double slope =
        buoyancy_lp_law(g, cfg.buoyancy_gaussian_time, s, cfg.buoyancy_t_grid).slope;
    add("buoyancy_lp_law", "K", "r=1,s=" + format_double(s), slope, expected,
        cfg.slope_tolerance, std::abs(slope - expected) <= cfg.slope_tolerance);
  }
  const std::string param =
      "t1=" + format_double(cfg.selfsim_t1) + ",t2=" + format_double(cfg.selfsim_t2);
  for (auto [kind, name] :
       {std::pair{KernelKind::oseen, "K"}, std::pair{KernelKind::projected_div, "F_projected"}}) {
    const double dev = verify_self_similarity(kind, g, cfg.selfsim_t1, cfg.selfsim_t2);
    add("self_similarity", name, param, dev, 0.0, cfg.selfsim_tolerance,
        dev <= cfg.selfsim_tolerance);
  }
  return rep;
}

int cmd_verify_kernels(const ExperimentConfig& cfg, std::ostream& log) {
  const KernelReport rep = run_kernel_checks(cfg);
  CsvWriter csv(dir_file(cfg, "kernels.csv"),
                {"check", "kernel", "parameter", "measured", "expected", "tolerance", "pass"},
                report_metadata(cfg, "verify-kernels"));
  for (const auto& r : rep.rows) {
    csv.cell(r.check).cell(r.subject).cell(r.parameter).cell(r.measured).cell(r.expected);
    csv.cell(r.tolerance).cell(r.pass).end_row();
    log << (r.pass ? "PASS " : "FAIL ") << r.check << " " << r.subject << " " << r.parameter
        << ": " << format_double(r.measured) << "\n";
  }
  return rep.pass() ? kExitPass : kExitCheckFailed;
}

bool ScalingReport::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ScalingRow& r) { return r.pass; });
}

namespace {

double scaled_deviation(const ScalarField& scaled, const ScalarField& base, double factor) {
  const ScalarField a = to_real(scaled);
  const ScalarField b = to_real(base);
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    diff = std::max(diff, std::abs(a.values()[i] - factor * b.values()[i]));
    ref = std::max(ref, std::abs(factor * b.values()[i]));
  }
  return ref > 0.0 ? diff / ref : diff;
}

double norm_ratio(double scaled, double base) {
  if (base == 0.0) return scaled == 0.0 ? 1.0 : kInf;
  return scaled / base;
}

}  // namespace

ScalingReport run_scaling(const ExperimentConfig& cfg) {
  const Grid3 g = make_grid(cfg.n, cfg.box_length);
  const InitialData base = make_initial_data(g, cfg.data);
  const SolveConfig s = cfg.solve_config();
  const Solution bsol = solve_converged(base.u, base.theta, s);
  ScalingReport rep;
  for (double lambda : cfg.lambdas) {
    const InitialData d = make_initial_data(g, cfg.data, lambda);
    SolveConfig sl = s;
    sl.box_length = g.box_length() / lambda;
    sl.horizon = s.horizon / (lambda * lambda);
    sl.dt = s.dt / (lambda * lambda);
    const Solution ssol = solve_converged(d.u, d.theta, sl);
    ScalingRow row;
    row.lambda = lambda;
    row.u_l3_ratio = norm_ratio(lp_norm(d.u, 3.0), lp_norm(base.u, 3.0));
    row.theta_l1_ratio = norm_ratio(lp_norm(d.theta, 1.0), lp_norm(base.theta, 1.0));
    const auto& bt = bsol.trajectory;
    const auto& st = ssol.trajectory;
    double du = 0.0;
    double dth = 0.0;
    for (std::size_t j = 0; j < bt.size(); ++j) {
      for (int a = 0; a < 3; ++a) du = std::max(du, scaled_deviation(st.u[j][a], bt.u[j][a], lambda));
      dth = std::max(dth, scaled_deviation(st.theta[j], bt.theta[j], lambda * lambda * lambda));
    }
    row.u_deviation = du;
    row.theta_deviation = dth;
    row.base_iterations = static_cast<int>(bsol.report.iterations.size());
    row.scaled_iterations = static_cast<int>(ssol.report.iterations.size());
    row.pass = std::abs(row.u_l3_ratio - 1.0) <= cfg.data_norm_tolerance &&
               std::abs(row.theta_l1_ratio - 1.0) <= cfg.data_norm_tolerance &&
               du <= cfg.scaling_tolerance && dth <= cfg.scaling_tolerance;
    rep.rows.push_back(row);
  }
  return rep;
}

int cmd_scaling_test(const ExperimentConfig& cfg, std::ostream& log) {
  const ScalingReport rep = run_scaling(cfg);
  CsvWriter csv(dir_file(cfg, "scaling.csv"),
                {"lambda", "u_l3_ratio", "theta_l1_ratio", "u_deviation", "theta_deviation",
                 "base_iterations", "scaled_iterations", "pass"},
                report_metadata(cfg, "scaling-test"));
  for (const auto& r : rep.rows) {
    csv.cell(r.lambda).cell(r.u_l3_ratio).cell(r.theta_l1_ratio).cell(r.u_deviation);
    csv.cell(r.theta_deviation).cell(r.base_iterations).cell(r.scaled_iterations).cell(r.pass);
    csv.end_row();
    log << (r.pass ? "PASS " : "FAIL ") << "lambda=" << format_double(r.lambda)
        << " deviation u " << format_double(r.u_deviation) << " theta "
        << format_double(r.theta_deviation) << "\n";
  }
  return rep.pass() ? kExitPass : kExitCheckFailed;
}

bool UniquenessReport::pass() const {
  return theta_weak_vanishing.vanishing &&
         std::all_of(rows.begin(), rows.end(), [](const DistanceRow& r) { return r.pass; });
}

namespace {

struct Distance {
  double e = 0.0;
  double e_rel = 0.0;
  double l2_rel = 0.0;
};

Distance distance(const Trajectory& a, const Trajectory& b, double p, double q) {
  Distance d;
  d.e = e_norm(add(a, b, -1.0), p, q);
  const double ref = e_norm(a, p, q);
  d.e_rel = ref > 0.0 ? d.e / ref : d.e;
  double du = 0.0, dth = 0.0, ru = 0.0, rth = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    du = std::max(du, lp_norm(a.u[j] - to_spectral(b.u[j]), 2.0));
    dth = std::max(dth, lp_norm(a.theta[j] - to_spectral(b.theta[j]), 2.0));
    ru = std::max(ru, lp_norm(a.u[j], 2.0));
    rth = std::max(rth, lp_norm(a.theta[j], 2.0));
  }
  d.l2_rel = std::max(ru > 0.0 ? du / ru : du, rth > 0.0 ? dth / rth : dth);
  return d;
}

Trajectory slice(const Trajectory& t, std::size_t from) {
  Trajectory out{t.grid, t.dt, t.time(from), {}, {}};
  for (std::size_t j = from; j < t.size(); ++j) {
    out.u.push_back(t.u[j]);
    out.theta.push_back(t.theta[j]);
  }
  return out;
}

// Direct solve vs. restart at the middle node; compares the tails.
Distance restart_distance(const InitialData& d, const SolveConfig& s, const Trajectory& direct) {
  const std::size_t half = direct.steps() / 2;
  SolveConfig first = s;
  first.horizon = s.dt * static_cast<double>(half);
  const Solution a = solve_converged(d.u, d.theta, first);
  SolveConfig second = s;
  second.horizon = s.dt * static_cast<double>(direct.steps() - half);
  const FlowState mid = state_at(a.trajectory, half);
  const Solution b = solve_converged(mid.u, mid.theta, second);
  return distance(slice(direct, half), b.trajectory, s.p, s.q);
}

// NaN when the coarse distance is already at the fixed-point tolerance floor.
double observed_order(double coarse, double fine, double floor) {
  if (coarse <= floor) return std::nan("");
  return std::log2(coarse / fine);
}

}  // namespace

UniquenessReport run_uniqueness(const ExperimentConfig& cfg) {
  const InitialData d = load_data(cfg);
  SolveConfig s = data_solve_config(cfg, d);
  s.initial_iterate = InitialIterate::linear_flow;
  s.quadrature = Quadrature::exp_linear;
  const Solution base = solve_converged(d.u, d.theta, s);
  const double p = s.p, q = s.q;
  const double base_norm = e_norm(base.trajectory, p, q);
  const double floor = std::max(1e-12, base_norm > 0.0 ? 100.0 * s.eps_fix / base_norm : 0.0);
  UniquenessReport rep;

  for (InitialIterate it : {InitialIterate::zero, InitialIterate::perturbed}) {
    SolveConfig sa = s;
    sa.initial_iterate = it;
    const Distance dist = distance(base.trajectory, solve_converged(d.u, d.theta, sa).trajectory, p, q);
    DistanceRow row;
    row.variant = "a";
    row.description = "initial iterate " + to_string(it) + " vs linear_flow";
    row.e_distance = dist.e;
    row.e_relative = dist.e_rel;
    row.l2_relative = dist.l2_rel;
    row.order = std::nan("");
    row.tolerance = 10.0 * s.eps_fix;
    row.pass = dist.e <= row.tolerance;
    rep.rows.push_back(row);
  }

  SolveConfig fine = s;
  fine.dt = s.dt / 2.0;
  std::optional<Solution> base_fine;
  if (cfg.refinement_check) base_fine.emplace(solve_converged(d.u, d.theta, fine));

  {
    SolveConfig sb = s;
    sb.quadrature = Quadrature::left_endpoint;
    const Distance dist = distance(base.trajectory, solve_converged(d.u, d.theta, sb).trajectory, p, q);
    DistanceRow row;
    row.variant = "b";
    row.description = "quadrature left_endpoint vs exp_linear";
    row.e_distance = dist.e;
    row.e_relative = dist.e_rel;
    row.l2_relative = dist.l2_rel;
    row.order = std::nan("");
    row.tolerance = cfg.uniqueness_tolerance;
    if (cfg.refinement_check) {
      SolveConfig sbf = fine;
      sbf.quadrature = Quadrature::left_endpoint;
      const Distance df =
          distance(base_fine->trajectory, solve_converged(d.u, d.theta, sbf).trajectory, p, q);
      row.refined_l2_relative = df.l2_rel;
      row.order = observed_order(dist.l2_rel, df.l2_rel, floor);
    }
    row.pass = dist.e_rel <= row.tolerance && dist.l2_rel <= row.tolerance &&
               (std::isnan(row.order) || row.order >= 1.0);
    rep.rows.push_back(row);
  }

  {
    const Distance dist = restart_distance(d, s, base.trajectory);
    DistanceRow row;
    row.variant = "c";
    row.description = "restart at the middle node vs direct solve";
    row.e_distance = dist.e;
    row.e_relative = dist.e_rel;
    row.l2_relative = dist.l2_rel;
    row.order = std::nan("");
    row.tolerance = cfg.uniqueness_tolerance;
    if (cfg.refinement_check) {
      const Distance df = restart_distance(d, fine, base_fine->trajectory);
      row.refined_l2_relative = df.l2_rel;
      row.order = observed_order(dist.l2_rel, df.l2_rel, floor);
    }
    row.pass = dist.e_rel <= row.tolerance && dist.l2_rel <= row.tolerance &&
               (std::isnan(row.order) || row.order >= 1.0);
    rep.rows.push_back(row);
  }

  rep.theta_weak_profile =
      trajectory_norm(base.trajectory, make_norm_kind(NormFamily::Yqweak, q));
  rep.theta_weak_vanishing = diagnose_vanishing(rep.theta_weak_profile, cfg.vanishing_fraction);
  return rep;
}

int cmd_uniqueness_test(const ExperimentConfig& cfg, std::ostream& log) {
  const UniquenessReport rep = run_uniqueness(cfg);
  const auto meta = report_metadata(cfg, "uniqueness-test");
  {
    CsvWriter csv(dir_file(cfg, "uniqueness.csv"),
                  {"variant", "description", "e_distance", "e_relative", "l2_relative",
                   "refined_l2_relative", "order", "tolerance", "pass"},
                  meta);
    for (const auto& r : rep.rows) {
      csv.cell(r.variant).cell(r.description).cell(r.e_distance).cell(r.e_relative);
      csv.cell(r.l2_relative).cell(r.refined_l2_relative).cell(r.order).cell(r.tolerance);
      csv.cell(r.pass).end_row();
      log << (r.pass ? "PASS " : "FAIL ") << "(" << r.variant << ") " << r.description
          << ": E " << format_double(r.e_distance) << ", relative L2 "
          << format_double(r.l2_relative) << "\n";
    }
  }
  write_profile_csv(dir_file(cfg, "theta_weak_profile.csv"), rep.theta_weak_profile, meta);
  log << (rep.theta_weak_vanishing.vanishing ? "PASS " : "FAIL ")
      << "Y_{q,inf} profile vanishing at small t, ratio "
      << format_double(rep.theta_weak_vanishing.ratio) << "\n";
  return rep.pass() ? kExitPass : kExitCheckFailed;
}

bool NormDecayReport::pass() const {
  return x_p_decreasing && y_q_decreasing && x_inf_decreasing && y_inf_decreasing &&
         composite_vanishing.vanishing && std::isfinite(theta0_besov.value);
}

NormDecayReport run_norm_decay(const ExperimentConfig& cfg) {
  const InitialData d = load_data(cfg);
  const SolveConfig s = data_solve_config(cfg, d);
  NormDecayReport rep;
  std::vector<double> xp, yq, xi, yi;
  for (int h = 0; h < cfg.horizons; ++h) {
    SolveConfig sh = s;
    const double f = std::ldexp(1.0, -h);
    sh.horizon = s.horizon * f;
    sh.dt = s.dt * f;
    const Trajectory traj = solve_converged(d.u, d.theta, sh).trajectory;
    HorizonRow row;
    row.horizon = sh.horizon;
    row.x_p = trajectory_norm(traj, velocity_norm(s.p)).supremum;
    row.y_q = trajectory_norm(traj, temperature_norm(s.q)).supremum;
    row.x_inf = trajectory_norm(traj, velocity_norm(kInf)).supremum;
    row.y_inf = trajectory_norm(traj, temperature_norm(kInf)).supremum;
    xp.push_back(row.x_p);
    yq.push_back(row.y_q);
    xi.push_back(row.x_inf);
    yi.push_back(row.y_inf);
    rep.rows.push_back(row);
  }
  rep.x_p_decreasing = strictly_decreasing_or_zero(xp);
  rep.y_q_decreasing = strictly_decreasing_or_zero(yq);
  rep.x_inf_decreasing = strictly_decreasing_or_zero(xi);
  rep.y_inf_decreasing = strictly_decreasing_or_zero(yi);

  std::vector<NormProfile> parts;
  const NormKind weak = make_norm_kind(NormFamily::Yqweak, s.q);
  for (int j = 0; j < cfg.composite_levels; ++j) {
    SolveConfig sj = s;
    const double f = std::ldexp(1.0, -2 * j);
    sj.horizon = s.horizon * f;
    sj.dt = s.dt * f;
    parts.push_back(trajectory_norm(solve_converged(d.u, d.theta, sj).trajectory, weak));
  }
  rep.theta_weak_composite = merge_profiles(parts);
  rep.composite_vanishing = diagnose_vanishing(rep.theta_weak_composite, cfg.composite_fraction);

  rep.besov_sigma = 3.0 * (1.0 - 1.0 / s.q);
  rep.theta0_besov = besov_norm(d.theta, rep.besov_sigma, s.q, s.horizon,
                                log_spaced(s.horizon * 1e-4, s.horizon, 32));
  return rep;
}

int cmd_norm_decay(const ExperimentConfig& cfg, std::ostream& log) {
  const NormDecayReport rep = run_norm_decay(cfg);
  const auto meta = report_metadata(cfg, "norm-decay");
  {
    CsvWriter csv(dir_file(cfg, "norm_decay.csv"), {"horizon", "X_p", "Y_q", "X_inf", "Y_inf"},
                  meta);
    for (const auto& r : rep.rows) {
      csv.cell(r.horizon).cell(r.x_p).cell(r.y_q).cell(r.x_inf).cell(r.y_inf).end_row();
    }
  }
  {
    CsvWriter csv(dir_file(cfg, "norm_decay_checks.csv"), {"check", "value", "pass"}, meta);
    csv.cell("X_p_decreasing").cell(rep.x_p_decreasing ? 1.0 : 0.0).cell(rep.x_p_decreasing).end_row();
    csv.cell("Y_q_decreasing").cell(rep.y_q_decreasing ? 1.0 : 0.0).cell(rep.y_q_decreasing).end_row();
    csv.cell("X_inf_decreasing").cell(rep.x_inf_decreasing ? 1.0 : 0.0).cell(rep.x_inf_decreasing).end_row();
    csv.cell("Y_inf_decreasing").cell(rep.y_inf_decreasing ? 1.0 : 0.0).cell(rep.y_inf_decreasing).end_row();
    csv.cell("Yq_weak_vanishing_ratio").cell(rep.composite_vanishing.ratio);
    csv.cell(rep.composite_vanishing.vanishing).end_row();
    csv.cell("theta0_besov").cell(rep.theta0_besov.value);
    csv.cell(static_cast<bool>(std::isfinite(rep.theta0_besov.value))).end_row();
  }
  write_profile_csv(dir_file(cfg, "theta_weak_composite.csv"), rep.theta_weak_composite, meta);
  log << (rep.pass() ? "PASS" : "FAIL") << " norm decay over " << rep.rows.size()
      << " horizons; Y_{q,inf} small-t ratio " << format_double(rep.composite_vanishing.ratio)
      << "; Besov norm of theta0 " << format_double(rep.theta0_besov.value) << "\n";
  return rep.pass() ? kExitPass : kExitCheckFailed;
}

int run_command(const std::string& command, const ExperimentConfig& cfg, std::ostream& log,
                std::ostream& err) {
  try {
    if (command == "solve") return cmd_solve(cfg, log);
    if (command == "verify-kernels") return cmd_verify_kernels(cfg, log);
    if (command == "scaling-test") return cmd_scaling_test(cfg, log);
    if (command == "uniqueness-test") return cmd_uniqueness_test(cfg, log);
    if (command == "norm-decay") return cmd_norm_decay(cfg, log);
    err << "error: unknown command '" << command << "'\n";
    return kExitConfig;
  } catch (const BlowUp& e) {
    err << "error: " << e.what() << "\n";
    return kExitBlowUp;
  } catch (const ContractionFailed& e) {
    err << "error: " << e.what() << "\n";
    return kExitContraction;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace bmild

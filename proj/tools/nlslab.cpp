#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "nlslab/acceptance.hpp"
#include "nlslab/ansatz.hpp"
#include "nlslab/config.hpp"
#include "nlslab/groundstate.hpp"
#include "nlslab/interactions.hpp"
#include "nlslab/io.hpp"
#include "nlslab/modulation_fit.hpp"
#include "nlslab/pde.hpp"
#include "nlslab/plot.hpp"
#include "nlslab/reduced_ode.hpp"

namespace fs = std::filesystem;
using namespace nlslab;

namespace {

enum Exit { kOk = 0, kUsage = 2, kConfig = 3, kNumerical = 4, kAcceptance = 5 };

struct Context {
  Config cfg;
  fs::path out_dir = "out";
  bool verbose = false;
  Provenance prov;

  void log(const std::string& msg) const {
    if (verbose) std::cerr << msg << '\n';
  }
  void reject_unused() const {
    const auto extra = cfg.unused();
    if (extra.empty()) return;
    std::string keys;
    for (const auto& k : extra) keys += " " + k;
    fail(ErrorKind::config_error, "unknown or unused keys:" + keys);
  }
  fs::path emit(const std::string& name, const CsvTable& t) const {
    const fs::path p = out_dir / name;
    t.write(p);
    stamp_manifest(p, prov);
    log("wrote " + p.string());
    return p;
  }
  void emit(const std::string& name, json j) const {
    j["provenance"] = prov.to_json();
    write_json(out_dir / name, j);
    log("wrote " + (out_dir / name).string());
  }
};

GroundStateData ground_state(const Context& ctx) {
  const double r_max = ctx.cfg.get_double("groundstate.r_max", 30.0);
  const double h = ctx.cfg.get_double("groundstate.h", 0.005);
  GroundStateOptions opt;
  opt.tol = ctx.cfg.get_double("groundstate.tol", 1e-12);
  opt.fit_lo = ctx.cfg.get_double("groundstate.fit_lo", 8.0);
  opt.fit_hi = ctx.cfg.get_double("groundstate.fit_hi", 16.0);
  return compute_ground_state_data(RadialGrid::with_spacing(r_max, h), opt);
}

json constants_json(const GroundStateData& gs) {
  return {{"Q0", gs.Q0},
          {"mass", gs.mass},
          {"grad_sq", gs.grad_sq},
          {"quartic", gs.quartic},
          {"c_Q", gs.c_Q},
          {"c_Q_leading", gs.c_Q_leading},
          {"c_Q_window_spread", gs.c_Q_window_spread},
          {"I_Q", gs.I_Q},
          {"rho_dot_Q", gs.rho_dot_Q},
          {"rho_residual", gs.rho_residual},
          {"rho_growth", gs.rho_growth}};
}

int cmd_groundstate(const Context& ctx) {
  const int m_max = static_cast<int>(ctx.cfg.get_int("groundstate.m_max", -1));
  const GroundStateData gs = ground_state(ctx);
  ctx.reject_unused();
  const auto& g = gs.Q.grid();
  CsvTable q({"r", "Q", "dQ"}), rho({"r", "rho"});
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.node(i);
    q.add_row({r, gs.Q.at_node(i), gs.Q.slopes()[i]});
    rho.add_row({r, gs.rho.at_node(i)});
  }
  ctx.emit("q.csv", q);
  ctx.emit("rho.csv", rho);
  json j = constants_json(gs);
  const NullSpaceResiduals ns = null_space_residuals(gs);
  j["null_space_max"] = ns.max();
  if (m_max >= 0) {
    const CoercivityReport rep = coercivity_spectrum(gs, m_max);
    json sec = json::array();
    for (const auto& s : rep.sectors)
      sec.push_back({{"m", s.harmonic},
                     {"operator", s.kind == OperatorKind::plus ? "L+" : "L-"},
                     {"constrained", s.constrained},
                     {"unconstrained", s.unconstrained}});
    j["coercivity"] = sec;
    j["mu"] = rep.mu;
  }
  ctx.emit("constants.json", j);
  return kOk;
}

int cmd_interactions(const Context& ctx) {
  const double lo = ctx.cfg.get_double("interactions.omega_min", 6.0);
  const double hi = ctx.cfg.get_double("interactions.omega_max", 16.0);
  const double step = ctx.cfg.get_double("interactions.omega_step", 1.0);
  const double spacing = ctx.cfg.get_double("interactions.spacing", 0.05);
  const long K = ctx.cfg.get_int("interactions.K", 2);
  const GroundStateData gs = ground_state(ctx);
  ctx.reject_unused();
  require(step > 0.0 && lo >= 5.0 && hi >= lo, "need omega_min >= 5, omega_max >= omega_min, step > 0");
  CsvTable t({"omega", "overlap", "asymptotic", "ratio"});
  for (double w = lo; w <= hi + 1e-9; w += step) {
    const double q = overlap_two(gs.Q, {w, 0.0}, 0.0, spacing);
    const double a = asymptotic_overlap(gs, w);
    t.add_row({w, q, a, q / a});
  }
  ctx.emit("overlap.csv", t);
  const GeometryConstants c = make_geometry(gs, static_cast<int>(K));
  ctx.emit("geometry.json", {{"K", c.K}, {"kappa", c.kappa}, {"c_a", c.c_a}, {"c_Q", gs.c_Q}, {"I_Q", gs.I_Q}});
  return kOk;
}

ParamState params_from(const Config& cfg, const std::string& sec) {
  ParamState p;
  p.lambda = cfg.get_double(sec + ".lambda", 1.0);
  p.z = cfg.get_double(sec + ".z", 8.0);
  p.gamma = cfg.get_double(sec + ".gamma", 0.0);
  p.beta = cfg.get_double(sec + ".beta", 0.0);
  p.b = cfg.get_double(sec + ".b", 1e-3);
  return p;
}

int cmd_ansatz(const Context& ctx) {
  const long K = ctx.cfg.get_int("ansatz.K", 2);
  const ParamState p = params_from(ctx.cfg, "ansatz");
  const auto n = static_cast<std::size_t>(ctx.cfg.get_int("ansatz.n", 256));
  const double L = ctx.cfg.get_double("ansatz.L", 24.0);
  const GroundStateData gs = ground_state(ctx);
  ctx.reject_unused();
  const GeometryConstants c = make_geometry(gs, static_cast<int>(K));
  const Grid2D grid(n, L);
  const ComplexField2D P = build_ansatz(gs, c, p, grid);
  const json pj = {{"lambda", p.lambda}, {"z", p.z}, {"gamma", p.gamma}, {"beta", p.beta}, {"b", p.b}, {"K", K}};
  write_field(ctx.out_dir / "ansatz.bin", P, ctx.prov, pj);
  const ErrorField e = error_field(gs, c, p, zero_set_velocity(p, c), grid);
  write_field(ctx.out_dir / "error_direct.bin", e.direct, ctx.prov, pj);
  ctx.emit("ansatz.json", {{"params", pj},
                           {"direct_norm", e.direct_norm},
                           {"decomposed_norm", e.decomposed_norm},
                           {"route_gap", e.route_gap},
                           {"spectral_floor", e.spectral_floor},
                           {"psi_projection", e.psi_projection},
                           {"projection_G1", projection_G1_iQa(gs, c, p)},
                           {"projection_G1_leading", projection_G1_leading(gs, c, p)}});
  return kOk;
}

int cmd_reduced(const Context& ctx) {
  const long K = ctx.cfg.get_int("reduced.K", 2);
  ShootingConfig sc;
  sc.s_in = ctx.cfg.get_double("reduced.s_in", 1e6);
  sc.s0 = ctx.cfg.get_double("reduced.s0", 1e3);
  sc.zeta_lo = ctx.cfg.get_double("reduced.zeta_lo", -1.0);
  sc.zeta_hi = ctx.cfg.get_double("reduced.zeta_hi", 1.0);
  sc.bisection_tol = ctx.cfg.get_double("reduced.tol", 1e-12);
  sc.rtol = ctx.cfg.get_double("reduced.rtol", 1e-10);
  const GroundStateData gs = ground_state(ctx);
  ctx.reject_unused();
  const GeometryConstants c = make_geometry(gs, static_cast<int>(K));
  const ShootResult sr = shoot(sc, c);
  CsvTable hist({"zeta_sharp", "survived", "sign", "s_star", "xi_dot"});
  for (const auto& h : sr.history)
    hist.add_row({h.zeta_sharp, h.survived ? 1.0 : 0.0, static_cast<double>(h.sign), h.s_star, h.xi_dot});
  ctx.emit("bisection.csv", hist);
  json j = {{"success", sr.success}, {"zeta_sharp", sr.zeta_sharp}, {"monotone", sr.monotone}};
  if (sr.success) {
    const auto& tr = sr.survivor.trajectory;
    const std::vector<double> t = time_map(tr);
    CsvTable surv({"s", "t", "lambda", "z", "gamma", "beta", "b", "lambda_log_s", "b_s_log_s"});
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const double s = tr.s()[i];
      const ParamState& p = tr.params()[i];
      surv.add_row({s, t[i], p.lambda, p.z, p.gamma, p.beta, p.b, p.lambda * std::log(s), p.b * s * std::log(s)});
    }
    ctx.emit("survivor.csv", surv);
    const SurvivorBands sb = survivor_bands(c, tr);
    j["lambda_log_s"] = {sb.lambda_log_min, sb.lambda_log_max};
    j["b_s_log_s"] = {sb.b_slog_min, sb.b_slog_max};
    j["z_excess_max"] = sb.z_excess_max;
  } else {
    j["bracket"] = {sr.lo, sr.hi};
  }
  ctx.emit("shoot.json", j);
  return kOk;
}

int cmd_evolve(const Context& ctx) {
  const std::string data = ctx.cfg.get_string("evolve.data", "soliton");
  const auto n = static_cast<std::size_t>(ctx.cfg.get_int("evolve.n", 256));
  const double L = ctx.cfg.get_double("evolve.L", 20.0);
  const double dt = ctx.cfg.get_double("evolve.dt", 2e-4);
  const double t_span = ctx.cfg.get_double("evolve.t_span", 1.0);
  const auto stride = static_cast<std::size_t>(ctx.cfg.get_int("evolve.monitor_stride", 100));
  const double amp = ctx.cfg.get_double("evolve.amplitude", 1.0);
  const Grid2D g(n, L);
  ComplexField2D u;
  if (data == "soliton") {
    const GroundStateData gs = ground_state(ctx);
    u = sample_radial(gs.Q, g);
    u *= amp;
  } else if (data == "gaussian") {
    u = ComplexField2D::sample(g, [&](double x, double y) { return cplx(amp * std::exp(-0.5 * (x * x + y * y)), 0.0); });
  } else {
    fail(ErrorKind::config_error, "evolve.data must be soliton or gaussian");
  }
  ctx.reject_unused();
  const EvolutionConfig ec{g, dt, t_span, stride};
  validate(ec, u);
  SplitStepSolver solver(g, dt, stride);
  const auto steps = static_cast<std::size_t>(std::llround(std::abs(t_span / dt)));
  CsvTable log({"t", "mass", "energy", "variance", "max_amp", "grad_norm"});
  auto record = [&] {
    const ConservedSnapshot s = conserved(u, static_cast<double>(solver.steps_taken()) * dt);
    log.add_row({s.t, s.mass, s.energy, s.variance, s.max_amp, s.grad_norm});
  };
  record();
  for (std::size_t k = 0; k < steps; k += stride) {
    solver.advance(u, std::min(stride, steps - k));
    record();
  }
  ctx.emit("run_log.csv", log);
  write_field(ctx.out_dir / "final.bin", u, ctx.prov);
  ctx.emit("evolve.json", {{"steps", solver.steps_taken()},
                           {"aliasing_warning", solver.aliasing_warning()},
                           {"high_band_fraction", solver.high_band_fraction()}});
  return kOk;
}

int cmd_track(const Context& ctx) {
  TrackConfig tc;
  const long K = ctx.cfg.get_int("track.K", 2);
  tc.n = 512;
  tc.s_in = ctx.cfg.get_double("track.s_in", tc.s_in);
  tc.s_floor = ctx.cfg.get_double("track.s_floor", tc.s_floor);
  tc.n = static_cast<std::size_t>(ctx.cfg.get_int("track.n", static_cast<long>(tc.n)));
  tc.rescaled_half_width = ctx.cfg.get_double("track.L", tc.rescaled_half_width);
  tc.dt = ctx.cfg.get_double("track.dt", tc.dt);
  tc.cadence = static_cast<std::size_t>(ctx.cfg.get_int("track.cadence", static_cast<long>(tc.cadence)));
  tc.max_records = static_cast<std::size_t>(ctx.cfg.get_int("track.max_records", static_cast<long>(tc.max_records)));
  tc.decompose.tol = ctx.cfg.get_double("track.tol", tc.decompose.tol);
  tc.decompose.closeness = ctx.cfg.get_double("track.closeness", tc.decompose.closeness);
  const double s0 = ctx.cfg.get_double("track.shoot_s0", 20.0);
  const bool have_zeta = ctx.cfg.has("track.zeta_sharp");
  const double zeta = ctx.cfg.get_double("track.zeta_sharp", 0.0);
  const GroundStateData gs = ground_state(ctx);
  ctx.reject_unused();
  const GeometryConstants c = make_geometry(gs, static_cast<int>(K));
  if (have_zeta) {
    tc.zeta_sharp = zeta;
  } else {
    ShootingConfig sc;
    sc.s_in = tc.s_in;
    sc.s0 = s0;
    const ShootResult sr = shoot(sc, c);
    tc.zeta_sharp = sr.success ? sr.zeta_sharp : 0.5 * (sr.lo + sr.hi);
    ctx.log("zeta_sharp from shooting: " + std::to_string(tc.zeta_sharp));
  }
  const TrackResult run = track(gs, c, tc);
  CsvTable t({"t", "s_proxy", "lambda", "z", "gamma", "beta", "b", "eps_H1", "eta1_dot_Q", "H", "J", "F", "mass",
              "energy", "variance"});
  for (const auto& x : run.records)
    t.add_row({x.t, x.s_proxy, x.p.lambda, x.p.z, x.p.gamma, x.p.beta, x.p.b, x.eps_H1, x.eta1_dot_Q, x.f.H, x.f.J,
               x.f.F, x.snap.mass, x.snap.energy, x.snap.variance});
  ctx.emit("trajectory.csv", t);
  const TrackAssessment a = assess(run);
  ctx.emit("track.json", {{"zeta_sharp", tc.zeta_sharp},
                          {"records", a.records},
                          {"truncated", run.truncated},
                          {"truncation", run.truncation},
                          {"aliasing_warning", run.aliasing_warning},
                          {"all_converged", a.all_converged},
                          {"s_reached", a.s_reached},
                          {"eps_envelope", {{"constant", a.eps.constant}, {"worst_ratio", a.eps.worst_ratio}}},
                          {"eta_envelope", {{"constant", a.eta.constant}, {"worst_ratio", a.eta.worst_ratio}}},
                          {"F_drift", {{"constant", a.drift.constant}, {"worst_ratio", a.drift.worst_ratio}}},
                          {"mass_drift", a.mass_drift},
                          {"P_mass_drift", a.P_mass_drift},
                          {"pass", a.pass}});
  return kOk;
}

int cmd_acceptance(const Context& ctx, const std::string& suite, int criterion) {
  if (suite != "primary") fail(ErrorKind::config_error, "only the primary suite exists");
  AcceptanceOptions opt;
  opt.out_dir = ctx.out_dir;
  opt.track.s_in = ctx.cfg.get_double("track.s_in", opt.track.s_in);
  opt.track_n = static_cast<std::size_t>(ctx.cfg.get_int("track.n", static_cast<long>(opt.track_n)));
  ctx.reject_unused();
  json report = json::array();
  bool all = true;
  for (int id = 1; id <= kCriterionCount; ++id) {
    if (criterion != 0 && id != criterion) continue;
    const CriterionResult r = run_criterion(id, opt);
    std::cout << summary_line(r) << std::endl;
    report.push_back(r.to_json());
    all = all && r.pass();
  }
  ctx.emit("acceptance.json", {{"suite", suite}, {"pass", all}, {"criteria", report}});
  return all ? kOk : kAcceptance;
}

int cmd_plot(const Context& ctx, const std::string& csv, const PlotSpec& spec, const std::string& out) {
  ctx.reject_unused();
  const CsvTable t = CsvTable::read(csv);
  const fs::path p = out.empty() ? ctx.out_dir / (fs::path(csv).stem().string() + ".svg") : fs::path(out);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p);
  if (!os) fail(ErrorKind::io_error, "cannot open " + p.string());
  os << plot_svg(t, spec);
  ctx.log("wrote " + p.string());
  return kOk;
}

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::config_error:
    case ErrorKind::invalid_argument:
    case ErrorKind::missing_column:
      return kConfig;
    default:
      return kNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for strongly interacting multi-bubble NLS blow-up"};
  app.set_version_flag("--version", std::string(NLSLAB_VERSION));
  std::string config_path, out_dir = "out";
  bool verbose = false;
  app.add_option("--config", config_path, "flat key = value config file")->check(CLI::ExistingFile);
  app.add_option("--out-dir", out_dir, "output directory");
  app.add_flag("--verbose", verbose, "progress on stderr");
  app.require_subcommand(1);

  app.add_subcommand("groundstate", "ground state, rho and constants");
  app.add_subcommand("interactions", "overlap sweep against the asymptotic law");
  app.add_subcommand("ansatz", "K-bubble ansatz field and its error");
  app.add_subcommand("reduced", "shooting for the reduced modulation system");
  app.add_subcommand("evolve", "split-step evolution with conserved-quantity log");
  app.add_subcommand("track", "backward PDE run with modulation decomposition");
  auto* acc = app.add_subcommand("acceptance", "acceptance battery");
  std::string suite = "primary";
  int criterion = 0;
  acc->add_option("--suite", suite, "suite name");
  acc->add_option("--criterion", criterion, "run one criterion")->check(CLI::Range(1, kCriterionCount));
  auto* plot = app.add_subcommand("plot", "SVG line plot of CSV columns");
  std::string csv, out;
  PlotSpec spec;
  plot->add_option("csv", csv, "input CSV")->required();
  plot->add_option("--x", spec.x, "x column")->required();
  plot->add_option("--y", spec.y, "y columns")->required();
  plot->add_flag("--logx", spec.log_x);
  plot->add_flag("--logy", spec.log_y);
  plot->add_option("--title", spec.title);
  plot->add_option("-o,--output", out, "output SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    Context ctx;
    ctx.verbose = verbose;
    ctx.out_dir = out_dir;
    if (!config_path.empty()) ctx.cfg = Config::load(config_path);
    ctx.prov.config_hash = ctx.cfg.hash();
    fs::create_directories(ctx.out_dir);

    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "groundstate") return cmd_groundstate(ctx);
    if (name == "interactions") return cmd_interactions(ctx);
    if (name == "ansatz") return cmd_ansatz(ctx);
    if (name == "reduced") return cmd_reduced(ctx);
    if (name == "evolve") return cmd_evolve(ctx);
    if (name == "track") return cmd_track(ctx);
    if (name == "acceptance") return cmd_acceptance(ctx, suite, criterion);
    return cmd_plot(ctx, csv, spec, out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
}

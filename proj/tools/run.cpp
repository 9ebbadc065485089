#include "run.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>

#include "mtstab/classical.hpp"
#include "mtstab/evans.hpp"
#include "mtstab/evolution.hpp"
#include "mtstab/model.hpp"
#include "mtstab/parallel.hpp"
#include "mtstab/profile.hpp"
#include "mtstab/singular.hpp"
#include "mtstab/spectral.hpp"

namespace mtstab::cli {

namespace fs = std::filesystem;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const fs::path& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << header << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      os << fmt17(row[i]);
    }
    os << "\n";
  }
}

void write_json(const fs::path& path, const Json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << j.dump(2) << "\n";
}

ModelParams parse_params(const Json& cfg) {
  Json merged = Json::object();
  if (cfg.contains("preset")) {
    merged = preset_params(cfg.at("preset").get<std::string>());
  }
  if (cfg.contains("params")) {
    for (auto& [k, v] : cfg.at("params").items()) merged[k] = v;
  }
  ModelParams p;
  const char* names[] = {"d", "D", "omega", "nu_minus", "f_cat", "u_plus", "k"};
  double* slots[] = {&p.d, &p.D, &p.omega, &p.nu_minus, &p.f_cat, &p.u_plus, &p.k};
  for (int i = 0; i < 7; ++i) {
    if (!merged.contains(names[i])) {
      throw std::invalid_argument(std::string("config: missing model parameter '") +
                                  names[i] + "' (preset does not supply it)");
    }
    *slots[i] = merged.at(names[i]).get<double>();
  }
  p.validate();
  return p;
}

Json params_json(const ModelParams& p) {
  return Json{{"d", p.d},         {"D", p.D},           {"omega", p.omega},
              {"nu_minus", p.nu_minus}, {"f_cat", p.f_cat}, {"u_plus", p.u_plus},
              {"k", p.k}};
}

BoundaryCondition parse_bc(const Json& cfg) {
  if (!cfg.contains("bc")) return BoundaryCondition::dirichlet(0.2, 0.2, 0.2);
  const Json& b = cfg.at("bc");
  const std::string kind = b.value("kind", "dirichlet");
  if (kind == "dirichlet") {
    return BoundaryCondition::dirichlet(b.at("p_plus_0").get<double>(),
                                        b.at("p_minus_0").get<double>(),
                                        b.at("c_0").get<double>());
  }
  if (kind == "neumann") {
    return BoundaryCondition::neumann(b.at("p_plus_0").get<double>(),
                                      b.at("p_minus_0").get<double>());
  }
  throw std::invalid_argument("config: bc.kind must be 'dirichlet' or 'neumann'");
}

Json bc_json(const BoundaryCondition& bc) {
  Json j{{"kind", bc.kind == BcKind::Dirichlet ? "dirichlet" : "neumann"},
         {"p_plus_0", bc.p_plus_0},
         {"p_minus_0", bc.p_minus_0}};
  if (bc.kind == BcKind::Dirichlet) j["c_0"] = bc.c_0;
  return j;
}

Json endstate_json(const Endstate& e) {
  return Json{{"c_plus", e.c_plus},
              {"p_plus_inf", e.p_plus_inf},
              {"p_minus_inf", e.p_minus_inf}};
}

fs::path output_dir(const Json& cfg) {
  const fs::path dir = cfg.value("output_dir", std::string("."));
  fs::create_directories(dir);
  return dir;
}

Json resolved_config(const Json& cfg, const ModelParams& p) {
  Json out = cfg;
  out["params"] = params_json(p);
  return out;
}

GridSpec parse_grid(const Json& cfg) {
  GridSpec g;
  if (cfg.contains("grid")) {
    const Json& j = cfg.at("grid");
    g.x_far = j.value("x_far", g.x_far);
    g.nx = j.value("nx", g.nx);
    g.dt = j.value("dt", g.dt);
    g.t_end = j.value("t_end", g.t_end);
    const std::string s = j.value("scheme", "imex");
    if (s == "imex") {
      g.scheme = TimeScheme::IMEX;
    } else if (s == "fully_implicit") {
      g.scheme = TimeScheme::FullyImplicit;
    } else {
      throw std::invalid_argument("config: grid.scheme must be 'imex' or 'fully_implicit'");
    }
  }
  g.validate();
  return g;
}

InitialData parse_initial(const Json& cfg, const BoundaryCondition& bc) {
  if (!cfg.contains("initial")) {
    // the step experiment: boundary values inside [0, 3], zero beyond
    StepData s;
    s.inside = StateVec{bc.p_plus_0, bc.p_minus_0,
                        bc.kind == BcKind::Dirichlet ? bc.c_0 : 0.0};
    s.tail = StateVec{};
    s.edge = 3.0;
    return s;
  }
  const Json& j = cfg.at("initial");
  const std::string kind = j.value("kind", "step");
  if (kind == "constant") {
    const auto v = j.at("values");
    const StateVec s{v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>()};
    return [s](double) { return s; };
  }
  if (kind == "step") {
    StepData s;
    const auto in = j.at("inside");
    s.inside = StateVec{in.at(0).get<double>(), in.at(1).get<double>(), in.at(2).get<double>()};
    if (j.contains("tail")) {
      const auto t = j.at("tail");
      s.tail = StateVec{t.at(0).get<double>(), t.at(1).get<double>(), t.at(2).get<double>()};
    }
    s.edge = j.value("edge", 3.0);
    return s;
  }
  if (kind == "csv") {
    const fs::path path = j.at("path").get<std::string>();
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("config: cannot read initial csv " + path.string());
    std::string line;
    std::getline(is, line);  // header
    std::vector<std::array<double, 4>> rows;
    while (std::getline(is, line)) {
      std::array<double, 4> r{};
      if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &r[0], &r[1], &r[2], &r[3]) == 4) {
        rows.push_back(r);
      }
    }
    if (rows.size() < 2) throw std::invalid_argument("initial csv needs >= 2 rows");
    return [rows](double x) {
      if (x <= rows.front()[0]) {
        return StateVec{rows.front()[1], rows.front()[2], rows.front()[3]};
      }
      if (x >= rows.back()[0]) {
        return StateVec{rows.back()[1], rows.back()[2], rows.back()[3]};
      }
      std::size_t i = 1;
      while (rows[i][0] < x) ++i;
      const double t = (x - rows[i - 1][0]) / (rows[i][0] - rows[i - 1][0]);
      auto lerp = [&](int c2) { return (1 - t) * rows[i - 1][c2] + t * rows[i][c2]; };
      return StateVec{lerp(1), lerp(2), lerp(3)};
    };
  }
  throw std::invalid_argument("config: initial.kind must be constant|step|csv");
}

std::vector<std::vector<double>> profile_rows(const Profile& prof) {
  std::vector<std::vector<double>> rows;
  rows.reserve(prof.size());
  for (std::size_t i = 0; i < prof.size(); ++i) {
    const Vec6& y = prof.values[i];
    rows.push_back({prof.mesh[i], y[0], y[1], y[2], y[3], y[4], y[5]});
  }
  return rows;
}

Profile solve_profile_from_config(const Json& cfg, const ModelParams& p,
                                  const BoundaryCondition& bc) {
  const double c_plus = cfg.value("c_plus", 0.0);
  const Endstate e = endstate_from_c(p, c_plus);
  return solve_profile(p, bc, e, cfg.value("M", 30.0), cfg.value("tol", 1e-3));
}

ContourSpec parse_contour(const Json& cfg, const HighFreqBound& hf) {
  ContourSpec spec = ContourSpec::for_bound(hf);
  if (cfg.contains("contour")) {
    const Json& j = cfg.at("contour");
    spec.radius = j.value("radius", spec.radius);
    spec.n_points = j.value("n_points", spec.n_points);
    spec.max_rel_step = j.value("max_rel_step", spec.max_rel_step);
    spec.max_points = j.value("max_points", spec.max_points);
  }
  return spec;
}

// ---- commands ------------------------------------------------------------

RunOutcome cmd_classical(const Json& cfg) {
  if (!cfg.contains("dmn")) {
    throw std::invalid_argument("config: 'classical' needs a dmn block "
                                "{v_plus, v_minus, f_cat, f_res}");
  }
  const Json& d = cfg.at("dmn");
  DmnParams p{d.at("v_plus").get<double>(), d.at("v_minus").get<double>(),
              d.at("f_cat").get<double>(), d.at("f_res").get<double>()};
  p.validate();
  Json rep{{"label", "classical baseline"},
           {"config", cfg},
           {"J", drift_J(p)},
           {"D_eff", d_eff(p)},
           {"tau_c", p.tau_c()},
           {"stationary_p_plus", p.f_res * p.tau_c()},
           {"stationary_p_minus", p.f_cat * p.tau_c()}};
  const bool bounded = p.v_minus * p.f_cat - p.v_plus * p.f_res > 0.0;
  rep["bounded_regime"] = bounded;
  rep["mean_length"] = bounded ? Json(mean_length(p)) : Json(nullptr);
  const fs::path out = output_dir(cfg) / "classical.json";
  write_json(out, rep);
  return RunOutcome{0, rep, {out.string()}};
}

RunOutcome cmd_endstate(const Json& cfg) {
  const ModelParams p = parse_params(cfg);
  const double c_plus = cfg.value("c_plus", 0.0);
  const Endstate e = endstate_from_c(p, c_plus);
  const Vec3 res = matrix_B(p, e.state()) * e.state().vec();
  Json rep{{"config", resolved_config(cfg, p)},
           {"endstate", endstate_json(e)},
           {"equilibrium_residual", res.lpNorm<Eigen::Infinity>()},
           {"physicality_margin", physicality_margin(p, c_plus)}};
  const fs::path out = output_dir(cfg) / "endstate.json";
  write_json(out, rep);
  return RunOutcome{0, rep, {out.string()}};
}

RunOutcome cmd_spectral_report(const Json& cfg) {
  const ModelParams p = parse_params(cfg);
  const double c_plus = cfg.value("c_plus", 0.0);
  const Endstate e = endstate_from_c(p, c_plus);
  const QuinticQ q = quintic_q(p, e);
  const ZeroRootCheck zr = zero_root_check(p, e);
  const ImaginaryRootCheck ir = imaginary_root_check(p, e);
  const GooddispResult gd = check_gooddisp(p, e);
  const HighFreqBound hf = high_frequency_bound_constant(p, e);

  Json rep{{"config", resolved_config(cfg, p)},
           {"endstate", endstate_json(e)},
           {"q_coefficients_degree_5_to_0", q.coeffs},
           {"q_at_zero", zr.q_at_zero},
           {"no_extra_zero_root", zr.no_extra_zero_root},
           {"stability_index", stability_index(p, e)},
           {"imaginary_root",
            Json{{"common_positive_root", ir.common_positive_root},
                 {"root_x", ir.common_positive_root ? Json(ir.root_x) : Json(nullptr)},
                 {"resultant_fallback", ir.resultant_fallback},
                 {"resultant", ir.resultant}}},
           {"gooddisp", Json{{"holds", gd.holds},
                             {"xi_max", gd.xi_max},
                             {"n_samples", gd.n_samples},
                             {"max_re_lambda", gd.max_re}}},
           {"alpha", alpha_transport(p, e)},
           {"r_hat", hf.r_hat},
           {"delta", hf.delta}};
  const fs::path out = output_dir(cfg) / "spectral_report.json";
  write_json(out, rep);
  const bool ok = zr.no_extra_zero_root && !ir.common_positive_root && gd.holds;
  return RunOutcome{ok ? 0 : 2, rep, {out.string()}};
}

RunOutcome cmd_dispersion(const Json& cfg) {
  const ModelParams p = parse_params(cfg);
  const double c_plus = cfg.value("c_plus", 0.0);
  const Endstate e = endstate_from_c(p, c_plus);
  std::vector<double> grid;
  if (cfg.contains("xi") && cfg.at("xi").is_array()) {
    grid = cfg.at("xi").get<std::vector<double>>();
  } else {
    const double xi_max = cfg.value("xi_max", 5.0);
    const int n = cfg.value("xi_samples", 101);
    for (int i = 0; i < n; ++i) {
      grid.push_back(-xi_max + 2.0 * xi_max * i / (n - 1));
    }
  }
  const auto samples = dispersion_curves(p, e, grid);
  std::vector<std::vector<double>> rows;
  for (const auto& s : samples) {
    rows.push_back({s.xi, s.lambdas[0].real(), s.lambdas[0].imag(),
                    s.lambdas[1].real(), s.lambdas[1].imag(), s.lambdas[2].real(),
                    s.lambdas[2].imag()});
  }
  const fs::path dir = output_dir(cfg);
  write_csv(dir / "dispersion.csv",
            "xi,re_lambda_1,im_lambda_1,re_lambda_2,im_lambda_2,re_lambda_3,im_lambda_3",
            rows);
  Json rep{{"config", resolved_config(cfg, p)},
           {"endstate", endstate_json(e)},
           {"n_samples", rows.size()},
           {"csv", (dir / "dispersion.csv").string()}};
  write_json(dir / "dispersion.json", rep);
  return RunOutcome{0, rep, {(dir / "dispersion.csv").string(), (dir / "dispersion.json").string()}};
}

RunOutcome cmd_profile(const Json& cfg) {
  const ModelParams p = parse_params(cfg);
  const BoundaryCondition bc = parse_bc(cfg);
  const Profile prof = solve_profile_from_config(cfg, p, bc);
  const fs::path dir = output_dir(cfg);
  write_csv(dir / "profile.csv", "x,p_plus,p_plus_x,p_minus,p_minus_x,c,c_x",
            profile_rows(prof));
  Json rep{{"config", resolved_config(cfg, p)},
           {"endstate", endstate_json(prof.endstate)},
           {"truncation_error", prof.truncation_error},
           {"residual", residual(prof)},
           {"collocation_residual", prof.collocation_residual},
           {"mesh_size", prof.size()},
           {"M", prof.domain_length()}};
  write_json(dir / "profile.json", rep);
  return RunOutcome{0, rep, {(dir / "profile.csv").string(), (dir / "profile.json").string()}};
}

RunOutcome cmd_evans(const Json& cfg) {
  const ModelParams p = parse_params(cfg);
  const BoundaryCondition bc = parse_bc(cfg);
  const Profile prof = solve_profile_from_config(cfg, p, bc);
  const EvansSystem sys(prof);
  const ContourSpec spec = parse_contour(cfg, sys.hf_bound());
  const EvansResult res = winding_number(sys, spec);

  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < res.values.size(); ++i) {
    rows.push_back({res.lambdas[i].real(), res.lambdas[i].imag(),
                    res.values[i].real(), res.values[i].imag(),
                    static_cast<double>(res.splittings[i].n_stable),
                    static_cast<double>(res.splittings[i].n_unstable)});
  }
  const fs::path dir = output_dir(cfg);
  write_csv(dir / "evans.csv", "re_lambda,im_lambda,re_E,im_E,n_stable,n_unstable", rows);
  Json rep{{"config", resolved_config(cfg, p)},
           {"winding_number", res.winding_number},
           {"gooddisp_verdict", res.gooddisp_verdict},
           {"radius", res.radius},
           {"n_points_final", res.n_points_final},
           {"conclusive", res.conclusive},
           {"winding_residual", res.winding_residual},
           {"r_hat", sys.hf_bound().r_hat},
           {"beta", sys.hf_bound().beta_norm},
           {"alpha", sys.hf_bound().alpha_norm},
           {"message", res.message}};
  write_json(dir / "evans.json", rep);
  const bool ok = res.conclusive && res.gooddisp_verdict && res.winding_number == 0;
  return RunOutcome{ok ? 0 : 2, rep,
                    {(dir / "evans.csv").string(), (dir / "evans.json").string()}};
}

RunOutcome cmd_evolve(const Json& cfg) {
  const ModelParams p = parse_params(cfg);
  const BoundaryCondition bc = parse_bc(cfg);
  const GridSpec grid = parse_grid(cfg);
  const InitialData initial = parse_initial(cfg, bc);
  std::vector<double> snaps;
  if (cfg.contains("snapshots")) snaps = cfg.at("snapshots").get<std::vector<double>>();
  const Trajectory traj = evolve(p, bc, initial, grid, snaps);

  const fs::path dir = output_dir(cfg);
  std::vector<std::string> artifacts;
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    std::vector<std::vector<double>> rows;
    for (int j = 0; j < grid.nx; ++j) {
      rows.push_back({j * grid.dx(), traj.states[s][j].p_plus,
                      traj.states[s][j].p_minus, traj.states[s][j].c});
    }
    char name[64];
    std::snprintf(name, sizeof(name), "snapshot_%03zu.csv", s);
    write_csv(dir / name, "x,p_plus,p_minus,c", rows);
    artifacts.push_back((dir / name).string());
  }
  Json rep{{"config", resolved_config(cfg, p)},
           {"stationary", traj.stationary},
           {"min_component", traj.min_component},
           {"limiting_total_density", limiting_total_density(initial, grid.x_far)},
           {"total_density_final", traj.total_density_final},
           {"snapshot_times", traj.times}};
  if (cfg.value("compare_with_profile", false)) {
    const Profile prof = solve_profile_from_config(cfg, p, bc);
    const auto dist = distance_to_profile(traj, prof);
    rep["final_distance_to_profile"] = dist.back();
    rep["distance_to_profile"] = dist;
  }
  write_json(dir / "evolve.json", rep);
  artifacts.push_back((dir / "evolve.json").string());
  return RunOutcome{0, rep, artifacts};
}

RunOutcome cmd_singular(const Json& cfg) {
  const ModelParams p = parse_params(cfg);
  const BoundaryCondition bc = parse_bc(cfg);
  const Json cs = cfg.value("case", Json{{"kind", "I"}});
  const std::string kind_s = cs.value("kind", "I");
  const SlowCase kind = (kind_s == "II") ? SlowCase::II : SlowCase::I;
  const double c_inf = cs.value("c_inf", 0.0);
  const double x_max = cfg.value("x_max", 40.0);

  const CompositeSolution comp = composite(p, bc, kind, c_inf, x_max);
  const fs::path dir = output_dir(cfg);

  std::vector<std::vector<double>> slow_rows, comp_rows;
  const int n = 2001;
  for (int i = 0; i < n; ++i) {
    const double x = x_max * i / (n - 1);
    const StateVec s = comp.slow().state(x);
    const StateVec c2 = comp.at(x);
    slow_rows.push_back({x, s.p_plus, s.p_minus, s.c});
    comp_rows.push_back({x, c2.p_plus, c2.p_minus, c2.c});
  }
  write_csv(dir / "singular_slow.csv", "x,p_plus,p_minus,c", slow_rows);
  write_csv(dir / "singular_composite.csv", "x,p_plus,p_minus,c", comp_rows);

  Json rep{{"config", resolved_config(cfg, p)},
           {"case", kind_s},
           {"alpha_cons", comp.slow().alpha_cons()},
           {"c_inf", comp.slow().c_inf()},
           {"fast_layer", Json{{"p_minus_jump", comp.fast().p_minus_jump},
                               {"rate_in_stretched_variable", p.nu_minus}}},
           {"note", "outer-error trend vs d is an empirical expectation; no rate is asserted"}};

  if (cfg.contains("d_sweep")) {
    Json table = Json::array();
    const double c_plus = (kind == SlowCase::II) ? c_inf : 0.0;
    for (double dval : cfg.at("d_sweep").get<std::vector<double>>()) {
      ModelParams pd = p;
      pd.d = dval;
      const Endstate e = endstate_from_c(pd, c_plus);
      const Profile prof = solve_profile(pd, bc, e, cfg.value("M", 30.0),
                                         cfg.value("tol", 1e-3));
      const ProfileInterpolant interp(prof);
      // fixed window so the sweep is comparable across d (all of it lies
      // outside the layer for every d in the sweep)
      const double lo = cfg.value("outer_from", 0.5);
      const double hi = 0.8 * prof.domain_length();
      double sup = 0.0;
      for (int i = 0; i <= 800; ++i) {
        const double x = lo + (hi - lo) * i / 800.0;
        const Vec6 y = interp(x);
        const StateVec s = comp.slow().state(x);
        sup = std::max({sup, std::abs(s.p_plus - y[0]), std::abs(s.p_minus - y[2]),
                        std::abs(s.c - y[4])});
      }
      table.push_back(Json{{"d", dval}, {"sup_error_outer", sup}});
    }
    rep["comparison"] = table;
  }
  write_json(dir / "singular.json", rep);
  return RunOutcome{0, rep,
                    {(dir / "singular_slow.csv").string(),
                     (dir / "singular_composite.csv").string(),
                     (dir / "singular.json").string()}};
}

RunOutcome cmd_pipeline(const Json& cfg) {
  const ModelParams p = parse_params(cfg);
  const BoundaryCondition bc = parse_bc(cfg);
  const fs::path dir = output_dir(cfg);
  Json verdict{{"config", resolved_config(cfg, p)}};

  const RunOutcome endst = cmd_endstate(cfg);
  verdict["endstate"] = endst.verdict.at("endstate");

  const RunOutcome spectral = cmd_spectral_report(cfg);
  const bool gooddisp_const = spectral.verdict.at("gooddisp").at("holds").get<bool>();

  bool profile_found = false;
  Json evolution_agrees = nullptr;
  int winding = -1;
  bool gooddisp = false;

  const RunOutcome profr = cmd_profile(cfg);
  profile_found = true;
  (void)profr;

  const RunOutcome evansr = cmd_evans(cfg);
  winding = evansr.verdict.at("winding_number").get<int>();
  gooddisp = gooddisp_const && evansr.verdict.at("gooddisp_verdict").get<bool>();

  Json evolve_cfg = cfg;
  evolve_cfg["compare_with_profile"] = true;
  const RunOutcome evor = cmd_evolve(evolve_cfg);
  const double agree_tol = cfg.value("agree_tol", 1e-2);
  const double final_dist = evor.verdict.at("final_distance_to_profile").get<double>();
  evolution_agrees = final_dist < agree_tol;

  verdict["profile_found"] = profile_found;
  verdict["gooddisp"] = gooddisp;
  verdict["winding_number"] = winding;
  verdict["evolution_agrees"] = evolution_agrees;
  verdict["final_distance_to_profile"] = final_dist;
  write_json(dir / "pipeline.json", verdict);

  const bool ok = profile_found && gooddisp && winding == 0 &&
                  evolution_agrees.get<bool>();
  return RunOutcome{ok ? 0 : 2, verdict, {(dir / "pipeline.json").string()}};
}

}  // namespace

Json preset_params(const std::string& name) {
  if (name == "fig3") {
    return Json{{"d", 0.1}, {"D", 1.0},      {"omega", 1.0}, {"nu_minus", 1.0},
                {"f_cat", 1.0}, {"u_plus", 1.0}, {"k", 1.0}};
  }
  if (name == "typical") {
    // d, u_plus and k are deliberately absent: the source only lists
    // D, omega, nu_minus and f_cat for this regime.
    return Json{{"D", 0.5}, {"omega", 0.15}, {"nu_minus", 0.05}, {"f_cat", 0.0005}};
  }
  throw std::invalid_argument("unknown preset '" + name + "' (use fig3 or typical)");
}

RunOutcome run(Json config) {
  if (!config.contains("command")) {
    throw std::invalid_argument("config: missing 'command'");
  }
  if (config.contains("threads")) {
    set_thread_count(config.at("threads").get<int>());
  }
  if (!config.contains("seed")) config["seed"] = 0;
  const std::string cmd = config.at("command").get<std::string>();
  if (cmd == "classical") return cmd_classical(config);
  if (cmd == "endstate") return cmd_endstate(config);
  if (cmd == "spectral-report") return cmd_spectral_report(config);
  if (cmd == "dispersion") return cmd_dispersion(config);
  if (cmd == "profile") return cmd_profile(config);
  if (cmd == "evans") return cmd_evans(config);
  if (cmd == "evolve") return cmd_evolve(config);
  if (cmd == "singular") return cmd_singular(config);
  if (cmd == "pipeline") return cmd_pipeline(config);
  throw std::invalid_argument("unknown command '" + cmd + "'");
}

}  // namespace mtstab::cli

#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include "memkernel/error.hpp"
#include "memkernel/mechanics.hpp"
#include "memkernel/oracle.hpp"
#include "memkernel/second_variation.hpp"

#ifndef MEMKERNEL_VERSION
#define MEMKERNEL_VERSION "unknown"
#endif

namespace memkernel::cli {

using nlohmann::json;

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Built {
  SurfaceField sf;
  GeometryField geo;
};

Built build(const RunConfig& cfg, int n1, int n2, bool sampled) {
  const GridSpec grid = default_grid(cfg.surface, n1, n2);
  SurfaceField sf = sampled ? make_sampled_surface(cfg.surface, grid) : make_surface(cfg.surface, grid);
  GeometryField geo = compute_geometry(sf);
  return {std::move(sf), std::move(geo)};
}

bool rotation_invariant(const EnergyModel& m) {
  return std::none_of(m.terms.begin(), m.terms.end(), [](const EnergyTerm& t) { return t.kind == TermKind::Magnetic; });
}

json vec(const Eigen::Vector3d& v) { return {v(0), v(1), v(2)}; }

}  // namespace

std::string observed_order(double coarse, double fine) {
  const double floor = 100 * std::numeric_limits<double>::epsilon();
  if (!(coarse > floor) || !(fine > floor)) return "exact";
  return fmt(std::log2(coarse / fine));
}

std::vector<ConvergenceRow> convergence_table(const std::vector<int>& grids, const std::vector<double>& residuals) {
  std::vector<ConvergenceRow> rows;
  for (size_t i = 0; i < grids.size(); ++i)
    rows.push_back({grids[i], residuals[i], i == 0 ? "" : observed_order(residuals[i - 1], residuals[i])});
  return rows;
}

void Report::check(const std::string& name, double value, double bound) {
  results[name] = value;
  results["bounds"][name] = bound;
  if (!(std::abs(value) <= bound)) failures.push_back(name + " = " + fmt(value) + " exceeds bound " + fmt(bound));
}

void Report::add_table(const std::string& name, const std::vector<ConvergenceRow>& rows) {
  CsvFile f{name, {"grid", "residual", "observed_order"}, {}};
  json table = json::array();
  for (const auto& r : rows) {
    f.rows.push_back({std::to_string(r.grid), fmt(r.residual), r.observed_order});
    table.push_back({{"grid", r.grid}, {"residual", r.residual}, {"observed_order", r.observed_order}});
  }
  convergence[name] = table;
  csv.push_back(std::move(f));
}

json Report::to_json(const RunConfig* cfg) const {
  json j;
  j["command"] = command;
  j["metadata"] = {{"memkernel", MEMKERNEL_VERSION},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"config", cfg ? cfg->echo : json(nullptr)},
                   {"seed", cfg ? cfg->seed : 0}};
  j["results"] = results;
  j["convergence"] = convergence;
  j["failures"] = failures;
  j["pass"] = passed();
  return j;
}

void Report::write(const std::string& dir, const RunConfig* cfg) const {
  std::filesystem::create_directories(dir);
  std::ofstream(std::filesystem::path(dir) / "report.json") << to_json(cfg).dump(2) << '\n';
  for (const auto& f : csv) {
    std::ofstream out(std::filesystem::path(dir) / (f.name + ".csv"));
    for (size_t i = 0; i < f.header.size(); ++i) out << (i ? "," : "") << f.header[i];
    out << '\n';
    for (const auto& row : f.rows) {
      for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << '\n';
    }
  }
}

Report cmd_check_identities(const RunConfig& cfg) {
  Report rep;
  rep.command = "check-identities";
  const std::vector<int> levels = cfg.levels.empty() ? std::vector<int>{32, 64, 128, 256} : cfg.levels;
  const double analytic_bound = cfg.bound("analytic", 1e-10);
  const double order_bound = cfg.bound("order", 3.5);

  std::vector<double> ga, ca;
  for (int n : levels) {
    const Built b = build(cfg, n, n, false);
    const IdentityReport r = check_identities(b.sf, b.geo, cfg.seed);
    ga.push_back(r.gauss);
    ca.push_back(r.codazzi);
  }
  rep.add_table("gauss_analytic", convergence_table(levels, ga));
  rep.add_table("codazzi_analytic", convergence_table(levels, ca));
  rep.check("gauss_analytic_max", *std::max_element(ga.begin(), ga.end()), analytic_bound);
  rep.check("codazzi_analytic_max", *std::max_element(ca.begin(), ca.end()), analytic_bound);

  if (!default_grid(cfg.surface, 8, 8).doubly_periodic()) {
    rep.results["sampled"] = "skipped: sampled jets need a doubly periodic grid";
    return rep;
  }
  std::vector<double> gs, cs, ks;
  for (int n : levels) {
    const Built b = build(cfg, n, n, true);
    const IdentityReport r = check_identities(b.sf, b.geo, cfg.seed);
    gs.push_back(r.gauss);
    cs.push_back(r.codazzi);
    ks.push_back(r.christoffel);
  }
  const auto tg = convergence_table(levels, gs), tc = convergence_table(levels, cs);
  rep.add_table("gauss_sampled", tg);
  rep.add_table("codazzi_sampled", tc);
  rep.add_table("christoffel_sampled", convergence_table(levels, ks));
  // Orders are bounded only while the coarse residual is above the noise floor: below it the
  // second-derivative roundoff grows like 1/h^2 and the observed order is meaningless.
  const double noise = cfg.bound("noise_floor", 1e-10);
  auto min_order = [noise](const std::vector<ConvergenceRow>& rows) {
    double m = std::numeric_limits<double>::infinity();
    for (size_t i = 1; i < rows.size(); ++i)
      if (rows[i].observed_order != "exact" && rows[i - 1].residual > noise)
        m = std::min(m, std::stod(rows[i].observed_order));
    return m;
  };
  for (const auto& [name, rows] : {std::pair{"gauss", tg}, std::pair{"codazzi", tc}}) {
    const double m = min_order(rows);
    const std::string key = std::string(name) + "_sampled_min_order";
    rep.results[key] = std::isfinite(m) ? json(m) : json("exact");
    rep.results["bounds"][key] = order_bound;
    if (std::isfinite(m) && m < order_bound)
      rep.failures.push_back(key + " = " + fmt(m) + " is below " + fmt(order_bound));
  }
  return rep;
}

Report cmd_shape_residual(const RunConfig& cfg) {
  Report rep;
  rep.command = "shape-residual";
  const Built b = build(cfg, cfg.n1, cfg.n2, cfg.sampled);
  const StressField s = euler_lagrange(cfg.model, b.sf, b.geo);
  const auto closed = shape_residual_closed_form(cfg.model, b.sf, b.geo);

  CsvFile pts{"shape_residual", {"xi1", "xi2", "el_normal", "el_tangential", "closed_normal", "cross_path_gap"}, {}};
  double max_el = 0, max_t = 0, max_gap = 0, min_n = std::numeric_limits<double>::infinity(), max_n = -min_n;
  for (int i = 0; i < b.sf.grid.n1; ++i)
    for (int j = 0; j < b.sf.grid.n2; ++j) {
      const int p = b.sf.grid.index(i, j);
      const double w = b.geo.sqrt_g[p];
      const Eigen::Vector3d& n = b.geo.normal[p];
      const double en = s.EL[p].dot(n) / w;
      const double et = (s.EL[p] - s.EL[p].dot(n) * n).norm() / w;
      const double gap = (s.EL[p] - closed[p]).norm() / w;
      max_el = std::max(max_el, s.EL[p].norm() / w);
      max_t = std::max(max_t, et);
      max_gap = std::max(max_gap, gap);
      min_n = std::min(min_n, en);
      max_n = std::max(max_n, en);
      pts.rows.push_back({fmt(b.sf.grid.node(0, i)), fmt(b.sf.grid.node(1, j)), fmt(en), fmt(et),
                          fmt(closed[p].dot(n) / w), fmt(gap)});
    }
  rep.csv.push_back(std::move(pts));
  rep.results["max_abs_el"] = max_el;
  rep.results["normal_min"] = min_n;
  rep.results["normal_max"] = max_n;
  rep.results["tangential_max"] = max_t;
  rep.check("cross_path_gap", max_gap, cfg.bound("cross_path", 1e-8 * std::max(1.0, max_el)));
  if (cfg.tolerance.contains("max_el")) rep.check("max_abs_el_bound", max_el, cfg.bound("max_el", 0));

  if (!cfg.levels.empty() && default_grid(cfg.surface, 8, 8).doubly_periodic()) {
    // sampled against analytic jets on the same grid
    std::vector<double> res;
    for (int n : cfg.levels) {
      const Built a = build(cfg, n, n, false), sm = build(cfg, n, n, true);
      const StressField ea = euler_lagrange(cfg.model, a.sf, a.geo), es = euler_lagrange(cfg.model, sm.sf, sm.geo);
      double m = 0;
      for (int p = 0; p < a.sf.size(); ++p) m = std::max(m, (ea.EL[p] - es.EL[p]).norm() / a.geo.sqrt_g[p]);
      res.push_back(m);
    }
    rep.add_table("shape_residual_convergence", convergence_table(cfg.levels, res));
  }
  return rep;
}

Report cmd_stress(const RunConfig& cfg) {
  Report rep;
  rep.command = "stress";
  const Built b = build(cfg, cfg.n1, cfg.n2, cfg.sampled);
  const StressField s = angular_stress(cfg.model, b.sf, b.geo);

  CsvFile pts{"stress",
              {"xi1", "xi2", "f1_x", "f1_y", "f1_z", "f2_x", "f2_y", "f2_z", "f11_x", "f11_y", "f11_z", "f12_x",
               "f12_y", "f12_z", "f22_x", "f22_y", "f22_z", "m1_x", "m1_y", "m1_z", "m2_x", "m2_y", "m2_z"},
              {}};
  double max_f = 0, max_fab = 0, max_m = 0, div_gap = 0, fd_gap = 0, ang = 0, scale = 0;
  for (int i = 0; i < b.sf.grid.n1; ++i)
    for (int j = 0; j < b.sf.grid.n2; ++j) {
      const int p = b.sf.grid.index(i, j);
      std::vector<std::string> row{fmt(b.sf.grid.node(0, i)), fmt(b.sf.grid.node(1, j))};
      auto put = [&row](const Eigen::Vector3d& v) {
        for (int k = 0; k < 3; ++k) row.push_back(fmt(v(k)));
      };
      for (int a = 0; a < 2; ++a) put(s.f_tilde_a[p][a]);
      put(s.f_tilde_ab[p][0][0]);
      put(s.f_tilde_ab[p][0][1]);
      put(s.f_tilde_ab[p][1][1]);
      for (int a = 0; a < 2; ++a) put(s.m_tilde_a[p][a]);
      pts.rows.push_back(std::move(row));
      for (int a = 0; a < 2; ++a) {
        max_f = std::max(max_f, s.f_tilde_a[p][a].norm());
        max_m = std::max(max_m, s.m_tilde_a[p][a].norm());
        for (int c = 0; c < 2; ++c) max_fab = std::max(max_fab, s.f_tilde_ab[p][a][c].norm());
      }
      scale = std::max({scale, s.EL[p].norm(), s.source[p].norm(), s.force_div[p].norm()});
      div_gap = std::max(div_gap, (s.EL[p] - s.force_div[p] - s.source[p]).norm());
      if (!s.force_div_fd.empty()) fd_gap = std::max(fd_gap, (s.force_div_fd[p] - s.force_div[p]).norm());
      ang = std::max(ang, s.angular_residual[p].norm());
    }
  rep.csv.push_back(std::move(pts));
  if (cfg.tolerance.contains("max_f_a")) rep.check("max_f_a", max_f, cfg.bound("max_f_a", 0));
  else rep.results["max_f_a"] = max_f;
  rep.results["max_f_ab"] = max_fab;
  rep.results["max_m_a"] = max_m;
  if (!s.force_div_fd.empty()) rep.results["divergence_fd_gap"] = fd_gap;
  const double tol = cfg.bound("stress", 1e-8);
  rep.check("divergence_gap", div_gap, tol * std::max(1.0, scale));
  if (rotation_invariant(cfg.model)) rep.check("angular_residual", ang, tol * std::max(1.0, scale + max_f));
  else rep.results["angular_residual"] = ang;
  if (b.sf.closed) {
    const Balance bal = global_balance(cfg.model, b.sf, b.geo);
    rep.results["force"] = vec(bal.force);
    rep.results["torque"] = vec(bal.torque);
    const double btol = cfg.bound("balance", 1e-9) * std::max(1.0, scale);
    if (!cfg.model.depends_on_position()) rep.check("force_norm", bal.force.norm(), btol);
    else rep.results["force_norm"] = bal.force.norm();
    if (rotation_invariant(cfg.model)) rep.check("torque_norm", bal.torque.norm(), btol);
    else rep.results["torque_norm"] = bal.torque.norm();
  }
  return rep;
}

Report cmd_variation(const RunConfig& cfg) {
  Report rep;
  rep.command = "variation";
  const Built b = build(cfg, cfg.n1, cfg.n2, cfg.sampled);
  VariationDef vd = *cfg.variation;
  if (vd.kind == VariationKind::RandomSmooth) vd.seed = cfg.seed;
  const VariationField W = make_variation(vd, b.sf, b.geo);
  rep.results["energy"] = total_energy(cfg.model, b.sf);

  const auto first = match_first_variation(cfg.model, b.sf, b.geo, W);
  rep.results["first"] = {{"pre_ibp", first.pre_ibp},   {"post_ibp", first.post_ibp},
                          {"fd", first.fd.value},       {"fd_error", first.fd.error},
                          {"gap", first.gap},           {"relative_gap", first.relative_gap()},
                          {"tolerance", first.fd.tolerance()}};
  const double b1 = cfg.bound("first", 1e-6);
  if (!(first.gap <= first.fd.tolerance() || first.relative_gap() < b1))
    rep.failures.push_back("first-variation gap " + fmt(first.gap) + " exceeds both the oracle tolerance and " +
                           fmt(b1) + " relative");

  CsvFile steps{"variation_steps", {"t", "first_raw", "second_raw"}, {}};
  const OracleConfig oc;
  try {
    const auto second = oracle_second_variation_match(cfg.model, b.sf, b.geo, W);
    rep.results["second"] = {{"analytic", second.analytic}, {"fd", second.fd.value},
                             {"fd_error", second.fd.error}, {"gap", second.gap},
                             {"relative_gap", second.relative_gap()}, {"tolerance", second.fd.tolerance()}};
    const double b2 = cfg.bound("second", 1e-5);
    if (!(second.gap <= second.fd.tolerance() || second.relative_gap() < b2))
      rep.failures.push_back("second-variation gap " + fmt(second.gap) + " exceeds both the oracle tolerance and " +
                             fmt(b2) + " relative");
    for (size_t i = 0; i < oc.t_steps.size(); ++i)
      steps.rows.push_back({fmt(oc.t_steps[i]), fmt(first.fd.raw[i]), fmt(second.fd.raw[i])});
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnsupportedTerm) throw;
    rep.results["second"] = {{"unsupported", e.what()}};
    for (size_t i = 0; i < oc.t_steps.size(); ++i)
      steps.rows.push_back({fmt(oc.t_steps[i]), fmt(first.fd.raw[i]), ""});
  }
  rep.csv.push_back(std::move(steps));
  return rep;
}

Report cmd_catalog() {
  Report rep;
  rep.command = "catalog";
  rep.results = registry();
  return rep;
}

int run(int argc, char** argv) {
  CLI::App app{"memkernel: covariant variational calculus for fluid membranes"};
  app.require_subcommand(1);
  std::string config, out = ".";
  std::optional<std::uint64_t> seed;
  std::vector<CLI::App*> subs;
  for (const char* name : {"check-identities", "shape-residual", "stress", "variation"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON run configuration")->required();
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "overrides the configured seed");
    subs.push_back(sub);
  }
  auto* cat = app.add_subcommand("catalog", "list registered surfaces, terms and variations");
  cat->add_option("--out", out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cat->parsed()) {
      const Report rep = cmd_catalog();
      std::cout << rep.results.dump(2) << '\n';
      if (cat->count("--out")) rep.write(out, nullptr);
      return 0;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    RunConfig cfg = load_config(config, command);
    if (seed) cfg.seed = *seed;
    Report rep;
    if (command == "check-identities") rep = cmd_check_identities(cfg);
    else if (command == "shape-residual") rep = cmd_shape_residual(cfg);
    else if (command == "stress") rep = cmd_stress(cfg);
    else rep = cmd_variation(cfg);
    rep.write(out, &cfg);
    std::cout << rep.command << ": " << (rep.passed() ? "pass" : "FAIL") << '\n';
    for (const auto& f : rep.failures) std::cout << "  " << f << '\n';
    return rep.passed() ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::DegenerateParametrization:
      case ErrorCode::MissingJets:
      case ErrorCode::GridMismatch: return 1;
      default: return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace memkernel::cli

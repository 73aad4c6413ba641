#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gapspectra/harness.hpp"
#include "json.hpp"

using namespace gapspectra;
using nlohmann::json;

namespace {

json cx(const cplx& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json mat(const Mat2& M) {
  return json::array(
      {json::array({cx(M(0, 0)), cx(M(0, 1))}), json::array({cx(M(1, 0)), cx(M(1, 1))})});
}

struct Overrides {
  std::optional<double> m, eps, L, trunc_radius;
  std::optional<int> N, quad_panels, quad_order;
  std::vector<double> window;
  std::optional<std::string> op, threshold, sheet;
  std::string out;
};

void apply_overrides(RunConfig& cfg, const Overrides& ov) {
  if (ov.m) {
    if (!(*ov.m > 0)) throw ConfigError("--m must be > 0");
    cfg.m = *ov.m;
  }
  if (ov.eps) {
    if (!(*ov.eps > 0)) throw ConfigError("--eps must be > 0");
    cfg.eps = *ov.eps;
  }
  if (ov.L) {
    if (!(*ov.L > 0)) throw ConfigError("--L must be > 0");
    cfg.grid.L = *ov.L;
  }
  if (ov.N) {
    if (*ov.N < 16) throw ConfigError("--N must be >= 16");
    cfg.grid.N = *ov.N;
  }
  if (ov.L || ov.N) {
    if (!(cfg.grid.L > 0 && cfg.grid.N >= 16))
      throw ConfigError("grid overrides need both L and N set (config or flags)");
    cfg.has_grid = true;
  }
  if (!ov.window.empty()) {
    if (!(ov.window[0] < ov.window[1])) throw ConfigError("--window must satisfy lo < hi");
    cfg.window = {ov.window[0], ov.window[1]};
  }
  if (ov.op) cfg.op = *ov.op;
  if (ov.threshold)
    cfg.threshold = *ov.threshold == "minus_m" ? Threshold::minus_m : Threshold::plus_m;
  if (ov.sheet) cfg.sheet = *ov.sheet == "second" ? Sheet::second : Sheet::physical;
  if (ov.quad_panels) {
    if (*ov.quad_panels < 1) throw ConfigError("--quad-panels must be >= 1");
    cfg.quad.panels = *ov.quad_panels;
  }
  if (ov.quad_order) {
    if (*ov.quad_order < 2 || *ov.quad_order > 64)
      throw ConfigError("--quad-order must lie in [2, 64]");
    cfg.quad.order = *ov.quad_order;
  }
  if (ov.trunc_radius) {
    if (*ov.trunc_radius < 0) throw ConfigError("--trunc-radius must be >= 0");
    cfg.quad.radius = *ov.trunc_radius;
  }
  if (!ov.out.empty()) cfg.out_dir = ov.out;
}

void require_potential(const RunConfig& cfg) {
  if (!cfg.has_potential) throw ConfigError("config: this subcommand needs a potential");
}

double require_eps(const RunConfig& cfg) {
  if (!cfg.eps) throw ConfigError("config: this subcommand needs eps");
  return *cfg.eps;
}

void require_grid(const RunConfig& cfg) {
  if (!cfg.has_grid) throw ConfigError("config: this subcommand needs grid {L, N}");
}

double sch_potential_entry(const RunConfig& cfg, double x) {
  return cfg.potential.evaluate(x)(0, 0).real();
}

json cmd_moments(const RunConfig& cfg) {
  require_potential(cfg);
  const MomentSet ms = compute_all(cfg.potential, cfg.m, cfg.tol);
  json j;
  j["U"] = mat(ms.U);
  j["F_plus"] = mat(ms.F_plus);
  j["F_minus"] = mat(ms.F_minus);
  j["moment_norms"] = ms.moment_norms;
  j["sch_cross"] = cx(ms.sch_cross);
  return j;
}

json prediction_json(const Prediction& p) {
  json terms = json::array();
  for (const auto& t : p.order_terms)
    terms.push_back({{"power", t.power}, {"coeff", cx(t.coeff)}, {"log_power", t.log_power}});
  return json{{"value", cx(p.value)},
              {"order_terms", terms},
              {"error_order", p.error_order},
              {"source", p.source},
              {"band_unit", p.band_unit}};
}

json cmd_predict(const RunConfig& cfg) {
  const double eps = require_eps(cfg);
  Prediction p;
  if (cfg.prediction == "dirac_two_term") {
    require_potential(cfg);
    const MomentSet ms = compute_all(cfg.potential, cfg.m, cfg.tol);
    p = predict_dirac_second_order(ms, cfg.m, eps, cfg.threshold);
  } else if (cfg.prediction == "schrodinger_short") {
    require_potential(cfg);
    const cplx u = compute_U(cfg.potential, cfg.tol)(0, 0);
    const cplx cross = compute_sch_cross(cfg.potential, cfg.tol);
    p = predict_schrodinger_short(u, cross, cfg.m, eps, cfg.terms);
  } else if (cfg.prediction == "schrodinger_long") {
    p = predict_schrodinger_long(cfg.m, eps);
  } else if (cfg.prediction == "dirac_long_range") {
    p = predict_dirac_long(cfg.m, eps);
  } else if (cfg.prediction == "comparison") {
    double lam;
    if (cfg.lambdaS) {
      lam = *cfg.lambdaS;
    } else if (cfg.has_potential && cfg.has_grid) {
      const auto g = schrodinger_ground_state(
          [&cfg](double x) { return sch_potential_entry(cfg, x); }, cfg.m, eps, cfg.grid);
      if (!g)
        throw ConfigError("comparison: no Schrodinger ground state on this grid; give lambdaS");
      lam = g->lambda;
    } else {
      throw ConfigError("comparison needs lambdaS or a potential plus grid to compute it");
    }
    p = predict_comparison(lam, cfg.m, eps);
  } else {
    throw ConfigError("config: unknown prediction " + cfg.prediction);
  }
  return prediction_json(p);
}

json kappa_root_json(const KappaRoot& r, Sheet sheet) {
  return json{{"kappa", cx(r.kappa)},
              {"z", cx(r.z)},
              {"residual", r.residual},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"no_eigenvalue", r.no_eigenvalue},
              {"winding", r.winding},
              {"sheet", sheet == Sheet::second ? "second" : "physical"}};
}

json cmd_solve_bs(const RunConfig& cfg) {
  require_potential(cfg);
  const double eps = require_eps(cfg);
  const KappaRoot r =
      cfg.sheet == Sheet::second
          ? find_resonance(cfg.potential, cfg.m, eps, cfg.quad, nullptr, cfg.tol)
          : find_bound_state(cfg.potential, cfg.m, eps, cfg.threshold, cfg.quad, nullptr,
                             cfg.winding_check, cfg.tol);
  return kappa_root_json(r, cfg.sheet);
}

json cmd_solve_grid(const RunConfig& cfg) {
  require_potential(cfg);
  const double eps = require_eps(cfg);
  require_grid(cfg);
  json j;
  if (cfg.op == "schrodinger") {
    const auto g = schrodinger_ground_state(
        [&cfg](double x) { return sch_potential_entry(cfg, x); }, cfg.m, eps, cfg.grid);
    if (!g) {
      j["no_eigenvalue"] = true;
    } else {
      j["lambda"] = g->lambda;
      j["eigenvector_norm_tail"] = g->eigenvector_norm_tail;
      j["tail_ok"] = g->tail_ok;
    }
    return j;
  }
  std::pair<double, double> window =
      cfg.window ? *cfg.window
                 : (cfg.threshold == Threshold::plus_m
                        ? std::pair<double, double>{0.0, cfg.m * (1.0 - 1e-9)}
                        : std::pair<double, double>{-cfg.m * (1.0 - 1e-9), 0.0});
  const auto evs = dirac_eigen_in_gap(cfg.potential, cfg.m, eps, cfg.grid, window);
  j["window"] = {window.first, window.second};
  json arr = json::array();
  for (const auto& e : evs)
    arr.push_back({{"z", cx(e.z)},
                   {"in_gap_margin", e.in_gap_margin},
                   {"eigenvector_norm_tail", e.eigenvector_norm_tail},
                   {"tail_ok", e.tail_ok}});
  j["eigenvalues"] = std::move(arr);
  return j;
}

json cmd_solve_minmax(const RunConfig& cfg) {
  require_potential(cfg);
  const double eps = require_eps(cfg);
  require_grid(cfg);
  const MinmaxResult r = solve_minmax(cfg.potential, cfg.m, eps, cfg.grid);
  json trace = json::array();
  for (const auto& s : r.mu_trace) trace.push_back({{"lambda", s.lambda}, {"mu", s.mu}});
  return json{{"gamma0", r.gamma0},
              {"gamma1", r.gamma1},
              {"at_threshold", r.at_threshold},
              {"coupling_flagged", r.coupling_flagged},
              {"mu_trace", std::move(trace)}};
}

json report_json_value(const SweepReport& rep) {
  // reuse the writer for a consistent on-disk/console shape
  const std::string tmp =
      (std::filesystem::temp_directory_path() / "gapspectra_report_echo.json").string();
  write_json_report(rep, tmp);
  std::ifstream in(tmp);
  json j;
  in >> j;
  std::filesystem::remove(tmp);
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gapspectra: weakly coupled gap eigenvalues and resonances of 1d Dirac operators "
               "by Birman-Schwinger, grid, and min-max routes"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  auto add_sub = [&](const char* name, const char* desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "JSON config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", ov.out, "output directory");
    sub->add_option("--m", ov.m, "mass override");
    sub->add_option("--eps", ov.eps, "coupling override");
    sub->add_option("--L", ov.L, "grid half-length override");
    sub->add_option("--N", ov.N, "grid cell count override");
    sub->add_option("--window", ov.window, "eigenvalue window lo hi")->expected(2);
    sub->add_option("--operator", ov.op, "dirac | schrodinger")
        ->check(CLI::IsMember({"dirac", "schrodinger"}));
    sub->add_option("--threshold", ov.threshold, "plus_m | minus_m")
        ->check(CLI::IsMember({"plus_m", "minus_m"}));
    sub->add_option("--sheet", ov.sheet, "physical | second")
        ->check(CLI::IsMember({"physical", "second"}));
    sub->add_option("--quad-panels", ov.quad_panels, "composite quadrature panel budget");
    sub->add_option("--quad-order", ov.quad_order, "Gauss-Legendre order per panel");
    sub->add_option("--trunc-radius", ov.trunc_radius, "kernel truncation radius (0 = derive)");
    return sub;
  };

  CLI::App* c_moments = add_sub("moments", "moment matrices U, F+, F- and moment norms");
  CLI::App* c_predict = add_sub("predict", "closed-form expansion values with error orders");
  CLI::App* c_bs = add_sub("solve-bs", "Birman-Schwinger characteristic-function root");
  CLI::App* c_grid = add_sub("solve-grid", "finite-difference gap eigenvalues");
  CLI::App* c_minmax = add_sub("solve-minmax", "variational levels gamma0, gamma1");
  CLI::App* c_sweep = add_sub("sweep", "eps sweep across methods with CSV/JSON report");
  CLI::App* c_fit = add_sub("fit", "re-fit coefficients or long-range ratios of a report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg = parse_config_file(config_path);
    apply_overrides(cfg, ov);
    const std::filesystem::path out_dir(cfg.out_dir.empty() ? "." : cfg.out_dir);
    std::filesystem::create_directories(out_dir);

    json out;
    std::string out_name;
    if (c_moments->parsed()) {
      out = cmd_moments(cfg);
      out_name = "moments.json";
    } else if (c_predict->parsed()) {
      out = cmd_predict(cfg);
      out_name = "predict.json";
    } else if (c_bs->parsed()) {
      out = cmd_solve_bs(cfg);
      out_name = "solve_bs.json";
    } else if (c_grid->parsed()) {
      out = cmd_solve_grid(cfg);
      out_name = "solve_grid.json";
    } else if (c_minmax->parsed()) {
      out = cmd_solve_minmax(cfg);
      out_name = "solve_minmax.json";
    } else if (c_sweep->parsed()) {
      SweepReport rep = run_sweep(cfg);
      if (cfg.prediction == "dirac_two_term") {
        try {
          const MomentSet ms = compute_all(cfg.potential, cfg.m, cfg.tol);
          fit_coefficients(rep, ms);
        } catch (const ConfigError&) {
          // fewer than 4 usable rows (or missing moment metadata): report without a fit
        }
      } else if (cfg.prediction == "dirac_long_range" && cfg.has_grid) {
        fit_long_range(rep, cfg);
      }
      write_csv(rep, (out_dir / "report.csv").string());
      write_json_report(rep, (out_dir / "report.json").string());
      out = report_json_value(rep);
      out_name.clear();  // already written
    } else if (c_fit->parsed()) {
      if (cfg.report_path.empty())
        throw ConfigError("config: fit needs \"report\": path to a sweep report");
      SweepReport rep = parse_report_file(cfg.report_path);
      RunConfig inner = parse_config_text(rep.config_dump.empty() ? "{}" : rep.config_dump);
      if (cfg.fit_kind == "coefficients") {
        if (!inner.has_potential)
          throw ConfigError("fit: the report's embedded config has no potential");
        const MomentSet ms = compute_all(inner.potential, rep.m, rep.tol);
        fit_coefficients(rep, ms);
      } else {
        fit_long_range(rep, inner);
      }
      write_csv(rep, (out_dir / "report.csv").string());
      write_json_report(rep, (out_dir / "report.json").string());
      out = report_json_value(rep);
      out_name.clear();
    }

    if (!out_name.empty()) {
      std::ofstream f(out_dir / out_name, std::ios::binary);
      if (!f) throw ConfigError("cannot open output file " + (out_dir / out_name).string());
      f << out.dump(2) << '\n';
    }
    std::cout << out.dump(2) << std::endl;
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << std::endl;
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 3;
  }
}

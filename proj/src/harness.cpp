#include "gapspectra/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace gapspectra {

using nlohmann::json;

namespace {

void require_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError("config: " + where + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("config: unknown key \"" + it.key() + "\" in " + where);
}

double require_number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError("config: " + what + " must be a number");
  return j.get<double>();
}

int require_int(const json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ConfigError("config: " + what + " must be an integer");
  return j.get<int>();
}

std::string require_string(const json& j, const std::string& what) {
  if (!j.is_string()) throw ConfigError("config: " + what + " must be a string");
  return j.get<std::string>();
}

PotentialSpec parse_potential(const json& j) {
  require_keys(j, "potential", {"family", "params", "tabulated"});
  if (j.contains("tabulated")) {
    if (j.contains("family") || j.contains("params"))
      throw ConfigError("config: potential takes either {family, params} or {tabulated}");
    return make_tabulated(require_string(j["tabulated"], "potential.tabulated"));
  }
  if (!j.contains("family")) throw ConfigError("config: potential needs family or tabulated");
  std::vector<double> params;
  if (j.contains("params")) {
    if (!j["params"].is_array()) throw ConfigError("config: potential.params must be an array");
    for (const auto& p : j["params"]) params.push_back(require_number(p, "potential.params entry"));
  }
  return make_builtin(require_string(j["family"], "potential.family"), params);
}

RunConfig parse_config_json(const json& j) {
  static const std::set<std::string> allowed = {
      "m",      "potential", "tol",     "eps",        "eps_list", "methods",
      "threshold", "sheet",  "quad",    "grid",       "window",   "prediction",
      "terms",  "lambdaS",   "operator", "winding_check", "out",  "report",
      "fit"};
  require_keys(j, "top level", allowed);
  RunConfig c;
  c.config_dump = j.dump();
  if (j.contains("m")) {
    c.m = require_number(j["m"], "m");
    if (!(c.m > 0)) throw ConfigError("config: m must be > 0");
  }
  if (j.contains("potential")) {
    c.potential = parse_potential(j["potential"]);
    c.has_potential = true;
  }
  if (j.contains("tol")) {
    c.tol = require_number(j["tol"], "tol");
    if (!(c.tol > 0 && c.tol < 1)) throw ConfigError("config: tol must lie in (0, 1)");
  }
  if (j.contains("eps")) {
    c.eps = require_number(j["eps"], "eps");
    if (!(*c.eps > 0)) throw ConfigError("config: eps must be > 0");
  }
  if (j.contains("eps_list")) {
    if (!j["eps_list"].is_array()) throw ConfigError("config: eps_list must be an array");
    for (const auto& e : j["eps_list"]) c.eps_list.push_back(require_number(e, "eps_list entry"));
    for (std::size_t i = 0; i < c.eps_list.size(); ++i) {
      if (!(c.eps_list[i] > 0)) throw ConfigError("config: eps_list entries must be > 0");
      if (i > 0 && !(c.eps_list[i] < c.eps_list[i - 1]))
        throw ConfigError("config: eps_list must be strictly decreasing");
    }
  }
  if (j.contains("methods")) {
    if (!j["methods"].is_array()) throw ConfigError("config: methods must be an array");
    for (const auto& mjs : j["methods"]) {
      const std::string s = require_string(mjs, "methods entry");
      if (s == "bs")
        c.methods.bs = true;
      else if (s == "grid")
        c.methods.grid = true;
      else if (s == "minmax")
        c.methods.minmax = true;
      else
        throw ConfigError("config: unknown method \"" + s + "\" (bs | grid | minmax)");
    }
  }
  if (j.contains("threshold")) {
    const std::string s = require_string(j["threshold"], "threshold");
    if (s == "plus_m")
      c.threshold = Threshold::plus_m;
    else if (s == "minus_m")
      c.threshold = Threshold::minus_m;
    else
      throw ConfigError("config: threshold must be plus_m or minus_m");
  }
  if (j.contains("sheet")) {
    const std::string s = require_string(j["sheet"], "sheet");
    if (s == "physical")
      c.sheet = Sheet::physical;
    else if (s == "second")
      c.sheet = Sheet::second;
    else
      throw ConfigError("config: sheet must one of physical, second");
  }
  if (j.contains("quad")) {
    require_keys(j["quad"], "quad", {"panels", "order", "radius"});
    const json& q = j["quad"];
    if (q.contains("panels")) {
      c.quad.panels = require_int(q["panels"], "quad.panels");
      if (c.quad.panels < 1) throw ConfigError("config: quad.panels must be >= 1");
    }
    if (q.contains("order")) {
      c.quad.order = require_int(q["order"], "quad.order");
      if (c.quad.order < 2 || c.quad.order > 64)
        throw ConfigError("config: quad.order must lie in [2, 64]");
    }
    if (q.contains("radius")) {
      c.quad.radius = require_number(q["radius"], "quad.radius");
      if (c.quad.radius < 0) throw ConfigError("config: quad.radius must be >= 0");
    }
  }
  if (j.contains("grid")) {
    require_keys(j["grid"], "grid", {"L", "N"});
    const json& g = j["grid"];
    if (!g.contains("L") || !g.contains("N")) throw ConfigError("config: grid needs L and N");
    c.grid.L = require_number(g["L"], "grid.L");
    c.grid.N = require_int(g["N"], "grid.N");
    if (!(c.grid.L > 0)) throw ConfigError("config: grid.L must be > 0");
    if (c.grid.N < 16) throw ConfigError("config: grid.N must be >= 16");
    c.has_grid = true;
  }
  if (j.contains("window")) {
    if (!j["window"].is_array() || j["window"].size() != 2)
      throw ConfigError("config: window must be [lo, hi]");
    const double lo = require_number(j["window"][0], "window[0]");
    const double hi = require_number(j["window"][1], "window[1]");
    if (!(lo < hi)) throw ConfigError("config: window must satisfy lo < hi");
    c.window = {lo, hi};
  }
  if (j.contains("prediction")) {
    static const std::set<std::string> preds = {"dirac_two_term", "dirac_long_range",
                                                "schrodinger_short", "schrodinger_long",
                                                "comparison"};
    c.prediction = require_string(j["prediction"], "prediction");
    if (!preds.count(c.prediction))
      throw ConfigError("config: unknown prediction \"" + c.prediction + "\"");
  }
  if (j.contains("terms")) {
    c.terms = require_int(j["terms"], "terms");
    if (c.terms != 1 && c.terms != 2) throw ConfigError("config: terms must be 1 or 2");
  }
  if (j.contains("lambdaS")) {
    c.lambdaS = require_number(j["lambdaS"], "lambdaS");
    if (!(*c.lambdaS <= 0)) throw ConfigError("config: lambdaS must be <= 0");
  }
  if (j.contains("operator")) {
    c.op = require_string(j["operator"], "operator");
    if (c.op != "dirac" && c.op != "schrodinger")
      throw ConfigError("config: operator must be dirac or schrodinger");
  }
  if (j.contains("winding_check")) {
    if (!j["winding_check"].is_boolean())
      throw ConfigError("config: winding_check must be a boolean");
    c.winding_check = j["winding_check"].get<bool>();
  }
  if (j.contains("out")) c.out_dir = require_string(j["out"], "out");
  if (j.contains("report")) c.report_path = require_string(j["report"], "report");
  if (j.contains("fit")) {
    c.fit_kind = require_string(j["fit"], "fit");
    if (c.fit_kind != "coefficients" && c.fit_kind != "long_range")
      throw ConfigError("config: fit must be coefficients or long_range");
  }
  return c;
}

std::string first_failure(const HypothesisReport& rep) {
  for (const auto& c : rep.checks)
    if (!c.pass) return c.name + " (" + c.detail + ")";
  return "unknown";
}

void append_marker(SweepRow& r, const std::string& s) {
  if (!r.marker.empty()) r.marker += "; ";
  r.marker += s;
}

struct SchMoments {
  cplx U = 0, cross = 0;
};

void fill_predictions(SweepRow& row, const RunConfig& cfg, const MomentSet* moments,
                      const SchMoments* sch) {
  try {
    if (cfg.prediction == "dirac_two_term") {
      Prediction p3 = predict_dirac_second_order(*moments, cfg.m, row.eps, cfg.threshold);
      std::vector<OrderTerm> two(p3.order_terms.begin(), p3.order_terms.begin() + 2);
      row.pred2 = evaluate_terms(two, row.eps);
      row.pred3 = p3.value;
    } else if (cfg.prediction == "dirac_long_range") {
      row.pred2 = predict_dirac_long(cfg.m, row.eps).value;
    } else if (cfg.prediction == "schrodinger_short") {
      row.pred2 = predict_schrodinger_short(sch->U, sch->cross, cfg.m, row.eps, 1).value;
      row.pred3 = predict_schrodinger_short(sch->U, sch->cross, cfg.m, row.eps, 2).value;
    } else if (cfg.prediction == "schrodinger_long") {
      row.pred2 = predict_schrodinger_long(cfg.m, row.eps).value;
    } else if (cfg.prediction == "comparison") {
      if (!cfg.lambdaS) throw ConfigError("comparison prediction needs lambdaS");
      row.pred2 = predict_comparison(*cfg.lambdaS, cfg.m, row.eps).value;
    }
  } catch (const ConfigError& e) {
    append_marker(row, std::string("prediction unavailable: ") + e.what());
  }
}

std::pair<double, double> window_for(const RunConfig& cfg, const SweepRow& row) {
  if (cfg.window) return *cfg.window;
  const double m = cfg.m;
  std::optional<cplx> p = row.pred3 ? row.pred3 : row.pred2;
  if (cfg.threshold == Threshold::plus_m) {
    double gd = p ? m - p->real() : m * 0.5;
    if (!(gd > 0)) gd = m * 0.5;
    double lo = std::max(m - 8.0 * gd, -m * 0.999);
    double hi = std::min(m - gd / 8.0, m * (1.0 - 1e-9));
    if (!(lo < hi)) {
      lo = 0.0;
      hi = m * (1.0 - 1e-9);
    }
    return {lo, hi};
  }
  double gd = p ? p->real() + m : m * 0.5;
  if (!(gd > 0)) gd = m * 0.5;
  double lo = std::max(-m + gd / 8.0, -m * (1.0 - 1e-9));
  double hi = std::min(-m + 8.0 * gd, m * 0.999);
  if (!(lo < hi)) {
    lo = -m * (1.0 - 1e-9);
    hi = 0.0;
  }
  return {lo, hi};
}

void run_row(SweepRow& row, const RunConfig& cfg, const MomentSet* moments) {
  const double eps = row.eps;
  if (cfg.methods.bs) {
    try {
      KappaRoot r = cfg.sheet == Sheet::second
                        ? find_resonance(cfg.potential, cfg.m, eps, cfg.quad, moments, cfg.tol)
                        : find_bound_state(cfg.potential, cfg.m, eps, cfg.threshold, cfg.quad,
                                           moments, cfg.winding_check, cfg.tol);
      if (r.no_eigenvalue)
        append_marker(row, "no eigenvalue (bs)");
      else
        row.z_bs = r.z;
    } catch (const std::exception& e) {
      append_marker(row, std::string("bs failed: ") + e.what());
    }
  }
  if (cfg.methods.grid) {
    try {
      if (cfg.op == "schrodinger") {
        auto f = cfg.potential.evaluate;
        auto g = schrodinger_ground_state([f](double x) { return f(x)(0, 0).real(); }, cfg.m, eps,
                                          cfg.grid);
        if (!g)
          append_marker(row, "no eigenvalue (grid)");
        else
          row.z_grid = cplx(g->lambda, 0.0);
      } else {
        auto evs = dirac_eigen_in_gap(cfg.potential, cfg.m, eps, cfg.grid, window_for(cfg, row));
        if (evs.empty())
          append_marker(row, "no eigenvalue (grid)");
        else {
          GapEigenvalue pick = evs.front();
          for (const auto& e2 : evs) {
            const bool better = cfg.threshold == Threshold::plus_m
                                    ? e2.z.real() > pick.z.real()
                                    : e2.z.real() < pick.z.real();
            if (better) pick = e2;
          }
          row.z_grid = pick.z;
          if (!pick.tail_ok) append_marker(row, "grid eigenvector touches the boundary");
        }
      }
    } catch (const std::exception& e) {
      append_marker(row, std::string("grid failed: ") + e.what());
    }
  }
  if (cfg.methods.minmax) {
    try {
      MinmaxResult mr = solve_minmax(cfg.potential, cfg.m, eps, cfg.grid);
      if (mr.coupling_flagged)
        append_marker(row, "minmax flagged: eps >= m/sup|V|");
      else if (mr.at_threshold)
        append_marker(row, "no eigenvalue (minmax at threshold)");
      else
        row.z_minmax = mr.gamma1;
    } catch (const std::exception& e) {
      append_marker(row, std::string("minmax failed: ") + e.what());
    }
  }
  const std::optional<cplx> zb = row_best_z(row);
  if (zb && row.pred2) row.resid2 = std::abs(*zb - *row.pred2);
  if (zb && row.pred3) row.resid3 = std::abs(*zb - *row.pred3);
}

std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json cx(const cplx& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

cplx cx_parse(const json& j, const std::string& what) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im"))
    throw ConfigError("report: " + what + " must be {re, im}");
  return cplx(require_number(j["re"], what + ".re"), require_number(j["im"], what + ".im"));
}

void ensure_parent_dir(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path() && !p.parent_path().empty())
    std::filesystem::create_directories(p.parent_path());
}

}  // namespace

RunConfig parse_config_text(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
  }
  return parse_config_json(j);
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::optional<cplx> row_best_z(const SweepRow& row) {
  if (row.z_bs) return row.z_bs;
  if (row.z_grid) return row.z_grid;
  if (row.z_minmax) return cplx(*row.z_minmax, 0.0);
  return std::nullopt;
}

int thread_cap() {
  if (const char* s = std::getenv("GAPSPECTRA_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (end && *end == '\0' && v >= 1) return (int)std::min(v, 256L);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? (int)hc : 1;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

SweepReport run_sweep(const RunConfig& cfg) {
  if (!cfg.has_potential) throw ConfigError("sweep: config needs a potential");
  if (cfg.eps_list.empty()) throw ConfigError("sweep: config needs a non-empty eps_list");
  if (!(cfg.methods.bs || cfg.methods.grid || cfg.methods.minmax))
    throw ConfigError("sweep: config needs methods (bs | grid | minmax)");
  if ((cfg.methods.grid || cfg.methods.minmax) && !cfg.has_grid)
    throw ConfigError("sweep: grid and minmax methods need grid {L, N}");
  if (cfg.op == "schrodinger" && (cfg.methods.bs || cfg.methods.minmax))
    throw ConfigError("sweep: the schrodinger operator runs on the grid method only");
  if (cfg.sheet == Sheet::second && (cfg.methods.grid || cfg.methods.minmax))
    throw ConfigError("sweep: second-sheet sweeps run on the bs method only");
  if (cfg.methods.minmax) {
    if (!cfg.potential.hermitian)
      throw ConfigError("sweep: minmax requires a Hermitian potential");
    if (cfg.threshold != Threshold::plus_m)
      throw ConfigError("sweep: minmax addresses the upper gap edge (threshold plus_m)");
    if (cfg.potential.sup_norm > 0)
      for (const double e : cfg.eps_list)
        if (e >= cfg.m / cfg.potential.sup_norm)
          throw ConfigError("sweep: eps_list must stay below m/sup|V| when minmax is requested");
  }

  // gate the requested prediction on the potential's decay hypotheses
  {
    TheoremId id = TheoremId::thm_second_order;
    if (cfg.prediction == "dirac_long_range" || cfg.prediction == "schrodinger_long")
      id = TheoremId::thm_long_range;
    else if (cfg.prediction == "comparison")
      id = TheoremId::prop_comparison;
    const HypothesisReport hr = check_hypotheses(cfg.potential, id);
    if (!hr.pass)
      throw ConfigError("sweep: hypotheses fail for prediction " + cfg.prediction + ": " +
                        first_failure(hr));
  }

  std::optional<MomentSet> moments;
  if (cfg.prediction == "dirac_two_term" || cfg.methods.bs)
    moments = compute_all(cfg.potential, cfg.m, cfg.tol);
  SchMoments sch;
  if (cfg.prediction == "schrodinger_short") {
    sch.U = compute_U(cfg.potential, cfg.tol)(0, 0);
    sch.cross = compute_sch_cross(cfg.potential, cfg.tol);
  }

  SweepReport rep;
  rep.config_dump = cfg.config_dump.empty() ? "{}" : cfg.config_dump;
  rep.config_digest = fnv1a_hex(rep.config_dump);
  rep.m = cfg.m;
  rep.threshold = cfg.threshold;
  rep.prediction = cfg.prediction;
  rep.tol = cfg.tol;
  rep.rows.resize(cfg.eps_list.size());
  for (std::size_t i = 0; i < cfg.eps_list.size(); ++i) rep.rows[i].eps = cfg.eps_list[i];
  for (auto& row : rep.rows)
    fill_predictions(row, cfg, moments ? &*moments : nullptr, &sch);

  const MomentSet* mp = moments ? &*moments : nullptr;
  const int workers = std::min<int>(thread_cap(), (int)rep.rows.size());
  if (workers <= 1) {
    for (auto& row : rep.rows) run_row(row, cfg, mp);
  } else {
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
      for (std::size_t i; (i = next.fetch_add(1)) < rep.rows.size();)
        run_row(rep.rows[i], cfg, mp);
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  bool any_value = false, any_failure = false;
  for (const auto& row : rep.rows) {
    if (row_best_z(row)) any_value = true;
    if (row.marker.find("failed") != std::string::npos) any_failure = true;
  }
  if (!any_value && any_failure)
    throw SolverError("sweep: every row failed; first marker: " + rep.rows.front().marker);
  return rep;
}

namespace {

// least squares of complex y against the two real basis functions eps^p1, eps^p2
std::pair<cplx, cplx> ls2(const std::vector<double>& e, const std::vector<cplx>& y, double p1,
                          double p2) {
  double s11 = 0, s12 = 0, s22 = 0;
  cplx b1 = 0, b2 = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double x1 = std::pow(e[i], p1), x2 = std::pow(e[i], p2);
    s11 += x1 * x1;
    s12 += x1 * x2;
    s22 += x2 * x2;
    b1 += x1 * y[i];
    b2 += x2 * y[i];
  }
  const double det = s11 * s22 - s12 * s12;
  if (det == 0) throw SolverError("fit: degenerate least-squares system");
  return {(b1 * s22 - b2 * s12) / det, (s11 * b2 - s12 * b1) / det};
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = (double)x.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / den;
}

}  // namespace

void fit_coefficients(SweepReport& rep, const MomentSet& moments) {
  std::vector<double> es;
  std::vector<cplx> zs;
  for (const auto& row : rep.rows) {
    const auto z = row_best_z(row);
    if (z) {
      es.push_back(row.eps);
      zs.push_back(*z);
    }
  }
  if (es.size() < 4) throw ConfigError("fit: needs at least 4 successful sweep rows");
  const double m = rep.m;
  const bool plus = rep.threshold == Threshold::plus_m;
  const cplx u = plus ? moments.U(0, 0) : moments.U(1, 1);
  const double edge = plus ? m : -m;
  const cplx c2_anchor = (plus ? -1.0 : 1.0) * (m / 2.0) * u * u;

  std::vector<cplx> y0(zs.size()), y1(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) {
    y0[i] = zs[i] - edge;
    y1[i] = zs[i] - edge - c2_anchor * es[i] * es[i];
  }
  rep.c2_hat = ls2(es, y0, 2, 3).first;
  rep.c3_hat = ls2(es, y1, 3, 4).first;

  std::vector<double> fx, fy;
  for (const auto& row : rep.rows)
    if (row.resid3 && *row.resid3 >= 10.0 * rep.tol) {
      fx.push_back(row.eps);
      fy.push_back(*row.resid3);
    }
  if (fx.size() < 2) {
    fx.clear();
    fy.clear();
    for (const auto& row : rep.rows)
      if (row.resid3 && *row.resid3 > 0) {
        fx.push_back(row.eps);
        fy.push_back(*row.resid3);
      }
  }
  rep.residual_exponent =
      fx.size() >= 2 ? loglog_slope(fx, fy) : std::numeric_limits<double>::quiet_NaN();
  rep.has_fit = true;
}

void fit_long_range(SweepReport& rep, const RunConfig& cfg) {
  if (!cfg.has_grid) throw ConfigError("fit long_range: needs grid {L, N}");
  if (!cfg.has_potential) throw ConfigError("fit long_range: needs the potential");
  auto f = cfg.potential.evaluate;
  rep.long_range_ratio.assign(rep.rows.size(), std::numeric_limits<double>::quiet_NaN());
  rep.sandwich_resid = rep.long_range_ratio;
  rep.sandwich_band = rep.long_range_ratio;
  rep.sandwich_C = 0;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& row = rep.rows[i];
    const auto z = row_best_z(row);
    if (!z) continue;
    const double le = std::log(row.eps);
    rep.long_range_ratio[i] =
        (rep.m - z->real()) / (2.0 * rep.m * row.eps * row.eps * le * le);
    const auto g = schrodinger_ground_state([f](double x) { return f(x)(0, 0).real(); }, rep.m,
                                            row.eps, cfg.grid);
    if (!g) continue;
    rep.sandwich_resid[i] = std::abs(*z - cplx(rep.m + g->lambda, 0.0));
    rep.sandwich_band[i] =
        std::sqrt(row.eps) * std::abs(g->lambda) + row.eps * row.eps * row.eps;
    if (rep.sandwich_band[i] > 0)
      rep.sandwich_C = std::max(rep.sandwich_C, rep.sandwich_resid[i] / rep.sandwich_band[i]);
  }
  rep.has_long_range = true;
}

void write_csv(const SweepReport& rep, const std::string& path) {
  ensure_parent_dir(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file " + path);
  out << "eps,z_bs_re,z_bs_im,z_grid_re,z_grid_im,z_minmax,pred2,pred3,resid2,resid3\n";
  for (const auto& r : rep.rows) {
    out << fmt17(r.eps) << ',';
    out << (r.z_bs ? fmt17(r.z_bs->real()) : "") << ',';
    out << (r.z_bs ? fmt17(r.z_bs->imag()) : "") << ',';
    out << (r.z_grid ? fmt17(r.z_grid->real()) : "") << ',';
    out << (r.z_grid ? fmt17(r.z_grid->imag()) : "") << ',';
    out << (r.z_minmax ? fmt17(*r.z_minmax) : "") << ',';
    out << (r.pred2 ? fmt17(r.pred2->real()) : "") << ',';
    out << (r.pred3 ? fmt17(r.pred3->real()) : "") << ',';
    out << (r.resid2 ? fmt17(*r.resid2) : "") << ',';
    out << (r.resid3 ? fmt17(*r.resid3) : "") << '\n';
  }
}

void write_json_report(const SweepReport& rep, const std::string& path) {
  json j;
  try {
    j["config"] = json::parse(rep.config_dump);
  } catch (const json::exception&) {
    j["config"] = json::object();
  }
  j["config_digest"] = rep.config_digest;
  j["version"] = rep.version;
  j["m"] = rep.m;
  j["threshold"] = rep.threshold == Threshold::plus_m ? "plus_m" : "minus_m";
  j["prediction"] = rep.prediction;
  j["tol"] = rep.tol;
  json rows = json::array();
  for (const auto& r : rep.rows) {
    json row;
    row["eps"] = r.eps;
    row["z_bs"] = r.z_bs ? cx(*r.z_bs) : json(nullptr);
    row["z_grid"] = r.z_grid ? cx(*r.z_grid) : json(nullptr);
    row["z_minmax"] = r.z_minmax ? json(*r.z_minmax) : json(nullptr);
    row["pred2"] = r.pred2 ? cx(*r.pred2) : json(nullptr);
    row["pred3"] = r.pred3 ? cx(*r.pred3) : json(nullptr);
    row["resid2"] = r.resid2 ? json(*r.resid2) : json(nullptr);
    row["resid3"] = r.resid3 ? json(*r.resid3) : json(nullptr);
    row["marker"] = r.marker;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  if (rep.has_fit) {
    j["fitted"] = {{"c2", cx(rep.c2_hat)},
                   {"c3", cx(rep.c3_hat)},
                   {"residual_exponent", rep.residual_exponent}};
  }
  if (rep.has_long_range) {
    j["long_range"] = {{"ratio", rep.long_range_ratio},
                       {"sandwich_resid", rep.sandwich_resid},
                       {"sandwich_band", rep.sandwich_band},
                       {"sandwich_C", rep.sandwich_C}};
  }
  ensure_parent_dir(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file " + path);
  out << j.dump(2) << '\n';
}

SweepReport parse_report_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("report: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("report: JSON parse failure: ") + e.what());
  }
  SweepReport rep;
  if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array())
    throw ConfigError("report: missing rows array");
  if (j.contains("config")) rep.config_dump = j["config"].dump();
  if (j.contains("config_digest")) rep.config_digest = require_string(j["config_digest"], "digest");
  if (j.contains("version")) rep.version = require_string(j["version"], "version");
  if (j.contains("m")) rep.m = require_number(j["m"], "m");
  if (j.contains("threshold"))
    rep.threshold = require_string(j["threshold"], "threshold") == "minus_m" ? Threshold::minus_m
                                                                             : Threshold::plus_m;
  if (j.contains("prediction")) rep.prediction = require_string(j["prediction"], "prediction");
  if (j.contains("tol")) rep.tol = require_number(j["tol"], "tol");
  for (const auto& rj : j["rows"]) {
    SweepRow r;
    if (!rj.is_object() || !rj.contains("eps")) throw ConfigError("report: row needs eps");
    r.eps = require_number(rj["eps"], "row.eps");
    auto opt_cx = [&](const char* key) -> std::optional<cplx> {
      if (!rj.contains(key) || rj[key].is_null()) return std::nullopt;
      return cx_parse(rj[key], key);
    };
    auto opt_num = [&](const char* key) -> std::optional<double> {
      if (!rj.contains(key) || rj[key].is_null()) return std::nullopt;
      return require_number(rj[key], key);
    };
    r.z_bs = opt_cx("z_bs");
    r.z_grid = opt_cx("z_grid");
    r.z_minmax = opt_num("z_minmax");
    r.pred2 = opt_cx("pred2");
    r.pred3 = opt_cx("pred3");
    r.resid2 = opt_num("resid2");
    r.resid3 = opt_num("resid3");
    if (rj.contains("marker") && rj["marker"].is_string())
      r.marker = rj["marker"].get<std::string>();
    rep.rows.push_back(std::move(r));
  }
  return rep;
}

}  // namespace gapspectra

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gapspectra/asymptotics.hpp"
#include "gapspectra/birman_schwinger.hpp"
#include "gapspectra/common.hpp"
#include "gapspectra/grid_solver.hpp"
#include "gapspectra/minmax.hpp"
#include "gapspectra/moments.hpp"
#include "gapspectra/potentials.hpp"

namespace gapspectra {

inline constexpr const char* kVersion = "1.0.0";

struct MethodSet {
  bool bs = false, grid = false, minmax = false;
};

// one parsed config document serving every subcommand; strict schema, unknown
// keys rejected recursively
struct RunConfig {
  double m = 1.0;
  PotentialSpec potential;
  bool has_potential = false;
  double tol = 1e-10;
  std::optional<double> eps;
  std::vector<double> eps_list;
  MethodSet methods;
  Threshold threshold = Threshold::plus_m;
  Sheet sheet = Sheet::physical;
  QuadSpec quad;
  GridSpec grid{0.0, 0};
  bool has_grid = false;
  std::optional<std::pair<double, double>> window;
  std::string prediction = "dirac_two_term";
  int terms = 2;
  std::optional<double> lambdaS;
  std::string op = "dirac";  // "dirac" | "schrodinger"
  bool winding_check = false;
  std::string out_dir = ".";
  std::string report_path;                 // fit: previously written sweep report
  std::string fit_kind = "coefficients";   // fit: "coefficients" | "long_range"
  std::string config_dump;                 // canonical JSON text (digest input)
};

RunConfig parse_config_text(const std::string& json_text);
RunConfig parse_config_file(const std::string& path);

struct SweepRow {
  double eps = 0;
  std::optional<cplx> z_bs;
  std::optional<cplx> z_grid;
  std::optional<double> z_minmax;
  std::optional<cplx> pred2, pred3;
  std::optional<double> resid2, resid3;
  std::string marker;  // "no eigenvalue", per-method failure notes
};

// the method value a row's residuals are measured against (bs > grid > minmax)
std::optional<cplx> row_best_z(const SweepRow& row);

struct SweepReport {
  std::string config_dump;
  std::string config_digest;
  std::string version = kVersion;
  double m = 1.0;
  Threshold threshold = Threshold::plus_m;
  std::string prediction;
  double tol = 1e-10;
  std::vector<SweepRow> rows;
  // fit_coefficients output
  bool has_fit = false;
  cplx c2_hat = 0, c3_hat = 0;
  double residual_exponent = 0;
  // fit_long_range output
  bool has_long_range = false;
  std::vector<double> long_range_ratio;   // (m - z)/(2 m eps^2 log^2 eps) per row
  std::vector<double> sandwich_resid;     // |z - m - lambdaS| per row
  std::vector<double> sandwich_band;      // sqrt(eps)|lambdaS| + eps^3 per row
  double sandwich_C = 0;                  // max resid/band
};

// one row per eps; each row runs every requested method, failures recorded in
// the row marker; worker pool capped by GAPSPECTRA_THREADS
SweepReport run_sweep(const RunConfig& cfg);

// c2_hat, c3_hat from least squares against the moment-anchored expansions;
// residual_exponent from the log-log slope of the three-term residuals
void fit_coefficients(SweepReport& rep, const MomentSet& moments);

// per-eps long-range ratio plus the comparison-sandwich residual against the
// Schrodinger ground state on the same grid
void fit_long_range(SweepReport& rep, const RunConfig& cfg);

void write_csv(const SweepReport& rep, const std::string& path);
void write_json_report(const SweepReport& rep, const std::string& path);
SweepReport parse_report_file(const std::string& path);

std::string fnv1a_hex(const std::string& text);

// worker pool width: GAPSPECTRA_THREADS when set (>= 1), hardware otherwise
int thread_cap();

}  // namespace gapspectra

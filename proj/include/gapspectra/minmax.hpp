#pragma once

#include <array>
#include <vector>

#include "gapspectra/common.hpp"
#include "gapspectra/grid_solver.hpp"
#include "gapspectra/potentials.hpp"

namespace gapspectra {

// Hermitian tridiagonal block on the interior nodes: diag[j] = A(j,j), lower[j] = A(j+1,j)
struct Tri {
  std::vector<cplx> diag;
  std::vector<cplx> lower;
};

// Variational forms on the trial pair l+(h) = (h, -alpha h')^T, l-(g) = (-alpha g', g)^T,
// alpha = 1/(2m), h and g expanded in P1 elements on the interior nodes of a uniform grid.
// G is the shared Gram block <l(phi_a), l(phi_b)> = mass + alpha^2 stiffness. Qpp/Qmm are
// the energy forms on the two subspaces; cross[j][o] = Q+-(j, j+o-2) is the pentadiagonal
// coupling block (slope-jump second-derivative form plus the potential cross term).
struct SubspaceForms {
  int n = 0;
  double dx = 0;
  double m = 0;
  Tri G, Qpp, Qmm;
  std::vector<std::array<cplx, 5>> cross;
};

SubspaceForms assemble_forms(const PotentialSpec& V, double m, double eps, const GridSpec& grid);

// negative eigenvalue count of the Schur complement S(lambda) =
// (Qpp - lambda G) - B (Qmm - lambda G)^{-1} B^H, by Haynsworth inertia additivity
int schur_negative_count(const SubspaceForms& f, double lambda);

// eigenvalue of S(lambda) nearest zero (the branch whose sign change locates gamma1)
double mu_of_lambda(const SubspaceForms& f, double lambda);

struct MuSample {
  double lambda = 0;
  double mu = 0;
};

struct MinmaxResult {
  double gamma0 = 0;
  double gamma1 = 0;
  bool at_threshold = false;    // mu(m) > 0: no level strictly below m at this resolution
  bool coupling_flagged = false;  // eps >= m/sup|V|: gap condition unavailable, nothing computed
  std::vector<MuSample> mu_trace;
};

// largest generalized eigenvalue of (Qmm, G); throws ConfigError for non-Hermitian V
// or flagged coupling
double gamma0(const PotentialSpec& V, double m, double eps, const GridSpec& grid);

// first min-max level: the lambda in (gamma0, m] where the smallest Schur eigenvalue
// crosses zero, by inertia bisection plus secant refinement; m when there is no crossing
double gamma1(const PotentialSpec& V, double m, double eps, const GridSpec& grid);

// both levels plus a mu trace; flags (rather than rejects) eps >= m/sup|V|
MinmaxResult solve_minmax(const PotentialSpec& V, double m, double eps, const GridSpec& grid);

}  // namespace gapspectra

#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "gapspectra/common.hpp"
#include "gapspectra/potentials.hpp"

namespace gapspectra {

// cell-centered uniform grid on [-L, L]: x_i = -L + (i + 1/2) h, h = 2L/N,
// forward/backward difference pair for the off-diagonal derivative blocks,
// Dirichlet (vanishing outside) boundary
struct GridSpec {
  double L = 0;
  int N = 0;
};

struct GapEigenvalue {
  cplx z = 0;
  double in_gap_margin = 0;          // distance of Re z to the nearer gap edge
  double eigenvector_norm_tail = 0;  // squared-norm fraction in the outer 10% of cells
  bool tail_ok = false;              // tail <= 1e-6: eigenvector safely localized
};

// all discrete eigenvalues with Re z inside the window (window must sit strictly
// inside (-m, m)). Hermitian V: banded inertia bisection + inverse iteration.
// Non-Hermitian V: dense eigensolve, N capped at 4000.
std::vector<GapEigenvalue> dirac_eigen_in_gap(const PotentialSpec& V, double m, double eps,
                                              const GridSpec& grid,
                                              std::pair<double, double> window);

struct SchrodingerGround {
  double lambda = 0;
  double eigenvector_norm_tail = 0;
  bool tail_ok = false;
};

// ground state of -(1/2m) d2/dx2 - eps*v with central differences on the
// interior nodes; nothing when the bottom of the spectrum is >= 0
std::optional<SchrodingerGround> schrodinger_ground_state(const std::function<double(double)>& v,
                                                          double m, double eps,
                                                          const GridSpec& grid);

}  // namespace gapspectra

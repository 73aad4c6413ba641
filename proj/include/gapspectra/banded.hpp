#pragma once

#include <vector>

#include "gapspectra/common.hpp"

namespace gapspectra {

// Hermitian banded matrix, lower triangle storage: a[d*n + j] = A(j+d, j), d = 0..kd
struct HermBand {
  int n = 0, kd = 0;
  std::vector<cplx> a;
  HermBand() = default;
  HermBand(int n_, int kd_) : n(n_), kd(kd_), a((std::size_t)(kd_ + 1) * n_, cplx(0)) {}
  cplx& lo(int i, int j) { return a[(std::size_t)(i - j) * n + j]; }
  const cplx& lo(int i, int j) const { return a[(std::size_t)(i - j) * n + j]; }
};

struct Inertia {
  int n_neg = 0;
  int n_zero = 0;   // pivots within zero_tol of 0
  bool ok = true;   // false when a near-zero pivot made the sweep unreliable
};

// LDL^H sweep without pivoting; O(n kd^2). Use for eigenvalue counting/slicing,
// re-evaluating at a jittered shift when ok == false.
Inertia ldlh_inertia(const HermBand& A, double zero_tol);

// general complex banded LU via LAPACK zgbtrf/zgbtrs
class BandLU {
 public:
  BandLU(int n, int kl, int ku);
  cplx& at(int i, int j);  // valid for -ku <= i-j <= kl; call before factor()
  void factor();           // throws SolverError if exactly singular
  void solve(std::vector<cplx>& rhs) const;  // in place, one rhs
  int n() const { return n_; }

 private:
  int n_, kl_, ku_, ldab_;
  std::vector<cplx> ab_;
  std::vector<int> ipiv_;
  bool factored_ = false;
};

// all eigenvalues of a dense complex matrix (LAPACK zgeev, eigenvalues only)
std::vector<cplx> dense_eigenvalues(std::vector<cplx>& a_colmajor, int n);

struct TridiagPair {
  double value = 0;
  std::vector<double> vector;
};

// eigenpairs of a real symmetric tridiagonal matrix inside (lo, hi], at most
// max_count of them (throws SolverError if more); dstebz + dstein
std::vector<TridiagPair> tridiag_eigs_in(const std::vector<double>& diag,
                                         const std::vector<double>& off, double lo, double hi,
                                         int max_count);

// smallest eigenpair
TridiagPair tridiag_smallest(const std::vector<double>& diag, const std::vector<double>& off);

}  // namespace gapspectra

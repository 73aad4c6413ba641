#include "gapspectra/banded.hpp"

#include <algorithm>
#include <cmath>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace gapspectra {

Inertia ldlh_inertia(const HermBand& A, double zero_tol) {
  const int n = A.n, kd = A.kd;
  std::vector<cplx> W = A.a;  // L overwrites the strict lower band
  std::vector<double> d(n, 0.0);
  auto w = [&](int i, int j) -> cplx& { return W[(std::size_t)(i - j) * n + j]; };
  Inertia res;
  for (int j = 0; j < n; ++j) {
    double dj = w(j, j).real();
    for (int k = std::max(0, j - kd); k < j; ++k) dj -= std::norm(w(j, k)) * d[k];
    if (std::abs(dj) <= zero_tol) {
      ++res.n_zero;
      res.ok = false;
      dj = dj < 0 ? -zero_tol : zero_tol;  // keep sweeping, caller will jitter
    }
    if (dj < 0) ++res.n_neg;
    d[j] = dj;
    for (int i = j + 1; i <= std::min(n - 1, j + kd); ++i) {
      cplx lij = w(i, j);
      for (int k = std::max(0, i - kd); k < j; ++k) lij -= w(i, k) * std::conj(w(j, k)) * d[k];
      w(i, j) = lij / dj;
    }
  }
  return res;
}

BandLU::BandLU(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1),
      ab_((std::size_t)(2 * kl + ku + 1) * n, cplx(0)), ipiv_(n, 0) {}

cplx& BandLU::at(int i, int j) {
  // LAPACK band storage with kl extra rows for fill-in: AB(kl+ku+i-j, j)
  return ab_[(std::size_t)j * ldab_ + (kl_ + ku_ + i - j)];
}

void BandLU::factor() {
  int info = LAPACKE_zgbtrf(LAPACK_COL_MAJOR, n_, n_, kl_, ku_, ab_.data(), ldab_, ipiv_.data());
  if (info != 0) throw SolverError("zgbtrf failed, info=" + std::to_string(info));
  factored_ = true;
}

void BandLU::solve(std::vector<cplx>& rhs) const {
  if (!factored_) throw SolverError("BandLU::solve before factor");
  if ((int)rhs.size() != n_) throw SolverError("BandLU::solve rhs size mismatch");
  int info = LAPACKE_zgbtrs(LAPACK_COL_MAJOR, 'N', n_, kl_, ku_, 1, ab_.data(), ldab_,
                            ipiv_.data(), rhs.data(), n_);
  if (info != 0) throw SolverError("zgbtrs failed, info=" + std::to_string(info));
}

std::vector<cplx> dense_eigenvalues(std::vector<cplx>& a_colmajor, int n) {
  std::vector<cplx> w(n);
  int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a_colmajor.data(), n, w.data(),
                           nullptr, 1, nullptr, 1);
  if (info != 0) throw SolverError("zgeev failed, info=" + std::to_string(info));
  return w;
}

std::vector<TridiagPair> tridiag_eigs_in(const std::vector<double>& diag,
                                         const std::vector<double>& off, double lo, double hi,
                                         int max_count) {
  const int n = (int)diag.size();
  if ((int)off.size() != n - 1) throw SolverError("tridiag: off size mismatch");
  std::vector<double> d = diag, e = off;
  std::vector<double> wvals(n);
  std::vector<int> iblock(n), isplit(n);
  int m = 0, nsplit = 0;
  int info = LAPACKE_dstebz('V', 'B', n, lo, hi, 0, 0, 0.0, d.data(), e.data(), &m, &nsplit,
                            wvals.data(), iblock.data(), isplit.data());
  if (info != 0) throw SolverError("dstebz failed, info=" + std::to_string(info));
  if (m > max_count)
    throw SolverError("tridiag_eigs_in: more eigenvalues in window than max_count");
  std::vector<TridiagPair> out(m);
  if (m == 0) return out;
  std::vector<double> z((std::size_t)n * m);
  std::vector<int> ifail(m);
  info = LAPACKE_dstein(LAPACK_COL_MAJOR, n, d.data(), e.data(), m, wvals.data(), iblock.data(),
                        isplit.data(), z.data(), n, ifail.data());
  if (info != 0) throw SolverError("dstein failed, info=" + std::to_string(info));
  for (int k = 0; k < m; ++k) {
    out[k].value = wvals[k];
    out[k].vector.assign(z.begin() + (std::size_t)k * n, z.begin() + (std::size_t)(k + 1) * n);
  }
  return out;
}

TridiagPair tridiag_smallest(const std::vector<double>& diag, const std::vector<double>& off) {
  const int n = (int)diag.size();
  std::vector<double> d = diag, e = off;
  std::vector<double> wvals(n);
  std::vector<int> iblock(n), isplit(n);
  int m = 0, nsplit = 0;
  int info = LAPACKE_dstebz('I', 'B', n, 0.0, 0.0, 1, 1, 0.0, d.data(), e.data(), &m, &nsplit,
                            wvals.data(), iblock.data(), isplit.data());
  if (info != 0 || m != 1) throw SolverError("dstebz (smallest) failed");
  std::vector<double> z(n);
  std::vector<int> ifail(1);
  info = LAPACKE_dstein(LAPACK_COL_MAJOR, n, d.data(), e.data(), 1, wvals.data(), iblock.data(),
                        isplit.data(), z.data(), n, ifail.data());
  if (info != 0) throw SolverError("dstein (smallest) failed");
  TridiagPair out;
  out.value = wvals[0];
  out.vector = z;
  return out;
}

}  // namespace gapspectra

#include "gapspectra/grid_solver.hpp"

#include <algorithm>
#include <cmath>

#include "gapspectra/banded.hpp"

namespace gapspectra {

namespace {

struct GridData {
  double h = 0;
  std::vector<double> x;
  std::vector<Mat2> V;
};

GridData sample_grid(const PotentialSpec& V, const GridSpec& g) {
  if (g.N < 16) throw ConfigError("grid: N must be >= 16");
  if (!(g.L > 0)) throw ConfigError("grid: L must be > 0");
  GridData d;
  d.h = 2.0 * g.L / g.N;
  d.x.resize(g.N);
  d.V.resize(g.N);
  for (int i = 0; i < g.N; ++i) {
    d.x[i] = -g.L + (i + 0.5) * d.h;
    d.V[i] = V.evaluate(d.x[i]);
  }
  return d;
}

// interleaved (up_i, dn_i) ordering;
// H = [[m - eps V11, D+ - eps V12], [D+^T - eps V21, -m - eps V22]],
// (D+)_{ii} = -1/h, (D+)_{i,i+1} = +1/h
HermBand assemble_herm(const GridData& d, double m, double eps) {
  const int N = (int)d.x.size();
  HermBand H(2 * N, 3);
  const double ih = 1.0 / d.h;
  for (int i = 0; i < N; ++i) {
    H.lo(2 * i, 2 * i) = m - eps * d.V[i](0, 0).real();
    H.lo(2 * i + 1, 2 * i + 1) = -m - eps * d.V[i](1, 1).real();
    H.lo(2 * i + 1, 2 * i) = -ih - eps * d.V[i](1, 0);
    if (i + 1 < N) H.lo(2 * i + 3, 2 * i) = ih;
  }
  return H;
}

int negs_below(const HermBand& H, double s, double scale) {
  HermBand A = H;
  for (int j = 0; j < A.n; ++j) A.lo(j, j) -= s;
  double jitter = 0;
  for (int attempt = 0; attempt < 6; ++attempt) {
    HermBand B = A;
    if (jitter != 0)
      for (int j = 0; j < B.n; ++j) B.lo(j, j) -= jitter;
    Inertia in = ldlh_inertia(B, 1e-13 * scale);
    if (in.ok) return in.n_neg;
    jitter = (attempt % 2 == 0 ? 1.0 : -1.0) * 1e-12 * scale * (1 + attempt);
  }
  throw SolverError("grid inertia: persistent pivot breakdown");
}

struct EvecOut {
  std::vector<cplx> v;
  double rayleigh;
};

// inverse iteration at the shift for the (nearly) converged eigenvalue
EvecOut inverse_iteration(const GridData& d, double m, double eps, cplx shift, int iters,
                          bool hermitian) {
  const int N = (int)d.x.size();
  const int n = 2 * N;
  const double ih = 1.0 / d.h;
  auto build = [&](cplx s) {
    BandLU lu(n, 3, 3);
    for (int i = 0; i < N; ++i) {
      lu.at(2 * i, 2 * i) = m - eps * d.V[i](0, 0) - s;
      lu.at(2 * i + 1, 2 * i + 1) = -m - eps * d.V[i](1, 1) - s;
      lu.at(2 * i + 1, 2 * i) = -ih - eps * d.V[i](1, 0);
      lu.at(2 * i, 2 * i + 1) = -ih - eps * d.V[i](0, 1);
      if (i + 1 < N) {
        lu.at(2 * i + 3, 2 * i) = ih;      // (dn_{i+1}, up_i)
        lu.at(2 * i, 2 * i + 3) = ih;      // (up_i, dn_{i+1})
      }
    }
    return lu;
  };
  BandLU lu = build(shift);
  for (int attempt = 0;; ++attempt) {
    try {
      lu.factor();
      break;
    } catch (const SolverError&) {
      if (attempt >= 3) throw;
      shift += cplx(1e-12 * (1.0 + std::abs(shift)), 0.0);
      lu = build(shift);
    }
  }
  std::vector<cplx> v(n);
  for (int i = 0; i < n; ++i) v[i] = cplx(1.0 + 0.3 * std::sin(0.7 * i), 0.1 * std::cos(1.3 * i));
  auto normalize = [&]() {
    double s = 0;
    for (auto& c : v) s += std::norm(c);
    s = std::sqrt(s);
    for (auto& c : v) c /= s;
  };
  normalize();
  for (int it = 0; it < iters; ++it) {
    lu.solve(v);
    normalize();
  }
  // Rayleigh quotient v^H H v through the band action (hermitian path only uses .real())
  std::vector<cplx> Hv(n, cplx(0));
  for (int i = 0; i < N; ++i) {
    Hv[2 * i] += (m - eps * d.V[i](0, 0)) * v[2 * i] + (-ih - eps * d.V[i](0, 1)) * v[2 * i + 1];
    Hv[2 * i + 1] +=
        (-ih - eps * d.V[i](1, 0)) * v[2 * i] + (-m - eps * d.V[i](1, 1)) * v[2 * i + 1];
    if (i + 1 < N) {
      Hv[2 * i] += ih * v[2 * i + 3];
      Hv[2 * i + 3] += ih * v[2 * i];
    }
  }
  cplx num = 0;
  for (int i = 0; i < n; ++i) num += std::conj(v[i]) * Hv[i];
  (void)hermitian;
  EvecOut out;
  out.v = std::move(v);
  out.rayleigh = num.real();
  return out;
}

double tail_fraction(const std::vector<cplx>& v, int N) {
  int edge = std::max(1, N / 10);
  double tail = 0, total = 0;
  for (int i = 0; i < N; ++i) {
    double cell = std::norm(v[2 * i]) + std::norm(v[2 * i + 1]);
    total += cell;
    if (i < edge || i >= N - edge) tail += cell;
  }
  return total > 0 ? tail / total : 1.0;
}

}  // namespace

std::vector<GapEigenvalue> dirac_eigen_in_gap(const PotentialSpec& V, double m, double eps,
                                              const GridSpec& grid,
                                              std::pair<double, double> window) {
  auto [lo, hi] = window;
  if (!(lo < hi) || !(lo > -m) || !(hi < m))
    throw ConfigError("dirac_eigen_in_gap: window must sit strictly inside (-m, m)");
  GridData d = sample_grid(V, grid);
  const int N = grid.N;
  std::vector<GapEigenvalue> out;

  if (V.hermitian) {
    HermBand H = assemble_herm(d, m, eps);
    double scale = m + eps * V.sup_norm + 2.0 / d.h;
    int below_lo = negs_below(H, lo, scale);
    int count = negs_below(H, hi, scale) - below_lo;
    if (count == 0) return out;
    if (count > 64) throw SolverError("dirac_eigen_in_gap: window contains > 64 eigenvalues");
    // peel eigenvalues off one at a time by inertia bisection
    for (int k = 1; k <= count; ++k) {
      double a = lo, b = hi;
      int target = below_lo + k;  // k-th eigenvalue in the window
      for (int it = 0; it < 100 && b - a > 1e-13 * std::max(1.0, m); ++it) {
        double mid = 0.5 * (a + b);
        (negs_below(H, mid, scale) >= target ? b : a) = mid;
      }
      double zk = 0.5 * (a + b);
      EvecOut ev = inverse_iteration(d, m, eps, cplx(zk, 0), 4, true);
      GapEigenvalue ge;
      ge.z = cplx(ev.rayleigh, 0.0);
      ge.in_gap_margin = std::min(m - ev.rayleigh, ev.rayleigh + m);
      ge.eigenvector_norm_tail = tail_fraction(ev.v, N);
      ge.tail_ok = ge.eigenvector_norm_tail <= 1e-6;
      out.push_back(ge);
    }
    return out;
  }

  // non-Hermitian: dense eigenvalues
  if (N > 4000)
    throw SolverError("dirac_eigen_in_gap: non-Hermitian path capped at N = 4000");
  const int n = 2 * N;
  const double ih = 1.0 / d.h;
  std::vector<cplx> A((std::size_t)n * n, cplx(0));
  auto at = [&](int r, int c) -> cplx& { return A[(std::size_t)c * n + r]; };
  for (int i = 0; i < N; ++i) {
    at(2 * i, 2 * i) = m - eps * d.V[i](0, 0);
    at(2 * i + 1, 2 * i + 1) = -m - eps * d.V[i](1, 1);
    at(2 * i + 1, 2 * i) = -ih - eps * d.V[i](1, 0);
    at(2 * i, 2 * i + 1) = -ih - eps * d.V[i](0, 1);
    if (i + 1 < N) {
      at(2 * i + 3, 2 * i) = ih;
      at(2 * i, 2 * i + 3) = ih;
    }
  }
  std::vector<cplx> w = dense_eigenvalues(A, n);
  std::vector<cplx> inwin;
  for (const cplx& z : w)
    if (z.real() > lo && z.real() < hi) inwin.push_back(z);
  std::sort(inwin.begin(), inwin.end(),
            [](const cplx& p, const cplx& q) { return p.real() < q.real(); });
  if ((int)inwin.size() > 64)
    throw SolverError("dirac_eigen_in_gap: window contains > 64 eigenvalues");
  for (const cplx& z : inwin) {
    EvecOut ev = inverse_iteration(d, m, eps, z, 3, false);
    GapEigenvalue ge;
    ge.z = z;
    ge.in_gap_margin = std::min(m - z.real(), z.real() + m);
    ge.eigenvector_norm_tail = tail_fraction(ev.v, N);
    ge.tail_ok = ge.eigenvector_norm_tail <= 1e-6;
    out.push_back(ge);
  }
  return out;
}

std::optional<SchrodingerGround> schrodinger_ground_state(
    const std::function<double(double)>& v, double m, double eps, const GridSpec& grid) {
  if (grid.N < 16) throw ConfigError("grid: N must be >= 16");
  if (!(grid.L > 0)) throw ConfigError("grid: L must be > 0");
  const double h = 2.0 * grid.L / grid.N;
  const int n = grid.N - 1;  // interior nodes
  std::vector<double> diag(n), off(n - 1, -0.5 / (m * h * h));
  for (int j = 0; j < n; ++j) {
    double x = -grid.L + (j + 1) * h;
    diag[j] = 1.0 / (m * h * h) - eps * v(x);
  }
  TridiagPair p = tridiag_smallest(diag, off);
  if (p.value >= 0) return std::nullopt;
  SchrodingerGround g;
  g.lambda = p.value;
  int edge = std::max(1, n / 10);
  double tail = 0, total = 0;
  for (int j = 0; j < n; ++j) {
    double c = p.vector[j] * p.vector[j];
    total += c;
    if (j < edge || j >= n - edge) tail += c;
  }
  g.eigenvector_norm_tail = total > 0 ? tail / total : 1.0;
  g.tail_ok = g.eigenvector_norm_tail <= 1e-6;
  return g;
}

}  // namespace gapspectra

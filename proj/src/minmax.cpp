#include "gapspectra/minmax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gapspectra/banded.hpp"

namespace gapspectra {

namespace {

void require_minmax_ok(const PotentialSpec& V) {
  if (!V.hermitian)
    throw ConfigError("minmax: potential must be Hermitian (gap variational route)");
  if (!(V.sup_norm < std::numeric_limits<double>::infinity()))
    throw ConfigError("minmax: potential must be bounded");
}

struct CrossBlock {
  // B(j, j+o-2) = b[j][o]; zero outside 0 <= j+o-2 < n
  std::vector<std::array<cplx, 5>>* b;
  cplx& at(int j, int k) { return (*b)[j][k - j + 2]; }
};

}  // namespace

SubspaceForms assemble_forms(const PotentialSpec& V, double m, double eps, const GridSpec& grid) {
  require_minmax_ok(V);
  if (grid.N < 16) throw ConfigError("minmax: N must be >= 16");
  if (!(grid.L > 0)) throw ConfigError("minmax: L must be > 0");
  const int N = grid.N;
  const int n = N - 1;
  const double dx = 2.0 * grid.L / N;
  const double a = 1.0 / (2.0 * m);

  SubspaceForms f;
  f.n = n;
  f.dx = dx;
  f.m = m;
  f.G.diag.assign(n, cplx(0));
  f.G.lower.assign(n - 1, cplx(0));
  f.Qpp = f.G;
  f.Qmm = f.G;
  f.cross.assign(n, {cplx(0), cplx(0), cplx(0), cplx(0), cplx(0)});
  CrossBlock B{&f.cross};

  // unweighted mass and stiffness on P1 interior nodes
  Tri Mass, K;
  Mass.diag.assign(n, cplx(2.0 * dx / 3.0));
  Mass.lower.assign(n - 1, cplx(dx / 6.0));
  K.diag.assign(n, cplx(2.0 / dx));
  K.lower.assign(n - 1, cplx(-1.0 / dx));

  // weighted forms, 2-point Gauss per element
  Tri P, Mf;  // <l+(phi_a), V l+(phi_b)>, <l-(phi_a), V l-(phi_b)>
  P.diag.assign(n, cplx(0));
  P.lower.assign(n - 1, cplx(0));
  Mf = P;
  std::vector<std::array<cplx, 5>> X(n, {cplx(0), cplx(0), cplx(0), cplx(0), cplx(0)});
  const double gx[2] = {-1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)};
  for (int el = 0; el < N; ++el) {
    const double x0 = -grid.L + el * dx;
    const double x1 = x0 + dx;
    const double mid = 0.5 * (x0 + x1), hw = 0.5 * dx;
    const int gidx[2] = {el - 1, el};
    const double dphi[2] = {-1.0 / dx, 1.0 / dx};
    for (int q = 0; q < 2; ++q) {
      const double xq = mid + hw * gx[q];
      const double wq = hw;  // unit Gauss weights
      const Mat2 Vq = V.evaluate(xq);
      const cplx v11 = Vq(0, 0), v12 = Vq(0, 1), v21 = Vq(1, 0), v22 = Vq(1, 1);
      const double phi[2] = {(x1 - xq) / dx, (xq - x0) / dx};
      for (int aa = 0; aa < 2; ++aa) {
        const int ia = gidx[aa];
        if (ia < 0 || ia >= n) continue;
        for (int bb = 0; bb < 2; ++bb) {
          const int ib = gidx[bb];
          if (ib < 0 || ib >= n) continue;
          const double pa = phi[aa], pb = phi[bb], da = dphi[aa], db = dphi[bb];
          const cplx p_ab =
              wq * (v11 * pa * pb - a * v12 * pa * db - a * v21 * da * pb + a * a * v22 * da * db);
          const cplx m_ab =
              wq * (a * a * v11 * da * db - a * v12 * da * pb - a * v21 * pa * db + v22 * pa * pb);
          const cplx x_ab =
              wq * (-a * v11 * pa * db + v12 * pa * pb + a * a * v21 * da * db - a * v22 * da * pb);
          if (ia == ib) {
            P.diag[ia] += p_ab;
            Mf.diag[ia] += m_ab;
          } else if (ia == ib + 1) {
            P.lower[ib] += p_ab;
            Mf.lower[ib] += m_ab;
          }
          // upper-triangle tridiagonal entries follow from hermiticity; the cross
          // block is not Hermitian so every entry is kept
          X[ia][ib - ia + 2] += x_ab;
        }
      }
    }
  }

  // slope-jump cross kinetic form: C = J2^T Jc with J2 the second difference / dx
  // and Jc the centered difference / 2dx, both over interior nodes
  auto j2val = [&](int k, int i) -> double {
    if (i == k) return -2.0 / dx;
    if (i == k - 1 || i == k + 1) return 1.0 / dx;
    return 0.0;
  };
  std::vector<std::array<double, 5>> C(n, {0, 0, 0, 0, 0});
  for (int k = 0; k < n; ++k) {
    for (int i = std::max(0, k - 1); i <= std::min(n - 1, k + 1); ++i) {
      for (int dj = -1; dj <= 1; dj += 2) {
        const int j = k + dj;
        if (j < 0 || j >= n) continue;
        C[i][j - i + 2] += j2val(k, i) * dj / (2.0 * dx);
      }
    }
  }

  for (int j = 0; j < n; ++j) {
    f.G.diag[j] = Mass.diag[j] + a * a * K.diag[j];
    f.Qpp.diag[j] = m * f.G.diag[j] + a * K.diag[j] - eps * P.diag[j];
    f.Qmm.diag[j] = -m * f.G.diag[j] - a * K.diag[j] - eps * Mf.diag[j];
    for (int o = 0; o < 5; ++o) {
      const int k = j + o - 2;
      if (k < 0 || k >= n) continue;
      B.at(j, k) = a * a * C[j][o] - eps * X[j][o];
    }
  }
  for (int j = 0; j + 1 < n; ++j) {
    f.G.lower[j] = Mass.lower[j] + a * a * K.lower[j];
    f.Qpp.lower[j] = m * f.G.lower[j] + a * K.lower[j] - eps * P.lower[j];
    f.Qmm.lower[j] = -m * f.G.lower[j] - a * K.lower[j] - eps * Mf.lower[j];
  }
  return f;
}

namespace {

cplx cross_at(const SubspaceForms& f, int j, int k) {
  if (k < j - 2 || k > j + 2 || k < 0 || k >= f.n) return cplx(0);
  return f.cross[j][k - j + 2];
}

// interleaved Hermitian band (h_0, g_0, h_1, g_1, ...) of
// T(lambda) = [[Qpp - lambda G, B], [B^H, Qmm - lambda G]]
HermBand assemble_T(const SubspaceForms& f, double lambda) {
  const int n = f.n;
  HermBand T(2 * n, 5);
  for (int j = 0; j < n; ++j) {
    T.lo(2 * j, 2 * j) = f.Qpp.diag[j] - lambda * f.G.diag[j];
    T.lo(2 * j + 1, 2 * j + 1) = f.Qmm.diag[j] - lambda * f.G.diag[j];
    if (j + 1 < n) {
      T.lo(2 * j + 2, 2 * j) = f.Qpp.lower[j] - lambda * f.G.lower[j];
      T.lo(2 * j + 3, 2 * j + 1) = f.Qmm.lower[j] - lambda * f.G.lower[j];
    }
    // coupling: row h_k (2k) x col g_j (2j+1) carries B(k, j)
    for (int k = j; k <= std::min(n - 1, j + 2); ++k) {
      if (2 * k > 2 * j + 1) T.lo(2 * k, 2 * j + 1) = cross_at(f, k, j);
    }
    // row g_j (2j+1) x col h_k (2k), k <= j: conj(B(k, j))
    for (int k = std::max(0, j - 2); k <= j; ++k)
      T.lo(2 * j + 1, 2 * k) = std::conj(cross_at(f, k, j));
  }
  return T;
}

double band_scale(const HermBand& A) {
  double s = 0;
  for (const cplx& c : A.a) s = std::max(s, std::abs(c));
  return s > 0 ? s : 1.0;
}

int negative_count(const HermBand& A0, double scale) {
  double jitter = 0;
  for (int attempt = 0; attempt < 6; ++attempt) {
    HermBand A = A0;
    if (jitter != 0)
      for (int j = 0; j < A.n; ++j) A.lo(j, j) += jitter;
    Inertia in = ldlh_inertia(A, 1e-13 * scale);
    if (in.ok) return in.n_neg;
    jitter = (attempt % 2 == 0 ? -1.0 : 1.0) * 1e-12 * scale * (1 + attempt);
  }
  throw SolverError("minmax inertia: persistent pivot breakdown");
}

HermBand tri_minus(const Tri& Q, const Tri& G, double lambda, int n) {
  HermBand A(n, 1);
  for (int j = 0; j < n; ++j) {
    A.lo(j, j) = Q.diag[j] - lambda * G.diag[j];
    if (j + 1 < n) A.lo(j + 1, j) = Q.lower[j] - lambda * G.lower[j];
  }
  return A;
}

}  // namespace

int schur_negative_count(const SubspaceForms& f, double lambda) {
  HermBand T = assemble_T(f, lambda);
  const double s = band_scale(T);
  const int neg_T = negative_count(T, s);
  HermBand A = tri_minus(f.Qmm, f.G, lambda, f.n);
  const int neg_mm = negative_count(A, band_scale(A));
  return neg_T - neg_mm;
}

double mu_of_lambda(const SubspaceForms& f, double lambda) {
  const int n = f.n;
  auto build_T_lu = [&](double lam) {
    BandLU lu(2 * n, 5, 5);
    HermBand T = assemble_T(f, lam);
    for (int j = 0; j < 2 * n; ++j) {
      for (int d = 0; d <= 5 && j + d < 2 * n; ++d) {
        const cplx v = T.lo(j + d, j);
        lu.at(j + d, j) = v;
        if (d > 0) lu.at(j, j + d) = std::conj(v);
      }
    }
    return lu;
  };
  double lam = lambda;
  BandLU T_lu = build_T_lu(lam);
  for (int attempt = 0;; ++attempt) {
    try {
      T_lu.factor();
      break;
    } catch (const SolverError&) {
      if (attempt >= 3) throw;
      lam += 1e-13 * (1.0 + std::abs(lam)) * (attempt + 1);
      T_lu = build_T_lu(lam);
    }
  }
  BandLU A_lu(n, 1, 1);
  {
    HermBand A = tri_minus(f.Qmm, f.G, lam, n);
    for (int j = 0; j < n; ++j) {
      A_lu.at(j, j) = A.lo(j, j);
      if (j + 1 < n) {
        A_lu.at(j + 1, j) = A.lo(j + 1, j);
        A_lu.at(j, j + 1) = std::conj(A.lo(j + 1, j));
      }
    }
    A_lu.factor();
  }
  auto apply_S = [&](const std::vector<cplx>& v) {
    std::vector<cplx> app(n, cplx(0)), bhv(n, cplx(0));
    for (int j = 0; j < n; ++j) {
      app[j] += (f.Qpp.diag[j] - lam * f.G.diag[j]) * v[j];
      if (j + 1 < n) {
        app[j] += std::conj(f.Qpp.lower[j] - lam * f.G.lower[j]) * v[j + 1];
        app[j + 1] += (f.Qpp.lower[j] - lam * f.G.lower[j]) * v[j];
      }
      for (int k = std::max(0, j - 2); k <= std::min(n - 1, j + 2); ++k)
        bhv[j] += std::conj(cross_at(f, k, j)) * v[k];
    }
    A_lu.solve(bhv);
    for (int j = 0; j < n; ++j)
      for (int k = std::max(0, j - 2); k <= std::min(n - 1, j + 2); ++k)
        app[j] -= cross_at(f, j, k) * bhv[k];
    return app;
  };
  // inverse iteration on S through the block solve T [x; y] = [b; 0]
  std::vector<cplx> v(n);
  for (int j = 0; j < n; ++j) v[j] = cplx(1.0 + 0.4 * std::sin(0.61 * j), 0.0);
  auto normalize = [&](std::vector<cplx>& w) {
    double s = 0;
    for (const cplx& c : w) s += std::norm(c);
    s = std::sqrt(s);
    for (cplx& c : w) c /= s;
  };
  normalize(v);
  double mu_prev = std::numeric_limits<double>::infinity();
  std::vector<cplx> rhs(2 * n);
  for (int it = 0; it < 40; ++it) {
    std::fill(rhs.begin(), rhs.end(), cplx(0));
    for (int j = 0; j < n; ++j) rhs[2 * j] = v[j];
    T_lu.solve(rhs);
    for (int j = 0; j < n; ++j) v[j] = rhs[2 * j];
    normalize(v);
    std::vector<cplx> Sv = apply_S(v);
    cplx r = 0;
    for (int j = 0; j < n; ++j) r += std::conj(v[j]) * Sv[j];
    const double mu = r.real();
    if (std::abs(mu - mu_prev) <= 1e-13 * std::max(1.0, std::abs(mu)) && it >= 3) return mu;
    mu_prev = mu;
  }
  return mu_prev;
}

namespace {

double pencil_largest_eigenvalue(const Tri& Q, const Tri& G, int n, double lo, double hi) {
  // largest s with an eigenvalue of (Q, G) at s: bisection on full-count inertia
  auto count_below = [&](double s) {
    HermBand A = tri_minus(Q, G, s, n);
    return negative_count(A, band_scale(A));
  };
  if (count_below(hi) < n) throw SolverError("minmax gamma0: upper bracket too low");
  for (int it = 0; it < 90 && hi - lo > 0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (count_below(mid) == n ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

bool coupling_out_of_range(const PotentialSpec& V, double m, double eps) {
  return V.sup_norm > 0 && eps >= m / V.sup_norm;
}

}  // namespace

double gamma0(const PotentialSpec& V, double m, double eps, const GridSpec& grid) {
  require_minmax_ok(V);
  if (coupling_out_of_range(V, m, eps))
    throw ConfigError("minmax: coupling eps >= m/sup|V|, gap condition unavailable");
  SubspaceForms f = assemble_forms(V, m, eps, grid);
  const double lo = -3.0 * m - eps * V.sup_norm - 1.0;
  const double hi = -m + eps * V.sup_norm + 1.0;
  return pencil_largest_eigenvalue(f.Qmm, f.G, f.n, lo, hi);
}

MinmaxResult solve_minmax(const PotentialSpec& V, double m, double eps, const GridSpec& grid) {
  require_minmax_ok(V);
  MinmaxResult out;
  if (coupling_out_of_range(V, m, eps)) {
    out.coupling_flagged = true;
    out.gamma0 = out.gamma1 = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  SubspaceForms f = assemble_forms(V, m, eps, grid);
  {
    const double lo = -3.0 * m - eps * V.sup_norm - 1.0;
    const double hi = -m + eps * V.sup_norm + 1.0;
    out.gamma0 = pencil_largest_eigenvalue(f.Qmm, f.G, f.n, lo, hi);
  }

  double a = out.gamma0 + 1e-6;
  double b = m;
  if (schur_negative_count(f, a) >= 1)
    throw SolverError("minmax: gap condition violated at the bracket start above gamma0");

  // trace mu on a coarse grid (monotone decreasing certificate material)
  for (int i = 1; i <= 8; ++i) {
    const double lam = out.gamma0 + 1e-3 + (m - out.gamma0 - 1e-3) * i / 9.0;
    out.mu_trace.push_back({lam, mu_of_lambda(f, lam)});
  }

  if (schur_negative_count(f, b) == 0) {
    out.gamma1 = m;
    out.at_threshold = true;
    out.mu_trace.push_back({m, mu_of_lambda(f, m)});
    return out;
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    (schur_negative_count(f, mid) >= 1 ? b : a) = mid;
  }
  // secant polish on mu across the final bracket
  double fa = mu_of_lambda(f, a);
  double fb = mu_of_lambda(f, b);
  double root = (fa > 0 && fb < 0 && fa - fb != 0) ? a + fa * (b - a) / (fa - fb) : 0.5 * (a + b);
  double x0 = a, f0 = fa, x1 = b, f1 = fb;
  for (int it = 0; it < 5; ++it) {
    if (f1 == f0 || x1 == x0) break;
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!(x2 > out.gamma0 && x2 <= m)) break;
    const double f2 = mu_of_lambda(f, x2);
    out.mu_trace.push_back({x2, f2});
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
    root = x2;
  }
  out.gamma1 = root;
  if (out.mu_trace.empty() || out.mu_trace.back().lambda != out.gamma1)
    out.mu_trace.push_back({out.gamma1, mu_of_lambda(f, out.gamma1)});
  return out;
}

double gamma1(const PotentialSpec& V, double m, double eps, const GridSpec& grid) {
  require_minmax_ok(V);
  if (coupling_out_of_range(V, m, eps))
    throw ConfigError("minmax: coupling eps >= m/sup|V|, gap condition unavailable");
  return solve_minmax(V, m, eps, grid).gamma1;
}

}  // namespace gapspectra

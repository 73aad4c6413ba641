#include "gapspectra/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace gapspectra {

QuadRule gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order < 1");
  QuadRule r;
  r.x.resize(order);
  r.w.resize(order);
  const int n = order;
  // roots of P_n by Newton from Chebyshev-ish initial guesses
  for (int k = 0; k < (n + 1) / 2; ++k) {
    double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      // evaluate P_n(x) and P_n'(x) by the three-term recurrence
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double wk = 2.0 / ((1.0 - x * x) * pp * pp);
    r.x[k] = -x;  // ascending order: leftmost roots first
    r.w[k] = wk;
    r.x[n - 1 - k] = x;
    r.w[n - 1 - k] = wk;
  }
  if (n % 2 == 1) {
    // middle node is exactly 0
    double p0 = 1.0, p1 = 0.0;  // P_j(0) recurrence
    for (int j = 2; j <= n; ++j) {
      double p2 = -(j - 1) * p0 / j;
      p0 = p1;
      p1 = p2;
    }
    // P_n'(0) = n * P_{n-1}(0)
    double pp = n * p0;
    r.x[n / 2] = 0.0;
    r.w[n / 2] = 2.0 / (pp * pp);
  }
  return r;
}

QuadRule composite_gl(double a, double b, int n_panels, int order,
                      const std::vector<double>& breakpoints) {
  if (!(b > a)) throw std::invalid_argument("composite_gl: empty interval");
  if (n_panels < 1) throw std::invalid_argument("composite_gl: n_panels < 1");
  std::set<double> pts{a, b};
  for (double p : breakpoints)
    if (p > a && p < b) pts.insert(p);
  std::vector<double> cut(pts.begin(), pts.end());

  QuadRule base = gauss_legendre(order);
  QuadRule out;
  for (std::size_t s = 0; s + 1 < cut.size(); ++s) {
    double lo = cut[s], hi = cut[s + 1];
    int k = std::max(1, (int)std::lround(n_panels * (hi - lo) / (b - a)));
    for (int p = 0; p < k; ++p) {
      double e0 = lo + (hi - lo) * p / k;
      double e1 = lo + (hi - lo) * (p + 1) / k;
      double mid = 0.5 * (e0 + e1), hw = 0.5 * (e1 - e0);
      for (std::size_t i = 0; i < base.size(); ++i) {
        out.x.push_back(mid + hw * base.x[i]);
        out.w.push_back(hw * base.w[i]);
      }
    }
  }
  return out;
}

}  // namespace gapspectra

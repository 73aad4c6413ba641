#pragma once

#include <vector>

namespace gapspectra {

struct QuadRule {
  std::vector<double> x, w;
  std::size_t size() const { return x.size(); }
};

// Gauss-Legendre nodes/weights on [-1,1], order n (exact for degree 2n-1)
QuadRule gauss_legendre(int order);

// composite GL rule on [a,b]: the interval is cut at every interior breakpoint,
// each piece gets a panel count proportional to its length (at least 1),
// n_panels is the total budget for [a,b]
QuadRule composite_gl(double a, double b, int n_panels, int order,
                      const std::vector<double>& breakpoints = {});

}  // namespace gapspectra

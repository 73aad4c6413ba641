#pragma once

#include <optional>
#include <vector>

#include "gapspectra/common.hpp"
#include "gapspectra/moments.hpp"
#include "gapspectra/potentials.hpp"

namespace gapspectra {

struct QuadSpec {
  int panels = 24;     // composite GL panel budget across the truncated support
  int order = 16;      // nodes per panel
  double radius = 0;   // 0 -> derive from declared decay (tail <= tol/10)
};

// Nystrom discretization of the sandwiched resolvent at fixed kappa:
//   M[2x2 block (i,j)] = sqrt(w_i) A(x_i) S_kappa(x_i,x_j) B*(x_j) sqrt(w_j)
//   a_i = sqrt(w_i) A(x_i) e1,  b_i = sqrt(w_i) B(x_i) e1  (B = (B*)^H)
struct NystromSystem {
  Eigen::MatrixXcd M;
  Eigen::VectorXcd a_vec, b_vec;
  std::vector<double> nodes, weights;
  double m = 0;
  cplx kappa = 0;
  double hs_norm() const { return M.norm(); }
};

// node set, weights and the pointwise polar factors are kappa-independent;
// build once, then assemble/evaluate at many kappa
class BsOperator {
 public:
  BsOperator(const PotentialSpec& V, double m, QuadSpec q, double tol = 1e-10);
  NystromSystem assemble(cplx kappa) const;
  // g(kappa) = eps*m*<b, (I - eps M)^{-1} a> - kappa
  cplx g(double eps, cplx kappa) const;
  cplx inner_product(double eps, cplx kappa) const;  // <b, (I - eps M)^{-1} a>
  // 2-norm estimate: 5 power iterations on M^H M, exact SVD fallback when
  // the iteration has not settled
  double op_norm_estimate(cplx kappa) const;
  int n_nodes() const { return (int)x_.size(); }
  double radius() const { return R_; }

 private:
  std::vector<double> x_, w_, sqw_;
  std::vector<Mat2> A_, Bstar_;
  double m_, R_;
};

struct KappaRoot {
  cplx kappa = 0, z = 0;
  double residual = 0;  // |g(kappa)|
  int iterations = 0;
  bool converged = false;
  bool no_eigenvalue = false;  // existence precondition failed or no zero found
  int winding = -1;            // -1 = not checked
};

// weakly coupled bound state emerging from the chosen threshold; Newton on g
// seeded at kappa0 = eps*m*U11 + eps^2*m*F+_11 (plus_m; minus_m runs the exact
// sigma1-reduced problem and negates z). Optional winding verification.
KappaRoot find_bound_state(const PotentialSpec& V, double m, double eps,
                           Threshold th = Threshold::plus_m, QuadSpec q = {},
                           const MomentSet* moments = nullptr, bool verify_winding = false,
                           double tol = 1e-10);

// second-sheet zero (Re kappa < 0). Requires compact or exponential decay with
// rate a and |Re kappa0| < a/2, and Re U11 < 0
KappaRoot find_resonance(const PotentialSpec& V, double m, double eps, QuadSpec q = {},
                         const MomentSet* moments = nullptr, double tol = 1e-10);

// argument-principle zero count of g on the indented half-disc
// {|kappa| < radius, Re kappa > indent}, counterclockwise
int count_zeros_halfdisc(const PotentialSpec& V, double m, double eps, double radius,
                         double indent, QuadSpec q = {}, double tol = 1e-10);

}  // namespace gapspectra

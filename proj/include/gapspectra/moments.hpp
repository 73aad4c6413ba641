#pragma once

#include <array>

#include "gapspectra/common.hpp"
#include "gapspectra/potentials.hpp"

namespace gapspectra {

struct MomentSet {
  Mat2 U = Mat2::Zero();        // int V(x) dx
  Mat2 F_plus = Mat2::Zero();   // iint V(x) (sgn(x-y) i sigma2 - |x-y|/2 * m(sigma3+Id)) V(y)
  Mat2 F_minus = Mat2::Zero();  // same with m(sigma3-Id)
  std::array<double, 3> moment_norms{};  // int (1+|x|)^k |V(x)| dx, k = 0,1,2
  cplx sch_cross = 0.0;                  // iint v(x) |x-y| v(y), v = V11 by default
};

// every routine integrates over [-R,R] with R chosen from the declared decay so
// the truncation tail is <= tol/10, refines panels until doubling moves the
// result by <= tol, and throws when the metadata cannot certify integrability

Mat2 compute_U(const PotentialSpec& V, double tol = 1e-10);
Mat2 compute_F(const PotentialSpec& V, double m, int sign, double tol = 1e-10);
// the antisymmetric sgn(x-y) i sigma2 part of F alone (symmetry diagnostics)
Mat2 compute_F_sgn_part(const PotentialSpec& V, double tol = 1e-10);
cplx compute_sch_cross(const PotentialSpec& V, double tol = 1e-10, int row = 0, int col = 0);
std::array<double, 3> compute_moment_norms(const PotentialSpec& V, double tol = 1e-10);

MomentSet compute_all(const PotentialSpec& V, double m, double tol = 1e-10);

}  // namespace gapspectra

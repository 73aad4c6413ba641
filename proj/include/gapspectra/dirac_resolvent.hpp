#pragma once

#include "gapspectra/common.hpp"

namespace gapspectra {

// kappa(z) = sqrt(m^2 - z^2) with Re kappa >= 0; ties (Re == 0) resolved to Im >= 0
struct KappaZ {
  cplx kappa;
  cplx z;
  bool at_threshold = false;  // z = +-m (kappa numerically zero)
};

KappaZ kappa_of_z(cplx z, double m);

// inverse map, cancellation-free near kappa = 0:
//   plus_m :  z =  m - kappa^2 / (m + sqrt(m^2 - kappa^2))
//   minus_m:  z = -(that)
cplx z_of_kappa(cplx kappa, double m, Threshold th = Threshold::plus_m);

// free-resolvent kernel of D_m at energy z; on the second sheet the formula is
// evaluated at the continued root -kappa(z)
Mat2 resolvent_kernel(double x, double y, cplx z, double m, Sheet sheet = Sheet::physical);

// regular part around the +m threshold, parameterized by kappa directly
// (Re kappa < 0 reaches the second sheet); satisfies
//   R_z(x,y) = (m/kappa) P+ P+^* + S(x,y)   with   P+ P+^* = diag(1,0)
Mat2 regular_kernel_S(double x, double y, cplx kappa, double m);

// kappa -> 0 limit of S
Mat2 limit_kernel_M1(double x, double y, double m);

}  // namespace gapspectra

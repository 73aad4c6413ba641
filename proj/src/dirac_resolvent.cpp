#include "gapspectra/dirac_resolvent.hpp"

#include <cmath>

namespace gapspectra {

KappaZ kappa_of_z(cplx z, double m) {
  cplx k = std::sqrt(cplx(m * m) - z * z);  // principal root: Re >= 0
  if (k.real() == 0.0 && k.imag() < 0.0) k = -k;
  KappaZ out;
  out.kappa = k;
  out.z = z;
  out.at_threshold = std::abs(k) <= 1e-14 * m;
  return out;
}

cplx z_of_kappa(cplx kappa, double m, Threshold th) {
  cplx s = std::sqrt(cplx(m * m) - kappa * kappa);
  cplx z = m - kappa * kappa / (m + s);
  return th == Threshold::plus_m ? z : -z;
}

Mat2 resolvent_kernel(double x, double y, cplx z, double m, Sheet sheet) {
  KappaZ kz = kappa_of_z(z, m);
  if (kz.at_threshold)
    throw SolverError("resolvent_kernel: z is at a threshold, kernel singular");
  cplx k = sheet == Sheet::physical ? kz.kappa : -kz.kappa;
  double r = std::abs(x - y);
  double s = sgn(x - y);
  cplx e = std::exp(-k * r);
  Mat2 R;
  // (z-m)/k = -k/(z+m) exactly since (z-m)(z+m) = -k^2
  R << (z + m) / k, -s, s, -k / (z + m);
  return Mat2(0.5 * e * R);
}

Mat2 regular_kernel_S(double x, double y, cplx kappa, double m) {
  double r = std::abs(x - y);
  double s = sgn(x - y);
  cplx z = z_of_kappa(kappa, m, Threshold::plus_m);
  cplx kr = kappa * r;
  cplx e = std::exp(-kr);
  cplx E1;  // (e^{-kr} - 1)/kappa, series near 0 to dodge cancellation
  if (std::abs(kr) < 1e-4) {
    E1 = -r * (1.0 - kr / 2.0 + kr * kr / 6.0 - kr * kr * kr / 24.0);
  } else {
    E1 = (e - 1.0) / kappa;
  }
  cplx c = -kappa / (z + m);  // = (z-m)/kappa
  Mat2 S;
  S << m * E1 + e * 0.5 * c, -e * 0.5 * s, e * 0.5 * s, e * 0.5 * c;
  return S;
}

Mat2 limit_kernel_M1(double x, double y, double m) {
  double s = sgn(x - y);
  Mat2 M;
  M << -m * std::abs(x - y), -0.5 * s, 0.5 * s, 0.0;
  return M;
}

}  // namespace gapspectra

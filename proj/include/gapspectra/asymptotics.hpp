#pragma once

#include <string>
#include <vector>

#include "gapspectra/common.hpp"
#include "gapspectra/moments.hpp"

namespace gapspectra {

// one term coeff * eps^power * log(eps)^log_power of an expansion
struct OrderTerm {
  double power = 0;
  cplx coeff = 0;
  int log_power = 0;
};

struct Prediction {
  cplx value = 0;
  std::vector<OrderTerm> order_terms;  // value == sum of terms at the given eps, exactly
  std::string error_order;             // symbolic remainder tag
  std::string source;                  // which expansion produced it
  double band_unit = 0;  // comparison route: sqrt(eps)*|lambdaS| + eps^3 at unit constant
};

cplx evaluate_terms(const std::vector<OrderTerm>& terms, double eps);

// weak-coupling Schrodinger ground state -(1/2m)(m eps U + (m^2 eps^2/4) cross)^2,
// cross = iint v(x)|x-y|v(y); terms selects the one- or two-term inner expression
Prediction predict_schrodinger_short(cplx U_entry, cplx cross, double m, double eps, int terms);

// long-range (Coulomb-type tail) Schrodinger level -2 m eps^2 log(eps)^2
Prediction predict_schrodinger_long(double m, double eps);

// the same shifted to the upper Dirac gap edge: m - 2 m eps^2 log(eps)^2
Prediction predict_dirac_long(double m, double eps);

// two-term Dirac gap eigenvalue from the moment matrices:
//   plus_m :  z = m - (m/2) U11^2 eps^2 - m U11 F+_11 eps^3
//   minus_m:  z = -m + (m/2) U22^2 eps^2 + m U22 F-_22 eps^3
Prediction predict_dirac_second_order(const MomentSet& moments, double m, double eps,
                                      Threshold threshold);

// comparison route: central value m + lambdaS, half-band C*(sqrt(eps)|lambdaS| + eps^3)
// with C left to the fitter (band_unit holds the C = 1 value)
Prediction predict_comparison(double lambdaS, double m, double eps);

}  // namespace gapspectra

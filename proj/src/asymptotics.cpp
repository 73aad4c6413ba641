#include "gapspectra/asymptotics.hpp"

#include <cmath>

namespace gapspectra {

cplx evaluate_terms(const std::vector<OrderTerm>& terms, double eps) {
  cplx s = 0;
  const double le = eps > 0 ? std::log(eps) : 0.0;
  for (const OrderTerm& t : terms) {
    double f = std::pow(eps, t.power);
    for (int k = 0; k < t.log_power; ++k) f *= le;
    s += t.coeff * f;
  }
  return s;
}

Prediction predict_schrodinger_short(cplx U_entry, cplx cross, double m, double eps, int terms) {
  if (terms != 1 && terms != 2)
    throw ConfigError("predict_schrodinger_short: terms must be 1 or 2");
  if (!(U_entry.real() > 0))
    throw ConfigError("predict_schrodinger_short: needs Re(int v) > 0 for a bound state");
  Prediction p;
  p.source = "schrodinger_short_range";
  p.error_order = terms == 1 ? "o(eps^2)" : "O(eps^{1+nu}) inside the square";
  // -(1/2m)(m eps U + (m^2 eps^2/4) cross)^2 expanded exactly in powers of eps
  p.order_terms.push_back({2, -(m / 2.0) * U_entry * U_entry, 0});
  if (terms == 2) {
    p.order_terms.push_back({3, -(m * m / 4.0) * U_entry * cross, 0});
    p.order_terms.push_back({4, -(m * m * m / 32.0) * cross * cross, 0});
  }
  const cplx inner = m * eps * U_entry + (terms == 2 ? (m * m * eps * eps / 4.0) * cross : 0.0);
  p.value = -inner * inner / (2.0 * m);
  return p;
}

Prediction predict_schrodinger_long(double m, double eps) {
  if (!(eps > 0 && eps < 1))
    throw ConfigError("predict_schrodinger_long: eps must lie in (0, 1)");
  Prediction p;
  p.source = "schrodinger_long_range";
  p.error_order = "o(eps^2 log^2 eps)";
  p.order_terms.push_back({2, -2.0 * m, 2});
  const double le = std::log(eps);
  p.value = -2.0 * m * eps * eps * le * le;
  return p;
}

Prediction predict_dirac_long(double m, double eps) {
  Prediction p = predict_schrodinger_long(m, eps);
  p.source = "dirac_long_range";
  p.order_terms.insert(p.order_terms.begin(), {0, m, 0});
  p.value += m;
  return p;
}

Prediction predict_dirac_second_order(const MomentSet& moments, double m, double eps,
                                      Threshold threshold) {
  Prediction p;
  p.source = "dirac_two_term";
  p.error_order = "O(eps^4)";
  if (threshold == Threshold::plus_m) {
    const cplx u = moments.U(0, 0);
    const cplx f = moments.F_plus(0, 0);
    if (!(u.real() > 0))
      throw ConfigError(
          "predict_dirac_second_order: upper edge needs Re U11 > 0 (existence condition)");
    p.order_terms.push_back({0, m, 0});
    p.order_terms.push_back({2, -(m / 2.0) * u * u, 0});
    p.order_terms.push_back({3, -m * u * f, 0});
  } else {
    const cplx u = moments.U(1, 1);
    const cplx f = moments.F_minus(1, 1);
    if (!(u.real() < 0))
      throw ConfigError(
          "predict_dirac_second_order: lower edge needs Re U22 < 0 (existence condition)");
    p.order_terms.push_back({0, -m, 0});
    p.order_terms.push_back({2, (m / 2.0) * u * u, 0});
    p.order_terms.push_back({3, m * u * f, 0});
  }
  p.value = evaluate_terms(p.order_terms, eps);
  return p;
}

Prediction predict_comparison(double lambdaS, double m, double eps) {
  if (!(lambdaS <= 0)) throw ConfigError("predict_comparison: lambdaS must be <= 0");
  Prediction p;
  p.source = "dirac_schrodinger_comparison";
  p.error_order = "O(sqrt(eps) lambdaS) + O(eps^3)";
  p.order_terms.push_back({0, m, 0});
  p.order_terms.push_back({0, lambdaS, 0});
  p.value = m + lambdaS;
  p.band_unit = std::sqrt(eps) * std::abs(lambdaS) + eps * eps * eps;
  return p;
}

}  // namespace gapspectra

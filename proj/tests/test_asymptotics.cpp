#include <doctest.h>

#include <cmath>

#include "gapspectra/asymptotics.hpp"

using namespace gapspectra;

namespace {

MomentSet square_well_moments() {
  return compute_all(make_builtin("square_well", {1, 0, 1}), 1.0);
}

}  // namespace

TEST_SUITE("asymptotics") {
  TEST_CASE("two term dirac prediction at the upper edge") {
    MomentSet ms = square_well_moments();
    Prediction p = predict_dirac_second_order(ms, 1.0, 0.1, Threshold::plus_m);
    // 1 - (1/2)*0.01 + (1/3)*0.001
    CHECK(p.value.real() == doctest::Approx(0.99533333333333329).epsilon(1e-12));
    CHECK(std::abs(p.value.imag()) <= 1e-12);
    CHECK(p.source == "dirac_two_term");
    CHECK(p.error_order == "O(eps^4)");
    REQUIRE(p.order_terms.size() == 3);
    CHECK(p.order_terms[0].power == 0);
    CHECK(p.order_terms[0].coeff == cplx(1, 0));
    CHECK(p.order_terms[1].power == 2);
    CHECK(p.order_terms[1].coeff.real() == doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(p.order_terms[2].power == 3);
    CHECK(p.order_terms[2].coeff.real() == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(std::abs(evaluate_terms(p.order_terms, 0.1) - p.value) <= 1e-15);
  }

  TEST_CASE("lower edge mirrors the upper edge for the swapped potential") {
    MomentSet ms = compute_all(make_builtin("square_well", {0, -1, 1}), 1.0);
    Prediction p = predict_dirac_second_order(ms, 1.0, 0.1, Threshold::minus_m);
    CHECK(p.value.real() == doctest::Approx(-0.99533333333333329).epsilon(1e-12));
    // the plus_m route requires Re U11 > 0 and must refuse here
    CHECK_THROWS_AS(predict_dirac_second_order(ms, 1.0, 0.1, Threshold::plus_m), ConfigError);
  }

  TEST_CASE("existence gate on the moment sign") {
    MomentSet rep = compute_all(make_builtin("square_well", {-1, 0, 1}), 1.0);
    CHECK_THROWS_AS(predict_dirac_second_order(rep, 1.0, 0.1, Threshold::plus_m), ConfigError);
    CHECK_THROWS_AS(predict_dirac_second_order(rep, 1.0, 0.1, Threshold::minus_m), ConfigError);
  }

  TEST_CASE("schrodinger short range square") {
    MomentSet ms = square_well_moments();
    Prediction p2 = predict_schrodinger_short(ms.U(0, 0), ms.sch_cross, 1.0, 0.1, 2);
    // -(0.1 + 0.0025/3)^2 / 2
    CHECK(p2.value.real() == doctest::Approx(-0.0050836805555555566).epsilon(1e-10));
    CHECK(p2.error_order == "O(eps^{1+nu}) inside the square");
    Prediction p1 = predict_schrodinger_short(ms.U(0, 0), ms.sch_cross, 1.0, 0.1, 1);
    CHECK(p1.value.real() == doctest::Approx(-0.005).epsilon(1e-12));
    CHECK(p1.error_order == "o(eps^2)");
    CHECK_THROWS_AS(predict_schrodinger_short(ms.U(0, 0), ms.sch_cross, 1.0, 0.1, 3),
                    ConfigError);
    CHECK_THROWS_AS(predict_schrodinger_short(cplx(-1, 0), ms.sch_cross, 1.0, 0.1, 2),
                    ConfigError);
    CHECK(std::abs(evaluate_terms(p2.order_terms, 0.1) - p2.value) <= 1e-15);
  }

  TEST_CASE("long range laws carry the log square") {
    Prediction ps = predict_schrodinger_long(1.0, 0.1);
    CHECK(ps.value.real() == doctest::Approx(-0.10603796220956793).epsilon(1e-12));
    CHECK(ps.error_order == "o(eps^2 log^2 eps)");
    REQUIRE(ps.order_terms.size() == 1);
    CHECK(ps.order_terms[0].log_power == 2);
    CHECK(ps.order_terms[0].power == 2);

    Prediction pd = predict_dirac_long(1.0, 0.01);
    CHECK(pd.value.real() == doctest::Approx(0.99575848151161728).epsilon(1e-12));
    REQUIRE(pd.order_terms.size() == 2);
    CHECK(pd.order_terms[0].power == 0);
    CHECK(std::abs(evaluate_terms(pd.order_terms, 0.01) - pd.value) <= 1e-15);

    CHECK_THROWS_AS(predict_schrodinger_long(1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(predict_schrodinger_long(1.0, 0.0), ConfigError);
  }

  TEST_CASE("comparison route exposes the band unit") {
    Prediction p = predict_comparison(-0.01, 1.0, 0.05);
    CHECK(p.value.real() == doctest::Approx(0.99).epsilon(1e-14));
    CHECK(p.band_unit ==
          doctest::Approx(std::sqrt(0.05) * 0.01 + 0.05 * 0.05 * 0.05).epsilon(1e-12));
    CHECK(p.source == "dirac_schrodinger_comparison");
    CHECK_THROWS_AS(predict_comparison(+0.01, 1.0, 0.05), ConfigError);
  }

  TEST_CASE("mass dependence enters every coefficient") {
    // scale check at m = 2: U stays, the expansion shifts with m
    PotentialSpec V = make_builtin("square_well", {1, 0, 1});
    MomentSet ms = compute_all(V, 2.0);
    Prediction p = predict_dirac_second_order(ms, 2.0, 0.05, Threshold::plus_m);
    // z = 2 - (2/2)*1*eps^2 - 2*1*F*eps^3, F = -2/3 at m=2
    const double expect = 2.0 - 1.0 * 0.0025 + 2.0 * (2.0 / 3.0) * 0.000125;
    CHECK(p.value.real() == doctest::Approx(expect).epsilon(1e-10));
  }

  TEST_CASE("complex moments produce complex predictions") {
    MomentSet ms = compute_all(make_builtin("custom_matrix", {1, 1, 1, 0, 0, 0, 0, 0, 0}), 1.0);
    Prediction p = predict_dirac_second_order(ms, 1.0, 0.05, Threshold::plus_m);
    CHECK(std::abs(p.value.imag()) > 1e-4);  // U11^2 = 2i feeds the second order term
    CHECK(p.value.real() < 1.0);
  }
}

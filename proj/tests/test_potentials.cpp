#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "gapspectra/potentials.hpp"

using namespace gapspectra;

TEST_SUITE("potentials") {
  TEST_CASE("square well evaluates to the indicator block") {
    PotentialSpec V = make_builtin("square_well", {1, 0, 1});
    CHECK(V.hermitian);
    CHECK(V.sup_norm == doctest::Approx(1.0));
    CHECK(V.evaluate(0.0)(0, 0) == cplx(1, 0));
    CHECK(V.evaluate(0.49)(0, 0) == cplx(1, 0));
    CHECK(V.evaluate(0.51)(0, 0) == cplx(0, 0));
    CHECK(V.evaluate(0.2)(1, 1) == cplx(0, 0));
    REQUIRE(V.kinks.size() == 2);
    CHECK(V.kinks[0] == doctest::Approx(-0.5));
    CHECK(V.kinks[1] == doctest::Approx(0.5));
    CHECK(V.decay.kind == Decay::Kind::compact);
    CHECK(V.decay.radius == doctest::Approx(0.5));
  }

  TEST_CASE("gaussian and coulomb tail evaluate pointwise") {
    PotentialSpec G = make_builtin("gaussian", {-1, 0, 1});
    CHECK(G.evaluate(0.0)(0, 0) == cplx(-1, 0));
    CHECK(G.evaluate(1.0)(0, 0).real() == doctest::Approx(-std::exp(-1.0)));
    CHECK(G.evaluate(1.0)(1, 1) == cplx(0, 0));
    CHECK(G.hermitian);

    PotentialSpec C = make_builtin("coulomb_tail", {});
    CHECK(C.evaluate(0.0)(0, 0) == cplx(1, 0));
    CHECK(C.evaluate(1.0)(0, 0).real() == doctest::Approx(0.5));
    CHECK(C.evaluate(-3.0)(0, 0).real() == doctest::Approx(0.25));
    CHECK(C.finite_moments == -1);  // not integrable

    PotentialSpec Cc = make_builtin("coulomb_tail", {2.0});
    CHECK(Cc.evaluate(1.0)(0, 0).real() == doctest::Approx(0.5));  // inside cutoff
    CHECK(Cc.evaluate(5.0)(0, 0) == cplx(0, 0));                   // beyond 2R
    CHECK(Cc.decay.kind == Decay::Kind::compact);
  }

  TEST_CASE("two bump places the blocks at the stated centers") {
    PotentialSpec V = make_builtin("two_bump", {-2, 2, 1, 1, 1});
    CHECK(V.evaluate(-2.0)(0, 0) == cplx(1, 0));
    CHECK(V.evaluate(-2.0)(1, 0) == cplx(0, 0));
    CHECK(V.evaluate(2.0)(1, 0) == cplx(1, 0));
    CHECK(V.evaluate(2.0)(0, 0) == cplx(0, 0));
    CHECK(V.evaluate(0.0).cwiseAbs().maxCoeff() == 0.0);
    CHECK_FALSE(V.hermitian);  // lone lower-left block
    CHECK(V.decay.radius == doctest::Approx(2.5));
  }

  TEST_CASE("custom matrix carries the complex entries and detects hermiticity") {
    PotentialSpec V = make_builtin("custom_matrix", {1, 1, 1, 0, 0, 0, 0, 0, 0});
    CHECK(V.evaluate(0.0)(0, 0) == cplx(1, 1));
    CHECK(V.evaluate(0.51).cwiseAbs().maxCoeff() == 0.0);
    CHECK_FALSE(V.hermitian);

    PotentialSpec H = make_builtin("custom_matrix", {2, 1, 0, 0, 1, 0, -1, 3, 0});
    CHECK(H.hermitian);  // [[1, i], [-i, 3]]
    CHECK(H.evaluate(0.9)(0, 1) == cplx(0, 1));
    CHECK(H.sup_norm > 3.0);  // 2-norm of the matrix exceeds the largest diagonal
  }

  TEST_CASE("unknown family and bad parameter counts are config errors") {
    CHECK_THROWS_AS(make_builtin("nope", {}), ConfigError);
    CHECK_THROWS_AS(make_builtin("square_well", {1}), ConfigError);
    CHECK_THROWS_AS(make_builtin("square_well", {1, 0, -1}), ConfigError);
    CHECK_THROWS_AS(make_builtin("two_bump", {0, 0, 1}), ConfigError);
    CHECK_THROWS_AS(make_builtin("custom_matrix", {1, 1}), ConfigError);
  }

  TEST_CASE("polar factorization reconstructs V pointwise") {
    for (auto spec : {make_builtin("square_well", {1, 0, 1}),
                      make_builtin("gaussian", {-1, 0.3, 2}),
                      make_builtin("two_bump", {-2, 2, 1, 1, 1}),
                      make_builtin("custom_matrix", {1, 1, 1, 0.2, -0.3, 0.1, 0, -2, 0})}) {
      FactorizedPotential fac = factorize(spec);
      for (double x : {-2.3, -0.4, 0.0, 0.2, 0.49, 1.7, 2.2}) {
        Mat2 V = spec.evaluate(x);
        Mat2 R = fac.Bstar(x) * fac.A(x);
        CHECK((R - V).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + V.cwiseAbs().maxCoeff()));
        // both factors carry |V|^{1/2}: operator norms agree up to roundoff
        double nv = std::sqrt(V.cwiseAbs2().sum());
        CHECK(fac.A(x).cwiseAbs().maxCoeff() <= std::sqrt(nv) + 1e-12);
      }
    }
  }

  TEST_CASE("sigma1 conjugation swaps entries without conjugating") {
    PotentialSpec V = make_builtin("custom_matrix", {1, 1, 2, 3, 4, 5, 6, 7, 8});
    PotentialSpec W = sigma1_conjugate(V);
    Mat2 v = V.evaluate(0.0), w = W.evaluate(0.0);
    CHECK(w(0, 0) == v(1, 1));
    CHECK(w(1, 1) == v(0, 0));
    CHECK(w(0, 1) == v(1, 0));
    CHECK(w(1, 0) == v(0, 1));
    CHECK(W.sup_norm == doctest::Approx(V.sup_norm));
  }

  TEST_CASE("scaling by a complex factor drops the hermitian flag") {
    PotentialSpec V = make_builtin("square_well", {1, 0, 1});
    PotentialSpec Wr = scale(V, cplx(-2, 0));
    CHECK(Wr.hermitian);
    CHECK(Wr.evaluate(0.0)(0, 0) == cplx(-2, 0));
    CHECK(Wr.sup_norm == doctest::Approx(2.0));
    PotentialSpec Wc = scale(V, cplx(0, 1));
    CHECK_FALSE(Wc.hermitian);
    CHECK(Wc.evaluate(0.0)(0, 0) == cplx(0, 1));
  }

  TEST_CASE("declared decay certifies tail bounds") {
    Decay compact{Decay::Kind::compact, 2.0, 0, 0, 0};
    CHECK(decay_tail_bound(compact, 2.5, 2) == 0.0);
    CHECK(std::isinf(decay_tail_bound(compact, 1.0, 0)));  // R inside the support
    Decay expo{Decay::Kind::exponential, 0, 3.0, 2.0, 0};
    // int_R^inf 2 * C e^{-rate x} (1+x)^0 dx = 2C/rate e^{-rate R}
    double b = decay_tail_bound(expo, 4.0, 0);
    CHECK(b >= 2.0 * 3.0 / 2.0 * std::exp(-8.0));
    CHECK(b <= 10.0 * std::exp(-8.0) * 10.0);
    CHECK(decay_tail_bound(expo, 8.0, 0) < decay_tail_bound(expo, 4.0, 0));
    Decay poly1{Decay::Kind::polynomial, 0, 1.0, 0, 1.0};
    CHECK(std::isinf(decay_tail_bound(poly1, 10.0, 0)));  // 1/(1+x) is not L1
    Decay poly4{Decay::Kind::polynomial, 0, 1.0, 0, 4.0};
    CHECK(std::isfinite(decay_tail_bound(poly4, 10.0, 2)));
    CHECK(std::isinf(decay_tail_bound(poly4, 10.0, 3)));
  }

  TEST_CASE("suggest radius reaches small tails for fast decay") {
    PotentialSpec G = make_builtin("gaussian", {1, 0, 1});
    double R = suggest_radius(G.decay, 2, 1e-12);
    CHECK(R >= 1.0);
    CHECK(decay_tail_bound(G.decay, R, 2) <= 1e-12);
    Decay poly1{Decay::Kind::polynomial, 0, 1.0, 0, 1.0};
    CHECK_THROWS_AS(suggest_radius(poly1, 0, 1e-3), SolverError);
  }

  TEST_CASE("hypothesis reports gate the theorem routes") {
    PotentialSpec sw = make_builtin("square_well", {1, 0, 1});
    CHECK(check_hypotheses(sw, TheoremId::thm_second_order).pass);
    PotentialSpec ct = make_builtin("coulomb_tail", {});
    CHECK_FALSE(check_hypotheses(ct, TheoremId::thm_second_order).pass);
    CHECK(check_hypotheses(ct, TheoremId::thm_long_range).pass);
    CHECK(check_hypotheses(ct, TheoremId::prop_comparison).pass);
    // every failed check names a witness line
    HypothesisReport rep = check_hypotheses(ct, TheoremId::thm_second_order);
    bool found_fail = false;
    for (const auto& c : rep.checks)
      if (!c.pass) {
        found_fail = true;
        CHECK_FALSE(c.name.empty());
      }
    CHECK(found_fail);
  }

  TEST_CASE("tabulated potential interpolates and clamps to zero outside") {
    const char* path = "tab_pot_test.csv";
    {
      std::ofstream out(path);
      out << "# x re11 im11 re12 im12 re21 im21 re22 im22\n";
      out << "-1, 2, 0, 0, 0, 0, 0, 0, 0\n";
      out << " 0, 4, 1, 0, 0, 0, 0, 0, 0\n";
      out << " 1, 0, 0, 0, 0, 0, 0, 0, 0\n";
    }
    PotentialSpec V = make_tabulated(path);
    CHECK(V.evaluate(-0.5)(0, 0) == cplx(3, 0.5));
    CHECK(V.evaluate(0.5)(0, 0) == cplx(2, 0.5));
    CHECK(V.evaluate(1.5).cwiseAbs().maxCoeff() == 0.0);
    CHECK(V.evaluate(-7.0).cwiseAbs().maxCoeff() == 0.0);
    CHECK_FALSE(V.hermitian);  // the im11 sample breaks hermiticity
    std::remove(path);

    const char* bad = "tab_pot_bad.csv";
    {
      std::ofstream out(bad);
      out << "0, 1, 0, 0, 0, 0, 0, 0, 0\n";
      out << "0, 2, 0, 0, 0, 0, 0, 0, 0\n";  // x not increasing
    }
    CHECK_THROWS_AS(make_tabulated(bad), ConfigError);
    std::remove(bad);
    CHECK_THROWS_AS(make_tabulated("does_not_exist.csv"), ConfigError);
  }
}

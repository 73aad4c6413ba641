#include <doctest.h>

#include <cmath>

#include "gapspectra/moments.hpp"

using namespace gapspectra;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_SUITE("moments") {
  TEST_CASE("square well moments are the closed-form values") {
    PotentialSpec V = make_builtin("square_well", {1, 0, 1});
    MomentSet ms = compute_all(V, 1.0);
    CHECK(ms.U(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(ms.U(0, 1)) <= 1e-12);
    CHECK(std::abs(ms.U(1, 0)) <= 1e-12);
    CHECK(std::abs(ms.U(1, 1)) <= 1e-12);
    // F+_11 = -m iint |x-y| v(x) v(y) = -1/3 for the unit well
    CHECK(ms.F_plus(0, 0).real() == doctest::Approx(-1.0 / 3.0).epsilon(1e-10));
    CHECK(std::abs(ms.F_plus(0, 0).imag()) <= 1e-12);
    // upsilon_- = diag(0,-2) sees only V22 = 0, and the sgn part is off-diagonal
    CHECK(std::abs(ms.F_minus(0, 0)) <= 1e-10);
    CHECK(std::abs(ms.F_minus(1, 1)) <= 1e-10);
    CHECK(ms.sch_cross.real() == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(ms.moment_norms[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(ms.moment_norms[1] == doctest::Approx(1.25).epsilon(1e-10));
    CHECK(ms.moment_norms[2] == doctest::Approx(19.0 / 12.0).epsilon(1e-10));
  }

  TEST_CASE("gaussian moments match the error-function closed forms") {
    PotentialSpec V = make_builtin("gaussian", {-1, 0, 1});
    MomentSet ms = compute_all(V, 1.0);
    CHECK(ms.U(0, 0).real() == doctest::Approx(-std::sqrt(kPi)).epsilon(1e-11));
    // iint |x-y| e^{-x^2} e^{-y^2} = sqrt(2 pi)
    CHECK(ms.F_plus(0, 0).real() == doctest::Approx(-std::sqrt(2.0 * kPi)).epsilon(1e-10));
    CHECK(ms.sch_cross.real() == doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-10));
    CHECK(ms.moment_norms[0] == doctest::Approx(std::sqrt(kPi)).epsilon(1e-10));
    CHECK(ms.moment_norms[1] == doctest::Approx(std::sqrt(kPi) + 1.0).epsilon(1e-10));
    CHECK(ms.moment_norms[2] == doctest::Approx(1.5 * std::sqrt(kPi) + 2.0).epsilon(1e-10));
  }

  TEST_CASE("two bump couples the blocks through the sgn term") {
    PotentialSpec V = make_builtin("two_bump", {-2, 2, 1, 1, 1});
    Mat2 U = compute_U(V);
    CHECK(U(0, 0).real() == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(U(1, 0).real() == doctest::Approx(1.0).epsilon(1e-11));
    // F+_11 = iint sgn(x-y) v1(x) v2(y) - m iint |x-y| v1(x) v1(y) = -1 - 1/3
    Mat2 F = compute_F(V, 1.0, +1);
    CHECK(F(0, 0).real() == doctest::Approx(-4.0 / 3.0).epsilon(1e-10));
  }

  TEST_CASE("sgn part of F vanishes on the diagonal for diagonal potentials") {
    for (auto V : {make_builtin("square_well", {1, 0, 1}), make_builtin("gaussian", {-1, 0.5, 2}),
                   make_builtin("square_well", {0.3, -0.7, 2})}) {
      Mat2 S = compute_F_sgn_part(V);
      CHECK(std::abs(S(0, 0)) <= 1e-10);
      CHECK(std::abs(S(1, 1)) <= 1e-10);
    }
    // and does not vanish when an off-diagonal block is present
    Mat2 S = compute_F_sgn_part(make_builtin("two_bump", {-2, 2, 1, 1, 1}));
    CHECK(S(0, 0).real() == doctest::Approx(-1.0).epsilon(1e-10));
  }

  TEST_CASE("threshold sign flips the weight matrix") {
    // diag(0, v22): upsilon_+ = diag(2,0) is blind to it, upsilon_- = diag(0,-2) sees it
    PotentialSpec V = make_builtin("square_well", {0, -1, 1});
    Mat2 Fp = compute_F(V, 1.0, +1);
    Mat2 Fm = compute_F(V, 1.0, -1);
    CHECK(std::abs(Fp(1, 1)) <= 1e-10);
    CHECK(Fm(1, 1).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  }

  TEST_CASE("mass scales with m only in the |x-y| term") {
    PotentialSpec V = make_builtin("square_well", {1, 0, 1});
    Mat2 F1 = compute_F(V, 1.0, +1);
    Mat2 F2 = compute_F(V, 2.0, +1);
    CHECK(F2(0, 0).real() == doctest::Approx(2.0 * F1(0, 0).real()).epsilon(1e-10));
  }

  TEST_CASE("sch cross can address other entries") {
    PotentialSpec V = make_builtin("square_well", {0, -1, 1});
    CHECK(std::abs(compute_sch_cross(V)) <= 1e-12);  // default row/col = (0,0), V11 = 0
    cplx c22 = compute_sch_cross(V, 1e-10, 1, 1);
    CHECK(c22.real() == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  }

  TEST_CASE("non integrable metadata is rejected") {
    PotentialSpec C = make_builtin("coulomb_tail", {});
    CHECK_THROWS_AS(compute_U(C), ConfigError);
    CHECK_THROWS_AS(compute_moment_norms(C), ConfigError);
    // a compact cutoff restores integrability
    PotentialSpec Cc = make_builtin("coulomb_tail", {1.0});
    Mat2 U = compute_U(Cc);
    CHECK(U(0, 0).real() > 1.0);  // int over [-1,1] alone is 2 log 2 > 1
  }
}

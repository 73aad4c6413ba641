#include <doctest.h>

#include <cmath>

#include "gapspectra/birman_schwinger.hpp"
#include "gapspectra/dirac_resolvent.hpp"

using namespace gapspectra;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_SUITE("birman_schwinger") {
  TEST_CASE("square well bound states across the coupling sweep") {
    PotentialSpec V = make_builtin("square_well", {1, 0, 1});
    struct Row {
      double eps, kappa, z;
    };
    // independently frozen root table (24 panels, order 16)
    const Row table[] = {
        {0.2, 0.186508617455, 0.982453324904},
        {0.1, 0.096633474375, 0.995320034778},
        {0.05, 0.049161528734, 0.998790841014},
        {0.025, 0.024790957658, 0.999692656979},
    };
    for (const Row& r : table) {
      KappaRoot root = find_bound_state(V, 1.0, r.eps);
      REQUIRE(root.converged);
      REQUIRE_FALSE(root.no_eigenvalue);
      CHECK(std::abs(root.kappa - cplx(r.kappa, 0)) <= 1e-9);
      CHECK(std::abs(root.z - cplx(r.z, 0)) <= 1e-9);
      CHECK(root.residual <= 1e-10);
      CHECK(std::abs(root.kappa.imag()) <= 1e-8);  // hermitian potential: real root
    }
  }

  TEST_CASE("non hermitian well moves the eigenvalue off the axis") {
    PotentialSpec V = make_builtin("custom_matrix", {1, 1, 1, 0, 0, 0, 0, 0, 0});
    KappaRoot r1 = find_bound_state(V, 1.0, 0.05);
    REQUIRE(r1.converged);
    CHECK(std::abs(r1.kappa - cplx(0.05000807775200574, 0.048321083799277707)) <= 1e-10);
    CHECK(std::abs(r1.z - cplx(0.99991997651704245, -0.0024166379034775477)) <= 1e-10);
    CHECK(std::abs(r1.z.imag()) > 1e-4);
    KappaRoot r2 = find_bound_state(V, 1.0, 0.025);
    REQUIRE(r2.converged);
    CHECK(std::abs(r2.kappa - cplx(0.025001278010282218, 0.024581780828844418)) <= 1e-10);
    CHECK(std::abs(r2.z - cplx(0.99998978882679868, -0.00061458221209517922)) <= 1e-10);
  }

  TEST_CASE("repulsive sign has no weakly coupled eigenvalue") {
    PotentialSpec V = make_builtin("square_well", {-1, 0, 1});
    KappaRoot r = find_bound_state(V, 1.0, 0.1);
    CHECK(r.no_eigenvalue);
  }

  TEST_CASE("minus m threshold mirrors the plus m problem") {
    PotentialSpec V = make_builtin("square_well", {0, -1, 1});
    KappaRoot r = find_bound_state(V, 1.0, 0.1, Threshold::minus_m);
    REQUIRE(r.converged);
    REQUIRE_FALSE(r.no_eigenvalue);
    CHECK(std::abs(r.z - cplx(-0.995320034778, 0)) <= 1e-9);
    // and the plus_m side of this potential is empty (V11 = 0, F+ = 0)
    KappaRoot rp = find_bound_state(V, 1.0, 0.1, Threshold::plus_m);
    CHECK(rp.no_eigenvalue);
  }

  TEST_CASE("requested quadrature refinement is stable") {
    PotentialSpec V = make_builtin("square_well", {1, 0, 1});
    QuadSpec q1{24, 16, 0};
    QuadSpec q2{48, 16, 0};
    BsOperator op1(V, 1.0, q1), op2(V, 1.0, q2);
    cplx kap = kappa_of_z(cplx(0.5, 0), 1.0).kappa;
    // the |x-y| kink on the kernel diagonal limits Nystrom refinement to O(h^2)
    CHECK(std::abs(op1.inner_product(0.2, kap) - op2.inner_product(0.2, kap)) <= 1e-6);
    CHECK(std::abs(op1.g(0.2, kap) - op2.g(0.2, kap)) <= 2e-7);
  }

  TEST_CASE("operator norm and kernel size behave like the moment bound") {
    PotentialSpec V = make_builtin("square_well", {1, 0, 1});
    BsOperator op(V, 1.0, QuadSpec{});
    NystromSystem sys = op.assemble(cplx(0.05, 0));
    // the sandwiched kernel is bounded pointwise by ~(1 + m|x-y|): a generous
    // integral bound is 5x the second moment norm
    std::array<double, 3> norms = compute_moment_norms(V);
    CHECK(sys.hs_norm() <= 5.0 * norms[2]);
    CHECK(sys.hs_norm() > 0.1);
    CHECK(op.op_norm_estimate(cplx(0.05, 0)) <= sys.hs_norm() + 1e-12);
    CHECK((int)sys.nodes.size() == op.n_nodes());
  }

  TEST_CASE("scaling the potential is the same as scaling the coupling") {
    PotentialSpec V = make_builtin("square_well", {1, 0, 1});
    PotentialSpec W = scale(V, cplx(0.5, 0));
    BsOperator opV(V, 1.0, QuadSpec{});
    BsOperator opW(W, 1.0, QuadSpec{});
    for (cplx kap : {cplx(0.1, 0), cplx(0.05, 0.02)}) {
      cplx gv = opV.g(0.1, kap);
      cplx gw = opW.g(0.2, kap);
      CHECK(std::abs(gv - gw) <= 1e-12 * (1.0 + std::abs(gv)));
    }
  }

  TEST_CASE("winding count sees exactly the weak coupling zero") {
    PotentialSpec V = make_builtin("square_well", {1, 0, 1});
    CHECK(count_zeros_halfdisc(V, 1.0, 0.1, 0.6, 1e-3) == 1);
    PotentialSpec R = make_builtin("square_well", {-1, 0, 1});
    CHECK(count_zeros_halfdisc(R, 1.0, 0.1, 0.6, 1e-3) == 0);
    CHECK_THROWS_AS(count_zeros_halfdisc(V, 1.0, 0.1, 0.5, 0.7), ConfigError);
  }

  TEST_CASE("bound state verifies its own winding when asked") {
    PotentialSpec V = make_builtin("square_well", {1, 0, 1});
    KappaRoot r = find_bound_state(V, 1.0, 0.1, Threshold::plus_m, QuadSpec{}, nullptr, true);
    REQUIRE(r.converged);
    CHECK(r.winding == 1);
  }

  TEST_CASE("gaussian resonance sits on the second sheet") {
    PotentialSpec V = make_builtin("gaussian", {-1, 0, 1});
    const double u = -std::sqrt(kPi);                // int -e^{-x^2}
    const double f = -std::sqrt(2.0 * kPi);          // F entry for this well
    KappaRoot r1 = find_resonance(V, 1.0, 0.1);
    REQUIRE(r1.converged);
    CHECK(r1.kappa.real() < 0);
    CHECK(std::abs(r1.kappa.imag()) <= 1e-9);
    CHECK(std::abs(r1.kappa.real() - (-0.209832)) <= 1e-5);
    // the root tracks the two-term expansion with an O(eps^3) defect
    CHECK(std::abs(r1.kappa - cplx(0.1 * u + 0.01 * f, 0)) <= 10.0 * 1e-3);
    KappaRoot r2 = find_resonance(V, 1.0, 0.05);
    REQUIRE(r2.converged);
    CHECK(std::abs(r2.kappa.real() - (-0.095672)) <= 1e-5);
    CHECK(std::abs(r2.kappa - cplx(0.05 * u + 0.0025 * f, 0)) <= 10.0 * 1.25e-4);
    // halving eps roughly halves kappa
    const double ratio = r2.kappa.real() / r1.kappa.real();
    CHECK(ratio > 0.44);
    CHECK(ratio < 0.50);
    // panel refinement stays within the quadrature error budget
    KappaRoot r1f = find_resonance(V, 1.0, 0.1, QuadSpec{48, 16, 0});
    CHECK(std::abs(r1f.kappa - r1.kappa) <= 1e-5);
    // attractive sign has a bound state, not a resonance seed
    PotentialSpec A = make_builtin("gaussian", {1, 0, 1});
    CHECK_THROWS_AS(find_resonance(A, 1.0, 0.1), ConfigError);
  }

  TEST_CASE("resonance requires decay fast enough for the continuation") {
    // polynomial tail: no analytic continuation certificate
    PotentialSpec C = make_builtin("coulomb_tail", {});
    CHECK_THROWS_AS(find_resonance(C, 1.0, 0.1), ConfigError);
  }
}

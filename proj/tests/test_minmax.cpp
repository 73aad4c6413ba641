#include <doctest.h>

#include <cmath>

#include "gapspectra/minmax.hpp"

using namespace gapspectra;

TEST_SUITE("minmax") {
  TEST_CASE("square well levels at the frozen values") {
    PotentialSpec V = make_builtin("square_well", {1, 0, 1});
    GridSpec g{30.0, 600};
    MinmaxResult r = solve_minmax(V, 1.0, 0.2, g);
    REQUIRE_FALSE(r.coupling_flagged);
    REQUIRE_FALSE(r.at_threshold);
    CHECK(std::abs(r.gamma0 - (-1.0013698435819565)) <= 1e-10);
    CHECK(std::abs(r.gamma1 - 0.98247382049475718) <= 1e-10);
    CHECK_FALSE(r.mu_trace.empty());
    CHECK(std::abs(r.mu_trace.back().mu) <= 1e-10);  // the root sample closes the trace
  }

  TEST_CASE("schur eigenvalue branch crosses zero exactly at gamma1") {
    PotentialSpec V = make_builtin("square_well", {1, 0, 1});
    SubspaceForms f = assemble_forms(V, 1.0, 0.2, {30.0, 600});
    CHECK(std::abs(mu_of_lambda(f, 0.98) - 0.00024927974736845882) <= 1e-12);
    // values corroborated against a dense Schur-complement eigensolve
    CHECK(std::abs(mu_of_lambda(f, 0.985) - (-0.00025455990882)) <= 1e-9);
    CHECK(std::abs(mu_of_lambda(f, 0.99) - (-0.00075841582800)) <= 1e-9);
    CHECK(schur_negative_count(f, 0.95) == 0);
    CHECK(schur_negative_count(f, 0.98) == 0);
    CHECK(schur_negative_count(f, 0.999) == 1);
  }

  TEST_CASE("mu decreases along the sampled trace") {
    PotentialSpec V = make_builtin("square_well", {1, 0, 1});
    MinmaxResult r = solve_minmax(V, 1.0, 0.2, {30.0, 600});
    REQUIRE(r.mu_trace.size() >= 5);
    // compare samples that are genuinely separated; refinement steps cluster at the root
    for (std::size_t i = 0; i + 1 < r.mu_trace.size(); ++i) {
      if (r.mu_trace[i + 1].lambda <= r.mu_trace[i].lambda + 1e-6) continue;
      CHECK(r.mu_trace[i].mu >= r.mu_trace[i + 1].mu - 1e-10);
    }
  }

  TEST_CASE("long-range tail levels at the frozen values") {
    PotentialSpec V = make_builtin("coulomb_tail", {});
    MinmaxResult r = solve_minmax(V, 1.0, 0.05, {500.0, 10000});
    CHECK(std::abs(r.gamma0 - (-1.0000049351947098)) <= 1e-10);
    CHECK(std::abs(r.gamma1 - 0.98938559339302234) <= 1e-10);
  }

  TEST_CASE("free operator pins both levels to the edges") {
    PotentialSpec V = make_builtin("square_well", {0, 0, 1});
    GridSpec g{20.0, 400};
    // gamma0 sits below -m by the lowest box mode, alpha*(pi/2L)^2 with alpha = 1/2m
    const double mode = 0.5 * std::pow(M_PI / 40.0, 2.0);
    double g0 = gamma0(V, 1.0, 0.1, g);
    CHECK(g0 < -1.0);
    CHECK(g0 > -1.0 - 2.0 * mode);
    MinmaxResult r = solve_minmax(V, 1.0, 0.1, g);
    CHECK(r.at_threshold);
    CHECK(r.gamma1 == 1.0);
  }

  TEST_CASE("levels obey the sup-norm perturbation bounds") {
    for (double eps : {0.2, 0.1}) {
      PotentialSpec V = make_builtin("square_well", {1, 0, 1});
      MinmaxResult r = solve_minmax(V, 1.0, eps, {30.0, 600});
      CHECK(r.gamma0 <= -1.0 + eps * V.sup_norm + 1e-8);
      CHECK(r.gamma0 >= -1.0 - eps * V.sup_norm - 1e-8);
      CHECK(r.gamma1 >= 1.0 - eps * V.sup_norm - 1e-8);
      CHECK(r.gamma1 <= 1.0);
    }
  }

  TEST_CASE("non hermitian potentials are rejected") {
    PotentialSpec V = make_builtin("custom_matrix", {1, 1, 1, 0, 0, 0, 0, 0, 0});
    CHECK_THROWS_AS(gamma0(V, 1.0, 0.1, {30.0, 600}), ConfigError);
    CHECK_THROWS_AS(solve_minmax(V, 1.0, 0.1, {30.0, 600}), ConfigError);
  }

  TEST_CASE("strong coupling is flagged rather than solved") {
    PotentialSpec V = make_builtin("square_well", {1, 0, 1});
    MinmaxResult r = solve_minmax(V, 1.0, 1.2, {30.0, 600});
    CHECK(r.coupling_flagged);
    CHECK(std::isnan(r.gamma0));
    CHECK(std::isnan(r.gamma1));
    CHECK_THROWS_AS(gamma0(V, 1.0, 1.2, {30.0, 600}), ConfigError);
  }

  TEST_CASE("the gram block is positive definite") {
    PotentialSpec V = make_builtin("square_well", {1, 0, 1});
    SubspaceForms f = assemble_forms(V, 1.0, 0.2, {30.0, 600});
    REQUIRE(f.n == 599);
    // Sylvester check through the tridiagonal leading minors
    double prev = 1.0, det = f.G.diag[0].real();
    for (int j = 1; j < f.n; ++j) {
      double next = f.G.diag[j].real() * det - std::norm(f.G.lower[j - 1]) * prev;
      // renormalize to dodge overflow; only the sign pattern matters
      prev = det;
      det = next;
      double s = std::max(std::abs(prev), std::abs(det));
      if (s > 1e100) {
        prev /= s;
        det /= s;
      }
      CHECK(det > 0);
    }
  }
}

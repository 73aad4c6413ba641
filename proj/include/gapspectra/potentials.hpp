#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gapspectra/common.hpp"

namespace gapspectra {

// declared (not inferred) decay envelope for |V(x)| (matrix 2-norm pointwise)
struct Decay {
  enum class Kind { compact, polynomial, exponential };
  Kind kind = Kind::compact;
  double radius = 0;        // compact: V = 0 for |x| > radius
  double C = 0, rate = 0;   // exponential: |V(x)| <= C e^{-rate|x|}
  double p = 0;             // polynomial: |V(x)| <= C (1+|x|)^{-p}
};

struct PotentialSpec {
  std::function<Mat2(double)> evaluate;
  bool hermitian = true;
  Decay decay;
  // largest k certified so that int (1+|x|)^k |V| dx < inf; -1 if V is not L1
  int finite_moments = 0;
  double sup_norm = 0;
  // abscissas where V (or its derivative) jumps; quadrature panels break here
  std::vector<double> kinks;
  std::string family;
};

// families: square_well [v11, v22, width]
//           gaussian [a11, a22, alpha]           (diag * exp(-alpha x^2))
//           coulomb_tail [] or [R]               (diag(1/(1+|x|),0), optional cutoff)
//           two_bump [c1, c2, width, amp1, amp2] (V11 bump at c1, V21 bump at c2)
//           custom_matrix [width, re11, im11, re12, im12, re21, im21, re22, im22]
PotentialSpec make_builtin(const std::string& family, const std::vector<double>& params);

// CSV columns: x, re11, im11, re12, im12, re21, im21, re22, im22 (x strictly increasing),
// linear interpolation between rows, zero outside the sampled range
PotentialSpec make_tabulated(const std::string& csv_path);

// pointwise polar split V = B* A with |A(x)| = |B(x)| = |V(x)|^{1/2}
struct FactorizedPotential {
  std::function<Mat2(double)> A, Bstar;
};
FactorizedPotential factorize(const PotentialSpec& V);

// entrywise sigma1 V sigma1: diagonals swap, off-diagonals swap (no conjugation)
PotentialSpec sigma1_conjugate(const PotentialSpec& V);

// V -> c*V; hermitian flag survives only for real c
PotentialSpec scale(const PotentialSpec& V, cplx c);

enum class TheoremId { thm_long_range, prop_comparison, thm_second_order };

struct HypothesisCheck {
  std::string name;
  bool pass = false;
  double witness_x = 0;  // meaningful when pass == false
  std::string detail;
};
struct HypothesisReport {
  bool pass = false;
  std::vector<HypothesisCheck> checks;
};
// samples |V| on a geometric grid up to 10x the decay scale and combines with
// the declared metadata; reports one line per hypothesis
HypothesisReport check_hypotheses(const PotentialSpec& V, TheoremId theorem);

// upper bound for int_{|x|>R} (1+|x|)^k |V(x)| dx from the declared decay;
// +inf when the metadata cannot certify it
double decay_tail_bound(const Decay& d, double R, int k);

// smallest R (within [1, 1e6], doubling) with decay_tail_bound(d,R,k) <= bound;
// throws SolverError when unreachable
double suggest_radius(const Decay& d, int k, double bound);

}  // namespace gapspectra

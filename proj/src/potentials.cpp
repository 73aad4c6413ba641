#include "gapspectra/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace gapspectra {

namespace {

double mat_norm2(const Mat2& M) {
  Eigen::JacobiSVD<Mat2> svd(M);
  return svd.singularValues()(0);
}

PotentialSpec make_square_well(const std::vector<double>& p) {
  if (p.size() != 3) throw ConfigError("square_well expects params [v11, v22, width]");
  double v11 = p[0], v22 = p[1], w = p[2];
  if (!(w > 0)) throw ConfigError("square_well: width must be > 0");
  PotentialSpec s;
  s.family = "square_well";
  s.evaluate = [v11, v22, w](double x) {
    Mat2 V = Mat2::Zero();
    if (std::abs(x) <= 0.5 * w) {
      V(0, 0) = v11;
      V(1, 1) = v22;
    }
    return V;
  };
  s.hermitian = true;
  s.decay = {Decay::Kind::compact, 0.5 * w, 0, 0, 0};
  s.finite_moments = 1000;
  s.sup_norm = std::max(std::abs(v11), std::abs(v22));
  s.kinks = {-0.5 * w, 0.5 * w};
  return s;
}

PotentialSpec make_gaussian(const std::vector<double>& p) {
  if (p.size() != 3) throw ConfigError("gaussian expects params [a11, a22, alpha]");
  double a11 = p[0], a22 = p[1], al = p[2];
  if (!(al > 0)) throw ConfigError("gaussian: alpha must be > 0");
  PotentialSpec s;
  s.family = "gaussian";
  s.evaluate = [a11, a22, al](double x) {
    Mat2 V = Mat2::Zero();
    double e = std::exp(-al * x * x);
    V(0, 0) = a11 * e;
    V(1, 1) = a22 * e;
    return V;
  };
  s.hermitian = true;
  double amp = std::max(std::abs(a11), std::abs(a22));
  // exp(-al x^2) <= e^9 exp(-6 sqrt(al) |x|) since (sqrt(al)|x| - 3)^2 >= 0
  s.decay = {Decay::Kind::exponential, 0, amp * std::exp(9.0), 6.0 * std::sqrt(al), 0};
  s.finite_moments = 1000;
  s.sup_norm = amp;
  return s;
}

PotentialSpec make_coulomb_tail(const std::vector<double>& p) {
  if (p.size() > 1) throw ConfigError("coulomb_tail expects params [] or [cutoff_radius]");
  PotentialSpec s;
  s.family = "coulomb_tail";
  if (p.empty()) {
    s.evaluate = [](double x) {
      Mat2 V = Mat2::Zero();
      V(0, 0) = 1.0 / (1.0 + std::abs(x));
      return V;
    };
    s.decay = {Decay::Kind::polynomial, 0, 1.0, 0, 1.0};
    s.finite_moments = -1;  // not L1
    s.kinks = {0.0};
  } else {
    double R = p[0];
    if (!(R > 0)) throw ConfigError("coulomb_tail: cutoff radius must be > 0");
    s.evaluate = [R](double x) {
      Mat2 V = Mat2::Zero();
      double r = std::abs(x);
      double t = r <= R ? 1.0 : (r >= 2 * R ? 0.0 : [&] {
        double c = std::cos(0.5 * M_PI * (r - R) / R);
        return c * c;
      }());
      V(0, 0) = t / (1.0 + r);
      return V;
    };
    s.decay = {Decay::Kind::compact, 2 * R, 0, 0, 0};
    s.finite_moments = 1000;
    s.kinks = {-2 * R, -R, 0.0, R, 2 * R};
  }
  s.hermitian = true;
  s.sup_norm = 1.0;
  return s;
}

PotentialSpec make_two_bump(const std::vector<double>& p) {
  if (p.size() != 5) throw ConfigError("two_bump expects params [c1, c2, width, amp1, amp2]");
  double c1 = p[0], c2 = p[1], w = p[2], a1 = p[3], a2 = p[4];
  if (!(w > 0)) throw ConfigError("two_bump: width must be > 0");
  PotentialSpec s;
  s.family = "two_bump";
  s.evaluate = [c1, c2, w, a1, a2](double x) {
    Mat2 V = Mat2::Zero();
    if (std::abs(x - c1) <= 0.5 * w) V(0, 0) = a1;
    if (std::abs(x - c2) <= 0.5 * w) V(1, 0) = a2;
    return V;
  };
  s.hermitian = (a2 == 0.0);
  double R = std::max(std::abs(c1), std::abs(c2)) + 0.5 * w;
  s.decay = {Decay::Kind::compact, R, 0, 0, 0};
  s.finite_moments = 1000;
  bool overlap = std::abs(c1 - c2) < w;
  s.sup_norm = overlap ? std::hypot(a1, a2) : std::max(std::abs(a1), std::abs(a2));
  s.kinks = {c1 - 0.5 * w, c1 + 0.5 * w, c2 - 0.5 * w, c2 + 0.5 * w};
  std::sort(s.kinks.begin(), s.kinks.end());
  return s;
}

PotentialSpec make_custom_matrix(const std::vector<double>& p) {
  if (p.size() != 9)
    throw ConfigError(
        "custom_matrix expects params [width, re11, im11, re12, im12, re21, im21, re22, im22]");
  double w = p[0];
  if (!(w > 0)) throw ConfigError("custom_matrix: width must be > 0");
  Mat2 M;
  M << cplx(p[1], p[2]), cplx(p[3], p[4]), cplx(p[5], p[6]), cplx(p[7], p[8]);
  PotentialSpec s;
  s.family = "custom_matrix";
  s.evaluate = [M, w](double x) {
    return std::abs(x) <= 0.5 * w ? M : Mat2(Mat2::Zero());
  };
  s.hermitian = (M - M.adjoint()).cwiseAbs().maxCoeff() < 1e-14;
  s.decay = {Decay::Kind::compact, 0.5 * w, 0, 0, 0};
  s.finite_moments = 1000;
  s.sup_norm = mat_norm2(M);
  s.kinks = {-0.5 * w, 0.5 * w};
  return s;
}

}  // namespace

PotentialSpec make_builtin(const std::string& family, const std::vector<double>& params) {
  if (family == "square_well") return make_square_well(params);
  if (family == "gaussian") return make_gaussian(params);
  if (family == "coulomb_tail") return make_coulomb_tail(params);
  if (family == "two_bump") return make_two_bump(params);
  if (family == "custom_matrix") return make_custom_matrix(params);
  throw ConfigError("unknown potential family: " + family);
}

PotentialSpec make_tabulated(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw ConfigError("cannot open tabulated potential file: " + csv_path);
  std::vector<double> xs;
  std::vector<Mat2> vals;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double c[9];
    for (int i = 0; i < 9; ++i)
      if (!(ss >> c[i]))
        throw ConfigError("tabulated potential: line " + std::to_string(lineno) +
                          " needs 9 columns (x, re/im of 4 entries)");
    if (!xs.empty() && c[0] <= xs.back())
      throw ConfigError("tabulated potential: x must be strictly increasing at line " +
                        std::to_string(lineno));
    xs.push_back(c[0]);
    Mat2 M;
    M << cplx(c[1], c[2]), cplx(c[3], c[4]), cplx(c[5], c[6]), cplx(c[7], c[8]);
    vals.push_back(M);
  }
  if (xs.size() < 2) throw ConfigError("tabulated potential: need at least 2 rows");

  PotentialSpec s;
  s.family = "tabulated";
  s.evaluate = [xs, vals](double x) -> Mat2 {
    if (x <= xs.front() || x >= xs.back()) {
      if (x == xs.front()) return vals.front();
      if (x == xs.back()) return vals.back();
      return Mat2::Zero();
    }
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t j = (std::size_t)(it - xs.begin());
    double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return (1.0 - t) * vals[j - 1] + t * vals[j];
  };
  s.hermitian = true;
  double sup = 0;
  for (const Mat2& M : vals) {
    if ((M - M.adjoint()).cwiseAbs().maxCoeff() > 1e-14) s.hermitian = false;
    sup = std::max(sup, mat_norm2(M));
  }
  s.sup_norm = sup;
  s.decay = {Decay::Kind::compact, std::max(std::abs(xs.front()), std::abs(xs.back())), 0, 0, 0};
  s.finite_moments = 1000;
  if (xs.size() <= 64) {
    s.kinks = xs;
  } else {
    s.kinks = {xs.front(), xs.back()};
  }
  return s;
}

FactorizedPotential factorize(const PotentialSpec& V) {
  auto ev = V.evaluate;
  auto split = [ev](double x) {
    Eigen::JacobiSVD<Mat2> svd(ev(x), Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat2 sq = svd.singularValues().cwiseSqrt().asDiagonal();
    Mat2 A = sq * svd.matrixV().adjoint();
    Mat2 Bstar = svd.matrixU() * sq;
    return std::make_pair(A, Bstar);
  };
  FactorizedPotential f;
  f.A = [split](double x) { return split(x).first; };
  f.Bstar = [split](double x) { return split(x).second; };
  return f;
}

PotentialSpec sigma1_conjugate(const PotentialSpec& V) {
  PotentialSpec s = V;
  auto ev = V.evaluate;
  s.evaluate = [ev](double x) -> Mat2 {
    Mat2 M = ev(x);
    Mat2 R;
    R << M(1, 1), M(1, 0), M(0, 1), M(0, 0);
    return R;
  };
  s.family = V.family + ":sigma1";
  return s;
}

PotentialSpec scale(const PotentialSpec& V, cplx c) {
  PotentialSpec s = V;
  auto ev = V.evaluate;
  s.evaluate = [ev, c](double x) -> Mat2 { return c * ev(x); };
  s.hermitian = V.hermitian && (c.imag() == 0.0);
  s.sup_norm = std::abs(c) * V.sup_norm;
  s.decay.C *= std::abs(c);
  s.family = V.family + ":scaled";
  return s;
}

double decay_tail_bound(const Decay& d, double R, int k) {
  const double inf = std::numeric_limits<double>::infinity();
  switch (d.kind) {
    case Decay::Kind::compact:
      return R >= d.radius ? 0.0 : inf;
    case Decay::Kind::exponential: {
      // (1+t)^k <= (1+R)^k e^{k(t-R)/(1+R)} for t >= R (concavity of log(1+t))
      double a_eff = d.rate - (double)k / (1.0 + R);
      if (a_eff <= 0) return inf;
      return 2.0 * d.C * std::pow(1.0 + R, k) * std::exp(-d.rate * R) / a_eff;
    }
    case Decay::Kind::polynomial: {
      if (d.p <= k + 1) return inf;
      return 2.0 * d.C * std::pow(1.0 + R, k + 1 - d.p) / (d.p - k - 1);
    }
  }
  return inf;
}

double suggest_radius(const Decay& d, int k, double bound) {
  if (d.kind == Decay::Kind::compact) return d.radius;
  double R = 1.0;
  while (R <= 1e6) {
    if (decay_tail_bound(d, R, k) <= bound) {
      // refine down by bisection to avoid gross overshoot
      double lo = R * 0.5, hi = R;
      for (int it = 0; it < 40; ++it) {
        double mid = 0.5 * (lo + hi);
        (decay_tail_bound(d, mid, k) <= bound ? hi : lo) = mid;
      }
      return hi;
    }
    R *= 2.0;
  }
  throw SolverError("declared decay cannot certify the requested integral tail bound");
}

HypothesisReport check_hypotheses(const PotentialSpec& V, TheoremId theorem) {
  HypothesisReport rep;
  auto add = [&rep](const std::string& name, bool pass, double wx, const std::string& det) {
    rep.checks.push_back({name, pass, wx, det});
  };

  double scale = 10.0;
  if (V.decay.kind == Decay::Kind::compact) scale = std::max(V.decay.radius, 1e-6);
  if (V.decay.kind == Decay::Kind::exponential) scale = std::max(1.0, 3.0 / V.decay.rate);

  // geometric sample grid out to 10*scale, both signs
  std::vector<double> xs;
  for (int i = 0; i <= 60; ++i) {
    double r = scale * std::pow(10.0, -2.0 + 3.0 * i / 60.0);  // scale/100 .. 10*scale
    xs.push_back(r);
    xs.push_back(-r);
  }
  xs.push_back(0.0);

  auto envelope = [&](double x) {
    switch (V.decay.kind) {
      case Decay::Kind::compact:
        return std::abs(x) <= V.decay.radius + 1e-12 ? V.sup_norm : 0.0;
      case Decay::Kind::exponential:
        return V.decay.C * std::exp(-V.decay.rate * std::abs(x));
      case Decay::Kind::polynomial:
        return V.decay.C * std::pow(1.0 + std::abs(x), -V.decay.p);
    }
    return 0.0;
  };

  {  // declared decay consistent with samples (all theorems use this)
    bool ok = true;
    double wx = 0;
    std::string det;
    for (double x : xs) {
      double n = mat_norm2(V.evaluate(x));
      double e = envelope(x);
      if (n > 2.0 * e + 1e-12) {
        ok = false;
        wx = x;
        det = "sampled |V| exceeds declared envelope";
        break;
      }
    }
    add("declared_decay_consistent", ok, wx, det);
  }

  auto far_slope = [&](const std::function<double(double)>& q) {
    // LS slope of log q vs log(1+|x|) over the outer samples; NaN when q vanished
    std::vector<double> lx, ly;
    for (double x : xs) {
      if (std::abs(x) < scale) continue;
      double v = q(x);
      if (v > 1e-250) {
        lx.push_back(std::log(1.0 + std::abs(x)));
        ly.push_back(std::log(v));
      }
    }
    if (lx.size() < 3) return std::numeric_limits<double>::quiet_NaN();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    double n = (double)lx.size();
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };

  switch (theorem) {
    case TheoremId::thm_second_order: {
      bool fin = std::isfinite(decay_tail_bound(V.decay, std::max(1.0, scale), 2));
      add("second_moment_integrable", fin, 10 * scale,
          fin ? "" : "metadata cannot certify int (1+|x|^2)|V| < inf");
      break;
    }
    case TheoremId::prop_comparison: {
      add("hermitian", V.hermitian, 0, V.hermitian ? "" : "potential is not Hermitian");
      bool dec = V.decay.kind != Decay::Kind::polynomial || V.decay.p >= 1.0;
      add("coulomb_rate_decay", dec, 10 * scale,
          dec ? "" : "decay slower than (1+|x|)^{-1}");
      bool bdd = std::isfinite(V.sup_norm);
      add("bounded", bdd, 0, "");
      break;
    }
    case TheoremId::thm_long_range: {
      add("hermitian", V.hermitian, 0, V.hermitian ? "" : "potential is not Hermitian");
      double slope = far_slope([&](double x) {
        cplx v11 = V.evaluate(x)(0, 0);
        return std::abs(v11 - 1.0 / (1.0 + std::abs(x))) * std::pow(1.0 + std::abs(x), 1.5);
      });
      bool tail_ok = std::isnan(slope) || slope < 0.25;
      add("upper_left_coulomb_tail", tail_ok, 10 * scale,
          tail_ok ? "" : "V11 - 1/(1+|x|) decays too slowly for a (1+|x|)^{-3/2} bound");
      double slope12 = far_slope([&](double x) {
        double re = V.evaluate(x)(0, 1).real();
        return re * re * (1.0 + std::abs(x));
      });
      bool off_ok = std::isnan(slope12) || slope12 < 0.25;
      add("off_diagonal_square_decay", off_ok, 10 * scale,
          off_ok ? "" : "(Re V12)^2 decays too slowly for a (1+|x|)^{-1} bound");
      break;
    }
  }

  rep.pass = true;
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

}  // namespace gapspectra

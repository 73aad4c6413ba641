#include "gapspectra/moments.hpp"

#include <cmath>

#include "gapspectra/quadrature.hpp"

namespace gapspectra {

namespace {

double mat_norm2(const Mat2& M) {
  Eigen::JacobiSVD<Mat2> svd(M);
  return svd.singularValues()(0);
}

void require_moment(const PotentialSpec& V, int k, const char* what) {
  if (V.finite_moments < k)
    throw ConfigError(std::string(what) +
                      ": potential metadata does not certify int (1+|x|)^" +
                      std::to_string(k) + " |V| < inf (family " + V.family + ")");
}

int base_panels(double R) { return std::max(24, (int)std::lround(4.0 * R)); }

// integrate a Mat2-valued function of one variable over [-R,R]
template <typename F>
Mat2 integrate_mat(F&& f, double R, const std::vector<double>& kinks, int panels, int order) {
  QuadRule q = composite_gl(-R, R, panels, order, kinks);
  Mat2 acc = Mat2::Zero();
  for (std::size_t i = 0; i < q.size(); ++i) acc += q.w[i] * f(q.x[i]);
  return acc;
}

template <typename F>
Mat2 integrate_mat_doubling(F&& f, double R, const std::vector<double>& kinks, double tol,
                            const char* what) {
  int p = base_panels(R);
  Mat2 a = integrate_mat(f, R, kinks, p, 16);
  Mat2 b = integrate_mat(f, R, kinks, 2 * p, 16);
  if ((a - b).cwiseAbs().maxCoeff() > tol)
    throw SolverError(std::string(what) + ": quadrature doubling defect exceeds tolerance");
  return b;
}

// kernel selector: sign = +1/-1 -> full F kernel; sign = 0 -> sgn part only
Mat2 f_kernel(double d, double m, int sign) {
  Mat2 K = sgn(d) * i_sigma2();
  if (sign != 0) {
    Mat2 Y = m * (sigma3() + (sign > 0 ? 1.0 : -1.0) * Mat2::Identity());
    K -= 0.5 * std::abs(d) * Y;
  }
  return K;
}

Mat2 f_integral(const PotentialSpec& V, double m, int sign, double R, int panels, int order) {
  QuadRule outer = composite_gl(-R, R, panels, order, V.kinks);
  std::vector<Mat2> Vx(outer.size());
  for (std::size_t i = 0; i < outer.size(); ++i) Vx[i] = V.evaluate(outer.x[i]);
  Mat2 F = Mat2::Zero();
  for (std::size_t i = 0; i < outer.size(); ++i) {
    // inner rule breaks at the outer node so the |x-y| and sgn kinks sit on
    // panel boundaries and Gauss-Legendre keeps its full order
    std::vector<double> br = V.kinks;
    br.push_back(outer.x[i]);
    QuadRule inner = composite_gl(-R, R, panels, order, br);
    Mat2 acc = Mat2::Zero();
    for (std::size_t j = 0; j < inner.size(); ++j)
      acc += inner.w[j] * f_kernel(outer.x[i] - inner.x[j], m, sign) * V.evaluate(inner.x[j]);
    F += outer.w[i] * Vx[i] * acc;
  }
  return F;
}

}  // namespace

Mat2 compute_U(const PotentialSpec& V, double tol) {
  require_moment(V, 0, "compute_U");
  double R = suggest_radius(V.decay, 0, tol / 10.0);
  return integrate_mat_doubling([&](double x) { return V.evaluate(x); }, R, V.kinks, tol,
                                "compute_U");
}

Mat2 compute_F(const PotentialSpec& V, double m, int sign, double tol) {
  if (sign != 1 && sign != -1) throw ConfigError("compute_F: sign must be +1 or -1");
  require_moment(V, 1, "compute_F");
  // |x-y| <= (1+|x|)(1+|y|), so the double-integral tail is bounded by the
  // k=1 single-integral tail times the (1+|y|)-moment of the other factor
  double m1;
  {
    double R1 = suggest_radius(V.decay, 1, tol / 10.0);
    auto f = [&](double x) {
      return Mat2(mat_norm2(V.evaluate(x)) * (1.0 + std::abs(x)) * Mat2::Identity());
    };
    m1 = integrate_mat_doubling(f, R1, V.kinks, tol, "compute_F")(0, 0).real();
  }
  double R = suggest_radius(V.decay, 1, tol / (10.0 * std::max(1.0, (1.0 + 2.0 * m) * m1)));
  int p = base_panels(R);
  Mat2 a = f_integral(V, m, sign, R, p, 16);
  Mat2 b = f_integral(V, m, sign, R, 2 * p, 16);
  if ((a - b).cwiseAbs().maxCoeff() > tol)
    throw SolverError("compute_F: quadrature doubling defect exceeds tolerance");
  return b;
}

Mat2 compute_F_sgn_part(const PotentialSpec& V, double tol) {
  require_moment(V, 0, "compute_F_sgn_part");
  double R = suggest_radius(V.decay, 0, tol / 10.0);
  int p = base_panels(R);
  Mat2 a = f_integral(V, 0.0, 0, R, p, 16);
  Mat2 b = f_integral(V, 0.0, 0, R, 2 * p, 16);
  if ((a - b).cwiseAbs().maxCoeff() > tol)
    throw SolverError("compute_F_sgn_part: quadrature doubling defect exceeds tolerance");
  return b;
}

cplx compute_sch_cross(const PotentialSpec& V, double tol, int row, int col) {
  require_moment(V, 1, "compute_sch_cross");
  double R = suggest_radius(V.decay, 1, tol / 10.0);
  auto entry = [&](double x) { return V.evaluate(x)(row, col); };
  auto run = [&](int panels) {
    QuadRule outer = composite_gl(-R, R, panels, 16, V.kinks);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < outer.size(); ++i) {
      std::vector<double> br = V.kinks;
      br.push_back(outer.x[i]);
      QuadRule inner = composite_gl(-R, R, panels, 16, br);
      cplx in = 0.0;
      for (std::size_t j = 0; j < inner.size(); ++j)
        in += inner.w[j] * std::abs(outer.x[i] - inner.x[j]) * entry(inner.x[j]);
      acc += outer.w[i] * entry(outer.x[i]) * in;
    }
    return acc;
  };
  int p = base_panels(R);
  cplx a = run(p), b = run(2 * p);
  if (std::abs(a - b) > tol)
    throw SolverError("compute_sch_cross: quadrature doubling defect exceeds tolerance");
  return b;
}

std::array<double, 3> compute_moment_norms(const PotentialSpec& V, double tol) {
  std::array<double, 3> out{};
  for (int k = 0; k <= 2; ++k) {
    require_moment(V, k, "compute_moment_norms");
    double R = suggest_radius(V.decay, k, tol / 10.0);
    auto f = [&](double x) {
      return Mat2(mat_norm2(V.evaluate(x)) * std::pow(1.0 + std::abs(x), k) * Mat2::Identity());
    };
    // the (1+|x|)^k weight kinks at the origin regardless of the potential
    std::vector<double> breaks = V.kinks;
    if (k >= 1) breaks.push_back(0.0);
    out[k] = integrate_mat_doubling(f, R, breaks, tol, "compute_moment_norms")(0, 0).real();
  }
  return out;
}

MomentSet compute_all(const PotentialSpec& V, double m, double tol) {
  MomentSet ms;
  ms.U = compute_U(V, tol);
  ms.F_plus = compute_F(V, m, +1, tol);
  ms.F_minus = compute_F(V, m, -1, tol);
  ms.moment_norms = compute_moment_norms(V, tol);
  ms.sch_cross = compute_sch_cross(V, tol);
  return ms;
}

}  // namespace gapspectra

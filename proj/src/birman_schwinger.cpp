#include "gapspectra/birman_schwinger.hpp"

#include <cmath>
#include <limits>

#include "gapspectra/dirac_resolvent.hpp"
#include "gapspectra/quadrature.hpp"

namespace gapspectra {

BsOperator::BsOperator(const PotentialSpec& V, double m, QuadSpec q, double tol) : m_(m) {
  if (q.panels < 1 || q.order < 1) throw ConfigError("BsOperator: bad quadrature spec");
  R_ = q.radius > 0 ? q.radius : suggest_radius(V.decay, 2, tol / 10.0);
  if (q.radius > 0) {
    double tail = decay_tail_bound(V.decay, q.radius, 2);
    if (!(tail <= tol / 10.0))
      throw ConfigError("BsOperator: truncation radius " + std::to_string(q.radius) +
                        " leaves integral tail " + std::to_string(tail) +
                        " above tolerance " + std::to_string(tol / 10.0));
  }
  QuadRule rule = composite_gl(-R_, R_, q.panels, q.order, V.kinks);
  x_ = rule.x;
  w_ = rule.w;
  sqw_.resize(w_.size());
  for (std::size_t i = 0; i < w_.size(); ++i) sqw_[i] = std::sqrt(w_[i]);
  FactorizedPotential f = factorize(V);
  A_.resize(x_.size());
  Bstar_.resize(x_.size());
  for (std::size_t i = 0; i < x_.size(); ++i) {
    A_[i] = f.A(x_[i]);
    Bstar_[i] = f.Bstar(x_[i]);
  }
}

NystromSystem BsOperator::assemble(cplx kappa) const {
  const int N = (int)x_.size();
  NystromSystem sys;
  sys.M.resize(2 * N, 2 * N);
  sys.a_vec.resize(2 * N);
  sys.b_vec.resize(2 * N);
  sys.nodes = x_;
  sys.weights = w_;
  sys.m = m_;
  sys.kappa = kappa;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      Mat2 blk = sqw_[i] * A_[i] * regular_kernel_S(x_[i], x_[j], kappa, m_) * Bstar_[j] * sqw_[j];
      sys.M.block<2, 2>(2 * i, 2 * j) = blk;
    }
    sys.a_vec.segment<2>(2 * i) = sqw_[i] * A_[i].col(0);
    // b = B e1 with B = (B*)^H, so b_i is the conjugated first row of B*
    sys.b_vec.segment<2>(2 * i) = sqw_[i] * Bstar_[i].row(0).adjoint();
  }
  return sys;
}

cplx BsOperator::inner_product(double eps, cplx kappa) const {
  NystromSystem sys = assemble(kappa);
  Eigen::MatrixXcd lhs =
      Eigen::MatrixXcd::Identity(sys.M.rows(), sys.M.cols()) - eps * sys.M;
  Eigen::VectorXcd u = lhs.partialPivLu().solve(sys.a_vec);
  return sys.b_vec.dot(u);  // Eigen dot conjugates the left argument
}

cplx BsOperator::g(double eps, cplx kappa) const {
  return eps * m_ * inner_product(eps, kappa) - kappa;
}

double BsOperator::op_norm_estimate(cplx kappa) const {
  NystromSystem sys = assemble(kappa);
  const Eigen::MatrixXcd& M = sys.M;
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(M.cols());
  v.normalize();
  double est = 0, prev = 0;
  for (int it = 0; it < 5; ++it) {
    Eigen::VectorXcd Mv = M * v;
    prev = est;
    est = Mv.norm();
    if (est == 0) return 0;
    v = M.adjoint() * Mv;
    v.normalize();
  }
  if (prev > 0 && std::abs(est - prev) > 0.05 * est) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(M);
    return svd.singularValues()(0);
  }
  return est;
}

namespace {

struct NewtonOut {
  cplx kappa;
  cplx g_val;
  int iters;
  bool converged;
};

NewtonOut newton_on_g(const BsOperator& op, double eps, cplx k0, int itmax = 50) {
  cplx k = k0;
  cplx gk = 0;
  for (int it = 0; it < itmax; ++it) {
    gk = op.g(eps, k);
    if (std::abs(gk) < 1e-13 * std::max(1.0, std::abs(k))) return {k, gk, it, true};
    double h = 1e-6 * std::max(std::abs(k), eps);
    cplx gp = op.g(eps, k + h);
    cplx gm = op.g(eps, k - h);
    cplx dg = (gp - gm) / (2.0 * h);
    if (dg == cplx(0)) return {k, gk, it, false};
    cplx step = gk / dg;
    k -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(k))) {
      gk = op.g(eps, k);
      return {k, gk, it + 1, std::abs(gk) < 1e-10 * std::max(1.0, std::abs(k))};
    }
  }
  return {k, gk, itmax, false};
}

// counterclockwise boundary of {|kappa| < radius, Re kappa > indent}:
// vertical segment at Re = indent from +iT down to -iT, then the arc back up
cplx contour_point(double u, double radius, double indent) {
  double T = std::sqrt(radius * radius - indent * indent);
  double th1 = std::atan2(T, indent);
  if (u < 0.5) {
    double t = T - (u / 0.5) * 2.0 * T;  // +T -> -T
    return cplx(indent, t);
  }
  double th = -th1 + ((u - 0.5) / 0.5) * 2.0 * th1;  // -th1 -> +th1
  return radius * cplx(std::cos(th), std::sin(th));
}

int winding_count(const BsOperator& op, double eps, double radius, double indent) {
  if (!(radius > indent && indent > 0))
    throw ConfigError("count_zeros_halfdisc: need 0 < indent < radius");
  struct Pt {
    double u;
    cplx g;
  };
  const int n0 = 48;
  std::vector<Pt> pts;
  pts.reserve(n0 + 1);
  for (int i = 0; i <= n0; ++i) {
    double u = (double)i / n0;
    pts.push_back({u, op.g(eps, contour_point(u, radius, indent))});
  }
  double total = 0;
  for (std::size_t i = 0; i + 1 < pts.size();) {
    cplx g0 = pts[i].g, g1 = pts[i + 1].g;
    if (g0 == cplx(0) || g1 == cplx(0))
      throw SolverError("count_zeros_halfdisc: zero of g on the contour");
    double da = std::arg(g1 / g0);
    if (std::abs(da) < 0.5 * M_PI) {
      total += da;
      ++i;
      continue;
    }
    double um = 0.5 * (pts[i].u + pts[i + 1].u);
    if (pts[i + 1].u - pts[i].u < 1e-10)
      throw SolverError("count_zeros_halfdisc: contour refinement exhausted (zero on contour?)");
    pts.insert(pts.begin() + i + 1, {um, op.g(eps, contour_point(um, radius, indent))});
  }
  // endpoints coincide only in the closed curve sense; g(start) != g(end) is a bug
  return (int)std::lround(total / (2.0 * M_PI));
}

}  // namespace

KappaRoot find_bound_state(const PotentialSpec& V, double m, double eps, Threshold th,
                           QuadSpec q, const MomentSet* moments, bool verify_winding,
                           double tol) {
  if (th == Threshold::minus_m) {
    // sigma1 H(V) sigma1 = -H(-sigma1 V sigma1): solve the reflected problem at +m
    PotentialSpec W = scale(sigma1_conjugate(V), -1.0);
    KappaRoot r = find_bound_state(W, m, eps, Threshold::plus_m, q, nullptr, verify_winding, tol);
    r.z = -r.z;
    return r;
  }
  cplx U11, F11;
  if (moments) {
    U11 = moments->U(0, 0);
    F11 = moments->F_plus(0, 0);
  } else {
    U11 = compute_U(V, tol)(0, 0);
    F11 = compute_F(V, m, +1, tol)(0, 0);
  }
  KappaRoot out;
  double u_scale = std::max(1e-12, V.sup_norm);
  bool exists = U11.real() > 1e-12 * u_scale ||
                (std::abs(U11.real()) <= 1e-12 * u_scale && F11.real() > 0);
  if (!exists && std::abs(U11.imag()) <= 1e-12 * u_scale) {
    out.no_eigenvalue = true;
    out.converged = true;
    return out;
  }

  BsOperator op(V, m, q, tol);
  cplx k0 = eps * m * U11 + eps * eps * m * F11;
  {
    double nrm = op.op_norm_estimate(k0);
    if (eps * nrm >= 1.0)
      throw SolverError("find_bound_state: eps * |M| >= 1, outside the weak-coupling regime");
  }
  NewtonOut nw = newton_on_g(op, eps, k0);
  if (!nw.converged) {
    // localize by the argument principle, then restart Newton from the scale found
    double r = std::min(0.9 * m, std::max(4.0 * std::abs(k0), 0.1 * m));
    double indent = 1e-3 * m;
    while (r > 8.0 * indent) {
      if (winding_count(op, eps, r, indent) == 0) break;
      double r2 = 0.5 * r;
      if (winding_count(op, eps, r2, indent) == 0) {
        nw = newton_on_g(op, eps, cplx(0.75 * r, 0.0));
        break;
      }
      r = r2;
    }
    if (!nw.converged) {
      int w = winding_count(op, eps, std::min(0.9 * m, std::max(4.0 * std::abs(k0), 0.1 * m)),
                            1e-3 * m);
      if (w == 0) {
        out.no_eigenvalue = true;
        out.converged = true;
        return out;
      }
      throw SolverError("find_bound_state: Newton and winding fallback both failed");
    }
  }
  out.kappa = nw.kappa;
  out.z = z_of_kappa(nw.kappa, m, Threshold::plus_m);
  out.residual = std::abs(nw.g_val);
  out.iterations = nw.iters;
  out.converged = true;
  if (verify_winding) {
    double r = std::min(0.9 * m, std::max(4.0 * std::abs(nw.kappa), 0.05 * m));
    out.winding = winding_count(op, eps, r, 1e-3 * m);
  }
  return out;
}

KappaRoot find_resonance(const PotentialSpec& V, double m, double eps, QuadSpec q,
                         const MomentSet* moments, double tol) {
  double rate;
  switch (V.decay.kind) {
    case Decay::Kind::compact:
      rate = std::numeric_limits<double>::infinity();
      break;
    case Decay::Kind::exponential:
      rate = V.decay.rate;
      break;
    default:
      throw ConfigError("find_resonance: second-sheet continuation needs compact or "
                        "exponential decay metadata");
  }
  cplx U11, F11;
  if (moments) {
    U11 = moments->U(0, 0);
    F11 = moments->F_plus(0, 0);
  } else {
    U11 = compute_U(V, tol)(0, 0);
    F11 = compute_F(V, m, +1, tol)(0, 0);
  }
  if (!(U11.real() < 0))
    throw ConfigError("find_resonance: Re U11 must be negative (threshold zero escapes to "
                      "the second sheet only then)");
  cplx k0 = eps * m * U11 + eps * eps * m * F11;
  if (!(std::abs(k0.real()) < 0.5 * rate))
    throw ConfigError("find_resonance: |Re kappa0| >= rate/2, kernel growth would beat the "
                      "declared decay");

  QuadSpec qr = q;
  if (qr.radius == 0 && V.decay.kind == Decay::Kind::exponential) {
    // the continued kernel grows like e^{2|Re kappa| x}; shrink the effective rate
    Decay d = V.decay;
    d.rate = rate - 2.0 * std::abs(k0.real());
    qr.radius = suggest_radius(d, 2, tol / 10.0);
  }
  BsOperator op(V, m, qr, tol);
  NewtonOut nw = newton_on_g(op, eps, k0);
  if (!nw.converged) throw SolverError("find_resonance: Newton failed");
  KappaRoot out;
  out.kappa = nw.kappa;
  out.z = z_of_kappa(nw.kappa, m, Threshold::plus_m);
  out.residual = std::abs(nw.g_val);
  out.iterations = nw.iters;
  out.converged = true;
  return out;
}

int count_zeros_halfdisc(const PotentialSpec& V, double m, double eps, double radius,
                         double indent, QuadSpec q, double tol) {
  if (indent <= 0) indent = 1e-3 * m;
  BsOperator op(V, m, q, tol);
  return winding_count(op, eps, radius, indent);
}

}  // namespace gapspectra

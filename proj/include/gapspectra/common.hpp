#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gapspectra {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

// which spectral gap edge an eigenvalue emerges from
enum class Threshold { plus_m, minus_m };

// physical sheet: Re kappa >= 0 (bound states); second sheet: Re kappa < 0 (resonances)
enum class Sheet { physical, second };

// bad user input / config file -> process exit 2
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// solver did not converge / numerical failure -> process exit 3
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double sgn(double t) { return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0); }

inline Mat2 sigma1() {
  Mat2 s;
  s << 0, 1, 1, 0;
  return s;
}

inline Mat2 sigma3() {
  Mat2 s;
  s << 1, 0, 0, -1;
  return s;
}

// i*sigma2 = [[0,1],[-1,0]], the 1d Dirac "momentum" matrix
inline Mat2 i_sigma2() {
  Mat2 s;
  s << 0, 1, -1, 0;
  return s;
}

}  // namespace gapspectra

// Discrete calculus on the unit circle: Fourier analysis, the normalized
// Hilbert transform T1, harmonic extension to the disc, and radial
// derivatives at the vertex tau = 1.
//
// Conventions used throughout the library:
//   * grids are uniform with N a power of two, N >= 256, and theta[0] = 0,
//     so the vertex tau = 1 is always the grid point of index 0;
//   * tau = -1 is the grid point of index N/2;
//   * boundary data are stored in grid order (index j <-> angle 2*pi*j/N).
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

namespace crdisc {

using Eigen::ArrayXcd;
using Eigen::ArrayXd;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct CircleGrid {
  int n = 0;
  ArrayXd theta;  // strictly increasing, spacing 2*pi/n, theta[0] = 0
  ArrayXcd tau;   // tau[j] = exp(i*theta[j]), tau[0] = 1 exactly

  double spacing() const { return 2.0 * kPi / n; }
  // signed principal angle in (-pi, pi]; index n/2 maps to +pi
  double principal_angle(int j) const {
    return j <= n / 2 ? theta[j] : theta[j] - 2.0 * kPi;
  }
};

// Rejects n that is not a power of two or is below 256.
CircleGrid make_grid(int n);

// Fourier coefficients c_m, m = -n/2 .. n/2-1, stored in FFT order:
// index k holds m = k for k < n/2 and m = k - n otherwise.
struct Spectrum {
  ArrayXcd c;

  int size() const { return static_cast<int>(c.size()); }
  int index_of(int m) const { return m >= 0 ? m : m + size(); }
  Complex coeff(int m) const { return c[index_of(m)]; }
  // the signed mode number held at storage index k
  int mode(int k) const { return k < size() / 2 ? k : k - size(); }
};

Spectrum fourier_coeffs(const ArrayXcd& values);
Spectrum fourier_coeffs(const ArrayXd& values);
// Inverse of fourier_coeffs: values[j] = sum_m c_m exp(i m theta_j).
ArrayXcd synthesize(const Spectrum& s);

// Hilbert transform normalized so that the output vanishes at tau = 1
// (exactly, bit level). The multiplier is c_m -> -i*sgn(m)*c_m with
// sgn(0) = 0; the unpaired Nyquist coefficient m = -n/2 is zeroed first.
// With this sign, T1(cos) = sin and u + i*T1(u) extends holomorphically.
ArrayXd hilbert_t1(const ArrayXd& f);
// columnwise / entrywise variants for vector- and matrix-valued data
MatrixXd hilbert_t1(const MatrixXd& f);
std::vector<MatrixXd> hilbert_t1(const std::vector<MatrixXd>& f);

// Evaluates the truncated Fourier-Poisson series sum c_m r^|m| e^{i m t}
// at point = r e^{i t}. Rejects |point| > 1 - 1e-12.
Complex harmonic_extension(const Spectrum& s, Complex point);
Complex harmonic_extension(const ArrayXcd& f, Complex point);
double harmonic_extension(const ArrayXd& f, Complex point);

// l2 mass of the negative-frequency modes, normalized by max(1, ||f||_2)
// where ||f||_2 is the coefficient l2 norm. Zero iff the trigonometric
// interpolant is the boundary value of a holomorphic function.
double holomorphic_defect(const ArrayXcd& f);
double holomorphic_defect(const ArrayXd& f);
// entrywise maximum over a matrix-valued boundary function
double holomorphic_defect(const std::vector<MatrixXd>& f);

// Least-squares fit of the radial trace of the harmonic extension at the
// vertex, v(1-s) ~ v(1) + a*s + b*s^(1+gamma) (+ b2*s^(1+2gamma)) + c*s^2,
// on s = 2^-i, i = 4..12. The s^2 term absorbs the smooth remainder so the
// fit is exact on low-degree trigonometric data; the second Hoelder
// correction keeps the residual small on genuinely C^{1,gamma} data when
// gamma is small.
struct RadialFit {
  double outward = 0.0;   // d/dr at r=1, equals -a
  double rms = 0.0;       // fit residual, relative units (z-space)
  double scale = 0.0;     // magnitude the residual is compared against
  bool ok = false;        // rms <= 5e-2 * scale
};

RadialFit fit_radial_derivative(const ArrayXd& f, double gamma);

struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Outward radial derivative d/dr of the harmonic extension of f at tau=1.
// Throws FitError when the fit residual exceeds 5e-2 of the data scale
// (the boundary trace is then not C^{1,gamma} up to the vertex).
double radial_derivative_at_one(const ArrayXd& f, double gamma);

}  // namespace crdisc

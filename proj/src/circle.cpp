#include "crdisc/circle.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>

namespace crdisc {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

ArrayXcd fft_forward(const ArrayXcd& values) {
  Eigen::FFT<double> fft;
  std::vector<Complex> in(values.data(), values.data() + values.size());
  std::vector<Complex> out(in.size());
  fft.fwd(out, in);
  return Eigen::Map<ArrayXcd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

ArrayXcd fft_inverse(const ArrayXcd& coeffs) {
  Eigen::FFT<double> fft;
  std::vector<Complex> in(coeffs.data(), coeffs.data() + coeffs.size());
  std::vector<Complex> out(in.size());
  fft.inv(out, in);
  return Eigen::Map<ArrayXcd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

}  // namespace

CircleGrid make_grid(int n) {
  if (!is_power_of_two(n))
    throw std::invalid_argument("make_grid: point count must be a power of two");
  if (n < 256)
    throw std::invalid_argument("make_grid: point count must be at least 256");
  CircleGrid g;
  g.n = n;
  g.theta.resize(n);
  g.tau.resize(n);
  for (int j = 0; j < n; ++j) {
    // 2*pi*j is exact up to the division by the power-of-two n, so
    // theta[n/2] comes out as the double nearest pi.
    const double th = (2.0 * kPi * j) / n;
    g.theta[j] = th;
    g.tau[j] = Complex(std::cos(th), std::sin(th));
  }
  g.tau[0] = Complex(1.0, 0.0);
  return g;
}

Spectrum fourier_coeffs(const ArrayXcd& values) {
  const auto n = values.size();
  Spectrum s;
  s.c = fft_forward(values) / static_cast<double>(n);
  return s;
}

Spectrum fourier_coeffs(const ArrayXd& values) {
  return fourier_coeffs(ArrayXcd(values.cast<Complex>()));
}

ArrayXcd synthesize(const Spectrum& s) {
  return fft_inverse(ArrayXcd(s.c * static_cast<double>(s.size())));
}

ArrayXd hilbert_t1(const ArrayXd& f) {
  const int n = static_cast<int>(f.size());
  Spectrum s = fourier_coeffs(f);
  s.c[n / 2] = 0.0;  // unpaired Nyquist mode
  for (int k = 0; k < n; ++k) {
    const int m = s.mode(k);
    if (m > 0)
      s.c[k] *= Complex(0.0, -1.0);
    else if (m < 0)
      s.c[k] *= Complex(0.0, 1.0);
    else
      s.c[k] = 0.0;
  }
  ArrayXd g = synthesize(s).real();
  const double at_one = g[0];
  g -= at_one;
  g[0] = 0.0;
  return g;
}

MatrixXd hilbert_t1(const MatrixXd& f) {
  MatrixXd out(f.rows(), f.cols());
  for (Eigen::Index c = 0; c < f.cols(); ++c)
    out.col(c) = hilbert_t1(ArrayXd(f.col(c).array())).matrix();
  return out;
}

std::vector<MatrixXd> hilbert_t1(const std::vector<MatrixXd>& f) {
  if (f.empty()) return {};
  const Eigen::Index rows = f[0].rows(), cols = f[0].cols();
  const int n = static_cast<int>(f.size());
  std::vector<MatrixXd> out(f.size(), MatrixXd::Zero(rows, cols));
  ArrayXd series(n);
  for (Eigen::Index a = 0; a < rows; ++a)
    for (Eigen::Index b = 0; b < cols; ++b) {
      for (int j = 0; j < n; ++j) series[j] = f[j](a, b);
      const ArrayXd t = hilbert_t1(series);
      for (int j = 0; j < n; ++j) out[j](a, b) = t[j];
    }
  return out;
}

Complex harmonic_extension(const Spectrum& s, Complex point) {
  const double r = std::abs(point);
  if (r > 1.0 - 1e-12)
    throw std::invalid_argument(
        "harmonic_extension: point too close to the boundary, use boundary values");
  const int n = s.size();
  const double t = std::arg(point);
  Complex acc = s.coeff(0);
  // powers of r accumulated once for +m and -m
  double rp = 1.0;
  for (int m = 1; m <= n / 2; ++m) {
    rp *= r;
    const Complex e(std::cos(m * t), std::sin(m * t));
    if (m < n / 2) acc += rp * (s.coeff(m) * e + s.coeff(-m) * std::conj(e));
    else acc += rp * s.coeff(-m) * std::conj(e);
  }
  return acc;
}

Complex harmonic_extension(const ArrayXcd& f, Complex point) {
  return harmonic_extension(fourier_coeffs(f), point);
}

double harmonic_extension(const ArrayXd& f, Complex point) {
  return harmonic_extension(fourier_coeffs(f), point).real();
}

double holomorphic_defect(const ArrayXcd& f) {
  const Spectrum s = fourier_coeffs(f);
  double neg = 0.0, all = 0.0;
  for (int k = 0; k < s.size(); ++k) {
    const double a = std::norm(s.c[k]);
    all += a;
    if (s.mode(k) < 0) neg += a;
  }
  return std::sqrt(neg) / std::max(1.0, std::sqrt(all));
}

double holomorphic_defect(const ArrayXd& f) {
  return holomorphic_defect(ArrayXcd(f.cast<Complex>()));
}

double holomorphic_defect(const std::vector<MatrixXd>& f) {
  if (f.empty()) return 0.0;
  const int n = static_cast<int>(f.size());
  double worst = 0.0;
  ArrayXd series(n);
  for (Eigen::Index a = 0; a < f[0].rows(); ++a)
    for (Eigen::Index b = 0; b < f[0].cols(); ++b) {
      for (int j = 0; j < n; ++j) series[j] = f[j](a, b);
      worst = std::max(worst, holomorphic_defect(series));
    }
  return worst;
}

RadialFit fit_radial_derivative(const ArrayXd& f, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("fit_radial_derivative: gamma must lie in (0,1)");
  const Spectrum s = fourier_coeffs(f);
  const int n = s.size();

  constexpr int imin = 4, imax = 12;
  constexpr int npts = imax - imin + 1;
  // the second Hoelder correction s^(2 gamma) matters for small gamma; near
  // and beyond the smooth term it would duplicate the s column
  const bool second_correction = 2.0 * gamma < 0.95;
  const int ncols = second_correction ? 4 : 3;
  Eigen::VectorXd z(npts);
  Eigen::MatrixXd basis(npts, ncols);
  const double v1 = f[0];
  for (int i = imin; i <= imax; ++i) {
    const double sdist = std::pow(2.0, -i);
    const double r = 1.0 - sdist;
    // radial trace at theta = 0: sum c_m r^|m|
    double v = s.coeff(0).real();
    double rp = 1.0;
    for (int m = 1; m <= n / 2; ++m) {
      rp *= r;
      if (m < n / 2) v += rp * (s.coeff(m) + s.coeff(-m)).real();
      else v += rp * s.coeff(-m).real();
    }
    const int row = i - imin;
    z[row] = (v - v1) / sdist;  // = a + b s^gamma (+ b2 s^2gamma) + c s + ...
    basis(row, 0) = 1.0;
    basis(row, 1) = std::pow(sdist, gamma);
    if (second_correction) basis(row, 2) = std::pow(sdist, 2.0 * gamma);
    basis(row, ncols - 1) = sdist;
  }
  const Eigen::VectorXd sol = basis.colPivHouseholderQr().solve(z);
  const Eigen::VectorXd resid = z - basis * sol;
  RadialFit out;
  out.outward = -sol[0];
  out.rms = std::sqrt(resid.squaredNorm() / npts);
  out.scale = std::max(z.cwiseAbs().maxCoeff(), 1e-14);
  out.ok = out.rms <= 5e-2 * out.scale;
  return out;
}

double radial_derivative_at_one(const ArrayXd& f, double gamma) {
  const RadialFit fit = fit_radial_derivative(f, gamma);
  if (!fit.ok)
    throw FitError("radial_derivative_at_one: ill-conditioned radial fit (residual " +
                   std::to_string(fit.rms) + " vs scale " + std::to_string(fit.scale) + ")");
  return fit.outward;
}

}  // namespace crdisc

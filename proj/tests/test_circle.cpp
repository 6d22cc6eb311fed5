#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crdisc/circle.hpp"

#include <random>

using namespace crdisc;

namespace {

ArrayXd random_real(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ArrayXd out(n);
  for (int j = 0; j < n; ++j) out[j] = dist(rng);
  return out;
}

// band-limited real function of degree <= deg
ArrayXd band_limited(const CircleGrid& g, int deg, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ArrayXd f = ArrayXd::Zero(g.n);
  for (int m = 1; m <= deg; ++m) {
    const double a = dist(rng), b = dist(rng);
    f += a * (m * g.theta).cos() + b * (m * g.theta).sin();
  }
  return f;
}

}  // namespace

TEST_CASE("grid construction") {
  const CircleGrid g = make_grid(256);
  CHECK(g.n == 256);
  CHECK(g.theta[0] == 0.0);
  CHECK(g.theta[1] == doctest::Approx(2.0 * kPi / 256).epsilon(1e-15));
  CHECK(g.tau[0] == Complex(1.0, 0.0));
  for (int j = 1; j < g.n; ++j) {
    CHECK(g.theta[j] > g.theta[j - 1]);
    CHECK(g.theta[j] - g.theta[j - 1] == doctest::Approx(g.spacing()).epsilon(1e-12));
  }
  CHECK(make_grid(1024).spacing() == doctest::Approx(2.0 * kPi / 1024));
  CHECK(g.principal_angle(128) == kPi);
  CHECK(g.principal_angle(255) < 0.0);

  CHECK_THROWS_AS(make_grid(255), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(128), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1000), std::invalid_argument);
}

TEST_CASE("fourier coefficients of basis functions") {
  const CircleGrid g = make_grid(256);
  const Spectrum s1 = fourier_coeffs(ArrayXcd(g.tau));
  CHECK(std::abs(s1.coeff(1) - 1.0) < 1e-14);
  for (int m = -128; m < 128; ++m)
    if (m != 1) CHECK(std::abs(s1.coeff(m)) < 1e-14);

  const Spectrum s2 = fourier_coeffs(ArrayXd(ArrayXd::Constant(g.n, 5.0)));
  CHECK(std::abs(s2.coeff(0) - 5.0) < 1e-13);
}

TEST_CASE("spectrum round trip") {
  const int n = 256;
  for (unsigned seed : {1u, 2u, 3u}) {
    ArrayXcd f = random_real(n, seed).cast<Complex>() +
                 Complex(0, 1) * random_real(n, seed + 100).cast<Complex>();
    const ArrayXcd back = synthesize(fourier_coeffs(f));
    CHECK((back - f).abs().maxCoeff() / f.abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("hilbert transform trivia") {
  const CircleGrid g = make_grid(1024);
  const ArrayXd t1cos = hilbert_t1(ArrayXd(g.theta.cos()));
  CHECK((t1cos - g.theta.sin()).abs().maxCoeff() < 1e-12);

  const ArrayXd t1const = hilbert_t1(ArrayXd(ArrayXd::Constant(g.n, 3.7)));
  CHECK(t1const.abs().maxCoeff() < 1e-12);

  const ArrayXd t1sin = hilbert_t1(ArrayXd(g.theta.sin()));
  CHECK((t1sin - (1.0 - g.theta.cos())).abs().maxCoeff() < 1e-12);
}

TEST_CASE("vertex normalization is exact") {
  const CircleGrid g = make_grid(512);
  for (unsigned seed : {7u, 8u, 9u}) {
    const ArrayXd f = random_real(g.n, seed);
    CHECK(hilbert_t1(f)[0] == 0.0);
  }
}

TEST_CASE("T1 twice is minus identity modulo constants") {
  const CircleGrid g = make_grid(1024);
  ArrayXd f = band_limited(g, g.n / 4, 5);
  f -= f.mean();
  f -= f[0];  // f(1) = 0; mean shifts only the constant part of T1 T1 f
  const ArrayXd tt = hilbert_t1(hilbert_t1(f));
  const ArrayXd should_be_const = tt + f;
  CHECK(should_be_const.maxCoeff() - should_be_const.minCoeff() < 1e-10);
}

TEST_CASE("u + i T1 u extends holomorphically") {
  const CircleGrid g = make_grid(1024);
  for (double c : {0.0, 2.5, -1.0}) {
    const ArrayXd u = band_limited(g, 200, 11);
    const ArrayXcd f =
        u.cast<Complex>() + Complex(0, 1) * (hilbert_t1(u) + c).cast<Complex>();
    CHECK(holomorphic_defect(f) < 1e-10);
  }
}

TEST_CASE("harmonic extension") {
  const CircleGrid g = make_grid(512);
  CHECK(harmonic_extension(ArrayXd(ArrayXd::Constant(g.n, 1.0)), Complex(0.3, 0.2)) ==
        doctest::Approx(1.0).epsilon(1e-13));

  const ArrayXd f = g.theta.cos();
  const Complex pt = 0.7 * std::exp(Complex(0, 1.1));
  CHECK(harmonic_extension(f, pt) == doctest::Approx(0.7 * std::cos(1.1)).epsilon(1e-12));

  // mean value of the absolute principal angle at the origin
  ArrayXd absang(g.n);
  for (int j = 0; j < g.n; ++j) absang[j] = std::abs(g.principal_angle(j));
  CHECK(std::abs(harmonic_extension(absang, Complex(0, 0)) - kPi / 2) < 1e-12);

  CHECK_THROWS_AS(harmonic_extension(f, Complex(1.0 - 1e-13, 0.0)), std::invalid_argument);
}

TEST_CASE("harmonic extension at the origin equals the mean") {
  const CircleGrid g = make_grid(256);
  const ArrayXd f = random_real(g.n, 42);
  CHECK(std::abs(harmonic_extension(f, Complex(0, 0)) - f.mean()) < 1e-12);
}

TEST_CASE("holomorphic defect") {
  const CircleGrid g = make_grid(256);
  CHECK(holomorphic_defect(ArrayXcd(g.tau)) < 1e-14);
  CHECK(holomorphic_defect(ArrayXcd(g.tau.conjugate())) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("radial derivative at the vertex") {
  const CircleGrid g = make_grid(2048);
  CHECK(radial_derivative_at_one(ArrayXd(g.theta.cos()), 0.5) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(radial_derivative_at_one(ArrayXd(ArrayXd::Constant(g.n, 4.2)), 0.5) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(radial_derivative_at_one(ArrayXd((2.0 * g.theta).cos()), 0.5) ==
        doctest::Approx(2.0).epsilon(1e-9));

  // a boundary jump off the vertex is not C^{1,gamma}: distinct failure
  ArrayXd jump(g.n);
  for (int j = 0; j < g.n; ++j) jump[j] = g.principal_angle(j) > 0.3 ? 1.0 : 0.0;
  const RadialFit fit = fit_radial_derivative(jump, 0.5);
  CHECK(!fit.ok);
  CHECK_THROWS_AS(radial_derivative_at_one(jump, 0.5), FitError);
  CHECK_THROWS_AS(fit_radial_derivative(jump, 1.5), std::invalid_argument);
}

TEST_CASE("matrix-valued transform acts entrywise") {
  const CircleGrid g = make_grid(256);
  std::vector<MatrixXd> f(g.n, MatrixXd(2, 2));
  for (int j = 0; j < g.n; ++j) {
    f[j](0, 0) = std::cos(g.theta[j]);
    f[j](0, 1) = 1.0;
    f[j](1, 0) = std::sin(g.theta[j]);
    f[j](1, 1) = 0.0;
  }
  const auto t = hilbert_t1(f);
  double err = 0.0;
  for (int j = 0; j < g.n; ++j) {
    err = std::max(err, std::abs(t[j](0, 0) - std::sin(g.theta[j])));
    err = std::max(err, std::abs(t[j](0, 1)));
    err = std::max(err, std::abs(t[j](1, 0) - (1.0 - std::cos(g.theta[j]))));
  }
  CHECK(err < 1e-12);
}

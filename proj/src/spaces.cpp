#include "crdisc/spaces.hpp"

#include <algorithm>
#include <cmath>

namespace crdisc {

namespace {

int max_dyadic_level(int n) { return static_cast<int>(std::lround(std::log2(n / 4))); }

double pair_sup(const ArrayXd& f, int sep) {
  const int n = static_cast<int>(f.size());
  double best = 0.0;
  for (int j = 0; j < n; ++j) {
    const int i = j + sep < n ? j + sep : j + sep - n;
    best = std::max(best, std::abs(f[i] - f[j]));
  }
  return best;
}

ArrayXd centered_diff(const ArrayXd& f, double h) {
  const int n = static_cast<int>(f.size());
  ArrayXd out(n);
  for (int j = 0; j < n; ++j) {
    const int jp = j + 1 < n ? j + 1 : 0;
    const int jm = j > 0 ? j - 1 : n - 1;
    out[j] = (f[jp] - f[jm]) / (2.0 * h);
  }
  return out;
}

ArrayXd second_diff(const ArrayXd& f, double h) {
  const int n = static_cast<int>(f.size());
  ArrayXd out(n);
  for (int j = 0; j < n; ++j) {
    const int jp = j + 1 < n ? j + 1 : 0;
    const int jm = j > 0 ? j - 1 : n - 1;
    out[j] = (f[jp] - 2.0 * f[j] + f[jm]) / (h * h);
  }
  return out;
}

}  // namespace

HolderEstimate holder_seminorm(const CircleGrid& grid, const ArrayXd& f, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("holder_seminorm: alpha must lie in (0,1]");
  HolderEstimate est;
  est.exponent = alpha;
  const int smax = max_dyadic_level(grid.n);
  for (int s = smax; s >= 0; --s)
    est.scales.push_back(grid.spacing() * (1 << s));
  for (int s = 0; s <= smax; ++s) {
    const int sep = 1 << s;
    const double d = grid.spacing() * sep;
    est.seminorm = std::max(est.seminorm, pair_sup(f, sep) / std::pow(d, alpha));
  }
  return est;
}

HolderEstimate holder_exponent_fit(const CircleGrid& grid, const ArrayXd& f) {
  HolderEstimate est;
  const int smax = max_dyadic_level(grid.n);
  std::vector<double> logd, logw;
  for (int s = smax; s >= 0; --s) {
    const int sep = 1 << s;
    const double d = grid.spacing() * sep;
    est.scales.push_back(d);
    const double w = pair_sup(f, sep);
    if (w > 0.0) {
      logd.push_back(std::log(d));
      logw.push_back(std::log(w));
    }
  }
  if (logd.empty()) {  // constant input
    est.exponent = 1.0;
    est.seminorm = 0.0;
    return est;
  }
  const int m = static_cast<int>(logd.size());
  Eigen::MatrixXd a(m, 2);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    a(i, 0) = logd[i];
    a(i, 1) = 1.0;
    y[i] = logw[i];
  }
  const Eigen::Vector2d sol = a.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd resid = y - a * sol;
  est.exponent = std::clamp(sol[0], 1e-9, 1.0);
  est.seminorm = std::exp(sol[1]);
  est.fit_residual = std::sqrt(resid.squaredNorm() / m);
  return est;
}

FNormReport f2alpha_norm(const CircleGrid& grid, const ArrayXd& sigma, double alpha) {
  const int n = grid.n;
  const double h = grid.spacing();
  FNormReport rep;
  rep.c0 = sigma.abs().maxCoeff();

  const ArrayXd d1 = centered_diff(sigma, h);
  const ArrayXd d2 = second_diff(sigma, h);
  ArrayXd w1(n), w2(n);
  for (int j = 0; j < n; ++j) {
    const double phi = grid.principal_angle(j);
    w1[j] = phi * d1[j];
    w2[j] = phi * phi * d2[j];
  }
  // derivatives are not defined at the vertex; the weight vanishes there
  w1[0] = 0.0;
  w2[0] = 0.0;

  rep.weighted_d1 = holder_seminorm(grid, w1, alpha).seminorm + w1.abs().maxCoeff();
  rep.weighted_d2 = holder_seminorm(grid, w2, alpha).seminorm + w2.abs().maxCoeff();
  rep.total = rep.c0 + rep.weighted_d1 + rep.weighted_d2;
  return rep;
}

FNormReport f2alpha_norm(const CircleGrid& grid, const ArrayXcd& sigma, double alpha) {
  const FNormReport re = f2alpha_norm(grid, ArrayXd(sigma.real()), alpha);
  const FNormReport im = f2alpha_norm(grid, ArrayXd(sigma.imag()), alpha);
  FNormReport rep;
  rep.c0 = re.c0 + im.c0;
  rep.weighted_d1 = re.weighted_d1 + im.weighted_d1;
  rep.weighted_d2 = re.weighted_d2 + im.weighted_d2;
  rep.total = re.total + im.total;
  return rep;
}

double c1gamma_norm(const CircleGrid& grid, const ArrayXd& f, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("c1gamma_norm: gamma must lie in (0,1)");
  const ArrayXd d1 = centered_diff(f, grid.spacing());
  return f.abs().maxCoeff() + d1.abs().maxCoeff() +
         holder_seminorm(grid, d1, gamma).seminorm;
}

double clamp_gamma(int k, double alpha) {
  return std::min({k * alpha - 1.0, alpha, 0.95});
}

HardyLittlewoodReport hardy_littlewood_check(const PolarField& field, double alpha, double C) {
  if (field.values.rows() != field.radii.size() || field.values.cols() != field.grid.n)
    throw std::invalid_argument("hardy_littlewood_check: shape mismatch");
  constexpr double kConstant = 10.0;
  HardyLittlewoodReport rep;
  const int nr = static_cast<int>(field.radii.size());
  const int nt = field.grid.n;

  // gradient hypothesis first
  for (int i = 0; i < nr; ++i) {
    const double delta = 1.0 - field.radii[i];
    if (delta <= 0.0) continue;  // bound is vacuous on the boundary ring
    const double bound = C * std::pow(delta, alpha - 1.0);
    if (field.grad_norm.row(i).maxCoeff() > bound * 1.01) {
      rep.hypothesis_violated = true;
    }
  }

  rep.max_abs = field.values.cwiseAbs().maxCoeff();

  auto chord = [&](double r1, int j1, double r2, int j2) {
    const Complex p1 = r1 * field.grid.tau[j1];
    const Complex p2 = r2 * field.grid.tau[j2];
    return std::abs(p1 - p2);
  };

  double quot = 0.0;
  // angular pairs at dyadic separations on every ring
  const int smax = static_cast<int>(std::lround(std::log2(nt / 4)));
  for (int i = 0; i < nr; ++i) {
    if (field.radii[i] <= 0.0) continue;
    for (int s = 0; s <= smax; ++s) {
      const int sep = 1 << s;
      for (int j = 0; j < nt; ++j) {
        const int j2 = j + sep < nt ? j + sep : j + sep - nt;
        const double dist = chord(field.radii[i], j, field.radii[i], j2);
        if (dist <= 0.0) continue;
        quot = std::max(quot, std::abs(field.values(i, j2) - field.values(i, j)) /
                                  std::pow(dist, alpha));
      }
    }
  }
  // radial pairs along every ray, all ring combinations
  for (int i1 = 0; i1 < nr; ++i1)
    for (int i2 = i1 + 1; i2 < nr; ++i2) {
      const double dist0 = std::abs(field.radii[i2] - field.radii[i1]);
      if (dist0 <= 0.0) continue;
      const double dp = std::pow(dist0, alpha);
      for (int j = 0; j < nt; ++j)
        quot = std::max(quot, std::abs(field.values(i2, j) - field.values(i1, j)) / dp);
    }

  rep.quotient = quot;
  const double control = rep.max_abs + C;
  rep.ratio = control > 0.0 ? quot / control : 0.0;
  rep.passes = !rep.hypothesis_violated && rep.ratio <= kConstant;
  return rep;
}

}  // namespace crdisc

#include "crdisc/sector.hpp"

#include <cmath>
#include <cstdio>

namespace crdisc {

SectorSpec make_sector_spec(double alpha, double scale, int m) {
  SectorSpec spec;
  spec.alpha = alpha;
  spec.scale = scale;
  spec.w_dir = VectorXcd::Zero(m);
  spec.w_dir[0] = Complex(1.0, 0.0);
  validate(spec);
  return spec;
}

void validate(const SectorSpec& spec) {
  // alpha = 1 is allowed as the smooth limit case
  if (!(spec.alpha > 0.0 && spec.alpha <= 1.0))
    throw std::invalid_argument("sector spec: alpha must lie in (0,1]");
  if (!(spec.scale > 0.0 && spec.scale <= 0.2))
    throw std::invalid_argument("sector spec: scale must lie in (0, 0.2]");
  if (std::abs(spec.w_dir.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("sector spec: w direction must be a unit vector");
}

VectorXcd sector_value(const SectorSpec& spec, Complex z) {
  const Complex one_minus = Complex(1.0, 0.0) - z;
  if (one_minus == Complex(0.0, 0.0)) return VectorXcd::Zero(spec.w_dir.size());
  const Complex factor = spec.scale * std::exp(spec.alpha * std::log(one_minus));
  return factor * spec.w_dir;
}

MatrixXcd sector_boundary(const SectorSpec& spec, const CircleGrid& grid) {
  validate(spec);
  MatrixXcd out(grid.n, spec.w_dir.size());
  for (int j = 0; j < grid.n; ++j) out.row(j) = sector_value(spec, grid.tau[j]).transpose();
  out.row(0).setZero();
  return out;
}

MatrixXcd smooth_approximant(const SectorSpec& spec, const CircleGrid& grid, double nu) {
  if (!(nu > 1.0)) throw std::invalid_argument("smooth_approximant: nu must exceed 1");
  validate(spec);
  const double sigma = 1.0 - 1.0 / nu;
  const VectorXcd offset = sector_value(spec, Complex(sigma, 0.0));
  MatrixXcd out(grid.n, spec.w_dir.size());
  for (int j = 0; j < grid.n; ++j)
    out.row(j) = (sector_value(spec, sigma * grid.tau[j]) - offset).transpose();
  out.row(0).setZero();
  return out;
}

double approximation_error(const CircleGrid& grid, const MatrixXcd& w,
                           const MatrixXcd& w_nu, double alpha_prime) {
  if (w.rows() != w_nu.rows() || w.cols() != w_nu.cols())
    throw std::invalid_argument("approximation_error: shape mismatch");
  double total = 0.0;
  for (Eigen::Index c = 0; c < w.cols(); ++c) {
    const ArrayXcd diff = w.col(c).array() - w_nu.col(c).array();
    total += f2alpha_norm(grid, diff, alpha_prime).total;
  }
  return total;
}

std::vector<ConvergenceRow> convergence_study(const SectorSpec& spec,
                                              GraphingFunctionPtr h, int k,
                                              const std::vector<double>& nu_list,
                                              double alpha_prime,
                                              const CircleGrid& grid) {
  if (!(alpha_prime < spec.alpha))
    throw std::invalid_argument("convergence_study: alpha' must be below alpha");
  if (!(k * alpha_prime > 1.0))
    throw std::invalid_argument("convergence_study: require k*alpha' > 1");
  const double beta_prime = clamp_gamma(k, alpha_prime);

  const MatrixXcd w_raw = sector_boundary(spec, grid);
  const VectorXd x0 = VectorXd::Zero(h->codim());
  const VectorXcd w0 = VectorXcd::Zero(h->cr_dim());
  auto [base, base_rep] = solve_bishop(h, w_raw, x0, w0);

  VectorXd base_deriv(base.d());
  for (int c = 0; c < base.d(); ++c)
    base_deriv[c] = fit_radial_derivative(ArrayXd(base.v.col(c).array()), beta_prime).outward;

  std::vector<ConvergenceRow> rows;
  for (double nu : nu_list) {
    ConvergenceRow row;
    row.nu = nu;
    try {
      const MatrixXcd w_nu = smooth_approximant(spec, grid, nu);
      row.f_gap = approximation_error(grid, w_raw, w_nu, alpha_prime);
      auto [disc, rep] = solve_bishop(h, w_nu, x0, w0);
      double c1 = 0.0, rad = 0.0;
      for (int c = 0; c < disc.d(); ++c) {
        const ArrayXd dv = disc.v.col(c).array() - base.v.col(c).array();
        c1 += c1gamma_norm(grid, dv, beta_prime);
        const double dnu =
            fit_radial_derivative(ArrayXd(disc.v.col(c).array()), beta_prime).outward;
        rad = std::max(rad, std::abs(dnu - base_deriv[c]));
      }
      row.c1gamma_gap = c1;
      row.radial_gap = rad;
      row.converged = rep.converged;
    } catch (const SolveError&) {
      row.f_gap = row.c1gamma_gap = row.radial_gap =
          std::numeric_limits<double>::quiet_NaN();
      row.converged = false;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::string out = "nu,f_gap,c1gamma_gap,radial_gap,converged\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d\n", r.nu, r.f_gap,
                  r.c1gamma_gap, r.radial_gap, r.converged ? 1 : 0);
    out += buf;
  }
  return out;
}

}  // namespace crdisc

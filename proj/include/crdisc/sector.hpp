// Sector boundary data scale*(1-tau)^alpha*w_o, the dilation smoothing
// w_nu(tau) = w((1-1/nu) tau) - w(1-1/nu), and convergence measurements in
// the discrete F^{2,alpha'} and C^{1,beta'} norms.
#pragma once

#include "crdisc/bishop.hpp"
#include "crdisc/spaces.hpp"

namespace crdisc {

struct SectorSpec {
  double alpha = 0.5;    // in (0,1)
  VectorXcd w_dir;       // unit vector in C^m
  double scale = 0.05;   // in (0, 0.2]
};

SectorSpec make_sector_spec(double alpha, double scale, int m = 1);
void validate(const SectorSpec& spec);

// closed-form holomorphic evaluation at any |z| <= 1 (principal branch;
// Re(1-z) >= 0 there so the branch is single valued)
VectorXcd sector_value(const SectorSpec& spec, Complex z);

// pointwise boundary samples; the vertex value is exactly zero
MatrixXcd sector_boundary(const SectorSpec& spec, const CircleGrid& grid);

// w_nu(tau_j) for nu > 1; vanishes at the vertex exactly
MatrixXcd smooth_approximant(const SectorSpec& spec, const CircleGrid& grid, double nu);

// F^{2,alpha'} distance of two CR data sets, summed over components
double approximation_error(const CircleGrid& grid, const MatrixXcd& w,
                           const MatrixXcd& w_nu, double alpha_prime);

struct ConvergenceRow {
  double nu = 0.0;
  double f_gap = 0.0;
  double c1gamma_gap = 0.0;
  double radial_gap = 0.0;
  bool converged = false;
};

// For each nu: solve Bishop's equation with the smoothed datum at the
// origin base point and compare against the sector-datum disc. Gaps are
// measured at alpha' (CR data) and at beta' = min(k*alpha'-1, alpha', 0.95)
// (normal components and their vertex radial derivatives). Per-row solver
// failures are marked, not propagated. Requires k*alpha' > 1.
std::vector<ConvergenceRow> convergence_study(const SectorSpec& spec,
                                              GraphingFunctionPtr h, int k,
                                              const std::vector<double>& nu_list,
                                              double alpha_prime,
                                              const CircleGrid& grid);

// CSV with the exact header nu,f_gap,c1gamma_gap,radial_gap,converged
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

}  // namespace crdisc

// Computable surrogates for the Hoelder space C^alpha, the vertex-weighted
// space F^{2,alpha}, the space C^{1,gamma}, and a Hardy-Littlewood style
// gradient-bound verifier on the disc.
#pragma once

#include "crdisc/circle.hpp"

namespace crdisc {

struct HolderEstimate {
  double exponent = 0.0;
  double seminorm = 0.0;
  std::vector<double> scales;  // dyadic separations (radians), decreasing
  double fit_residual = 0.0;
};

// sup over dyadic pairs (j, j + 2^s), s = 0 .. log2(n/4), of
// |f_i - f_j| / dist^alpha with dist the arc distance.
HolderEstimate holder_seminorm(const CircleGrid& grid, const ArrayXd& f, double alpha);

// Log-log least-squares fit of the modulus of continuity against the dyadic
// scales; the exponent is clamped to (0, 1]. Constant input yields
// exponent 1, seminorm 0.
HolderEstimate holder_exponent_fit(const CircleGrid& grid, const ArrayXd& f);

struct FNormReport {
  double c0 = 0.0;
  double weighted_d1 = 0.0;
  double weighted_d2 = 0.0;
  double total = 0.0;
};

// Discrete F^{2,alpha} norm: c0 = max|sigma|; derivatives by centered
// differences at the grid spacing, excluded at the vertex where the weight
// phi (the signed principal angle) vanishes anyway; each weighted derivative
// contributes its sup plus its alpha-Hoelder seminorm.
FNormReport f2alpha_norm(const CircleGrid& grid, const ArrayXd& sigma, double alpha);
// complex data: real and imaginary parts measured separately and summed
FNormReport f2alpha_norm(const CircleGrid& grid, const ArrayXcd& sigma, double alpha);

// max|f| + max|f'| + alpha-Hoelder seminorm of f' at exponent gamma.
double c1gamma_norm(const CircleGrid& grid, const ArrayXd& f, double gamma);

// gamma = min(k*alpha - 1, alpha, 0.95); the regularity exponent the
// normal component of a disc inherits on a manifold of order k.
double clamp_gamma(int k, double alpha);

// Interior samples of a function on a polar grid of the unit disc together
// with gradient magnitudes. Row i corresponds to radius radii[i] and the
// angles of the circle grid; radii may include 1 (the boundary ring).
struct PolarField {
  ArrayXd radii;
  CircleGrid grid;
  MatrixXd values;     // radii.size() x grid.n
  MatrixXd grad_norm;  // |grad f| at the same points
};

struct HardyLittlewoodReport {
  bool passes = false;
  bool hypothesis_violated = false;
  double ratio = 0.0;      // quotient / (max|f| + C)
  double quotient = 0.0;   // sampled sup Hoelder quotient
  double max_abs = 0.0;
};

// Checks the implication |grad f| <= C * delta^(alpha-1), delta = 1 - r,
// => the C^alpha seminorm is controlled by max|f| + C, with fixed
// comparison constant K = 10. If some sample breaks the gradient bound by
// more than 1%, the report flags hypothesis_violated instead.
HardyLittlewoodReport hardy_littlewood_check(const PolarField& field, double alpha, double C);

}  // namespace crdisc

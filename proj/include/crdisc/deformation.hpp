// One-parameter disc families attached through a collar bump, vertex
// radial-derivative responses and the first-order transport law, the
// pseudoconvex barrier check, the swept half-manifold and its rank, and
// chain transport along several discs.
#pragma once

#include "crdisc/bishop.hpp"

namespace crdisc {

struct BumpSpec {
  double center = kPi;  // tau = -1
  double width = kPi / 8.0;  // support half-width delta
};

// Plateau bump: 1 on [center - width/2, center + width/2], quintic
// smoothstep taper to 0 at distance width, zero elsewhere. Requires
// width < pi/2 so the support stays away from the vertex.
ArrayXd bump_chi(const BumpSpec& spec, const CircleGrid& grid);

struct DeformationFamily {
  std::vector<double> etas;  // etas[0] == 0, discs[0] is the base disc
  std::vector<AnalyticDisc> discs;
  BumpSpec bump;
  ArrayXd chi;
  VectorXd collar_direction;
};

// One Bishop solve per eta with t data eta * chi at the origin base point.
// All members share the grid and the CR data arrays. A failing solve
// aborts the family with the failing eta in the message.
DeformationFamily deform_family(GraphingFunctionPtr h_collar, const MatrixXcd& w_cr,
                                const BumpSpec& bump, const std::vector<double>& etas);

// Componentwise outward radial derivative of the normal component V at the
// vertex. Requires a C1gamma or smooth disc; fit failures propagate.
VectorXd normal_radial_derivative(const AnalyticDisc& disc, double gamma);

struct Eq103Report {
  VectorXd slope;        // d/d eta of the inward vertex response, origin fit
  VectorXd reference;    // G(-1) * d_t h at A(-1)
  double bump_response = 0.0;  // inward vertex derivative of the bump alone
  // |slope/bump_response - reference| / |reference|; the measured error
  // vector of the first-order law, which shrinks with the bump support
  double rel_error = 0.0;
  double direction_error = 0.0;  // |slope/|slope| - reference/|reference||
  double magnitude_ratio = 0.0;  // |slope/bump_response| / |reference|
  bool degenerate = false;       // |slope| below 1e-12: no deformation response
};

// First-order law of the family: the inward vertex response, normalized by
// the pure bump response and with the base disc's own vertex derivative
// subtracted, is compared against the transported collar direction.
Eq103Report verify_eq103(const DeformationFamily& family, double gamma);

struct BarrierReport {
  double boundary_min = 0.0;
  double interior_min = 0.0;
  double vertex_block = 0.0;  // inward radial derivative of the barrier at 1
};

// b(tau) = V + 2 Re(W^k) on the boundary and through harmonic extension at
// radii 0.5, 0.9, 0.99. vertex_block >= 0 means the barrier blocks outward
// extension in the -y direction. Requires d = m = 1.
BarrierReport pseudoconvex_barrier_check(const AnalyticDisc& disc, int k);

struct SweepReport {
  MatrixXd points;  // one sample per row: x0, w0_re, w0_im, r, z_re, z_im, w_re, w_im
  VectorXd singular_values;
  int jacobian_rank = -1;
  int expected_rank = 0;  // 2(d+m) - d + 1
  double gap_ratio = 0.0;
  double fd_step = 0.0;
  int failures = 0;
  bool stencil_ok = false;
};

// Samples Phi(w0, x0, r) = A_{(x0,w0)}(r) over |x0|,|w0| <= delta,
// r in [1-eps_r, 1], re-solving Bishop per base point with the disc's CR
// datum and t data. The Jacobian at (0,0,1) uses central differences of
// step fd_step (one sided in r). gap_ratio compares the smallest kept
// singular value against the largest discarded one (or against the rank
// threshold 1e-6*sigma_1 when nothing is discarded).
SweepReport sweep_manifold(const AnalyticDisc& disc, double delta, double eps_r,
                           int samples, double fd_step = 1e-4);

// v'' = G_N(-1) ... G_2(-1) G_1(-1) v', first link applied first
VectorXd chain_transport(const std::vector<MatrixField>& links, const VectorXd& v);

}  // namespace crdisc

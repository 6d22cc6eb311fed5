// Nonlinear Bishop-equation solver (Picard iteration with a Newton
// fallback), residual certification, the linear matrix Bishop equation for
// the transport matrix G, and the normal-bundle transport G(-1).
#pragma once

#include "crdisc/manifold.hpp"

#include <optional>

namespace crdisc {

enum class Regularity { F2alpha, C1gamma, Smooth };

std::string to_string(Regularity r);
Regularity regularity_from_string(const std::string& s);

// A solved disc A = (z, w) attached to the graph of h. U carries the
// x-component including the base offset, V = h(U, W, t) the y-component,
// W the CR component including the base offset. Index 0 is the vertex.
struct AnalyticDisc {
  CircleGrid grid;
  MatrixXd u;             // grid.n x d
  MatrixXd v;             // grid.n x d
  MatrixXcd w;            // grid.n x m
  std::optional<ArrayXd> t;
  ManifoldPoint base;
  GraphingFunctionPtr h;  // may be empty for discs loaded from JSON
  Regularity tag = Regularity::F2alpha;

  int d() const { return static_cast<int>(u.cols()); }
  int m() const { return static_cast<int>(w.cols()); }
  double t_at(int j) const { return t ? (*t)[j] : 0.0; }

  // holomorphic evaluation inside the disc; point = 1 returns the base
  VectorXcd at(Complex point) const;
};

struct SolveReport {
  int iterations = 0;
  std::vector<double> residual_history;  // sup-norm updates, then Newton residuals
  bool converged = false;
  double final_residual = 0.0;
  bool newton_used = false;
};

struct SolveError : std::runtime_error {
  SolveError(const std::string& msg, SolveReport rep)
      : std::runtime_error(msg), report(std::move(rep)) {}
  SolveReport report;
};

struct BishopOptions {
  double tol = 1e-12;
  int picard_max = 200;
  int newton_max = 20;
  std::optional<MatrixXd> initial_guess;  // defaults to U == x_o
};

// Solves U = x_o - T1(h(U, w_o + w_cr, t)) by Picard iteration from
// U == x_o, falling back to Newton with a finite-difference Jacobian when
// the contraction stalls. w_cr must vanish at the vertex; t, when present,
// must be nonnegative and vanish near the vertex. The CR datum is replaced
// by its discrete holomorphic projection (constant-corrected so that
// W(1) = w_o exactly) before solving, which realizes the standing
// assumption that w extends holomorphically to the disc.
std::pair<AnalyticDisc, SolveReport> solve_bishop(
    GraphingFunctionPtr h, const MatrixXcd& w_cr, const VectorXd& x_o,
    const VectorXcd& w_o, std::optional<ArrayXd> t_data = std::nullopt,
    const BishopOptions& opts = {});

// sup_j |U_j - (x_o - T1(h(U, W, t))_j)|, recomputed from the stored fields
double bishop_residual(const AnalyticDisc& disc);

// Residuals of the attachment invariants, for certification and tests.
struct DiscCheck {
  double base_error = 0.0;       // |A(1) - base|
  double attach_residual = 0.0;  // max_j |V_j - h(U_j, W_j, t_j)|
  double defect_uv = 0.0;        // holomorphic defect of U + iV
  double defect_w = 0.0;         // holomorphic defect of W
};
DiscCheck check_disc(const AnalyticDisc& disc);

// A d x d matrix-valued boundary function on a circle grid.
struct MatrixField {
  CircleGrid grid;
  std::vector<MatrixXd> values;

  const MatrixXd& at_minus_one() const { return values[grid.n / 2]; }
};

// Solves G = T1(G * d_x h(A)) + id entrywise; G(1) = id exactly. The
// solved field makes G * (d'r o A) extend holomorphically to the disc.
MatrixField solve_linear_bishop_G(const AnalyticDisc& disc);

// v at A(-1) carried to A(1): returns G(-1) * v.
VectorXd transport(const MatrixField& g, const VectorXd& v_at_q);

// JSON round trip. Schema (exact field names):
//   {"grid_N": int, "U": [[..]..], "V": [[..]..], "W_re": [[..]..],
//    "W_im": [[..]..], "t": [..]|null,
//    "base": {"x":[..],"y":[..],"w_re":[..],"w_im":[..]},
//    "regularity_tag": "F2alpha"|"C1gamma"|"smooth"}
// Loaded discs carry no graphing function; rebind with with_model.
std::string disc_to_json(const AnalyticDisc& disc);
AnalyticDisc disc_from_json(const std::string& text);
AnalyticDisc with_model(AnalyticDisc disc, GraphingFunctionPtr h);

}  // namespace crdisc

// Graphing-function models of generic submanifolds M = { y = h(x,w) },
// the sector model hypersurfaces, a numerical weighted-vanishing-order
// estimator, and the collar extension h(x,w,t) with d/dt h != 0.
#pragma once

#include "crdisc/circle.hpp"

#include <memory>
#include <optional>
#include <string>

namespace crdisc {

using Eigen::VectorXcd;
using Eigen::VectorXd;
using Eigen::VectorXi;

// A model h : R^d x C^m (x R_t) -> R^d with h(0) = 0 and dh(0) = 0,
// together with first-derivative oracles. Objects are immutable after
// construction and safe to share across threads.
class GraphingFunction {
 public:
  virtual ~GraphingFunction() = default;

  int codim() const { return d_; }
  int cr_dim() const { return m_; }
  bool has_collar() const { return collar_; }
  int smoothness_order() const { return smoothness_; }

  virtual VectorXd value(const VectorXd& x, const VectorXcd& w, double t = 0.0) const = 0;
  // Jacobian d h_j / d x_l, d x d
  virtual MatrixXd dx(const VectorXd& x, const VectorXcd& w, double t = 0.0) const = 0;
  // Wirtinger derivatives d h_j / d w_l, d x m
  virtual MatrixXcd dw(const VectorXd& x, const VectorXcd& w, double t = 0.0) const = 0;
  virtual MatrixXcd dwbar(const VectorXd& x, const VectorXcd& w, double t = 0.0) const {
    return dw(x, w, t).conjugate();
  }
  virtual VectorXd dt(const VectorXd& x, const VectorXcd& w, double t = 0.0) const {
    (void)x; (void)w; (void)t;
    return VectorXd::Zero(d_);
  }

 protected:
  GraphingFunction(int d, int m, int smoothness, bool collar)
      : d_(d), m_(m), smoothness_(smoothness), collar_(collar) {}
  int d_, m_, smoothness_;
  bool collar_;
};

using GraphingFunctionPtr = std::shared_ptr<const GraphingFunction>;

enum class Side { plus, minus };

// h == 0 on R^d x C^m.
GraphingFunctionPtr flat_model(int d = 1, int m = 1);

// The model hypersurface of parameter k: h(x, w) = |w|^k * profile(arg w)
// with profile 0 inside the inner sector, -2 cos(k arg w) outside the outer
// sector, and a quintic smoothstep bridge in between. side selects the
// sector pair: plus uses half-angles pi(1/2k + eps/2) and pi(1/2k + eps),
// minus uses pi(1/2k - eps/2) and pi/2k and additionally enforces
// h >= -(w^k + conj(w)^k). Requires k*eps < 1/4.
GraphingFunctionPtr model_sector_hypersurface(int k, double eps, Side side);

// One monomial coeff * x^x_exp * w^w_exp * conj(w)^wbar_exp of a
// polynomial model; coeff has one entry per component of h.
struct MonomialTerm {
  VectorXi x_exp;
  VectorXi w_exp;
  VectorXi wbar_exp;
  VectorXd coeff;
};

// Rejects constant or linear terms and coefficient sets whose w-part is not
// conjugation symmetric (h must be real-valued).
GraphingFunctionPtr polynomial_model(const std::vector<MonomialTerm>& terms);

// h(x,w,t) = h(x,w) + t*direction with |direction| = 1.
GraphingFunctionPtr extend_with_collar(GraphingFunctionPtr base, const VectorXd& direction);

// pointwise sum of two models over the same (d, m)
GraphingFunctionPtr model_sum(GraphingFunctionPtr a, GraphingFunctionPtr b);

struct ManifoldPoint {
  VectorXd x;
  VectorXd y;
  VectorXcd w;

  VectorXcd z() const {
    return x.cast<Complex>() + Complex(0.0, 1.0) * y.cast<Complex>();
  }
};

ManifoldPoint point_on(const GraphingFunction& h, const VectorXd& x, const VectorXcd& w);
double manifold_residual(const GraphingFunction& h, const ManifoldPoint& p);

struct OrderEstimate {
  int k_hat = 0;                  // order_infinity() when no mixed term found
  int leading_mixed_degree = -1;  // smallest mixed total degree, -1 if none
  double coefficient_magnitude = 0.0;

  bool finite() const;
  static int order_infinity();
};

// Least-squares Taylor fit of h(0, .) in (w, conj w) on a stencil of radius
// 1e-2; k_hat = 1 + the smallest total degree carrying a mixed coefficient
// of relative magnitude > 1e-8. Implemented for cr_dim == 1. A nonzero seed
// jitters the stencil angles (reproducibly).
OrderEstimate weighted_vanishing_order(const GraphingFunction& h, int max_degree,
                                       unsigned seed = 0);

// Jacobian of the defining function r = y - h(x,w) with respect to z:
// entry (j,l) = delta_jl/(2i) - (1/2) d h_j / d x_l. The point must lie on
// the manifold (residual <= 1e-9).
MatrixXcd defining_jacobian(const GraphingFunction& h, const ManifoldPoint& p);

// JSON descriptor of a model. Schema (exact field names):
//   {"type": "sector"|"polynomial"|"flat",
//    "k": int, "eps": double, "side": "plus"|"minus",      (sector)
//    "coeffs": [{"x":[..],"w":[..],"wbar":[..],"c":[..]}], (polynomial,
//               or extra terms added on top of a sector model)
//    "collar": {"direction": [..]},                        (optional)
//    "d": int, "m": int}                                   (flat, optional)
struct ModelSpec {
  std::string type = "flat";
  int k = 3;
  double eps = 0.05;
  Side side = Side::plus;
  std::vector<MonomialTerm> coeffs;
  std::optional<VectorXd> collar_direction;
  int d = 1;
  int m = 1;
};

ModelSpec model_from_json(const std::string& text);
std::string model_to_json(const ModelSpec& spec);
GraphingFunctionPtr build_model(const ModelSpec& spec);

}  // namespace crdisc

#include "crdisc/manifold.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>
#include <random>

namespace crdisc {

namespace {

double smoothstep5(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double smoothstep5_d(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}

class FlatModel final : public GraphingFunction {
 public:
  FlatModel(int d, int m) : GraphingFunction(d, m, std::numeric_limits<int>::max(), false) {}
  VectorXd value(const VectorXd&, const VectorXcd&, double) const override {
    return VectorXd::Zero(d_);
  }
  MatrixXd dx(const VectorXd&, const VectorXcd&, double) const override {
    return MatrixXd::Zero(d_, d_);
  }
  MatrixXcd dw(const VectorXd&, const VectorXcd&, double) const override {
    return MatrixXcd::Zero(d_, m_);
  }
};

class SectorModel final : public GraphingFunction {
 public:
  SectorModel(int k, double eps, Side side)
      : GraphingFunction(1, 1, k + 2, false), k_(k), eps_(eps), side_(side) {
    if (k < 2) throw std::invalid_argument("sector model: k must be >= 2");
    if (!(eps > 0.0) || k * eps >= 0.25)
      throw std::invalid_argument("sector model: require eps > 0 and k*eps < 1/4");
    if (side == Side::plus) {
      inner_ = kPi * (1.0 / (2.0 * k) + eps / 2.0);
      outer_ = kPi * (1.0 / (2.0 * k) + eps);
    } else {
      inner_ = kPi * (1.0 / (2.0 * k) - eps / 2.0);
      outer_ = kPi / (2.0 * k);
    }
    if (!(0.0 < inner_ && inner_ < outer_ && outer_ <= kPi))
      throw std::invalid_argument("sector model: sector half-angles out of range");
  }

  double profile(double a) const {  // a = |arg w|
    if (a <= inner_) return 0.0;
    const double g = -2.0 * std::cos(k_ * a);
    if (a >= outer_) return g;
    return smoothstep5((a - inner_) / (outer_ - inner_)) * g;
  }

  double profile_d(double a) const {
    if (a <= inner_) return 0.0;
    const double g = -2.0 * std::cos(k_ * a);
    const double gd = 2.0 * k_ * std::sin(k_ * a);
    if (a >= outer_) return gd;
    const double u = (a - inner_) / (outer_ - inner_);
    return smoothstep5_d(u) * g / (outer_ - inner_) + smoothstep5(u) * gd;
  }

  double eval1(Complex w) const {
    const double rho = std::abs(w);
    if (rho == 0.0) return 0.0;
    const double a = std::abs(std::arg(w));
    double v = std::pow(rho, k_) * profile(a);
    if (side_ == Side::minus) {
      const double floor_v = -2.0 * std::pow(rho, k_) * std::cos(k_ * std::arg(w));
      v = std::max(v, floor_v);
    }
    return v;
  }

  VectorXd value(const VectorXd&, const VectorXcd& w, double) const override {
    VectorXd out(1);
    out[0] = eval1(w[0]);
    return out;
  }
  MatrixXd dx(const VectorXd&, const VectorXcd&, double) const override {
    return MatrixXd::Zero(1, 1);
  }
  MatrixXcd dw(const VectorXd&, const VectorXcd& w, double) const override {
    MatrixXcd out(1, 1);
    const double rho = std::abs(w[0]);
    if (rho == 0.0) {
      out(0, 0) = 0.0;
      return out;
    }
    const double phi = std::arg(w[0]);
    const double a = std::abs(phi);
    double p = profile(a);
    double pd = (phi >= 0.0 ? 1.0 : -1.0) * profile_d(a);
    if (side_ == Side::minus) {
      const double floor_v = -2.0 * std::cos(k_ * phi);
      if (floor_v > p) {  // the minorant branch is active
        p = floor_v;
        pd = 2.0 * k_ * std::sin(k_ * phi);
      }
    }
    // Wirtinger derivative in polar form:
    // d/dw = e^{-i phi}/2 (d/d rho - (i/rho) d/d phi)
    const double rp = std::pow(rho, k_ - 1);
    const Complex e(std::cos(phi), -std::sin(phi));
    out(0, 0) = 0.5 * e * rp * Complex(k_ * p, -pd);
    return out;
  }

 private:
  int k_;
  double eps_, inner_, outer_;
  Side side_;
};

Complex ipow(Complex z, int e) {
  Complex acc(1.0, 0.0);
  for (int i = 0; i < e; ++i) acc *= z;
  return acc;
}

double rpow(double x, int e) {
  double acc = 1.0;
  for (int i = 0; i < e; ++i) acc *= x;
  return acc;
}

class PolynomialModel final : public GraphingFunction {
 public:
  explicit PolynomialModel(std::vector<MonomialTerm> terms, int d, int m)
      : GraphingFunction(d, m, std::numeric_limits<int>::max(), false),
        terms_(std::move(terms)) {}

  VectorXd value(const VectorXd& x, const VectorXcd& w, double) const override {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(d_);
    for (const auto& t : terms_) acc += t.coeff.cast<Complex>() * monomial(t, x, w);
    return acc.real();
  }

  MatrixXd dx(const VectorXd& x, const VectorXcd& w, double) const override {
    MatrixXcd acc = MatrixXcd::Zero(d_, d_);
    for (const auto& t : terms_)
      for (int l = 0; l < d_; ++l) {
        if (t.x_exp[l] == 0) continue;
        MonomialTerm red = t;
        red.x_exp[l] -= 1;
        acc.col(l) += static_cast<double>(t.x_exp[l]) * t.coeff.cast<Complex>() *
                      monomial(red, x, w);
      }
    return acc.real();
  }

  MatrixXcd dw(const VectorXd& x, const VectorXcd& w, double) const override {
    MatrixXcd acc = MatrixXcd::Zero(d_, m_);
    for (const auto& t : terms_)
      for (int l = 0; l < m_; ++l) {
        if (t.w_exp[l] == 0) continue;
        MonomialTerm red = t;
        red.w_exp[l] -= 1;
        acc.col(l) += static_cast<double>(t.w_exp[l]) * t.coeff.cast<Complex>() *
                      monomial(red, x, w);
      }
    return acc;
  }

  MatrixXcd dwbar(const VectorXd& x, const VectorXcd& w, double) const override {
    MatrixXcd acc = MatrixXcd::Zero(d_, m_);
    for (const auto& t : terms_)
      for (int l = 0; l < m_; ++l) {
        if (t.wbar_exp[l] == 0) continue;
        MonomialTerm red = t;
        red.wbar_exp[l] -= 1;
        acc.col(l) += static_cast<double>(t.wbar_exp[l]) * t.coeff.cast<Complex>() *
                      monomial(red, x, w);
      }
    return acc;
  }

 private:
  static Complex monomial(const MonomialTerm& t, const VectorXd& x, const VectorXcd& w) {
    Complex acc(1.0, 0.0);
    for (int i = 0; i < t.x_exp.size(); ++i) acc *= rpow(x[i], t.x_exp[i]);
    for (int i = 0; i < t.w_exp.size(); ++i) acc *= ipow(w[i], t.w_exp[i]);
    for (int i = 0; i < t.wbar_exp.size(); ++i) acc *= ipow(std::conj(w[i]), t.wbar_exp[i]);
    return acc;
  }

  std::vector<MonomialTerm> terms_;
};

class CollarModel final : public GraphingFunction {
 public:
  CollarModel(GraphingFunctionPtr base, VectorXd direction)
      : GraphingFunction(base->codim(), base->cr_dim(), base->smoothness_order(), true),
        base_(std::move(base)),
        dir_(std::move(direction)) {}

  VectorXd value(const VectorXd& x, const VectorXcd& w, double t) const override {
    return base_->value(x, w) + t * dir_;
  }
  MatrixXd dx(const VectorXd& x, const VectorXcd& w, double) const override {
    return base_->dx(x, w);
  }
  MatrixXcd dw(const VectorXd& x, const VectorXcd& w, double) const override {
    return base_->dw(x, w);
  }
  MatrixXcd dwbar(const VectorXd& x, const VectorXcd& w, double) const override {
    return base_->dwbar(x, w);
  }
  VectorXd dt(const VectorXd&, const VectorXcd&, double) const override { return dir_; }

 private:
  GraphingFunctionPtr base_;
  VectorXd dir_;
};

class SumModel final : public GraphingFunction {
 public:
  SumModel(GraphingFunctionPtr a, GraphingFunctionPtr b)
      : GraphingFunction(a->codim(), a->cr_dim(),
                         std::min(a->smoothness_order(), b->smoothness_order()),
                         a->has_collar() || b->has_collar()),
        a_(std::move(a)),
        b_(std::move(b)) {}

  VectorXd value(const VectorXd& x, const VectorXcd& w, double t) const override {
    return a_->value(x, w, t) + b_->value(x, w, t);
  }
  MatrixXd dx(const VectorXd& x, const VectorXcd& w, double t) const override {
    return a_->dx(x, w, t) + b_->dx(x, w, t);
  }
  MatrixXcd dw(const VectorXd& x, const VectorXcd& w, double t) const override {
    return a_->dw(x, w, t) + b_->dw(x, w, t);
  }
  MatrixXcd dwbar(const VectorXd& x, const VectorXcd& w, double t) const override {
    return a_->dwbar(x, w, t) + b_->dwbar(x, w, t);
  }
  VectorXd dt(const VectorXd& x, const VectorXcd& w, double t) const override {
    return a_->dt(x, w, t) + b_->dt(x, w, t);
  }

 private:
  GraphingFunctionPtr a_, b_;
};

void validate_terms(const std::vector<MonomialTerm>& terms, int d, int m) {
  for (const auto& t : terms) {
    if (t.x_exp.size() != d || t.coeff.size() != d || t.w_exp.size() != m ||
        t.wbar_exp.size() != m)
      throw std::invalid_argument("polynomial_model: exponent/coefficient shape mismatch");
    if (t.x_exp.minCoeff() < 0 || t.w_exp.minCoeff() < 0 || t.wbar_exp.minCoeff() < 0)
      throw std::invalid_argument("polynomial_model: negative exponent");
    const int total = t.x_exp.sum() + t.w_exp.sum() + t.wbar_exp.sum();
    if (total < 2)
      throw std::invalid_argument(
          "polynomial_model: constant and linear terms violate h(0)=0, dh(0)=0");
  }
  // reality: every term with w_exp != wbar_exp needs the conjugate mirror
  for (const auto& t : terms) {
    if (t.w_exp == t.wbar_exp) continue;
    bool found = false;
    for (const auto& s : terms) {
      if (s.x_exp == t.x_exp && s.w_exp == t.wbar_exp && s.wbar_exp == t.w_exp &&
          (s.coeff - t.coeff).cwiseAbs().maxCoeff() <= 1e-12) {
        found = true;
        break;
      }
    }
    if (!found)
      throw std::invalid_argument(
          "polynomial_model: coefficients are not conjugation symmetric, h would not be real");
  }
}

}  // namespace

GraphingFunctionPtr flat_model(int d, int m) { return std::make_shared<FlatModel>(d, m); }

GraphingFunctionPtr model_sector_hypersurface(int k, double eps, Side side) {
  return std::make_shared<SectorModel>(k, eps, side);
}

GraphingFunctionPtr polynomial_model(const std::vector<MonomialTerm>& terms) {
  if (terms.empty()) return flat_model(1, 1);
  const int d = static_cast<int>(terms[0].x_exp.size());
  const int m = static_cast<int>(terms[0].w_exp.size());
  validate_terms(terms, d, m);
  return std::make_shared<PolynomialModel>(terms, d, m);
}

GraphingFunctionPtr extend_with_collar(GraphingFunctionPtr base, const VectorXd& direction) {
  if (direction.size() != base->codim())
    throw std::invalid_argument("extend_with_collar: direction dimension mismatch");
  if (std::abs(direction.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("extend_with_collar: direction must be a unit vector");
  return std::make_shared<CollarModel>(std::move(base), direction);
}

GraphingFunctionPtr model_sum(GraphingFunctionPtr a, GraphingFunctionPtr b) {
  if (a->codim() != b->codim() || a->cr_dim() != b->cr_dim())
    throw std::invalid_argument("model_sum: dimension mismatch");
  return std::make_shared<SumModel>(std::move(a), std::move(b));
}

ManifoldPoint point_on(const GraphingFunction& h, const VectorXd& x, const VectorXcd& w) {
  ManifoldPoint p;
  p.x = x;
  p.w = w;
  p.y = h.value(x, w, 0.0);
  return p;
}

double manifold_residual(const GraphingFunction& h, const ManifoldPoint& p) {
  return (p.y - h.value(p.x, p.w, 0.0)).cwiseAbs().maxCoeff();
}

bool OrderEstimate::finite() const { return k_hat != order_infinity(); }
int OrderEstimate::order_infinity() { return std::numeric_limits<int>::max(); }

OrderEstimate weighted_vanishing_order(const GraphingFunction& h, int max_degree,
                                       unsigned seed) {
  if (h.cr_dim() != 1)
    throw std::invalid_argument("weighted_vanishing_order: implemented for cr_dim == 1");
  if (max_degree < 2)
    throw std::invalid_argument("weighted_vanishing_order: max_degree must be >= 2");
  if (max_degree > h.smoothness_order())
    throw std::invalid_argument("weighted_vanishing_order: max_degree exceeds smoothness");

  // real basis: Re(w^a wbar^b) and, for a > b, Im(w^a wbar^b), a+b in [2, D]
  struct Basis {
    int a, b;
    bool imag;
  };
  std::vector<Basis> basis;
  for (int deg = 2; deg <= max_degree; ++deg)
    for (int a = deg; a >= (deg + 1) / 2; --a) {
      const int b = deg - a;
      basis.push_back({a, b, false});
      if (a > b) basis.push_back({a, b, true});
    }
  const int np = static_cast<int>(basis.size());

  const double radius = 1e-2;
  const std::array<double, 3> rads = {0.5 * radius, 0.75 * radius, radius};
  const int nang = std::max(16, 4 * (max_degree + 1));
  const int rows = static_cast<int>(rads.size()) * nang;
  if (rows < 2 * np)
    throw std::invalid_argument("weighted_vanishing_order: stencil too small for max_degree");

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);

  const VectorXd x0 = VectorXd::Zero(h.codim());
  MatrixXd a(rows, np);
  MatrixXd y(rows, h.codim());
  int row = 0;
  for (double r : rads)
    for (int j = 0; j < nang; ++j) {
      double ang = 2.0 * kPi * j / nang;
      if (seed != 0) ang += jitter(rng) * 2.0 * kPi / nang;
      const Complex w = r * Complex(std::cos(ang), std::sin(ang));
      VectorXcd wv(1);
      wv[0] = w;
      y.row(row) = h.value(x0, wv, 0.0).transpose();
      for (int p = 0; p < np; ++p) {
        const Complex mono = ipow(w, basis[p].a) * ipow(std::conj(w), basis[p].b);
        a(row, p) = basis[p].imag ? mono.imag() : mono.real();
      }
      ++row;
    }

  // column scaling keeps the high-degree monomials at radius 1e-2 visible
  VectorXd colscale(np);
  for (int p = 0; p < np; ++p) {
    colscale[p] = a.col(p).norm();
    if (colscale[p] <= 0.0) colscale[p] = 1.0;
    a.col(p) /= colscale[p];
  }
  Eigen::ColPivHouseholderQR<MatrixXd> qr(a);
  if (qr.rank() < np)
    throw std::runtime_error("weighted_vanishing_order: ill-conditioned stencil fit");
  MatrixXd sol(np, h.codim());
  for (int c = 0; c < h.codim(); ++c)
    sol.col(c) = qr.solve(y.col(c)).cwiseQuotient(colscale);

  // coefficient magnitude per (a,b): combine Re/Im partners
  double max_mag = 0.0;
  std::vector<double> mag(np, 0.0);
  for (int p = 0; p < np; ++p) {
    double m2 = sol.row(p).cwiseAbs().maxCoeff();
    if (basis[p].imag) continue;
    // look for the matching imag partner (next entry when a > b)
    if (p + 1 < np && basis[p + 1].imag && basis[p + 1].a == basis[p].a &&
        basis[p + 1].b == basis[p].b)
      m2 = std::hypot(m2, sol.row(p + 1).cwiseAbs().maxCoeff());
    mag[p] = m2;
    max_mag = std::max(max_mag, m2);
  }

  OrderEstimate est;
  est.k_hat = OrderEstimate::order_infinity();
  if (max_mag <= 0.0) return est;
  for (int deg = 2; deg <= max_degree && !est.finite(); ++deg)
    for (int p = 0; p < np; ++p) {
      if (basis[p].imag || basis[p].a + basis[p].b != deg) continue;
      if (basis[p].b >= 1 && mag[p] > 1e-8 * max_mag) {
        est.k_hat = deg + 1;
        est.leading_mixed_degree = deg;
        est.coefficient_magnitude = mag[p];
        break;
      }
    }
  return est;
}

MatrixXcd defining_jacobian(const GraphingFunction& h, const ManifoldPoint& p) {
  if (manifold_residual(h, p) > 1e-9)
    throw std::invalid_argument("defining_jacobian: point is not on the manifold");
  const int d = h.codim();
  const MatrixXd hx = h.dx(p.x, p.w, 0.0);
  MatrixXcd out(d, d);
  const Complex half_over_i = Complex(0.0, -0.5);  // 1/(2i)
  for (int j = 0; j < d; ++j)
    for (int l = 0; l < d; ++l)
      out(j, l) = (j == l ? half_over_i : Complex(0.0, 0.0)) - 0.5 * hx(j, l);
  return out;
}

namespace {

using nlohmann::json;

json term_to_json(const MonomialTerm& t) {
  json j;
  j["x"] = std::vector<int>(t.x_exp.data(), t.x_exp.data() + t.x_exp.size());
  j["w"] = std::vector<int>(t.w_exp.data(), t.w_exp.data() + t.w_exp.size());
  j["wbar"] = std::vector<int>(t.wbar_exp.data(), t.wbar_exp.data() + t.wbar_exp.size());
  j["c"] = std::vector<double>(t.coeff.data(), t.coeff.data() + t.coeff.size());
  return j;
}

MonomialTerm term_from_json(const json& j) {
  MonomialTerm t;
  const auto xs = j.at("x").get<std::vector<int>>();
  const auto ws = j.at("w").get<std::vector<int>>();
  const auto wb = j.at("wbar").get<std::vector<int>>();
  const auto cs = j.at("c").get<std::vector<double>>();
  t.x_exp = Eigen::Map<const VectorXi>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  t.w_exp = Eigen::Map<const VectorXi>(ws.data(), static_cast<Eigen::Index>(ws.size()));
  t.wbar_exp = Eigen::Map<const VectorXi>(wb.data(), static_cast<Eigen::Index>(wb.size()));
  t.coeff = Eigen::Map<const VectorXd>(cs.data(), static_cast<Eigen::Index>(cs.size()));
  return t;
}

}  // namespace

ModelSpec model_from_json(const std::string& text) {
  const json j = json::parse(text);
  ModelSpec spec;
  spec.type = j.at("type").get<std::string>();
  if (spec.type != "sector" && spec.type != "polynomial" && spec.type != "flat")
    throw std::invalid_argument("model_from_json: unknown type " + spec.type);
  if (j.contains("k")) spec.k = j["k"].get<int>();
  if (j.contains("eps")) spec.eps = j["eps"].get<double>();
  if (j.contains("side")) {
    const auto s = j["side"].get<std::string>();
    if (s == "plus") spec.side = Side::plus;
    else if (s == "minus") spec.side = Side::minus;
    else throw std::invalid_argument("model_from_json: side must be plus or minus");
  }
  if (j.contains("coeffs"))
    for (const auto& t : j["coeffs"]) spec.coeffs.push_back(term_from_json(t));
  if (j.contains("collar")) {
    const auto dir = j["collar"].at("direction").get<std::vector<double>>();
    spec.collar_direction =
        Eigen::Map<const VectorXd>(dir.data(), static_cast<Eigen::Index>(dir.size()));
  }
  if (j.contains("d")) spec.d = j["d"].get<int>();
  if (j.contains("m")) spec.m = j["m"].get<int>();
  return spec;
}

std::string model_to_json(const ModelSpec& spec) {
  json j;
  j["type"] = spec.type;
  if (spec.type == "sector") {
    j["k"] = spec.k;
    j["eps"] = spec.eps;
    j["side"] = spec.side == Side::plus ? "plus" : "minus";
  }
  if (spec.type == "flat") {
    j["d"] = spec.d;
    j["m"] = spec.m;
  }
  if (!spec.coeffs.empty()) {
    j["coeffs"] = json::array();
    for (const auto& t : spec.coeffs) j["coeffs"].push_back(term_to_json(t));
  }
  if (spec.collar_direction) {
    j["collar"]["direction"] = std::vector<double>(
        spec.collar_direction->data(),
        spec.collar_direction->data() + spec.collar_direction->size());
  }
  return j.dump(2);
}

GraphingFunctionPtr build_model(const ModelSpec& spec) {
  GraphingFunctionPtr h;
  if (spec.type == "sector") {
    h = model_sector_hypersurface(spec.k, spec.eps, spec.side);
    if (!spec.coeffs.empty()) h = model_sum(h, polynomial_model(spec.coeffs));
  } else if (spec.type == "polynomial") {
    if (spec.coeffs.empty())
      throw std::invalid_argument("build_model: polynomial model needs coeffs");
    h = polynomial_model(spec.coeffs);
  } else if (spec.type == "flat") {
    h = flat_model(spec.d, spec.m);
  } else {
    throw std::invalid_argument("build_model: unknown type " + spec.type);
  }
  if (spec.collar_direction) h = extend_with_collar(h, *spec.collar_direction);
  return h;
}

}  // namespace crdisc

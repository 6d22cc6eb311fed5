#include "crdisc/deformation.hpp"

#include <cmath>

namespace crdisc {

namespace {

double smoothstep5(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double arc_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

// inward radial derivative (toward the interior) of the harmonic extension
double inward_vertex_derivative(const ArrayXd& f, double gamma) {
  return -fit_radial_derivative(f, gamma).outward;
}

}  // namespace

ArrayXd bump_chi(const BumpSpec& spec, const CircleGrid& grid) {
  if (!(spec.width > 0.0 && spec.width < kPi / 2.0))
    throw std::invalid_argument("bump_chi: width must lie in (0, pi/2)");
  ArrayXd chi(grid.n);
  for (int j = 0; j < grid.n; ++j) {
    const double d = arc_distance(grid.theta[j], spec.center);
    if (d <= spec.width / 2.0)
      chi[j] = 1.0;
    else if (d >= spec.width)
      chi[j] = 0.0;
    else
      chi[j] = smoothstep5((spec.width - d) / (spec.width / 2.0));
  }
  return chi;
}

DeformationFamily deform_family(GraphingFunctionPtr h_collar, const MatrixXcd& w_cr,
                                const BumpSpec& bump, const std::vector<double>& etas) {
  if (!h_collar->has_collar())
    throw std::invalid_argument("deform_family: model has no collar direction");
  if (etas.empty() || etas[0] != 0.0)
    throw std::invalid_argument("deform_family: etas must start with 0");
  for (double e : etas)
    if (e < 0.0) throw std::invalid_argument("deform_family: etas must be nonnegative");

  DeformationFamily fam;
  fam.etas = etas;
  fam.bump = bump;
  const CircleGrid grid = make_grid(static_cast<int>(w_cr.rows()));
  fam.chi = bump_chi(bump, grid);
  const VectorXd x0 = VectorXd::Zero(h_collar->codim());
  const VectorXcd w0 = VectorXcd::Zero(h_collar->cr_dim());
  fam.collar_direction =
      h_collar->dt(x0, w0, 0.0);

  for (double eta : etas) {
    std::optional<ArrayXd> t_data;
    if (eta > 0.0) t_data = ArrayXd(eta * fam.chi);
    try {
      auto [disc, rep] = solve_bishop(h_collar, w_cr, x0, w0, std::move(t_data));
      fam.discs.push_back(std::move(disc));
    } catch (const SolveError& err) {
      throw SolveError("deform_family: solve failed at eta = " + std::to_string(eta) +
                           " (" + err.what() + ")",
                       err.report);
    }
  }
  // all members share the CR data by construction; keep them bitwise equal
  for (auto& disc : fam.discs) disc.w = fam.discs[0].w;
  return fam;
}

VectorXd normal_radial_derivative(const AnalyticDisc& disc, double gamma) {
  if (disc.tag == Regularity::F2alpha)
    throw std::invalid_argument(
        "normal_radial_derivative: disc is only F2alpha regular at the vertex");
  VectorXd out(disc.d());
  for (int c = 0; c < disc.d(); ++c)
    out[c] = radial_derivative_at_one(ArrayXd(disc.v.col(c).array()), gamma);
  return out;
}

Eq103Report verify_eq103(const DeformationFamily& family, double gamma) {
  int nonzero = 0;
  for (double e : family.etas)
    if (e > 0.0) ++nonzero;
  if (nonzero < 3)
    throw std::invalid_argument("verify_eq103: need at least 3 nonzero etas");

  const AnalyticDisc& base = family.discs[0];
  const int d = base.d();

  // inward vertex response per disc, with the base response subtracted so
  // only the deformation's first-order contribution remains
  VectorXd base_resp(d);
  for (int c = 0; c < d; ++c)
    base_resp[c] = inward_vertex_derivative(ArrayXd(base.v.col(c).array()), gamma);

  double sum_eta2 = 0.0;
  VectorXd acc = VectorXd::Zero(d);
  for (size_t i = 0; i < family.etas.size(); ++i) {
    const double eta = family.etas[i];
    if (eta <= 0.0) continue;
    VectorXd resp(d);
    for (int c = 0; c < d; ++c)
      resp[c] =
          inward_vertex_derivative(ArrayXd(family.discs[i].v.col(c).array()), gamma) -
          base_resp[c];
    acc += eta * resp;
    sum_eta2 += eta * eta;
  }

  Eq103Report rep;
  rep.slope = acc / sum_eta2;
  rep.bump_response = inward_vertex_derivative(family.chi, gamma);

  const MatrixField g = solve_linear_bishop_G(base);
  const int mid = base.grid.n / 2;
  const VectorXd dt_at_q = base.h->dt(base.u.row(mid).transpose(),
                                      base.w.row(mid).transpose(), base.t_at(mid));
  rep.reference = transport(g, dt_at_q);

  const double slope_norm = rep.slope.norm();
  const double ref_norm = rep.reference.norm();
  if (slope_norm < 1e-12) {
    rep.degenerate = true;
    return rep;
  }
  const VectorXd normalized = rep.slope / rep.bump_response;
  rep.rel_error = (normalized - rep.reference).norm() / ref_norm;
  rep.direction_error = (rep.slope / slope_norm - rep.reference / ref_norm).norm();
  rep.magnitude_ratio = normalized.norm() / ref_norm;
  return rep;
}

BarrierReport pseudoconvex_barrier_check(const AnalyticDisc& disc, int k) {
  if (disc.d() != 1 || disc.m() != 1)
    throw std::invalid_argument("pseudoconvex_barrier_check: needs d = 1, m = 1 geometry");
  const int n = disc.grid.n;
  ArrayXd b(n);
  for (int j = 0; j < n; ++j) {
    Complex wk(1.0, 0.0);
    for (int i = 0; i < k; ++i) wk *= disc.w(j, 0);
    b[j] = disc.v(j, 0) + 2.0 * wk.real();
  }

  BarrierReport rep;
  rep.boundary_min = b.minCoeff();

  const Spectrum s = fourier_coeffs(b);
  double interior = std::numeric_limits<double>::infinity();
  for (double r : {0.5, 0.9, 0.99}) {
    Spectrum damped = s;
    for (int kk = 0; kk < n; ++kk)
      damped.c[kk] *= std::pow(r, std::abs(damped.mode(kk)));
    interior = std::min(interior, synthesize(damped).real().minCoeff());
  }
  rep.interior_min = interior;

  rep.vertex_block = -fit_radial_derivative(b, 0.5).outward;
  return rep;
}

SweepReport sweep_manifold(const AnalyticDisc& disc, double delta, double eps_r,
                           int samples, double fd_step) {
  if (!disc.h) throw std::invalid_argument("sweep_manifold: disc has no model bound");
  const int d = disc.d(), m = disc.m();
  const int in_dim = 2 * m + d + 1;
  const int out_dim = 2 * (d + m);

  MatrixXcd w_cr = disc.w;
  for (int c = 0; c < m; ++c) w_cr.col(c).array() -= disc.base.w[c];

  auto phi = [&](const VectorXd& x0, const VectorXcd& w0, double r) {
    auto [moved, rep] = solve_bishop(disc.h, w_cr, x0, w0, disc.t);
    const VectorXcd val = moved.at(Complex(r, 0.0));
    VectorXd out(out_dim);
    for (int c = 0; c < d + m; ++c) {
      out[2 * c] = val[c].real();
      out[2 * c + 1] = val[c].imag();
    }
    return out;
  };

  SweepReport rep;
  rep.expected_rank = 2 * m + d + 1;
  rep.fd_step = fd_step;

  // deterministic product lattice over (x0, w0, r), truncated at samples
  const int axes = in_dim;
  int per_axis = 1;
  while (std::pow(per_axis + 1, axes) <= samples) ++per_axis;
  per_axis = std::max(per_axis, 1);
  std::vector<VectorXd> lattice;
  std::vector<int> idx(axes, 0);
  while (static_cast<int>(lattice.size()) < samples) {
    VectorXd q(axes);
    for (int a = 0; a < axes; ++a) {
      const double frac = per_axis == 1 ? 0.5 : static_cast<double>(idx[a]) / (per_axis - 1);
      q[a] = a < axes - 1 ? -delta + 2.0 * delta * frac : 1.0 - eps_r + eps_r * frac;
    }
    lattice.push_back(q);
    int a = 0;
    while (a < axes && ++idx[a] == per_axis) idx[a++] = 0;
    if (a == axes) break;
  }

  std::vector<VectorXd> rows;
  for (const auto& q : lattice) {
    VectorXd x0(d);
    VectorXcd w0(m);
    for (int c = 0; c < d; ++c) x0[c] = q[2 * m + c];
    for (int c = 0; c < m; ++c) w0[c] = Complex(q[2 * c], q[2 * c + 1]);
    const double r = q[axes - 1];
    try {
      const VectorXd val = phi(x0, w0, r);
      VectorXd row(d + 2 * m + 1 + out_dim);
      int at = 0;
      for (int c = 0; c < d; ++c) row[at++] = x0[c];
      for (int c = 0; c < m; ++c) {
        row[at++] = w0[c].real();
        row[at++] = w0[c].imag();
      }
      row[at++] = r;
      row.tail(out_dim) = val;
      rows.push_back(row);
    } catch (const SolveError&) {
      ++rep.failures;
    }
  }
  rep.points.resize(static_cast<Eigen::Index>(rows.size()),
                    rows.empty() ? 0 : rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) rep.points.row(static_cast<Eigen::Index>(i)) = rows[i];

  // numerical Jacobian at (0, 0, 1)
  MatrixXd jac(out_dim, in_dim);
  try {
    const VectorXd x0 = VectorXd::Zero(d);
    const VectorXcd w0 = VectorXcd::Zero(m);
    for (int c = 0; c < m; ++c) {
      for (int part = 0; part < 2; ++part) {
        VectorXcd wp = w0, wm = w0;
        const Complex dw = part == 0 ? Complex(fd_step, 0.0) : Complex(0.0, fd_step);
        wp[c] += dw;
        wm[c] -= dw;
        jac.col(2 * c + part) = (phi(x0, wp, 1.0) - phi(x0, wm, 1.0)) / (2.0 * fd_step);
      }
    }
    for (int c = 0; c < d; ++c) {
      VectorXd xp = x0, xm = x0;
      xp[c] += fd_step;
      xm[c] -= fd_step;
      jac.col(2 * m + c) = (phi(xp, w0, 1.0) - phi(xm, w0, 1.0)) / (2.0 * fd_step);
    }
    // Phi lives on r <= 1 only, one-sided difference at the boundary
    jac.col(in_dim - 1) = (phi(x0, w0, 1.0) - phi(x0, w0, 1.0 - fd_step)) / fd_step;
    rep.stencil_ok = true;
  } catch (const SolveError&) {
    rep.stencil_ok = false;
    return rep;
  }

  Eigen::JacobiSVD<MatrixXd> svd(jac);
  rep.singular_values = svd.singularValues();
  const double smax = rep.singular_values[0];
  int rank = 0;
  for (Eigen::Index i = 0; i < rep.singular_values.size(); ++i)
    if (rep.singular_values[i] > 1e-6 * smax) ++rank;
  rep.jacobian_rank = rank;
  if (rank < rep.singular_values.size())
    rep.gap_ratio = rep.singular_values[rank - 1] / rep.singular_values[rank];
  else
    rep.gap_ratio = rep.singular_values[rank - 1] / (1e-6 * smax);
  return rep;
}

VectorXd chain_transport(const std::vector<MatrixField>& links, const VectorXd& v) {
  VectorXd cur = v;
  for (const auto& g : links) cur = transport(g, cur);
  return cur;
}

}  // namespace crdisc

#include "crdisc/bishop.hpp"

#include <json.hpp>

#include <cmath>

namespace crdisc {

namespace {

// holomorphic projection of the CR datum: drop negative modes columnwise,
// then shift by a constant so the vertex value is restored exactly
MatrixXcd project_cr_data(const MatrixXcd& w_full) {
  const int n = static_cast<int>(w_full.rows());
  MatrixXcd out(n, w_full.cols());
  for (Eigen::Index c = 0; c < w_full.cols(); ++c) {
    Spectrum s = fourier_coeffs(ArrayXcd(w_full.col(c).array()));
    for (int k = 0; k < n; ++k)
      if (s.mode(k) < 0) s.c[k] = 0.0;
    ArrayXcd col = synthesize(s);
    col += w_full(0, c) - col[0];
    col[0] = w_full(0, c);
    out.col(c) = col.matrix();
  }
  return out;
}

MatrixXd eval_boundary(const GraphingFunction& h, const MatrixXd& u, const MatrixXcd& w,
                       const std::optional<ArrayXd>& t) {
  const int n = static_cast<int>(u.rows());
  MatrixXd g(n, h.codim());
  for (int j = 0; j < n; ++j)
    g.row(j) = h.value(u.row(j).transpose(), w.row(j).transpose(),
                       t ? (*t)[j] : 0.0)
                   .transpose();
  return g;
}

// spectral tail energy of the CR datum relative to its total, used to tag
// band-limited (effectively smooth) data
double cr_tail_fraction(const MatrixXcd& w, const VectorXcd& w_o) {
  double tail = 0.0, total = 0.0;
  const int n = static_cast<int>(w.rows());
  for (Eigen::Index c = 0; c < w.cols(); ++c) {
    ArrayXcd col = w.col(c).array() - w_o[c];
    const Spectrum s = fourier_coeffs(col);
    for (int k = 0; k < n; ++k) {
      const double e = std::norm(s.c[k]);
      total += e;
      if (std::abs(s.mode(k)) > n / 3) tail += e;
    }
  }
  return total > 0.0 ? std::sqrt(tail / total) : 0.0;
}

struct T1Kernel {
  // T1(f)[i] = sum_l (k[(i-l) mod n] - k[(n-l) mod n]) f[l]
  ArrayXd k;

  explicit T1Kernel(int n) {
    ArrayXd delta = ArrayXd::Zero(n);
    delta[0] = 1.0;
    // conjugate of the delta without the vertex normalization
    Spectrum s = fourier_coeffs(delta);
    s.c[n / 2] = 0.0;
    for (int kk = 0; kk < n; ++kk) {
      const int m = s.mode(kk);
      if (m > 0) s.c[kk] *= Complex(0.0, -1.0);
      else if (m < 0) s.c[kk] *= Complex(0.0, 1.0);
      else s.c[kk] = 0.0;
    }
    k = synthesize(s).real();
  }
};

}  // namespace

std::string to_string(Regularity r) {
  switch (r) {
    case Regularity::F2alpha: return "F2alpha";
    case Regularity::C1gamma: return "C1gamma";
    case Regularity::Smooth: return "smooth";
  }
  return "F2alpha";
}

Regularity regularity_from_string(const std::string& s) {
  if (s == "F2alpha") return Regularity::F2alpha;
  if (s == "C1gamma") return Regularity::C1gamma;
  if (s == "smooth") return Regularity::Smooth;
  throw std::invalid_argument("unknown regularity tag " + s);
}

VectorXcd AnalyticDisc::at(Complex point) const {
  const int dd = d(), mm = m();
  VectorXcd out(dd + mm);
  if (point == Complex(1.0, 0.0)) {
    for (int c = 0; c < dd; ++c) out[c] = Complex(u(0, c), v(0, c));
    for (int c = 0; c < mm; ++c) out[dd + c] = w(0, c);
    return out;
  }
  for (int c = 0; c < dd; ++c) {
    const double ur = harmonic_extension(ArrayXd(u.col(c).array()), point);
    const double vr = harmonic_extension(ArrayXd(v.col(c).array()), point);
    out[c] = Complex(ur, vr);
  }
  for (int c = 0; c < mm; ++c)
    out[dd + c] = harmonic_extension(ArrayXcd(w.col(c).array()), point);
  return out;
}

std::pair<AnalyticDisc, SolveReport> solve_bishop(GraphingFunctionPtr h,
                                                  const MatrixXcd& w_cr,
                                                  const VectorXd& x_o,
                                                  const VectorXcd& w_o,
                                                  std::optional<ArrayXd> t_data,
                                                  const BishopOptions& opts) {
  const int n = static_cast<int>(w_cr.rows());
  const int d = h->codim(), m = h->cr_dim();
  if (w_cr.cols() != m || x_o.size() != d || w_o.size() != m)
    throw std::invalid_argument("solve_bishop: dimension mismatch with the model");
  if (w_cr.row(0).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("solve_bishop: CR datum must vanish at the vertex");
  if (t_data) {
    if (t_data->size() != n)
      throw std::invalid_argument("solve_bishop: t data length mismatch");
    if (t_data->minCoeff() < 0.0)
      throw std::invalid_argument("solve_bishop: t data must be nonnegative");
    if (!h->has_collar())
      throw std::invalid_argument("solve_bishop: t data requires a collar model");
    // must vanish in a fixed neighborhood of the vertex
    const int guard = std::max(1, n / 32);
    for (int j = -guard; j <= guard; ++j)
      if ((*t_data)[(j + n) % n] != 0.0)
        throw std::invalid_argument("solve_bishop: t data must vanish near tau = 1");
  }

  CircleGrid grid = make_grid(n);
  MatrixXcd w_full(n, m);
  for (int c = 0; c < m; ++c) w_full.col(c) = w_cr.col(c).array() + w_o[c];
  w_full = project_cr_data(w_full);

  SolveReport rep;
  MatrixXd u;
  if (opts.initial_guess) {
    if (opts.initial_guess->rows() != n || opts.initial_guess->cols() != d)
      throw std::invalid_argument("solve_bishop: initial guess shape mismatch");
    u = *opts.initial_guess;
  } else {
    u = MatrixXd::Zero(n, d);
    u.rowwise() = x_o.transpose();
  }

  auto picard_map = [&](const MatrixXd& cur) {
    MatrixXd g = eval_boundary(*h, cur, w_full, t_data);
    MatrixXd next = -hilbert_t1(g);
    next.rowwise() += x_o.transpose();
    return next;
  };

  bool done = false;
  int grow_streak = 0;
  for (int it = 0; it < opts.picard_max && !done; ++it) {
    const MatrixXd next = picard_map(u);
    const double upd = (next - u).cwiseAbs().maxCoeff();
    rep.residual_history.push_back(upd);
    ++rep.iterations;
    u = next;
    if (upd <= opts.tol) done = true;
    // divergence watch: stop wasting iterations once updates keep growing
    const auto hist = rep.residual_history.size();
    if (hist >= 2 && rep.residual_history[hist - 1] > rep.residual_history[hist - 2])
      ++grow_streak;
    else
      grow_streak = 0;
    if (grow_streak >= 5 && it >= 8) break;
  }

  if (!done) {
    // Newton on F(u) = u - x_o + T1(h(u, w, t)); Jacobian assembled from a
    // finite-difference linearization of h and the explicit T1 kernel
    rep.newton_used = true;
    const T1Kernel ker(n);
    const int nd = n * d;
    Eigen::PartialPivLU<MatrixXd> lu;
    bool have_factor = false;
    double last_res = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opts.newton_max && !done; ++it) {
      MatrixXd g = eval_boundary(*h, u, w_full, t_data);
      MatrixXd f = u + hilbert_t1(g);
      f.rowwise() -= x_o.transpose();
      const double res = f.cwiseAbs().maxCoeff();
      rep.residual_history.push_back(res);
      ++rep.iterations;
      if (res <= opts.tol) {
        done = true;
        break;
      }
      if (!have_factor || res > 0.5 * last_res) {
        MatrixXd jac = MatrixXd::Identity(nd, nd);
        const double fd = 1e-7 * std::max(1.0, u.cwiseAbs().maxCoeff());
        for (int j = 0; j < n; ++j) {
          const VectorXcd wj = w_full.row(j).transpose();
          const double tj = t_data ? (*t_data)[j] : 0.0;
          const VectorXd base_val = h->value(u.row(j).transpose(), wj, tj);
          for (int c = 0; c < d; ++c) {
            VectorXd xp = u.row(j).transpose();
            xp[c] += fd;
            const VectorXd dcol = (h->value(xp, wj, tj) - base_val) / fd;
            for (int i = 0; i < n; ++i) {
              const double theta_w = ker.k[(i - j + n) % n] - ker.k[(n - j) % n];
              if (theta_w == 0.0) continue;
              for (int a = 0; a < d; ++a) jac(i + n * a, j + n * c) += theta_w * dcol[a];
            }
          }
        }
        lu.compute(jac);
        have_factor = true;
      }
      last_res = res;
      VectorXd rhs(nd);
      for (int c = 0; c < d; ++c) rhs.segment(n * c, n) = f.col(c);
      const VectorXd step = lu.solve(rhs);
      for (int c = 0; c < d; ++c) u.col(c) -= step.segment(n * c, n);
    }
  }

  {
    MatrixXd g = eval_boundary(*h, u, w_full, t_data);
    MatrixXd f = u + hilbert_t1(g);
    f.rowwise() -= x_o.transpose();
    rep.final_residual = f.cwiseAbs().maxCoeff();
    rep.converged = rep.final_residual <= 10.0 * opts.tol || done;
  }
  if (!rep.converged)
    throw SolveError("solve_bishop: no convergence after " +
                         std::to_string(rep.iterations) + " iterations, residual " +
                         std::to_string(rep.final_residual),
                     rep);

  AnalyticDisc disc;
  disc.grid = std::move(grid);
  disc.u = u;
  disc.v = eval_boundary(*h, u, w_full, t_data);
  disc.w = w_full;
  disc.t = std::move(t_data);
  disc.base = point_on(*h, x_o, w_o);
  disc.h = std::move(h);
  const bool origin = x_o.cwiseAbs().maxCoeff() == 0.0 && w_o.cwiseAbs().maxCoeff() == 0.0;
  if (cr_tail_fraction(disc.w, w_o) <= 1e-12)
    disc.tag = Regularity::Smooth;
  else
    disc.tag = origin ? Regularity::C1gamma : Regularity::F2alpha;
  return {std::move(disc), std::move(rep)};
}

double bishop_residual(const AnalyticDisc& disc) {
  if (!disc.h) throw std::invalid_argument("bishop_residual: disc has no model bound");
  MatrixXd g = eval_boundary(*disc.h, disc.u, disc.w, disc.t);
  MatrixXd f = disc.u + hilbert_t1(g);
  f.rowwise() -= disc.base.x.transpose();
  return f.cwiseAbs().maxCoeff();
}

DiscCheck check_disc(const AnalyticDisc& disc) {
  DiscCheck out;
  double be = 0.0;
  for (int c = 0; c < disc.d(); ++c) {
    be = std::max(be, std::abs(disc.u(0, c) - disc.base.x[c]));
    be = std::max(be, std::abs(disc.v(0, c) - disc.base.y[c]));
  }
  for (int c = 0; c < disc.m(); ++c)
    be = std::max(be, std::abs(disc.w(0, c) - disc.base.w[c]));
  out.base_error = be;

  if (disc.h) {
    const MatrixXd g = eval_boundary(*disc.h, disc.u, disc.w, disc.t);
    out.attach_residual = (disc.v - g).cwiseAbs().maxCoeff();
  }

  double duv = 0.0;
  for (int c = 0; c < disc.d(); ++c) {
    ArrayXcd z = disc.u.col(c).array().cast<Complex>() +
                 Complex(0.0, 1.0) * disc.v.col(c).array().cast<Complex>();
    duv = std::max(duv, holomorphic_defect(z));
  }
  out.defect_uv = duv;

  double dw = 0.0;
  for (int c = 0; c < disc.m(); ++c)
    dw = std::max(dw, holomorphic_defect(ArrayXcd(disc.w.col(c).array())));
  out.defect_w = dw;
  return out;
}

MatrixField solve_linear_bishop_G(const AnalyticDisc& disc) {
  if (!disc.h) throw std::invalid_argument("solve_linear_bishop_G: disc has no model bound");
  const int n = disc.grid.n;
  const int d = disc.d();
  std::vector<MatrixXd> hx(n);
  for (int j = 0; j < n; ++j)
    hx[j] = disc.h->dx(disc.u.row(j).transpose(), disc.w.row(j).transpose(), disc.t_at(j));

  std::vector<MatrixXd> g(n, MatrixXd::Identity(d, d));
  std::vector<MatrixXd> prod(n);
  double prev_upd = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 500; ++it) {
    for (int j = 0; j < n; ++j) prod[j] = g[j] * hx[j];
    std::vector<MatrixXd> t1 = hilbert_t1(prod);
    double upd = 0.0;
    for (int j = 0; j < n; ++j) {
      MatrixXd next = t1[j] + MatrixXd::Identity(d, d);
      upd = std::max(upd, (next - g[j]).cwiseAbs().maxCoeff());
      g[j] = std::move(next);
    }
    if (upd <= 1e-12) {
      MatrixField out;
      out.grid = disc.grid;
      out.values = std::move(g);
      return out;
    }
    if (it > 10 && upd > prev_upd) {
      SolveReport rep;
      rep.iterations = it + 1;
      rep.final_residual = upd;
      throw SolveError(
          "solve_linear_bishop_G: Picard map is not contracting (update ratio ~" +
              std::to_string(upd / prev_upd) + ")",
          rep);
    }
    prev_upd = upd;
  }
  SolveReport rep;
  rep.iterations = 500;
  rep.final_residual = prev_upd;
  throw SolveError("solve_linear_bishop_G: no convergence in 500 iterations", rep);
}

VectorXd transport(const MatrixField& g, const VectorXd& v_at_q) {
  const MatrixXd& gm = g.at_minus_one();
  if (gm.cols() != v_at_q.size())
    throw std::invalid_argument("transport: dimension mismatch");
  return gm * v_at_q;
}

namespace {

using nlohmann::json;

json matrix_cols(const MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    json col = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) col.push_back(m(r, c));
    out.push_back(col);
  }
  return out;
}

MatrixXd cols_matrix(const json& j) {
  const auto cols = j.get<std::vector<std::vector<double>>>();
  if (cols.empty()) return MatrixXd(0, 0);
  MatrixXd out(static_cast<Eigen::Index>(cols[0].size()), static_cast<Eigen::Index>(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c)
    for (size_t r = 0; r < cols[c].size(); ++r) out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cols[c][r];
  return out;
}

std::vector<double> vec_of(const VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

std::string disc_to_json(const AnalyticDisc& disc) {
  json j;
  j["grid_N"] = disc.grid.n;
  j["U"] = matrix_cols(disc.u);
  j["V"] = matrix_cols(disc.v);
  j["W_re"] = matrix_cols(disc.w.real());
  j["W_im"] = matrix_cols(disc.w.imag());
  if (disc.t)
    j["t"] = std::vector<double>(disc.t->data(), disc.t->data() + disc.t->size());
  else
    j["t"] = nullptr;
  j["base"]["x"] = vec_of(disc.base.x);
  j["base"]["y"] = vec_of(disc.base.y);
  j["base"]["w_re"] = vec_of(disc.base.w.real());
  j["base"]["w_im"] = vec_of(disc.base.w.imag());
  j["regularity_tag"] = to_string(disc.tag);
  return j.dump();
}

AnalyticDisc disc_from_json(const std::string& text) {
  const json j = json::parse(text);
  AnalyticDisc disc;
  disc.grid = make_grid(j.at("grid_N").get<int>());
  disc.u = cols_matrix(j.at("U"));
  disc.v = cols_matrix(j.at("V"));
  const MatrixXd wre = cols_matrix(j.at("W_re"));
  const MatrixXd wim = cols_matrix(j.at("W_im"));
  disc.w = wre.cast<Complex>() + Complex(0.0, 1.0) * wim.cast<Complex>();
  if (!j.at("t").is_null()) {
    const auto tv = j["t"].get<std::vector<double>>();
    disc.t = Eigen::Map<const ArrayXd>(tv.data(), static_cast<Eigen::Index>(tv.size()));
  }
  const auto bx = j.at("base").at("x").get<std::vector<double>>();
  const auto by = j.at("base").at("y").get<std::vector<double>>();
  const auto bwr = j.at("base").at("w_re").get<std::vector<double>>();
  const auto bwi = j.at("base").at("w_im").get<std::vector<double>>();
  disc.base.x = Eigen::Map<const VectorXd>(bx.data(), static_cast<Eigen::Index>(bx.size()));
  disc.base.y = Eigen::Map<const VectorXd>(by.data(), static_cast<Eigen::Index>(by.size()));
  VectorXd wr = Eigen::Map<const VectorXd>(bwr.data(), static_cast<Eigen::Index>(bwr.size()));
  VectorXd wi = Eigen::Map<const VectorXd>(bwi.data(), static_cast<Eigen::Index>(bwi.size()));
  disc.base.w = wr.cast<Complex>() + Complex(0.0, 1.0) * wi.cast<Complex>();
  disc.tag = regularity_from_string(j.at("regularity_tag").get<std::string>());
  return disc;
}

AnalyticDisc with_model(AnalyticDisc disc, GraphingFunctionPtr h) {
  if (h->codim() != disc.d() || h->cr_dim() != disc.m())
    throw std::invalid_argument("with_model: dimension mismatch");
  disc.h = std::move(h);
  return disc;
}

}  // namespace crdisc

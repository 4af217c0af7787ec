#include "hermet/chern.hpp"

#include <cmath>

#include "hermet/hermitian.hpp"
#include "hermet/psh.hpp"

namespace hermet {

ConnectionField connection(const MetricField& h, double floor_det,
                           const Mask& request) {
  if (!(floor_det > 0.0))
    throw std::invalid_argument("connection: floor must be positive");
  const GridSpec& g = h.grid();
  const Mask sub = sublevel_mask(h, floor_det);

  ConnectionField out;
  out.dim = g.dim;
  out.coeff.reserve(g.dim);
  Mask common;
  for (int j = 0; j < g.dim; ++j) {
    MatrixField dh = wirtinger_d(h.samples, j);
    MatrixField theta = dh;
    theta.mask = mask_and(dh.mask, sub);
    theta.partial = true;
    const std::size_t n = g.num_nodes();
    for (std::size_t i = 0; i < n; ++i) {
      if (!theta.mask[i]) {
        theta.at(i).setZero();
        continue;
      }
      const MatC hm = h.samples.at(i);
      const double det = hm.determinant().real();
      theta.at(i) = (adjugate(hm) / det) * dh.at(i);
    }
    common = mask_and(common, theta.mask);
    out.coeff.push_back(std::move(theta));
  }
  out.mask = common;
  if (!request.empty()) {
    for (std::size_t i = 0; i < request.size(); ++i)
      if (request[i] && !out.mask[i])
        throw std::domain_error("connection: floor violated on requested mask");
  }
  return out;
}

CurvatureField curvature(const MetricField& h, double floor_det,
                         const Mask& request) {
  ConnectionField conn = connection(h, floor_det);
  const GridSpec& g = h.grid();
  CurvatureField out;
  out.dim = g.dim;
  out.blocks.reserve(static_cast<std::size_t>(g.dim) * g.dim);
  Mask common;
  for (int j = 0; j < g.dim; ++j) {
    for (int k = 0; k < g.dim; ++k) {
      MatrixField block = wirtinger_dbar(conn.coeff[j], k);
      common = mask_and(common, block.mask);
      out.blocks.push_back(std::move(block));
    }
  }
  out.mask = common;
  for (auto& b : out.blocks) b.mask = common;
  if (!request.empty()) {
    for (std::size_t i = 0; i < request.size(); ++i)
      if (request[i] && !out.mask[i])
        throw std::domain_error("curvature: floor violated on requested mask");
  }
  return out;
}

MatrixField contract(const CurvatureField& c, const std::vector<cxd>& xi) {
  if (static_cast<int>(xi.size()) != c.dim)
    throw std::invalid_argument("contract: direction dimension mismatch");
  double nrm = 0.0;
  for (const cxd& x : xi) nrm += std::norm(x);
  if (!(nrm > 0.0)) throw std::invalid_argument("contract: xi must be nonzero");

  MatrixField out = c.blocks.front();
  out.mask = c.mask;
  out.partial = true;
  const std::size_t n = out.spec.num_nodes();
  const std::size_t blk = out.block();
  std::fill(out.values.begin(), out.values.end(), cxd(0.0, 0.0));
  for (int j = 0; j < c.dim; ++j) {
    for (int k = 0; k < c.dim; ++k) {
      const cxd w = -xi[j] * std::conj(xi[k]);
      const MatrixField& b = c.block(j, k);
      for (std::size_t i = 0; i < n; ++i) {
        if (!out.mask[i]) continue;
        for (std::size_t t = 0; t < blk; ++t)
          out.values[i * blk + t] += w * b.values[i * blk + t];
      }
    }
  }
  return out;
}

std::vector<std::vector<cxd>> default_xi_set(int dim, int extra_random, Rng& rng) {
  std::vector<std::vector<cxd>> xi_set;
  for (int j = 0; j < dim; ++j) {
    std::vector<cxd> e(dim, cxd(0.0, 0.0));
    e[j] = cxd(1.0, 0.0);
    xi_set.push_back(std::move(e));
  }
  for (int k = 0; k < extra_random; ++k) {
    Eigen::VectorXcd v = rng.unit_vector(dim);
    std::vector<cxd> x(dim);
    for (int j = 0; j < dim; ++j) x[j] = v(j);
    xi_set.push_back(std::move(x));
  }
  return xi_set;
}

namespace {

void require_smooth(const MetricField& h, const char* what) {
  if (h.smoothness != Smoothness::kSmooth)
    throw std::invalid_argument(std::string(what) +
                                ": pointwise test needs a smooth-flagged metric");
}

}  // namespace

PencilReport griffiths_test(const MetricField& h, const CurvatureField& c,
                            double delta,
                            const std::vector<std::vector<cxd>>& xi_set,
                            double tol) {
  require_smooth(h, "griffiths_test");
  if (xi_set.empty()) throw std::invalid_argument("griffiths_test: empty xi set");
  const GridSpec& g = h.grid();
  const Mask region = mask_and(c.mask, interior_mask(g));

  PencilReport rep;
  rep.test = "griffiths";
  rep.delta_declared = delta;
  rep.tol = tol;
  rep.delta_empirical = std::numeric_limits<double>::infinity();

  const std::size_t n = g.num_nodes();
  for (const auto& xi : xi_set) {
    double xi2 = 0.0;
    for (const cxd& x : xi) xi2 += std::norm(x);
    const MatrixField theta_tilde = contract(c, xi);
    for (std::size_t i = 0; i < n; ++i) {
      if (!region[i]) continue;
      const MatC hm = h.samples.at(i);
      if (min_eigenvalue(hm) <= 0.0)
        throw std::domain_error("griffiths_test: metric not positive at a point");
      const MatC a = hm * MatC(theta_tilde.at(i));
      const double lam = pencil_max_eigenvalue(a, hm);
      const double emp = -lam / xi2;
      ++rep.points_tested;
      if (emp < rep.delta_empirical) {
        rep.delta_empirical = emp;
        rep.worst_index = i;
      }
      if (emp < delta - tol) ++rep.failing_points;
    }
  }
  rep.worst_margin = rep.delta_empirical - delta;
  rep.pass = rep.failing_points == 0;
  return rep;
}

PencilReport nakano_test(const MetricField& h, const CurvatureField& c,
                         double delta, double tol) {
  require_smooth(h, "nakano_test");
  const GridSpec& g = h.grid();
  const int nd = g.dim;
  const int r = h.rank();
  const Mask region = mask_and(c.mask, interior_mask(g));

  PencilReport rep;
  rep.test = "nakano";
  rep.delta_declared = delta;
  rep.tol = tol;
  rep.delta_empirical = std::numeric_limits<double>::infinity();

  const std::size_t n = g.num_nodes();
  MatC N(nd * r, nd * r), B(nd * r, nd * r);
  for (std::size_t i = 0; i < n; ++i) {
    if (!region[i]) continue;
    const MatC hm = h.samples.at(i);
    if (min_eigenvalue(hm) <= 0.0)
      throw std::domain_error("nakano_test: metric not positive at a point");
    N.setZero();
    B.setZero();
    for (int j = 0; j < nd; ++j) {
      B.block(j * r, j * r, r, r) = hm;
      for (int k = 0; k < nd; ++k)
        N.block(k * r, j * r, r, r) = hm * (-MatC(c.block(j, k).at(i)));
    }
    const double lam = pencil_max_eigenvalue(N, B);
    const double emp = -lam;
    ++rep.points_tested;
    if (emp < rep.delta_empirical) {
      rep.delta_empirical = emp;
      rep.worst_index = i;
    }
    if (emp < delta - tol) ++rep.failing_points;
  }
  rep.worst_margin = rep.delta_empirical - delta;
  rep.pass = rep.failing_points == 0;
  return rep;
}

ScalarField trace_field(const MatrixField& m) {
  ScalarField out;
  out.spec = m.spec;
  out.mask = m.mask;
  out.partial = m.partial;
  out.values.resize(m.spec.num_nodes());
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = m.valid_at(i) ? m.at(i).trace() : cxd(0.0, 0.0);
  return out;
}

ScalarField trace_curvature(const CurvatureField& c, const std::vector<cxd>& xi) {
  return trace_field(contract(c, xi));
}

ScalarField bochner_residual(const MetricField& h, const SectionField& u,
                             const std::vector<cxd>& xi, double floor_det) {
  const GridSpec& g = h.grid();
  if (static_cast<int>(xi.size()) != g.dim)
    throw std::invalid_argument("bochner_residual: xi dimension mismatch");

  const ScalarField nsq = eval_norm_sq(h, u);
  const MatrixField hess = complex_hessian(nsq);
  const ScalarField lhs = hessian_quad(hess, xi);

  const ConnectionField conn = connection(h, floor_det);
  const CurvatureField curv = curvature(h, floor_det);
  const MatrixField theta_tilde = contract(curv, xi);

  std::vector<SectionField> du;
  du.reserve(g.dim);
  for (int j = 0; j < g.dim; ++j) du.push_back(u.derivative(j));

  ScalarField out;
  out.spec = g;
  out.partial = true;
  out.mask = mask_and(mask_and(lhs.mask, curv.mask), interior_mask(g));
  out.values.assign(g.num_nodes(), cxd(0.0, 0.0));
  if (mask_count(g, out.mask) == 0)
    throw std::invalid_argument("bochner_residual: mask too small");

  const std::size_t n = g.num_nodes();
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.mask[i]) continue;
    const auto z = g.point(i);
    const Eigen::VectorXcd uv = u.eval(z);
    const MatC hm = h.samples.at(i);

    Eigen::VectorXcd Du = Eigen::VectorXcd::Zero(h.rank());
    for (int j = 0; j < g.dim; ++j)
      Du += xi[j] * (du[j].eval(z) + MatC(conn.coeff[j].at(i)) * uv);

    const cxd curv_term = uv.dot(hm * (MatC(theta_tilde.at(i)) * uv));  // (T~u,u)_h
    const cxd d_term = Du.dot(hm * Du);
    const cxd rhs = -curv_term + d_term;
    out.values[i] = lhs.values[i] - rhs;
  }
  return out;
}

}  // namespace hermet

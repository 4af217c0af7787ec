#include "hermet/grid.hpp"

#include <algorithm>
#include <cmath>

namespace hermet {

void GridSpec::validate() const {
  if (dim < 1) throw std::invalid_argument("GridSpec: dim must be >= 1");
  if (static_cast<int>(center.size()) != dim ||
      static_cast<int>(spacing.size()) != dim ||
      static_cast<int>(points_per_axis.size()) != dim)
    throw std::invalid_argument("GridSpec: per-axis arrays must have dim entries");
  for (int j = 0; j < dim; ++j) {
    if (!(spacing[j] > 0.0))
      throw std::invalid_argument("GridSpec: spacing must be positive");
    if (points_per_axis[j] < 8 || points_per_axis[j] % 2 != 0)
      throw std::invalid_argument("GridSpec: points_per_axis must be even and >= 8");
  }
  if (halo < 2) throw std::invalid_argument("GridSpec: halo must be >= 2");
  for (int j = 0; j < dim; ++j)
    if (points_per_axis[j] - 2 * halo < 1)
      throw std::invalid_argument("GridSpec: empty interior");
}

GridSpec make_grid(std::vector<cxd> center, const std::vector<double>& radii,
                   std::vector<int> points_per_axis, int halo) {
  GridSpec g;
  g.dim = static_cast<int>(center.size());
  g.center = std::move(center);
  g.points_per_axis = std::move(points_per_axis);
  g.halo = halo;
  if (radii.size() != g.center.size() ||
      g.points_per_axis.size() != g.center.size())
    throw std::invalid_argument("make_grid: array length mismatch");
  g.spacing.resize(g.dim);
  for (int j = 0; j < g.dim; ++j) {
    if (!(radii[j] > 0.0)) throw std::invalid_argument("make_grid: radii must be positive");
    g.spacing[j] = 2.0 * radii[j] / g.points_per_axis[j];
  }
  g.validate();
  return g;
}

GridSpec make_grid(int dim, cxd center, double radius, int points, int halo) {
  return make_grid(std::vector<cxd>(dim, center), std::vector<double>(dim, radius),
                   std::vector<int>(dim, points), halo);
}

GridSpec expanded_grid(const GridSpec& g, const std::vector<int>& extra_cells) {
  if (static_cast<int>(extra_cells.size()) != g.dim)
    throw std::invalid_argument("expanded_grid: arity mismatch");
  GridSpec e = g;
  for (int j = 0; j < g.dim; ++j) {
    if (extra_cells[j] < 0) throw std::invalid_argument("expanded_grid: negative margin");
    e.points_per_axis[j] += 2 * extra_cells[j];
  }
  e.validate();
  return e;
}

double GridSpec::min_spacing() const {
  double s = spacing[0];
  for (int j = 1; j < dim; ++j) s = std::min(s, spacing[j]);
  return s;
}

double GridSpec::max_spacing() const {
  double s = spacing[0];
  for (int j = 1; j < dim; ++j) s = std::max(s, spacing[j]);
  return s;
}

std::size_t GridSpec::num_nodes() const {
  std::size_t n = 1;
  for (int j = 0; j < dim; ++j)
    n *= static_cast<std::size_t>(points_per_axis[j]) * points_per_axis[j];
  return n;
}

std::vector<std::size_t> GridSpec::strides() const {
  const int R = real_axes();
  std::vector<std::size_t> s(R);
  s[R - 1] = 1;
  for (int a = R - 2; a >= 0; --a) s[a] = s[a + 1] * axis_count(a + 1);
  return s;
}

double GridSpec::coord(int axis, int k) const {
  const int j = axis / 2;
  const double c = (axis % 2 == 0) ? center[j].real() : center[j].imag();
  // Center-anchored: identical index offsets give identical coordinates on
  // any symmetric expansion of this grid.
  const double m = static_cast<double>(k - points_per_axis[j] / 2) + 0.5;
  return c + m * spacing[j];
}

std::vector<cxd> GridSpec::point(std::size_t linear) const {
  std::vector<int> multi(real_axes());
  to_multi(linear, multi);
  std::vector<cxd> z(dim);
  for (int j = 0; j < dim; ++j)
    z[j] = cxd(coord(2 * j, multi[2 * j]), coord(2 * j + 1, multi[2 * j + 1]));
  return z;
}

void GridSpec::to_multi(std::size_t linear, std::vector<int>& multi) const {
  const int R = real_axes();
  multi.resize(R);
  for (int a = R - 1; a >= 0; --a) {
    const int c = axis_count(a);
    multi[a] = static_cast<int>(linear % c);
    linear /= c;
  }
}

std::size_t GridSpec::to_linear(const std::vector<int>& multi) const {
  const int R = real_axes();
  std::size_t i = 0;
  for (int a = 0; a < R; ++a) i = i * axis_count(a) + multi[a];
  return i;
}

double GridSpec::cell_volume() const {
  double v = 1.0;
  for (int j = 0; j < dim; ++j) v *= spacing[j] * spacing[j];
  return v;
}

bool GridSpec::same_layout(const GridSpec& o) const {
  return dim == o.dim && center == o.center && spacing == o.spacing &&
         points_per_axis == o.points_per_axis;
}

// --- masks -------------------------------------------------------------------

Mask full_mask(const GridSpec& g) { return Mask(g.num_nodes(), 1); }

Mask interior_mask(const GridSpec& g) {
  Mask m(g.num_nodes(), 0);
  const int R = g.real_axes();
  std::vector<int> multi(R);
  const std::size_t n = g.num_nodes();
  for (std::size_t i = 0; i < n; ++i) {
    g.to_multi(i, multi);
    bool inside = true;
    for (int a = 0; a < R; ++a) {
      if (multi[a] < g.halo || multi[a] >= g.axis_count(a) - g.halo) {
        inside = false;
        break;
      }
    }
    m[i] = inside ? 1 : 0;
  }
  return m;
}

Mask mask_where(const GridSpec& g,
                const std::function<bool(const std::vector<cxd>&)>& pred) {
  Mask m(g.num_nodes(), 0);
  const std::size_t n = g.num_nodes();
  for (std::size_t i = 0; i < n; ++i) m[i] = pred(g.point(i)) ? 1 : 0;
  return m;
}

Mask mask_and(const Mask& a, const Mask& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.size() != b.size()) throw std::invalid_argument("mask_and: size mismatch");
  Mask m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = (a[i] && b[i]) ? 1 : 0;
  return m;
}

std::size_t mask_count(const GridSpec& g, const Mask& m) {
  if (m.empty()) return g.num_nodes();
  std::size_t c = 0;
  for (auto v : m) c += (v != 0);
  return c;
}

Mask erode_mask(const GridSpec& g, const Mask& m, int cells, int j) {
  Mask in = m.empty() ? full_mask(g) : m;
  Mask out(in.size(), 0);
  const int R = g.real_axes();
  const auto strides = g.strides();
  std::vector<int> multi(R);
  const std::size_t n = g.num_nodes();
  for (std::size_t i = 0; i < n; ++i) {
    if (!in[i]) continue;
    g.to_multi(i, multi);
    bool keep = true;
    for (int a = 0; a < R && keep; ++a) {
      if (j >= 0 && a / 2 != j) continue;
      if (multi[a] < cells || multi[a] >= g.axis_count(a) - cells) {
        keep = false;
        break;
      }
      for (int d = 1; d <= cells; ++d) {
        if (!in[i - d * strides[a]] || !in[i + d * strides[a]]) {
          keep = false;
          break;
        }
      }
    }
    out[i] = keep ? 1 : 0;
  }
  return out;
}

bool mask_is_interior(const GridSpec& g, const Mask& support) {
  const Mask inter = interior_mask(g);
  if (support.empty()) return false;  // full support always touches the halo
  for (std::size_t i = 0; i < support.size(); ++i)
    if (support[i] && !inter[i]) return false;
  return true;
}

// --- fields --------------------------------------------------------------------

void ScalarField::check_shape() const {
  spec.validate();
  if (values.size() != spec.num_nodes())
    throw std::invalid_argument("ScalarField: value array shape mismatch");
  if (!mask.empty() && mask.size() != values.size())
    throw std::invalid_argument("ScalarField: mask shape mismatch");
}

void ScalarField::check_finite() const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!valid_at(i)) continue;
    if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag()))
      throw std::runtime_error("ScalarField: non-finite value at valid node");
  }
}

void MatrixField::check_shape() const {
  spec.validate();
  if (rank < 1) throw std::invalid_argument("MatrixField: rank must be >= 1");
  if (values.size() != spec.num_nodes() * block())
    throw std::invalid_argument("MatrixField: value array shape mismatch");
  if (!mask.empty() && mask.size() != spec.num_nodes())
    throw std::invalid_argument("MatrixField: mask shape mismatch");
}

ScalarField make_scalar_field(
    const GridSpec& g, const std::function<cxd(const std::vector<cxd>&)>& f) {
  g.validate();
  ScalarField out;
  out.spec = g;
  out.values.resize(g.num_nodes());
  const std::size_t n = g.num_nodes();
  for (std::size_t i = 0; i < n; ++i) out.values[i] = f(g.point(i));
  return out;
}

MatrixField make_matrix_field(
    const GridSpec& g, int rank,
    const std::function<void(const std::vector<cxd>&, Eigen::Ref<MatC>)>& f) {
  g.validate();
  MatrixField out;
  out.spec = g;
  out.rank = rank;
  out.values.resize(g.num_nodes() * out.block());
  MatC tmp(rank, rank);
  const std::size_t n = g.num_nodes();
  for (std::size_t i = 0; i < n; ++i) {
    f(g.point(i), tmp);
    out.at(i) = tmp;
  }
  return out;
}

// --- reductions ------------------------------------------------------------------

namespace {

template <typename T>
T pairwise_sum_impl(const T* data, std::size_t n) {
  if (n <= 32) {
    T acc{};
    for (std::size_t i = 0; i < n; ++i) acc += data[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_impl(data, half) + pairwise_sum_impl(data + half, n - half);
}

}  // namespace

cxd pairwise_sum(const cxd* data, std::size_t n) { return pairwise_sum_impl(data, n); }
double pairwise_sum(const double* data, std::size_t n) { return pairwise_sum_impl(data, n); }

// --- Wirtinger derivatives ---------------------------------------------------------

namespace {

// kind = +1: d/dz, kind = -1: d/dzb on complex axis j.
template <typename FieldT>
FieldT wirtinger_impl(const FieldT& f, int j, int kind) {
  f.check_shape();
  if (j < 0 || j >= f.spec.dim)
    throw std::invalid_argument("wirtinger: axis out of range");
  if (f.spec.points_per_axis[j] < 2 + 2 * f.spec.halo)
    throw std::invalid_argument("wirtinger: field too small for stencil");

  const GridSpec& g = f.spec;
  const auto strides = g.strides();
  const std::size_t sx = strides[2 * j];
  const std::size_t sy = strides[2 * j + 1];
  const double inv2d = 1.0 / (2.0 * g.spacing[j]);

  FieldT out = f;
  out.mask = erode_mask(g, f.mask, 1, j);
  out.partial = true;

  std::size_t stride_block = 1;
  if constexpr (std::is_same_v<FieldT, MatrixField>) stride_block = out.block();

  const std::size_t n = g.num_nodes();
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.mask[i]) {
      for (std::size_t t = 0; t < stride_block; ++t)
        out.values[i * stride_block + t] = cxd(0.0, 0.0);
      continue;
    }
    // The eroded mask guarantees all four stencil neighbors are in bounds.
    for (std::size_t t = 0; t < stride_block; ++t) {
      const cxd fxp = f.values[(i + sx) * stride_block + t];
      const cxd fxm = f.values[(i - sx) * stride_block + t];
      const cxd fyp = f.values[(i + sy) * stride_block + t];
      const cxd fym = f.values[(i - sy) * stride_block + t];
      const cxd dx = (fxp - fxm) * inv2d;
      const cxd dy = (fyp - fym) * inv2d;
      // (dx -+ i*dy)/2
      out.values[i * stride_block + t] =
          0.5 * (dx - cxd(0.0, static_cast<double>(kind)) * dy);
    }
  }
  return out;
}

}  // namespace

ScalarField wirtinger_d(const ScalarField& f, int j) { return wirtinger_impl(f, j, +1); }
ScalarField wirtinger_dbar(const ScalarField& f, int j) { return wirtinger_impl(f, j, -1); }
MatrixField wirtinger_d(const MatrixField& f, int j) { return wirtinger_impl(f, j, +1); }
MatrixField wirtinger_dbar(const MatrixField& f, int j) { return wirtinger_impl(f, j, -1); }

// --- quadrature -----------------------------------------------------------------------

cxd integrate(const ScalarField& f, const Mask& region) {
  f.check_shape();
  if (!region.empty() && region.size() != f.values.size())
    throw std::invalid_argument("integrate: region shape mismatch");
  const std::size_t n = f.values.size();
  std::vector<cxd> addends;
  addends.reserve(region.empty() ? n : 1024);
  for (std::size_t i = 0; i < n; ++i) {
    if (!region.empty() && !region[i]) continue;
    if (!f.valid_at(i))
      throw std::invalid_argument("integrate: region contains invalid nodes");
    addends.push_back(f.values[i]);
  }
  if (addends.empty()) throw std::invalid_argument("integrate: empty region");
  return pairwise_sum(addends.data(), addends.size()) * f.spec.cell_volume();
}

cxd pair_with_test(const ScalarField& f, const ScalarField& phi) {
  f.check_shape();
  phi.check_shape();
  if (!f.spec.same_layout(phi.spec))
    throw std::invalid_argument("pair_with_test: grid mismatch");
  const Mask supp = support_mask(phi);
  if (!mask_is_interior(f.spec, supp))
    throw std::invalid_argument("pair_with_test: test function support touches the halo");
  ScalarField prod = f;
  for (std::size_t i = 0; i < prod.values.size(); ++i)
    prod.values[i] = supp[i] ? f.values[i] * phi.values[i] : cxd(0.0, 0.0);
  return integrate(prod, supp);
}

ScalarField radial_bump(const GridSpec& g, const std::vector<cxd>& c, double rho) {
  if (static_cast<int>(c.size()) != g.dim)
    throw std::invalid_argument("radial_bump: center dimension mismatch");
  if (!(rho > 0.0)) throw std::invalid_argument("radial_bump: rho must be positive");
  return make_scalar_field(g, [&](const std::vector<cxd>& z) -> cxd {
    double r2 = 0.0;
    for (int j = 0; j < g.dim; ++j) {
      const cxd d = z[j] - c[j];
      r2 += std::norm(d);
    }
    const double t2 = r2 / (rho * rho);
    if (t2 >= 1.0) return cxd(0.0, 0.0);
    return cxd(std::exp(1.0 - 1.0 / (1.0 - t2)), 0.0);
  });
}

Mask support_mask(const ScalarField& phi) {
  Mask m(phi.values.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i)
    m[i] = (phi.values[i] != cxd(0.0, 0.0)) ? 1 : 0;
  return m;
}

}  // namespace hermet

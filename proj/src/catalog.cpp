#include "hermet/catalog.hpp"

#include <cmath>
#include <functional>

namespace hermet {

namespace {

bool is_positive_integer(double a) {
  return a > 0.5 && std::abs(a - std::round(a)) < 1e-12;
}

double sum_abs_sq(const std::vector<cxd>& z) {
  double s = 0.0;
  for (const cxd& v : z) s += std::norm(v);
  return s;
}

using ScalarProfile = std::function<double(const std::vector<cxd>&)>;

// Scalar profile s(z) for the isotropic families; empty when not isotropic.
ScalarProfile isotropic_profile(const GeneratorRef& g) {
  if (g.name == "identity") {
    return [](const std::vector<cxd>&) { return 1.0; };
  }
  if (g.name == "lelong") {
    const double a = g.params.at(0);
    return [a](const std::vector<cxd>& z) { return std::pow(std::norm(z[0]), a); };
  }
  if (g.name == "fubini+") {
    return [](const std::vector<cxd>& z) { return 1.0 + std::norm(z[0]); };
  }
  if (g.name == "fubini-") {
    return [](const std::vector<cxd>& z) { return 1.0 / (1.0 + std::norm(z[0])); };
  }
  if (g.name == "gauss-neg") {
    return [](const std::vector<cxd>& z) { return std::exp(sum_abs_sq(z)); };
  }
  if (g.name == "gauss-pos") {
    return [](const std::vector<cxd>& z) { return std::exp(-sum_abs_sq(z)); };
  }
  if (g.name == "diag-psh") {
    if (g.profile == "sq") {
      return [](const std::vector<cxd>& z) { return std::exp(std::norm(z[0])); };
    }
    if (g.profile == "relu") {
      return [](const std::vector<cxd>& z) {
        return std::exp(std::max(z[0].real(), 0.0));
      };
    }
    if (g.profile == "log") {
      const double a = g.params.at(0);
      return [a](const std::vector<cxd>& z) { return std::pow(std::norm(z[0]), a); };
    }
    return {};
  }
  if (g.name == "cont-nakano") {
    return [](const std::vector<cxd>& z) {
      return std::exp(sum_abs_sq(z) + std::max(z[0].real(), 0.0));
    };
  }
  return {};
}

Smoothness generator_smoothness(const GeneratorRef& g) {
  if (g.name == "identity" || g.name == "fubini+" || g.name == "fubini-" ||
      g.name == "gauss-neg" || g.name == "gauss-pos")
    return Smoothness::kSmooth;
  if (g.name == "lelong")
    return is_positive_integer(g.params.at(0)) ? Smoothness::kSmooth
                                               : Smoothness::kContinuous;
  if (g.name == "diag-psh")
    return g.profile == "sq" ? Smoothness::kSmooth : Smoothness::kContinuous;
  return Smoothness::kContinuous;  // paper-counterexample, cont-nakano
}

MatrixField sample_generator(const GeneratorRef& g, const GridSpec& grid) {
  if (g.name == "paper-counterexample") {
    return make_matrix_field(grid, 2, [](const std::vector<cxd>& z, Eigen::Ref<MatC> m) {
      const cxd zz = z[0];
      m(0, 0) = 1.0 + std::norm(zz);
      m(0, 1) = zz;
      m(1, 0) = std::conj(zz);
      m(1, 1) = std::norm(zz);
    });
  }
  ScalarProfile prof = isotropic_profile(g);
  if (!prof) throw std::invalid_argument("catalog: unknown generator " + g.name);
  const int r = g.rank;
  return make_matrix_field(grid, r, [&](const std::vector<cxd>& z, Eigen::Ref<MatC> m) {
    m.setZero();
    const double s = prof(z);
    for (int i = 0; i < r; ++i) m(i, i) = s;
  });
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"identity", "flat metric I_r", 2, 1, true, true, true, true},
      {"paper-counterexample",
       "rank-2 metric over the disc with non-integrable connection", 2, 1,
       false, false, true, true},
      {"lelong", "rank-1 |z|^{2a}", 1, 1, false, false, true, true},
      {"fubini+", "rank-1 1+|z|^2", 1, 1, false, false, true, true},
      {"fubini-", "rank-1 (1+|z|^2)^{-1}", 1, 1, false, false, false, true},
      {"gauss-neg", "e^{+sum|z_j|^2} I_r", 2, 1, true, true, true, false},
      {"gauss-pos", "e^{-sum|z_j|^2} I_r", 2, 1, true, true, false, false},
      {"diag-psh", "diagonal e^{phi} from a closed psh profile catalog", 2, 1,
       true, false, true, false},
      {"cont-nakano",
       "e^{sum|z_j|^2 + max(Re z_1,0)} I_r, continuous and strictly Nakano negative",
       2, 2, true, true, true, false},
  };
  return entries;
}

const CatalogEntry* find_catalog_entry(const std::string& name) {
  for (const auto& e : catalog())
    if (e.name == name) return &e;
  return nullptr;
}

MetricField make_catalog_metric(const std::string& name, int rank, int dim,
                                const GridSpec& grid,
                                const std::vector<double>& params,
                                const std::string& profile) {
  const CatalogEntry* entry = find_catalog_entry(name);
  if (!entry) throw std::invalid_argument("catalog: unknown metric " + name);
  if (!entry->rank_free && rank != entry->default_rank)
    throw std::invalid_argument("catalog: " + name + " has fixed rank " +
                                std::to_string(entry->default_rank));
  if (!entry->dim_free && dim != entry->default_dim)
    throw std::invalid_argument("catalog: " + name + " has fixed dim " +
                                std::to_string(entry->default_dim));
  if (rank < 1 || dim < 1 || dim != grid.dim)
    throw std::invalid_argument("catalog: bad rank/dim request");

  GeneratorRef gen;
  gen.name = name;
  gen.rank = rank;
  gen.dim = dim;
  gen.params = params;
  gen.profile = profile;
  if (name == "lelong" || (name == "diag-psh" && profile == "log")) {
    if (gen.params.empty()) gen.params.push_back(1.0);
    if (!(gen.params[0] > 0.0))
      throw std::invalid_argument("catalog: exponent parameter must be positive");
  }
  if (name == "diag-psh") {
    if (profile != "sq" && profile != "relu" && profile != "log")
      throw std::invalid_argument("catalog: diag-psh profile must be sq|relu|log");
  }

  MatrixField samples = sample_generator(gen, grid);
  return make_metric_field(std::move(samples), generator_smoothness(gen), gen,
                           /*validate_psd=*/true);
}

MetricField resample(const MetricField& h, const GridSpec& grid) {
  if (!h.generator)
    throw std::invalid_argument("resample: metric has no generator");
  MatrixField samples = sample_generator(*h.generator, grid);
  return make_metric_field(std::move(samples), h.smoothness, h.generator,
                           /*validate_psd=*/false);
}

std::optional<sym::RationalMatrix> symbolic_metric(const GeneratorRef& gen) {
  using sym::GaussRat;
  using sym::RationalExpr;
  using sym::RationalMatrix;
  const int n = gen.dim;
  if (gen.name == "identity") return RationalMatrix::identity(n, gen.rank);
  if (gen.name == "paper-counterexample") return sym::counterexample_metric();
  if (gen.name == "fubini+" || gen.name == "fubini-") {
    RationalMatrix m(n, 1, 1);
    RationalExpr f = sym::rat_const(n, GaussRat(1)) +
                     sym::z_var(n, 0) * sym::zbar_var(n, 0);
    m.at(0, 0) = (gen.name == "fubini+")
                     ? f
                     : sym::rat_const(n, GaussRat(1)) / f;
    return m;
  }
  const bool lelong_like =
      gen.name == "lelong" || (gen.name == "diag-psh" && gen.profile == "log");
  if (lelong_like && is_positive_integer(gen.params.at(0))) {
    const int a = static_cast<int>(std::round(gen.params[0]));
    RationalExpr zz = sym::z_var(n, 0) * sym::zbar_var(n, 0);
    RationalExpr p = sym::rat_const(n, GaussRat(1));
    for (int k = 0; k < a; ++k) p = p * zz;
    RationalMatrix m(n, gen.rank, gen.rank);
    for (int i = 0; i < gen.rank; ++i) m.at(i, i) = p;
    return m;
  }
  return std::nullopt;
}

bool generator_is_isotropic_scalar(const GeneratorRef& gen) {
  return static_cast<bool>(isotropic_profile(gen));
}

namespace {

// Exact Q(i) coordinates [z_1..z_n, zb_1..zb_n] of a node.
std::vector<sym::GaussRat> exact_point(const std::vector<cxd>& z) {
  using sym::BigRat;
  using sym::GaussRat;
  const int n = static_cast<int>(z.size());
  std::vector<GaussRat> pt(2 * n);
  for (int j = 0; j < n; ++j) {
    const BigRat x(z[j].real());
    const BigRat y(z[j].imag());
    pt[j] = GaussRat(x, y);
    pt[n + j] = GaussRat(x, -y);
  }
  return pt;
}

}  // namespace

ScalarField sample(const sym::RationalExpr& e, const GridSpec& g) {
  ScalarField out;
  out.spec = g;
  out.values.assign(g.num_nodes(), cxd(0.0, 0.0));
  out.mask = full_mask(g);
  const std::size_t n = g.num_nodes();
  bool holes = false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto pt = exact_point(g.point(i));
    if (e.pole_at(pt)) {
      out.mask[i] = 0;
      holes = true;
      continue;
    }
    out.values[i] = e.eval(pt).to_complex();
  }
  out.partial = holes;
  if (!holes) out.mask.clear();
  return out;
}

MatrixField sample(const sym::RationalMatrix& m, const GridSpec& g) {
  if (m.rows != m.cols)
    throw std::invalid_argument("sample: matrix must be square");
  MatrixField out;
  out.spec = g;
  out.rank = m.rows;
  out.values.assign(g.num_nodes() * out.block(), cxd(0.0, 0.0));
  out.mask = full_mask(g);
  const std::size_t n = g.num_nodes();
  bool holes = false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto pt = exact_point(g.point(i));
    bool ok = true;
    for (const auto& entry : m.entries)
      if (entry.pole_at(pt)) {
        ok = false;
        break;
      }
    if (!ok) {
      out.mask[i] = 0;
      holes = true;
      continue;
    }
    auto blockm = out.at(i);
    for (int a = 0; a < m.rows; ++a)
      for (int b = 0; b < m.cols; ++b)
        blockm(a, b) = m.at(a, b).eval(pt).to_complex();
  }
  out.partial = holes;
  if (!holes) out.mask.clear();
  return out;
}

}  // namespace hermet

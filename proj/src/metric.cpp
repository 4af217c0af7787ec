#include "hermet/metric.hpp"

#include <algorithm>
#include <cmath>

#include "hermet/hermitian.hpp"

namespace hermet {

bool at_least_continuous(Smoothness s) { return s != Smoothness::kMeasurable; }

std::string smoothness_name(Smoothness s) {
  switch (s) {
    case Smoothness::kSmooth: return "smooth";
    case Smoothness::kContinuous: return "continuous";
    case Smoothness::kMeasurable: return "measurable";
  }
  return "unknown";
}

MetricField make_metric_field(MatrixField samples, Smoothness smoothness,
                              std::optional<GeneratorRef> generator,
                              bool validate_psd) {
  samples.check_shape();
  const std::size_t n = samples.spec.num_nodes();
  const int r = samples.rank;
  MatC tmp(r, r);
  for (std::size_t i = 0; i < n; ++i) {
    if (!samples.valid_at(i)) continue;
    auto m = samples.at(i);
    tmp = 0.5 * (MatC(m) + MatC(m).adjoint());
    const double defect = (MatC(m) - tmp).norm();
    if (defect > 1e-10 * (1.0 + tmp.norm()))
      throw std::invalid_argument("make_metric_field: sample not hermitian");
    m = tmp;
    if (validate_psd && !is_psd(tmp))
      throw std::invalid_argument("make_metric_field: sample not PSD");
  }
  MetricField out;
  out.samples = std::move(samples);
  out.smoothness = smoothness;
  out.generator = std::move(generator);
  return out;
}

// --- sections -----------------------------------------------------------------

void SectionField::canonicalize() {
  for (auto& comp : components) {
    std::sort(comp.begin(), comp.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<std::vector<unsigned>, cxd>> merged;
    for (const auto& [e, c] : comp) {
      if (static_cast<int>(e.size()) != dim)
        throw std::invalid_argument("SectionField: exponent arity mismatch");
      if (!merged.empty() && merged.back().first == e)
        merged.back().second += c;
      else
        merged.emplace_back(e, c);
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const auto& t) { return t.second == cxd(0.0, 0.0); }),
                 merged.end());
    comp = std::move(merged);
  }
}

int SectionField::total_degree() const {
  int deg = 0;
  for (const auto& comp : components) {
    for (const auto& [e, c] : comp) {
      int d = 0;
      for (unsigned k : e) d += static_cast<int>(k);
      deg = std::max(deg, d);
    }
  }
  return deg;
}

Eigen::VectorXcd SectionField::eval(const std::vector<cxd>& z) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(rank);
  for (int c = 0; c < rank; ++c) {
    cxd acc(0.0, 0.0);
    for (const auto& [e, coeff] : components[c]) {
      cxd t = coeff;
      for (int j = 0; j < dim; ++j)
        for (unsigned k = 0; k < e[j]; ++k) t *= z[j];
      acc += t;
    }
    v(c) = acc;
  }
  return v;
}

SectionField SectionField::derivative(int j) const {
  if (j < 0 || j >= dim) throw std::invalid_argument("SectionField: bad axis");
  SectionField d = *this;
  for (auto& comp : d.components) {
    std::vector<std::pair<std::vector<unsigned>, cxd>> out;
    for (auto& [e, c] : comp) {
      if (e[j] == 0) continue;
      auto e2 = e;
      e2[j] -= 1;
      out.emplace_back(e2, c * static_cast<double>(e[j]));
    }
    comp = std::move(out);
  }
  d.canonicalize();
  return d;
}

SectionField make_section(
    int rank, int dim,
    std::vector<std::vector<std::pair<std::vector<unsigned>, cxd>>> comps) {
  if (static_cast<int>(comps.size()) != rank)
    throw std::invalid_argument("make_section: component count mismatch");
  SectionField s;
  s.rank = rank;
  s.dim = dim;
  s.components = std::move(comps);
  s.canonicalize();
  return s;
}

SectionField monomial_section(int rank, int dim, int component,
                              const std::vector<unsigned>& expo, cxd coeff) {
  std::vector<std::vector<std::pair<std::vector<unsigned>, cxd>>> comps(rank);
  comps[component].emplace_back(expo, coeff);
  return make_section(rank, dim, std::move(comps));
}

SectionField constant_section(int rank, int dim, const Eigen::VectorXcd& v) {
  std::vector<std::vector<std::pair<std::vector<unsigned>, cxd>>> comps(rank);
  for (int c = 0; c < rank; ++c)
    comps[c].emplace_back(std::vector<unsigned>(dim, 0u), v(c));
  return make_section(rank, dim, std::move(comps));
}

namespace {

void enumerate_monomials(int dim, int max_degree,
                         std::vector<std::vector<unsigned>>& out) {
  std::vector<unsigned> e(dim, 0u);
  std::function<void(int, int)> rec = [&](int j, int left) {
    if (j == dim) {
      out.push_back(e);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      e[j] = static_cast<unsigned>(k);
      rec(j + 1, left - k);
    }
    e[j] = 0;
  };
  rec(0, max_degree);
}

}  // namespace

SectionField random_section(int rank, int dim, int max_degree, Rng& rng,
                            double coeff_scale) {
  std::vector<std::vector<unsigned>> monos;
  enumerate_monomials(dim, max_degree, monos);
  std::vector<std::vector<std::pair<std::vector<unsigned>, cxd>>> comps(rank);
  for (int c = 0; c < rank; ++c)
    for (const auto& e : monos)
      comps[c].emplace_back(e, coeff_scale * rng.complex_in_disc());
  return make_section(rank, dim, std::move(comps));
}

std::vector<SectionField> default_section_corpus(int rank, int dim, int max_degree,
                                                 int extra_random, Rng& rng) {
  std::vector<SectionField> corpus;
  std::vector<std::vector<unsigned>> monos;
  enumerate_monomials(dim, max_degree, monos);
  for (int c = 0; c < rank; ++c)
    for (const auto& e : monos) corpus.push_back(monomial_section(rank, dim, c, e));
  for (int k = 0; k < extra_random; ++k)
    corpus.push_back(random_section(rank, dim, max_degree, rng));
  return corpus;
}

void SectionTuple::validate(int dim) const {
  if (static_cast<int>(parts.size()) != dim)
    throw std::invalid_argument("SectionTuple: needs one section per direction");
  for (const auto& p : parts)
    if (p.dim != dim || p.rank != parts.front().rank)
      throw std::invalid_argument("SectionTuple: shape mismatch");
}

std::vector<Eigen::VectorXcd> evaluate_on(const SectionField& u, const GridSpec& g) {
  if (u.dim != g.dim) throw std::invalid_argument("evaluate_on: dimension mismatch");
  std::vector<Eigen::VectorXcd> vals(g.num_nodes());
  const std::size_t n = g.num_nodes();
  for (std::size_t i = 0; i < n; ++i) vals[i] = u.eval(g.point(i));
  return vals;
}

// --- observables -----------------------------------------------------------------

ScalarField pairing_field(const MetricField& h, const SectionField& u,
                          const SectionField& v) {
  if (u.rank != h.rank() || v.rank != h.rank() || u.dim != h.grid().dim ||
      v.dim != h.grid().dim)
    throw std::invalid_argument("pairing_field: shape mismatch");
  ScalarField out;
  out.spec = h.grid();
  out.mask = h.samples.mask;
  out.partial = h.samples.partial;
  out.values.resize(h.grid().num_nodes());
  const std::size_t n = out.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!h.samples.valid_at(i)) {
      out.values[i] = cxd(0.0, 0.0);
      continue;
    }
    const auto z = h.grid().point(i);
    const Eigen::VectorXcd uv = u.eval(z);
    const Eigen::VectorXcd vv = v.eval(z);
    out.values[i] = vv.dot(h.samples.at(i) * uv);  // v* h u
  }
  return out;
}

ScalarField eval_norm_sq(const MetricField& h, const SectionField& u) {
  ScalarField out = pairing_field(h, u, u);
  const double tol = 1e-9;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (!out.valid_at(i)) continue;
    double re = out.values[i].real();
    if (re < -tol * (1.0 + std::abs(re)))
      throw std::runtime_error("eval_norm_sq: negative norm at a valid node");
    out.values[i] = cxd(re, 0.0);
  }
  return out;
}

ScalarField det_field(const MetricField& h) {
  ScalarField out;
  out.spec = h.grid();
  out.mask = h.samples.mask;
  out.partial = h.samples.partial;
  out.values.resize(h.grid().num_nodes());
  const std::size_t n = out.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!h.samples.valid_at(i)) {
      out.values[i] = cxd(0.0, 0.0);
      continue;
    }
    out.values[i] = cxd(h.samples.at(i).determinant().real(), 0.0);
  }
  return out;
}

ScalarField log_det_field(const MetricField& h) {
  ScalarField det = det_field(h);
  ScalarField out = det;
  out.partial = true;
  out.mask = det.mask.empty() ? full_mask(det.spec) : det.mask;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const double d = det.values[i].real();
    if (det.valid_at(i) && d > 0.0) {
      out.values[i] = cxd(std::log(d), 0.0);
    } else {
      out.values[i] = cxd(0.0, 0.0);
      out.mask[i] = 0;
    }
  }
  return out;
}

Mask sublevel_mask(const MetricField& h, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("sublevel_mask: eps must be positive");
  ScalarField det = det_field(h);
  Mask m(det.values.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i)
    m[i] = (det.valid_at(i) && det.values[i].real() > eps) ? 1 : 0;
  return m;
}

MetricField dual_metric_field(const MetricField& h, double floor_det,
                              const Mask& request) {
  if (!(floor_det > 0.0))
    throw std::invalid_argument("dual_metric_field: floor must be positive");
  Mask region = request.empty() ? sublevel_mask(h, floor_det) : request;
  MatrixField out = h.samples;
  out.partial = true;
  out.mask = region;
  const std::size_t n = h.grid().num_nodes();
  for (std::size_t i = 0; i < n; ++i) {
    if (!region[i]) {
      out.at(i).setZero();
      continue;
    }
    if (!h.samples.valid_at(i))
      throw std::invalid_argument("dual_metric_field: request exceeds valid samples");
    out.at(i) = dual_matrix(h.samples.at(i), floor_det);
  }
  MetricField d;
  d.samples = std::move(out);
  d.smoothness = h.smoothness;
  return d;
}

}  // namespace hermet

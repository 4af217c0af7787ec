#include "hermet/rational.hpp"

#include <algorithm>
#include <sstream>

namespace hermet::sym {

// --- GaussRat ---------------------------------------------------------------

GaussRat GaussRat::from_double(double x) {
  // cpp_rational converts finite doubles exactly.
  return GaussRat(BigRat(x), BigRat(0));
}

GaussRat GaussRat::from_complex(std::complex<double> z) {
  return GaussRat(BigRat(z.real()), BigRat(z.imag()));
}

GaussRat GaussRat::inverse() const {
  BigRat n = re * re + im * im;
  if (n == 0) throw std::domain_error("GaussRat: division by zero");
  return GaussRat(re / n, -im / n);
}

std::complex<double> GaussRat::to_complex() const {
  return {static_cast<double>(re), static_cast<double>(im)};
}

GaussRat& GaussRat::operator+=(const GaussRat& o) {
  re += o.re;
  im += o.im;
  return *this;
}

GaussRat& GaussRat::operator-=(const GaussRat& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

GaussRat GaussRat::operator+(const GaussRat& o) const {
  return GaussRat(re + o.re, im + o.im);
}

GaussRat GaussRat::operator-(const GaussRat& o) const {
  return GaussRat(re - o.re, im - o.im);
}

GaussRat GaussRat::operator*(const GaussRat& o) const {
  return GaussRat(re * o.re - im * o.im, re * o.im + im * o.re);
}

GaussRat GaussRat::operator/(const GaussRat& o) const {
  return *this * o.inverse();
}

std::string GaussRat::str() const {
  std::ostringstream s;
  if (im == 0) {
    s << re;
  } else if (re == 0) {
    s << im << "*i";
  } else {
    s << "(" << re << (im > 0 ? "+" : "") << im << "*i)";
  }
  return s.str();
}

// --- Poly -------------------------------------------------------------------

Poly Poly::constant(int nvars, GaussRat c) {
  Poly p(nvars);
  if (!c.is_zero()) p.terms_.emplace(Expo(nvars, 0u), std::move(c));
  return p;
}

Poly Poly::variable(int nvars, int var, unsigned power) {
  if (var < 0 || var >= nvars) throw std::invalid_argument("Poly: bad var");
  Poly p(nvars);
  if (power == 0) return constant(nvars, GaussRat(1));
  Expo e(nvars, 0u);
  e[var] = power;
  p.terms_.emplace(std::move(e), GaussRat(1));
  return p;
}

bool Poly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() != 1) return false;
  const Expo& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](unsigned k) { return k == 0; });
}

void Poly::add_term(const Expo& e, const GaussRat& c) {
  if (static_cast<int>(e.size()) != nvars_)
    throw std::invalid_argument("Poly: exponent arity mismatch");
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    if (!c.is_zero()) terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly p(nvars_);
  for (const auto& [e, c] : terms_) p.terms_.emplace(e, -c);
  return p;
}

Poly Poly::operator+(const Poly& o) const {
  if (nvars_ != o.nvars_) throw std::invalid_argument("Poly: arity mismatch");
  Poly p = *this;
  for (const auto& [e, c] : o.terms_) p.add_term(e, c);
  return p;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  if (nvars_ != o.nvars_) throw std::invalid_argument("Poly: arity mismatch");
  Poly p(nvars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      Expo e(nvars_);
      for (int k = 0; k < nvars_; ++k) e[k] = ea[k] + eb[k];
      p.add_term(e, ca * cb);
    }
  }
  return p;
}

Poly Poly::scaled(const GaussRat& c) const {
  Poly p(nvars_);
  if (c.is_zero()) return p;
  for (const auto& [e, t] : terms_) p.terms_.emplace(e, t * c);
  return p;
}

bool Poly::operator==(const Poly& o) const {
  return nvars_ == o.nvars_ && terms_ == o.terms_;
}

Poly Poly::derivative(int var) const {
  if (var < 0 || var >= nvars_) throw std::invalid_argument("Poly: bad var");
  Poly p(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Expo d = e;
    d[var] -= 1;
    p.add_term(d, c * GaussRat(static_cast<long>(e[var])));
  }
  return p;
}

Poly Poly::conj_swap(const std::vector<int>& swap_map) const {
  if (static_cast<int>(swap_map.size()) != nvars_)
    throw std::invalid_argument("Poly: swap map arity mismatch");
  Poly p(nvars_);
  for (const auto& [e, c] : terms_) {
    Expo d(nvars_, 0u);
    for (int k = 0; k < nvars_; ++k) d[swap_map[k]] = e[k];
    p.add_term(d, c.conj());
  }
  return p;
}

int Poly::total_degree() const {
  int deg = 0;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (unsigned k : e) d += static_cast<int>(k);
    deg = std::max(deg, d);
  }
  return deg;
}

int Poly::degree_in(int var) const {
  int deg = 0;
  for (const auto& [e, c] : terms_) deg = std::max(deg, static_cast<int>(e[var]));
  return deg;
}

const std::pair<const Expo, GaussRat>& Poly::leading() const {
  if (terms_.empty()) throw std::logic_error("Poly: leading term of zero");
  return *terms_.rbegin();
}

GaussRat Poly::eval(const std::vector<GaussRat>& point) const {
  if (static_cast<int>(point.size()) != nvars_)
    throw std::invalid_argument("Poly: eval arity mismatch");
  std::vector<std::vector<GaussRat>> pows(nvars_);
  for (int v = 0; v < nvars_; ++v) {
    int d = degree_in(v);
    pows[v].resize(d + 1, GaussRat(1));
    for (int k = 1; k <= d; ++k) pows[v][k] = pows[v][k - 1] * point[v];
  }
  GaussRat acc(0);
  for (const auto& [e, c] : terms_) {
    GaussRat t = c;
    for (int v = 0; v < nvars_; ++v)
      if (e[v] > 0) t = t * pows[v][e[v]];
    acc += t;
  }
  return acc;
}

bool Poly::divide_exact(const Poly& a, const Poly& b, Poly& quot) {
  if (b.is_zero()) return false;
  Poly q(a.nvars_);
  Poly r = a;
  const auto& ltb = b.leading();
  while (!r.is_zero()) {
    const auto& ltr = r.leading();
    Expo d(a.nvars_);
    bool divisible = true;
    for (int k = 0; k < a.nvars_; ++k) {
      if (ltr.first[k] < ltb.first[k]) {
        divisible = false;
        break;
      }
      d[k] = ltr.first[k] - ltb.first[k];
    }
    if (!divisible) return false;
    Poly mono(a.nvars_);
    mono.terms_.emplace(d, ltr.second / ltb.second);
    q = q + mono;
    r = r - mono * b;
  }
  quot = q;
  return true;
}

namespace {

// Coefficients of p viewed as univariate in var v; index = power of v.
std::vector<Poly> coeffs_in(const Poly& p, int v) {
  int d = p.degree_in(v);
  std::vector<Poly> cs(d + 1, Poly(p.nvars()));
  for (const auto& [e, c] : p.terms()) {
    Expo r = e;
    unsigned k = r[v];
    r[v] = 0;
    cs[k].add_term(r, c);
  }
  return cs;
}

Poly monic(const Poly& p) {
  if (p.is_zero()) return p;
  return p.scaled(p.leading().second.inverse());
}

Poly content_of(const std::vector<Poly>& cs) {
  Poly g(cs.empty() ? 0 : cs.front().nvars());
  for (const Poly& c : cs) g = Poly::gcd(g, c);
  return g;
}

Poly primitive_part(const Poly& p, int v) {
  if (p.is_zero()) return p;
  Poly cont = content_of(coeffs_in(p, v));
  Poly pp(p.nvars());
  if (!Poly::divide_exact(p, cont, pp))
    throw std::logic_error("Poly: content does not divide");
  return pp;
}

// Pseudo-remainder of a by b in variable v (deg_v b >= 1).
Poly prem(const Poly& a, const Poly& b, int v) {
  int db = b.degree_in(v);
  Poly r = a;
  Poly lb = coeffs_in(b, v)[db];
  while (!r.is_zero() && r.degree_in(v) >= db) {
    int dr = r.degree_in(v);
    Poly lr = coeffs_in(r, v)[dr];
    Poly shift = Poly::variable(a.nvars(), v, static_cast<unsigned>(dr - db));
    r = lb * r - lr * shift * b;
  }
  return r;
}

}  // namespace

Poly Poly::gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  if (a.is_constant() || b.is_constant())
    return constant(a.nvars_, GaussRat(1));

  int v = -1;
  for (int k = a.nvars_ - 1; k >= 0; --k) {
    if (a.degree_in(k) > 0 || b.degree_in(k) > 0) {
      v = k;
      break;
    }
  }
  if (v < 0) return constant(a.nvars_, GaussRat(1));

  Poly cont_a = content_of(coeffs_in(a, v));
  Poly cont_b = content_of(coeffs_in(b, v));
  Poly pa(a.nvars_), pb(a.nvars_);
  if (!divide_exact(a, cont_a, pa) || !divide_exact(b, cont_b, pb))
    throw std::logic_error("Poly: content division failed");
  Poly c = gcd(cont_a, cont_b);

  Poly A = pa, B = pb;
  if (A.degree_in(v) < B.degree_in(v)) std::swap(A, B);
  while (!B.is_zero()) {
    Poly R = prem(A, B, v);
    A = B;
    B = primitive_part(R, v);
  }
  return monic(c * primitive_part(A, v));
}

std::string Poly::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream s;
  bool first = true;
  // Highest lex term first.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    if (!first) s << " + ";
    first = false;
    std::string mono;
    for (int v = 0; v < nvars_; ++v) {
      if (e[v] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names[v];
      if (e[v] > 1) mono += "^" + std::to_string(e[v]);
    }
    if (mono.empty()) {
      s << c.str();
    } else if (c == GaussRat(1)) {
      s << mono;
    } else if (c == GaussRat(-1)) {
      s << "-" << mono;
    } else {
      s << c.str() << "*" << mono;
    }
  }
  return s.str();
}

// --- RationalExpr -----------------------------------------------------------

RationalExpr::RationalExpr(Poly num)
    : num_(std::move(num)), den_(Poly::constant(0, GaussRat(1))) {
  den_ = Poly::constant(num_.nvars(), GaussRat(1));
}

RationalExpr::RationalExpr(Poly num, Poly den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::invalid_argument("RationalExpr: zero denominator");
  canonicalize();
}

RationalExpr RationalExpr::constant(int nvars, GaussRat c) {
  return RationalExpr(Poly::constant(nvars, std::move(c)));
}

RationalExpr RationalExpr::variable(int nvars, int var) {
  return RationalExpr(Poly::variable(nvars, var));
}

void RationalExpr::canonicalize() {
  if (num_.is_zero()) {
    den_ = Poly::constant(num_.nvars(), GaussRat(1));
    return;
  }
  Poly g = Poly::gcd(num_, den_);
  if (!g.is_constant()) {
    Poly qn(num_.nvars()), qd(num_.nvars());
    if (!Poly::divide_exact(num_, g, qn) || !Poly::divide_exact(den_, g, qd))
      throw std::logic_error("RationalExpr: gcd does not divide");
    num_ = qn;
    den_ = qd;
  }
  GaussRat lc = den_.leading().second;
  if (lc != GaussRat(1)) {
    GaussRat inv = lc.inverse();
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }
}

RationalExpr RationalExpr::operator-() const {
  RationalExpr r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

RationalExpr RationalExpr::operator+(const RationalExpr& o) const {
  return RationalExpr(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalExpr RationalExpr::operator-(const RationalExpr& o) const {
  return *this + (-o);
}

RationalExpr RationalExpr::operator*(const RationalExpr& o) const {
  return RationalExpr(num_ * o.num_, den_ * o.den_);
}

RationalExpr RationalExpr::operator/(const RationalExpr& o) const {
  if (o.is_zero()) throw std::domain_error("RationalExpr: division by zero");
  return RationalExpr(num_ * o.den_, den_ * o.num_);
}

bool RationalExpr::operator==(const RationalExpr& o) const {
  return num_ == o.num_ && den_ == o.den_;
}

RationalExpr RationalExpr::derivative(int var) const {
  // (n/d)' = (n'd - nd')/d^2
  return RationalExpr(num_.derivative(var) * den_ - num_ * den_.derivative(var),
                      den_ * den_);
}

RationalExpr RationalExpr::conj_swap(const std::vector<int>& swap_map) const {
  return RationalExpr(num_.conj_swap(swap_map), den_.conj_swap(swap_map));
}

GaussRat RationalExpr::eval(const std::vector<GaussRat>& point) const {
  GaussRat d = den_.eval(point);
  if (d.is_zero()) throw std::domain_error("RationalExpr: pole at sample point");
  return num_.eval(point) / d;
}

bool RationalExpr::pole_at(const std::vector<GaussRat>& point) const {
  return den_.eval(point).is_zero();
}

std::string RationalExpr::str(const std::vector<std::string>& names) const {
  if (is_polynomial()) {
    GaussRat c = den_.leading().second;  // den is monic constant 1
    (void)c;
    return num_.str(names);
  }
  std::string n = num_.str(names);
  std::string d = den_.str(names);
  if (num_.terms().size() > 1) n = "(" + n + ")";
  if (den_.terms().size() > 1) d = "(" + d + ")";
  return n + "/" + d;
}

// --- metric-ring helpers ------------------------------------------------------

std::vector<int> conj_map(int n) {
  std::vector<int> m(2 * n);
  for (int j = 0; j < n; ++j) {
    m[j] = n + j;
    m[n + j] = j;
  }
  return m;
}

std::vector<std::string> var_names(int n) {
  std::vector<std::string> names(2 * n);
  if (n == 1) {
    names[0] = "z";
    names[1] = "zb";
    return names;
  }
  for (int j = 0; j < n; ++j) {
    names[j] = "z" + std::to_string(j + 1);
    names[n + j] = "zb" + std::to_string(j + 1);
  }
  return names;
}

RationalExpr z_var(int n, int j) { return RationalExpr::variable(2 * n, j); }
RationalExpr zbar_var(int n, int j) {
  return RationalExpr::variable(2 * n, n + j);
}
RationalExpr rat_const(int n, GaussRat c) {
  return RationalExpr::constant(2 * n, std::move(c));
}

RationalExpr sym_d(const RationalExpr& e, int n, int j) {
  if (j < 0 || j >= n) throw std::invalid_argument("sym_d: axis out of range");
  return e.derivative(j);
}

RationalExpr sym_dbar(const RationalExpr& e, int n, int k) {
  if (k < 0 || k >= n) throw std::invalid_argument("sym_dbar: axis out of range");
  return e.derivative(n + k);
}

// --- RationalMatrix -----------------------------------------------------------

RationalMatrix::RationalMatrix(int n_, int rows_, int cols_)
    : n(n_), rows(rows_), cols(cols_),
      entries(static_cast<size_t>(rows_) * cols_,
              RationalExpr::constant(2 * n_, GaussRat(0))) {}

RationalMatrix RationalMatrix::identity(int n, int r) {
  RationalMatrix m(n, r, r);
  for (int i = 0; i < r; ++i) m.at(i, i) = rat_const(n, GaussRat(1));
  return m;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& o) const {
  RationalMatrix m(n, rows, cols);
  for (size_t k = 0; k < entries.size(); ++k) m.entries[k] = entries[k] + o.entries[k];
  return m;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& o) const {
  RationalMatrix m(n, rows, cols);
  for (size_t k = 0; k < entries.size(); ++k) m.entries[k] = entries[k] - o.entries[k];
  return m;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
  if (cols != o.rows) throw std::invalid_argument("RationalMatrix: shape mismatch");
  RationalMatrix m(n, rows, o.cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < o.cols; ++j) {
      RationalExpr acc = rat_const(n, GaussRat(0));
      for (int k = 0; k < cols; ++k) acc = acc + at(i, k) * o.at(k, j);
      m.at(i, j) = acc;
    }
  }
  return m;
}

bool RationalMatrix::operator==(const RationalMatrix& o) const {
  return rows == o.rows && cols == o.cols && entries == o.entries;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix m(n, cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.at(j, i) = at(i, j);
  return m;
}

RationalMatrix RationalMatrix::conj_transpose() const {
  auto cm = conj_map(n);
  RationalMatrix m(n, cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.at(j, i) = at(i, j).conj_swap(cm);
  return m;
}

bool RationalMatrix::is_formal_hermitian() const {
  return rows == cols && *this == conj_transpose();
}

RationalExpr RationalMatrix::det() const {
  if (rows != cols) throw std::invalid_argument("RationalMatrix: det of non-square");
  if (rows == 1) return at(0, 0);
  RationalExpr acc = rat_const(n, GaussRat(0));
  for (int j = 0; j < cols; ++j) {
    RationalMatrix minor(n, rows - 1, cols - 1);
    for (int r = 1; r < rows; ++r) {
      int cc = 0;
      for (int c = 0; c < cols; ++c) {
        if (c == j) continue;
        minor.at(r - 1, cc++) = at(r, c);
      }
    }
    RationalExpr term = at(0, j) * minor.det();
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

RationalMatrix RationalMatrix::adjugate() const {
  if (rows != cols) throw std::invalid_argument("RationalMatrix: adjugate of non-square");
  if (rows == 1) {
    RationalMatrix m(n, 1, 1);
    m.at(0, 0) = rat_const(n, GaussRat(1));
    return m;
  }
  RationalMatrix m(n, rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      RationalMatrix minor(n, rows - 1, cols - 1);
      int rr = 0;
      for (int r = 0; r < rows; ++r) {
        if (r == i) continue;
        int cc = 0;
        for (int c = 0; c < cols; ++c) {
          if (c == j) continue;
          minor.at(rr, cc++) = at(r, c);
        }
        ++rr;
      }
      RationalExpr cof = minor.det();
      if ((i + j) % 2 == 1) cof = -cof;
      m.at(j, i) = cof;  // transpose of the cofactor matrix
    }
  }
  return m;
}

RationalMatrix RationalMatrix::inverse() const {
  RationalExpr d = det();
  if (d.is_zero())
    throw std::domain_error("RationalMatrix: identically singular");
  RationalMatrix adj = adjugate();
  RationalMatrix m(n, rows, cols);
  for (size_t k = 0; k < entries.size(); ++k) m.entries[k] = adj.entries[k] / d;
  return m;
}

RationalMatrix RationalMatrix::derivative(int j) const {
  RationalMatrix m(n, rows, cols);
  for (size_t k = 0; k < entries.size(); ++k)
    m.entries[k] = sym_d(entries[k], n, j);
  return m;
}

RationalMatrix RationalMatrix::dbar_derivative(int k) const {
  RationalMatrix m(n, rows, cols);
  for (size_t t = 0; t < entries.size(); ++t)
    m.entries[t] = sym_dbar(entries[t], n, k);
  return m;
}

std::string RationalMatrix::str() const {
  auto names = var_names(n);
  std::ostringstream s;
  s << "[";
  for (int i = 0; i < rows; ++i) {
    s << "[";
    for (int j = 0; j < cols; ++j) {
      s << at(i, j).str(names);
      if (j + 1 < cols) s << ", ";
    }
    s << "]";
    if (i + 1 < rows) s << "; ";
  }
  s << "]";
  return s.str();
}

std::vector<RationalMatrix> sym_connection(const RationalMatrix& h) {
  RationalMatrix hinv = h.inverse();
  std::vector<RationalMatrix> theta;
  theta.reserve(h.n);
  for (int j = 0; j < h.n; ++j) theta.push_back(hinv * h.derivative(j));
  return theta;
}

std::vector<RationalMatrix> sym_curvature(const RationalMatrix& h) {
  std::vector<RationalMatrix> theta = sym_connection(h);
  std::vector<RationalMatrix> curv;
  curv.reserve(static_cast<size_t>(h.n) * h.n);
  for (int j = 0; j < h.n; ++j)
    for (int k = 0; k < h.n; ++k) curv.push_back(theta[j].dbar_derivative(k));
  return curv;
}

// --- counterexample -----------------------------------------------------------

RationalMatrix counterexample_metric() {
  const int n = 1;
  RationalMatrix h(n, 2, 2);
  RationalExpr z = z_var(n, 0), zb = zbar_var(n, 0);
  RationalExpr one = rat_const(n, GaussRat(1));
  h.at(0, 0) = one + z * zb;
  h.at(0, 1) = z;
  h.at(1, 0) = zb;
  h.at(1, 1) = z * zb;
  return h;
}

CounterexampleReport verify_counterexample(bool corrupt_fixture) {
  CounterexampleReport rep;
  const int n = 1;
  RationalMatrix h = counterexample_metric();
  RationalExpr z = z_var(n, 0), zb = zbar_var(n, 0);
  if (corrupt_fixture)
    h.at(0, 0) = h.at(0, 0) + z_var(n, 0) * zbar_var(n, 0);
  RationalExpr one = rat_const(n, GaussRat(1));
  RationalExpr zero = rat_const(n, GaussRat(0));

  // dh = [[zb, 1], [0, zb]]
  RationalMatrix dh = h.derivative(0);
  RationalMatrix dh_expected(n, 2, 2);
  dh_expected.at(0, 0) = zb;
  dh_expected.at(0, 1) = one;
  dh_expected.at(1, 0) = zero;
  dh_expected.at(1, 1) = zb;
  rep.dh_matches = (dh == dh_expected);
  rep.dh_str = dh.str();

  // h^{-1} = |z|^{-4} [[|z|^2, -z], [-zb, 1+|z|^2]]
  RationalMatrix hinv = h.inverse();
  RationalExpr det4 = (z * zb) * (z * zb);
  RationalMatrix hinv_expected(n, 2, 2);
  hinv_expected.at(0, 0) = (z * zb) / det4;
  hinv_expected.at(0, 1) = -(z / det4);
  hinv_expected.at(1, 0) = -(zb / det4);
  hinv_expected.at(1, 1) = (one + z * zb) / det4;
  rep.inverse_matches = (hinv == hinv_expected);
  rep.inverse_str = hinv.str();

  // theta = [[1/z, 0], [-1/z^2, 1/z]]
  RationalMatrix theta = sym_connection(h)[0];
  RationalMatrix theta_expected(n, 2, 2);
  theta_expected.at(0, 0) = one / z;
  theta_expected.at(0, 1) = zero;
  theta_expected.at(1, 0) = -(one / (z * z));
  theta_expected.at(1, 1) = one / z;
  rep.theta_matches = (theta == theta_expected);
  rep.theta_str = theta.str();

  // Theta_11 = dbar theta vanishes as a rational function; the point mass of
  // dbar(1/z^2) at 0 is invisible here.
  RationalMatrix curv = sym_curvature(h)[0];
  RationalMatrix zero_m(n, 2, 2);
  rep.curvature_vanishes_off_origin = (curv == zero_m);

  // ||u||_h^2 = |z u1|^2 + |u1 + z u2|^2 as a polynomial identity in the ring
  // [z, u1, u2, zb, ub1, ub2].
  {
    const int m = 3;  // formal "dimensions": z, u1, u2
    RationalExpr Z = z_var(m, 0), U1 = z_var(m, 1), U2 = z_var(m, 2);
    RationalExpr Zb = zbar_var(m, 0), Ub1 = zbar_var(m, 1), Ub2 = zbar_var(m, 2);
    RationalExpr One = rat_const(m, GaussRat(1));
    RationalExpr H[2][2] = {{One + Z * Zb, Z}, {Zb, Z * Zb}};
    RationalExpr u[2] = {U1, U2};
    RationalExpr ub[2] = {Ub1, Ub2};
    RationalExpr norm = rat_const(m, GaussRat(0));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) norm = norm + ub[i] * H[i][j] * u[j];
    RationalExpr expected =
        (Z * U1) * (Zb * Ub1) + (U1 + Z * U2) * (Ub1 + Zb * Ub2);
    rep.norm_identity_matches = (norm == expected);
  }

  rep.theta21_pole_degree = theta.at(1, 0).den().degree_in(0);
  rep.non_integrability_flagged = rep.theta21_pole_degree >= 2;
  return rep;
}

}  // namespace hermet::sym

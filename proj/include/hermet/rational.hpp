// Exact rational-function matrix calculus in commuting variables z_j, zb_j.
// z_j and zb_j are treated as independent variables; "hermitian" means
// invariance under the substitution z <-> zb combined with coefficient
// conjugation. Coefficients live in Q(i) with exact rational parts, so every
// identity checked here is a polynomial identity, not a float comparison.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hermet::sym {

using BigRat = boost::multiprecision::cpp_rational;

// Element of Q(i).
struct GaussRat {
  BigRat re{0};
  BigRat im{0};

  GaussRat() = default;
  GaussRat(long v) : re(v) {}  // NOLINT(google-explicit-constructor)
  GaussRat(BigRat r, BigRat i) : re(std::move(r)), im(std::move(i)) {}

  static GaussRat i(long k = 1) { return GaussRat(BigRat(0), BigRat(k)); }
  // Exact conversion; every finite double is a dyadic rational.
  static GaussRat from_double(double x);
  static GaussRat from_complex(std::complex<double> z);

  bool is_zero() const { return re == 0 && im == 0; }
  GaussRat conj() const { return GaussRat(re, -im); }
  GaussRat inverse() const;
  std::complex<double> to_complex() const;

  GaussRat operator-() const { return GaussRat(-re, -im); }
  GaussRat& operator+=(const GaussRat& o);
  GaussRat& operator-=(const GaussRat& o);
  GaussRat operator+(const GaussRat& o) const;
  GaussRat operator-(const GaussRat& o) const;
  GaussRat operator*(const GaussRat& o) const;
  GaussRat operator/(const GaussRat& o) const;
  bool operator==(const GaussRat& o) const { return re == o.re && im == o.im; }
  bool operator!=(const GaussRat& o) const { return !(*this == o); }

  std::string str() const;
};

// Exponent vector; lexicographic order via std::vector's operator<.
using Expo = std::vector<unsigned>;

// Sparse multivariate polynomial over Q(i) with a fixed variable count.
class Poly {
 public:
  Poly() : nvars_(0) {}
  explicit Poly(int nvars) : nvars_(nvars) {}

  static Poly constant(int nvars, GaussRat c);
  static Poly variable(int nvars, int var, unsigned power = 1);

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  const std::map<Expo, GaussRat>& terms() const { return terms_; }

  void add_term(const Expo& e, const GaussRat& c);

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly scaled(const GaussRat& c) const;
  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

  Poly derivative(int var) const;
  // Applies a variable involution (e.g. z_j <-> zb_j) and conjugates
  // coefficients.
  Poly conj_swap(const std::vector<int>& swap_map) const;

  int total_degree() const;
  int degree_in(int var) const;
  // Leading term in lex order.
  const std::pair<const Expo, GaussRat>& leading() const;

  GaussRat eval(const std::vector<GaussRat>& point) const;

  // Exact quotient; returns false when b does not divide *this.
  static bool divide_exact(const Poly& a, const Poly& b, Poly& quot);
  // Monic (lex) gcd; gcd(0,0) = 0.
  static Poly gcd(const Poly& a, const Poly& b);

  std::string str(const std::vector<std::string>& names) const;

 private:
  int nvars_;
  std::map<Expo, GaussRat> terms_;
};

// Reduced fraction of polynomials; canonical form has gcd(num,den)=1 and a
// lex-monic denominator, so equal functions have identical representations.
class RationalExpr {
 public:
  RationalExpr() : num_(0), den_(Poly::constant(0, GaussRat(1))) {}
  explicit RationalExpr(Poly num);
  RationalExpr(Poly num, Poly den);

  static RationalExpr constant(int nvars, GaussRat c);
  static RationalExpr variable(int nvars, int var);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  int nvars() const { return num_.nvars(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }

  RationalExpr operator-() const;
  RationalExpr operator+(const RationalExpr& o) const;
  RationalExpr operator-(const RationalExpr& o) const;
  RationalExpr operator*(const RationalExpr& o) const;
  RationalExpr operator/(const RationalExpr& o) const;
  bool operator==(const RationalExpr& o) const;
  bool operator!=(const RationalExpr& o) const { return !(*this == o); }

  RationalExpr derivative(int var) const;
  RationalExpr conj_swap(const std::vector<int>& swap_map) const;

  // Exact evaluation, one final rounding to double in the caller.
  GaussRat eval(const std::vector<GaussRat>& point) const;
  bool pole_at(const std::vector<GaussRat>& point) const;

  std::string str(const std::vector<std::string>& names) const;

 private:
  void canonicalize();
  Poly num_, den_;
};

// --- Variable layout for metric calculus -----------------------------------
// Dimension n uses 2n variables ordered [z_1..z_n, zb_1..zb_n].

std::vector<int> conj_map(int n);                 // z_j <-> zb_j
std::vector<std::string> var_names(int n);        // "z1",..,"zb1",..
RationalExpr z_var(int n, int j);                 // z_{j+1}
RationalExpr zbar_var(int n, int j);              // zb_{j+1}
RationalExpr rat_const(int n, GaussRat c);

RationalExpr sym_d(const RationalExpr& e, int n, int j);     // d/dz_j
RationalExpr sym_dbar(const RationalExpr& e, int n, int k);  // d/dzb_k

// Matrix of rational expressions in the n-dimensional metric ring.
struct RationalMatrix {
  int n = 1;  // complex dimension of the base
  int rows = 0, cols = 0;
  std::vector<RationalExpr> entries;

  RationalMatrix() = default;
  RationalMatrix(int n_, int rows_, int cols_);
  static RationalMatrix identity(int n, int r);

  RationalExpr& at(int i, int j) { return entries[i * cols + j]; }
  const RationalExpr& at(int i, int j) const { return entries[i * cols + j]; }

  RationalMatrix operator+(const RationalMatrix& o) const;
  RationalMatrix operator-(const RationalMatrix& o) const;
  RationalMatrix operator*(const RationalMatrix& o) const;
  bool operator==(const RationalMatrix& o) const;

  RationalMatrix transpose() const;
  RationalMatrix conj_transpose() const;
  bool is_formal_hermitian() const;

  RationalExpr det() const;
  RationalMatrix adjugate() const;
  RationalMatrix inverse() const;  // throws if det == 0

  RationalMatrix derivative(int j) const;
  RationalMatrix dbar_derivative(int k) const;

  std::string str() const;
};

std::vector<RationalMatrix> sym_connection(const RationalMatrix& h);
// Theta[j*n + k] = dbar_k(theta_j)
std::vector<RationalMatrix> sym_curvature(const RationalMatrix& h);

// The rank-2 metric over the unit disc whose connection matrix fails to be
// locally integrable: h = [[1+|z|^2, z], [zb, |z|^2]].
RationalMatrix counterexample_metric();

struct CounterexampleReport {
  bool dh_matches = false;
  bool inverse_matches = false;
  bool theta_matches = false;
  bool norm_identity_matches = false;
  bool curvature_vanishes_off_origin = false;
  int theta21_pole_degree = 0;  // z-degree of the denominator of theta_21
  bool non_integrability_flagged = false;
  std::string theta_str;
  std::string dh_str;
  std::string inverse_str;
  bool ok() const {
    return dh_matches && inverse_matches && theta_matches &&
           norm_identity_matches && non_integrability_flagged;
  }
};

// Rebuilds the counterexample from scratch and checks every closed-form
// identity exactly. The distributional mass of dbar(1/z^2) at the origin is
// outside this kernel's reach (it sees functions off poles only); the report
// flags the pole order instead and the numeric side certifies integrability.
// `corrupt_fixture` perturbs one metric entry so failure paths can be tested.
CounterexampleReport verify_counterexample(bool corrupt_fixture = false);

}  // namespace hermet::sym

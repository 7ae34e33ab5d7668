#pragma once

// Closed-form calculus for polynomial x exponential integrands on intervals.
//
// Every weighted invariant in the library reduces to sums of integrals
//   int_lo^hi p(t) e^{mu t} dt
// with p a real polynomial. These are evaluated in closed form through the
// confluent series E_j(z) = int_0^1 u^j e^{zu} du, which stays accurate for
// all mu including mu -> 0.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace wkstab {

using real = long double;

// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(real x) noexcept;
  real value() const noexcept { return sum_ + comp_; }
  CompensatedSum& operator+=(real x) noexcept {
    add(x);
    return *this;
  }

 private:
  real sum_ = 0;
  real comp_ = 0;
};

// Univariate polynomial, coeffs[k] multiplies t^k. The zero polynomial has no
// coefficients; otherwise the leading coefficient is nonzero.
class Poly {
 public:
  Poly() = default;
  Poly(std::initializer_list<real> coeffs);
  explicit Poly(std::vector<real> coeffs);

  static Poly constant(real c);
  static Poly monomial(real c, std::size_t k);
  // b + a t
  static Poly linear(real a, real b);

  const std::vector<real>& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  // -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  real coeff(std::size_t k) const noexcept { return k < coeffs_.size() ? coeffs_[k] : 0; }

  real operator()(real t) const noexcept;

  Poly derivative() const;
  // Antiderivative vanishing at t = 0.
  Poly antiderivative() const;
  // q(t) = p(a t + b)
  Poly compose_affine(real a, real b) const;
  Poly pow(unsigned k) const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(real s);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, real s) { return a *= s; }
  friend Poly operator*(real s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a) { return a * real(-1); }
  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  void trim();
  std::vector<real> coeffs_;
};

// a*w + b
struct AffineForm {
  real a = 0;
  real b = 0;

  real operator()(real w) const noexcept { return a * w + b; }
  Poly to_poly() const { return Poly::linear(a, b); }
  friend bool operator==(const AffineForm&, const AffineForm&) = default;
};

// Bivariate polynomial in (w, t); coeff(i, j) multiplies w^i t^j.
class BiPoly {
 public:
  BiPoly() = default;
  explicit BiPoly(std::vector<std::vector<real>> coeffs);

  static BiPoly constant(real c);
  static BiPoly w();
  static BiPoly t();
  static BiPoly in_w(const Poly& p);
  static BiPoly in_t(const Poly& p);

  const std::vector<std::vector<real>>& coeffs() const noexcept { return coeffs_; }
  real coeff(std::size_t i, std::size_t j) const noexcept;
  bool is_zero() const noexcept { return coeffs_.empty(); }
  std::size_t w_degree_bound() const noexcept { return coeffs_.size(); }

  real operator()(real w, real t) const noexcept;

  // Polynomial in w obtained by substituting t = form(w).
  Poly restrict_t(const AffineForm& form) const;
  // Antiderivative in t vanishing at t = 0.
  BiPoly antiderivative_t() const;
  BiPoly derivative_t() const;
  BiPoly pow(unsigned k) const;

  BiPoly& operator+=(const BiPoly& o);
  BiPoly& operator-=(const BiPoly& o);
  BiPoly& operator*=(real s);

  friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
  friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
  friend BiPoly operator*(BiPoly a, real s) { return a *= s; }
  friend BiPoly operator*(real s, BiPoly a) { return a *= s; }
  friend BiPoly operator+(BiPoly a, real s) { return a += constant(s); }
  friend BiPoly operator+(real s, BiPoly a) { return a += constant(s); }
  friend BiPoly operator-(BiPoly a, real s) { return a -= constant(s); }
  friend BiPoly operator-(real s, const BiPoly& a) { return constant(s) - a; }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b);
  friend BiPoly operator-(const BiPoly& a) { return a * real(-1); }
  friend bool operator==(const BiPoly&, const BiPoly&) = default;

 private:
  void trim();
  std::vector<std::vector<real>> coeffs_;
};

struct ExpTerm {
  Poly p;
  real mu = 0;
};

struct ExpPiece {
  real lo = 0;
  real hi = 0;
  std::vector<ExpTerm> terms;
};

// Sum over disjoint ordered intervals of sum_i p_i(t) e^{mu_i t}.
class PiecewiseExpPoly {
 public:
  PiecewiseExpPoly() = default;
  // Sorts pieces by lo; throws InvalidInput on zero-length, inverted or
  // overlapping pieces.
  explicit PiecewiseExpPoly(std::vector<ExpPiece> pieces);

  const std::vector<ExpPiece>& pieces() const noexcept { return pieces_; }
  real operator()(real t) const;

 private:
  std::vector<ExpPiece> pieces_;
};

// Chamberwise polynomial on [lo_0, hi_last]: the common shape of slice
// areas, moment profiles and DH densities.
struct Chamber {
  real lo = 0;
  real hi = 0;
  Poly p;
};

struct PiecewisePoly {
  std::vector<Chamber> chambers;

  real operator()(real t) const;
  real lo() const { return chambers.empty() ? 0 : chambers.front().lo; }
  real hi() const { return chambers.empty() ? 0 : chambers.back().hi; }
  // Multiplies every chamber polynomial by q.
  PiecewisePoly times(const Poly& q) const;
  // The density p(t) e^{mu t} as an exponential piecewise function.
  PiecewiseExpPoly weighted(real mu) const;
};

// int_lo^hi p(t) e^{mu t} dt
real integrate_exp_poly(const Poly& p, real mu, real lo, real hi);

real integrate_piecewise(const PiecewiseExpPoly& f);

// int_lo^hi e^{mu t} f(t) dt summed over chambers.
real integrate_weighted(const PiecewisePoly& f, real mu);

// The polynomial in w equal to int_{lower(w)}^{upper(w)} q(w, t) dt.
Poly inner_integrate(const BiPoly& q, const AffineForm& lower, const AffineForm& upper);

// E_j(z) = int_0^1 u^j e^{zu} du.
real confluent_moment(unsigned j, real z);

}  // namespace wkstab

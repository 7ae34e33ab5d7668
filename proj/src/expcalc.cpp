#include "wkstab/expcalc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wkstab/error.hpp"

namespace wkstab {

void CompensatedSum::add(real x) noexcept {
  const real t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

// ---------------------------------------------------------------------------
// Poly

Poly::Poly(std::initializer_list<real> coeffs) : coeffs_(coeffs) { trim(); }

Poly::Poly(std::vector<real> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Poly Poly::constant(real c) { return Poly{c}; }

Poly Poly::monomial(real c, std::size_t k) {
  std::vector<real> v(k + 1, 0);
  v[k] = c;
  return Poly(std::move(v));
}

Poly Poly::linear(real a, real b) { return Poly{b, a}; }

void Poly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

real Poly::operator()(real t) const noexcept {
  real acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Poly Poly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<real> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<real>(k);
  return Poly(std::move(d));
}

Poly Poly::antiderivative() const {
  if (coeffs_.empty()) return {};
  std::vector<real> a(coeffs_.size() + 1, 0);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) a[k + 1] = coeffs_[k] / static_cast<real>(k + 1);
  return Poly(std::move(a));
}

Poly Poly::compose_affine(real a, real b) const {
  // Horner in the polynomial ring: ((c_n)(a t + b) + c_{n-1})(a t + b) + ...
  Poly out;
  const Poly inner = Poly::linear(a, b);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    out = out * inner;
    out += Poly::constant(*it);
  }
  return out;
}

Poly Poly::pow(unsigned k) const {
  Poly out = Poly::constant(1);
  for (unsigned i = 0; i < k; ++i) out = out * *this;
  return out;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0);
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0);
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  trim();
  return *this;
}

Poly& Poly::operator*=(real s) {
  for (auto& c : coeffs_) c *= s;
  trim();
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<real> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Poly(std::move(c));
}

// ---------------------------------------------------------------------------
// BiPoly

BiPoly::BiPoly(std::vector<std::vector<real>> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

BiPoly BiPoly::constant(real c) { return BiPoly(std::vector<std::vector<real>>{{c}}); }
BiPoly BiPoly::w() { return BiPoly(std::vector<std::vector<real>>{{0}, {1}}); }
BiPoly BiPoly::t() { return BiPoly(std::vector<std::vector<real>>{{0, 1}}); }

BiPoly BiPoly::in_w(const Poly& p) {
  std::vector<std::vector<real>> c;
  for (real x : p.coeffs()) c.push_back({x});
  return BiPoly(std::move(c));
}

BiPoly BiPoly::in_t(const Poly& p) { return BiPoly({p.coeffs()}); }

void BiPoly::trim() {
  for (auto& row : coeffs_)
    while (!row.empty() && row.back() == 0) row.pop_back();
  while (!coeffs_.empty() && coeffs_.back().empty()) coeffs_.pop_back();
}

real BiPoly::coeff(std::size_t i, std::size_t j) const noexcept {
  if (i >= coeffs_.size() || j >= coeffs_[i].size()) return 0;
  return coeffs_[i][j];
}

real BiPoly::operator()(real w, real t) const noexcept {
  real acc = 0;
  for (auto row = coeffs_.rbegin(); row != coeffs_.rend(); ++row) {
    real inner = 0;
    for (auto it = row->rbegin(); it != row->rend(); ++it) inner = inner * t + *it;
    acc = acc * w + inner;
  }
  return acc;
}

Poly BiPoly::restrict_t(const AffineForm& form) const {
  Poly out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    // row i contributes w^i * r_i(form(w))
    const Poly ri = Poly(coeffs_[i]).compose_affine(form.a, form.b);
    out += Poly::monomial(1, i) * ri;
  }
  return out;
}

BiPoly BiPoly::antiderivative_t() const {
  std::vector<std::vector<real>> c(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    c[i].assign(coeffs_[i].size() + 1, 0);
    for (std::size_t j = 0; j < coeffs_[i].size(); ++j)
      c[i][j + 1] = coeffs_[i][j] / static_cast<real>(j + 1);
  }
  return BiPoly(std::move(c));
}

BiPoly BiPoly::derivative_t() const {
  std::vector<std::vector<real>> c(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 1; j < coeffs_[i].size(); ++j) {
      if (c[i].size() < j) c[i].resize(j, 0);
      c[i][j - 1] = coeffs_[i][j] * static_cast<real>(j);
    }
  return BiPoly(std::move(c));
}

BiPoly BiPoly::pow(unsigned k) const {
  BiPoly out = constant(1);
  for (unsigned i = 0; i < k; ++i) out = out * *this;
  return out;
}

BiPoly& BiPoly::operator+=(const BiPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) {
    auto& row = coeffs_[i];
    if (o.coeffs_[i].size() > row.size()) row.resize(o.coeffs_[i].size(), 0);
    for (std::size_t j = 0; j < o.coeffs_[i].size(); ++j) row[j] += o.coeffs_[i][j];
  }
  trim();
  return *this;
}

BiPoly& BiPoly::operator-=(const BiPoly& o) { return *this += o * real(-1); }

BiPoly& BiPoly::operator*=(real s) {
  for (auto& row : coeffs_)
    for (auto& c : row) c *= s;
  trim();
  return *this;
}

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<std::vector<real>> c(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t k = 0; k < b.coeffs_.size(); ++k) {
      const auto& ra = a.coeffs_[i];
      const auto& rb = b.coeffs_[k];
      if (ra.empty() || rb.empty()) continue;
      auto& out = c[i + k];
      if (out.size() < ra.size() + rb.size() - 1) out.resize(ra.size() + rb.size() - 1, 0);
      for (std::size_t j = 0; j < ra.size(); ++j)
        for (std::size_t l = 0; l < rb.size(); ++l) out[j + l] += ra[j] * rb[l];
    }
  return BiPoly(std::move(c));
}

// ---------------------------------------------------------------------------
// Piecewise containers

PiecewiseExpPoly::PiecewiseExpPoly(std::vector<ExpPiece> pieces) : pieces_(std::move(pieces)) {
  for (const auto& p : pieces_) {
    if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || !(p.lo < p.hi))
      throw Error(ErrorKind::InvalidInput, "piece interval must satisfy lo < hi");
  }
  std::sort(pieces_.begin(), pieces_.end(),
            [](const ExpPiece& x, const ExpPiece& y) { return x.lo < y.lo; });
  for (std::size_t i = 1; i < pieces_.size(); ++i)
    if (pieces_[i].lo < pieces_[i - 1].hi)
      throw Error(ErrorKind::InvalidInput, "overlapping pieces");
}

real PiecewiseExpPoly::operator()(real t) const {
  for (const auto& piece : pieces_) {
    if (t < piece.lo || t > piece.hi) continue;
    real v = 0;
    for (const auto& term : piece.terms) v += term.p(t) * std::exp(term.mu * t);
    return v;
  }
  return 0;
}

real PiecewisePoly::operator()(real t) const {
  for (const auto& c : chambers)
    if (t >= c.lo && t <= c.hi) return c.p(t);
  return 0;
}

PiecewisePoly PiecewisePoly::times(const Poly& q) const {
  PiecewisePoly out = *this;
  for (auto& c : out.chambers) c.p = c.p * q;
  return out;
}

PiecewiseExpPoly PiecewisePoly::weighted(real mu) const {
  std::vector<ExpPiece> pieces;
  for (const auto& c : chambers) {
    if (c.hi <= c.lo) continue;
    pieces.push_back({c.lo, c.hi, {ExpTerm{c.p, mu}}});
  }
  return PiecewiseExpPoly(std::move(pieces));
}

// ---------------------------------------------------------------------------
// Integration

real confluent_moment(unsigned j, real z) {
  const real jr = static_cast<real>(j);
  if (z == 0) return 1 / (jr + 1);
  const real eps = std::numeric_limits<real>::epsilon();
  if (j == 0 || std::fabs(z) > jr + 1) {
    // Forward recursion E_k = (e^z - k E_{k-1}) / z; each step scales the
    // inherited error by k/|z| < 1 in this regime.
    const real ez = std::exp(z);
    real e = std::expm1(z) / z;
    for (unsigned k = 1; k <= j; ++k) e = (ez - static_cast<real>(k) * e) / z;
    return e;
  }
  if (z > 0) {
    // sum_n z^n / (n! (n + j + 1)), all terms positive
    real term = 1;
    real sum = 1 / (jr + 1);
    for (unsigned n = 1; n < 400; ++n) {
      term *= z / static_cast<real>(n);
      const real add = term / (static_cast<real>(n) + jr + 1);
      sum += add;
      if (add < eps * sum) break;
    }
    return sum;
  }
  // Kummer transformation: E_j(z) = e^z/(j+1) * sum_n (-z)^n / ((j+2)...(j+1+n)),
  // all terms positive for z < 0.
  const real x = -z;
  real term = 1;
  real sum = 1;
  for (unsigned n = 1; n < 400; ++n) {
    term *= x / (jr + 1 + static_cast<real>(n));
    sum += term;
    if (term < eps * sum) break;
  }
  return std::exp(z) * sum / (jr + 1);
}

real integrate_exp_poly(const Poly& p, real mu, real lo, real hi) {
  if (lo == hi || p.is_zero()) return 0;
  if (lo > hi) return -integrate_exp_poly(p, mu, hi, lo);
  if (std::fabs(mu) < 1e-8L) {
    // mu = 0 antiderivative plus the first-order term in mu.
    const Poly a0 = p.antiderivative();
    const Poly a1 = (p * Poly::monomial(1, 1)).antiderivative();
    return (a0(hi) - a0(lo)) + mu * (a1(hi) - a1(lo));
  }
  const real h = hi - lo;
  // Anchor at the endpoint of smaller magnitude: t = c + sign * s, s in [0, h].
  const bool from_lo = std::fabs(lo) <= std::fabs(hi);
  const real c = from_lo ? lo : hi;
  const real dir = from_lo ? 1 : -1;
  const Poly q = p.compose_affine(dir, c);
  const real z = dir * mu * h;
  CompensatedSum acc;
  real hp = h;
  for (std::size_t j = 0; j < q.coeffs().size(); ++j) {
    acc += q.coeffs()[j] * hp * confluent_moment(static_cast<unsigned>(j), z);
    hp *= h;
  }
  return std::exp(mu * c) * acc.value();
}

real integrate_piecewise(const PiecewiseExpPoly& f) {
  CompensatedSum acc;
  for (const auto& piece : f.pieces())
    for (const auto& term : piece.terms) acc += integrate_exp_poly(term.p, term.mu, piece.lo, piece.hi);
  return acc.value();
}

real integrate_weighted(const PiecewisePoly& f, real mu) {
  CompensatedSum acc;
  for (const auto& c : f.chambers) acc += integrate_exp_poly(c.p, mu, c.lo, c.hi);
  return acc.value();
}

Poly inner_integrate(const BiPoly& q, const AffineForm& lower, const AffineForm& upper) {
  const BiPoly anti = q.antiderivative_t();
  return anti.restrict_t(upper) - anti.restrict_t(lower);
}

}  // namespace wkstab

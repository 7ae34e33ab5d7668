#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "wkstab/error.hpp"
#include "wkstab/expcalc.hpp"

namespace wkstab {

// Small exact rational used for vertex coordinates.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num(n), den(1) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (d == 0) throw Error(ErrorKind::InvalidInput, "zero denominator");
    normalize();
  }

  real to_real() const { return static_cast<real>(num) / static_cast<real>(den); }
  bool in_lowest_terms() const { return den > 0 && std::gcd(num, den) == 1; }
  std::string str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }

 private:
  void normalize() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
};

}  // namespace wkstab

#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace d4dr {

struct arithmetic_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Element of the 4-dimensional Q-algebra Q(i, sqrt2):
//   a + b*i + c*sqrt2 + d*i*sqrt2,  i^2 = -1, sqrt2^2 = 2.
// Components are exact rationals kept in lowest terms.
class Scalar {
 public:
  Scalar() : c_{} {}
  Scalar(long n) : c_{} { c_[0] = n; }
  Scalar(const mpq_class& q) : c_{} { c_[0] = q; canon(); }
  Scalar(mpq_class a, mpq_class b, mpq_class c, mpq_class d)
      : c_{std::move(a), std::move(b), std::move(c), std::move(d)} {
    canon();
  }

  static Scalar i() { return Scalar(0, 1, 0, 0); }
  static Scalar sqrt2() { return Scalar(0, 0, 1, 0); }
  static Scalar rational(long num, long den);
  // parses a single rational component "p/q" or "p"
  static mpq_class parse_rational(const std::string& s);
  // four components [a, b, c, d], each "p/q"
  static Scalar from_strings(const std::array<std::string, 4>& s);

  const mpq_class& comp(int k) const { return c_[k]; }
  const mpq_class& rat() const {
    if (!is_rational()) throw arithmetic_error("scalar is not rational");
    return c_[0];
  }

  bool is_zero() const {
    return sgn(c_[0]) == 0 && sgn(c_[1]) == 0 && sgn(c_[2]) == 0 &&
           sgn(c_[3]) == 0;
  }
  bool is_rational() const {
    return sgn(c_[1]) == 0 && sgn(c_[2]) == 0 && sgn(c_[3]) == 0;
  }

  Scalar operator-() const { return Scalar(-c_[0], -c_[1], -c_[2], -c_[3]); }
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  friend Scalar operator+(Scalar x, const Scalar& y) { return x += y; }
  friend Scalar operator-(Scalar x, const Scalar& y) { return x -= y; }
  friend Scalar operator*(const Scalar& x, const Scalar& y);
  friend Scalar operator/(const Scalar& x, const Scalar& y) {
    return x * y.inverse();
  }

  Scalar inverse() const;
  Scalar pow(long e) const;
  Scalar conj_i() const { return Scalar(c_[0], -c_[1], c_[2], -c_[3]); }
  Scalar conj_sqrt2() const { return Scalar(c_[0], c_[1], -c_[2], -c_[3]); }

  bool operator==(const Scalar& o) const { return c_ == o.c_; }
  bool operator!=(const Scalar& o) const { return !(*this == o); }
  // total order used only for deterministic output
  bool operator<(const Scalar& o) const;

  std::array<std::string, 4> to_strings() const;
  std::string str() const;  // human-readable, e.g. "3/2 - 1/2*I*sqrt2"

 private:
  std::array<mpq_class, 4> c_;
  void canon() {
    for (auto& q : c_) q.canonicalize();
  }
};

}  // namespace d4dr

#include "d4dr/scalar.hpp"

namespace d4dr {

Scalar Scalar::rational(long num, long den) {
  if (den == 0) throw arithmetic_error("zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return Scalar(q);
}

mpq_class Scalar::parse_rational(const std::string& s) {
  if (s.empty()) throw arithmetic_error("empty rational literal");
  mpq_class q;
  if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
    throw arithmetic_error("bad rational literal: " + s);
  if (sgn(mpq_class(q.get_den())) == 0)
    throw arithmetic_error("zero denominator: " + s);
  q.canonicalize();
  return q;
}

Scalar Scalar::from_strings(const std::array<std::string, 4>& s) {
  return Scalar(parse_rational(s[0]), parse_rational(s[1]), parse_rational(s[2]),
                parse_rational(s[3]));
}

Scalar& Scalar::operator+=(const Scalar& o) {
  for (int k = 0; k < 4; ++k)
    if (sgn(o.c_[k]) != 0) c_[k] += o.c_[k];
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  for (int k = 0; k < 4; ++k)
    if (sgn(o.c_[k]) != 0) c_[k] -= o.c_[k];
  return *this;
}

Scalar operator*(const Scalar& x, const Scalar& y) {
  // fast path: both plain rationals (the dominant case)
  if (x.is_rational() && y.is_rational()) {
    Scalar r;
    if (sgn(x.c_[0]) != 0 && sgn(y.c_[0]) != 0) r.c_[0] = x.c_[0] * y.c_[0];
    return r;
  }
  // basis products: 1,i,s,is with i^2=-1, s^2=2, (is)^2=-2
  const auto& a = x.c_;
  const auto& b = y.c_;
  Scalar r;
  r.c_[0] = a[0] * b[0] - a[1] * b[1] + 2 * (a[2] * b[2] - a[3] * b[3]);
  r.c_[1] = a[0] * b[1] + a[1] * b[0] + 2 * (a[2] * b[3] + a[3] * b[2]);
  r.c_[2] = a[0] * b[2] + a[2] * b[0] - a[1] * b[3] - a[3] * b[1];
  r.c_[3] = a[0] * b[3] + a[3] * b[0] + a[1] * b[2] + a[2] * b[1];
  return r;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw arithmetic_error("inverse of zero");
  if (is_rational()) {
    mpq_class q = 1 / c_[0];
    return Scalar(q);
  }
  // 1/z = z_i * z_s * z_is / N with N = z * z_i * z_s * z_is rational
  Scalar pc = conj_i() * conj_sqrt2() * conj_sqrt2().conj_i();
  Scalar n = *this * pc;
  if (!n.is_rational() || sgn(n.c_[0]) == 0)
    throw arithmetic_error("norm failure in Q(i,sqrt2) inverse");
  mpq_class inv = 1 / n.c_[0];
  return pc * Scalar(inv);
}

Scalar Scalar::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  Scalar r(1), b = *this;
  while (e > 0) {
    if (e & 1) r *= b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

bool Scalar::operator<(const Scalar& o) const {
  for (int k = 0; k < 4; ++k) {
    int c = cmp(c_[k], o.c_[k]);
    if (c != 0) return c < 0;
  }
  return false;
}

std::array<std::string, 4> Scalar::to_strings() const {
  std::array<std::string, 4> out;
  for (int k = 0; k < 4; ++k) out[k] = c_[k].get_str();
  return out;
}

std::string Scalar::str() const {
  static const char* unit[4] = {"", "I", "sqrt2", "I*sqrt2"};
  std::string out;
  for (int k = 0; k < 4; ++k) {
    if (sgn(c_[k]) == 0) continue;
    mpq_class q = c_[k];
    std::string term;
    if (q < 0) {
      term = out.empty() ? "-" : " - ";
      q = -q;
    } else if (!out.empty()) {
      term = " + ";
    }
    std::string mag = q.get_str();
    if (k == 0) {
      term += mag;
    } else if (q == 1) {
      term += unit[k];
    } else {
      term += mag + "*" + unit[k];
    }
    out += term;
  }
  return out.empty() ? "0" : out;
}

}  // namespace d4dr

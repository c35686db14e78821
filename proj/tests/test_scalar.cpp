#include "doctest.h"

#include "d4dr/scalar.hpp"

using namespace d4dr;

TEST_CASE("construction and canonical form") {
  CHECK(Scalar(0).is_zero());
  CHECK(Scalar::rational(3, 6).str() == "1/2");
  CHECK(Scalar::rational(-4, 2).str() == "-2");
  CHECK(Scalar(mpq_class(7)).rat() == 7);
  CHECK(Scalar(2, 0, 0, 0) == Scalar(2));
  CHECK(Scalar::parse_rational("-3/9") == mpq_class(-1, 3));
}

TEST_CASE("algebra relations") {
  Scalar i = Scalar::i();
  Scalar r2 = Scalar::sqrt2();
  CHECK(i * i == Scalar(-1));
  CHECK(r2 * r2 == Scalar(2));
  CHECK((i * r2) * (i * r2) == Scalar(-2));
  // (1+i)^4 = -4
  CHECK((Scalar(1) + i).pow(4) == Scalar(-4));
  CHECK(r2.pow(-2) == Scalar::rational(1, 2));
  CHECK(i.pow(0) == Scalar(1));
}

TEST_CASE("inverse and division") {
  Scalar x = Scalar(1) + Scalar(2) * Scalar::i() - Scalar(3) * Scalar::sqrt2() +
             Scalar::rational(1, 2) * Scalar::i() * Scalar::sqrt2();
  CHECK(x * x.inverse() == Scalar(1));
  CHECK(x / x == Scalar(1));
  CHECK_THROWS_AS(Scalar(0).inverse(), arithmetic_error);
  // the norm (product over both conjugations) is rational
  Scalar norm = x * x.conj_i() * x.conj_sqrt2() * x.conj_i().conj_sqrt2();
  CHECK(norm.is_rational());
}

TEST_CASE("conjugations are ring maps") {
  Scalar x = Scalar(3) + Scalar::i() * Scalar::rational(1, 5);
  Scalar y = Scalar::sqrt2() - Scalar(2) * Scalar::i() * Scalar::sqrt2();
  CHECK((x * y).conj_i() == x.conj_i() * y.conj_i());
  CHECK((x + y).conj_sqrt2() == x.conj_sqrt2() + y.conj_sqrt2());
  CHECK(x.conj_i().conj_i() == x);
  CHECK(y.conj_sqrt2().conj_sqrt2() == y);
}

TEST_CASE("string round trip") {
  Scalar x(mpq_class(3, 2), mpq_class(-1), mpq_class(0), mpq_class(5, 7));
  CHECK(Scalar::from_strings(x.to_strings()) == x);
  CHECK(x.str() == "3/2 - I + 5/7*I*sqrt2");
  CHECK(Scalar::i().str() == "I");
  CHECK((-Scalar::i()).str() == "-I");
  CHECK(Scalar(0).str() == "0");
}

TEST_CASE("rational guard") {
  CHECK(Scalar(5).is_rational());
  CHECK(!Scalar::i().is_rational());
  CHECK_THROWS_AS(Scalar::sqrt2().rat(), arithmetic_error);
}

TEST_CASE("deterministic total order") {
  Scalar a = Scalar::rational(1, 3);
  Scalar b = Scalar::i();
  CHECK(a != b);
  CHECK((a < b) != (b < a));
  CHECK(!(a < a));
}

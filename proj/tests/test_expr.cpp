#include "doctest.h"

#include <string>
#include <vector>

#include "d4dr/diffop.hpp"
#include "d4dr/expr.hpp"

using namespace d4dr;

namespace {

DiffPoly u(int idx, int order = 0) { return DiffPoly::var(Alphabet::u, idx, order); }

}  // namespace

TEST_CASE("parser accepts the canonical grammar") {
  CHECK(parse_poly("u1") == u(1));
  CHECK(parse_poly("ut3_2") == DiffPoly::var(Alphabet::ut, 3, 2));
  CHECK(parse_poly("rho_1") == DiffPoly::rho(1));
  CHECK(parse_poly("3/2*u1*u2_1") == u(1) * u(2, 1) * Scalar::rational(3, 2));
  CHECK(parse_poly("u1^3 - u2") == u(1).pow(3) - u(2));
  CHECK(parse_poly("I*sqrt2*eps^2") ==
        DiffPoly::eps(2) * (Scalar::i() * Scalar::sqrt2()));
  CHECK(parse_poly("hbar^2*u4") == DiffPoly::hbar(2) * u(4));
  CHECK(parse_poly("-u1 + 2") == DiffPoly(2) - u(1));
  CHECK(parse_poly("(u1 + u2)^2") == (u(1) + u(2)).pow(2));
  CHECK(parse_poly("0") == DiffPoly());
  // built-in total derivative
  CHECK(parse_poly("dx(u1^2)") == d_x(u(1).pow(2)));
  CHECK(parse_poly("dx(u1, 3)") == d_x(u(1), 3));
}

TEST_CASE("parser rejects malformed input") {
  CHECK_THROWS_AS(parse_poly("u1 +"), structure_error);
  CHECK_THROWS_AS(parse_poly("w1"), structure_error);
  CHECK_THROWS_AS(parse_poly("u1_"), structure_error);
  CHECK_THROWS_AS(parse_poly("rho1"), structure_error);
  CHECK_THROWS_AS(parse_poly("u1 u2"), structure_error);
  CHECK_THROWS_AS(parse_poly(""), structure_error);
}

TEST_CASE("text form round trips through the parser") {
  std::vector<DiffPoly> corpus = {
      u(1),
      u(1).pow(3) + u(1, 2),
      u(1) * u(2, 1) * Scalar::rational(-5, 7),
      DiffPoly::eps(3) * DiffPoly::var(Alphabet::s, 2, 4) -
          DiffPoly::var(Alphabet::vt, 1, 1),
      DiffPoly::hbar(2) * u(4) * (Scalar::i() * Scalar::rational(1, 3)),
      DiffPoly::rho(2) * DiffPoly::rho() +
          DiffPoly::var(Alphabet::v, 3) * Scalar::sqrt2(),
      (u(1) + u(2)).pow(3) - DiffPoly(Scalar::rational(9, 2)),
      DiffPoly::var(Alphabet::ut, 2, 11) * DiffPoly::eps(1),
      DiffPoly(),
  };
  for (const DiffPoly& f : corpus) {
    CAPTURE(f.str());
    CHECK(parse_poly(f.str()) == f);
  }
}

TEST_CASE("latex rendering") {
  CHECK(latex(u(1)) == "u^1");
  CHECK(latex(DiffPoly::var(Alphabet::ut, 3, 2)) == "{\\widetilde u}^3_2");
  CHECK(latex(DiffPoly::var(Alphabet::vt, 1, 0)) == "{\\widetilde v}^1");
  CHECK(latex(DiffPoly::rho(1)) == "\\rho_1");
  CHECK(latex(DiffPoly::var(Alphabet::u, 1, 12)) == "u^1_{12}");
  CHECK(latex(u(1) * u(1)) == "\\left(u^1\\right)^{2}");
  CHECK(latex(u(1) * Scalar::rational(-1, 2)) == "-\\frac{1}{2} u^1");
  CHECK(latex(DiffPoly::eps(2) * u(2)) == "u^2 \\epsilon^{2}");
  CHECK(latex(DiffPoly()) == "0");
  CHECK(latex(DiffPoly(1)) == "1");

  DiffOp k = DiffOp::dx(1) * Scalar(2);
  CHECK(latex(k) == "2\\,\\partial_x");
  CHECK(latex(DiffOp::dx(3)) == "\\partial_x^{3}");
  CHECK(latex(DiffOp()) == "0");
}

TEST_CASE("operator text matches the entry style") {
  CHECK((DiffOp::dx(1) * Scalar(2)).str() == "2*dx");
  CHECK((DiffOp::dx(2) + DiffOp::mult(u(1))).str() == "dx^2 + u1");
}

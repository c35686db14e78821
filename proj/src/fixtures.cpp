#include "d4dr/fixtures.hpp"

#include "d4dr/expr.hpp"

namespace d4dr::fx {

std::array<DiffPoly, 3> vt_of_v() {
  return {
      parse_poly("1/4*sqrt2*v1_1*eps - 1/16*sqrt2*v2_3*eps^3 + "
                 "1/16*sqrt2*v3_5*eps^5"),
      parse_poly("3/4*sqrt2*v2_1*eps - 5/8*sqrt2*v3_3*eps^3"),
      parse_poly("5/4*sqrt2*v3_1*eps"),
  };
}

std::array<DiffPoly, 4> s_of_ut() {
  return {
      parse_poly("1/2*ut1 + 1/12*ut2*ut3 + 1/216*ut3^3"
                 " + (-1/8*ut3_1^2 - 1/6*ut2_2 - 1/9*ut3*ut3_2)*eps^2"
                 " + 23/90*ut3_4*eps^4"),
      parse_poly("1/2*ut2 + 1/8*ut3^2 - 1/2*ut3_2*eps^2"),
      parse_poly("1/2*ut3"),
      parse_poly("1/2*ut4"),
  };
}

std::array<DiffPoly, 4> ut_of_v() {
  return {
      parse_poly("v1 - 1/6*v2*v3 + 7/216*v3^3"
                 " + (1/12*v3_1^2 - 5/12*v2_2 + 11/36*v3*v3_2)*eps^2"
                 " + 89/90*v3_4*eps^4"),
      parse_poly("v2 - 1/4*v3^2 - 3/2*v3_2*eps^2"),
      parse_poly("v3"),
      parse_poly("2*rho"),
  };
}

std::map<std::pair<int, int>, DiffPoly> h_densities() {
  std::map<std::pair<int, int>, DiffPoly> h;
  h[{1, 0}] = parse_poly(
      "1/12*ut2^2 + 1/6*ut1*ut3 + 1/4*ut4^2"
      " + (1/72*ut3*ut3_1^2 + 1/3*ut1_2 + 1/216*ut3^2*ut3_2)*eps^2"
      " + (1/216*ut3_2^2 + 1/72*ut3_1*ut3_3 + 1/180*ut3*ut3_4)*eps^4"
      " + 1/840*ut3_6*eps^6");
  h[{2, 0}] = parse_poly(
      "1/6*ut1*ut2 - 1/72*ut2^2*ut3 + 1/648*ut2*ut3^3 + 1/24*ut3*ut4^2"
      " + (-1/24*ut2_1^2 + 1/24*ut3*ut2_1*ut3_1 + 1/72*ut2*ut3_1^2"
      "    + 1/8*ut4_1^2 - 1/18*ut2*ut2_2 + 1/72*ut3^2*ut2_2"
      "    + 1/54*ut2*ut3*ut3_2 + 1/6*ut4*ut4_2)*eps^2"
      " + (1/12*ut2_2*ut3_2 + 5/72*ut3_1*ut2_3 + 1/18*ut2_1*ut3_3"
      "    + 1/36*ut3*ut2_4 + 2/135*ut2*ut3_4)*eps^4"
      " + 1/72*ut2_6*eps^6");
  h[{3, 0}] = parse_poly(
      "1/12*ut1^2 - 1/216*ut2^3 + 1/432*ut2^2*ut3^2 + 1/233280*ut3^6"
      " + 1/24*ut2*ut4^2 + 1/144*ut3^2*ut4^2"
      " + (5/432*ut3*ut2_1^2 + 1/108*ut3*ut1_1*ut3_1 + 1/36*ut2*ut2_1*ut3_1"
      "    + 1/1296*ut3^3*ut3_1^2 + 1/12*ut4*ut3_1*ut4_1 + 5/144*ut3*ut4_1^2"
      "    + 1/216*ut3^2*ut1_2 + 1/54*ut2*ut3*ut2_2 + 1/108*ut2^2*ut3_2"
      "    + 1/3888*ut3^4*ut3_2 + 1/36*ut4^2*ut3_2 + 1/18*ut3*ut4*ut4_2)"
      "   *eps^2"
      " + (5/2592*ut3_1^4 + 13/720*ut2_2^2 + 55/3888*ut3*ut3_1^2*ut3_2"
      "    + 29/1080*ut1_2*ut3_2 + 67/15552*ut3^2*ut3_2^2 + 13/240*ut4_2^2"
      "    + 1/30*ut3_1*ut1_3 + 31/1080*ut2_1*ut2_3 + 11/1080*ut1_1*ut3_3"
      "    + 49/7776*ut3^2*ut3_1*ut3_3 + 31/360*ut4_1*ut4_3 + 1/60*ut3*ut1_4"
      "    + 2/135*ut2*ut2_4 + 1/1296*ut3^3*ut3_4 + 2/45*ut4*ut4_4)*eps^4"
      " + (1129/116640*ut3_2^3 + 1601/38880*ut3_1*ut3_2*ut3_3"
      "    + 1/120*ut3*ut3_3^2 + 19/1620*ut3_1^2*ut3_4"
      "    + 29/2160*ut3*ut3_2*ut3_4 + 13/1944*ut3*ut3_1*ut3_5"
      "    + 11/1080*ut1_6 + 17/19440*ut3^2*ut3_6)*eps^6"
      " + (191/43200*ut3_4^2 + 1501/194400*ut3_3*ut3_5"
      "    + 949/194400*ut3_2*ut3_6 + 127/64800*ut3_1*ut3_7"
      "    + 13/32400*ut3*ut3_8)*eps^8"
      " + 7/118800*ut3_10*eps^10");
  h[{4, 0}] = parse_poly(
      "1/2*ut1*ut4 + 1/12*ut2*ut3*ut4 + 1/216*ut3^3*ut4"
      " + (1/24*ut4*ut3_1^2 + 1/4*ut2_1*ut4_1 + 1/8*ut3*ut3_1*ut4_1"
      "    + 1/6*ut4*ut2_2 + 1/18*ut3*ut4*ut3_2 + 1/6*ut2*ut4_2"
      "    + 1/24*ut3^2*ut4_2)*eps^2"
      " + (1/4*ut3_2*ut4_2 + 1/6*ut4_1*ut3_3 + 5/24*ut3_1*ut4_3"
      "    + 2/45*ut4*ut3_4 + 1/12*ut3*ut4_4)*eps^4"
      " + 1/24*ut4_6*eps^6");
  h[{1, 1}] = parse_poly(
      "1/12*ut1*ut2^2 + 1/12*ut1^2*ut3 - 1/108*ut2^3*ut3"
      " + 1/432*ut2^2*ut3^3 + 1/326592*ut3^7 + 1/4*ut1*ut4^2"
      " + 1/12*ut2*ut3*ut4^2 + 1/144*ut3^3*ut4^2"
      " + (1/6*ut1_1^2 + 1/3*ut1_2*ut1 - 5/72*ut2_1^2*ut2 + 5/24*ut4_1^2*ut2"
      "    - 1/18*ut2_2*ut2^2 + 1/54*ut3_1^2*ut2^2 + 1/72*ut3_1^2*ut1*ut3"
      "    + 19/216*ut2_1*ut3_1*ut2*ut3 + 1/36*ut3_2*ut2^2*ut3"
      "    + 1/54*ut2_1^2*ut3^2 + 1/72*ut1_1*ut3_1*ut3^2 + 1/18*ut4_1^2*ut3^2"
      "    + 1/216*ut3_2*ut1*ut3^2 + 7/216*ut2_2*ut2*ut3^2"
      "    + 1/216*ut1_2*ut3^3 + 7/7776*ut3_1^2*ut3^4 + 1/3888*ut3_2*ut3^5"
      "    + 5/12*ut2_1*ut4_1*ut4 + 1/3*ut4_2*ut2*ut4"
      "    + 19/72*ut3_1*ut4_1*ut3*ut4 + 7/72*ut4_2*ut3^2*ut4"
      "    + 1/6*ut2_2*ut4^2 + 1/18*ut3_1^2*ut4^2 + 1/12*ut3_2*ut3*ut4^2)"
      "   *eps^2"
      " + (7/24*ut2_1*ut2_2*ut3_1 + 5/72*ut1_2*ut3_1^2 + 31/216*ut2_1^2*ut3_2"
      "    + 13/216*ut1_1*ut3_1*ut3_2 + 31/72*ut3_2*ut4_1^2"
      "    + 7/8*ut3_1*ut4_1*ut4_2 + 1/216*ut3_2^2*ut1 + 1/72*ut3_1*ut3_3*ut1"
      "    + 35/216*ut2_3*ut3_1*ut2 + 23/108*ut2_2*ut3_2*ut2"
      "    + 4/27*ut2_1*ut3_3*ut2 + 7/270*ut3_4*ut2^2 + 13/144*ut2_2^2*ut3"
      "    + 29/216*ut2_1*ut2_3*ut3 + 1/9*ut1_3*ut3_1*ut3 + 7/648*ut3_1^4*ut3"
      "    + 19/216*ut1_2*ut3_2*ut3 + 7/216*ut1_1*ut3_3*ut3"
      "    + 13/48*ut4_2^2*ut3 + 29/72*ut4_1*ut4_3*ut3 + 1/180*ut3_4*ut1*ut3"
      "    + 7/108*ut2_4*ut2*ut3 + 1/36*ut1_4*ut3^2"
      "    + 53/1296*ut3_1^2*ut3_2*ut3^2 + 133/15552*ut3_2^2*ut3^3"
      "    + 97/7776*ut3_1*ut3_3*ut3^3 + 1/864*ut3_4*ut3^4"
      "    + 4/9*ut3_3*ut4_1*ut4 + 23/36*ut3_2*ut4_2*ut4"
      "    + 35/72*ut3_1*ut4_3*ut4 + 7/36*ut4_4*ut3*ut4 + 7/90*ut3_4*ut4^2)"
      "   *eps^4"
      " + (349/3024*ut2_3^2 + 4/21*ut2_2*ut2_4 + 17/168*ut2_1*ut2_5"
      "    + 65/504*ut1_5*ut3_1 + 151/756*ut1_4*ut3_2"
      "    + 473/2592*ut3_1^2*ut3_2^2 + 31/168*ut1_3*ut3_3"
      "    + 19/216*ut3_1^3*ut3_3 + 19/210*ut1_2*ut3_4 + 149/7560*ut1_1*ut3_5"
      "    + 349/1008*ut4_3^2 + 4/7*ut4_2*ut4_4 + 17/56*ut4_1*ut4_5"
      "    + 1/840*ut3_6*ut1 + 53/1512*ut2_6*ut2 + 65/1512*ut1_6*ut3"
      "    + 1741/23328*ut3_2^3*ut3 + 2507/7776*ut3_1*ut3_2*ut3_3*ut3"
      "    + 593/6480*ut3_1^2*ut3_4*ut3 + 271/7776*ut3_3^2*ut3^2"
      "    + 2141/38880*ut3_2*ut3_4*ut3^2 + 341/12960*ut3_1*ut3_5*ut3^2"
      "    + 43/19440*ut3_6*ut3^3 + 53/504*ut4_6*ut4)*eps^6"
      " + (1/54*ut1_8 + 653/1944*ut3_2*ut3_3^2 + 17803/68040*ut3_2^2*ut3_4"
      "    + 11129/30240*ut3_1*ut3_3*ut3_4 + 65141/272160*ut3_1*ut3_2*ut3_5"
      "    + 145/3024*ut3_1^2*ut3_6 + 17503/302400*ut3_4^2*ut3"
      "    + 977/10080*ut3_3*ut3_5*ut3 + 15103/272160*ut3_2*ut3_6*ut3"
      "    + 1831/90720*ut3_1*ut3_7*ut3 + 19/9720*ut3_8*ut3^2)*eps^8"
      " + (9973/340200*ut3_5^2 + 1301/25200*ut3_4*ut3_6 + 347/10080*ut3_3*ut3_7"
      "    + 4427/272160*ut3_2*ut3_8 + 89/18144*ut3_1*ut3_9"
      "    + 1/1296*ut3_10*ut3)*eps^10"
      " + 41/393120*ut3_12*eps^12");
  return h;
}

DiffOpMatrix poisson_first() {
  DiffOpMatrix k = zero_matrix(4);
  k[0][0] = DiffOp::monomial_op(parse_poly("1/6*ut3_2*eps^2"), 1) +
            DiffOp::monomial_op(parse_poly("1/2*ut3_1*eps^2"), 2) +
            DiffOp::monomial_op(parse_poly("1/3*ut3*eps^2"), 3) +
            DiffOp::monomial_op(parse_poly("4/15*eps^4"), 5);
  k[0][2] = DiffOp::monomial_op(DiffPoly(6), 1);
  k[2][0] = k[0][2];
  k[1][1] = k[0][2];
  k[3][3] = DiffOp::monomial_op(DiffPoly(2), 1);
  return k;
}

DiffPoly dless() {
  return parse_poly(
      "1/12*u1*u2^2 + 1/12*u1^2*u3 - 1/108*u2^3*u3 + 1/432*u2^2*u3^3"
      " + 1/326592*u3^7 + 1/4*u1*u4^2 + 1/12*u2*u3*u4^2 + 1/144*u3^3*u4^2");
}

DiffPoly dr_hamiltonian() {
  return dless() + parse_poly(
      "  (-1/6*u1_1^2 + 1/24*u2*u2_1^2 - 1/72*u3^2*u2_1^2"
      "    - 1/108*u3^2*u1_1*u3_1 - 1/27*u2*u3*u2_1*u3_1 - 1/108*u2^2*u3_1^2"
      "    - 1/2592*u3^4*u3_1^2 - 1/36*u4^2*u3_1^2 - 1/4*u4*u2_1*u4_1"
      "    - 1/9*u3*u4*u3_1*u4_1 - 1/8*u2*u4_1^2 - 1/24*u3^2*u4_1^2)*eps^2"
      " + (-35/46656*u3*u3_1^4 + 1/144*u3_1^2*u1_2 + 5/216*u2_1*u3_1*u2_2"
      "    + 1/48*u3*u2_2^2 + 1/54*u3*u1_2*u3_2 + 5/216*u2*u2_2*u3_2"
      "    + 7/7776*u3^3*u3_2^2 + 5/72*u3_1*u4_1*u4_2 + 5/72*u4*u3_2*u4_2"
      "    + 1/16*u3*u4_2^2)*eps^4"
      " + (1/486*u3_1^2*u3_2^2 + 13/5832*u3*u3_2^3 - 1/112*u2_3^2"
      "    - 13/1512*u1_3*u3_3 - 1/972*u3^2*u3_3^2 - 3/112*u4_3^2)*eps^6"
      " + (-5/1728*u3_2*u3_3^2 + 1/1728*u3*u3_4^2)*eps^8"
      " - 1/7776*u3_5^2*eps^10");
}

std::array<DiffPoly, 4> dr_normal() {
  return {
      parse_poly("u1 + (1/36*u3_1^2 + 1/36*u3*u3_2)*eps^2 + 1/45*u3_4*eps^4"),
      parse_poly("u2"),
      parse_poly("u3"),
      parse_poly("u4"),
  };
}

DiffPoly g11_normal() {
  return parse_poly(
      "1/12*ut1*ut2^2 + 1/12*ut1^2*ut3 - 1/108*ut2^3*ut3 + 1/432*ut2^2*ut3^3"
      " + 1/326592*ut3^7 + 1/4*ut1*ut4^2 + 1/12*ut2*ut3*ut4^2"
      " + 1/144*ut3^3*ut4^2"
      " + (-1/6*ut1_1^2 + 1/24*ut2*ut2_1^2 - 1/72*ut3^2*ut2_1^2"
      "    - 1/108*ut3^2*ut1_1*ut3_1 - 1/27*ut2*ut3*ut2_1*ut3_1"
      "    - 5/432*ut2^2*ut3_1^2 - 1/216*ut1*ut3*ut3_1^2"
      "    - 1/2592*ut3^4*ut3_1^2 - 5/144*ut4^2*ut3_1^2 - 1/4*ut4*ut2_1*ut4_1"
      "    - 1/9*ut3*ut4*ut3_1*ut4_1 - 1/8*ut2*ut4_1^2 - 1/24*ut3^2*ut4_1^2"
      "    - 1/432*ut2^2*ut3*ut3_2 - 1/216*ut1*ut3^2*ut3_2"
      "    - 1/144*ut3*ut4^2*ut3_2)*eps^2"
      " + (-1/1458*ut3*ut3_1^4 + 1/144*ut3_1^2*ut1_2 + 5/216*ut2_1*ut3_1*ut2_2"
      "    + 1/48*ut3*ut2_2^2 + 1/36*ut1_1*ut3_1*ut3_2"
      "    + 7/7776*ut3^2*ut3_1^2*ut3_2 + 1/54*ut3*ut1_2*ut3_2"
      "    + 5/216*ut2*ut2_2*ut3_2 + 5/5184*ut3^3*ut3_2^2"
      "    + 5/72*ut3_1*ut4_1*ut4_2 + 5/72*ut4*ut3_2*ut4_2 + 1/16*ut3*ut4_2^2"
      "    + 1/108*ut3*ut1_1*ut3_3 + 1/3888*ut3^3*ut3_1*ut3_3"
      "    - 1/540*ut2^2*ut3_4 - 1/270*ut1*ut3*ut3_4 - 1/180*ut4^2*ut3_4)"
      "   *eps^4"
      " + (5/15552*ut3_1^2*ut3_2^2 + 1/1458*ut3*ut3_2^3 - 1/112*ut2_3^2"
      "    - 1/1296*ut3_1^3*ut3_3 - 11/3888*ut3*ut3_1*ut3_2*ut3_3"
      "    - 13/1512*ut1_3*ut3_3 - 1/864*ut3^2*ut3_3^2 - 3/112*ut4_3^2"
      "    - 7/77760*ut3*ut3_1^2*ut3_4 - 1/2430*ut3^2*ut3_2*ut3_4"
      "    + 1/135*ut1_1*ut3_5 + 1/4860*ut3^2*ut3_1*ut3_5)*eps^6"
      " + (-55/108864*ut3_2*ut3_3^2 + 65/54432*ut3_1*ut3_3*ut3_4"
      "    + 241/388800*ut3*ut3_4^2 - 1/1620*ut3_1*ut3_2*ut3_5"
      "    + 1/30240*ut3*ut3_3*ut3_5 - 1/6480*ut3_1^2*ut3_6"
      "    - 1/2430*ut3*ut3_2*ut3_6)*eps^8"
      " + (-41/194400*ut3_5^2 + 13/68040*ut3_3*ut3_7)*eps^10");
}

DiffPoly quantum_correction() {
  return parse_poly(
      "I*hbar*(-13/9072*u3*eps^4"
      " + (-1/540*u3^2 + 1/108*u3_1^2 - 1/135*u3_2^2)*eps^2"
      " - 1/432*u3^3 + 1/144*u3*u3_1^2 - 1/6*u1)");
}

}  // namespace d4dr::fx

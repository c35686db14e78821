#include "d4dr/ds_d4.hpp"

#include <functional>
#include <vector>

#include "d4dr/jobs.hpp"

namespace d4dr {

namespace {

// variational-gradient operator X = (delta f / delta v^4)
//   + 1/2 sum_mu (D_mu D^(-2mu) + D^(-2mu) D_mu), D_mu = delta f / delta v^mu.
// The fourth component enters through the square-root field r (v^4 = r^2),
// so it may be Laurent in r.
PsiDO1 delta_operator(const DiffPoly& f, int floor) {
  Scalar half = Scalar::rational(1, 2);
  PsiDO1 x;
  DiffPoly drho = variational(f, Alphabet::rho, 1);
  if (!drho.is_zero())
    x = PsiDO1::multiplication(
        drho.divide_exact(DiffPoly::rho() * Scalar(2)));
  for (int mu = 1; mu <= 3; ++mu) {
    DiffPoly dmu = variational(f, Alphabet::v, mu);
    if (dmu.is_zero()) continue;
    x = x + scale(PsiDO1::monomial_op(dmu, -2 * mu), half) +
        scale(mul_trunc(PsiDO1::derivative(-2 * mu),
                        PsiDO1::multiplication(dmu), floor),
              half);
  }
  return truncate(x, floor);
}

// integrate the first test symbol by parts until only its order-0 jet is
// left; each term must stay linear in it
DiffPoly reduce_dx_symbol(DiffPoly f) {
  DiffPoly done;
  while (!f.is_zero()) {
    DiffPoly next;
    for (const auto& [m, c] : f.terms()) {
      int pos = -1;
      for (size_t i = 0; i < m.vars.size(); ++i) {
        if (JetVar::alphabet(m.vars[i].first) != Alphabet::dX) continue;
        if (pos >= 0 || m.vars[i].second != 1)
          throw structure_error("density is not linear in the test symbol");
        pos = int(i);
      }
      if (pos < 0)
        throw structure_error("density dropped the test symbol");
      uint32_t code = m.vars[size_t(pos)].first;
      int ord = JetVar::order(code);
      if (ord == 0) {
        done += DiffPoly::monomial(m, c);
        continue;
      }
      Monomial w = m;
      w.vars.erase(w.vars.begin() + pos);
      next -= d_x(DiffPoly::monomial(w, c)) *
              DiffPoly::var(Alphabet::dX, 1, ord - 1);
    }
    f = next;
  }
  return done;
}

}  // namespace

DiffPoly bracket_ds(const DiffPoly& f_density, const DiffPoly& g_density,
                    int which, const LaxPair& lp) {
  const int dfloor = -18;
  PsiDO1 x = delta_operator(f_density, dfloor);
  PsiDO1 y = delta_operator(g_density, dfloor);
  PsiDO1 lt = lax_v_form(lp, -8);
  PsiDO1 w;
  if (which == 1) {
    PsiDO1 yp = positive_part(y);
    PsiDO1 yn = negative_part(y);
    w = negative_part(mul(mul(PsiDO1::derivative(1), yp), lt)) -
        negative_part(shift_right(mul(lt, yp), 1)) -
        positive_part(mul(mul(PsiDO1::derivative(1), yn), lt)) +
        positive_part(shift_right(mul(lt, yn), 1));
  } else if (which == 2) {
    w = mul(positive_part(mul(lt, y)), lt) -
        mul(lt, positive_part(mul(y, lt)));
  } else {
    throw structure_error("bracket selector must be 1 or 2");
  }
  return divide_eps(mul_slot(x, w, -1));
}

DiffOpMatrix poisson_matrix_first(const LaxPair& lp,
                                  const NormalCoordinates& nc, int jobs) {
  DiffOpMatrix k = zero_matrix(4);
  std::vector<std::function<void()>> tasks;
  for (int a = 1; a <= 4; ++a) {
    for (int b = 1; b <= 4; ++b) {
      tasks.push_back([a, b, &k, &lp, &nc] {
      DiffPoly fd = nc.ut_of_v[size_t(a - 1)] * DiffPoly::var(Alphabet::dX, 1);
      DiffPoly gd =
          nc.ut_of_v[size_t(b - 1)] * DiffPoly::var(Alphabet::dY, 1);
      DiffPoly red = reduce_dx_symbol(bracket_ds(fd, gd, 1, lp));
      std::map<int, DiffPoly> hat;
      for (const auto& [m, c] : red.terms()) {
        Monomial rest = m;
        rest.vars.clear();
        int dy = -1;
        for (const auto& [code, e] : m.vars) {
          Alphabet al = JetVar::alphabet(code);
          if (al == Alphabet::dX) {
            if (JetVar::order(code) != 0 || e != 1)
              throw structure_error("test-symbol reduction failed");
          } else if (al == Alphabet::dY) {
            if (dy >= 0 || e != 1)
              throw structure_error(
                  "density is not linear in the second test symbol");
            dy = JetVar::order(code);
          } else {
            rest.vars.emplace_back(code, e);
          }
        }
        if (dy < 0)
          throw structure_error("density dropped the second test symbol");
        hat[dy] += DiffPoly::monomial(rest, c);
      }
      DiffOp entry;
      for (const auto& [ord, coef] : hat) {
        for (const auto& [m, c] : coef.terms())
          for (const auto& [code, e] : m.vars)
            if (e < 0)
              throw structure_error("operator entry is not polynomial");
        DiffPoly cu = nc.v_in_ut.apply(coef);
        entry = entry + DiffOp::monomial_op(cu.rescale_eps_inv_sqrt2(), ord);
      }
      k[size_t(a - 1)][size_t(b - 1)] = entry;
      });
    }
  }
  run_parallel(tasks, jobs);
  return k;
}

}  // namespace d4dr

#include "d4dr/verify.hpp"

#include <array>
#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "d4dr/dr_quantum.hpp"
#include "d4dr/ds_d4.hpp"
#include "d4dr/fixtures.hpp"
#include "d4dr/jobs.hpp"

// End-to-end verification of the engine against the frozen reference
// expressions, one check per headline result. Heavy shared objects (Lax
// root cache, solver reports) are built once per process and reused across
// checks; `jobs` only fans out independent sub-comparisons, so reports do
// not depend on it.

namespace d4dr {

namespace {

// ---- report plumbing -------------------------------------------------------

struct CheckBody {
  std::vector<std::string> faults;
  std::vector<std::string> notes;

  void fail(std::string m) { faults.push_back(std::move(m)); }
  void require(bool ok, std::string m) {
    if (!ok) faults.push_back(std::move(m));
  }
  void note(std::string m) { notes.push_back(std::move(m)); }
};

std::string join(const std::vector<std::string>& parts, const char* sep,
                 size_t cap = 8) {
  std::ostringstream os;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i == cap) {
      os << sep << "(+" << parts.size() - cap << " more)";
      break;
    }
    if (i) os << sep;
    os << parts[i];
  }
  return os.str();
}

std::string head_terms(const DiffPoly& d, size_t cap = 6) {
  std::ostringstream os;
  size_t shown = 0;
  for (const auto& [m, c] : d.terms()) {
    if (shown == cap) {
      os << ", ...(" << d.size() - cap << " more)";
      break;
    }
    if (shown) os << ", ";
    os << DiffPoly::monomial(m, c).str();
    ++shown;
  }
  return os.str();
}

std::string term_diff(const std::string& what, const DiffPoly& got,
                      const DiffPoly& want) {
  DiffPoly d = got - want;
  std::ostringstream os;
  os << what << " differs by " << d.size() << " monomial(s): " << head_terms(d);
  return os.str();
}

// difference of the integrated quantities: zero iff equal mod Im d_x and
// constants
DiffPoly functional_diff(const DiffPoly& got, const DiffPoly& want) {
  DiffPoly d = normal_form(got - want);
  return d - d.constant_terms();
}

std::string functional_msg(const std::string& what, const DiffPoly& nf) {
  std::ostringstream os;
  os << what << " differs mod Im d_x by " << nf.size()
     << " monomial(s): " << head_terms(nf);
  return os.str();
}

// ---- shared lazy contexts --------------------------------------------------

std::vector<std::pair<Alphabet, int>> lax_fields() {
  return {{Alphabet::s, 1}, {Alphabet::s, 2}, {Alphabet::s, 3},
          {Alphabet::rho, 1}};
}
std::vector<std::pair<Alphabet, int>> ut_field_list() {
  return {{Alphabet::ut, 1}, {Alphabet::ut, 2}, {Alphabet::ut, 3},
          {Alphabet::ut, 4}};
}
std::vector<std::pair<Alphabet, int>> u_field_list() {
  return {{Alphabet::u, 1}, {Alphabet::u, 2}, {Alphabet::u, 3},
          {Alphabet::u, 4}};
}

struct LaxContext {
  bool built = false;
  LaxPair lp;
  RootCache rc;
  NormalCoordinates nc;
  // presented densities in the normal coordinates, keys (alpha, level)
  std::map<std::pair<int, int>, DiffPoly> dens;
  bool h11_built = false;
  DiffPoly h11;
  bool k_built = false;
  DiffOpMatrix k1;
};

LaxContext& lax_ctx() {
  static LaxContext c;
  return c;
}

LaxContext& ensure_lax() {
  LaxContext& c = lax_ctx();
  if (c.built) return c;
  c.lp = build_lax();
  c.rc = sixth_root(c.lp);
  c.nc = normal_coordinates(c.lp, c.rc);
  std::map<std::pair<int, int>, DiffPoly> hs =
      tau_densities_s(c.lp, c.rc, c.nc, false);
  for (const auto& [key, den] : hs)
    c.dens[key] = c.nc.s_in_ut.apply(den).rescale_eps_inv_sqrt2();
  c.built = true;
  return c;
}

LaxContext& ensure_h11() {
  LaxContext& c = ensure_lax();
  if (c.h11_built) return c;
  DiffPoly h = c.rc.res_power(13) * Scalar::rational(36, 91);
  c.h11 = c.nc.s_in_ut.apply(h).rescale_eps_inv_sqrt2();
  c.h11_built = true;
  return c;
}

LaxContext& ensure_k1(int jobs) {
  LaxContext& c = ensure_lax();
  if (c.k_built) return c;
  c.k1 = poisson_matrix_first(c.lp, c.nc, jobs);
  c.k_built = true;
  return c;
}

const DrSolveReport& ensure_deformation() {
  static bool built = false;
  static DrSolveReport rep;
  if (!built) {
    rep = solve_g11(DrSetting::full(), 2, 10);
    built = true;
  }
  return rep;
}

const QuantumSolveReport& ensure_quantum() {
  static bool built = false;
  static QuantumSolveReport rep;
  if (!built) {
    rep = solve_quantum_g11(ensure_deformation().g11, DrSetting::full(), 2);
    built = true;
  }
  return rep;
}

// ---- the checks ------------------------------------------------------------

// coordinate maps: inverse normal-coordinate images s(ut), the normal
// coordinates ut(v), and the odd/even Lax coefficient relation vt(v), all
// term-for-term in the presented convention
void check_inverse_miura(CheckBody& b, int) {
  LaxContext& c = ensure_lax();
  std::array<DiffPoly, 4> sfix = fx::s_of_ut();
  std::vector<std::pair<Alphabet, int>> sf = lax_fields();
  static const char* sname[4] = {"s^1(ut)", "s^2(ut)", "s^3(ut)", "rho(ut)"};
  for (size_t i = 0; i < 4; ++i) {
    DiffPoly got =
        c.nc.s_in_ut.image(sf[i].first, sf[i].second).rescale_eps_inv_sqrt2();
    if (got != sfix[i]) b.fail(term_diff(sname[i], got, sfix[i]));
  }
  std::array<DiffPoly, 4> ufix = fx::ut_of_v();
  for (size_t i = 0; i < 4; ++i) {
    DiffPoly got = c.nc.ut_of_v[i].rescale_eps_inv_sqrt2();
    if (got != ufix[i])
      b.fail(term_diff("ut^" + std::to_string(i + 1) + "(v)", got, ufix[i]));
  }
  std::array<DiffPoly, 3> vfix = fx::vt_of_v();
  for (size_t i = 0; i < 3; ++i) {
    DiffPoly got = c.lp.vt_of_v[i].rescale_eps_inv_sqrt2();
    if (got != vfix[i])
      b.fail(term_diff("vt^" + std::to_string(i + 1) + "(v)", got, vfix[i]));
  }
  b.note("11 coordinate images match term-for-term");
}

// level-zero densities from the root residues and the squared-root residue
// reduction against their reference expressions, mod Im d_x
void check_densities(CheckBody& b, int jobs) {
  LaxContext& c = ensure_lax();
  std::map<std::pair<int, int>, DiffPoly> fix = fx::h_densities();
  std::array<DiffPoly, 4> nf;
  std::vector<std::function<void()>> tasks;
  for (int a = 1; a <= 4; ++a)
    tasks.push_back([a, &nf, &c, &fix] {
      nf[size_t(a - 1)] =
          functional_diff(c.dens.at({a, 0}), fix.at({a, 0}));
    });
  run_parallel(tasks, jobs);
  for (int a = 1; a <= 4; ++a)
    b.require(nf[size_t(a - 1)].is_zero(),
              functional_msg("h_{" + std::to_string(a) + ",0}",
                             nf[size_t(a - 1)]));

  // independent route to the fourth density through the graded square root
  PsiDO2 q = second_root(c.lp, 3, 6);
  DiffPoly alt = res2(mul2(mul2(q, q), q)) * Scalar::rational(2, 3);
  std::map<std::pair<int, int>, DiffPoly> hs =
      tau_densities_s(c.lp, c.rc, c.nc, false);
  b.require(laurent_functional_is_zero(hs.at({4, 0}) - alt, lax_fields()),
            "residue reduction of the fourth density disagrees with the "
            "direct square-root cube");
  b.note("four level-zero densities match mod Im d_x; square-root route "
         "agrees");
}

// the level-one density 36/91 res P^13 against its reference, mod Im d_x
void check_first_flow(CheckBody& b, int) {
  LaxContext& c = ensure_h11();
  DiffPoly want = fx::h_densities().at({1, 1});
  DiffPoly nf = functional_diff(c.h11, want);
  b.require(nf.is_zero(), functional_msg("h_{1,1}", nf));
  std::ostringstream os;
  os << "h_{1,1} matches mod Im d_x (" << c.h11.size()
     << " computed terms vs " << want.size() << " reference terms)";
  b.note(os.str());
}

// first hamiltonian operator in normal coordinates, entry-exact, plus
// skew-adjointness
void check_poisson(CheckBody& b, int jobs) {
  LaxContext& c = ensure_k1(jobs);
  DiffOpMatrix want = fx::poisson_first();
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j)
      if (c.k1[i][j] != want[i][j])
        b.fail("K^{" + std::to_string(i + 1) + std::to_string(j + 1) +
               "} = " + c.k1[i][j].str() + ", reference " + want[i][j].str());
  DiffOpMatrix adt = adjoint_transpose(c.k1);
  bool skew = true;
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j)
      if (adt[i][j] != -c.k1[i][j]) skew = false;
  b.require(skew, "operator matrix is not skew-adjoint");
  b.note("16 entries exact; K^{44} = " + c.k1[3][3].str() +
         "; matrix is skew-adjoint");
}

// level-by-level resolution of the deformed first hamiltonian: solution
// space dimensions, the resolved density, and the two-point normalization
void check_deformation_solve(CheckBody& b, int) {
  const DrSolveReport& rep = ensure_deformation();
  b.require(rep.nullity.count(2) == 1, "eps^2 level missing from the report");
  for (const auto& [lvl, nul] : rep.nullity) {
    if (lvl == 2)
      b.require(nul == 1, "eps^2 solution space has dimension " +
                              std::to_string(nul) + ", expected 1");
    else
      b.require(nul == 0, "eps^" + std::to_string(lvl) +
                              " solution space has dimension " +
                              std::to_string(nul) + ", expected 0");
  }
  DiffPoly want = fx::dr_hamiltonian();
  DiffPoly nf = functional_diff(rep.g11, want);
  b.require(nf.is_zero(), functional_msg("resolved density", nf));
  Monomial m;
  m.vars = {{JetVar::make(Alphabet::u, 1, 1), 2}};
  m.eps = 2;
  Scalar cf = rep.g11.coefficient(m);
  b.require(cf == Scalar::rational(-1, 6),
            "(u^1_1)^2 eps^2 coefficient is " + cf.str() + ", expected -1/6");
  std::ostringstream os;
  os << "eps^2 dimension 1, higher levels pinned; density matches the "
     << "reference "
     << (rep.g11 == want ? "term-for-term" : "mod Im d_x (representatives "
                                             "differ by exact terms)");
  b.note(os.str());
}

// hamiltonian operator transported to normal coordinates and the resolved
// density rewritten there, against the operator reference (entry-exact) and
// the level-one density (mod Im d_x)
void check_transport(CheckBody& b, int) {
  const DrSolveReport& rep = ensure_deformation();
  DrSetting full = DrSetting::full();
  DrTables t = run_recursion(rep.g11, full, 0);
  std::array<DiffPoly, 4> img = dr_normal_images(t, full);
  std::array<DiffPoly, 4> ifix = fx::dr_normal();
  for (size_t i = 0; i < 4; ++i)
    if (img[i] != ifix[i])
      b.fail(term_diff("normal coordinate " + std::to_string(i + 1), img[i],
                       ifix[i]));

  DiffOpMatrix kt = transport_eta(img, full);
  DiffOpMatrix want = fx::poisson_first();
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j)
      if (kt[i][j] != want[i][j])
        b.fail("transported K^{" + std::to_string(i + 1) +
               std::to_string(j + 1) + "} = " + kt[i][j].str() +
               ", reference " + want[i][j].str());

  Miura fwd;
  for (int a = 1; a <= 4; ++a)
    fwd.set_image(Alphabet::ut, a, img[size_t(a - 1)]);
  Miura back = fwd.invert(ut_field_list(), u_field_list());
  DiffPoly g11_nc = back.apply(rep.g11);
  DiffPoly nf = functional_diff(g11_nc, fx::h_densities().at({1, 1}));
  b.require(nf.is_zero(),
            functional_msg("density in normal coordinates vs the scalar-Lax "
                           "level-one density",
                           nf));
  DiffPoly nf2 = functional_diff(g11_nc, fx::g11_normal());
  b.require(nf2.is_zero(),
            functional_msg("density in normal coordinates vs its reference "
                           "rewrite",
                           nf2));
  LaxContext& c = lax_ctx();
  if (c.h11_built) {
    DiffPoly nf3 = functional_diff(g11_nc, c.h11);
    b.require(nf3.is_zero(),
              functional_msg("density in normal coordinates vs the computed "
                             "level-one density",
                             nf3));
  }
  b.note("transported operator entry-exact; density agrees with the "
         "level-one density mod Im d_x");
}

// hbar-linear correction of the resolved hamiltonian and its classical limit
void check_quantum(CheckBody& b, int) {
  const QuantumSolveReport& rep = ensure_quantum();
  const DrSolveReport& cls = ensure_deformation();
  b.require(rep.g11.select_hbar(0) == cls.g11,
            "classical limit does not recover the resolved density");
  DiffPoly corr = rep.g11.select_hbar(1);
  DiffPoly want = fx::quantum_correction();
  DiffPoly nf = functional_diff(corr, want);
  b.require(nf.is_zero(), functional_msg("hbar-linear correction", nf));

  DiffPoly ncorr = normal_form(corr);
  Monomial m1;
  m1.vars = {{JetVar::make(Alphabet::u, 3, 0), 1}};
  m1.eps = 4;
  m1.hbar = 1;
  Scalar c1 = ncorr.coefficient(m1);
  b.require(c1 == Scalar(0, mpq_class(-13, 9072), 0, 0),
            "u^3 eps^4 hbar coefficient is " + c1.str() +
                ", expected -13/9072*I");
  Monomial m2;
  m2.vars = {{JetVar::make(Alphabet::u, 1, 0), 1}};
  m2.hbar = 1;
  Scalar c2 = ncorr.coefficient(m2);
  b.require(c2 == Scalar(0, mpq_class(-1, 6), 0, 0),
            "u^1 hbar coefficient is " + c2.str() + ", expected -1/6*I");
  b.note("correction matches; classical limit exact; solution-space "
         "dimension before normalization " +
         std::to_string(rep.nullity));
}

// product decompositions of the polylogarithm series: every tuple with at
// most three factors and total index at most six, validated on fresh series
// samples to twice the defining order
void check_polylog(CheckBody& b, int jobs) {
  std::vector<std::vector<int>> tuples;
  for (int a = 1; a <= 6; ++a) tuples.push_back({a});
  for (int a = 1; a <= 6; ++a)
    for (int a2 = a; a + a2 <= 6; ++a2) tuples.push_back({a, a2});
  for (int a = 1; a <= 6; ++a)
    for (int a2 = a; a2 <= 6; ++a2)
      for (int a3 = a2; a + a2 + a3 <= 6; ++a3)
        tuples.push_back({a, a2, a3});

  std::vector<char> ok(tuples.size(), 0);
  std::vector<std::function<void()>> tasks;
  for (size_t i = 0; i < tuples.size(); ++i)
    tasks.push_back([i, &ok, &tuples] {
      int m = int(tuples[i].size()) - 1;
      for (int d : tuples[i]) m += d;
      ok[i] = polylog_expansion_valid(tuples[i], m) ? 1 : 0;
    });
  run_parallel(tasks, jobs);
  for (size_t i = 0; i < tuples.size(); ++i) {
    if (ok[i]) continue;
    std::ostringstream os;
    os << "series mismatch for indices (";
    for (size_t j = 0; j < tuples[i].size(); ++j)
      os << (j ? "," : "") << tuples[i][j];
    os << ")";
    b.fail(os.str());
  }

  const std::vector<Scalar>& c11 = polylog_coeffs({1, 1});
  bool pinned = c11.size() == 3 && c11[0] == Scalar::rational(-1, 6) &&
                c11[1] == Scalar(0) && c11[2] == Scalar::rational(1, 6);
  std::string shown = "(";
  for (size_t j = 0; j < c11.size(); ++j)
    shown += (j ? ", " : "") + c11[j].str();
  shown += ")";
  b.require(pinned, "coefficients of the squared first series are " + shown +
                        ", expected (-1/6, 0, 1/6)");
  std::ostringstream os;
  os << tuples.size()
     << " tuples validated to twice the defining order; squared first "
        "series decomposes as "
     << shown << " for j = 1,2,3";
  b.note(os.str());
}

// structural property sweeps: tau symmetry of the computed table, classical
// and quantum commutativity, residue-of-commutator exactness, and
// substitution/derivative commutation on randomized inputs
void check_properties(CheckBody& b, int jobs) {
  // tau symmetry of the computed densities through the computed operator
  LaxContext& c = ensure_h11();
  ensure_k1(jobs);
  {
    struct Identity {
      std::pair<int, int> fa, ga, fb, gb;  // flow_derivative args per side
      std::string label;
    };
    std::vector<Identity> ids;
    for (int a = 1; a <= 4; ++a)
      for (int b2 = a; b2 <= 4; ++b2)
        ids.push_back({{a, -1},
                       {b2, 0},
                       {b2, -1},
                       {a, 0},
                       "tau identity (" + std::to_string(a) + ",0)/(" +
                           std::to_string(b2) + ",0)"});
    for (int b2 = 1; b2 <= 4; ++b2)
      ids.push_back({{1, 0},
                     {b2, 0},
                     {b2, -1},
                     {1, 1},
                     "tau identity (1,1)/(" + std::to_string(b2) + ",0)"});
    std::map<std::pair<int, int>, DiffPoly> dens = c.dens;
    dens[{1, 1}] = c.h11;
    std::vector<char> ok(ids.size(), 0);
    std::vector<std::function<void()>> tasks;
    for (size_t i = 0; i < ids.size(); ++i)
      tasks.push_back([i, &ok, &ids, &dens, &c] {
        DiffPoly lhs =
            flow_derivative(dens.at(ids[i].fa), dens.at(ids[i].ga), c.k1);
        DiffPoly rhs =
            flow_derivative(dens.at(ids[i].fb), dens.at(ids[i].gb), c.k1);
        ok[i] = (lhs == rhs) ? 1 : 0;
      });
    run_parallel(tasks, jobs);
    size_t good = 0;
    for (size_t i = 0; i < ids.size(); ++i) {
      if (ok[i]) {
        ++good;
        continue;
      }
      b.fail(ids[i].label + " fails as an exact density identity");
    }
    b.note(std::to_string(good) + "/" + std::to_string(ids.size()) +
           " tau identities exact");
  }

  // classical commutativity of the deformed hamiltonians
  {
    const DrSolveReport& rep = ensure_deformation();
    DrSetting full = DrSetting::full();
    DrTables t = run_recursion(rep.g11, full, 2);
    std::vector<std::pair<int, int>> keys;
    for (int a = 1; a <= 4; ++a)
      for (int d = -1; d <= 2; ++d) keys.push_back({a, d});
    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < keys.size(); ++i)
      for (size_t j = i; j < keys.size(); ++j) pairs.push_back({i, j});
    std::vector<char> ok(pairs.size(), 0);
    std::vector<std::function<void()>> tasks;
    for (size_t i = 0; i < pairs.size(); ++i)
      tasks.push_back([i, &ok, &pairs, &keys, &t, &full] {
        const DiffPoly& f = t.g.at(keys[pairs[i].first]);
        const DiffPoly& g = t.g.at(keys[pairs[i].second]);
        ok[i] = functional_diff(eta_bracket(f, g, full), DiffPoly()).is_zero()
                    ? 1
                    : 0;
      });
    run_parallel(tasks, jobs);
    size_t good = 0;
    for (size_t i = 0; i < pairs.size(); ++i) {
      if (ok[i]) {
        ++good;
        continue;
      }
      auto [a, d] = keys[pairs[i].first];
      auto [a2, d2] = keys[pairs[i].second];
      b.fail("classical bracket ((" + std::to_string(a) + "," +
             std::to_string(d) + "),(" + std::to_string(a2) + "," +
             std::to_string(d2) + ")) does not vanish");
    }
    b.note(std::to_string(good) + "/" + std::to_string(pairs.size()) +
           " classical brackets vanish (levels through 2)");
  }

  // quantum commutativity of the corrected hamiltonians
  {
    const QuantumSolveReport& rep = ensure_quantum();
    DrSetting full = DrSetting::full();
    QuantumTables t = run_quantum_recursion(rep.g11, full, 1, 4);
    std::vector<std::pair<int, int>> keys;
    for (int a = 1; a <= 4; ++a)
      for (int d = -1; d <= 1; ++d) keys.push_back({a, d});
    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < keys.size(); ++i)
      for (size_t j = i; j < keys.size(); ++j) pairs.push_back({i, j});
    std::vector<char> ok(pairs.size(), 0);
    std::vector<std::function<void()>> tasks;
    for (size_t i = 0; i < pairs.size(); ++i)
      tasks.push_back([i, &ok, &pairs, &keys, &t, &full] {
        const DiffPoly& f = t.g.at(keys[pairs[i].first]);
        const DiffPoly& g = t.g.at(keys[pairs[i].second]);
        DiffPoly comm = star_commutator(f, g, full, 4);
        ok[i] = functional_diff(comm, DiffPoly()).is_zero() ? 1 : 0;
      });
    run_parallel(tasks, jobs);
    size_t good = 0;
    for (size_t i = 0; i < pairs.size(); ++i) {
      if (ok[i]) {
        ++good;
        continue;
      }
      auto [a, d] = keys[pairs[i].first];
      auto [a2, d2] = keys[pairs[i].second];
      b.fail("quantum bracket ((" + std::to_string(a) + "," +
             std::to_string(d) + "),(" + std::to_string(a2) + "," +
             std::to_string(d2) + ")) does not vanish");
    }
    b.note(std::to_string(good) + "/" + std::to_string(pairs.size()) +
           " quantum brackets vanish (levels through 1, all hbar orders by "
           "weight)");
  }

  // residue of a commutator is always a total derivative
  {
    std::mt19937 rng(12345);
    auto ri = [&rng](int lo, int hi) {
      return lo + int(rng() % uint32_t(hi - lo + 1));
    };
    auto rnd_poly = [&ri]() {
      DiffPoly f;
      int nterms = ri(1, 2);
      for (int t = 0; t < nterms; ++t) {
        int coef = ri(-4, 4);
        if (coef == 0) coef = 1;
        DiffPoly term{Scalar(coef)};
        int nfac = ri(1, 2);
        for (int k = 0; k < nfac; ++k)
          term *= DiffPoly::var(Alphabet::s, ri(1, 3), ri(0, 2));
        if (ri(0, 1)) term *= DiffPoly::eps();
        f += term;
      }
      return f;
    };
    auto rnd_op = [&]() {
      std::vector<DiffPoly> slots;
      for (int p = 2; p >= -3; --p) slots.push_back(rnd_poly());
      return PsiDO1::from_slots(2, -3, std::move(slots), false);
    };
    int good = 0;
    for (int rep = 0; rep < 100; ++rep) {
      PsiDO1 a = rnd_op(), bb = rnd_op();
      DiffPoly r = mul_slot(a, bb, -1) - mul_slot(bb, a, -1);
      if (is_dx_exact(r))
        ++good;
      else
        b.fail("commutator residue not exact at trial " + std::to_string(rep));
    }
    b.note(std::to_string(good) + "/100 commutator residues are exact");
  }

  // substitution maps commute with the total derivative
  {
    std::mt19937 rng(54321);
    auto ri = [&rng](int lo, int hi) {
      return lo + int(rng() % uint32_t(hi - lo + 1));
    };
    int good = 0;
    for (int rep = 0; rep < 100; ++rep) {
      Miura m;
      for (int a = 1; a <= 4; ++a) {
        DiffPoly img = DiffPoly::var(Alphabet::u, a) * Scalar(ri(1, 3));
        if (ri(0, 1))
          img += DiffPoly::var(Alphabet::u, ri(1, 4)) *
                 DiffPoly::var(Alphabet::u, ri(1, 4)) *
                 Scalar::rational(ri(-2, 2), ri(1, 3));
        if (ri(0, 1))
          img += DiffPoly::var(Alphabet::u, ri(1, 4), 1) * DiffPoly::eps() *
                 Scalar(ri(-2, 2));
        m.set_image(Alphabet::u, a, img);
      }
      DiffPoly f;
      int nterms = ri(1, 3);
      for (int t = 0; t < nterms; ++t) {
        DiffPoly term{Scalar(ri(-3, 3) * 2 + 1)};
        int nfac = ri(1, 2);
        for (int k = 0; k < nfac; ++k)
          term *= DiffPoly::var(Alphabet::u, ri(1, 4), ri(0, 2));
        f += term;
      }
      if (m.apply(d_x(f)) == d_x(m.apply(f)))
        ++good;
      else
        b.fail("substitution does not commute with d_x at trial " +
               std::to_string(rep));
    }
    b.note(std::to_string(good) +
           "/100 substitutions commute with the total derivative");
  }
}

// restrictions of the hierarchy to the two sub-diagrams: recursion closure,
// the restricted operators, the parity invariance of the resolved density,
// and consistency of the dispersionless part
void check_foldings(CheckBody& b, int jobs) {
  const DrSolveReport& rep = ensure_deformation();

  b.require(flip4_pullback(rep.g11) == rep.g11,
            "resolved density is not even in the fourth field");
  DiffPoly f = frobenius_potential();
  b.require(flip4_pullback(f) == f,
            "potential is not invariant under the sign flip");
  b.require(order3_pullback(f) == f,
            "potential is not invariant under the order-three symmetry");

  b.require(genus_zero_g11(DrSetting::full()) == fx::dless(),
            "dispersionless density disagrees with its reference");

  struct Folding {
    const char* label;
    std::vector<int> kill;
    std::vector<int> active;
  };
  const std::vector<Folding> folds = {{"three-field", {4}, {1, 2, 3}},
                                      {"two-field", {2, 4}, {1, 3}}};
  for (const Folding& fd : folds) {
    DrSetting st = DrSetting::without(fd.kill);
    size_t n = fd.active.size();

    DiffOpMatrix got = zero_matrix(n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        Scalar e = st.eta_upper(fd.active[i], fd.active[j]);
        if (!e.is_zero()) got[i][j] = DiffOp::dx(1) * e;
      }
    DiffOpMatrix want = zero_matrix(n);
    DiffOp six = DiffOp::dx(1) * Scalar(6);
    if (n == 3) {
      want[0][2] = six;
      want[1][1] = six;
      want[2][0] = six;
    } else {
      want[0][1] = six;
      want[1][0] = six;
    }
    if (!matrix_equal(got, want)) {
      std::ostringstream os;
      os << fd.label << " restriction: operator matrix is not the expected "
         << "pairing times d_x";
      b.fail(os.str());
    }

    DiffPoly g11r = restrict_density(rep.g11, fd.kill);
    b.require(genus_zero_g11(st) == restrict_density(fx::dless(), fd.kill),
              std::string(fd.label) +
                  " restriction: dispersionless density mismatch");
    DrTables t;
    bool closed = true;
    try {
      t = run_recursion(g11r, st, 1);
    } catch (const std::exception& e) {
      closed = false;
      b.fail(std::string(fd.label) +
             " restriction: recursion does not close: " + e.what());
    }
    if (!closed) continue;

    std::vector<std::pair<int, int>> keys;
    for (int a : fd.active)
      for (int d = -1; d <= 1; ++d) keys.push_back({a, d});
    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < keys.size(); ++i)
      for (size_t j = i; j < keys.size(); ++j) pairs.push_back({i, j});
    std::vector<char> ok(pairs.size(), 0);
    std::vector<std::function<void()>> tasks;
    for (size_t i = 0; i < pairs.size(); ++i)
      tasks.push_back([i, &ok, &pairs, &keys, &t, &st] {
        const DiffPoly& p = t.g.at(keys[pairs[i].first]);
        const DiffPoly& q = t.g.at(keys[pairs[i].second]);
        ok[i] = functional_diff(eta_bracket(p, q, st), DiffPoly()).is_zero()
                    ? 1
                    : 0;
      });
    run_parallel(tasks, jobs);
    for (size_t i = 0; i < pairs.size(); ++i)
      if (!ok[i]) {
        auto [a, d] = keys[pairs[i].first];
        auto [a2, d2] = keys[pairs[i].second];
        b.fail(std::string(fd.label) + " restriction: bracket ((" +
               std::to_string(a) + "," + std::to_string(d) + "),(" +
               std::to_string(a2) + "," + std::to_string(d2) +
               ")) does not vanish");
      }
  }
  b.note("both restrictions close, operators match, density even in the "
         "fourth field, dispersionless parts consistent");
}

// ---- the table -------------------------------------------------------------

using CheckFn = void (*)(CheckBody&, int);
struct CheckDef {
  const char* name;
  CheckFn fn;
};

constexpr std::array<CheckDef, 10> kChecks = {{
    {"inverse-miura", check_inverse_miura},
    {"densities", check_densities},
    {"first-flow-density", check_first_flow},
    {"poisson-matrix", check_poisson},
    {"deformation-solve", check_deformation_solve},
    {"operator-transport", check_transport},
    {"quantum-correction", check_quantum},
    {"polylog-basis", check_polylog},
    {"algebra-properties", check_properties},
    {"foldings", check_foldings},
}};

CheckResult run_check(const CheckDef& def, int jobs) {
  CheckResult r;
  r.name = def.name;
  auto t0 = std::chrono::steady_clock::now();
  try {
    CheckBody body;
    def.fn(body, jobs);
    r.pass = body.faults.empty();
    r.detail = r.pass ? join(body.notes, "; ") : join(body.faults, " | ");
  } catch (const std::exception& e) {
    r.pass = false;
    r.error = true;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return r;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const CheckDef& d : kChecks) out.push_back(d.name);
  return out;
}

std::vector<CheckResult> run_suite(const std::string& suite, int jobs) {
  if (jobs < 1) jobs = 1;
  static const std::map<std::string, std::vector<size_t>> groups = {
      {"all", {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}},
      {"ds", {0, 1, 2, 3}},
      {"dr", {4, 5, 9}},
      {"quantum", {6, 7}},
      {"properties", {8}},
  };
  std::vector<size_t> picked;
  auto git = groups.find(suite);
  if (git != groups.end()) {
    picked = git->second;
  } else {
    for (size_t i = 0; i < kChecks.size(); ++i)
      if (suite == kChecks[i].name) picked.push_back(i);
    if (picked.empty())
      throw std::invalid_argument("unknown suite: " + suite);
  }
  std::vector<CheckResult> out;
  for (size_t i : picked) out.push_back(run_check(kChecks[i], jobs));
  return out;
}

}  // namespace d4dr

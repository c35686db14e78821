#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "d4dr/dr_quantum.hpp"
#include "d4dr/ds_d4.hpp"
#include "d4dr/expr.hpp"
#include "d4dr/jobs.hpp"
#include "d4dr/jsonio.hpp"
#include "d4dr/verify.hpp"

// Command-line front end. All artifacts are written under --out together
// with a manifest; outputs are deterministic for fixed flags (worker count
// never changes results). Exit codes: 0 success, 1 failed verification,
// 2 usage error, 3 internal or truncation error.

namespace {

using namespace d4dr;

// manifest: filename -> producing command, merged across runs
void add_manifest(const std::string& outdir, const std::string& command,
                  const std::vector<std::string>& files) {
  std::map<std::string, std::string> entries;
  std::filesystem::path mp = std::filesystem::path(outdir) / "manifest.json";
  {
    std::ifstream in(mp);
    if (in) {
      try {
        Json old = Json::parse(in);
        for (const auto& [k, v] : old.at("artifacts").items())
          entries[k] = v.at("command").get<std::string>();
      } catch (...) {
        // unreadable manifest: rebuild from this run
      }
    }
  }
  for (const std::string& f : files) entries[f] = command;
  Json arts = Json::object();
  for (const auto& [k, v] : entries) arts[k] = Json{{"command", v}};
  Json m;
  m["artifacts"] = std::move(arts);
  write_file(mp.string(), dump_json(m));
}

void emit(const std::string& outdir, const std::string& command,
          const std::vector<std::pair<std::string, std::string>>& files) {
  std::vector<std::string> names;
  for (const auto& [name, content] : files) {
    write_file((std::filesystem::path(outdir) / name).string(), content);
    names.push_back(name);
    std::cout << "wrote " << (std::filesystem::path(outdir) / name).string()
              << "\n";
  }
  add_manifest(outdir, command, names);
}

Json int_map_json(const std::map<int, int>& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[std::to_string(k)] = v;
  return j;
}

// ---- scalar-Lax side -------------------------------------------------------

struct LaxBundle {
  LaxPair lp;
  RootCache rc;
  NormalCoordinates nc;
};

LaxBundle make_lax(int trunc) {
  LaxBundle b;
  b.lp = build_lax();
  b.rc = sixth_root(b.lp, -trunc);
  b.nc = normal_coordinates(b.lp, b.rc);
  return b;
}

using DensityRows = std::vector<std::pair<std::pair<int, int>, DiffPoly>>;

// densities in normal coordinates, reduced mod Im d_x
DensityRows reduced_densities(LaxBundle& b, bool first_flow, int jobs) {
  std::map<std::pair<int, int>, DiffPoly> hs =
      tau_densities_s(b.lp, b.rc, b.nc, first_flow);
  DensityRows rows(hs.begin(), hs.end());
  std::vector<std::function<void()>> tasks;
  for (size_t i = 0; i < rows.size(); ++i)
    tasks.push_back([i, &rows, &b] {
      rows[i].second = normal_form(
          b.nc.s_in_ut.apply(rows[i].second).rescale_eps_inv_sqrt2());
    });
  run_parallel(tasks, jobs);
  return rows;
}

Json densities_json(const DensityRows& rows) {
  Json list = Json::array();
  for (const auto& [key, den] : rows) {
    Json e;
    e["alpha"] = key.first;
    e["level"] = key.second;
    e["density"] = poly_json(den);
    list.push_back(std::move(e));
  }
  Json out;
  out["alphabet"] = "ut";
  out["representative"] = "reduced mod Im d_x";
  out["densities"] = std::move(list);
  return out;
}

Json poisson_json(LaxBundle& b, int jobs) {
  DiffOpMatrix k = poisson_matrix_first(b.lp, b.nc, jobs);
  Json out;
  out["alphabet"] = "ut";
  out["structure"] = "first";
  out["matrix"] = matrix_json(k);
  return out;
}

// ---- deformation side ------------------------------------------------------

Json dr_classical_json(const DrSolveReport& rep, int zcap) {
  DrTables t = run_recursion(rep.g11, DrSetting::full(), zcap);
  Json table = Json::array();
  for (const auto& [key, den] : t.g) {
    Json e;
    e["alpha"] = key.first;
    e["level"] = key.second;
    e["density"] = poly_json(den);
    table.push_back(std::move(e));
  }
  Json report;
  report["zcap"] = rep.zcap_used;
  report["ansatz"] = int_map_json(rep.ansatz);
  report["rank"] = int_map_json(rep.rank);
  report["nullity"] = int_map_json(rep.nullity);
  report["normalization"] = rep.normalization;
  Json out;
  out["alphabet"] = "u";
  out["hamiltonian"] = poly_json(rep.g11);
  out["report"] = std::move(report);
  out["table"] = std::move(table);
  return out;
}

Json dr_quantum_json(const QuantumSolveReport& rep, int zcap) {
  QuantumTables t =
      run_quantum_recursion(rep.g11, DrSetting::full(), zcap, 4);
  Json table = Json::array();
  for (const auto& [key, den] : t.g) {
    Json e;
    e["alpha"] = key.first;
    e["level"] = key.second;
    e["density"] = poly_json(den);
    table.push_back(std::move(e));
  }
  Json report;
  report["ansatz"] = rep.ansatz;
  report["rank"] = rep.rank;
  report["nullity"] = rep.nullity;
  report["normalization"] = rep.normalization;
  Json out;
  out["alphabet"] = "u";
  out["hamiltonian"] = poly_json(rep.g11);
  out["correction"] = poly_json(rep.g11.select_hbar(1));
  out["report"] = std::move(report);
  out["table"] = std::move(table);
  return out;
}

Json polylog_json() {
  std::vector<std::vector<int>> tuples;
  for (int a = 1; a <= 6; ++a) tuples.push_back({a});
  for (int a = 1; a <= 6; ++a)
    for (int a2 = a; a + a2 <= 6; ++a2) tuples.push_back({a, a2});
  for (int a = 1; a <= 6; ++a)
    for (int a2 = a; a2 <= 6; ++a2)
      for (int a3 = a2; a + a2 + a3 <= 6; ++a3)
        tuples.push_back({a, a2, a3});
  Json list = Json::array();
  for (const std::vector<int>& d : tuples) {
    const std::vector<Scalar>& c = polylog_coeffs(d);
    Json coeffs = Json::array();
    for (const Scalar& s : c) coeffs.push_back(s.to_strings()[0]);
    Json e;
    e["indices"] = d;
    e["coeffs"] = std::move(coeffs);
    list.push_back(std::move(e));
  }
  Json out;
  out["note"] = "decomposition coefficients, entry j-1 multiplies the "
                "order-j series";
  out["tables"] = std::move(list);
  return out;
}

// ---- subcommand bodies -----------------------------------------------------

int cmd_ds_densities(const std::string& out, int trunc, int jobs,
                     bool first_flow) {
  LaxBundle b = make_lax(trunc);
  DensityRows rows = reduced_densities(b, first_flow, jobs);
  Json j = densities_json(rows);
  for (const auto& [key, den] : rows)
    std::cout << "h[" << key.first << "," << key.second << "]: " << den.size()
              << " terms\n";
  std::string cmd = std::string("ds densities") +
                    (first_flow ? " --first-flow" : "") +
                    " --trunc " + std::to_string(trunc);
  emit(out, cmd, {{"densities.json", dump_json(j)}});
  return 0;
}

int cmd_ds_poisson(const std::string& out, int trunc, int jobs) {
  LaxBundle b = make_lax(trunc);
  Json j = poisson_json(b, jobs);
  for (size_t i = 0; i < 4; ++i)
    for (size_t k = 0; k < 4; ++k)
      std::cout << "K[" << i + 1 << "][" << k + 1
                << "] = " << j["matrix"][i][k]["text"].get<std::string>()
                << "\n";
  emit(out, "ds poisson --trunc " + std::to_string(trunc),
       {{"poisson_first.json", dump_json(j)}});
  return 0;
}

int cmd_dr_solve(const std::string& out, int zcap, int eps_cap) {
  DrSolveReport rep = solve_g11(DrSetting::full(), zcap, eps_cap);
  std::cout << "hamiltonian density: " << rep.g11.size() << " terms\n";
  for (const auto& [lvl, nul] : rep.nullity)
    std::cout << "eps^" << lvl << ": ansatz " << rep.ansatz.at(lvl)
              << ", rank " << rep.rank.at(lvl) << ", solution space " << nul
              << "\n";
  std::cout << rep.normalization << "\n";
  Json j = dr_classical_json(rep, zcap);
  emit(out,
       "dr solve --zcap " + std::to_string(zcap) + " --trunc " +
           std::to_string(eps_cap),
       {{"dr_classical.json", dump_json(j)}});
  return 0;
}

int cmd_dr_quantum(const std::string& out, int zcap, int eps_cap) {
  DrSolveReport cls = solve_g11(DrSetting::full(), 2, eps_cap);
  QuantumSolveReport rep =
      solve_quantum_g11(cls.g11, DrSetting::full(), 2);
  std::cout << "correction: " << rep.g11.select_hbar(1).str() << "\n";
  std::cout << "ansatz " << rep.ansatz << ", rank " << rep.rank
            << ", solution space " << rep.nullity << "\n";
  std::cout << rep.normalization << "\n";
  Json j = dr_quantum_json(rep, zcap);
  emit(out,
       "dr quantum --zcap " + std::to_string(zcap) + " --trunc " +
           std::to_string(eps_cap),
       {{"dr_quantum.json", dump_json(j)}});
  return 0;
}

std::vector<int> parse_kill(const std::string& arg) {
  std::vector<int> kill;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    size_t pos = 0;
    int v = std::stoi(item, &pos);
    if (pos != item.size() || v < 1 || v > 4)
      throw CLI::ValidationError("--kill", "field labels must be 1..4");
    kill.push_back(v);
  }
  if (kill.empty())
    throw CLI::ValidationError("--kill", "no field labels given");
  return kill;
}

int cmd_dr_restrict(const std::string& out, const std::string& kill_arg,
                    int zcap, int eps_cap, bool with_quantum) {
  std::vector<int> kill = parse_kill(kill_arg);
  DrSetting st = DrSetting::without(kill);
  if (st.fields.empty())
    throw CLI::ValidationError("--kill", "no fields left");
  DrSolveReport cls = solve_g11(DrSetting::full(), 2, eps_cap);
  DiffPoly g11r = restrict_density(cls.g11, kill);

  Json j;
  j["killed"] = kill;
  j["active"] = st.fields;
  j["alphabet"] = "u";
  j["hamiltonian"] = poly_json(g11r);
  {
    size_t n = st.fields.size();
    DiffOpMatrix op = zero_matrix(n);
    for (size_t i = 0; i < n; ++i)
      for (size_t k = 0; k < n; ++k) {
        Scalar e = st.eta_upper(st.fields[i], st.fields[k]);
        if (!e.is_zero()) op[i][k] = DiffOp::dx(1) * e;
      }
    j["operator"] = matrix_json(op);
    for (size_t i = 0; i < n; ++i)
      for (size_t k = 0; k < n; ++k)
        std::cout << "K[" << st.fields[i] << "][" << st.fields[k]
                  << "] = " << op[i][k].str() << "\n";
  }
  try {
    DrTables t = run_recursion(g11r, st, zcap);
    j["closes"] = true;
    std::cout << "restricted recursion closes through level " << zcap << "\n";
    Json table = Json::array();
    for (const auto& [key, den] : t.g) {
      Json e;
      e["alpha"] = key.first;
      e["level"] = key.second;
      e["density"] = poly_json(den);
      table.push_back(std::move(e));
    }
    j["table"] = std::move(table);
  } catch (const std::exception& e) {
    j["closes"] = false;
    j["reason"] = e.what();
    std::cout << "restricted recursion does not close: " << e.what() << "\n";
  }

  if (with_quantum) {
    // exploratory: the quantum behaviour of the restricted sector carries no
    // claim; the scan just reports what the commutators do
    std::cout << "exploratory quantum scan (no closure claim):\n";
    QuantumSolveReport q = solve_quantum_g11(cls.g11, DrSetting::full(), 2);
    DiffPoly gq = restrict_density(q.g11, kill);
    Json qj;
    qj["hamiltonian"] = poly_json(gq);
    try {
      QuantumTables qt = run_quantum_recursion(gq, st, zcap, 4);
      qj["closes"] = true;
      Json rows = Json::array();
      for (auto it = qt.g.begin(); it != qt.g.end(); ++it)
        for (auto jt = std::next(it); jt != qt.g.end(); ++jt) {
          DiffPoly comm = star_commutator(it->second, jt->second, st, 4);
          bool zero = LocalFunctional(comm).is_zero();
          Json e;
          e["pair"] = Json::array({Json::array({it->first.first,
                                                it->first.second}),
                                   Json::array({jt->first.first,
                                                jt->first.second})});
          e["vanishes"] = zero;
          rows.push_back(std::move(e));
          std::cout << "  [G(" << it->first.first << "," << it->first.second
                    << "), G(" << jt->first.first << "," << jt->first.second
                    << ")] " << (zero ? "vanishes" : "does not vanish")
                    << "\n";
        }
      qj["brackets"] = std::move(rows);
    } catch (const std::exception& e) {
      qj["closes"] = false;
      qj["reason"] = e.what();
      std::cout << "  quantum recursion does not close: " << e.what() << "\n";
    }
    j["quantum_scan"] = std::move(qj);
  }

  std::string cmd = "dr restrict --kill " + kill_arg + " --zcap " +
                    std::to_string(zcap) +
                    (with_quantum ? " --quantum" : "");
  emit(out, cmd, {{"dr_restricted.json", dump_json(j)}});
  return 0;
}

int cmd_verify(const std::string& suite, int jobs) {
  std::vector<CheckResult> results;
  try {
    results = run_suite(suite, jobs);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }
  bool any_fail = false, any_error = false;
  for (const CheckResult& r : results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": "
              << r.detail << "\n";
    if (!r.pass) any_fail = true;
    if (r.error) any_error = true;
  }
  if (any_error) return 3;
  return any_fail ? 1 : 0;
}

int cmd_export(const std::string& out, const std::string& what,
               const std::string& format, int trunc, int eps_cap, int zcap,
               int jobs) {
  auto render_rows =
      [&](const std::vector<std::pair<std::string, DiffPoly>>& rows,
          const std::string& stem) {
        std::ostringstream os;
        for (const auto& [label, f] : rows) {
          if (format == "text")
            os << label << " = " << f.str() << "\n";
          else
            os << label << " &= " << latex(f) << " \\\\\n";
        }
        std::string ext = format == "text" ? ".txt" : ".tex";
        emit(out, "export --what " + what + " --format " + format,
             {{stem + ext, os.str()}});
      };

  if (what == "densities") {
    LaxBundle b = make_lax(trunc);
    DensityRows ds_rows = reduced_densities(b, false, jobs);
    if (format == "json") {
      emit(out, "export --what densities --format json",
           {{"densities.json", dump_json(densities_json(ds_rows))}});
    } else {
      std::vector<std::pair<std::string, DiffPoly>> rows;
      for (const auto& [key, den] : ds_rows)
        rows.push_back({"h[" + std::to_string(key.first) + "," +
                            std::to_string(key.second) + "]",
                        den});
      render_rows(rows, "densities");
    }
    return 0;
  }
  if (what == "poisson") {
    LaxBundle b = make_lax(trunc);
    DiffOpMatrix k = poisson_matrix_first(b.lp, b.nc, jobs);
    if (format == "json") {
      Json j;
      j["alphabet"] = "ut";
      j["structure"] = "first";
      j["matrix"] = matrix_json(k);
      emit(out, "export --what poisson --format json",
           {{"poisson_first.json", dump_json(j)}});
    } else {
      std::ostringstream os;
      for (size_t i = 0; i < 4; ++i)
        for (size_t c = 0; c < 4; ++c) {
          std::string label =
              "K[" + std::to_string(i + 1) + "][" + std::to_string(c + 1) +
              "]";
          if (format == "text")
            os << label << " = " << k[i][c].str() << "\n";
          else
            os << label << " &= " << latex(k[i][c]) << " \\\\\n";
        }
      std::string ext = format == "text" ? ".txt" : ".tex";
      emit(out, "export --what poisson --format " + format,
           {{std::string("poisson_first") + ext, os.str()}});
    }
    return 0;
  }
  if (what == "dr-classical") {
    DrSolveReport rep = solve_g11(DrSetting::full(), zcap, eps_cap);
    if (format == "json") {
      emit(out, "export --what dr-classical --format json",
           {{"dr_classical.json", dump_json(dr_classical_json(rep, zcap))}});
    } else {
      render_rows({{"g[1,1]", rep.g11}}, "dr_classical");
    }
    return 0;
  }
  if (what == "dr-quantum") {
    DrSolveReport cls = solve_g11(DrSetting::full(), 2, eps_cap);
    QuantumSolveReport rep =
        solve_quantum_g11(cls.g11, DrSetting::full(), 2);
    if (format == "json") {
      emit(out, "export --what dr-quantum --format json",
           {{"dr_quantum.json", dump_json(dr_quantum_json(rep, zcap))}});
    } else {
      render_rows({{"G[1,1]", rep.g11}}, "dr_quantum");
    }
    return 0;
  }
  if (what == "polylog") {
    Json j = polylog_json();
    if (format == "json") {
      emit(out, "export --what polylog --format json",
           {{"polylog_coeffs.json", dump_json(j)}});
    } else {
      std::ostringstream os;
      for (const Json& e : j["tables"]) {
        os << "Ct(";
        const auto& idx = e["indices"];
        for (size_t i = 0; i < idx.size(); ++i)
          os << (i ? "," : "") << idx[i].get<int>();
        os << ") = (";
        const auto& cs = e["coeffs"];
        for (size_t i = 0; i < cs.size(); ++i)
          os << (i ? ", " : "") << cs[i].get<std::string>();
        os << ")\n";
      }
      std::string ext = format == "text" ? ".txt" : ".tex";
      emit(out, "export --what polylog --format " + format,
           {{std::string("polylog_coeffs") + ext, os.str()}});
    }
    return 0;
  }
  if (what == "potential") {
    DiffPoly f = frobenius_potential();
    if (format == "json") {
      Json j;
      j["alphabet"] = "u";
      j["potential"] = poly_json(f);
      emit(out, "export --what potential --format json",
           {{"potential.json", dump_json(j)}});
    } else {
      render_rows({{"F", f}}, "potential");
    }
    return 0;
  }
  std::cerr << "usage error: unknown export target: " << what << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact computer algebra for a rank-four integrable hierarchy:"
               " scalar-Lax densities and brackets, their deformation-solver"
               " counterparts, and the verification suite"};
  app.require_subcommand(1);

  std::string out = "artifacts";
  int jobs = 1;
  app.add_option("--out", out, "artifact directory")->capture_default_str();
  app.add_option("--jobs", jobs, "worker threads for independent sub-tasks")
      ->capture_default_str();

  int trunc = 13;    // lowest kept symbol power for the root cache
  int eps_cap = 10;  // highest eps power resolved by the deformation solve
  int zcap = 2;      // recursion depth for exported tables

  int rc = 0;
  bool ran = false;

  CLI::App* ds = app.add_subcommand("ds", "scalar-Lax computations");
  ds->require_subcommand(1);
  CLI::App* dsd = ds->add_subcommand(
      "densities", "tau-symmetric densities in normal coordinates");
  bool first_flow = false;
  dsd->add_option("--trunc", trunc, "root-cache symbol depth")
      ->capture_default_str();
  dsd->add_flag("--first-flow", first_flow,
                "include the heavy level-one density");
  dsd->callback([&] {
    ran = true;
    rc = cmd_ds_densities(out, trunc, jobs, first_flow);
  });
  CLI::App* dsp = ds->add_subcommand(
      "poisson", "first hamiltonian operator in normal coordinates");
  dsp->add_option("--trunc", trunc, "root-cache symbol depth")
      ->capture_default_str();
  dsp->callback([&] {
    ran = true;
    rc = cmd_ds_poisson(out, trunc, jobs);
  });

  CLI::App* dr = app.add_subcommand("dr", "deformation-solver computations");
  dr->require_subcommand(1);
  CLI::App* drs = dr->add_subcommand(
      "solve", "resolve the deformed first hamiltonian level by level");
  drs->add_option("--zcap", zcap, "recursion depth for the exported table")
      ->capture_default_str();
  drs->add_option("--trunc", eps_cap, "highest eps power to resolve")
      ->capture_default_str();
  drs->callback([&] {
    ran = true;
    rc = cmd_dr_solve(out, zcap, eps_cap);
  });
  CLI::App* drq = dr->add_subcommand(
      "quantum", "hbar-linear correction of the resolved hamiltonian");
  int qzcap = 1;
  drq->add_option("--zcap", qzcap, "recursion depth for the exported table")
      ->capture_default_str();
  drq->add_option("--trunc", eps_cap, "highest eps power to resolve")
      ->capture_default_str();
  drq->callback([&] {
    ran = true;
    rc = cmd_dr_quantum(out, qzcap, eps_cap);
  });
  CLI::App* drr = dr->add_subcommand(
      "restrict", "restriction of the hierarchy to a subset of fields");
  std::string kill_arg;
  bool with_quantum = false;
  int rzcap = 1;
  drr->add_option("--kill", kill_arg, "comma-separated field labels to drop")
      ->required();
  drr->add_option("--zcap", rzcap, "recursion depth")->capture_default_str();
  drr->add_option("--trunc", eps_cap, "highest eps power to resolve")
      ->capture_default_str();
  drr->add_flag("--quantum", with_quantum,
                "exploratory quantum-bracket scan of the restricted sector");
  drr->callback([&] {
    ran = true;
    rc = cmd_dr_restrict(out, kill_arg, rzcap, eps_cap, with_quantum);
  });

  CLI::App* ver = app.add_subcommand("verify", "run the verification suite");
  std::string suite = "all";
  ver->add_option("--suite", suite,
                  "all, ds, dr, quantum, properties, or a check name")
      ->capture_default_str();
  ver->callback([&] {
    ran = true;
    rc = cmd_verify(suite, jobs);
  });

  CLI::App* exp = app.add_subcommand("export", "write one artifact family");
  std::string what = "densities";
  std::string format = "json";
  exp->add_option("--what", what,
                  "densities, poisson, dr-classical, dr-quantum, polylog, "
                  "or potential")
      ->required();
  exp->add_option("--format", format, "json, text, or latex")
      ->check(CLI::IsMember({"json", "text", "latex"}));
  exp->add_option("--trunc", trunc, "root-cache symbol depth")
      ->capture_default_str();
  exp->add_option("--zcap", zcap, "recursion depth for exported tables")
      ->capture_default_str();
  exp->callback([&] {
    ran = true;
    rc = cmd_export(out, what, format, trunc, eps_cap, zcap, jobs);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const truncation_error& e) {
    std::cerr << "truncation error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  if (!ran) return 2;
  return rc;
}

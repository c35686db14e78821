#include "d4dr/jsonio.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace d4dr {

namespace {

std::string var_label(uint32_t code) {
  Alphabet a = JetVar::alphabet(code);
  std::string n = alphabet_name(a);
  if (a != Alphabet::rho && a != Alphabet::dX && a != Alphabet::dY)
    n += std::to_string(JetVar::index(code));
  return n;
}

}  // namespace

Json poly_json(const DiffPoly& f) {
  Json terms = Json::array();
  for (const auto& [m, c] : f.terms()) {
    Json t;
    std::array<std::string, 4> comps = c.to_strings();
    t["coeff"] = Json::array({comps[0], comps[1], comps[2], comps[3]});
    t["eps"] = m.eps;
    t["hbar"] = m.hbar;
    Json vars = Json::array();
    for (const auto& [code, e] : m.vars) {
      Json v;
      v["var"] = var_label(code);
      v["order"] = JetVar::order(code);
      v["power"] = e;
      vars.push_back(std::move(v));
    }
    t["vars"] = std::move(vars);
    terms.push_back(std::move(t));
  }
  Json out;
  out["text"] = f.str();
  out["terms"] = std::move(terms);
  return out;
}

Json op_json(const DiffOp& op) {
  Json orders = Json::array();
  for (int k = 0; k <= op.order(); ++k) {
    if (op.coeff(k).is_zero()) continue;
    Json o;
    o["order"] = k;
    o["coeff"] = poly_json(op.coeff(k));
    orders.push_back(std::move(o));
  }
  Json out;
  out["text"] = op.str();
  out["orders"] = std::move(orders);
  return out;
}

Json matrix_json(const DiffOpMatrix& m) {
  Json rows = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const DiffOp& e : row) r.push_back(op_json(e));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_file(const std::string& path, const std::string& text) {
  std::filesystem::path p(path);
  if (p.has_parent_path())
    std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << text;
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace d4dr

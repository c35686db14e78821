#include "d4dr/expr.hpp"

#include <cctype>

namespace d4dr {

namespace {

struct Lexer {
  const std::string& s;
  size_t pos = 0;

  explicit Lexer(const std::string& text) : s(text) {}

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  char peek() {
    skip();
    return pos < s.size() ? s[pos] : '\0';
  }
  char get() {
    char c = peek();
    if (pos < s.size()) ++pos;
    return c;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw structure_error("parse error at position " + std::to_string(pos) +
                          ": " + msg);
  }
  bool eat(char c) {
    if (peek() != c) return false;
    ++pos;
    return true;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  long number() {
    skip();
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      ++pos;
    if (pos == start) fail("expected a number");
    return std::stol(s.substr(start, pos - start));
  }

  // digits, optionally a tight "/digits"
  Scalar rational() {
    long num = number();
    if (pos < s.size() && s[pos] == '/' && pos + 1 < s.size() &&
        std::isdigit(static_cast<unsigned char>(s[pos + 1]))) {
      ++pos;
      long den = number();
      return Scalar::rational(num, den);
    }
    return Scalar(num);
  }

  std::string ident() {
    skip();
    size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    return s.substr(start, pos - start);
  }
};

struct Parser {
  Lexer lx;

  explicit Parser(const std::string& text) : lx(text) {}

  DiffPoly variable(const std::string& tok) {
    size_t k = 0;
    while (k < tok.size() && std::isalpha(static_cast<unsigned char>(tok[k])))
      ++k;
    std::string head = tok.substr(0, k);
    auto a = alphabet_from_name(head);
    if (!a) lx.fail("unknown name '" + tok + "'");
    int index = 1;
    int order = 0;
    size_t p = k;
    if (p < tok.size() && std::isdigit(static_cast<unsigned char>(tok[p]))) {
      if (*a == Alphabet::rho || *a == Alphabet::dX || *a == Alphabet::dY)
        lx.fail("'" + head + "' takes no field index");
      index = tok[p] - '0';
      ++p;
    }
    if (p < tok.size()) {
      if (tok[p] != '_') lx.fail("bad variable '" + tok + "'");
      ++p;
      if (p == tok.size()) lx.fail("missing jet order in '" + tok + "'");
      order = 0;
      for (; p < tok.size(); ++p) {
        if (!std::isdigit(static_cast<unsigned char>(tok[p])))
          lx.fail("bad jet order in '" + tok + "'");
        order = order * 10 + (tok[p] - '0');
      }
    }
    return DiffPoly::var(*a, index, order);
  }

  DiffPoly atom() {
    char c = lx.peek();
    if (c == '(') {
      lx.get();
      DiffPoly e = expr();
      lx.expect(')');
      return e;
    }
    if (c == '-') {
      lx.get();
      return -factor();
    }
    if (std::isdigit(static_cast<unsigned char>(c)))
      return DiffPoly(lx.rational());
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string tok = lx.ident();
      if (tok == "I") return DiffPoly(Scalar::i());
      if (tok == "sqrt2") return DiffPoly(Scalar::sqrt2());
      if (tok == "eps") return DiffPoly::eps(1);
      if (tok == "hbar") return DiffPoly::hbar(1);
      if (tok == "dx") {
        lx.expect('(');
        DiffPoly e = expr();
        int k = 1;
        if (lx.eat(',')) k = int(lx.number());
        lx.expect(')');
        return d_x(e, k);
      }
      return variable(tok);
    }
    lx.fail("unexpected character");
  }

  DiffPoly factor() {
    DiffPoly base = atom();
    if (lx.peek() == '^') {
      lx.get();
      long e = lx.number();
      base = base.pow(int(e));
    }
    return base;
  }

  DiffPoly term() {
    DiffPoly prod = factor();
    while (lx.peek() == '*') {
      lx.get();
      prod *= factor();
    }
    return prod;
  }

  DiffPoly expr() {
    DiffPoly sum;
    char c = lx.peek();
    bool neg = false;
    if (c == '+' || c == '-') {
      lx.get();
      neg = (c == '-');
    }
    DiffPoly t = term();
    sum = neg ? -t : t;
    while (true) {
      c = lx.peek();
      if (c != '+' && c != '-') break;
      lx.get();
      t = term();
      if (c == '-')
        sum -= t;
      else
        sum += t;
    }
    return sum;
  }
};

std::string latex_rational(const mpq_class& q) {
  mpq_class a = abs(q);
  std::string mag;
  if (a.get_den() == 1)
    mag = a.get_num().get_str();
  else
    mag = "\\frac{" + a.get_num().get_str() + "}{" + a.get_den().get_str() +
          "}";
  return (sgn(q) < 0 ? "-" : "") + mag;
}

// magnitude only; sign handled by the caller for the leading component
std::string latex_scalar(const Scalar& c) {
  static const char* unit[4] = {"", "I", "\\sqrt{2}", "I\\sqrt{2}"};
  std::string out;
  int parts = 0;
  for (int k = 0; k < 4; ++k)
    if (sgn(c.comp(k)) != 0) ++parts;
  for (int k = 0; k < 4; ++k) {
    const mpq_class& q = c.comp(k);
    if (sgn(q) == 0) continue;
    std::string piece;
    if (k > 0 && abs(q) == 1)
      piece = (sgn(q) < 0 ? "-" : "") + std::string(unit[k]);
    else
      piece = latex_rational(q) + unit[k];
    if (!out.empty() && piece[0] != '-') out += "+";
    out += piece;
  }
  if (out.empty()) return "0";
  if (parts > 1) out = "\\left(" + out + "\\right)";
  return out;
}

std::string latex_var(uint32_t code) {
  static const char* base[8] = {"s",
                                "v",
                                "{\\widetilde v}",
                                "u",
                                "{\\widetilde u}",
                                "\\rho",
                                "dX",
                                "dY"};
  Alphabet a = JetVar::alphabet(code);
  std::string out = base[size_t(a)];
  if (a != Alphabet::rho && a != Alphabet::dX && a != Alphabet::dY)
    out += "^" + std::to_string(JetVar::index(code));
  int k = JetVar::order(code);
  if (k > 9)
    out += "_{" + std::to_string(k) + "}";
  else if (k > 0)
    out += "_" + std::to_string(k);
  return out;
}

std::string latex_term(const Monomial& m, const Scalar& c, bool first) {
  std::string out;
  bool unit_coeff = (c == Scalar(1)) && !m.is_constant();
  bool minus_unit = (c == Scalar(-1)) && !m.is_constant();
  std::string cs;
  if (unit_coeff)
    cs = "";
  else if (minus_unit)
    cs = "-";
  else
    cs = latex_scalar(c);
  if (!first && (cs.empty() || cs[0] != '-')) out += "+";
  out += cs;
  for (const auto& [code, e] : m.vars) {
    std::string v = latex_var(code);
    if (e != 1)
      v = "\\left(" + v + "\\right)^{" + std::to_string(e) + "}";
    if (!out.empty() && out.back() != '-' && out.back() != '+') out += " ";
    out += v;
  }
  if (m.eps != 0) {
    out += m.eps == 1 ? " \\epsilon"
                      : " \\epsilon^{" + std::to_string(m.eps) + "}";
  }
  if (m.hbar != 0) {
    out += m.hbar == 1 ? " \\hbar"
                       : " \\hbar^{" + std::to_string(m.hbar) + "}";
  }
  if (m.is_constant() && (unit_coeff || minus_unit)) out += "1";
  return out;
}

}  // namespace

DiffPoly parse_poly(const std::string& text) {
  Parser p(text);
  DiffPoly out = p.expr();
  if (p.lx.peek() != '\0') p.lx.fail("trailing input");
  return out;
}

std::string latex(const DiffPoly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  const auto& terms = f.terms();
  bool first = true;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    out += latex_term(it->first, it->second, first);
    first = false;
  }
  return out;
}

std::string latex(const DiffOp& op) {
  if (op.is_zero()) return "0";
  std::string out;
  for (int k = int(op.order()); k >= 0; --k) {
    const DiffPoly& c = op.coeff(k);
    if (c.is_zero()) continue;
    std::string piece;
    bool unit = (c == DiffPoly(1));
    if (!unit) {
      std::string inner = latex(c);
      piece = c.terms().size() > 1 ? "\\left(" + inner + "\\right)" : inner;
    }
    if (k > 0) {
      if (!piece.empty()) piece += "\\,";
      piece += k == 1 ? "\\partial_x" : "\\partial_x^{" + std::to_string(k) + "}";
    } else if (unit) {
      piece = "1";
    }
    if (!out.empty()) out += " + ";
    out += piece;
  }
  return out;
}

}  // namespace d4dr

#include "d4dr/diffop.hpp"

#include <sstream>

namespace d4dr {

namespace {
const DiffPoly kZero{};

Scalar int_binomial(long n, long k) {
  mpq_class b(1);
  for (long j = 0; j < k; ++j) {
    b *= mpq_class(n - j);
    b /= mpq_class(j + 1);
  }
  return Scalar(b);
}
}  // namespace

void DiffOp::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

DiffOp DiffOp::dx(int k) { return monomial_op(DiffPoly(1), k); }

DiffOp DiffOp::mult(const DiffPoly& f) { return monomial_op(f, 0); }

DiffOp DiffOp::monomial_op(const DiffPoly& f, int k) {
  if (k < 0) throw structure_error("differential operator needs order >= 0");
  DiffOp x;
  if (f.is_zero()) return x;
  x.c_.assign(size_t(k + 1), DiffPoly());
  x.c_[size_t(k)] = f;
  return x;
}

const DiffPoly& DiffOp::coeff(int k) const {
  if (k < 0 || k >= int(c_.size())) return kZero;
  return c_[size_t(k)];
}

DiffOp DiffOp::operator-() const {
  DiffOp x = *this;
  for (auto& f : x.c_) f = -f;
  return x;
}

DiffOp& DiffOp::operator+=(const DiffOp& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

DiffOp& DiffOp::operator-=(const DiffOp& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

DiffOp operator*(const DiffOp& a, const DiffOp& b) {
  DiffOp out;
  if (a.is_zero() || b.is_zero()) return out;
  out.c_.assign(size_t(a.order() + b.order() + 1), DiffPoly());
  for (int m = 0; m <= b.order(); ++m) {
    const DiffPoly& bc = b.coeff(m);
    if (bc.is_zero()) continue;
    std::vector<DiffPoly> tab = dx_table(bc, a.order());
    for (int n = 0; n <= a.order(); ++n) {
      const DiffPoly& ac = a.coeff(n);
      if (ac.is_zero()) continue;
      for (int k = 0; k <= n; ++k) {
        Scalar c = int_binomial(n, k);
        out.c_[size_t(n + m - k)] += ac * tab[size_t(k)] * c;
      }
    }
  }
  out.trim();
  return out;
}

DiffOp DiffOp::operator*(const Scalar& s) const {
  DiffOp x = *this;
  for (auto& f : x.c_) f = f * s;
  x.trim();
  return x;
}

DiffPoly DiffOp::apply(const DiffPoly& f) const {
  DiffPoly out;
  if (is_zero()) return out;
  std::vector<DiffPoly> tab = dx_table(f, order());
  for (int k = 0; k <= order(); ++k) {
    if (c_[size_t(k)].is_zero()) continue;
    out += c_[size_t(k)] * tab[size_t(k)];
  }
  return out;
}

DiffOp DiffOp::adjoint() const {
  DiffOp out;
  for (int k = 0; k <= order(); ++k) {
    const DiffPoly& a = c_[size_t(k)];
    if (a.is_zero()) continue;
    std::vector<DiffPoly> tab = dx_table(a, k);
    for (int j = 0; j <= k; ++j) {
      Scalar c = int_binomial(k, j);
      if ((k % 2) != 0) c = Scalar(0) - c;
      out += DiffOp::monomial_op(tab[size_t(j)] * c, k - j);
    }
  }
  return out;
}

std::string DiffOp::str() const {
  std::ostringstream os;
  bool first = true;
  for (int k = order(); k >= 0; --k) {
    const DiffPoly& f = coeff(k);
    if (f.is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    std::string cs = f.str();
    // single-term coefficients print bare: "2*dx", "u1*dx"; sums need parens
    bool bare = f.size() == 1 && cs.find(' ') == std::string::npos;
    if (k == 0) {
      os << (f.size() == 1 ? cs : "(" + cs + ")");
      continue;
    }
    if (!(bare && cs == "1")) os << (bare ? cs : "(" + cs + ")") << "*";
    os << "dx";
    if (k != 1) os << "^" << k;
  }
  if (first) os << "0";
  return os.str();
}

DiffOpMatrix zero_matrix(size_t dim) {
  return DiffOpMatrix(dim, std::vector<DiffOp>(dim));
}

DiffOpMatrix adjoint_transpose(const DiffOpMatrix& m) {
  DiffOpMatrix out = zero_matrix(m.size());
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m.size(); ++j) out[i][j] = m[j][i].adjoint();
  return out;
}

bool matrix_equal(const DiffOpMatrix& a, const DiffOpMatrix& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a.size(); ++j)
      if (a[i][j] != b[i][j]) return false;
  return true;
}

}  // namespace d4dr

#include "d4dr/linsys.hpp"

#include <algorithm>
#include <map>

namespace d4dr {

void LinearSystem::add_row(std::vector<std::pair<size_t, Scalar>> entries,
                           Scalar rhs) {
  std::map<size_t, Scalar> acc;
  for (auto& [c, v] : entries) {
    if (c >= ncols_) throw arithmetic_error("linsys: column out of range");
    acc[c] += v;
  }
  Row r;
  for (auto& [c, v] : acc)
    if (!v.is_zero()) r.a.emplace_back(c, v);
  r.rhs = std::move(rhs);
  if (r.a.empty() && r.rhs.is_zero()) return;
  rows_.push_back(std::move(r));
}

namespace {

using SparseRow = std::vector<std::pair<size_t, Scalar>>;

// row := row - f * pivot (both sparse, sorted by column)
void axpy(SparseRow& row, Scalar& rhs, const Scalar& f, const SparseRow& piv,
          const Scalar& piv_rhs) {
  SparseRow out;
  out.reserve(row.size() + piv.size());
  size_t i = 0, j = 0;
  while (i < row.size() || j < piv.size()) {
    if (j == piv.size() || (i < row.size() && row[i].first < piv[j].first)) {
      out.push_back(std::move(row[i++]));
    } else if (i == row.size() || piv[j].first < row[i].first) {
      out.emplace_back(piv[j].first, -(f * piv[j].second));
      ++j;
    } else {
      Scalar v = row[i].second - f * piv[j].second;
      if (!v.is_zero()) out.emplace_back(row[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  row = std::move(out);
  rhs -= f * piv_rhs;
}

}  // namespace

LinearSolution solve(const LinearSystem& sys) {
  const size_t n = sys.ncols();
  std::vector<SparseRow> rows;
  std::vector<Scalar> rhs;
  for (auto& r : sys.rows()) {
    rows.push_back(r.a);
    rhs.push_back(r.rhs);
  }

  std::vector<size_t> pivot_col_of_row;
  std::vector<char> row_done(rows.size(), 0);
  std::vector<char> col_used(n, 0);
  std::vector<size_t> pivot_rows;

  for (;;) {
    // column support over active rows
    std::vector<size_t> support(n, 0);
    for (size_t r = 0; r < rows.size(); ++r) {
      if (row_done[r]) continue;
      for (auto& [c, v] : rows[r])
        if (!col_used[c]) ++support[c];
    }
    size_t best = n, best_sup = 0;
    for (size_t c = 0; c < n; ++c)
      if (support[c] > best_sup) {
        best_sup = support[c];
        best = c;
      }
    if (best == n) break;  // no eliminable column left

    size_t prow = rows.size();
    for (size_t r = 0; r < rows.size(); ++r) {
      if (row_done[r]) continue;
      for (auto& [c, v] : rows[r])
        if (c == best) {
          prow = r;
          break;
        }
      if (prow != rows.size()) break;
    }
    // normalize pivot row
    Scalar pval;
    for (auto& [c, v] : rows[prow])
      if (c == best) pval = v;
    Scalar inv = pval.inverse();
    for (auto& [c, v] : rows[prow]) v *= inv;
    rhs[prow] *= inv;
    // eliminate everywhere else
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r == prow) continue;
      Scalar f;
      bool hit = false;
      for (auto& [c, v] : rows[r])
        if (c == best) {
          f = v;
          hit = true;
          break;
        }
      if (hit) axpy(rows[r], rhs[r], f, rows[prow], rhs[prow]);
    }
    row_done[prow] = 1;
    col_used[best] = 1;
    pivot_rows.push_back(prow);
    pivot_col_of_row.push_back(best);
  }

  LinearSolution sol;
  for (size_t r = 0; r < rows.size(); ++r)
    if (!row_done[r] && rows[r].empty() && !rhs[r].is_zero()) return sol;

  sol.consistent = true;
  sol.rank = pivot_rows.size();
  sol.particular.assign(n, Scalar());
  for (size_t k = 0; k < pivot_rows.size(); ++k)
    sol.particular[pivot_col_of_row[k]] = rhs[pivot_rows[k]];

  for (size_t c = 0; c < n; ++c) {
    if (col_used[c]) continue;
    std::vector<Scalar> vec(n, Scalar());
    vec[c] = Scalar(1);
    for (size_t k = 0; k < pivot_rows.size(); ++k) {
      for (auto& [cc, v] : rows[pivot_rows[k]])
        if (cc == c) vec[pivot_col_of_row[k]] = -v;
    }
    sol.nullspace.push_back(std::move(vec));
  }
  return sol;
}

}  // namespace d4dr

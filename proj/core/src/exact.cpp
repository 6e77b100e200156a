#include "dehnfill/exact.hpp"

namespace dehnfill {

namespace {

// incremental exact eliminator (fraction-free Gauss-Jordan): basis rows have
// pairwise distinct pivot columns and zeros at each other's pivots, so one
// reduction pass decides independence exactly
struct Eliminator {
  std::vector<std::vector<BigInt>> basis;
  std::vector<size_t> pivot_col;

  bool add_if_independent(const std::vector<long long>& row) {
    std::vector<BigInt> v(row.begin(), row.end());
    for (size_t b = 0; b < basis.size(); ++b) {
      size_t pc = pivot_col[b];
      if (v[pc] == 0) continue;
      BigInt piv = basis[b][pc], coeff = v[pc];
      for (size_t j = 0; j < v.size(); ++j) v[j] = v[j] * piv - coeff * basis[b][j];
    }
    size_t pc = v.size();
    for (size_t j = 0; j < v.size(); ++j)
      if (v[j] != 0) {
        pc = j;
        break;
      }
    if (pc == v.size()) return false;
    // back-reduce existing rows at the new pivot column
    for (size_t b = 0; b < basis.size(); ++b) {
      if (basis[b][pc] == 0) continue;
      BigInt piv = v[pc], coeff = basis[b][pc];
      for (size_t j = 0; j < v.size(); ++j) basis[b][j] = basis[b][j] * piv - coeff * v[j];
    }
    basis.push_back(std::move(v));
    pivot_col.push_back(pc);
    return true;
  }
};

}  // namespace

int exact_rank(const IntMatrix& m) {
  Eliminator e;
  int r = 0;
  for (const auto& row : m)
    if (e.add_if_independent(row)) ++r;
  return r;
}

std::vector<int> independent_rows(const IntMatrix& m, int max_rows) {
  Eliminator e;
  std::vector<int> sel;
  for (size_t i = 0; i < m.size(); ++i) {
    if (max_rows >= 0 && static_cast<int>(sel.size()) == max_rows) break;
    if (e.add_if_independent(m[i])) sel.push_back(static_cast<int>(i));
  }
  return sel;
}

std::vector<std::vector<BigInt>> exact_product(const IntMatrix& a, const IntMatrix& b) {
  size_t p = a.size(), q = p ? a[0].size() : 0, r = b.empty() ? 0 : b[0].size();
  std::vector<std::vector<BigInt>> out(p, std::vector<BigInt>(r, 0));
  for (size_t i = 0; i < p; ++i)
    for (size_t l = 0; l < q; ++l) {
      if (a[i][l] == 0) continue;
      for (size_t j = 0; j < r; ++j) out[i][j] += BigInt(a[i][l]) * b[l][j];
    }
  return out;
}

}  // namespace dehnfill

#pragma once

#include <vector>

#include "pforge/field.hpp"

namespace pforge {

using Vec = std::vector<FieldElem>;
using Mat = std::vector<Vec>;

/// Reduced row echelon form in place; returns the pivot column indices.
/// Deterministic: first nonzero entry in column order is the pivot.
inline std::vector<std::size_t> rref(Mat& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t sel = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (!m[i][c].is_zero()) {
        sel = i;
        break;
      }
    }
    if (sel == rows) continue;
    std::swap(m[r], m[sel]);
    FieldElem inv = m[r][c].inverse();
    for (std::size_t j = c; j < cols; ++j) m[r][j] = inv * m[r][j];
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      FieldElem f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] = m[i][j] - f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(Mat m) { return rref(m).size(); }

/// Basis of the right nullspace of m (cols unknowns), canonical from RREF:
/// one vector per free column, ordered by free column index.
inline std::vector<Vec> nullspace(Mat m, std::size_t cols) {
  if (m.empty()) m.push_back(Vec(cols, FieldElem::zero()));
  std::vector<std::size_t> pivots = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (std::size_t fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    Vec v(cols, FieldElem::zero());
    v[fc] = FieldElem::one();
    for (std::size_t pi = 0; pi < pivots.size(); ++pi) {
      v[pivots[pi]] = -m[pi][fc];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

inline FieldElem det(Mat m) {
  std::size_t n = m.size();
  FieldElem d = FieldElem::one();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t sel = n;
    for (std::size_t i = c; i < n; ++i) {
      if (!m[i][c].is_zero()) {
        sel = i;
        break;
      }
    }
    if (sel == n) return FieldElem::zero();
    if (sel != c) {
      std::swap(m[c], m[sel]);
      d = -d;
    }
    d = d * m[c][c];
    FieldElem inv = m[c][c].inverse();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m[i][c].is_zero()) continue;
      FieldElem f = inv * m[i][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] = m[i][j] - f * m[c][j];
    }
  }
  return d;
}

/// Inverse of a square matrix; nullopt when singular.
inline std::optional<Mat> inverse(const Mat& m) {
  std::size_t n = m.size();
  Mat aug(n, Vec(2 * n, FieldElem::zero()));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
    aug[i][n + i] = FieldElem::one();
  }
  auto pivots = rref(aug);
  if (pivots.size() != n || pivots.back() != n - 1) return std::nullopt;
  Mat inv(n, Vec(n, FieldElem::zero()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

/// Is v in the row span of basis (given as vectors)?
inline bool in_span(const std::vector<Vec>& basis, const Vec& v) {
  if (basis.empty()) {
    for (const auto& x : v)
      if (!x.is_zero()) return false;
    return true;
  }
  Mat m = basis;
  std::size_t base_rank = rank(m);
  m.push_back(v);
  return rank(m) == base_rank;
}

}  // namespace pforge

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "kw/error.hpp"

namespace kw {

using cdbl = std::complex<double>;

struct CMat {
  int n = 0;
  std::vector<cdbl> a;

  CMat() = default;
  explicit CMat(int size) : n(size), a((size_t)size * size, cdbl(0.0, 0.0)) {}

  cdbl& at(int i, int j) { return a[(size_t)i * n + j]; }
  const cdbl& at(int i, int j) const { return a[(size_t)i * n + j]; }
};

inline CMat identity(int n) {
  CMat m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

// Hadamard bound: the product of row norms dominates |det|, and scales the
// absolute tolerance used for determinants that vanish identically.
inline double hadamard_bound(const CMat& m) {
  double bound = 1.0;
  for (int i = 0; i < m.n; ++i) {
    double row = 0.0;
    for (int j = 0; j < m.n; ++j) row += std::norm(m.at(i, j));
    bound *= std::sqrt(row);
  }
  return bound;
}

// Determinant by LU with partial pivoting. A pivot below 1e-300 in magnitude
// reports an exactly singular matrix.
inline cdbl lu_det(CMat m) {
  int n = m.n;
  cdbl det = 1.0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(m.at(k, k));
    for (int i = k + 1; i < n; ++i) {
      double mag = std::abs(m.at(i, k));
      if (mag > best) {
        best = mag;
        piv = i;
      }
    }
    if (best < 1e-300) return 0.0;
    if (piv != k) {
      for (int j = k; j < n; ++j) std::swap(m.at(k, j), m.at(piv, j));
      det = -det;
    }
    det *= m.at(k, k);
    cdbl inv_pivot = 1.0 / m.at(k, k);
    for (int i = k + 1; i < n; ++i) {
      cdbl factor = m.at(i, k) * inv_pivot;
      if (factor == cdbl(0.0, 0.0)) continue;
      cdbl* ri = &m.at(i, 0);
      const cdbl* rk = &m.at(k, 0);
      for (int j = k + 1; j < n; ++j) ri[j] -= factor * rk[j];
    }
  }
  return det;
}

// In-place Householder reduction to upper Hessenberg form (similarity
// transform, so spectra and det(I - t*A) are preserved).
inline void hessenberg_inplace(CMat& m) {
  int n = m.n;
  std::vector<cdbl> v(n);
  for (int k = 0; k + 2 < n; ++k) {
    double norm = 0.0;
    for (int i = k + 1; i < n; ++i) norm += std::norm(m.at(i, k));
    norm = std::sqrt(norm);
    if (norm < 1e-300) continue;

    cdbl x0 = m.at(k + 1, k);
    cdbl phase = std::abs(x0) > 0 ? x0 / std::abs(x0) : cdbl(1.0, 0.0);
    cdbl alpha = -phase * norm;

    double vnorm2 = 0.0;
    for (int i = k + 1; i < n; ++i) {
      v[i] = m.at(i, k);
      if (i == k + 1) v[i] -= alpha;
      vnorm2 += std::norm(v[i]);
    }
    if (vnorm2 < 1e-300) continue;
    double scale = 2.0 / vnorm2;

    // A <- P A with P = I - scale * v v^*
    for (int j = k; j < n; ++j) {
      cdbl dot = 0.0;
      for (int i = k + 1; i < n; ++i) dot += std::conj(v[i]) * m.at(i, j);
      dot *= scale;
      for (int i = k + 1; i < n; ++i) m.at(i, j) -= v[i] * dot;
    }
    // A <- A P
    for (int i = 0; i < n; ++i) {
      cdbl dot = 0.0;
      for (int j = k + 1; j < n; ++j) dot += m.at(i, j) * v[j];
      dot *= scale;
      for (int j = k + 1; j < n; ++j) m.at(i, j) -= dot * std::conj(v[j]);
    }
    for (int i = k + 2; i < n; ++i) m.at(i, k) = 0.0;
  }
}

// det(I - t*H) for upper Hessenberg H, by Gaussian elimination with adjacent
// row pivoting; O(n^2) per evaluation.
inline cdbl det_i_minus_t_hessenberg(const CMat& h, cdbl t) {
  int n = h.n;
  CMat m(n);
  for (int i = 0; i < n; ++i) {
    int lo = i > 0 ? i - 1 : 0;
    for (int j = lo; j < n; ++j) m.at(i, j) = (i == j ? 1.0 : 0.0) - t * h.at(i, j);
  }
  cdbl det = 1.0;
  for (int k = 0; k < n; ++k) {
    if (k + 1 < n && std::abs(m.at(k + 1, k)) > std::abs(m.at(k, k))) {
      for (int j = k; j < n; ++j) std::swap(m.at(k, j), m.at(k + 1, j));
      det = -det;
    }
    if (std::abs(m.at(k, k)) < 1e-300) return 0.0;
    det *= m.at(k, k);
    if (k + 1 < n) {
      cdbl factor = m.at(k + 1, k) / m.at(k, k);
      if (factor != cdbl(0.0, 0.0))
        for (int j = k + 1; j < n; ++j) m.at(k + 1, j) -= factor * m.at(k, j);
    }
  }
  return det;
}

}  // namespace kw

#pragma once

#include "kw/cocycle.hpp"
#include "kw/kacward.hpp"
#include "kw/linalg.hpp"
#include "kw/map.hpp"

namespace kw {

// Twisted discrete Laplacian on vertex functions:
// (Delta f)(v) = sum over darts e from v of x_e (f(v) - f(terminus e) phi(e)).
// Any weighted map is accepted; isoradiality plays no role here.
inline CMat laplacian_matrix(const IsoradialMap& m, const WeightSystem& w, const Cocycle& phi) {
  CMat a(m.n_vertices());
  for (int d = 0; d < m.n_darts; ++d) {
    int v = m.origin(d);
    int u = m.terminus(d);
    cdbl x = w.x[m.edge_of_dart[d]];
    a.at(v, v) += x;
    a.at(v, u) -= x * phi.at(d);
  }
  return a;
}

inline cdbl det_laplacian(const IsoradialMap& m, const WeightSystem& w, const Cocycle& phi) {
  return lu_det(laplacian_matrix(m, w, phi));
}

}  // namespace kw

#pragma once

#include <array>
#include <vector>

#include "kw/map.hpp"

namespace kw {

// Dual map on the same dart set: rotation around a face center is the face
// traversal e -> rot^-1(rev(e)), reversal is unchanged, and the half-rhombus
// angles complement to pi/2. Primal and dual cone angles swap, so the dual
// lives on the same flat surface.
inline IsoradialMap dual(const IsoradialMap& m) {
  std::vector<int> rot_star(m.n_darts);
  for (int d = 0; d < m.n_darts; ++d) rot_star[d] = m.face_next(d);
  std::vector<AnglePi> theta_star;
  theta_star.reserve(m.n_edges);
  for (int e = 0; e < m.n_edges; ++e) theta_star.push_back(AnglePi::of(1, 2) - m.theta[e]);
  return build_isoradial_map(m.n_darts, m.rev, std::move(rot_star), std::move(theta_star));
}

// Quad graph: the map on V(G) u V(G*) whose faces are the |E| rhombi.
//
// Dart ids: 0..2E-1 are the "vertex side" darts (dart e points from origin(e)
// toward the center of the face left of e), 2E..4E-1 are the "face side"
// darts (2E+x points from the center of face_of(x) toward terminus(x)).
// Each primal dart e factors through an adjacent face center as the two-dart
// path {e, 2E+e}; each dual dart factors through terminus(e) as {2E+e, rev(e)}.
// Concatenating the per-dart paths of a closed walk gives a closed walk in
// the quad graph homotopic to it.
struct QuadGraph {
  IsoradialMap map;
  std::vector<std::array<int, 2>> primal_path;  // per primal dart
  std::vector<std::array<int, 2>> dual_path;    // per dual dart (same ids as primal)
};

inline QuadGraph quad_graph(const IsoradialMap& m) {
  int n = m.n_darts;
  std::vector<int> rev_q(2 * n), rot_q(2 * n);
  for (int e = 0; e < n; ++e) {
    rev_q[e] = n + m.rev[m.rot[e]];
    rot_q[e] = m.rot[e];
  }
  for (int x = 0; x < n; ++x) {
    rev_q[n + x] = m.face_next(x);
    rot_q[n + x] = n + m.face_next(x);
  }

  // Quad edges pair dart e with n+rev(rot(e)), so each quad edge has exactly
  // one vertex-side dart and inherits the wedge's two rhombus half-angles.
  std::vector<AnglePi> theta_q;
  theta_q.reserve(n);
  for (int e = 0; e < n; ++e)
    theta_q.push_back((m.theta_of_dart(e) + m.theta_of_dart(m.rot[e])).half());

  QuadGraph q;
  q.map = build_isoradial_map(2 * n, std::move(rev_q), std::move(rot_q), std::move(theta_q));
  q.primal_path.resize(n);
  q.dual_path.resize(n);
  for (int e = 0; e < n; ++e) {
    q.primal_path[e] = {e, n + e};
    q.dual_path[e] = {n + e, m.rev[e]};
  }
  return q;
}

}  // namespace kw

#pragma once

#include <string>
#include <vector>

#include "kw/dual.hpp"
#include "kw/map.hpp"

namespace kw {

inline constexpr int kMaxDarts = 1 << 20;

enum class LatticeKind { square, triangular, hexagonal };

inline const char* lattice_kind_name(LatticeKind k) {
  switch (k) {
    case LatticeKind::square: return "square";
    case LatticeKind::triangular: return "triangular";
    case LatticeKind::hexagonal: return "hexagonal";
  }
  return "?";
}

// n x m fundamental domain glued into a torus; all cone angles come out 2*pi.
//
// Dart numbering (frozen, referenced by tests and documents):
//   square:     vertex v = i + j*n has darts 4v+k, k = 0..3 = E,N,W,S in
//               counterclockwise rotation order; east(i,j) pairs with
//               west(i+1 mod n, j), north(i,j) with south(i, j+1 mod m);
//               theta = pi/4.
//   triangular: vertex v has darts 6v+k, k = 0..5 in counterclockwise order
//               toward (i+1,j), (i+1,j+1), (i,j+1), (i-1,j), (i-1,j-1),
//               (i,j-1); dart 6v+k pairs with 6u+(k+3 mod 6); theta = pi/6.
//   hexagonal:  the dual of the triangular lattice (same dart ids),
//               theta = pi/3.
inline IsoradialMap gen_torus_lattice(LatticeKind kind, int n, int m) {
  if (n < 1 || m < 1) fail(Errc::parse_error, "lattice sizes must be >= 1");

  if (kind == LatticeKind::square) {
    long long darts = 4LL * n * m;
    if (darts > kMaxDarts) fail(Errc::size_overflow, "lattice exceeds the dart limit");
    int nv = n * m;
    std::vector<int> rev(darts), rot(darts);
    auto vid = [&](int i, int j) { return ((i % n) + n) % n + (((j % m) + m) % m) * n; };
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < n; ++i) {
        int v = vid(i, j);
        for (int k = 0; k < 4; ++k) rot[4 * v + k] = 4 * v + (k + 1) % 4;
        rev[4 * v + 0] = 4 * vid(i + 1, j) + 2;
        rev[4 * v + 2] = 4 * vid(i - 1, j) + 0;
        rev[4 * v + 1] = 4 * vid(i, j + 1) + 3;
        rev[4 * v + 3] = 4 * vid(i, j - 1) + 1;
      }
    }
    std::vector<AnglePi> theta(2 * nv, AnglePi::of(1, 4));
    return build_isoradial_map((int)darts, std::move(rev), std::move(rot), std::move(theta));
  }

  if (kind == LatticeKind::triangular) {
    long long darts = 6LL * n * m;
    if (darts > kMaxDarts) fail(Errc::size_overflow, "lattice exceeds the dart limit");
    int nv = n * m;
    std::vector<int> rev(darts), rot(darts);
    auto vid = [&](int i, int j) { return ((i % n) + n) % n + (((j % m) + m) % m) * n; };
    // neighbor offsets in counterclockwise order
    const int di[6] = {1, 1, 0, -1, -1, 0};
    const int dj[6] = {0, 1, 1, 0, -1, -1};
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < n; ++i) {
        int v = vid(i, j);
        for (int k = 0; k < 6; ++k) {
          rot[6 * v + k] = 6 * v + (k + 1) % 6;
          rev[6 * v + k] = 6 * vid(i + di[k], j + dj[k]) + (k + 3) % 6;
        }
      }
    }
    std::vector<AnglePi> theta(3 * nv, AnglePi::of(1, 6));
    return build_isoradial_map((int)darts, std::move(rev), std::move(rot), std::move(theta));
  }

  return dual(gen_torus_lattice(LatticeKind::triangular, n, m));
}

// One vertex, four loops a,b,c,d with counterclockwise rotation
// a b a~ b~ c d c~ d~ and theta = 3*pi/8 on every edge: the flat genus-2
// surface of the regular octagon, with a single 6*pi vertex singularity.
// Darts: a=0, a~=1, b=2, b~=3, c=4, c~=5, d=6, d~=7.
inline IsoradialMap gen_genus2_bouquet() {
  std::vector<int> rev = {1, 0, 3, 2, 5, 4, 7, 6};
  std::vector<int> cycle = {0, 2, 1, 3, 4, 6, 5, 7};
  std::vector<int> rot(8);
  for (int k = 0; k < 8; ++k) rot[cycle[k]] = cycle[(k + 1) % 8];
  std::vector<AnglePi> theta(4, AnglePi::of(3, 8));
  return build_isoradial_map(8, std::move(rev), std::move(rot), std::move(theta));
}

// Abstract graph with chosen cyclic orders, as explicit half-edge data: slot
// k of `slots[v]` is the k-th half-edge at v in counterclockwise order, and
// equal values across the whole structure pair up into edges (each half-edge
// id appears exactly twice).
struct StarGraphInput {
  std::vector<std::vector<int>> slots;
};

// Isoradial embedding of an arbitrary graph with a constant angle: gluing a
// star of isoceles triangles at each vertex gives primal cone angle
// 2*theta*deg(v). Hypothesis failures are reported by check_hypotheses, not
// here.
inline IsoradialMap star_construction(const StarGraphInput& g, const AnglePi& theta) {
  int n_darts = 0;
  for (const auto& s : g.slots) n_darts += (int)s.size();
  if (n_darts > kMaxDarts) fail(Errc::size_overflow, "graph exceeds the dart limit");

  // dart id = position in the concatenation of the per-vertex slot lists
  std::vector<int> rot(n_darts), rev(n_darts, -1);
  std::vector<int> first_of_half_edge;
  int base = 0;
  std::vector<int> dart_half_edge(n_darts);
  for (const auto& s : g.slots) {
    int deg = (int)s.size();
    for (int k = 0; k < deg; ++k) {
      rot[base + k] = base + (k + 1) % deg;
      dart_half_edge[base + k] = s[k];
    }
    base += deg;
  }
  {
    std::vector<int> seen;
    for (int d = 0; d < n_darts; ++d) {
      int h = dart_half_edge[d];
      if (h < 0) fail(Errc::parse_error, "negative half-edge id");
      if ((int)seen.size() <= h) seen.resize(h + 1, -1);
      if (seen[h] < 0) {
        seen[h] = d;
      } else if (rev[seen[h]] < 0) {
        rev[seen[h]] = d;
        rev[d] = seen[h];
      } else {
        fail(Errc::parse_error, "half-edge id used more than twice");
      }
    }
    for (int d = 0; d < n_darts; ++d)
      if (rev[d] < 0) fail(Errc::parse_error, "unpaired half-edge");
  }

  std::vector<AnglePi> theta_per_edge(n_darts / 2, theta);
  return build_isoradial_map(n_darts, std::move(rev), std::move(rot), std::move(theta_per_edge));
}

}  // namespace kw

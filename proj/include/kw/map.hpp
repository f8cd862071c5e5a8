#pragma once

#include <algorithm>
#include <vector>

#include "kw/angle.hpp"
#include "kw/error.hpp"

namespace kw {

// A closed walk or path, as a sequence of dart ids.
using Walk = std::vector<int>;

// Combinatorial map with exact half-rhombus angles.
//
// Darts are 0..n_darts-1. `rev` (the edge-reversal involution) pairs each
// dart with its opposite orientation; `rot` is the counterclockwise next
// dart with the same origin. Vertices are the orbits of rot, faces the
// orbits of e -> rot^-1(rev(e)). Every angle-derived quantity (cone angles,
// corner angles, turning) is kept exact as a rational multiple of pi.
struct IsoradialMap {
  int n_darts = 0;
  std::vector<int> rev;   // J
  std::vector<int> rot;   // R
  std::vector<int> rot_inv;

  // unoriented edges, indexed in increasing order of their minimal dart id
  int n_edges = 0;
  std::vector<int> edge_of_dart;
  std::vector<int> edge_rep;       // minimal dart of each edge
  std::vector<AnglePi> theta;      // per edge, strictly inside (0, pi/2)

  // derived cell structure
  std::vector<int> vertex_of_dart, face_of_dart;
  std::vector<std::vector<int>> vertices;  // rot orbits, in cycle order
  std::vector<std::vector<int>> faces;     // rot^-1(rev(.)) orbits, in cycle order
  std::vector<AnglePi> vertex_angle;       // cone angle at each vertex
  std::vector<AnglePi> face_angle;         // cone angle at each face center
  int genus = 0;

  int n_vertices() const { return (int)vertices.size(); }
  int n_faces() const { return (int)faces.size(); }
  int euler_characteristic() const { return n_vertices() - n_edges + n_faces(); }

  int origin(int dart) const { return vertex_of_dart[dart]; }
  int terminus(int dart) const { return vertex_of_dart[rev[dart]]; }
  int face_next(int dart) const { return rot_inv[rev[dart]]; }
  const AnglePi& theta_of_dart(int dart) const { return theta[edge_of_dart[dart]]; }
};

namespace detail {

inline std::vector<std::vector<int>> permutation_orbits(const std::vector<int>& perm) {
  std::vector<std::vector<int>> orbits;
  std::vector<char> seen(perm.size(), 0);
  for (int start = 0; start < (int)perm.size(); ++start) {
    if (seen[start]) continue;
    std::vector<int> orbit;
    int x = start;
    do {
      seen[x] = 1;
      orbit.push_back(x);
      x = perm[x];
    } while (x != start);
    orbits.push_back(std::move(orbit));
  }
  return orbits;
}

}  // namespace detail

// Validates the dart data and derives the full cell structure. Throws rather
// than ever returning an inconsistent map.
inline IsoradialMap build_isoradial_map(int n_darts, std::vector<int> reversal,
                                        std::vector<int> rotation,
                                        std::vector<AnglePi> theta_per_edge) {
  if (n_darts <= 0 || n_darts % 2 != 0)
    fail(Errc::parse_error, "dart count must be a positive even integer");
  if ((int)reversal.size() != n_darts || (int)rotation.size() != n_darts)
    fail(Errc::parse_error, "reversal/rotation array length mismatch");

  for (int d = 0; d < n_darts; ++d) {
    if (reversal[d] < 0 || reversal[d] >= n_darts)
      fail(Errc::not_an_involution, "reversal image out of range");
    if (rotation[d] < 0 || rotation[d] >= n_darts)
      fail(Errc::not_a_permutation, "rotation image out of range");
  }
  for (int d = 0; d < n_darts; ++d) {
    if (reversal[d] == d)
      fail(Errc::not_an_involution, "reversal fixes dart " + std::to_string(d));
    if (reversal[reversal[d]] != d)
      fail(Errc::not_an_involution, "reversal is not an involution at dart " + std::to_string(d));
  }
  {
    std::vector<char> hit(n_darts, 0);
    for (int d = 0; d < n_darts; ++d) {
      if (hit[rotation[d]])
        fail(Errc::not_a_permutation, "rotation is not injective");
      hit[rotation[d]] = 1;
    }
  }

  IsoradialMap m;
  m.n_darts = n_darts;
  m.rev = std::move(reversal);
  m.rot = std::move(rotation);
  m.rot_inv.assign(n_darts, 0);
  for (int d = 0; d < n_darts; ++d) m.rot_inv[m.rot[d]] = d;

  // edges = reversal orbits, ordered by minimal dart
  m.edge_of_dart.assign(n_darts, -1);
  for (int d = 0; d < n_darts; ++d) {
    if (m.edge_of_dart[d] >= 0) continue;
    int id = m.n_edges++;
    m.edge_of_dart[d] = id;
    m.edge_of_dart[m.rev[d]] = id;
    m.edge_rep.push_back(d);
  }
  if ((int)theta_per_edge.size() != m.n_edges)
    fail(Errc::parse_error, "theta array must have one entry per unoriented edge");
  for (const AnglePi& t : theta_per_edge) {
    if (!(AnglePi::zero() < t && t < AnglePi::of(1, 2)))
      fail(Errc::theta_out_of_range, "theta must lie strictly between 0 and pi/2, got " + t.str());
  }
  m.theta = std::move(theta_per_edge);

  // connectivity over the moves {rot, rev}
  {
    std::vector<char> seen(n_darts, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int d = stack.back();
      stack.pop_back();
      for (int nb : {m.rot[d], m.rev[d]}) {
        if (!seen[nb]) {
          seen[nb] = 1;
          ++count;
          stack.push_back(nb);
        }
      }
    }
    if (count != n_darts)
      fail(Errc::disconnected_graph, "map is not connected");
  }

  m.vertices = detail::permutation_orbits(m.rot);
  std::vector<int> face_perm(n_darts);
  for (int d = 0; d < n_darts; ++d) face_perm[d] = m.rot_inv[m.rev[d]];
  m.faces = detail::permutation_orbits(face_perm);

  m.vertex_of_dart.assign(n_darts, -1);
  for (int v = 0; v < (int)m.vertices.size(); ++v)
    for (int d : m.vertices[v]) m.vertex_of_dart[d] = v;
  m.face_of_dart.assign(n_darts, -1);
  for (int f = 0; f < (int)m.faces.size(); ++f)
    for (int d : m.faces[f]) m.face_of_dart[d] = f;

  int chi = m.euler_characteristic();
  if (chi > 2 || (2 - chi) % 2 != 0)
    fail(Errc::non_orientable_or_inconsistent,
         "Euler characteristic " + std::to_string(chi) + " does not give an integer genus");
  m.genus = (2 - chi) / 2;

  // cone angles: 2*theta per dart at a vertex, pi - 2*theta per dart on a face
  m.vertex_angle.assign(m.vertices.size(), AnglePi::zero());
  for (int v = 0; v < (int)m.vertices.size(); ++v)
    for (int d : m.vertices[v]) m.vertex_angle[v] += 2 * m.theta_of_dart(d);
  m.face_angle.assign(m.faces.size(), AnglePi::zero());
  for (int f = 0; f < (int)m.faces.size(); ++f)
    for (int d : m.faces[f]) m.face_angle[f] += AnglePi::pi() - 2 * m.theta_of_dart(d);

  return m;
}

struct Topology {
  int n_vertices, n_edges, n_faces;
  int euler_characteristic;
  int genus;
  std::vector<AnglePi> primal_cone_angles;
  std::vector<AnglePi> dual_cone_angles;
};

inline Topology topology(const IsoradialMap& m) {
  return Topology{m.n_vertices(), m.n_edges,        m.n_faces(),
                  m.euler_characteristic(), m.genus, m.vertex_angle, m.face_angle};
}

enum class HypothesisMode { all_odd, primal_odd };

struct HypothesisViolationEntry {
  bool is_face;
  int index;
  AnglePi cone_angle;
};

struct HypothesisReport {
  HypothesisMode mode;
  bool pass;
  std::vector<HypothesisViolationEntry> violators;
};

// Exact test of the "cone angle is an odd multiple of 2*pi" condition, at
// primal vertices only or at vertices and face centers both.
inline HypothesisReport check_hypotheses(const IsoradialMap& m, HypothesisMode mode) {
  HypothesisReport rep;
  rep.mode = mode;
  rep.pass = true;
  for (int v = 0; v < m.n_vertices(); ++v) {
    if (!m.vertex_angle[v].is_odd_multiple_of_two_pi()) {
      rep.pass = false;
      rep.violators.push_back({false, v, m.vertex_angle[v]});
    }
  }
  if (mode == HypothesisMode::all_odd) {
    for (int f = 0; f < m.n_faces(); ++f) {
      if (!m.face_angle[f].is_odd_multiple_of_two_pi()) {
        rep.pass = false;
        rep.violators.push_back({true, f, m.face_angle[f]});
      }
    }
  }
  return rep;
}

// Corner angle beta(e_next, rev(e)): the counterclockwise angle at the common
// vertex from the ray e_next to the ray rev(e), accumulated over rotation
// steps. Exact, and strictly inside (0, cone angle).
inline AnglePi corner_beta(const IsoradialMap& m, int e, int e_next) {
  if (m.terminus(e) != m.origin(e_next))
    fail(Errc::backtrack_transition, "darts are not consecutive");
  int target = m.rev[e];
  if (e_next == target)
    fail(Errc::backtrack_transition, "backtracking transition");
  AnglePi beta = AnglePi::zero();
  int cur = e_next;
  do {
    beta += m.theta_of_dart(cur) + m.theta_of_dart(m.rot[cur]);
    cur = m.rot[cur];
  } while (cur != target);
  return beta;
}

// Total turning of a closed non-backtracking walk: sum of pi - beta over the
// corners, exact.
inline AnglePi turning_alpha(const IsoradialMap& m, const Walk& walk) {
  if (walk.empty()) fail(Errc::backtrack_transition, "empty walk");
  AnglePi alpha = AnglePi::zero();
  for (size_t i = 0; i < walk.size(); ++i) {
    int e = walk[i];
    int e_next = walk[(i + 1) % walk.size()];
    alpha += AnglePi::pi() - corner_beta(m, e, e_next);
  }
  return alpha;
}

inline bool is_closed_non_backtracking(const IsoradialMap& m, const Walk& walk) {
  if (walk.empty()) return false;
  for (size_t i = 0; i < walk.size(); ++i) {
    int e = walk[i];
    int e_next = walk[(i + 1) % walk.size()];
    if (m.terminus(e) != m.origin(e_next) || e_next == m.rev[e]) return false;
  }
  return true;
}

}  // namespace kw

#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "kw/linalg.hpp"
#include "kw/map.hpp"

namespace kw {

// Unit-phase assignment on darts with conjugate reversal symmetry and
// trivial face products; represents a class in H^1(Sigma; S^1). Phases are
// carried exactly (as rational multiples of pi) whenever the construction
// allows, with the double-precision values kept in sync.
struct Cocycle {
  std::vector<cdbl> phase;      // per dart
  bool exact = false;
  std::vector<AnglePi> arg;     // per dart, meaningful when exact

  cdbl at(int dart) const { return phase[dart]; }
};

inline Cocycle trivial_cocycle(const IsoradialMap& m) {
  Cocycle c;
  c.phase.assign(m.n_darts, cdbl(1.0, 0.0));
  c.exact = true;
  c.arg.assign(m.n_darts, AnglePi::zero());
  return c;
}

inline void sync_exact_phases(Cocycle& c) {
  for (size_t d = 0; d < c.arg.size(); ++d) c.phase[d] = c.arg[d].phase();
}

inline cdbl holonomy(const Cocycle& c, const Walk& walk) {
  cdbl h = 1.0;
  for (int d : walk) h *= c.phase[d];
  return h;
}

inline AnglePi exact_holonomy(const Cocycle& c, const Walk& walk) {
  AnglePi h = AnglePi::zero();
  for (int d : walk) h += c.arg[d];
  return h;
}

// Pointwise product; exactness survives only if both factors are exact.
inline Cocycle multiply(const Cocycle& a, const Cocycle& b) {
  Cocycle c;
  c.phase.resize(a.phase.size());
  for (size_t d = 0; d < a.phase.size(); ++d) c.phase[d] = a.phase[d] * b.phase[d];
  if (a.exact && b.exact) {
    c.exact = true;
    c.arg.resize(a.arg.size());
    for (size_t d = 0; d < a.arg.size(); ++d) c.arg[d] = (a.arg[d] + b.arg[d]).mod_two_pi();
    sync_exact_phases(c);
  }
  return c;
}

// Cocycle induced by unit vertex labels u: dart e gets u(t(e)) * conj(u(o(e))).
// Cohomologically trivial; multiplying by it changes no determinant.
inline Cocycle coboundary(const IsoradialMap& m, const std::vector<cdbl>& vertex_phase) {
  Cocycle c;
  c.phase.resize(m.n_darts);
  for (int d = 0; d < m.n_darts; ++d)
    c.phase[d] = vertex_phase[m.terminus(d)] * std::conj(vertex_phase[m.origin(d)]);
  return c;
}

// Largest face-product deviation |prod - 1| and reversal-symmetry deviation.
// Exact cocycles are judged in exact angle arithmetic: a defect of 0 means
// the invariants hold identically.
inline double cocycle_defect(const IsoradialMap& m, const Cocycle& c) {
  if (c.exact) {
    for (const auto& f : m.faces) {
      AnglePi sum = AnglePi::zero();
      for (int d : f) sum += c.arg[d];
      if (!sum.is_zero_mod_two_pi()) return 2.0;
    }
    for (int d = 0; d < m.n_darts; ++d)
      if (!(c.arg[d] + c.arg[m.rev[d]]).is_zero_mod_two_pi()) return 2.0;
    return 0.0;
  }
  double worst = 0.0;
  for (const auto& f : m.faces) {
    cdbl p = 1.0;
    for (int d : f) p *= c.phase[d];
    worst = std::max(worst, std::abs(p - cdbl(1.0, 0.0)));
  }
  for (int d = 0; d < m.n_darts; ++d)
    worst = std::max(worst, std::abs(c.phase[d] - std::conj(c.phase[m.rev[d]])));
  return worst;
}

// ---------------------------------------------------------------------------
// Spanning structures

// Primal spanning tree, dual spanning tree, and the 2g leftover edges whose
// fundamental cycles form a homology basis of the surface.
struct TreeCotree {
  enum : char { tree = 0, cotree = 1, chord = 2 };
  std::vector<char> edge_class;       // per edge
  std::vector<int> chord_darts;       // minimal dart of each of the 2g chords
  std::vector<Walk> basis;            // fundamental cycle per chord (simple)
  std::vector<int> face_order;        // dual-tree BFS order, root first
  std::vector<int> face_parent_dart;  // dart inside the face crossing to its parent; -1 at root
};

namespace detail {

// Deterministic BFS tree on vertices; parent_dart[v] is the tree dart whose
// terminus is v (pointing away from the root).
inline void primal_tree(const IsoradialMap& m, std::vector<int>& parent_dart,
                        std::vector<char>& edge_in_tree) {
  parent_dart.assign(m.n_vertices(), -1);
  edge_in_tree.assign(m.n_edges, 0);
  std::vector<char> seen(m.n_vertices(), 0);
  std::vector<int> queue{m.vertex_of_dart.empty() ? 0 : m.vertex_of_dart[0]};
  seen[queue[0]] = 1;
  for (size_t head = 0; head < queue.size(); ++head) {
    int v = queue[head];
    for (int d = 0; d < m.n_darts; ++d) {
      if (m.origin(d) != v) continue;
      int w = m.terminus(d);
      if (!seen[w]) {
        seen[w] = 1;
        parent_dart[w] = d;
        edge_in_tree[m.edge_of_dart[d]] = 1;
        queue.push_back(w);
      }
    }
  }
}

// Dart path from vertex a to vertex b through the tree (via their root paths).
inline Walk tree_path(const IsoradialMap& m, const std::vector<int>& parent_dart, int a, int b) {
  auto root_path = [&](int v) {
    Walk up;  // darts from v toward the root
    while (parent_dart[v] >= 0) {
      up.push_back(m.rev[parent_dart[v]]);
      v = m.origin(parent_dart[v]);
    }
    return up;
  };
  Walk ua = root_path(a), ub = root_path(b);
  // strip the common tail (shared ancestry)
  while (!ua.empty() && !ub.empty() && ua.back() == ub.back()) {
    ua.pop_back();
    ub.pop_back();
  }
  Walk path = ua;  // a -> meeting point
  for (auto it = ub.rbegin(); it != ub.rend(); ++it) path.push_back(m.rev[*it]);
  return path;
}

}  // namespace detail

inline TreeCotree tree_cotree(const IsoradialMap& m) {
  TreeCotree tc;
  std::vector<int> vparent;
  std::vector<char> in_tree;
  detail::primal_tree(m, vparent, in_tree);

  tc.edge_class.assign(m.n_edges, TreeCotree::chord);
  for (int e = 0; e < m.n_edges; ++e)
    if (in_tree[e]) tc.edge_class[e] = TreeCotree::tree;

  // dual BFS over faces along non-tree edges
  tc.face_parent_dart.assign(m.n_faces(), -1);
  std::vector<char> face_seen(m.n_faces(), 0);
  tc.face_order.push_back(m.face_of_dart[0]);
  face_seen[tc.face_order[0]] = 1;
  for (size_t head = 0; head < tc.face_order.size(); ++head) {
    int f = tc.face_order[head];
    for (int d : m.faces[f]) {
      int e = m.edge_of_dart[d];
      if (tc.edge_class[e] != TreeCotree::chord) continue;
      int g = m.face_of_dart[m.rev[d]];
      if (!face_seen[g]) {
        face_seen[g] = 1;
        tc.edge_class[e] = TreeCotree::cotree;
        tc.face_parent_dart[g] = m.rev[d];  // dart in g crossing back to f
        tc.face_order.push_back(g);
      }
    }
  }
  if ((int)tc.face_order.size() != m.n_faces())
    fail(Errc::internal_error, "dual BFS did not reach every face");

  for (int e = 0; e < m.n_edges; ++e) {
    if (tc.edge_class[e] != TreeCotree::chord) continue;
    int c = m.edge_rep[e];
    tc.chord_darts.push_back(c);
    Walk cycle{c};
    Walk back = detail::tree_path(m, vparent, m.terminus(c), m.origin(c));
    cycle.insert(cycle.end(), back.begin(), back.end());
    tc.basis.push_back(std::move(cycle));
  }
  if ((int)tc.chord_darts.size() != 2 * m.genus)
    fail(Errc::internal_error, "tree-cotree chord count is not 2g");
  return tc;
}

// All |E|-|V|+1 fundamental cycles of the graph (ignoring the embedding),
// each a simple closed walk through exactly one non-tree edge.
struct GraphCycleBasis {
  std::vector<int> tree_darts;    // one per non-root vertex
  std::vector<int> chord_darts;   // minimal dart per non-tree edge
  std::vector<Walk> cycles;
};

inline GraphCycleBasis fundamental_cycles(const IsoradialMap& m) {
  GraphCycleBasis out;
  std::vector<int> vparent;
  std::vector<char> in_tree;
  detail::primal_tree(m, vparent, in_tree);
  for (int v = 0; v < m.n_vertices(); ++v)
    if (vparent[v] >= 0) out.tree_darts.push_back(vparent[v]);
  for (int e = 0; e < m.n_edges; ++e) {
    if (in_tree[e]) continue;
    int c = m.edge_rep[e];
    out.chord_darts.push_back(c);
    Walk cycle{c};
    Walk back = detail::tree_path(m, vparent, m.terminus(c), m.origin(c));
    cycle.insert(cycle.end(), back.begin(), back.end());
    out.cycles.push_back(std::move(cycle));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Characters and their cocycle representatives

// A character of the surface: one unit value per cycle of the canonical
// homology basis (the 2g tree-cotree chord cycles, in chord order).
struct Character {
  std::vector<Walk> basis;
  std::vector<cdbl> values;
  std::optional<std::vector<AnglePi>> exact_args;  // when every value is exp(i * q * pi)
};

namespace detail {

// Shared gauge construction: phase 1 on spanning-tree darts, the prescribed
// value on each chord, and the cotree-edge phases solved face by face along
// the dual tree (children before parents, each face fixing its parent edge).
template <typename Phase, typename Ops>
void solve_gauge(const IsoradialMap& m, const TreeCotree& tc,
                 const std::vector<Phase>& chord_values, std::vector<Phase>& dart_phase,
                 const Ops& ops) {
  std::vector<char> known(m.n_darts, 0);
  auto set_pair = [&](int dart, const Phase& p) {
    dart_phase[dart] = p;
    dart_phase[m.rev[dart]] = ops.conj(p);
    known[dart] = known[m.rev[dart]] = 1;
  };
  for (int d = 0; d < m.n_darts; ++d) {
    if (tc.edge_class[m.edge_of_dart[d]] == TreeCotree::tree && !known[d])
      set_pair(d, ops.one());
  }
  for (size_t i = 0; i < tc.chord_darts.size(); ++i) set_pair(tc.chord_darts[i], chord_values[i]);

  for (size_t i = tc.face_order.size(); i-- > 0;) {
    int f = tc.face_order[i];
    int unknown = tc.face_parent_dart[f];
    if (unknown < 0) continue;  // root face: all determined, checked by caller
    Phase rest = ops.one();
    for (int d : m.faces[f]) {
      if (d == unknown) continue;
      if (!known[d]) fail(Errc::internal_error, "gauge solve visited an unsolved dart");
      rest = ops.mul(rest, dart_phase[d]);
    }
    set_pair(unknown, ops.conj(rest));
  }
}

struct ComplexOps {
  cdbl one() const { return {1.0, 0.0}; }
  cdbl mul(cdbl a, cdbl b) const { return a * b; }
  cdbl conj(cdbl a) const { return std::conj(a); }
};

struct ExactOps {
  AnglePi one() const { return AnglePi::zero(); }
  AnglePi mul(const AnglePi& a, const AnglePi& b) const { return (a + b).mod_two_pi(); }
  AnglePi conj(const AnglePi& a) const { return (-a).mod_two_pi(); }
};

}  // namespace detail

// Builds a cocycle whose holonomy along each canonical basis cycle equals the
// prescribed unit value and whose face products are all 1.
inline Cocycle character_to_cocycle(const IsoradialMap& m, const Character& chi,
                                    const TreeCotree& tc) {
  if (chi.values.size() != tc.chord_darts.size())
    fail(Errc::parse_error, "character must provide one value per basis cycle");

  Cocycle c;
  c.phase.assign(m.n_darts, cdbl(1.0, 0.0));
  if (chi.exact_args) {
    c.exact = true;
    c.arg.assign(m.n_darts, AnglePi::zero());
    detail::solve_gauge(m, tc, *chi.exact_args, c.arg, detail::ExactOps{});
    sync_exact_phases(c);
    int root = tc.face_order.empty() ? 0 : tc.face_order[0];
    AnglePi prod = AnglePi::zero();
    for (int d : m.faces[root]) prod += c.arg[d];
    if (!prod.is_zero_mod_two_pi())
      fail(Errc::inconsistent_system, "root face product is not 1");
  } else {
    detail::solve_gauge(m, tc, chi.values, c.phase, detail::ComplexOps{});
    int root = tc.face_order.empty() ? 0 : tc.face_order[0];
    cdbl prod = 1.0;
    for (int d : m.faces[root]) prod *= c.phase[d];
    if (std::abs(prod - cdbl(1.0, 0.0)) > 1e-9)
      fail(Errc::inconsistent_system, "root face product deviates from 1");
  }
  return c;
}

inline Cocycle character_to_cocycle(const IsoradialMap& m, const Character& chi) {
  return character_to_cocycle(m, chi, tree_cotree(m));
}

// Canonical basis character with the given unit values.
inline Character make_character(const TreeCotree& tc, std::vector<cdbl> values) {
  Character chi;
  chi.basis = tc.basis;
  chi.values = std::move(values);
  return chi;
}

inline Character make_exact_character(const TreeCotree& tc, std::vector<AnglePi> args) {
  Character chi;
  chi.basis = tc.basis;
  chi.exact_args = std::move(args);
  for (const AnglePi& a : *chi.exact_args) chi.values.push_back(a.phase());
  return chi;
}

// A complete set of coset representatives of H^1(Sigma; Z_2): the 2^(2g)
// {+1,-1}-valued cocycles given by all sign patterns on the canonical basis.
// Ordered by subset bitmask (bit i = chord i carries -1).
inline std::vector<Cocycle> h1_mod2_reps(const IsoradialMap& m, const TreeCotree& tc) {
  int g2 = (int)tc.chord_darts.size();
  std::vector<Cocycle> reps;
  reps.reserve(1u << g2);
  for (unsigned mask = 0; mask < (1u << g2); ++mask) {
    std::vector<AnglePi> args(g2, AnglePi::zero());
    for (int i = 0; i < g2; ++i)
      if (mask & (1u << i)) args[i] = AnglePi::pi();
    reps.push_back(character_to_cocycle(m, make_exact_character(tc, std::move(args)), tc));
  }
  return reps;
}

inline std::vector<Cocycle> h1_mod2_reps(const IsoradialMap& m) {
  return h1_mod2_reps(m, tree_cotree(m));
}

}  // namespace kw

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "kw/cocycle.hpp"
#include "kw/map.hpp"

// Exponential-time ground truths, written directly against the map structure
// (own spanning tree, own component analysis) so they stay independent of the
// determinant fast paths they are used to validate.

namespace kw {

inline constexpr int kOracleCycleDimLimit = 24;
inline constexpr int kOracleSpinLimit = 24;
inline constexpr int kOracleEdgeLimit = 24;

// Z(G, x) = sum over even subgraphs of the product of member edge weights,
// by enumerating the cycle space from an independently built spanning tree.
inline cdbl even_subgraph_z(const IsoradialMap& m, const WeightSystem& w) {
  if (m.n_edges > 63) fail(Errc::too_large, "edge count exceeds the oracle bitmask");
  // DFS spanning tree over vertices
  std::vector<int> parent_dart(m.n_vertices(), -1);
  std::vector<char> seen(m.n_vertices(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int d = 0; d < m.n_darts; ++d) {
      if (m.origin(d) != v || seen[m.terminus(d)]) continue;
      seen[m.terminus(d)] = 1;
      parent_dart[m.terminus(d)] = d;
      stack.push_back(m.terminus(d));
    }
  }
  // edge mask of the tree path to the root, per vertex
  std::vector<uint64_t> to_root(m.n_vertices(), 0);
  {
    // vertices were discovered root-first, so walk any remaining chains
    for (int v = 0; v < m.n_vertices(); ++v) {
      uint64_t mask = 0;
      int u = v;
      while (parent_dart[u] >= 0) {
        mask ^= 1ull << m.edge_of_dart[parent_dart[u]];
        u = m.origin(parent_dart[u]);
      }
      to_root[v] = mask;
    }
  }
  std::vector<uint64_t> generators;
  for (int e = 0; e < m.n_edges; ++e) {
    int d = m.edge_rep[e];
    bool in_tree = false;
    for (int v = 0; v < m.n_vertices(); ++v)
      if (parent_dart[v] >= 0 && m.edge_of_dart[parent_dart[v]] == e) in_tree = true;
    if (in_tree) continue;
    generators.push_back((1ull << e) ^ to_root[m.origin(d)] ^ to_root[m.terminus(d)]);
  }
  if ((int)generators.size() > kOracleCycleDimLimit)
    fail(Errc::too_large, "cycle space dimension exceeds the oracle limit");

  cdbl total = 0.0;
  for (uint64_t sub = 0; sub < (1ull << generators.size()); ++sub) {
    uint64_t edges = 0;
    for (size_t i = 0; i < generators.size(); ++i)
      if (sub >> i & 1) edges ^= generators[i];
    cdbl prod = 1.0;
    for (int e = 0; e < m.n_edges; ++e)
      if (edges >> e & 1) prod *= w.x[e];
    total += prod;
  }
  return total;
}

inline long long even_subgraph_count(const IsoradialMap& m) {
  return 1ll << (m.n_edges - m.n_vertices() + 1);
}

// Direct spin-configuration sum: Z^J = sum over sigma of exp(sum J_e s_u s_v).
// A loop contributes exp(J_e) to every configuration.
inline double spin_config_z(const IsoradialMap& m, const std::vector<double>& J) {
  if (m.n_vertices() > kOracleSpinLimit) fail(Errc::too_large, "too many vertices");
  if ((int)J.size() != m.n_edges) fail(Errc::parse_error, "one coupling per edge required");
  double total = 0.0;
  for (uint64_t sigma = 0; sigma < (1ull << m.n_vertices()); ++sigma) {
    double energy = 0.0;
    for (int e = 0; e < m.n_edges; ++e) {
      int d = m.edge_rep[e];
      int su = (sigma >> m.origin(d) & 1) ? 1 : -1;
      int sv = (sigma >> m.terminus(d) & 1) ? 1 : -1;
      energy += J[e] * su * sv;
    }
    total += std::exp(energy);
  }
  return total;
}

// Boundary of a tubular neighborhood of the spanning subgraph selected by
// `mask` (a bit per edge): the orbits of e -> R_F^-1(rev(e)) on the darts of
// F, with R_F the rotation restricted to F's darts. The orbits partition the
// darts of F.
inline std::vector<Walk> boundary_components(const IsoradialMap& m, uint64_t mask) {
  auto in_mask = [&](int dart) { return (mask >> m.edge_of_dart[dart] & 1) != 0; };
  auto rot_restricted_inv = [&](int dart) {
    int cur = m.rot_inv[dart];
    while (!in_mask(cur)) cur = m.rot_inv[cur];
    return cur;
  };
  std::vector<Walk> orbits;
  std::vector<char> seen(m.n_darts, 0);
  for (int d = 0; d < m.n_darts; ++d) {
    if (!in_mask(d) || seen[d]) continue;
    Walk orbit;
    int cur = d;
    do {
      seen[cur] = 1;
      orbit.push_back(cur);
      cur = rot_restricted_inv(m.rev[cur]);
    } while (cur != d);
    orbits.push_back(std::move(orbit));
  }
  return orbits;
}

namespace oracle_detail {

struct MaskComponents {
  bool spans_all_vertices;
  bool has_tree_component;
  bool all_unicyclic;
  std::vector<std::vector<int>> component_edges;  // edge ids per component
};

inline MaskComponents analyze_mask(const IsoradialMap& m, uint64_t mask) {
  MaskComponents out{true, false, true, {}};
  std::vector<int> comp_of_vertex(m.n_vertices(), -1);
  std::vector<char> edge_used(m.n_edges, 0);
  for (int v0 = 0; v0 < m.n_vertices(); ++v0) {
    if (comp_of_vertex[v0] >= 0) continue;
    // grow the component of v0 inside the mask
    std::vector<int> verts{v0};
    comp_of_vertex[v0] = v0;
    std::vector<int> edges;
    for (size_t head = 0; head < verts.size(); ++head) {
      int v = verts[head];
      for (int d = 0; d < m.n_darts; ++d) {
        if (m.origin(d) != v) continue;
        int e = m.edge_of_dart[d];
        if (!(mask >> e & 1)) continue;
        if (!edge_used[e]) {
          edge_used[e] = 1;
          edges.push_back(e);
        }
        int u = m.terminus(d);
        if (comp_of_vertex[u] < 0) {
          comp_of_vertex[u] = v0;
          verts.push_back(u);
        }
      }
    }
    if (edges.empty()) {
      // isolated vertex: a (trivial) tree, and the mask fails to span it
      out.spans_all_vertices = false;
      out.has_tree_component = true;
      out.all_unicyclic = false;
      continue;
    }
    if ((int)edges.size() == (int)verts.size() - 1) out.has_tree_component = true;
    if ((int)edges.size() != (int)verts.size()) out.all_unicyclic = false;
    out.component_edges.push_back(std::move(edges));
  }
  return out;
}

// The unique cycle of a unicyclic component, as a dart walk with a fixed
// orientation: peel leaves, then follow the 2-core.
inline Walk component_cycle(const IsoradialMap& m, const std::vector<int>& edges) {
  std::vector<char> alive(m.n_edges, 0);
  std::vector<int> degree(m.n_vertices(), 0);
  for (int e : edges) {
    alive[e] = 1;
    int d = m.edge_rep[e];
    degree[m.origin(d)] += 1;
    degree[m.terminus(d)] += 1;
  }
  bool peeled = true;
  while (peeled) {
    peeled = false;
    for (int e : edges) {
      if (!alive[e]) continue;
      int d = m.edge_rep[e];
      int a = m.origin(d), b = m.terminus(d);
      if (a != b && (degree[a] == 1 || degree[b] == 1)) {
        alive[e] = 0;
        degree[a] -= 1;
        degree[b] -= 1;
        peeled = true;
      }
    }
  }
  // The survivors form the cycle; every vertex on it has remaining degree 2,
  // so following "not the reversal of how we arrived" traces it out.
  int start = -1;
  for (int e : edges)
    if (alive[e]) {
      start = m.edge_rep[e];
      break;
    }
  if (start < 0) fail(Errc::internal_error, "unicyclic component without a cycle");
  Walk cycle;
  int cur = start;
  do {
    cycle.push_back(cur);
    int v = m.terminus(cur);
    int next = -1;
    for (int cand = 0; cand < m.n_darts; ++cand) {
      if (m.origin(cand) != v || cand == m.rev[cur]) continue;
      if (!alive[m.edge_of_dart[cand]]) continue;
      next = cand;
      break;
    }
    if (next < 0) fail(Errc::internal_error, "cycle walk got stuck");
    cur = next;
  } while (cur != start);
  return cycle;
}

}  // namespace oracle_detail

// Combinatorial expansion of the critical Kac-Ward determinant: the sum over
// spanning subgraphs without tree components of
// prod over boundary components (1 - phi(gamma)) * prod mu_e, times the
// explicit constant. Needs primal cone angles that are odd multiples of 2*pi.
inline cdbl tau_combinatorial(const IsoradialMap& m, const Cocycle& phi) {
  for (int v = 0; v < m.n_vertices(); ++v)
    if (!m.vertex_angle[v].is_odd_multiple_of_two_pi())
      fail(Errc::hypothesis_violation, "a vertex cone angle is not an odd multiple of 2*pi");
  if (m.n_edges > kOracleEdgeLimit) fail(Errc::too_large, "too many edges");

  std::vector<cdbl> mu;
  for (const AnglePi& t : m.theta) mu.emplace_back(0.0, std::tan(t.radians()));

  cdbl sum = 0.0;
  for (uint64_t mask = 1; mask < (1ull << m.n_edges); ++mask) {
    auto comps = oracle_detail::analyze_mask(m, mask);
    if (!comps.spans_all_vertices || comps.has_tree_component) continue;
    cdbl term = 1.0;
    for (int e = 0; e < m.n_edges; ++e)
      if (mask >> e & 1) term *= mu[e];
    for (const Walk& orbit : boundary_components(m, mask)) {
      cdbl hol = 1.0;
      for (int d : orbit) hol *= phi.at(d);
      term *= cdbl(1.0, 0.0) - hol;
    }
    sum += term;
  }

  cdbl constant = (m.n_vertices() % 2 == 0) ? 1.0 : -1.0;
  constant *= std::pow(2.0, -(double)(m.n_vertices() - m.n_edges));
  for (int v = 0; v < m.n_vertices(); ++v)
    constant *= (m.vertex_angle[v].half().half()).phase();
  for (const AnglePi& t : m.theta) {
    double c = std::cos(t.radians());
    constant *= c / (1.0 + c);
  }
  return constant * sum;
}

// Forman's expansion: det Delta^phi = sum over spanning subgraphs whose
// components are all unicyclic of prod_T (2 - phi(T) - phi(T)^-1) * x(F).
inline cdbl forman_det(const IsoradialMap& m, const WeightSystem& w, const Cocycle& phi) {
  if (m.n_edges > kOracleEdgeLimit) fail(Errc::too_large, "too many edges");
  cdbl sum = 0.0;
  for (uint64_t mask = 1; mask < (1ull << m.n_edges); ++mask) {
    auto comps = oracle_detail::analyze_mask(m, mask);
    if (!comps.spans_all_vertices || !comps.all_unicyclic) continue;
    cdbl term = 1.0;
    for (int e = 0; e < m.n_edges; ++e)
      if (mask >> e & 1) term *= w.x[e];
    for (const auto& comp : comps.component_edges) {
      Walk cycle = oracle_detail::component_cycle(m, comp);
      cdbl hol = 1.0;
      for (int d : cycle) hol *= phi.at(d);
      term *= cdbl(2.0, 0.0) - hol - cdbl(1.0, 0.0) / hol;
    }
    sum += term;
  }
  return sum;
}

}  // namespace kw

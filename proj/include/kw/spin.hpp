#pragma once

#include <vector>

#include "kw/cocycle.hpp"
#include "kw/map.hpp"

namespace kw {

// Discrete canonical bundle: the exact-phase cocycle kappa with
// kappa(gamma) = exp(-i * alpha(gamma)) on every canonical basis cycle and
// trivial face products. Requires every cone angle (primal and dual) to be a
// multiple of 2*pi, which makes exp(i*alpha) depend on homology classes only.
inline Cocycle canonical_bundle(const IsoradialMap& m, const TreeCotree& tc) {
  for (int v = 0; v < m.n_vertices(); ++v)
    if (!m.vertex_angle[v].is_multiple_of_two_pi())
      fail(Errc::hypothesis_violation,
           "vertex cone angle " + m.vertex_angle[v].str() + " is not a multiple of 2*pi");
  for (int f = 0; f < m.n_faces(); ++f)
    if (!m.face_angle[f].is_multiple_of_two_pi())
      fail(Errc::hypothesis_violation,
           "face cone angle " + m.face_angle[f].str() + " is not a multiple of 2*pi");

  std::vector<AnglePi> args;
  args.reserve(tc.basis.size());
  for (const Walk& cycle : tc.basis) args.push_back((-turning_alpha(m, cycle)).mod_two_pi());
  return character_to_cocycle(m, make_exact_character(tc, std::move(args)), tc);
}

inline Cocycle canonical_bundle(const IsoradialMap& m) {
  return canonical_bundle(m, tree_cotree(m));
}

// A cocycle lambda with lambda^2 = kappa, plus its cached Arf bit.
struct SpinStructure {
  Cocycle lambda;
  int arf = 0;
  long long gauss_sum = 0;
};

// The exact sign lambda(gamma) * exp(i*alpha(gamma)/2): the parity of the
// tangent winding of the walk with respect to the spin structure.
inline int winding_sign(const IsoradialMap& m, const Cocycle& lambda, const Walk& walk) {
  if (!lambda.exact)
    fail(Errc::not_plus_minus_one, "winding sign requires exact phases");
  AnglePi s = exact_holonomy(lambda, walk) + turning_alpha(m, walk).half();
  if (s.is_zero_mod_two_pi()) return +1;
  if (s.is_pi_mod_two_pi()) return -1;
  fail(Errc::not_plus_minus_one,
       "lambda(gamma)*exp(i*alpha/2) = exp(i*" + s.mod_two_pi().str() + ") is not a sign");
}

// Mod-2 intersection matrix of a basis of simple closed walks, computed by
// the local crossing rule at shared vertices with each first cycle pushed to
// its left side. Diagonal is 0 by the quadratic-form convention; the matrix
// must be nondegenerate over GF(2).
inline std::vector<std::vector<int>> intersection_form_mod2(const IsoradialMap& m,
                                                            const std::vector<Walk>& basis) {
  int k = (int)basis.size();

  // position of each dart in its vertex rotation cycle
  std::vector<int> pos(m.n_darts, 0), deg_at(m.n_darts, 0);
  for (const auto& orbit : m.vertices)
    for (int i = 0; i < (int)orbit.size(); ++i) {
      pos[orbit[i]] = i;
      deg_at[orbit[i]] = (int)orbit.size();
    }

  // transits of a walk through each vertex: (entry ray, exit ray)
  struct Transit {
    int in_ray, out_ray;
  };
  auto transits = [&](const Walk& w) {
    std::vector<std::pair<int, Transit>> out;  // (vertex, rays)
    for (size_t i = 0; i < w.size(); ++i) {
      int e = w[i];
      int e_next = w[(i + 1) % w.size()];
      out.push_back({m.origin(e_next), Transit{m.rev[e], e_next}});
    }
    return out;
  };

  std::vector<std::vector<int>> form(k, std::vector<int>(k, 0));
  for (int a = 0; a < k; ++a) {
    auto ta = transits(basis[a]);
    for (int b = 0; b < k; ++b) {
      if (a == b) continue;
      auto tb = transits(basis[b]);
      int crossings = 0;
      for (const auto& [va, ra] : ta) {
        for (const auto& [vb, rb] : tb) {
          if (va != vb) continue;
          int d = deg_at[ra.in_ray];
          // Doubled circle. The copy of the first walk pushed to its left
          // enters just clockwise of its entry ray and exits just
          // counterclockwise of its exit ray; the odd slots keep the pushed
          // endpoints clear of the second walk's rays.
          int p1 = (2 * pos[ra.in_ray] - 1 + 2 * d) % (2 * d);
          int p2 = (2 * pos[ra.out_ray] + 1) % (2 * d);
          int q1 = 2 * pos[rb.in_ray];
          int q2 = 2 * pos[rb.out_ray];
          auto in_arc = [&](int q) {
            // q strictly inside the ccw arc p1 -> p2 on a circle of 2d slots
            int len = ((p2 - p1) % (2 * d) + 2 * d) % (2 * d);
            int off = ((q - p1) % (2 * d) + 2 * d) % (2 * d);
            return off > 0 && off < len;
          };
          if (in_arc(q1) != in_arc(q2)) ++crossings;
        }
      }
      form[a][b] = crossings % 2;
    }
  }

  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      if (form[a][b] != form[b][a])
        fail(Errc::degenerate_form, "intersection pairing is not symmetric");

  // rank over GF(2)
  std::vector<unsigned long long> rows(k, 0);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      if (form[a][b]) rows[a] |= 1ull << b;
  int rank = 0;
  for (int col = 0; col < k; ++col) {
    int piv = -1;
    for (int r = rank; r < k; ++r)
      if (rows[r] >> col & 1) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[rank], rows[piv]);
    for (int r = 0; r < k; ++r)
      if (r != rank && (rows[r] >> col & 1)) rows[r] ^= rows[rank];
    ++rank;
  }
  if (rank != k) fail(Errc::degenerate_form, "intersection form is degenerate over GF(2)");
  return form;
}

// Arf invariant of the quadratic form q attached to lambda: q on a basis
// class is the winding sign exponent + 1, extended by
// q(x+y) = q(x)+q(y)+x.y, and the Gauss sum over all 2^(2g) classes must be
// +-2^g. Arf = 0 exactly for the + sign.
inline int arf_invariant(const IsoradialMap& m, const Cocycle& lambda, const TreeCotree& tc,
                         const std::vector<std::vector<int>>& form, long long* gauss_out = nullptr) {
  int k = (int)tc.basis.size();
  std::vector<int> q(k);
  for (int i = 0; i < k; ++i) {
    int w = winding_sign(m, lambda, tc.basis[i]) > 0 ? 0 : 1;
    q[i] = (w + 1) % 2;
  }
  long long gauss = 0;
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    int val = 0;
    for (int i = 0; i < k; ++i) {
      if (!(mask >> i & 1)) continue;
      val ^= q[i] & 1;
      for (int j = i + 1; j < k; ++j)
        if (mask >> j & 1) val ^= form[i][j] & 1;
    }
    gauss += val ? -1 : +1;
  }
  long long expect = 1ll << (k / 2);
  if (gauss != expect && gauss != -expect)
    fail(Errc::gauss_sum_not_pm_2g,
         "Gauss sum " + std::to_string(gauss) + " is not +-2^g");
  if (gauss_out) *gauss_out = gauss;
  return gauss == expect ? 0 : 1;
}

inline int arf_invariant(const IsoradialMap& m, const Cocycle& lambda) {
  TreeCotree tc = tree_cotree(m);
  auto form = intersection_form_mod2(m, tc.basis);
  return arf_invariant(m, lambda, tc, form);
}

// All 2^(2g) discrete spin structures: a base square root of the canonical
// bundle (half phases, with a GF(2) sign fixup restoring trivial face
// products) multiplied by every mod-2 representative. Requires all cone
// angles to be odd multiples of 2*pi.
inline std::vector<SpinStructure> spin_structures(const IsoradialMap& m, const TreeCotree& tc) {
  if (!check_hypotheses(m, HypothesisMode::all_odd).pass)
    fail(Errc::hypothesis_violation, "a cone angle is not an odd multiple of 2*pi");

  Cocycle kappa = canonical_bundle(m, tc);

  // base square root on edge representatives
  Cocycle base;
  base.exact = true;
  base.arg.assign(m.n_darts, AnglePi::zero());
  base.phase.assign(m.n_darts, cdbl(1.0, 0.0));
  for (int e = 0; e < m.n_edges; ++e) {
    int d = m.edge_rep[e];
    AnglePi half = kappa.arg[d].half();
    base.arg[d] = half.mod_two_pi();
    base.arg[m.rev[d]] = (-half).mod_two_pi();
  }

  // face products of the base are +-1; flip signs on cotree edges along the
  // dual tree until every face product is +1
  auto face_parity = [&](int f) {
    AnglePi s = AnglePi::zero();
    for (int d : m.faces[f]) s += base.arg[d];
    if (s.is_zero_mod_two_pi()) return 0;
    if (s.is_pi_mod_two_pi()) return 1;
    fail(Errc::unsolvable_signs, "face product of the half-phase cocycle is not a sign");
  };

  auto flip_edge = [&](int dart) {
    int d = m.edge_rep[m.edge_of_dart[dart]];
    base.arg[d] = (base.arg[d] + AnglePi::pi()).mod_two_pi();
    base.arg[m.rev[d]] = (base.arg[m.rev[d]] + AnglePi::pi()).mod_two_pi();
  };
  for (size_t i = tc.face_order.size(); i-- > 0;) {
    int f = tc.face_order[i];
    int parent = tc.face_parent_dart[f];
    if (parent < 0) continue;
    if (face_parity(f)) {
      flip_edge(parent);
      // the flip also toggles the parity of the parent face, handled when
      // that face is processed
    }
  }
  {
    int root = tc.face_order.empty() ? 0 : tc.face_order[0];
    if (face_parity(root) != 0)
      fail(Errc::unsolvable_signs, "sign fixup left the root face inconsistent");
  }
  sync_exact_phases(base);

  auto form = intersection_form_mod2(m, tc.basis);
  std::vector<Cocycle> reps = h1_mod2_reps(m, tc);
  std::vector<SpinStructure> out;
  out.reserve(reps.size());
  for (const Cocycle& rep : reps) {
    SpinStructure s;
    s.lambda = multiply(base, rep);
    s.arf = arf_invariant(m, s.lambda, tc, form, &s.gauss_sum);
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<SpinStructure> spin_structures(const IsoradialMap& m) {
  return spin_structures(m, tree_cotree(m));
}

}  // namespace kw

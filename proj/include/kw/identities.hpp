#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "kw/builders.hpp"
#include "kw/dual.hpp"
#include "kw/kacward.hpp"
#include "kw/laplacian.hpp"
#include "kw/map.hpp"

namespace kw {

// Two-sided identity evaluation with the relative residual
// |lhs - rhs| / max(|lhs|, |rhs|, floor).
struct VerificationReport {
  cdbl lhs = 0.0;
  cdbl rhs = 0.0;
  double residual = 0.0;
  // Hadamard bound of the determinants involved: the absolute scale against
  // which identically-vanishing sides are judged.
  double scale = 1.0;
  bool hypotheses_ok = true;
  std::string inputs;

  // Passes when the two sides agree relatively, or both vanish at the
  // determinant's round-off scale.
  bool within(double tol) const {
    if (residual <= tol) return true;
    return std::max(std::abs(lhs), std::abs(rhs)) <= tol * scale;
  }
};

inline double relative_residual(cdbl lhs, cdbl rhs) {
  double floor = 1e-30;
  return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), floor});
}

inline VerificationReport make_report(cdbl lhs, cdbl rhs, const std::string& inputs,
                                      double scale = 1.0) {
  VerificationReport rep;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.residual = relative_residual(lhs, rhs);
  rep.scale = scale;
  rep.inputs = inputs;
  return rep;
}

// A surface character specified on the quad graph, realized on both G and G*
// through the per-edge two-dart paths, so exactly the same cohomology class
// enters both sides of the duality.
struct TransportedCharacter {
  Cocycle on_primal;
  Cocycle on_dual;
};

inline TransportedCharacter transport_character(const IsoradialMap& m, const QuadGraph& quad,
                                                const Cocycle& phi_quad) {
  TransportedCharacter out;
  out.on_primal.phase.resize(m.n_darts);
  out.on_dual.phase.resize(m.n_darts);
  for (int e = 0; e < m.n_darts; ++e) {
    out.on_primal.phase[e] =
        phi_quad.at(quad.primal_path[e][0]) * phi_quad.at(quad.primal_path[e][1]);
    out.on_dual.phase[e] = phi_quad.at(quad.dual_path[e][0]) * phi_quad.at(quad.dual_path[e][1]);
  }
  return out;
}

// Kramers-Wannier side factor 2^|V| * prod_e (1 + cos theta_e).
inline double duality_prefactor(const IsoradialMap& m) {
  double p = std::pow(2.0, m.n_vertices());
  for (const AnglePi& t : m.theta) p *= 1.0 + std::cos(t.radians());
  return p;
}

// Generalized Kramers-Wannier duality at criticality: the weighted Kac-Ward
// determinants of G and G* agree for every surface character, provided all
// cone angles are odd multiples of 2*pi.
inline VerificationReport duality_check(const IsoradialMap& m, const QuadGraph& quad,
                                        const Cocycle& phi_quad) {
  if (!check_hypotheses(m, HypothesisMode::all_odd).pass)
    fail(Errc::hypothesis_violation, "a cone angle is not an odd multiple of 2*pi");
  IsoradialMap star = dual(m);
  TransportedCharacter phi = transport_character(m, quad, phi_quad);
  CMat primal_kw = kw_matrix(m, WeightSystem::critical_nu(m), phi.on_primal);
  CMat dual_kw = kw_matrix(star, WeightSystem::critical_nu(star), phi.on_dual);
  cdbl rhs = duality_prefactor(m) * lu_det(primal_kw);
  cdbl lhs = duality_prefactor(star) * lu_det(dual_kw);
  double scale = std::max(duality_prefactor(m) * hadamard_bound(primal_kw),
                          duality_prefactor(star) * hadamard_bound(dual_kw));
  return make_report(lhs, rhs, "duality", scale);
}

// Count of vertices whose cone angle is 2*pi*k with k = 3 mod 4.
inline int count_three_mod_four(const IsoradialMap& m) {
  int n = 0;
  for (const AnglePi& a : m.vertex_angle) {
    long long k = a.two_pi_multiplier();
    if (((k % 4) + 4) % 4 == 3) ++n;
  }
  return n;
}

// Genus <= 1 identity between the critical Kac-Ward determinant and the
// critical Laplacian determinant.
inline VerificationReport delta_identity_check(const IsoradialMap& m, const Cocycle& phi) {
  if (m.genus > 1) fail(Errc::genus_too_high, "identity holds only for genus 0 and 1");
  for (int v = 0; v < m.n_vertices(); ++v)
    if (!m.vertex_angle[v].is_odd_multiple_of_two_pi())
      fail(Errc::hypothesis_violation, "a vertex cone angle is not an odd multiple of 2*pi");
  CMat kwm = kw_matrix(m, WeightSystem::critical_nu(m), phi);
  cdbl lhs = lu_det(kwm);
  double pref = (count_three_mod_four(m) % 2 ? -1.0 : 1.0) *
                std::pow(2.0, -(double)(m.n_vertices() - m.n_edges));
  for (const AnglePi& t : m.theta) {
    double c = std::cos(t.radians());
    pref *= c / (1.0 + c);
  }
  CMat lap = laplacian_matrix(m, WeightSystem::critical_c(m), phi);
  cdbl rhs = pref * lu_det(lap);
  double scale = std::max(hadamard_bound(kwm), std::abs(pref) * hadamard_bound(lap));
  return make_report(lhs, rhs, "delta-identity", scale);
}

// Negative side of the same theorem in genus >= 2: the ratio tau/det Delta
// moves with the character. Characters with |det Delta| below the threshold
// are skipped and counted.
struct NonProportionalityProbe {
  std::vector<cdbl> ratios;
  double spread = 0.0;  // max |ratio| / min |ratio|
  int skipped_near_zero = 0;
};

inline NonProportionalityProbe nonproportionality_probe(const IsoradialMap& m,
                                                        const std::vector<Cocycle>& characters,
                                                        double near_zero = 1e-12) {
  if (m.genus < 2) fail(Errc::genus_too_low, "probe requires genus >= 2");
  NonProportionalityProbe probe;
  WeightSystem nu = WeightSystem::critical_nu(m);
  WeightSystem c = WeightSystem::critical_c(m);
  double lo = 0.0, hi = 0.0;
  for (const Cocycle& phi : characters) {
    cdbl den = det_laplacian(m, c, phi);
    if (std::abs(den) < near_zero) {
      probe.skipped_near_zero += 1;
      continue;
    }
    cdbl ratio = tau(m, nu, phi) / den;
    probe.ratios.push_back(ratio);
    double mag = std::abs(ratio);
    if (probe.ratios.size() == 1) {
      lo = hi = mag;
    } else {
      lo = std::min(lo, mag);
      hi = std::max(hi, mag);
    }
  }
  probe.spread = lo > 0 ? hi / lo : 0.0;
  return probe;
}

// sinh(2 J(theta)) sinh(2 J(pi/2 - theta)) = 1 with the geometric coupling
// J(theta) = log((1 + sin theta)/cos theta) / 2.
inline VerificationReport kw_coupling_check(double theta_radians) {
  double j = critical_coupling(theta_radians);
  double j_star = critical_coupling(M_PI / 2 - theta_radians);
  cdbl lhs = std::sinh(2 * j) * std::sinh(2 * j_star);
  return make_report(lhs, cdbl(1.0, 0.0), "coupling");
}

// Finite-size free-energy comparison on torus lattices: the partition
// function per fundamental domain against the critical-Laplacian
// determinant with a fixed nontrivial spin structure.
struct FreeEnergyRow {
  int n = 0;
  double f = 0.0;                        // -(1/n^2) log Z^J(G_n)
  std::vector<double> laplacian_side;    // one entry per requested spin structure
  double delta_residual = 0.0;           // worst Thm-3 residual over the used structures
};

inline std::vector<FreeEnergyRow> free_energy_table(LatticeKind kind, int n_max,
                                                    bool all_nontrivial = false) {
  if (n_max < 1 || n_max > 12) fail(Errc::size_overflow, "free-energy table limited to n <= 12");
  std::vector<FreeEnergyRow> rows;
  for (int n = 1; n <= n_max; ++n) {
    IsoradialMap g = gen_torus_lattice(kind, n, n);
    double cells = double(n) * n;
    std::vector<double> J = critical_couplings(g);
    VdwConversion vdw = vdw_convert(g, J);
    double z = partition_function_kw(g, vdw.nu);

    FreeEnergyRow row;
    row.n = n;
    row.f = -(vdw.log_prefactor + std::log(z)) / cells;

    TreeCotree tc = tree_cotree(g);
    auto spins = spin_structures(g, tc);
    int v_per_cell = g.n_vertices() / (n * n);
    WeightSystem c = WeightSystem::critical_c(g);
    // the trivial class contributes nothing to Z; compare against the
    // nontrivial structures (all three when requested)
    std::vector<int> nontrivial;
    for (size_t i = 0; i < spins.size(); ++i) {
      bool is_trivial = true;
      for (const Walk& cycle : tc.basis) {
        cdbl h = holonomy(spins[i].lambda, cycle);
        if (std::abs(h - cdbl(1.0, 0.0)) > 1e-9) is_trivial = false;
      }
      if (!is_trivial) nontrivial.push_back((int)i);
    }
    if (nontrivial.empty()) fail(Errc::internal_error, "no nontrivial spin structure found");
    if (!all_nontrivial) nontrivial.resize(1);

    for (int idx : nontrivial) {
      cdbl det = det_laplacian(g, c, spins[idx].lambda);
      row.laplacian_side.push_back(-v_per_cell * std::log(2.0) / 2.0 -
                                   std::log(std::abs(det)) / (2.0 * cells));
      VerificationReport rep = delta_identity_check(g, spins[idx].lambda);
      row.delta_residual = std::max(row.delta_residual, rep.residual);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace kw

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "kw/linalg.hpp"
#include "kw/map.hpp"
#include "kw/spin.hpp"

namespace kw {

// One complex (usually real) weight per unoriented edge.
struct WeightSystem {
  std::vector<cdbl> x;

  static WeightSystem zero(const IsoradialMap& m) {
    return WeightSystem{std::vector<cdbl>(m.n_edges, cdbl(0.0, 0.0))};
  }
  // nu_e = tan(theta_e / 2): the critical Ising weights
  static WeightSystem critical_nu(const IsoradialMap& m) {
    WeightSystem w;
    for (const AnglePi& t : m.theta) w.x.push_back(std::tan(t.radians() / 2));
    return w;
  }
  // c_e = tan(theta_e): the critical Laplacian weights
  static WeightSystem critical_c(const IsoradialMap& m) {
    WeightSystem w;
    for (const AnglePi& t : m.theta) w.x.push_back(std::tan(t.radians()));
    return w;
  }
  // mu_e = i * tan(theta_e)
  static WeightSystem critical_mu(const IsoradialMap& m) {
    WeightSystem w;
    for (const AnglePi& t : m.theta) w.x.push_back(cdbl(0.0, std::tan(t.radians())));
    return w;
  }
  static WeightSystem coupling_J(std::vector<double> J) {
    WeightSystem w;
    for (double j : J) w.x.emplace_back(j, 0.0);
    return w;
  }

  bool is_real(double tol = 0.0) const {
    for (cdbl v : x)
      if (std::abs(v.imag()) > tol) return false;
    return true;
  }
};

// The twisted transition matrix T: entry (e, e') is
// phi(e) * i * exp(-i/2 * beta(e', rev e)) * x_e whenever terminus(e) =
// origin(e') and e' is not the reversal of e.
inline CMat transition_matrix(const IsoradialMap& m, const WeightSystem& w, const Cocycle& phi) {
  int n = m.n_darts;
  CMat t(n);
  for (int e = 0; e < n; ++e) {
    cdbl coeff = phi.at(e) * cdbl(0.0, 1.0) * w.x[m.edge_of_dart[e]];
    if (coeff == cdbl(0.0, 0.0)) continue;
    // successors: darts at terminus(e) other than the reversal, visited in
    // clockwise order so beta(cur, rev e) grows one wedge at a time
    int target = m.rev[e];
    int cur = m.rot_inv[target];
    AnglePi beta = m.theta_of_dart(cur) + m.theta_of_dart(target);
    while (cur != target) {
      double half = beta.radians() / 2;
      t.at(e, cur) += coeff * cdbl(std::cos(half), -std::sin(half));
      int prev = m.rot_inv[cur];
      beta += m.theta_of_dart(prev) + m.theta_of_dart(cur);
      cur = prev;
    }
  }
  return t;
}

// The twisted Kac-Ward matrix I - T.
inline CMat kw_matrix(const IsoradialMap& m, const WeightSystem& w, const Cocycle& phi) {
  CMat a = transition_matrix(m, w, phi);
  for (size_t i = 0; i < a.a.size(); ++i) a.a[i] = -a.a[i];
  for (int d = 0; d < m.n_darts; ++d) a.at(d, d) += 1.0;
  return a;
}

// tau^phi(G, x) = det(I - T^phi)
inline cdbl tau(const IsoradialMap& m, const WeightSystem& w, const Cocycle& phi) {
  return lu_det(kw_matrix(m, w, phi));
}

// Fast path for critical weights: tau = 2^(-chi(G)) * prod_e cos^2(theta_e) /
// (1 + cos(theta_e)) * det(I + J phi mu - R(mu + 1)) with mu_e = i tan(theta_e)
// and chi(G) = |V| - |E|.
inline cdbl tau_via_m(const IsoradialMap& m, const Cocycle& phi) {
  int n = m.n_darts;
  CMat mat(n);
  for (int e = 0; e < n; ++e) {
    cdbl mu(0.0, std::tan(m.theta_of_dart(e).radians()));
    mat.at(e, e) += 1.0;
    mat.at(e, m.rev[e]) += phi.at(e) * mu;
    mat.at(e, m.rot[e]) -= 1.0 + mu;
  }
  double pref = std::pow(2.0, -(double)(m.n_vertices() - m.n_edges));
  for (int e = 0; e < m.n_edges; ++e) {
    double c = std::cos(m.theta[e].radians());
    pref *= c * c / (1.0 + c);
  }
  return pref * lu_det(mat);
}

inline constexpr int kMaxSqrtEdges = 128;

// The square root of tau with constant coefficient +1, evaluated at the given
// weights: interpolate q(t) = det(I - t*T) from samples at the (2|E|+1)-th
// roots of unity, take the formal power-series square root through degree
// |E|, and sum the coefficients. Requires a spin structure and real weights.
inline double tau_sqrt(const IsoradialMap& m, const WeightSystem& w, const Cocycle& lambda) {
  if (!w.is_real(0.0)) fail(Errc::not_a_square, "square-root path requires real weights");
  if (m.n_edges > kMaxSqrtEdges)
    fail(Errc::size_overflow, "square-root path limited to " + std::to_string(kMaxSqrtEdges) +
                                  " edges");
  int n = m.n_darts;
  int samples = n + 1;  // 2|E| + 1

  CMat t = transition_matrix(m, w, lambda);
  hessenberg_inplace(t);

  std::vector<cdbl> q(samples);
  for (int j = 0; j < samples; ++j) {
    double ang = 2.0 * M_PI * j / samples;
    q[j] = det_i_minus_t_hessenberg(t, cdbl(std::cos(ang), std::sin(ang)));
  }

  // inverse DFT: q has degree <= 2|E| = samples - 1, so this is exact
  // interpolation
  std::vector<cdbl> coeff(samples);
  double scale_max = 0.0;
  for (int k = 0; k < samples; ++k) {
    cdbl acc = 0.0;
    for (int j = 0; j < samples; ++j) {
      double ang = -2.0 * M_PI * j * k / samples;
      acc += q[j] * cdbl(std::cos(ang), std::sin(ang));
    }
    coeff[k] = acc / (double)samples;
    scale_max = std::max(scale_max, std::abs(coeff[k]));
  }

  // formal square root with p(0) = +1
  int deg = m.n_edges;
  std::vector<cdbl> p(deg + 1, cdbl(0.0, 0.0));
  p[0] = 1.0;
  for (int k = 1; k <= deg; ++k) {
    cdbl acc = coeff[k];
    for (int j = 1; j < k; ++j) acc -= p[j] * p[k - j];
    p[k] = acc / 2.0;
  }

  // residual of p^2 against the interpolated polynomial
  double resid = std::abs(coeff[0] - cdbl(1.0, 0.0));
  for (int k = 1; k < samples; ++k) {
    cdbl conv = 0.0;
    for (int j = std::max(0, k - deg); j <= std::min(k, deg); ++j) conv += p[j] * p[k - j];
    resid = std::max(resid, std::abs(conv - coeff[k]));
  }
  if (resid > 1e-6 * std::max(1.0, scale_max))
    fail(Errc::not_a_square,
         "tau is not the square of a polynomial (residual " + std::to_string(resid) + ")");

  cdbl value = 0.0;
  for (const cdbl& c : p) value += c;
  if (std::abs(value.imag()) > 1e-6 * std::max(1.0, std::abs(value)))
    fail(Errc::not_a_square, "square root came out non-real");
  return value.real();
}

// Theorem-level partition function: the Arf-weighted sum of the square roots
// over all 2^(2g) spin structures. Requires all cone angles to be odd
// multiples of 2*pi and real weights.
inline double partition_function_kw(const IsoradialMap& m, const WeightSystem& w) {
  if (!check_hypotheses(m, HypothesisMode::all_odd).pass)
    fail(Errc::hypothesis_violation, "a cone angle is not an odd multiple of 2*pi");
  if (!w.is_real(0.0))
    fail(Errc::hypothesis_violation, "partition function requires real weights");
  TreeCotree tc = tree_cotree(m);
  double z = 0.0;
  for (const SpinStructure& s : spin_structures(m, tc)) {
    double root = tau_sqrt(m, w, s.lambda);
    z += (s.arf ? -1.0 : 1.0) * root;
  }
  return z / std::pow(2.0, m.genus);
}

// High-temperature change of variables: Z^J = prefactor * Z(G, tanh J).
struct VdwConversion {
  double prefactor;      // 2^|V| * prod cosh(J_e)
  double log_prefactor;  // |V| log 2 + sum log cosh(J_e)
  WeightSystem nu;       // tanh(J_e)
};

inline VdwConversion vdw_convert(const IsoradialMap& m, const std::vector<double>& J) {
  if ((int)J.size() != m.n_edges) fail(Errc::parse_error, "one coupling per edge required");
  VdwConversion out;
  out.log_prefactor = m.n_vertices() * std::log(2.0);
  out.prefactor = std::pow(2.0, m.n_vertices());
  for (double j : J) {
    out.prefactor *= std::cosh(j);
    out.log_prefactor += std::log(std::cosh(j));
    out.nu.x.emplace_back(std::tanh(j), 0.0);
  }
  return out;
}

// Critical coupling of the geometric angle: J(theta) = log((1+sin)/cos) / 2.
inline double critical_coupling(double theta_radians) {
  return 0.5 * std::log((1.0 + std::sin(theta_radians)) / std::cos(theta_radians));
}

inline std::vector<double> critical_couplings(const IsoradialMap& m) {
  std::vector<double> J;
  for (const AnglePi& t : m.theta) J.push_back(critical_coupling(t.radians()));
  return J;
}

}  // namespace kw

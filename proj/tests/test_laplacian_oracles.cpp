#include <catch2/catch_amalgamated.hpp>
#include <algorithm>
#include <complex>

#include "kw/builders.hpp"
#include "kw/laplacian.hpp"
#include "kw/oracles.hpp"
#include "kw/rng.hpp"

using namespace kw;

namespace {

double rel(cdbl a, cdbl b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-30}); }

// one vertex, one loop, embedded in the sphere
IsoradialMap loop_map() {
  StarGraphInput g;
  g.slots = {{0, 0}};
  return star_construction(g, AnglePi::of(1, 4));
}

std::vector<Cocycle> random_characters(const IsoradialMap& m, const TreeCotree& tc, int count,
                                       uint64_t seed) {
  Rng rng(seed);
  std::vector<Cocycle> out;
  for (int i = 0; i < count; ++i)
    out.push_back(
        character_to_cocycle(m, make_character(tc, rng.unit_vector((int)tc.chord_darts.size())), tc));
  return out;
}

}  // namespace

TEST_CASE("laplacian entries") {
  SECTION("single loop: 1x1 matrix x(2 - z - conj z)") {
    IsoradialMap m = loop_map();
    // the loop is the sole generator only on the torus; on the sphere the
    // trivial character is forced, so install phases by hand
    Cocycle phi = trivial_cocycle(m);
    cdbl z = AnglePi::of(2, 5).phase();
    phi.exact = false;
    phi.phase[0] = z;
    phi.phase[1] = std::conj(z);
    WeightSystem w{{cdbl(0.75, 0.0)}};
    CMat lap = laplacian_matrix(m, w, phi);
    REQUIRE(lap.n == 1);
    CHECK(std::abs(lap.at(0, 0) - 0.75 * (cdbl(2, 0) - z - std::conj(z))) < 1e-15);
    CHECK(rel(det_laplacian(m, w, phi), forman_det(m, w, phi)) < 1e-13);
  }
  SECTION("trivial character: zero row sums and vanishing determinant") {
    IsoradialMap m = gen_torus_lattice(LatticeKind::triangular, 2, 2);
    WeightSystem c = WeightSystem::critical_c(m);
    CMat lap = laplacian_matrix(m, c, trivial_cocycle(m));
    for (int i = 0; i < lap.n; ++i) {
      cdbl row = 0.0;
      for (int j = 0; j < lap.n; ++j) row += lap.at(i, j);
      CHECK(std::abs(row) < 1e-12);
    }
    CHECK(std::abs(lu_det(lap)) <= 1e-9 * hadamard_bound(lap));
  }
  SECTION("1x1 torus: 4 - 2 Re z1 - 2 Re z2") {
    IsoradialMap m = gen_torus_lattice(LatticeKind::square, 1, 1);
    TreeCotree tc = tree_cotree(m);
    WeightSystem c = WeightSystem::critical_c(m);
    auto signs = [&](double s1, double s2) {
      return character_to_cocycle(m, make_character(tc, {cdbl(s1, 0), cdbl(s2, 0)}), tc);
    };
    CHECK(rel(det_laplacian(m, c, signs(-1, -1)), 8.0) < 1e-14);
    CHECK(rel(det_laplacian(m, c, signs(-1, +1)), 4.0) < 1e-14);
    Rng rng(5);
    cdbl z1 = rng.unit(), z2 = rng.unit();
    Cocycle phi = character_to_cocycle(m, make_character(tc, {z1, z2}), tc);
    CHECK(rel(det_laplacian(m, c, phi), 4.0 - 2 * z1.real() - 2 * z2.real()) < 1e-13);
  }
}

TEST_CASE("laplacian positivity and coboundary invariance") {
  IsoradialMap m = gen_torus_lattice(LatticeKind::square, 2, 2);
  TreeCotree tc = tree_cotree(m);
  WeightSystem c = WeightSystem::critical_c(m);
  for (const Cocycle& phi : random_characters(m, tc, 4, 21)) {
    // positive semidefinite smoke test: det(Delta + eps I) > 0
    for (double eps : {1e-3, 1e-1, 1.0}) {
      CMat lap = laplacian_matrix(m, c, phi);
      for (int i = 0; i < lap.n; ++i) lap.at(i, i) += eps;
      CHECK(lu_det(lap).real() > 0.0);
    }
    Rng rng(37);
    Cocycle shifted = multiply(phi, coboundary(m, rng.unit_vector(m.n_vertices())));
    CHECK(rel(det_laplacian(m, c, phi), det_laplacian(m, c, shifted)) < 1e-10);
  }
}

TEST_CASE("even subgraph oracle") {
  SECTION("1x1 torus: four even subgraphs, Z = 2") {
    IsoradialMap m = gen_torus_lattice(LatticeKind::square, 1, 1);
    CHECK(even_subgraph_count(m) == 4);
    cdbl z = even_subgraph_z(m, WeightSystem::critical_nu(m));
    double nu = std::tan(M_PI / 8);
    CHECK(rel(z, (1 + nu) * (1 + nu)) < 1e-14);
    CHECK(z.real() == Catch::Approx(2.0).epsilon(1e-13));
  }
  SECTION("bouquet: all 16 subsets are even") {
    IsoradialMap b = gen_genus2_bouquet();
    CHECK(even_subgraph_count(b) == 16);
    double nu = std::tan(3 * M_PI / 16);
    CHECK(rel(even_subgraph_z(b, WeightSystem::critical_nu(b)), std::pow(1 + nu, 4)) < 1e-13);
  }
  SECTION("2x2 torus: 32 even subgraphs") {
    CHECK(even_subgraph_count(gen_torus_lattice(LatticeKind::square, 2, 2)) == 32);
  }
  SECTION("size guard") {
    CHECK_THROWS_MATCHES(
        even_subgraph_z(gen_torus_lattice(LatticeKind::square, 5, 5),
                        WeightSystem::critical_nu(gen_torus_lattice(LatticeKind::square, 5, 5))),
        Error, Catch::Matchers::Predicate<Error>(
                   [](const Error& e) { return e.code() == Errc::too_large; }));
  }
}

TEST_CASE("spin configuration oracle") {
  SECTION("1x1 torus: loops force 2 exp(Jh + Jv)") {
    IsoradialMap m = gen_torus_lattice(LatticeKind::square, 1, 1);
    double z = spin_config_z(m, {0.3, 1.1});
    CHECK(z == Catch::Approx(2.0 * std::exp(1.4)).epsilon(1e-13));
  }
  SECTION("van der Waerden identity across the corpus") {
    for (const IsoradialMap& m : {gen_torus_lattice(LatticeKind::square, 2, 2),
                                  gen_torus_lattice(LatticeKind::hexagonal, 2, 2),
                                  gen_genus2_bouquet(), loop_map()}) {
      Rng rng(2024);
      std::vector<double> J;
      for (int e = 0; e < m.n_edges; ++e) J.push_back(0.2 + rng.uniform());
      VdwConversion vdw = vdw_convert(m, J);
      double direct = spin_config_z(m, J);
      double viaEven = vdw.prefactor * even_subgraph_z(m, vdw.nu).real();
      CHECK(rel(direct, viaEven) < 1e-10);
    }
  }
}

TEST_CASE("boundary components") {
  IsoradialMap m = gen_torus_lattice(LatticeKind::square, 1, 1);

  SECTION("full mask reproduces the faces") {
    auto orbits = boundary_components(m, (1ull << m.n_edges) - 1);
    REQUIRE(orbits.size() == m.faces.size());
    CHECK(orbits[0].size() == m.faces[0].size());
  }
  SECTION("single loop: an annulus with two boundary circles") {
    auto orbits = boundary_components(m, 1ull);  // edge 0 = the h loop
    CHECK(orbits.size() == 2);
    for (const Walk& orbit : orbits) CHECK(orbit.size() == 1);
  }
  SECTION("orbit sizes partition the darts of the mask") {
    IsoradialMap t = gen_torus_lattice(LatticeKind::triangular, 2, 2);
    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
      uint64_t mask = rng.next() & ((1ull << t.n_edges) - 1);
      if (mask == 0) continue;
      size_t darts = 0;
      for (const Walk& orbit : boundary_components(t, mask)) darts += orbit.size();
      size_t expect = 0;
      for (int e = 0; e < t.n_edges; ++e)
        if (mask >> e & 1) expect += 2;
      CHECK(darts == expect);
    }
  }
  SECTION("a tree component always contributes a trivial-holonomy orbit") {
    IsoradialMap s = gen_torus_lattice(LatticeKind::square, 2, 2);
    TreeCotree tc = tree_cotree(s);
    uint64_t mask = 1ull << s.edge_of_dart[0];  // one non-loop edge
    auto orbits = boundary_components(s, mask);
    REQUIRE(orbits.size() == 1);
    CHECK(orbits[0].size() == 2);
    for (const Cocycle& phi : random_characters(s, tc, 3, 99)) {
      cdbl hol = 1.0;
      for (int d : orbits[0]) hol *= phi.at(d);
      CHECK(std::abs(hol - cdbl(1, 0)) < 1e-12);
    }
  }
}

TEST_CASE("combinatorial expansion equals the Kac-Ward determinant") {
  SECTION("trivial character gives exactly zero") {
    IsoradialMap m = gen_torus_lattice(LatticeKind::square, 2, 2);
    CHECK(std::abs(tau_combinatorial(m, trivial_cocycle(m))) == 0.0);
  }
  SECTION("1x1 torus, all sign characters") {
    IsoradialMap m = gen_torus_lattice(LatticeKind::square, 1, 1);
    TreeCotree tc = tree_cotree(m);
    WeightSystem nu = WeightSystem::critical_nu(m);
    for (const Cocycle& phi : h1_mod2_reps(m, tc)) {
      cdbl a = tau(m, nu, phi);
      cdbl b = tau_combinatorial(m, phi);
      CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
    }
  }
  SECTION("random characters on the small corpus") {
    for (const IsoradialMap& m : {gen_torus_lattice(LatticeKind::square, 2, 2),
                                  gen_torus_lattice(LatticeKind::square, 1, 2),
                                  gen_genus2_bouquet()}) {
      TreeCotree tc = tree_cotree(m);
      WeightSystem nu = WeightSystem::critical_nu(m);
      for (const Cocycle& phi : random_characters(m, tc, 20, 314)) {
        CHECK(rel(tau(m, nu, phi), tau_combinatorial(m, phi)) < 1e-9);
      }
    }
  }
  SECTION("hypothesis and size guards") {
    StarGraphInput k3;
    k3.slots = {{0, 2}, {1, 0}, {2, 1}};
    IsoradialMap bad = star_construction(k3, AnglePi::of(1, 3));
    CHECK_THROWS_MATCHES(tau_combinatorial(bad, trivial_cocycle(bad)), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == Errc::hypothesis_violation;
                         }));
    IsoradialMap big = gen_torus_lattice(LatticeKind::square, 4, 4);
    CHECK_THROWS_MATCHES(tau_combinatorial(big, trivial_cocycle(big)), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::too_large; }));
  }
}

TEST_CASE("Forman expansion equals the Laplacian determinant") {
  SECTION("trivial character gives exactly zero") {
    IsoradialMap m = gen_torus_lattice(LatticeKind::square, 2, 2);
    CHECK(std::abs(forman_det(m, WeightSystem::critical_c(m), trivial_cocycle(m))) == 0.0);
  }
  SECTION("1x1 torus explicit") {
    IsoradialMap m = gen_torus_lattice(LatticeKind::square, 1, 1);
    TreeCotree tc = tree_cotree(m);
    Rng rng(77);
    cdbl z1 = rng.unit(), z2 = rng.unit();
    Cocycle phi = character_to_cocycle(m, make_character(tc, {z1, z2}), tc);
    WeightSystem c = WeightSystem::critical_c(m);
    cdbl expect = 4.0 - 2 * z1.real() - 2 * z2.real();
    CHECK(rel(forman_det(m, c, phi), expect) < 1e-13);
    CHECK(rel(det_laplacian(m, c, phi), expect) < 1e-13);
  }
  SECTION("random characters, loop and multi-edge corpus") {
    for (const IsoradialMap& m : {gen_torus_lattice(LatticeKind::square, 2, 2),
                                  gen_torus_lattice(LatticeKind::square, 1, 2),
                                  gen_genus2_bouquet(), loop_map()}) {
      TreeCotree tc = tree_cotree(m);
      WeightSystem c = WeightSystem::critical_c(m);
      for (const Cocycle& phi : random_characters(m, tc, 20, 2718)) {
        CHECK(rel(forman_det(m, c, phi), det_laplacian(m, c, phi)) < 1e-9);
      }
    }
  }
}

#include <catch2/catch_amalgamated.hpp>
#include <complex>
#include <set>

#include "kw/builders.hpp"
#include "kw/cocycle.hpp"
#include "kw/rng.hpp"
#include "kw/spin.hpp"

using namespace kw;

namespace {

IsoradialMap sphere_k3() {
  StarGraphInput k3;
  k3.slots = {{0, 2}, {1, 0}, {2, 1}};
  return star_construction(k3, AnglePi::of(1, 4));
}

}  // namespace

TEST_CASE("tree-cotree decomposition") {
  SECTION("1x1 torus: empty tree, two chords, single-dart cycles") {
    IsoradialMap m = gen_torus_lattice(LatticeKind::square, 1, 1);
    TreeCotree tc = tree_cotree(m);
    CHECK(tc.chord_darts.size() == 2);
    for (const Walk& cycle : tc.basis) CHECK(cycle.size() == 1);
  }
  SECTION("chord count is 2g") {
    for (int n : {2, 3}) {
      TreeCotree tc = tree_cotree(gen_torus_lattice(LatticeKind::square, n, n));
      CHECK(tc.chord_darts.size() == 2);
    }
    CHECK(tree_cotree(gen_genus2_bouquet()).chord_darts.size() == 4);
    CHECK(tree_cotree(sphere_k3()).chord_darts.size() == 0);
  }
  SECTION("basis cycles are closed and non-backtracking") {
    for (const IsoradialMap& m : {gen_torus_lattice(LatticeKind::triangular, 2, 2),
                                  gen_torus_lattice(LatticeKind::square, 3, 2)}) {
      for (const Walk& cycle : tree_cotree(m).basis)
        CHECK(is_closed_non_backtracking(m, cycle));
    }
  }
}

TEST_CASE("graph cycle space rank") {
  IsoradialMap m = gen_torus_lattice(LatticeKind::square, 3, 2);
  GraphCycleBasis basis = fundamental_cycles(m);
  CHECK((int)basis.cycles.size() == m.n_edges - m.n_vertices() + 1);  // nm + 1
  for (const Walk& c : basis.cycles) CHECK(is_closed_non_backtracking(m, c));
}

TEST_CASE("character to cocycle") {
  IsoradialMap m = gen_torus_lattice(LatticeKind::square, 2, 2);
  TreeCotree tc = tree_cotree(m);

  SECTION("prescribed holonomy, trivial faces") {
    cdbl w = AnglePi::of(1, 3).phase();
    Cocycle phi = character_to_cocycle(m, make_character(tc, {w, cdbl(1.0, 0.0)}), tc);
    CHECK(std::abs(holonomy(phi, tc.basis[0]) - w) < 1e-12);
    CHECK(std::abs(holonomy(phi, tc.basis[1]) - cdbl(1.0, 0.0)) < 1e-12);
    CHECK(cocycle_defect(m, phi) < 1e-12);
  }
  SECTION("all ones gives the trivial cocycle") {
    Cocycle phi = character_to_cocycle(m, make_character(tc, {cdbl(1, 0), cdbl(1, 0)}), tc);
    for (cdbl p : phi.phase) CHECK(std::abs(p - cdbl(1, 0)) < 1e-14);
  }
  SECTION("exact sign character on the bouquet") {
    IsoradialMap b = gen_genus2_bouquet();
    TreeCotree tb = tree_cotree(b);
    std::vector<AnglePi> args{AnglePi::pi(), AnglePi::zero(), AnglePi::zero(), AnglePi::zero()};
    Cocycle phi = character_to_cocycle(b, make_exact_character(tb, args), tb);
    REQUIRE(phi.exact);
    for (const AnglePi& a : phi.arg)
      CHECK((a.is_zero_mod_two_pi() || a.is_pi_mod_two_pi()));
    CHECK(exact_holonomy(phi, tb.basis[0]).is_pi_mod_two_pi());
    CHECK(cocycle_defect(b, phi) == 0.0);
  }
}

TEST_CASE("mod-2 representatives") {
  CHECK(h1_mod2_reps(gen_torus_lattice(LatticeKind::square, 1, 1)).size() == 4);
  CHECK(h1_mod2_reps(gen_genus2_bouquet()).size() == 16);
  CHECK(h1_mod2_reps(sphere_k3()).size() == 1);

  // pairwise non-cohomologous: distinct holonomy vectors on the basis
  IsoradialMap m = gen_torus_lattice(LatticeKind::square, 2, 2);
  TreeCotree tc = tree_cotree(m);
  std::set<std::vector<int>> signatures;
  for (const Cocycle& rep : h1_mod2_reps(m, tc)) {
    CHECK(cocycle_defect(m, rep) == 0.0);
    std::vector<int> sig;
    for (const Walk& cycle : tc.basis)
      sig.push_back(exact_holonomy(rep, cycle).is_pi_mod_two_pi() ? -1 : 1);
    signatures.insert(sig);
  }
  CHECK(signatures.size() == 4);
}

TEST_CASE("canonical bundle") {
  SECTION("trivial on unsingular tori") {
    for (auto kind : {LatticeKind::square, LatticeKind::triangular}) {
      IsoradialMap m = gen_torus_lattice(kind, 2, 2);
      Cocycle kappa = canonical_bundle(m);
      TreeCotree tc = tree_cotree(m);
      for (const Walk& cycle : tc.basis)
        CHECK(exact_holonomy(kappa, cycle).is_zero_mod_two_pi());
      CHECK(cocycle_defect(m, kappa) == 0.0);
    }
  }
  SECTION("bouquet holonomy matches the turning") {
    IsoradialMap b = gen_genus2_bouquet();
    TreeCotree tc = tree_cotree(b);
    Cocycle kappa = canonical_bundle(b, tc);
    for (const Walk& cycle : tc.basis) {
      AnglePi want = (-turning_alpha(b, cycle)).mod_two_pi();
      CHECK(exact_holonomy(kappa, cycle).mod_two_pi() == want);
    }
    // and on walks outside the basis: the face boundary
    for (const auto& face : b.faces)
      CHECK((exact_holonomy(kappa, face) + turning_alpha(b, face)).is_zero_mod_two_pi());
  }
  SECTION("face turning is consistent for every valid input") {
    for (const IsoradialMap& m :
         {gen_torus_lattice(LatticeKind::hexagonal, 2, 2), gen_genus2_bouquet()}) {
      for (const auto& face : m.faces) CHECK(turning_alpha(m, face).is_multiple_of_two_pi());
    }
  }
  SECTION("refuses non-2*pi cone angles") {
    CHECK_THROWS_MATCHES(canonical_bundle(sphere_k3()), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == Errc::hypothesis_violation;
                         }));
  }
}

TEST_CASE("spin structures") {
  SECTION("torus: four structures, one trivial") {
    IsoradialMap m = gen_torus_lattice(LatticeKind::square, 2, 2);
    TreeCotree tc = tree_cotree(m);
    auto spins = spin_structures(m, tc);
    REQUIRE(spins.size() == 4);
    int trivial = 0;
    for (const auto& s : spins) {
      bool is_trivial = true;
      for (const Walk& cycle : tc.basis)
        if (!exact_holonomy(s.lambda, cycle).is_zero_mod_two_pi()) is_trivial = false;
      trivial += is_trivial;
    }
    CHECK(trivial == 1);
  }
  SECTION("square property lambda^2 = kappa") {
    IsoradialMap b = gen_genus2_bouquet();
    TreeCotree tc = tree_cotree(b);
    Cocycle kappa = canonical_bundle(b, tc);
    for (const auto& s : spin_structures(b, tc)) {
      for (int d = 0; d < b.n_darts; ++d) {
        AnglePi doubled = (s.lambda.arg[d] + s.lambda.arg[d]).mod_two_pi();
        CHECK(doubled == kappa.arg[d].mod_two_pi());
      }
      CHECK(cocycle_defect(b, s.lambda) == 0.0);
    }
  }
  SECTION("every face boundary has winding sign -1") {
    for (const IsoradialMap& m :
         {gen_torus_lattice(LatticeKind::square, 2, 2), gen_genus2_bouquet()}) {
      for (const auto& s : spin_structures(m))
        for (const auto& face : m.faces) CHECK(winding_sign(m, s.lambda, face) == -1);
    }
  }
  SECTION("refuses broken hypotheses") {
    StarGraphInput star;
    star.slots = {{0, 1, 2, 3, 4}, {0}, {1}, {2}, {3}, {4}};
    IsoradialMap bad = star_construction(star, AnglePi::of(1, 4));
    CHECK_THROWS_MATCHES(spin_structures(bad), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == Errc::hypothesis_violation;
                         }));
  }
}

TEST_CASE("winding signs") {
  IsoradialMap m = gen_torus_lattice(LatticeKind::square, 2, 2);
  TreeCotree tc = tree_cotree(m);
  auto spins = spin_structures(m, tc);

  // trivial structure on a straight generator: +1; twisting by -1 on the
  // chord flips it
  Walk row;  // horizontal straight generator
  for (int i = 0; i < 2; ++i) row.push_back(4 * i + 0);
  for (const auto& s : spins) {
    int sign = winding_sign(m, s.lambda, row);
    cdbl h = holonomy(s.lambda, row);
    // alpha(row) = 0, so the winding sign is the holonomy itself
    CHECK(std::abs(h - cdbl(sign, 0)) < 1e-12);
  }

  SECTION("non-spin cocycles are rejected") {
    std::vector<AnglePi> args{AnglePi::of(1, 3), AnglePi::zero()};
    Cocycle phi = character_to_cocycle(m, make_exact_character(tc, args), tc);
    CHECK_THROWS_MATCHES(winding_sign(m, phi, tc.basis[0]), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == Errc::not_plus_minus_one;
                         }));
  }
}

TEST_CASE("intersection form") {
  SECTION("torus: hyperbolic pairing") {
    IsoradialMap m = gen_torus_lattice(LatticeKind::square, 1, 1);
    TreeCotree tc = tree_cotree(m);
    auto form = intersection_form_mod2(m, tc.basis);
    CHECK(form == std::vector<std::vector<int>>{{0, 1}, {1, 0}});
  }
  SECTION("bouquet: two hyperbolic blocks") {
    IsoradialMap b = gen_genus2_bouquet();
    TreeCotree tc = tree_cotree(b);
    auto form = intersection_form_mod2(b, tc.basis);
    int ones = 0;
    for (int i = 0; i < 4; ++i) {
      CHECK(form[i][i] == 0);
      for (int j = 0; j < 4; ++j) ones += form[i][j];
    }
    CHECK(ones == 4);  // two symmetric hyperbolic pairs
  }
  SECTION("degenerate bases are rejected") {
    IsoradialMap m = gen_torus_lattice(LatticeKind::square, 2, 2);
    TreeCotree tc = tree_cotree(m);
    std::vector<Walk> bad{tc.basis[0], tc.basis[0]};
    CHECK_THROWS_MATCHES(intersection_form_mod2(m, bad), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == Errc::degenerate_form;
                         }));
  }
}

TEST_CASE("Arf invariants") {
  SECTION("torus values") {
    IsoradialMap m = gen_torus_lattice(LatticeKind::square, 3, 3);
    TreeCotree tc = tree_cotree(m);
    int arf_one = 0, arf_zero = 0;
    for (const auto& s : spin_structures(m, tc)) {
      bool is_trivial = true;
      for (const Walk& cycle : tc.basis)
        if (!exact_holonomy(s.lambda, cycle).is_zero_mod_two_pi()) is_trivial = false;
      if (is_trivial) {
        CHECK(s.arf == 1);
        ++arf_one;
      } else {
        CHECK(s.arf == 0);
        ++arf_zero;
      }
    }
    CHECK(arf_one == 1);
    CHECK(arf_zero == 3);
  }
  SECTION("bouquet Gauss sums") {
    auto spins = spin_structures(gen_genus2_bouquet());
    int plus = 0, minus = 0;
    for (const auto& s : spins) {
      if (s.gauss_sum == 4) ++plus;
      if (s.gauss_sum == -4) ++minus;
    }
    CHECK(plus == 10);   // 2^(g-1) (2^g + 1)
    CHECK(minus == 6);
    CHECK(plus + minus == 16);
  }
}

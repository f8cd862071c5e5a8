#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kw/kw.hpp"

namespace kw::cli {

using json = nlohmann::ordered_json;

// exit codes: 0 ok, 1 computational error, 2 usage, 3 hypothesis violation
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitHypothesis = 3;

inline uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)v);
  return buf;
}

// Hash of the canonicalized document, so formatting variations of the same
// map agree.
inline std::string map_hash(const IsoradialMap& m) {
  return hex64(fnv1a64(write_document(document_from_map(m))));
}

inline json angle_json(const AnglePi& a) {
  return json{{"num", a.units().num()}, {"den", a.units().den()}};
}

inline json complex_json(cdbl z) { return json::array({z.real(), z.imag()}); }

inline json hypotheses_json(const IsoradialMap& m) {
  auto entry = [&](const HypothesisReport& rep) {
    json violators = json::array();
    for (const auto& v : rep.violators)
      violators.push_back(json{{"cell", v.is_face ? "face" : "vertex"},
                               {"index", v.index},
                               {"cone_angle", angle_json(v.cone_angle)}});
    return json{{"pass", rep.pass}, {"violators", violators}};
  };
  return json{{"all_odd", entry(check_hypotheses(m, HypothesisMode::all_odd))},
              {"primal_odd", entry(check_hypotheses(m, HypothesisMode::primal_odd))}};
}

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

inline std::string slurp(std::istream& s) {
  std::ostringstream buf;
  buf << s.rdbuf();
  return buf.str();
}

inline IsoradialMap load_map(const std::string& path, Io& io) {
  std::string text;
  if (path == "-" || path.empty()) {
    text = slurp(io.in);
  } else {
    std::ifstream f(path);
    if (!f) fail(Errc::parse_error, "cannot open " + path);
    text = slurp(f);
  }
  return read_map(parse_document(text));
}

inline void emit(const std::string& text, const std::string& output_path, Io& io) {
  if (output_path.empty() || output_path == "-") {
    io.out << text;
    return;
  }
  std::ofstream f(output_path);
  if (!f) fail(Errc::parse_error, "cannot open " + output_path + " for writing");
  f << text;
}

inline void emit_report(json report, const std::string& output_path, Io& io) {
  emit(report.dump(2) + "\n", output_path, io);
}

// Character values: `re+imi` (e.g. `-1`, `0.6+0.8i`) or `exp:p/q` for
// exp(i*pi*p/q), comma separated.
inline cdbl parse_unit_value(std::string s) {
  std::erase(s, ' ');
  if (s.rfind("exp:", 0) == 0) {
    std::string frac = s.substr(4);
    size_t slash = frac.find('/');
    long long num = 0, den = 1;
    try {
      num = std::stoll(slash == std::string::npos ? frac : frac.substr(0, slash));
      if (slash != std::string::npos) den = std::stoll(frac.substr(slash + 1));
    } catch (const std::exception&) {
      fail(Errc::parse_error, "bad exp:p/q value: " + s);
    }
    return AnglePi::of(num, den).phase();
  }
  double re = 0, im = 0;
  if (!s.empty() && s.back() == 'i') {
    std::string body = s.substr(0, s.size() - 1);
    size_t split = std::string::npos;
    for (size_t i = body.size(); i-- > 1;) {
      if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
        split = i;
        break;
      }
    }
    try {
      if (split == std::string::npos) {
        im = (body.empty() || body == "+") ? 1.0 : (body == "-") ? -1.0 : std::stod(body);
      } else {
        re = std::stod(body.substr(0, split));
        std::string rest = body.substr(split);
        im = (rest == "+") ? 1.0 : (rest == "-") ? -1.0 : std::stod(rest);
      }
    } catch (const std::exception&) {
      fail(Errc::parse_error, "bad complex value: " + s);
    }
  } else {
    try {
      re = std::stod(s);
    } catch (const std::exception&) {
      fail(Errc::parse_error, "bad complex value: " + s);
    }
  }
  cdbl z(re, im);
  double mag = std::abs(z);
  if (std::abs(mag - 1.0) > 1e-6) fail(Errc::parse_error, "character value is not unit: " + s);
  return z / mag;
}

inline std::vector<cdbl> parse_character_list(const std::string& csv) {
  std::vector<cdbl> out;
  std::string cur;
  std::istringstream ss(csv);
  while (std::getline(ss, cur, ',')) out.push_back(parse_unit_value(cur));
  return out;
}

// Assembles the character cocycles a subcommand should run over.
struct CharacterSet {
  std::vector<Cocycle> cocycles;
  std::vector<std::string> labels;
};

inline CharacterSet collect_characters(const IsoradialMap& m, const TreeCotree& tc,
                                       const std::string& character_csv, bool all_signs,
                                       int random_count, std::optional<uint64_t> seed) {
  CharacterSet set;
  int g2 = (int)tc.chord_darts.size();
  if (all_signs) {
    auto reps = h1_mod2_reps(m, tc);
    for (size_t i = 0; i < reps.size(); ++i) {
      set.cocycles.push_back(reps[i]);
      std::string label;
      for (int b = 0; b < g2; ++b) label += (i >> b & 1) ? '-' : '+';
      set.labels.push_back("signs:" + label);
    }
  }
  if (!character_csv.empty()) {
    std::vector<cdbl> values = parse_character_list(character_csv);
    if ((int)values.size() != g2)
      fail(Errc::parse_error, "expected " + std::to_string(g2) + " character values, got " +
                                  std::to_string(values.size()));
    set.cocycles.push_back(character_to_cocycle(m, make_character(tc, values), tc));
    set.labels.push_back("explicit");
  }
  if (random_count > 0) {
    if (!seed) fail(Errc::parse_error, "--seed is required with random characters");
    Rng rng(*seed);
    for (int i = 0; i < random_count; ++i) {
      set.cocycles.push_back(character_to_cocycle(m, make_character(tc, rng.unit_vector(g2)), tc));
      set.labels.push_back("random:" + std::to_string(i));
    }
  }
  if (set.cocycles.empty()) {
    set.cocycles.push_back(trivial_cocycle(m));
    set.labels.push_back("trivial");
  }
  return set;
}

inline WeightSystem select_weights(const IsoradialMap& m, const std::string& kind) {
  if (kind == "critical" || kind == "nu") return WeightSystem::critical_nu(m);
  if (kind == "c") return WeightSystem::critical_c(m);
  if (kind == "mu") return WeightSystem::critical_mu(m);
  fail(Errc::parse_error, "unknown weight kind: " + kind);
}

inline int run(std::vector<std::string> args, Io io) {
  CLI::App app{"critical Ising partition functions on isoradial maps via twisted "
               "Kac-Ward determinants"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string input = "-", output = "-";
  std::optional<uint64_t> seed;
  double tolerance = 1e-9;
  app.add_option("--input", input, "map document file, or - for stdin")->capture_default_str();
  app.add_option("--output", output, "output file, or - for stdout")->capture_default_str();
  app.add_option("--seed", seed, "seed for all randomized sweeps");
  app.add_option("--tolerance", tolerance, "tolerance recorded in reports")
      ->capture_default_str();

  // gen
  auto* gen = app.add_subcommand("gen", "generate a canonical map document");
  std::string gen_kind = "square", gen_name;
  int gen_n = 1, gen_m = 1;
  gen->add_option("--kind", gen_kind, "square|triangular|hexagonal|bouquet")
      ->capture_default_str();
  gen->add_option("--n", gen_n, "columns")->capture_default_str();
  gen->add_option("--m", gen_m, "rows")->capture_default_str();
  gen->add_option("--name", gen_name, "name recorded in the document");

  // validate
  auto* validate = app.add_subcommand("validate", "validate a map and report its topology");

  // dual
  auto* dualcmd = app.add_subcommand("dual", "emit the dual map document");

  // spin-structures
  auto* spincmd = app.add_subcommand("spin-structures", "list the 2^(2g) spin structures");

  // tau
  auto* taucmd = app.add_subcommand("tau", "twisted Kac-Ward determinants");
  std::string tau_characters, tau_weights = "critical";
  bool tau_all_signs = false;
  int tau_random = 0;
  taucmd->add_option("--character", tau_characters, "comma-separated unit values on the basis");
  taucmd->add_flag("--all-sign-characters", tau_all_signs, "run all 2^(2g) sign characters");
  taucmd->add_option("--random-characters", tau_random, "number of random characters");
  taucmd->add_option("--weights", tau_weights, "critical|nu|c|mu")->capture_default_str();

  // partition
  auto* part = app.add_subcommand("partition", "critical Ising partition function");
  std::string part_method = "kw", part_weights = "critical";
  part->add_option("--method", part_method, "kw|oracle|spins")->capture_default_str();
  part->add_option("--weights", part_weights, "critical (geometric weights)")
      ->capture_default_str();

  // laplacian
  auto* lap = app.add_subcommand("laplacian", "twisted critical Laplacian determinants");
  std::string lap_characters, lap_weights = "c";
  bool lap_all_signs = false;
  int lap_random = 0;
  lap->add_option("--character", lap_characters, "comma-separated unit values on the basis");
  lap->add_flag("--all-sign-characters", lap_all_signs, "run all 2^(2g) sign characters");
  lap->add_option("--random-characters", lap_random, "number of random characters");
  lap->add_option("--weights", lap_weights, "c|nu|mu|critical")->capture_default_str();

  // duality-check
  auto* dualck = app.add_subcommand("duality-check", "Kramers-Wannier duality residuals");
  std::string dualck_characters;
  bool dualck_all_signs = false;
  int dualck_random = 0;
  dualck->add_option("--character", dualck_characters,
                     "comma-separated unit values on the quad-graph basis");
  dualck->add_flag("--all-sign-characters", dualck_all_signs);
  dualck->add_option("--random-characters", dualck_random, "number of random characters");

  // delta-check
  auto* deltack = app.add_subcommand("delta-check", "genus <= 1 Laplacian identity residuals");
  std::string deltack_characters;
  bool deltack_all_signs = false;
  int deltack_random = 0;
  deltack->add_option("--character", deltack_characters, "unit values on the basis");
  deltack->add_flag("--all-sign-characters", deltack_all_signs);
  deltack->add_option("--random-characters", deltack_random, "number of random characters");

  // nonprop-probe
  auto* nonprop = app.add_subcommand("nonprop-probe", "genus >= 2 ratio spread probe");
  int nonprop_random = 0;
  bool nonprop_all_signs = false;
  nonprop->add_option("--random-characters", nonprop_random, "number of random characters");
  nonprop->add_flag("--all-sign-characters", nonprop_all_signs);

  // coupling-check
  auto* coup = app.add_subcommand("coupling-check", "sinh(2J) sinh(2J*) = 1 residuals");
  long long coup_num = 1, coup_den = 4;
  int coup_sweep = 0;
  coup->add_option("--theta-num", coup_num, "theta numerator (of pi)")->capture_default_str();
  coup->add_option("--theta-den", coup_den, "theta denominator (of pi)")->capture_default_str();
  coup->add_option("--sweep", coup_sweep, "additionally sweep this many random angles");

  // free-energy
  auto* fe = app.add_subcommand("free-energy", "finite-size torus free-energy table");
  std::string fe_kind = "square";
  int fe_nmax = 6;
  bool fe_all = false;
  fe->add_option("--kind", fe_kind, "square|triangular|hexagonal")->capture_default_str();
  fe->add_option("--n-max", fe_nmax, "largest torus size")->capture_default_str();
  fe->add_flag("--all-lambdas", fe_all, "report all three nontrivial spin structures");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    io.out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    io.err << e.what() << "\n";
    return kExitUsage;
  }

  std::string command =
      app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name();

  try {
    if (gen->parsed()) {
      IsoradialMap m;
      std::string name;
      if (gen_kind == "bouquet") {
        m = gen_genus2_bouquet();
        name = "genus2-bouquet";
      } else {
        LatticeKind kind;
        if (gen_kind == "square") kind = LatticeKind::square;
        else if (gen_kind == "triangular") kind = LatticeKind::triangular;
        else if (gen_kind == "hexagonal") kind = LatticeKind::hexagonal;
        else fail(Errc::parse_error, "unknown lattice kind: " + gen_kind);
        m = gen_torus_lattice(kind, gen_n, gen_m);
        name = gen_kind + "-" + std::to_string(gen_n) + "x" + std::to_string(gen_m) + "-torus";
      }
      if (!gen_name.empty()) name = gen_name;
      emit(write_document(document_from_map(m, {}, name)), output, io);
      return kExitOk;
    }

    if (validate->parsed()) {
      IsoradialMap m = load_map(input, io);
      Topology top = topology(m);
      json angles_v = json::array(), angles_f = json::array();
      for (const AnglePi& a : top.primal_cone_angles) angles_v.push_back(angle_json(a));
      for (const AnglePi& a : top.dual_cone_angles) angles_f.push_back(angle_json(a));
      emit_report(json{{"command", "validate"},
                       {"status", "ok"},
                       {"map_hash", map_hash(m)},
                       {"hypotheses", hypotheses_json(m)},
                       {"vertices", top.n_vertices},
                       {"edges", top.n_edges},
                       {"faces", top.n_faces},
                       {"euler_characteristic", top.euler_characteristic},
                       {"genus", top.genus},
                       {"primal_cone_angles", angles_v},
                       {"dual_cone_angles", angles_f}},
                  output, io);
      return kExitOk;
    }

    if (dualcmd->parsed()) {
      IsoradialMap m = load_map(input, io);
      emit(write_document(document_from_map(dual(m), {}, std::string("dual"))), output, io);
      return kExitOk;
    }

    if (spincmd->parsed()) {
      IsoradialMap m = load_map(input, io);
      TreeCotree tc = tree_cotree(m);
      auto spins = spin_structures(m, tc);
      json list = json::array();
      for (const auto& s : spins) {
        json hol = json::array();
        for (const Walk& cycle : tc.basis) hol.push_back(complex_json(holonomy(s.lambda, cycle)));
        list.push_back(json{{"arf", s.arf},
                            {"gauss_sum", s.gauss_sum},
                            {"basis_holonomy", hol}});
      }
      emit_report(json{{"command", "spin-structures"},
                       {"status", "ok"},
                       {"map_hash", map_hash(m)},
                       {"hypotheses", hypotheses_json(m)},
                       {"genus", m.genus},
                       {"count", (int)spins.size()},
                       {"structures", list}},
                  output, io);
      return kExitOk;
    }

    if (taucmd->parsed()) {
      IsoradialMap m = load_map(input, io);
      TreeCotree tc = tree_cotree(m);
      CharacterSet set = collect_characters(m, tc, tau_characters, tau_all_signs, tau_random, seed);
      WeightSystem w = select_weights(m, tau_weights);
      json rows = json::array();
      for (size_t i = 0; i < set.cocycles.size(); ++i) {
        rows.push_back(json{{"character", set.labels[i]},
                            {"tau", complex_json(tau(m, w, set.cocycles[i]))}});
      }
      emit_report(json{{"command", "tau"},
                       {"status", "ok"},
                       {"map_hash", map_hash(m)},
                       {"hypotheses", hypotheses_json(m)},
                       {"weights", tau_weights},
                       {"tolerance", tolerance},
                       {"values", rows}},
                  output, io);
      return kExitOk;
    }

    if (part->parsed()) {
      IsoradialMap m = load_map(input, io);
      if (part_weights != "critical")
        fail(Errc::parse_error, "partition supports --weights critical");
      json payload{{"command", "partition"},
                   {"status", "ok"},
                   {"map_hash", map_hash(m)},
                   {"hypotheses", hypotheses_json(m)},
                   {"method", part_method},
                   {"tolerance", tolerance}};
      if (part_method == "kw") {
        payload["z"] = partition_function_kw(m, WeightSystem::critical_nu(m));
      } else if (part_method == "oracle") {
        payload["z"] = even_subgraph_z(m, WeightSystem::critical_nu(m)).real();
      } else if (part_method == "spins") {
        std::vector<double> J = critical_couplings(m);
        VdwConversion vdw = vdw_convert(m, J);
        double zj = spin_config_z(m, J);
        payload["z_spin"] = zj;
        payload["prefactor"] = vdw.prefactor;
        payload["z"] = zj / vdw.prefactor;
      } else {
        fail(Errc::parse_error, "unknown method: " + part_method);
      }
      emit_report(payload, output, io);
      return kExitOk;
    }

    if (lap->parsed()) {
      IsoradialMap m = load_map(input, io);
      TreeCotree tc = tree_cotree(m);
      CharacterSet set = collect_characters(m, tc, lap_characters, lap_all_signs, lap_random, seed);
      WeightSystem w = select_weights(m, lap_weights == "critical" ? "c" : lap_weights);
      json rows = json::array();
      for (size_t i = 0; i < set.cocycles.size(); ++i)
        rows.push_back(json{{"character", set.labels[i]},
                            {"det", complex_json(det_laplacian(m, w, set.cocycles[i]))}});
      emit_report(json{{"command", "laplacian"},
                       {"status", "ok"},
                       {"map_hash", map_hash(m)},
                       {"hypotheses", hypotheses_json(m)},
                       {"weights", lap_weights},
                       {"values", rows}},
                  output, io);
      return kExitOk;
    }

    if (dualck->parsed()) {
      IsoradialMap m = load_map(input, io);
      QuadGraph quad = quad_graph(m);
      TreeCotree tcq = tree_cotree(quad.map);
      CharacterSet set = collect_characters(quad.map, tcq, dualck_characters, dualck_all_signs,
                                            dualck_random, seed);
      json rows = json::array();
      double worst = 0.0;
      bool ok = true;
      for (size_t i = 0; i < set.cocycles.size(); ++i) {
        VerificationReport rep = duality_check(m, quad, set.cocycles[i]);
        worst = std::max(worst, rep.residual);
        ok = ok && rep.within(tolerance);
        rows.push_back(json{{"character", set.labels[i]},
                            {"lhs", complex_json(rep.lhs)},
                            {"rhs", complex_json(rep.rhs)},
                            {"residual", rep.residual}});
      }
      emit_report(json{{"command", "duality-check"},
                       {"status", ok ? "ok" : "error"},
                       {"map_hash", map_hash(m)},
                       {"hypotheses", hypotheses_json(m)},
                       {"tolerance", tolerance},
                       {"max_residual", worst},
                       {"checks", rows}},
                  output, io);
      return ok ? kExitOk : kExitError;
    }

    if (deltack->parsed()) {
      IsoradialMap m = load_map(input, io);
      TreeCotree tc = tree_cotree(m);
      CharacterSet set = collect_characters(m, tc, deltack_characters, deltack_all_signs,
                                            deltack_random, seed);
      json rows = json::array();
      bool ok = true;
      for (size_t i = 0; i < set.cocycles.size(); ++i) {
        VerificationReport rep = delta_identity_check(m, set.cocycles[i]);
        ok = ok && rep.within(tolerance);
        rows.push_back(json{{"character", set.labels[i]},
                            {"lhs", complex_json(rep.lhs)},
                            {"rhs", complex_json(rep.rhs)},
                            {"residual", rep.residual},
                            {"scale", rep.scale}});
      }
      emit_report(json{{"command", "delta-check"},
                       {"status", ok ? "ok" : "error"},
                       {"map_hash", map_hash(m)},
                       {"hypotheses", hypotheses_json(m)},
                       {"tolerance", tolerance},
                       {"checks", rows}},
                  output, io);
      return ok ? kExitOk : kExitError;
    }

    if (nonprop->parsed()) {
      IsoradialMap m = load_map(input, io);
      TreeCotree tc = tree_cotree(m);
      CharacterSet set =
          collect_characters(m, tc, "", nonprop_all_signs, nonprop_random, seed);
      NonProportionalityProbe probe = nonproportionality_probe(m, set.cocycles);
      json ratios = json::array();
      for (cdbl r : probe.ratios) ratios.push_back(complex_json(r));
      emit_report(json{{"command", "nonprop-probe"},
                       {"status", "ok"},
                       {"map_hash", map_hash(m)},
                       {"hypotheses", hypotheses_json(m)},
                       {"characters", (int)set.cocycles.size()},
                       {"skipped_near_zero", probe.skipped_near_zero},
                       {"spread", probe.spread},
                       {"ratios", ratios}},
                  output, io);
      return kExitOk;
    }

    if (coup->parsed()) {
      json rows = json::array();
      double worst = 0.0;
      auto push = [&](double theta, const std::string& label) {
        VerificationReport rep = kw_coupling_check(theta);
        worst = std::max(worst, rep.residual);
        rows.push_back(json{{"theta", label},
                            {"J", critical_coupling(theta)},
                            {"product", rep.lhs.real()},
                            {"residual", rep.residual}});
      };
      push(AnglePi::of(coup_num, coup_den).radians(),
           std::to_string(coup_num) + "/" + std::to_string(coup_den) + "*pi");
      if (coup_sweep > 0) {
        if (!seed) fail(Errc::parse_error, "--seed is required with --sweep");
        Rng rng(*seed);
        for (int i = 0; i < coup_sweep; ++i) {
          double theta = 0.01 + (M_PI / 2 - 0.02) * rng.uniform();
          push(theta, format_weight(theta));
        }
      }
      bool ok = worst <= tolerance;
      emit_report(json{{"command", "coupling-check"},
                       {"status", ok ? "ok" : "error"},
                       {"map_hash", nullptr},
                       {"tolerance", tolerance},
                       {"max_residual", worst},
                       {"checks", rows}},
                  output, io);
      return ok ? kExitOk : kExitError;
    }

    if (fe->parsed()) {
      LatticeKind kind;
      if (fe_kind == "square") kind = LatticeKind::square;
      else if (fe_kind == "triangular") kind = LatticeKind::triangular;
      else if (fe_kind == "hexagonal") kind = LatticeKind::hexagonal;
      else fail(Errc::parse_error, "unknown lattice kind: " + fe_kind);
      auto rows = free_energy_table(kind, fe_nmax, fe_all);
      json table = json::array();
      for (const auto& r : rows) {
        json lap_side = json::array();
        for (double l : r.laplacian_side) lap_side.push_back(l);
        table.push_back(json{{"n", r.n},
                             {"f", r.f},
                             {"laplacian_side", lap_side},
                             {"gap", std::abs(r.f - r.laplacian_side[0])},
                             {"delta_residual", r.delta_residual}});
      }
      emit_report(json{{"command", "free-energy"},
                       {"status", "ok"},
                       {"kind", fe_kind},
                       {"n_max", fe_nmax},
                       {"tolerance", tolerance},
                       {"rows", table}},
                  output, io);
      return kExitOk;
    }
  } catch (const Error& e) {
    bool hypothesis = e.code() == Errc::hypothesis_violation ||
                      e.code() == Errc::genus_too_high || e.code() == Errc::genus_too_low;
    io.err << e.what() << "\n";
    emit_report(json{{"command", command},
                     {"status", hypothesis ? "hypothesis_violation" : "error"},
                     {"error", e.what()}},
                output, io);
    return hypothesis ? kExitHypothesis : kExitError;
  } catch (const std::exception& e) {
    io.err << e.what() << "\n";
    emit_report(json{{"command", command}, {"status", "error"}, {"error", e.what()}}, output, io);
    return kExitError;
  }
  io.err << "no subcommand\n";
  return kExitUsage;
}

}  // namespace kw::cli

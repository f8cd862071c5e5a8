#include <catch2/catch_amalgamated.hpp>
#include <sstream>

#include <json.hpp>

#include "kw/cli.hpp"

using json = nlohmann::json;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  int code = kw::cli::run(std::move(args), {in, out, err});
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("gen pipes into partition") {
  RunResult gen = run({"gen", "--kind", "square", "--n", "1", "--m", "1"});
  REQUIRE(gen.exit_code == 0);
  RunResult part = run({"partition", "--method", "kw"}, gen.out);
  REQUIRE(part.exit_code == 0);
  json rep = json::parse(part.out);
  CHECK(rep["status"] == "ok");
  CHECK(std::abs(rep["z"].get<double>() - 2.0) < 1e-9);
  CHECK(rep.contains("map_hash"));
  CHECK(rep["hypotheses"]["all_odd"]["pass"] == true);

  RunResult oracle = run({"partition", "--method", "oracle"}, gen.out);
  json rep2 = json::parse(oracle.out);
  CHECK(std::abs(rep2["z"].get<double>() - 2.0) < 1e-12);

  RunResult spins = run({"partition", "--method", "spins"}, gen.out);
  json rep3 = json::parse(spins.out);
  CHECK(std::abs(rep3["z"].get<double>() - 2.0) < 1e-9);
  CHECK(rep3.contains("prefactor"));
}

TEST_CASE("spin structure listing") {
  RunResult gen = run({"gen", "--kind", "bouquet"});
  RunResult spins = run({"spin-structures"}, gen.out);
  REQUIRE(spins.exit_code == 0);
  json rep = json::parse(spins.out);
  CHECK(rep["count"] == 16);
  int plus = 0;
  for (const auto& s : rep["structures"]) {
    long long gauss = s["gauss_sum"].get<long long>();
    CHECK((gauss == 4 || gauss == -4));
    plus += gauss == 4;
  }
  CHECK(plus == 10);
}

TEST_CASE("duality check subcommand") {
  RunResult gen = run({"gen", "--kind", "triangular", "--n", "2", "--m", "2"});
  RunResult check = run({"duality-check", "--random-characters", "10", "--seed", "7"}, gen.out);
  REQUIRE(check.exit_code == 0);
  json rep = json::parse(check.out);
  CHECK(rep["status"] == "ok");
  CHECK(rep["max_residual"].get<double>() <= 1e-9);
  CHECK(rep["checks"].size() == 10);
}

TEST_CASE("identical invocations give identical bytes") {
  RunResult gen = run({"gen", "--kind", "bouquet"});
  std::vector<std::string> args{"nonprop-probe", "--random-characters", "25", "--seed", "99"};
  RunResult a = run(args, gen.out);
  RunResult b = run(args, gen.out);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  json rep = json::parse(a.out);
  CHECK(rep["spread"].get<double>() > 1.01);
}

TEST_CASE("character parsing") {
  RunResult gen = run({"gen", "--kind", "square", "--n", "2", "--m", "2"});
  RunResult tau = run({"tau", "--character", "exp:1/3,-1"}, gen.out);
  REQUIRE(tau.exit_code == 0);
  RunResult tau2 = run({"tau", "--character", "0.5+0.8660254037844387i,-1"}, gen.out);
  REQUIRE(tau2.exit_code == 0);
  json a = json::parse(tau.out), b = json::parse(tau2.out);
  auto va = a["values"][0]["tau"], vb = b["values"][0]["tau"];
  CHECK(std::abs(va[0].get<double>() - vb[0].get<double>()) < 1e-9);

  // wrong value count is a usage-class failure
  RunResult bad = run({"tau", "--character", "1"}, gen.out);
  CHECK(bad.exit_code == 1);
}

TEST_CASE("exit codes") {
  RunResult usage = run({"bogus"});
  CHECK(usage.exit_code == 2);

  RunResult gen = run({"gen", "--kind", "bouquet"});
  RunResult hypoth = run({"delta-check", "--all-sign-characters"}, gen.out);
  CHECK(hypoth.exit_code == 3);
  json rep = json::parse(hypoth.out);
  CHECK(rep["status"] == "hypothesis_violation");

  RunResult parse = run({"validate"}, "this is not json");
  CHECK(parse.exit_code == 1);
}

TEST_CASE("validate and dual round trip") {
  RunResult gen = run({"gen", "--kind", "hexagonal", "--n", "2", "--m", "2"});
  RunResult val = run({"validate"}, gen.out);
  json rep = json::parse(val.out);
  CHECK(rep["vertices"] == 8);
  CHECK(rep["edges"] == 12);
  CHECK(rep["faces"] == 4);
  CHECK(rep["genus"] == 1);

  RunResult dual = run({"dual"}, gen.out);
  RunResult val2 = run({"validate"}, dual.out);
  json rep2 = json::parse(val2.out);
  CHECK(rep2["vertices"] == 4);
  CHECK(rep2["faces"] == 8);
}

TEST_CASE("free energy and coupling subcommands") {
  RunResult fe = run({"free-energy", "--kind", "square", "--n-max", "3"});
  REQUIRE(fe.exit_code == 0);
  json rep = json::parse(fe.out);
  REQUIRE(rep["rows"].size() == 3);
  CHECK(rep["rows"][2]["gap"].get<double>() < rep["rows"][1]["gap"].get<double>());
  for (const auto& row : rep["rows"]) CHECK(row["delta_residual"].get<double>() <= 1e-9);

  RunResult coup = run({"coupling-check", "--theta-num", "1", "--theta-den", "6", "--sweep",
                        "100", "--seed", "5", "--tolerance", "1e-12"});
  REQUIRE(coup.exit_code == 0);
  json crep = json::parse(coup.out);
  CHECK(crep["max_residual"].get<double>() <= 1e-12);
}

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "cli_runner.hpp"

using namespace fgtest;

TEST_CASE("tower: single edge and single loop verify") {
  CliRun se = run_cli("tower " + data_file("se.sg"));
  CHECK(se.exit_code == 0);
  CHECK(se.out.find("G order 2") != std::string::npos);
  CHECK(se.out.find("status: verified") != std::string::npos);

  CliRun sl = run_cli("tower --format json " + data_file("sl.sg"));
  REQUIRE(sl.exit_code == 0);
  auto j = sl.report();
  CHECK(j["schema"] == "fgapprox-report");
  CHECK(j["version"] == 1);
  CHECK(j["tower"]["levels"][0]["g_order"] == 1);
  CHECK(j["status"] == "verified");
}

TEST_CASE("tower: two-edge path reports its level-2 conditions") {
  CliRun r = run_cli("tower --max-level 2 --format json " + data_file("p2.sg"));
  REQUIRE(r.exit_code == 0);
  auto j = r.report();
  const auto& levels = j["tower"]["levels"];
  REQUIRE(levels.size() == 2);
  CHECK(levels[1]["g_order"] == 120);
  CHECK(levels[1]["cond"]["passed"] == true);
  CHECK(j["main_lemma"]["failures"].empty());
  CHECK(j["retractability"]["disagreements"].empty());
  CHECK(j["tower"]["certified_grade"] == 2);
}

TEST_CASE("tower: symmetric input reports the automorphism check") {
  CliRun r = run_cli("tower --format json " + data_file("p2_symmetric.sg"));
  REQUIRE(r.exit_code == 0);
  auto j = r.report();
  CHECK(j["symmetry"]["automorphisms"] == 1);
  CHECK(j["symmetry"]["words_checked"] == 200);
  CHECK(j["symmetry"]["passed"] == true);
}

TEST_CASE("tower: budget exhaustion exits with the truncation code and a witness") {
  CliRun r = run_cli("tower --format json --budget-elements 50 " + data_file("p2.sg"));
  CHECK(r.exit_code == 2);
  auto j = r.report();
  CHECK(j["status"] == "truncated");
  CHECK(j["tower"]["certified_grade"] == 1);
  CHECK_FALSE(j["witnesses"].empty());

  CliRun env = run_cli("tower --format json " + data_file("p2.sg"), "FGAPPROX_BUDGET_ELEMENTS=50");
  CHECK(env.exit_code == 2);
  CHECK(env.report()["config"]["budget"]["elements"] == 50);
}

TEST_CASE("parse and usage errors exit with code 3") {
  CliRun bad = run_cli("tower " + data_file("bad_edge.sg"));
  CHECK(bad.exit_code == 3);
  CHECK(bad.out.find("bad_edge.sg:3:7:") != std::string::npos);

  CHECK(run_cli("tower --no-such-flag " + data_file("se.sg")).exit_code == 3);
  CHECK(run_cli("tower --cycle-len 1 " + data_file("se.sg")).exit_code == 3);
  CHECK(run_cli("tower /nonexistent/graph.sg").exit_code == 3);
  CHECK(run_cli("").exit_code == 3);
}

TEST_CASE("check-monoid: group, Brandt monoid and a broken table") {
  CliRun klein = run_cli("check-monoid " + data_file("klein.monoid"));
  CHECK(klein.exit_code == 0);
  CHECK(klein.out.find("inverse monoid: yes; F-inverse: yes") != std::string::npos);

  CliRun brandt = run_cli("check-monoid --format json " + data_file("brandt_b21.monoid"));
  CHECK(brandt.exit_code == 0);
  auto j = brandt.report();
  CHECK(j["f_inverse"]["holds"] == false);
  CHECK(j["f_inverse"]["maximal"] == nlohmann::json::array({"1", "e12", "e21"}));

  auto path = std::filesystem::temp_directory_path() / "fgapprox_broken.monoid";
  {
    std::ofstream f(path);
    f << "monoid 1\nsize 2\nmul 0 1\nmul 1 1\ninv 0 0\none 0\n";
  }
  CliRun broken = run_cli("check-monoid --format json '" + path.string() + "'");
  CHECK(broken.exit_code == 1);
  CHECK(broken.report()["inverse_monoid"] == false);
  CHECK_FALSE(broken.report()["witnesses"].empty());

  {
    std::ofstream f(path);
    f << "monoid 1\nsize 2\nmul 0 1\nmul 1 q\n";
  }
  CliRun malformed = run_cli("check-monoid '" + path.string() + "'");
  CHECK(malformed.exit_code == 3);
  CHECK(malformed.out.find(":4:7:") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("diagnose-ce: level-2 extensions over the two-edge path pass") {
  CliRun r = run_cli("diagnose-ce --level 2 --format json " + data_file("p2.sg"));
  REQUIRE(r.exit_code == 0);
  auto j = r.report();
  REQUIRE(j["extensions"].size() == 3);
  for (const auto& d : j["extensions"]) {
    CHECK(d["cluster_property"] == true);
    CHECK(d["bridge_free"] == true);
  }
}

TEST_CASE("fcover: cyclic groups, group files and the order cap") {
  CliRun c2 = run_cli("fcover --cyclic 2 --format json");
  REQUIRE(c2.exit_code == 0);
  auto j = c2.report();
  CHECK(j["mm"]["order"] == 7);
  CHECK(j["cover"]["t_equals_s"] == true);
  CHECK(j["cover"]["f_inverse"] == true);

  CHECK(run_cli("fcover " + data_file("c2.egroup.json")).exit_code == 0);
  CHECK(run_cli("fcover --cyclic 1").exit_code == 0);

  CliRun capped = run_cli("fcover --format json --max-q-order 3 " + data_file("klein.monoid"));
  CHECK(capped.exit_code == 2);
  CHECK_FALSE(capped.report()["witnesses"].empty());

  CHECK(run_cli("fcover").exit_code == 3);
  CHECK(run_cli("fcover " + data_file("brandt_b21.monoid")).exit_code == 3);  // not a group
}

TEST_CASE("reports are deterministic apart from timings") {
  auto out = std::filesystem::temp_directory_path() / "fgapprox_report.json";
  CliRun a = run_cli("tower --format json --out '" + out.string() + "' " + data_file("p2_symmetric.sg"));
  CliRun b = run_cli("tower --format json " + data_file("p2_symmetric.sg"));
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(without_timing(a.report()) == without_timing(b.report()));
  std::ifstream f(out);
  auto written = nlohmann::json::parse(f);
  CHECK(without_timing(written) == without_timing(a.report()));
  std::filesystem::remove(out);
}

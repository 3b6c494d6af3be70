#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "dhj/cli.hpp"
#include "dhj/json_io.hpp"

using namespace dhj;

namespace {

struct Run {
  int exit_code;
  std::string out, err;
  Json report;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  Run r{code, out.str(), err.str(), {}};
  if (!r.out.empty() && r.out[0] == '{') r.report = Json::parse(r.out);
  return r;
}

}  // namespace

TEST_CASE("measure subcommand returns the exact rational") {
  Run r = run({"measure", "--kind", "equal_slices", "--k", "2", "--n", "2", "--set", "ranks:[0]"});
  CHECK(r.exit_code == 0);
  CHECK(r.report["results"]["value"] == "1/3");
  CHECK(r.report["exact"] == true);
}

TEST_CASE("verify nu-prime reports tv 0 and exit 0") {
  Run r = run({"verify", "nu-prime", "--k", "2", "--n", "4", "--d", "2"});
  CHECK(r.exit_code == 0);
  CHECK(r.report["results"]["tv"] == "0");
}

TEST_CASE("extremal subcommand") {
  Run r = run({"extremal", "--k", "3", "--n", "2"});
  CHECK(r.exit_code == 0);
  CHECK(r.report["results"]["best_size"] == 6);
  CHECK(r.report["results"]["optimal"] == true);
}

TEST_CASE("unknown flags exit 2 with usage text") {
  Run r = run({"measure", "--bogus", "1"});
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("Usage") != std::string::npos);
  Run r2 = run({"nonsense"});
  CHECK(r2.exit_code == 2);
}

TEST_CASE("verification failure exits 1 (fault injection)") {
  Run good = run({"verify", "normalization", "--k", "2", "--n", "3"});
  CHECK(good.exit_code == 0);
  Run bad = run({"verify", "normalization", "--k", "2", "--n", "3", "--inject-fault"});
  CHECK(bad.exit_code == 1);
  CHECK(bad.report["results"]["ok"] == false);
}

TEST_CASE("reports are deterministic apart from elapsed_ms") {
  Run a = run({"verify", "circle", "--k", "2", "--n", "4"});
  Run b = run({"verify", "circle", "--k", "2", "--n", "4"});
  CHECK(a.exit_code == 0);
  a.report.erase("elapsed_ms");
  b.report.erase("elapsed_ms");
  CHECK(a.report == b.report);
}

TEST_CASE("csv output carries fixed key,value columns") {
  Run r = run({"--format", "csv", "measure", "--kind", "uniform", "--k", "2", "--n", "2",
               "--set", "full"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("key,value\n", 0) == 0);
  CHECK(r.out.find("results.value,1\n") != std::string::npos);
}

TEST_CASE("--approx adds labelled decimal renderings") {
  Run r = run({"--approx", "measure", "--kind", "equal_slices", "--k", "2", "--n", "2",
               "--set", "ranks:[0]"});
  CHECK(r.exit_code == 0);
  CHECK(r.report["results"].contains("value_approx"));
  double v = r.report["results"]["value_approx"].get<double>();
  CHECK(v == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("words and subspaces subcommands") {
  Run r = run({"words", "rank", "--k", "3", "--word", "123"});
  CHECK(r.exit_code == 0);
  CHECK(r.report["results"]["rank"] == 21);
  CHECK(r.report["results"]["map"] == 22);

  Run s = run({"subspaces", "count", "--k", "2", "--n", "3", "--d", "2"});
  CHECK(s.report["results"]["count"] == "9");

  Run sl = run({"words", "slices", "--k", "3", "--n", "6", "--nondegenerate"});
  CHECK(sl.report["results"]["count"] == "10");
}

TEST_CASE("partition emits a certificate the verify subcommand re-validates") {
  Run p = run({"partition", "--k", "2", "--n", "2", "--set", "full", "--d", "1", "--m", "1",
               "--eps", "1/4"});
  CHECK(p.exit_code == 0);
  CHECK(p.report["results"]["validates"] == true);

  std::string path = "/tmp/dhj_cert_test.json";
  {
    std::ofstream f(path);
    f << p.report["results"].dump();
  }
  Run v = run({"verify", "certificate", "--file", path});
  CHECK(v.exit_code == 0);

  // corrupt the stored certificate: drop one residual word
  Json broken = p.report["results"];
  broken["residual"] = Json::array();
  broken["target"].push_back(99);  // out of range would throw; instead swap target
  broken["target"] = Json::array({0, 1});
  {
    std::ofstream f(path);
    f << broken.dump();
  }
  Run bad = run({"verify", "certificate", "--file", path});
  CHECK(bad.exit_code == 1);
}

TEST_CASE("heart and increment subcommands") {
  Run h = run({"heart", "--k", "3", "--m", "1", "--set", "ranks:[0,1]"});
  CHECK(h.exit_code == 0);
  CHECK(h.report["results"]["violations"].empty());

  Run i = run({"increment", "--k", "2", "--n", "2", "--set", "ranks:[1,2,3]", "--d", "1"});
  CHECK(i.exit_code == 0);
  CHECK(i.report["results"]["density"] == "1");
}

TEST_CASE("report subcommands") {
  Run line = run({"report", "line-density", "--k", "2", "--n", "2", "--set", "full"});
  CHECK(line.report["results"]["mu_M"] == "5/9");

  Run deg = run({"report", "degenerate-bounds", "--k", "2", "--n", "4", "--m", "1", "--j", "2"});
  CHECK(deg.report["results"]["low_occurrence_mass"] == "1/5");
  CHECK(deg.report["results"]["all_strict"] == true);

  Run restr = run({"report", "restriction", "--k", "2", "--n", "2", "--set", "ranks:[0]",
                   "--d", "1", "--template", "31"});
  CHECK(restr.report["results"]["nu_S"] == "1/2");
  CHECK(restr.report["results"].contains("ratio_form"));

  Run tail = run({"report", "tail", "--k", "2", "--n", "64", "--halfwidth", "16"});
  CHECK(tail.exit_code == 0);
}

TEST_CASE("verify seed determinism for fuzz commands") {
  Run a = run({"verify", "partition", "--k", "2", "--n", "2", "--count", "5", "--seed", "9"});
  Run b = run({"verify", "partition", "--k", "2", "--n", "2", "--count", "5", "--seed", "9"});
  CHECK(a.exit_code == 0);
  a.report.erase("elapsed_ms");
  b.report.erase("elapsed_ms");
  CHECK(a.report == b.report);
}

TEST_CASE("density dump and slice-level composed mass") {
  Run d = run({"report", "density", "--kind", "equal_slices", "--k", "2", "--n", "2"});
  CHECK(d.exit_code == 0);
  CHECK(d.report["results"]["total_mass"] == "1");
  CHECK(d.report["results"]["backend"] == "slice");

  Run c = run({"report", "compose-mass", "--k", "2", "--n", "100", "--m", "2", "--minor",
               "uniform", "--major", "equal_slices", "--set", "band:letter=1,lo=40,hi=60"});
  CHECK(c.exit_code == 0);

  Run s = run({"measure", "--kind", "equal_slices", "--k", "2", "--n", "2", "--set",
               "slices:[[1,1]]"});
  CHECK(s.report["results"]["value"] == "1/3");
}

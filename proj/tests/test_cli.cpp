#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "run.hpp"

using namespace calabi;
namespace fs = std::filesystem;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "calabi");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("calabi_cli_test_" + name);
  fs::remove_all(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

}  // namespace

TEST_CASE("shrink-bundle reports the sqrt(2) root and a smooth zero section") {
  const Invocation r = invoke({"shrink-bundle", "--m", "1", "--p", "2", "--k", "1"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["mu_certificate"]["root"].get<double>() == doctest::Approx(1.41421356).epsilon(1e-8));
  CHECK(j["verdicts"]["classification"]["left"] == "smooth_zero_section");
  CHECK(j["verdicts"]["checks_passed"] == true);
}

TEST_CASE("glue with k >= p exits 1 and names the condition") {
  const Invocation r = invoke({"glue", "--p", "2", "--k", "3"});
  CHECK(r.code == 1);
  CHECK(r.err.find("0 < k < p") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("usage errors exit 1") {
  CHECK(invoke({}).code == 1);
  CHECK(invoke({"expand-cone", "--bogus"}).code == 1);
  CHECK(invoke({"expand-cone", "--m", "0"}).code == 1);
  CHECK(invoke({"expand-cone", "--mu", "0"}).code == 1);
  CHECK(invoke({"shrink-bundle", "--p", "2"}).code == 1);
  CHECK(invoke({"verify", "--suite", "nope"}).code == 1);
  CHECK(invoke({"expand-cone", "--help"}).code == 0);
}

TEST_CASE("failed checks exit 3") {
  // An impossible residual tolerance makes the closed-form check fail.
  const Invocation r = invoke({"expand-cone", "--tol", "1e-300"});
  CHECK(r.code == 3);
  CHECK(r.err.find("ode_residual") != std::string::npos);
  CHECK(json::parse(r.out)["verdicts"]["checks_passed"] == false);
}

TEST_CASE("reports are deterministic") {
  const Invocation a = invoke({"expand-cone", "--kappa", "6", "--mu", "-2"});
  const Invocation b = invoke({"expand-cone", "--kappa", "6", "--mu", "-2"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("glue writes its files") {
  const fs::path d = scratch_dir("glue");
  const Invocation r = invoke({"glue", "--p", "2", "--k", "1", "--out", d.string()});
  REQUIRE(r.code == 0);
  for (const char* f : {"report.json", "profile.csv", "expanding.csv", "flow.csv"}) CHECK(fs::exists(d / f));
  const json j = json::parse(slurp(d / "report.json"));
  CHECK(j["eternal"]["amplitude_mismatch"].get<double>() <= 1e-8);
  CHECK(slurp(d / "flow.csv").rfind("t,r,potential\n", 0) == 0);
  fs::remove_all(d);
}

TEST_CASE("verify replays a report") {
  const fs::path d = scratch_dir("replay");
  REQUIRE(invoke({"shrink-bundle", "--p", "3", "--k", "2", "--out", d.string()}).code == 0);
  const Invocation r = invoke({"verify", "--from-report", (d / "report.json").string()});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["reproduced_command"] == "shrink-bundle");
  CHECK(j["original_verdicts"] == j["reproduced_verdicts"]);
  CHECK(invoke({"verify", "--from-report", (d / "missing.json").string()}).code == 1);
  std::ofstream(d / "bad.json") << "{not json";
  CHECK(invoke({"verify", "--from-report", (d / "bad.json").string()}).code == 1);
  fs::remove_all(d);
}

TEST_CASE("other subcommands") {
  CHECK(invoke({"expand-bundle", "--p", "1", "--k", "2"}).code == 0);
  CHECK(invoke({"expand-bundle", "--p", "2", "--k", "1"}).code == 1);
  CHECK(invoke({"expand-cone", "--q", "2"}).code == 0);
  const Invocation s = invoke({"scalar", "--m", "2", "--kappa", "-2", "--c", "-6", "--mu", "-1.5"});
  CHECK(s.code == 0);
  CHECK(json::parse(s.out)["verdicts"]["ricci_specialization"] == true);
  const Invocation w = invoke({"sweep", "--p", "4"});
  CHECK(w.code == 0);
  CHECK(json::parse(w.out)["verdicts"]["points"] == 6);
  CHECK(invoke({"verify", "--suite", "mu"}).code == 0);
}

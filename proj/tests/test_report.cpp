#include <doctest.h>

#include <cmath>

#include "calabi/error.hpp"
#include "calabi/report.hpp"

using namespace calabi;

TEST_CASE("numbers survive JSON") {
  CHECK(number_json(kInfinity) == "inf");
  CHECK(number_json(-kInfinity) == "-inf");
  CHECK(number_json(std::nan("")).is_null());
  CHECK(number_from_json(number_json(kInfinity)) == kInfinity);
  CHECK(std::isnan(number_from_json(json(nullptr))));
  CHECK(number_from_json(number_json(0.1)) == 0.1);
}

TEST_CASE("profile round trip") {
  const SolitonProfile pr = SolitonProfile::anchored(3, 2.5, -1, -0.75, 0.4);
  const json j = profile_json(pr);
  const SolitonProfile back = profile_from_json(j);
  CHECK(back.m() == 3);
  CHECK(back.kappa() == 2.5);
  CHECK(back.nu() == pr.nu());
  CHECK(back.phi(2.0) == doctest::Approx(pr.phi(2.0)).epsilon(1e-14));
  CHECK(std::isinf(back.b()));
  CHECK_THROWS_AS(profile_from_json(json{{"m", 1}}), InvalidParameter);
}

TEST_CASE("check list") {
  CheckList c;
  c.at_most("small", 1e-9, 1e-8);
  c.at_least("big", 3.0, 1.0);
  c.holds("flag", true);
  CHECK(c.all_pass());
  c.at_most("nan", std::nan(""), 1.0);
  CHECK_FALSE(c.all_pass());
  CHECK(c.failures() == std::vector<std::string>{"nan"});
  const json j = c.to_json();
  CHECK(j.size() == 4);
  CHECK(j[0]["name"] == "small");
}

TEST_CASE("dump ends with newline and is stable") {
  const json j{{"b", 1}, {"a", 2}};
  const std::string s = dump_report(j);
  CHECK(s.back() == '\n');
  CHECK(s.find("\"b\"") < s.find("\"a\""));
  CHECK(s == dump_report(j));
}

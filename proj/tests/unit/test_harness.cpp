#include <doctest.h>

#include <set>

#include "metasymp/errors.hpp"
#include "metasymp/harness.hpp"
#include "metasymp/tolerances.hpp"

using namespace metasymp;

namespace {

SuiteConfig config(const std::string& name, std::uint64_t seed = 7) {
  SuiteConfig c;
  c.suite_name = name;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("registry") {
  std::set<std::string> names;
  for (const SuiteInfo& s : registered_suites()) {
    names.insert(s.name);
    CHECK_FALSE(s.claim.empty());
  }
  for (const char* n : {"lemma1", "cayley", "maslov", "czparity", "altforms", "covariance", "hw", "fresnel", "trace",
                        "compose", "split", "twisted"})
    CHECK(names.count(n) == 1);
  CHECK(names.size() == registered_suites().size());
}

TEST_CASE("a suite run") {
  SuiteConfig c = config("lemma1");
  c.n_range = {1, 2};
  c.trials = 50;
  const SuiteReport r = run_suite(c);
  CHECK(r.suite_name == "lemma1");
  CHECK(r.trials.size() == 100);  // trials per n
  CHECK(r.passed());
  CHECK(r.max_residual < tol::lemma1_rel);
  CHECK(r.tolerances.at("lemma1_rel") == tol::lemma1_rel);
  const auto j = r.to_json();
  CHECK(j["aggregate"]["passed"] == true);
  CHECK(j["aggregate"].contains("seconds"));
  CHECK(j["claim"] == r.claim);
  CHECK_FALSE(j["trials"][0].contains("inputs"));  // only failures carry inputs
}

TEST_CASE("equal seeds give equal reports") {
  SuiteConfig c = config("cayley");
  c.trials = 40;
  const auto a = run_suite(c).to_json(false), b = run_suite(c).to_json(false);
  CHECK(a == b);
  CHECK_FALSE(a["aggregate"].contains("seconds"));
  c.seed = 8;
  CHECK(run_suite(c).to_json(false)["trials"] != a["trials"]);
}

TEST_CASE("tolerance overrides and scaling") {
  SuiteConfig c = config("fresnel");
  c.trials = 5;
  c.tol_scale = 10.0;
  CHECK(run_suite(c).tolerances.at("fresnel") == doctest::Approx(10 * tol::fresnel));

  c.tol_scale = 1.0;
  c.tolerances["fresnel"] = 2e-3;
  CHECK(run_suite(c).tolerances.at("fresnel") == 2e-3);

  c.tolerances = {{"nonsense", 1.0}};
  CHECK_THROWS_AS(run_suite(c), DimensionError);
  c.tolerances = {{"fresnel", -1.0}};
  CHECK_THROWS_AS(run_suite(c), DimensionError);
  c.tolerances.clear();
  c.tol_scale = 0.0;
  CHECK_THROWS_AS(run_suite(c), DimensionError);
}

TEST_CASE("failing trials carry their inputs") {
  SuiteConfig c = config("lemma1");
  c.n_range = {2};
  c.trials = 5;
  c.tolerances["lemma1_rel"] = 1e-300;
  const SuiteReport r = run_suite(c);
  CHECK_FALSE(r.passed());
  const auto j = r.to_json(false);
  bool any = false;
  for (const auto& t : j["trials"]) {
    if (t["pass"] == true) continue;
    any = true;
    CHECK(t.contains("inputs"));
    CHECK(t["inputs"].contains("trial_seed"));
  }
  CHECK(any);
  CHECK(j["aggregate"]["passed"] == false);
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(run_suite(config("nosuch")), UnknownSuite);
  try {
    run_suite(config("nosuch"));
  } catch (const UnknownSuite& e) {
    CHECK(std::string(e.what()).find("lemma1") != std::string::npos);
  }
  SuiteConfig c = config("trace");
  c.n_range = {2};
  CHECK_THROWS_AS(run_suite(c), DimensionError);
  c = config("hw");
  c.trials = 0;
  CHECK_THROWS_AS(run_suite(c), DimensionError);
}

TEST_CASE("CSV summary") {
  SuiteConfig c = config("hw");
  c.trials = 3;
  const std::string csv = csv_summary({run_suite(c)});
  CHECK(csv.rfind("suite,trials,passes,max_residual,seconds\n", 0) == 0);
  CHECK(csv.find("\nhw,3,3,") != std::string::npos);
}

}  // TEST_SUITE

#include <doctest.h>

#include "dlab/checks.hpp"

using namespace dlab;
using nlohmann::json;

TEST_CASE("checks: registry") {
  CHECK(check_names().size() == 17);
  CHECK_THROWS_AS(run_check("no-such-check", json::object(), 0),
                  std::invalid_argument);
  try {
    run_check("no-such-check", json::object(), 0);
  } catch (const std::invalid_argument& err) {
    // the error lists the registry
    CHECK(std::string(err.what()).find("coordinate-growth") != std::string::npos);
  }
}

TEST_CASE("checks: exact matrix experiments") {
  const auto a = run_check("counterexample-n2", json::object(), 0);
  CHECK(a.pass);
  CHECK(a.metrics.at("max_entry_A6_minus_id") < 1e-12);
  CHECK(a.metrics.at("max_surface_defect") < 1e-12);

  const auto b = run_check("shear-identity-n1", json::object(), 0);
  CHECK(b.pass);
  CHECK(b.metrics.at("max_integer_deviation") == 0.0);
}

TEST_CASE("checks: reports are pure functions of (name, config, seed)") {
  const json config{{"samples", 5000}, {"steps", 3}};
  const auto r1 = run_check("coordinate-growth", config, 9);
  const auto r2 = run_check("coordinate-growth", config, 9);
  REQUIRE(r1.metrics.size() == r2.metrics.size());
  for (const auto& [k, v] : r1.metrics) CHECK(v == r2.metrics.at(k));
  CHECK(r1.pass == r2.pass);

  // different seeds move the Monte-Carlo metrics
  const auto r3 = run_check("coordinate-growth", config, 10);
  CHECK(r3.metrics.at("t_z_top") != r1.metrics.at("t_z_top"));
}

TEST_CASE("checks: config echo and json serialization") {
  const auto rep =
      run_check("square-completion", json{{"trials", 2}, {"max_d", 4}}, 5);
  CHECK(rep.pass);
  CHECK(rep.config.at("trials").get<double>() == 2.0);

  const auto j = report_to_json(rep);
  CHECK(j.at("name") == "square-completion");
  CHECK(j.at("pass").get<bool>());
  CHECK(j.contains("metrics"));
  CHECK(j.contains("runtime_ms"));
  CHECK(j.at("seed").get<std::uint64_t>() == 5);
}

TEST_CASE("checks: growth bands follow the surface degree") {
  // quintic: T(x)/T(z) targets 5/2
  const auto quintic = run_check(
      "coordinate-growth",
      json{{"poly", "1,-1,0,0,0,1"}, {"samples", 20000}}, 3);
  CHECK(quintic.pass);
  CHECK(quintic.metrics.at("ratio_xz_target") == 2.5);

  // cubic: the one-step ratio approaches 2 from above, the lemma's edge
  const auto cubic = run_check(
      "step1-ratio", json{{"poly", "-1,0,0,1"}, {"samples", 20000}}, 3);
  CHECK(cubic.pass);
}

TEST_CASE("checks: fast registry entries pass at reduced sizes") {
  CHECK(run_check("composition-relation", json{{"pairs", 6}, {"points_per_pair", 20}}, 3).pass);
  CHECK(run_check("inverse-law", json{{"maps", 6}, {"points", 30}}, 3).pass);
  CHECK(run_check("surface-preservation", json{{"words", 6}, {"points", 30}}, 3).pass);
  CHECK(run_check("sequence-normal-form", json{{"words", 12}, {"points", 8}}, 3).pass);
  CHECK(run_check("jacobi-step-ratio", json{{"points", 25}}, 3).pass);
  CHECK(run_check("theta-combination", json{{"points", 25}}, 3).pass);
  CHECK(run_check("invariant-decomposition", json{{"points", 40}, {"samples", 2000}}, 3).pass);
  CHECK(run_check("square-completion", json::object(), 3).pass);
}

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "varlex/io.hpp"

using namespace varlex;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("varlex_io_" + name)).string();
}

}  // namespace

TEST_CASE("config round trip for every verifier") {
  for (const auto& id : verifier_ids()) {
    const RunConfig c = default_config(id);
    const Json j = config_to_json(c);
    const RunConfig back = config_from_json(id, j);
    CHECK(config_to_json(back).dump() == j.dump());
    const Json again = parse_json_text(j.dump(2), "echo");
    CHECK(config_to_json(config_from_json(id, again)).dump() == j.dump());
  }
}

TEST_CASE("echoed config lists every knob") {
  const Json j = config_to_json(default_config("rara"));
  for (const char* key : {"id", "domain", "resolutions", "exponent", "alpha", "beta", "epsilon",
                          "weight", "r", "delta_steps", "trials", "tolerance", "stability",
                          "mode", "depth", "sampler", "norm_tolerance"}) {
    CHECK(j.contains(key));
  }
}

TEST_CASE("overlays keep unspecified defaults") {
  const RunConfig c = config_from_json("welland", Json::parse(R"({"trials": 7, "alpha": 0.75})"));
  CHECK(c.trials == 7);
  CHECK(c.alpha == 0.75);
  CHECK(c.epsilon == default_config("welland").epsilon);
}

TEST_CASE("config errors name the field") {
  try {
    (void)config_from_json("welland", Json::parse(R"({"trails": 7})"));
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "trails");
  }
  try {
    (void)config_from_json("welland", Json::parse(R"({"domain": {"lo": "x"}})"));
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "domain.lo");
  }
  try {
    (void)config_from_json("rara", Json::parse(R"({"exponent": {"kind": "wobbly"}})"));
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(e.field().rfind("exponent", 0) == 0);
  }
  CHECK_THROWS_AS(config_from_json("welland", Json::parse(R"({"id": "rara"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json("bogus", Json::object()), ConfigError);
}

TEST_CASE("malformed JSON reports its line") {
  try {
    (void)parse_json_text("{\n  \"a\": 1,\n  \"b\": ,\n}", "cfg.json");
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("cfg.json:3") == 0);
  }
}

TEST_CASE("line_of_key") {
  const std::string text = "{\n  \"alpha\": 1,\n  \"domain\": {\n    \"lo\": [0]\n  }\n}";
  CHECK(line_of_key(text, "alpha") == 2);
  CHECK(line_of_key(text, "lo") == 4);
  CHECK(line_of_key(text, "beta") == 0);
}

TEST_CASE("non-finite numbers become strings") {
  CHECK(number(1.5) == Json(1.5));
  CHECK(number(INFINITY) == Json("inf"));
  CHECK(number(-INFINITY) == Json("-inf"));
  CHECK(number(NAN) == Json("nan"));
}

TEST_CASE("field descriptors round trip") {
  const std::vector<FieldExpr> all{
      expr::Constant{2.0},
      expr::Power{{0.5, 0.5}, -0.25},
      expr::ProductPower{{0.0, 0.0}, {0.5, 0.25}},
      expr::LogPerturbed{2.0, 1.0, {0.5}},
      expr::Linear{1.8, {0.4, 0.0}},
      expr::Step{1, 0.5, 2.0, 3.0},
      expr::ClippedPower{{{0.0, 0.0}, {1.0, 1.0}}, 0.25},
      expr::ExampleWeight{-0.5},
      expr::Table{{1.0, 2.0, 3.0}},
  };
  for (const auto& e : all) {
    const Json j = field_to_json(e);
    CHECK(field_to_json(field_from_json(j, "f")).dump() == j.dump());
  }
  CHECK_THROWS_AS(field_from_json(Json::parse(R"({"kind": "constant", "value": 1, "extra": 2})"), "f"),
                  ConfigError);
  CHECK_THROWS_AS(field_from_json(Json::parse(R"({"kind": "power", "eta": 1})"), "f"), ConfigError);
  const WeightSpec w{expr::Constant{1.0}, expr::ClippedPower{{{0.5, 0.5}}, 0.5}};
  CHECK(weight_to_json(weight_from_json(weight_to_json(w), "w")).dump() == weight_to_json(w).dump());
}

TEST_CASE("domain files") {
  const auto d = build_example_domain(3);
  const std::string path = temp_path("domain.json");
  write_file_atomic(path, domain_to_json(d).dump(2));
  const auto back = load_domain_file(path);
  CHECK(back.size() == d.size());
  CHECK(back.ahlfors_dim() == d.ahlfors_dim());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(back.mass(i) == d.mass(i));
    CHECK(back.coords(i)[0] == d.coords(i)[0]);
  }
  const std::string bad = temp_path("bad_domain.json");
  write_file_atomic(bad, "{\n  \"ambient_dim\": 1,\n  \"ahlfors_dim\": 1,\n  \"atoms\": [\n"
                         "    {\"coords\": [0], \"mass\": \"heavy\"}\n  ]\n}\n");
  try {
    (void)load_domain_file(bad);
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 5);
  }
  std::filesystem::remove(path);
  std::filesystem::remove(bad);
  CHECK_THROWS_AS(load_domain_file(temp_path("missing.json")), ConfigError);
}

TEST_CASE("reports serialize the schema") {
  VerificationReport r;
  r.id = "welland";
  r.seed = 9;
  r.trials = 3;
  r.max_ratio = INFINITY;
  r.trend = {{16, 1.0}, {32, INFINITY}};
  r.verdict = Verdict::unstable;
  const Json j = report_to_json(r, default_config("welland"));
  CHECK(j["id"] == "welland");
  CHECK(j["seed"] == 9);
  CHECK(j["max_ratio"] == "inf");
  CHECK(j["trend"][1][1] == "inf");
  CHECK(j["verdict"] == "unstable");
  CHECK(j.contains("witness"));
  CHECK(j.contains("config"));
}

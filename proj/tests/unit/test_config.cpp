#include <doctest.h>

#include "fixture.hpp"
#include "oracles.hpp"
#include "scidebt/config.hpp"
#include "scidebt/error.hpp"

using namespace scidebt;

TEST_SUITE("config") {

TEST_CASE("defaults parse") {
  const Config cfg = load_config({}, {});
  CHECK(cfg.model.alpha == 1.0);
  CHECK(cfg.model.lambda == 0.5);
  CHECK(cfg.port == 8080);
  CHECK(cfg.loop.plans.size() == 3);
  CHECK(cfg.paths.dataset.empty());
  CHECK(cfg.syntax.find("python") != nullptr);
}

TEST_CASE("file values override defaults and paths resolve against the file") {
  gen::TempDir dir("config-file");
  const auto path = fixture::write_workspace(dir.path());
  const Config cfg = load_config(path, {});
  CHECK(cfg.paths.dataset == dir / "state/dataset.jsonl");
  CHECK(cfg.paths.prevalence.empty());
  CHECK(cfg.loop.seed == 3);
  REQUIRE(cfg.loop.plans.size() == 2);
  CHECK(cfg.loop.plans[1].budget == 30);
  CHECK(cfg.port == 0);
  // Keys the file leaves out keep their defaults.
  CHECK(cfg.folds == 3);
  CHECK(cfg.inspection_sample == 100);
}

TEST_CASE("environment overrides win over the file") {
  gen::TempDir dir("config-env");
  const auto path = fixture::write_workspace(dir.path());
  const Config cfg = load_config(path, {{"SCIDEBT_MODEL__ALPHA", "0.25"},
                                        {"SCIDEBT_SERVER__HOST", "0.0.0.0"},
                                        {"SCIDEBT_SERVER__PORT", "9000"},
                                        {"SCIDEBT_PATHS__DATASET", "/abs/data.jsonl"},
                                        {"SCIDEBT_MODEL__SINGLE_HEAD", "true"},
                                        {"UNRELATED", "x"},
                                        {"SCIDEBT_NOSEPARATOR", "1"}});
  CHECK(cfg.model.alpha == 0.25);
  CHECK(cfg.loop.alpha == 0.25);
  CHECK(cfg.host == "0.0.0.0");
  CHECK(cfg.port == 9000);
  CHECK(cfg.paths.dataset == "/abs/data.jsonl");
  CHECK(cfg.model.single_head);
}

TEST_CASE("override values fall back to strings") {
  json j = {{"server", {{"host", "h"}}}};
  apply_env_overrides(j, {{"SCIDEBT_SERVER__HOST", "not json{"}, {"SCIDEBT_NEW__KEY", "[1,2]"}});
  CHECK(j["server"]["host"] == "not json{");
  CHECK(j["new"]["key"] == json::array({1, 2}));
}

TEST_CASE("invalid values are rejected") {
  CHECK_THROWS_AS(load_config({}, {{"SCIDEBT_SERVER__PORT", "70000"}}), Error);
  CHECK_THROWS_AS(load_config({}, {{"SCIDEBT_MODEL__ALPHA", "\"high\""}}), Error);
  gen::TempDir dir("config-bad");
  write_file(dir / "c.json", "{ nope");
  try {
    load_config(dir / "c.json", {});
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse);
  }
}

TEST_CASE("dataset writer starts from the seed dataset") {
  gen::TempDir dir("config-seed");
  const Config cfg = load_config(fixture::write_workspace(dir.path()), {});
  REQUIRE_FALSE(std::filesystem::exists(cfg.paths.dataset));
  auto writer = open_dataset_writer(cfg);
  CHECK(writer.snapshot().size() == 48);
  CHECK(read_file(cfg.paths.dataset) == read_file(cfg.paths.seed_dataset));
}

}  // TEST_SUITE

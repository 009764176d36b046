#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "scidebt/scidebt.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  scidebt_string_free(s);
  return out;
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / "scidebt-tests" / (name + "-capi");
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

void write(const std::filesystem::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

const char* kSeedRows =
    R"({"instance_id":"a1","kind":"code_comment","text":"assume fixed grid","label":"scientific_debt","indicator":"assumption","annotator":"x","origin":"cass_manual"}
{"instance_id":"a2","kind":"code_comment","text":"fine code here","label":"non_debt","annotator":"x","origin":"cass_manual"}
{"instance_id":"a3","kind":"commit_message","text":"add missing test","label":"test_debt","annotator":"x","origin":"cass_manual"}
)";

}  // namespace

TEST_CASE("status names and errors") {
  CHECK(std::string(scidebt_version()).size() > 0);
  CHECK(std::string(scidebt_status_name(SCIDEBT_E_CONFLICT)) == "conflict");
  size_t n = 0;
  CHECK(scidebt_sample_size(0.95, 0.0, &n) == SCIDEBT_E_INVALID_ARGUMENT);
  CHECK(std::string(scidebt_last_error()).size() > 0);
  CHECK(scidebt_sample_size(0.95, 0.05, &n) == SCIDEBT_OK);
  CHECK(n == 384);
  CHECK(scidebt_sample_size(0.95, 0.05, nullptr) == SCIDEBT_E_INVALID_ARGUMENT);
}

TEST_CASE("config handle") {
  scidebt_config* cfg = nullptr;
  REQUIRE(scidebt_config_load(nullptr, &cfg) == SCIDEBT_OK);
  CHECK(scidebt_config_set(cfg, "model", "alpha", "0.5") == SCIDEBT_OK);
  CHECK(scidebt_config_set(cfg, "server", "host", "example") == SCIDEBT_OK);
  CHECK(scidebt_config_set(cfg, "model", "alpha", "\"x\"") == SCIDEBT_E_PARSE);
  char* js = nullptr;
  REQUIRE(scidebt_config_to_json(cfg, &js) == SCIDEBT_OK);
  const std::string s = take(js);
  CHECK(s.find("\"alpha\":0.5") != std::string::npos);
  CHECK(s.find("\"host\":\"example\"") != std::string::npos);

  char* text = nullptr;
  REQUIRE(scidebt_normalize(cfg, "/* TODO: Don't  re-use x_y 42 */", "cpp", &text) == SCIDEBT_OK);
  CHECK(take(text) == "todo dont reuse xy");
  REQUIRE(scidebt_normalize(cfg, "Fix Bug #12\n\nMore", nullptr, &text) == SCIDEBT_OK);
  CHECK(take(text) == "fix bug more");
  CHECK(scidebt_normalize(cfg, "x", "cobol", &text) == SCIDEBT_E_UNSUPPORTED);
  scidebt_config_free(cfg);
  CHECK(scidebt_config_load("/nonexistent/config.json", &cfg) == SCIDEBT_E_IO);
}

TEST_CASE("kappa") {
  const char* a[] = {"s", "s", "n", "n"};
  const char* b[] = {"s", "n", "n", "n"};
  double k = 0;
  REQUIRE(scidebt_kappa(a, b, 4, &k) == SCIDEBT_OK);
  CHECK(k == doctest::Approx(0.5));
  CHECK(scidebt_kappa(a, b, 0, &k) == SCIDEBT_E_INVALID_ARGUMENT);
}

TEST_CASE("dataset and model handles") {
  const auto dir = scratch("handles");
  write(dir / "ds.jsonl", kSeedRows);
  scidebt_dataset* ds = nullptr;
  REQUIRE(scidebt_dataset_open((dir / "ds.jsonl").c_str(), &ds) == SCIDEBT_OK);
  CHECK(scidebt_dataset_size(ds) == 3);
  char* dist = nullptr;
  REQUIRE(scidebt_dataset_distribution(ds, &dist) == SCIDEBT_OK);
  CHECK(take(dist).find("scientific_debt") != std::string::npos);

  scidebt_model* m = nullptr;
  REQUIRE(scidebt_model_train(ds, 1.0, 0.5, 0, &m) == SCIDEBT_OK);
  CHECK(scidebt_model_train(ds, -1.0, 0.5, 0, &m) == SCIDEBT_E_INVALID_ARGUMENT);
  char* pred = nullptr;
  REQUIRE(scidebt_model_predict(m, "code_comment", "assume grid", &pred) == SCIDEBT_OK);
  CHECK(take(pred).find("\"predicted\":\"scientific_debt\"") != std::string::npos);
  CHECK(scidebt_model_predict(m, "tweet", "x", &pred) == SCIDEBT_E_PARSE);

  REQUIRE(scidebt_model_save(m, (dir / "m.model").c_str()) == SCIDEBT_OK);
  scidebt_model* back = nullptr;
  REQUIRE(scidebt_model_load((dir / "m.model").c_str(), &back) == SCIDEBT_OK);
  char* h1 = nullptr;
  char* h2 = nullptr;
  scidebt_model_hash(m, &h1);
  scidebt_model_hash(back, &h2);
  CHECK(take(h1) == take(h2));
  scidebt_model_free(back);
  scidebt_model_free(m);
  scidebt_dataset_free(ds);
  std::filesystem::remove_all(dir);
}

TEST_CASE("server handle without the network") {
  const auto dir = scratch("server");
  write(dir / "seed.jsonl", kSeedRows);
  write(dir / "pool.jsonl",
        R"({"instance_id":"u1","kind":"code_comment","text":"assume grid"}
)");
  write(dir / "config.json",
        R"({"paths":{"dataset":"ds.jsonl","seed_dataset":"seed.jsonl","unlabeled":"pool.jsonl","loop_state":"loop.json"},
            "loop":{"plans":[{"strategy":{"name":"stratified_misc","quota":5},"budget":5}]}})");
  scidebt_config* cfg = nullptr;
  REQUIRE(scidebt_config_load((dir / "config.json").c_str(), &cfg) == SCIDEBT_OK);
  char* summary = nullptr;
  REQUIRE(scidebt_run_select(cfg, 1, (dir / "batches.json").c_str(), &summary) == SCIDEBT_OK);
  take(summary);
  CHECK(scidebt_run_select(cfg, 1, (dir / "batches.json").c_str(), &summary) == SCIDEBT_E_CONFLICT);

  scidebt_server* srv = nullptr;
  REQUIRE(scidebt_server_create(cfg, &srv) == SCIDEBT_OK);
  int status = 0;
  char* body = nullptr;
  REQUIRE(scidebt_server_handle(srv, "GET", "/batches/next", R"({"annotator":"a"})", nullptr, &status, &body) ==
          SCIDEBT_OK);
  CHECK(status == 200);
  const std::string next = take(body);
  CHECK(next.find("\"u1\"") != std::string::npos);
  const auto bid_at = next.find("\"batch_id\":\"") + 12;
  const std::string bid = next.substr(bid_at, next.find('"', bid_at) - bid_at);

  const std::string labels = R"({"batch_id":")" + bid + R"(","labels":[{"instance_id":"u1","annotator":"a","label":"non_debt"}]})";
  REQUIRE(scidebt_server_handle(srv, "POST", "/labels", nullptr, labels.c_str(), &status, &body) == SCIDEBT_OK);
  CHECK(status == 200);
  take(body);
  REQUIRE(scidebt_server_handle(srv, "POST", "/labels", nullptr, labels.c_str(), &status, &body) == SCIDEBT_OK);
  CHECK(status == 409);
  take(body);

  int port = 0;
  REQUIRE(scidebt_server_start(srv, "127.0.0.1", 0, &port) == SCIDEBT_OK);
  CHECK(port > 0);
  CHECK(scidebt_server_stop(srv) == SCIDEBT_OK);
  scidebt_server_free(srv);
  scidebt_config_free(cfg);
  std::filesystem::remove_all(dir);
}

#include "fixture.hpp"

#include "oracles.hpp"
#include "scidebt/agreement.hpp"
#include "scidebt/dataset.hpp"

namespace fixture {

using namespace scidebt;

std::filesystem::path write_workspace(const std::filesystem::path& dir, std::uint64_t seed) {
  static const std::array<std::string, kClassCount> words = {"require", "refactor", "docs", "test", "assume", "fine"};
  std::filesystem::create_directories(dir);
  Rng rng(seed);

  Dataset ds;
  int n = 0;
  for (auto c : kAllClasses) {
    for (int i = 0; i < 8; ++i) {
      ds.instances.push_back(gen::labeled("seed" + std::to_string(n++), kAllKinds[i % 4],
                                          words[index_of(c)] + " " + words[rng.below(6)], c));
    }
  }
  save_dataset(ds, dir / "seed.jsonl");

  std::vector<json> pool;
  for (int i = 0; i < 300; ++i) {
    std::string t;
    for (std::size_t k = 0, len = 1 + rng.below(4); k < len; ++k) t += (t.empty() ? "" : " ") + words[rng.below(6)];
    pool.push_back(to_json(make_instance("u" + std::to_string(i), kAllKinds[rng.below(4)], t)));
  }
  write_jsonl(dir / "unlabeled.jsonl", pool);

  write_file(dir / "calibration.json",
             json::array({{{"source", "SATDAUG"}, {"a", {"s", "s", "n", "n"}}, {"b", {"s", "n", "n", "n"}}},
                          {{"source", "CASS"}, {"a", {"s", "n"}}, {"b", {"s", "n"}}}})
                 .dump());

  const json cfg = {
      {"model", {{"alpha", 1.0}, {"lambda", 0.5}}},
      {"loop",
       {{"seed", 3},
        {"plans",
         json::array({{{"strategy", {{"name", "low_confidence_borderline"}, {"tau_lo", 0.6}, {"margin_max", 0.1}}},
                       {"budget", 10}},
                      {{"strategy", {{"name", "stratified_misc"}, {"quota", 5}}}, {"budget", 30}}})}}},
      {"paths",
       {{"dataset", "state/dataset.jsonl"},
        {"seed_dataset", "seed.jsonl"},
        {"unlabeled", "unlabeled.jsonl"},
        {"loop_state", "state/loop.json"},
        {"rounds_log", "state/rounds.jsonl"},
        {"predictions", "state/predictions.jsonl"},
        {"prevalence", ""},
        {"survey", "state/survey.jsonl"},
        {"calibration", "calibration.json"}}},
      {"server", {{"host", "127.0.0.1"}, {"port", 0}}}};
  std::filesystem::create_directories(dir / "state");
  write_file(dir / "config.json", cfg.dump(2));
  return dir / "config.json";
}

json labels_for_batch(const json& batch, std::size_t n, const std::string& annotator) {
  json labels = json::array();
  const json& items = batch.at("items");
  for (std::size_t i = 0; i < n && i < items.size(); ++i) {
    const json& it = items[i];
    const std::string id = it.contains("instance") ? it["instance"]["instance_id"] : it["instance_id"];
    json row = {{"instance_id", id}, {"annotator", annotator}};
    if (i % 3 == 0) {
      row["label"] = "scientific_debt";
      row["indicator"] = "assumption";
    } else {
      row["label"] = i % 3 == 1 ? "test_debt" : "non_debt";
    }
    labels.push_back(row);
  }
  return json{{"batch_id", batch.at("batch_id")}, {"labels", labels}};
}

}  // namespace fixture

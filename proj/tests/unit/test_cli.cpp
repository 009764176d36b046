#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>

#include "fixture.hpp"
#include "oracles.hpp"
#include "scidebt/reporting.hpp"

using namespace scidebt;

namespace {

const std::string kSource = SCIDEBT_SOURCE_DIR;

// Runs the CLI with extra environment assignments; stdout goes to `out`.
int cli(const std::string& args, const std::filesystem::path& out, const std::string& env = "") {
  const std::string cmd = env + " '" + std::string(SCIDEBT_CLI_PATH) + "' " + args + " > '" + out.string() + "' 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("toy corpus through every stage") {
  gen::TempDir dir("cli-toy");
  const auto log = dir / "log.txt";
  const std::string cfg = "--config '" + kSource + "/data/toy/config.json'";
  const std::string state = "SCIDEBT_PATHS__DATASET='" + (dir / "ds.jsonl").string() + "' SCIDEBT_PATHS__LOOP_STATE='" +
                            (dir / "loop.json").string() + "' SCIDEBT_PATHS__ROUNDS_LOG='" +
                            (dir / "rounds.jsonl").string() + "' SCIDEBT_PATHS__PREDICTIONS='" +
                            (dir / "pred.jsonl").string() + "'";

  REQUIRE(cli("extract " + cfg + " --manifest '" + kSource + "/data/toy/manifest.json' --out '" +
                  (dir / "raw.jsonl").string() + "'",
              log, state) == 0);
  CHECK(read_jsonl(dir / "raw.jsonl").size() > 0);

  REQUIRE(cli("normalize " + cfg + " --seed 1 --in '" + (dir / "raw.jsonl").string() + "' --out '" +
                  (dir / "norm.jsonl").string() + "'",
              log, state) == 0);
  const auto norm = read_jsonl(dir / "norm.jsonl");
  CHECK(norm.size() > 0);
  CHECK(std::filesystem::exists(dir / "norm.jsonl.inspection.jsonl"));

  REQUIRE(cli("train " + cfg + " --out '" + (dir / "m.model").string() + "' --dataset '" + kSource +
                  "/data/synthetic/labeled.jsonl'",
              log, state) == 0);
  CHECK(read_file(log).find("model_hash") != std::string::npos);

  REQUIRE(cli("classify " + cfg + " --model '" + (dir / "m.model").string() + "' --in '" +
                  (dir / "norm.jsonl").string() + "' --out '" + (dir / "pred.jsonl").string() + "' --prevalence '" +
                  (dir / "prev.json").string() + "'",
              log, state) == 0);
  const auto report = prevalence_from_json(parse_json(read_file(dir / "prev.json"), "prev"));
  CHECK(report.total() == norm.size());
  CHECK(oracle::tally_predictions_file(dir / "pred.jsonl") == report);

  REQUIRE(cli("report " + cfg + " --kind prevalence --in '" + (dir / "pred.jsonl").string() + "' --out '" +
                  (dir / "prev.csv").string() + "'",
              log, state) == 0);
  CHECK(read_file(dir / "prev.csv").rfind("Artifact Source,", 0) == 0);

  REQUIRE(cli("kappa --in '" + kSource + "/data/synthetic/calibration.json' --out '" + (dir / "kappa.csv").string() +
                  "'",
              log) == 0);
  CHECK(read_file(dir / "kappa.csv").find("Cohen's Kappa") != std::string::npos);

  REQUIRE(cli("report " + cfg + " --kind sample-size --out '" + (dir / "ss.json").string() + "'", log, state) == 0);
  CHECK(read_file(dir / "ss.json").find("384") != std::string::npos);
}

TEST_CASE("select and ingest-labels") {
  gen::TempDir dir("cli-loop");
  const auto config = fixture::write_workspace(dir.path());
  const auto log = dir / "log.txt";
  const std::string cfg = "--config '" + config.string() + "'";
  REQUIRE(cli("select " + cfg + " --seed 3 --out '" + (dir / "b.json").string() + "'", log) == 0);
  CHECK(cli("select " + cfg + " --seed 3 --out '" + (dir / "b.json").string() + "'", log) ==
        static_cast<int>(ErrorCode::conflict));
  CHECK(read_file(log).find("conflict") != std::string::npos);

  const json batches = parse_json(read_file(dir / "b.json"), "b");
  json subs = json::array();
  for (const auto& b : batches["batches"]) subs.push_back(fixture::labels_for_batch(b, 2, "ann"));
  write_file(dir / "labels.json", subs.dump());
  REQUIRE(cli("ingest-labels " + cfg + " --labels '" + (dir / "labels.json").string() + "' --close-round", log) == 0);
  CHECK(load_dataset(dir / "state/dataset.jsonl").size() == 52);
  CHECK(read_jsonl(dir / "state/rounds.jsonl").size() == 1);
  // Re-submitting the same labels is rejected once the round has closed.
  CHECK(cli("ingest-labels " + cfg + " --labels '" + (dir / "labels.json").string() + "'", log) != 0);
}

TEST_CASE("usage and input errors exit nonzero") {
  gen::TempDir dir("cli-errors");
  const auto log = dir / "log.txt";
  CHECK(cli("", log) != 0);
  CHECK(cli("frobnicate", log) != 0);
  CHECK(cli("--version", log) == 0);
  CHECK(cli("normalize --in /nonexistent.jsonl --out '" + (dir / "x").string() + "'", log) ==
        static_cast<int>(ErrorCode::io));
  CHECK(cli("report --kind nonsense", log) == static_cast<int>(ErrorCode::invalid_argument));
}

}  // TEST_SUITE

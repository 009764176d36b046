#include <CLI11.hpp>

#include <pthread.h>
#include <signal.h>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>

#include "scidebt/scidebt.h"

namespace {

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool out_required) {
  cmd->add_option("--config", c.config, "JSON config file");
  cmd->add_option("--seed", c.seed, "Seed for sampling, folds and selection");
  auto* out = cmd->add_option("--out", c.out, "Output path");
  if (out_required) out->required();
}

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

int report_failure(scidebt_status st) {
  std::fprintf(stderr, "error: %s: %s\n", scidebt_status_name(st), scidebt_last_error());
  return static_cast<int>(st);
}

// Loads the config, runs `body` and prints its JSON summary.
int with_config(const Common& c, const std::function<scidebt_status(scidebt_config*, char**)>& body) {
  scidebt_config* cfg = nullptr;
  scidebt_status st = scidebt_config_load(opt(c.config), &cfg);
  if (st != SCIDEBT_OK) return report_failure(st);
  char* summary = nullptr;
  st = body(cfg, &summary);
  scidebt_config_free(cfg);
  if (st != SCIDEBT_OK) return report_failure(st);
  std::printf("%s\n", summary);
  scidebt_string_free(summary);
  return 0;
}

int serve(const Common& c, const std::string& host, int port) {
  scidebt_config* cfg = nullptr;
  scidebt_status st = scidebt_config_load(opt(c.config), &cfg);
  if (st != SCIDEBT_OK) return report_failure(st);
  scidebt_server* srv = nullptr;
  st = scidebt_server_create(cfg, &srv);
  scidebt_config_free(cfg);
  if (st != SCIDEBT_OK) return report_failure(st);

  // Block the stop signals before the server thread exists so only sigwait sees them.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  int bound = 0;
  st = scidebt_server_start(srv, opt(host), port, &bound);
  if (st != SCIDEBT_OK) {
    scidebt_server_free(srv);
    return report_failure(st);
  }
  std::printf("{\"listening\":%d}\n", bound);
  std::fflush(stdout);
  int sig = 0;
  sigwait(&set, &sig);
  scidebt_server_stop(srv);
  scidebt_server_free(srv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mining, labeling and reporting of self-admitted technical debt in scientific software"};
  app.require_subcommand(1);
  app.set_version_flag("--version", scidebt_version());

  Common c;
  std::string manifest, input, dataset, model, prevalence, labels, kind, host;
  bool grid = false, close_round = false;
  int port = -1;
  int rc = 0;

  auto* extract = app.add_subcommand("extract", "Extract raw artifacts from a repository manifest");
  add_common(extract, c, true);
  extract->add_option("--manifest", manifest, "Repository manifest (JSON)")->required();
  extract->callback([&] {
    rc = with_config(c, [&](scidebt_config* cfg, char** s) {
      return scidebt_run_extract(cfg, manifest.c_str(), c.out.c_str(), s);
    });
  });

  auto* normalize = app.add_subcommand("normalize", "Normalize, filter and deduplicate raw artifacts");
  add_common(normalize, c, true);
  normalize->add_option("--in", input, "Raw artifacts (JSONL)")->required();
  normalize->callback([&] {
    rc = with_config(c, [&](scidebt_config* cfg, char** s) {
      return scidebt_run_normalize(cfg, input.c_str(), c.out.c_str(), c.seed, s);
    });
  });

  auto* trainc = app.add_subcommand("train", "Train the multi-head classifier");
  add_common(trainc, c, true);
  trainc->add_option("--dataset", dataset, "Labeled dataset (JSONL); defaults to paths.dataset");
  trainc->add_flag("--grid", grid, "Pick alpha and lambda by stratified grid search");
  trainc->callback([&] {
    rc = with_config(c, [&](scidebt_config* cfg, char** s) {
      return scidebt_run_train(cfg, opt(dataset), c.out.c_str(), c.seed, grid ? 1 : 0, s);
    });
  });

  auto* classify = app.add_subcommand("classify", "Classify a normalized corpus and report prevalence");
  add_common(classify, c, true);
  classify->add_option("--model", model, "Model file")->required();
  classify->add_option("--in", input, "Normalized instances (JSONL); defaults to paths.unlabeled");
  classify->add_option("--prevalence", prevalence, "Prevalence report path (JSON)");
  classify->callback([&] {
    rc = with_config(c, [&](scidebt_config* cfg, char** s) {
      return scidebt_run_classify(cfg, model.c_str(), opt(input), c.out.c_str(), opt(prevalence), s);
    });
  });

  auto* select = app.add_subcommand("select", "Open an active-learning round and export its batches");
  add_common(select, c, true);
  select->callback([&] {
    rc = with_config(c, [&](scidebt_config* cfg, char** s) {
      return scidebt_run_select(cfg, c.seed, c.out.c_str(), s);
    });
  });

  auto* ingest = app.add_subcommand("ingest-labels", "Record annotations for exported batches");
  add_common(ingest, c, false);
  ingest->add_option("--labels", labels, "Label submission file (JSON)")->required();
  ingest->add_flag("--close-round", close_round, "Close the round after recording");
  ingest->callback([&] {
    rc = with_config(c, [&](scidebt_config* cfg, char** s) {
      return scidebt_run_ingest_labels(cfg, labels.c_str(), close_round ? 1 : 0, s);
    });
  });

  auto* kappa = app.add_subcommand("kappa", "Cohen's kappa calibration table");
  add_common(kappa, c, false);
  kappa->add_option("--in", input, "Calibration label pairs (JSON)")->required();
  kappa->callback([&] {
    char* s = nullptr;
    const scidebt_status st = scidebt_run_kappa(input.c_str(), opt(c.out), &s);
    if (st != SCIDEBT_OK) {
      rc = report_failure(st);
      return;
    }
    std::printf("%s\n", s);
    scidebt_string_free(s);
  });

  auto* report = app.add_subcommand("report", "Render a report table (CSV, or JSON for .json outputs)");
  add_common(report, c, false);
  report->add_option("--kind", kind, "distribution|exclusion|cv|grid|heads|prevalence|survey|keywords|sample-size")
      ->required();
  report->add_option("--in", input, "Input file; defaults to the configured path");
  report->callback([&] {
    rc = with_config(c, [&](scidebt_config* cfg, char** s) {
      return scidebt_run_report(cfg, kind.c_str(), opt(input), opt(c.out), c.seed, s);
    });
  });

  auto* servec = app.add_subcommand("serve", "Serve the annotation API");
  add_common(servec, c, false);
  servec->add_option("--host", host, "Listen address (default from config)");
  servec->add_option("--port", port, "Listen port (default from config; 0 picks one)");
  servec->callback([&] { rc = serve(c, host, port); });

  CLI11_PARSE(app, argc, argv);
  return rc;
}

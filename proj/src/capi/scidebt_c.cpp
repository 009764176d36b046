#include "scidebt/scidebt.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "scidebt/agreement.hpp"
#include "scidebt/classifier.hpp"
#include "scidebt/config.hpp"
#include "scidebt/dataset.hpp"
#include "scidebt/error.hpp"
#include "scidebt/normalize.hpp"
#include "scidebt/pipeline.hpp"
#include "scidebt/service.hpp"

using namespace scidebt;

struct scidebt_config {
  Config config;
  std::filesystem::path base_dir;
};
struct scidebt_dataset {
  Dataset dataset;
};
struct scidebt_model {
  NaiveBayesModel model;
};
struct scidebt_server {
  std::unique_ptr<ApiService> service;
  std::string host;
  int port = 0;
};

namespace {

thread_local std::string g_last_error;

scidebt_status status_of(ErrorCode code) {
  return static_cast<scidebt_status>(static_cast<int>(code));
}

template <typename F>
scidebt_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return SCIDEBT_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const json::exception& e) {
    g_last_error = e.what();
    return SCIDEBT_E_PARSE;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SCIDEBT_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SCIDEBT_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return SCIDEBT_E_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  if (!p) fail(ErrorCode::invalid_argument, std::string(what) + " must not be NULL");
}

std::filesystem::path opt_path(const char* p) { return p ? std::filesystem::path(p) : std::filesystem::path(); }

void emit(char** out, const json& j) {
  need(out, "output pointer");
  *out = dup_string(j.dump());
}

}  // namespace

extern "C" {

const char* scidebt_version(void) { return "0.1.0"; }

const char* scidebt_last_error(void) { return g_last_error.c_str(); }

const char* scidebt_status_name(scidebt_status status) {
  switch (status) {
    case SCIDEBT_OK: return "ok";
    case SCIDEBT_E_INVALID_ARGUMENT: return "invalid_argument";
    case SCIDEBT_E_IO: return "io";
    case SCIDEBT_E_PARSE: return "parse";
    case SCIDEBT_E_UNSUPPORTED: return "unsupported";
    case SCIDEBT_E_CONFLICT: return "conflict";
    case SCIDEBT_E_NOT_FOUND: return "not_found";
    case SCIDEBT_E_INTERNAL: return "internal";
  }
  return "unknown";
}

void scidebt_string_free(char* s) { std::free(s); }

scidebt_status scidebt_config_load(const char* path, scidebt_config** out) {
  return guarded([&] {
    need(out, "out");
    auto cfg = std::make_unique<scidebt_config>();
    cfg->config = load_config(opt_path(path));
    if (path) cfg->base_dir = std::filesystem::path(path).parent_path();
    *out = cfg.release();
  });
}

scidebt_status scidebt_config_set(scidebt_config* cfg, const char* section, const char* key,
                                  const char* value_json) {
  return guarded([&] {
    need(cfg, "config");
    need(section, "section");
    need(key, "key");
    need(value_json, "value");
    json doc = cfg->config.source;
    json v = json::parse(value_json, nullptr, false);
    doc[section][key] = v.is_discarded() ? json(value_json) : v;
    cfg->config = config_from_json(doc, cfg->base_dir);
  });
}

scidebt_status scidebt_config_to_json(const scidebt_config* cfg, char** out_json) {
  return guarded([&] {
    need(cfg, "config");
    emit(out_json, cfg->config.source);
  });
}

void scidebt_config_free(scidebt_config* cfg) { delete cfg; }

scidebt_status scidebt_dataset_open(const char* path, scidebt_dataset** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    auto ds = std::make_unique<scidebt_dataset>();
    ds->dataset = load_dataset(path);
    *out = ds.release();
  });
}

size_t scidebt_dataset_size(const scidebt_dataset* ds) { return ds ? ds->dataset.size() : 0; }

scidebt_status scidebt_dataset_distribution(const scidebt_dataset* ds, char** out_json) {
  return guarded([&] {
    need(ds, "dataset");
    emit(out_json, to_json(distribution(ds->dataset)));
  });
}

void scidebt_dataset_free(scidebt_dataset* ds) { delete ds; }

scidebt_status scidebt_model_train(const scidebt_dataset* ds, double alpha, double lambda, int single_head,
                                   scidebt_model** out) {
  return guarded([&] {
    need(ds, "dataset");
    need(out, "out");
    TrainOptions options;
    options.alpha = alpha;
    options.lambda = lambda;
    options.single_head = single_head != 0;
    *out = new scidebt_model{train(ds->dataset, options)};
  });
}

scidebt_status scidebt_model_load(const char* path, scidebt_model** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new scidebt_model{NaiveBayesModel::load(path)};
  });
}

scidebt_status scidebt_model_save(const scidebt_model* model, const char* path) {
  return guarded([&] {
    need(model, "model");
    need(path, "path");
    model->model.save(path);
  });
}

scidebt_status scidebt_model_hash(const scidebt_model* model, char** out_hex) {
  return guarded([&] {
    need(model, "model");
    need(out_hex, "out");
    *out_hex = dup_string(model->model.hash());
  });
}

scidebt_status scidebt_model_predict(const scidebt_model* model, const char* kind, const char* text,
                                     char** out_json) {
  return guarded([&] {
    need(model, "model");
    need(kind, "kind");
    need(text, "text");
    const NormalizedInstance inst = make_instance("", parse_kind(kind), text);
    emit(out_json, to_json(model->model.predict(inst)));
  });
}

void scidebt_model_free(scidebt_model* model) { delete model; }

scidebt_status scidebt_normalize(const scidebt_config* cfg, const char* body, const char* language,
                                 char** out_text) {
  return guarded([&] {
    need(body, "body");
    need(out_text, "out");
    const SyntaxRegistry defaults = SyntaxRegistry::defaults();
    const SyntaxRegistry& registry = cfg ? cfg->config.syntax : defaults;
    const CommentSyntax syntax =
        language && *language ? registry.require(language) : CommentSyntax::empty();
    *out_text = dup_string(normalize_string(body, syntax));
  });
}

scidebt_status scidebt_kappa(const char* const* labels_a, const char* const* labels_b, size_t n,
                             double* out_kappa) {
  return guarded([&] {
    need(out_kappa, "out");
    if (n) {
      need(labels_a, "labels_a");
      need(labels_b, "labels_b");
    }
    std::vector<std::string> a, b;
    for (size_t i = 0; i < n; ++i) {
      need(labels_a[i], "label");
      need(labels_b[i], "label");
      a.emplace_back(labels_a[i]);
      b.emplace_back(labels_b[i]);
    }
    *out_kappa = cohens_kappa(a, b).kappa;
  });
}

scidebt_status scidebt_sample_size(double confidence, double margin, size_t* out_n) {
  return guarded([&] {
    need(out_n, "out");
    *out_n = sample_size(confidence, margin);
  });
}

scidebt_status scidebt_run_extract(const scidebt_config* cfg, const char* manifest, const char* out,
                                   char** out_summary) {
  return guarded([&] {
    need(cfg, "config");
    need(manifest, "manifest");
    need(out, "out");
    emit(out_summary, run_extract(cfg->config, manifest, out));
  });
}

scidebt_status scidebt_run_normalize(const scidebt_config* cfg, const char* raw, const char* out, uint64_t seed,
                                     char** out_summary) {
  return guarded([&] {
    need(cfg, "config");
    need(raw, "raw");
    need(out, "out");
    emit(out_summary, run_normalize(cfg->config, raw, out, seed));
  });
}

scidebt_status scidebt_run_train(const scidebt_config* cfg, const char* dataset, const char* model_out,
                                 uint64_t seed, int grid, char** out_summary) {
  return guarded([&] {
    need(cfg, "config");
    need(model_out, "model_out");
    const auto ds = dataset ? std::filesystem::path(dataset) : cfg->config.paths.dataset;
    if (ds.empty()) fail(ErrorCode::invalid_argument, "no dataset given or configured");
    emit(out_summary, run_train(cfg->config, ds, model_out, seed, grid != 0));
  });
}

scidebt_status scidebt_run_classify(const scidebt_config* cfg, const char* model, const char* instances,
                                    const char* out, const char* prevalence_out, char** out_summary) {
  return guarded([&] {
    need(cfg, "config");
    need(model, "model");
    need(out, "out");
    const auto in = instances ? std::filesystem::path(instances) : cfg->config.paths.unlabeled;
    if (in.empty()) fail(ErrorCode::invalid_argument, "no instances given or configured");
    emit(out_summary, run_classify(cfg->config, model, in, out, opt_path(prevalence_out)));
  });
}

scidebt_status scidebt_run_select(const scidebt_config* cfg, uint64_t seed, const char* out, char** out_summary) {
  return guarded([&] {
    need(cfg, "config");
    need(out, "out");
    emit(out_summary, run_select(cfg->config, seed, out));
  });
}

scidebt_status scidebt_run_ingest_labels(const scidebt_config* cfg, const char* labels, int close_round,
                                         char** out_summary) {
  return guarded([&] {
    need(cfg, "config");
    need(labels, "labels");
    emit(out_summary, run_ingest_labels(cfg->config, labels, close_round != 0));
  });
}

scidebt_status scidebt_run_kappa(const char* calibration, const char* out, char** out_summary) {
  return guarded([&] {
    need(calibration, "calibration");
    emit(out_summary, run_kappa(calibration, opt_path(out)));
  });
}

scidebt_status scidebt_run_report(const scidebt_config* cfg, const char* kind, const char* input, const char* out,
                                  uint64_t seed, char** out_summary) {
  return guarded([&] {
    need(cfg, "config");
    need(kind, "kind");
    emit(out_summary, run_report(cfg->config, kind, opt_path(input), opt_path(out), seed));
  });
}

scidebt_status scidebt_server_create(const scidebt_config* cfg, scidebt_server** out) {
  return guarded([&] {
    need(cfg, "config");
    need(out, "out");
    auto srv = std::make_unique<scidebt_server>();
    srv->service = std::make_unique<ApiService>(cfg->config);
    srv->host = cfg->config.host;
    srv->port = cfg->config.port;
    *out = srv.release();
  });
}

scidebt_status scidebt_server_start(scidebt_server* srv, const char* host, int port, int* out_port) {
  return guarded([&] {
    need(srv, "server");
    const int bound = srv->service->start(host ? host : srv->host, port < 0 ? srv->port : port);
    if (out_port) *out_port = bound;
  });
}

scidebt_status scidebt_server_run(scidebt_server* srv, const char* host, int port) {
  return guarded([&] {
    need(srv, "server");
    srv->service->run(host ? host : srv->host, port < 0 ? srv->port : port);
  });
}

scidebt_status scidebt_server_stop(scidebt_server* srv) {
  return guarded([&] {
    need(srv, "server");
    srv->service->stop();
  });
}

scidebt_status scidebt_server_handle(scidebt_server* srv, const char* method, const char* path,
                                     const char* query_json, const char* body, int* out_status, char** out_body) {
  return guarded([&] {
    need(srv, "server");
    need(method, "method");
    need(path, "path");
    need(out_status, "out_status");
    ApiRequest req{method, path, {}, body ? body : ""};
    if (query_json) {
      const json q = parse_json(query_json, "query");
      if (!q.is_object()) fail(ErrorCode::invalid_argument, "query must be a JSON object");
      for (const auto& [k, v] : q.items()) {
        req.query[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
    }
    const ApiResponse res = srv->service->handle(req);
    *out_status = res.status;
    emit(out_body, res.body);
  });
}

void scidebt_server_free(scidebt_server* srv) { delete srv; }

}  // extern "C"

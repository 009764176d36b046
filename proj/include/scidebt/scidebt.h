/* C interface to the scidebt core. All handles are opaque; every call returns
 * a status and leaves a message for scidebt_last_error() on failure. Strings
 * returned through char** are owned by the caller and released with
 * scidebt_string_free(). */
#ifndef SCIDEBT_H
#define SCIDEBT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define SCIDEBT_API __attribute__((visibility("default")))
#else
#define SCIDEBT_API
#endif

typedef enum scidebt_status {
  SCIDEBT_OK = 0,
  SCIDEBT_E_INVALID_ARGUMENT = 1,
  SCIDEBT_E_IO = 2,
  SCIDEBT_E_PARSE = 3,
  SCIDEBT_E_UNSUPPORTED = 4,
  SCIDEBT_E_CONFLICT = 5,
  SCIDEBT_E_NOT_FOUND = 6,
  SCIDEBT_E_INTERNAL = 99
} scidebt_status;

typedef struct scidebt_config scidebt_config;
typedef struct scidebt_dataset scidebt_dataset;
typedef struct scidebt_model scidebt_model;
typedef struct scidebt_server scidebt_server;

SCIDEBT_API const char* scidebt_version(void);
/* Message of the last failed call on this thread; "" when none. */
SCIDEBT_API const char* scidebt_last_error(void);
SCIDEBT_API const char* scidebt_status_name(scidebt_status status);
SCIDEBT_API void scidebt_string_free(char* s);

/* Config: defaults, then the file (path may be NULL), then SCIDEBT_* env. */
SCIDEBT_API scidebt_status scidebt_config_load(const char* path, scidebt_config** out);
/* Sets config[section][key] from a JSON value (a bare word is a string). */
SCIDEBT_API scidebt_status scidebt_config_set(scidebt_config* cfg, const char* section, const char* key,
                                              const char* value_json);
SCIDEBT_API scidebt_status scidebt_config_to_json(const scidebt_config* cfg, char** out_json);
SCIDEBT_API void scidebt_config_free(scidebt_config* cfg);

SCIDEBT_API scidebt_status scidebt_dataset_open(const char* path, scidebt_dataset** out);
SCIDEBT_API size_t scidebt_dataset_size(const scidebt_dataset* ds);
SCIDEBT_API scidebt_status scidebt_dataset_distribution(const scidebt_dataset* ds, char** out_json);
SCIDEBT_API void scidebt_dataset_free(scidebt_dataset* ds);

SCIDEBT_API scidebt_status scidebt_model_train(const scidebt_dataset* ds, double alpha, double lambda,
                                               int single_head, scidebt_model** out);
SCIDEBT_API scidebt_status scidebt_model_load(const char* path, scidebt_model** out);
SCIDEBT_API scidebt_status scidebt_model_save(const scidebt_model* model, const char* path);
SCIDEBT_API scidebt_status scidebt_model_hash(const scidebt_model* model, char** out_hex);
/* kind: code_comment | commit_message | issue_section | pull_request_section.
 * text must already be normalized. Output is a prediction JSON object. */
SCIDEBT_API scidebt_status scidebt_model_predict(const scidebt_model* model, const char* kind,
                                                 const char* text, char** out_json);
SCIDEBT_API void scidebt_model_free(scidebt_model* model);

/* language NULL or "" means a non-comment artifact (no delimiters). */
SCIDEBT_API scidebt_status scidebt_normalize(const scidebt_config* cfg, const char* body,
                                             const char* language, char** out_text);
SCIDEBT_API scidebt_status scidebt_kappa(const char* const* labels_a, const char* const* labels_b, size_t n,
                                         double* out_kappa);
SCIDEBT_API scidebt_status scidebt_sample_size(double confidence, double margin, size_t* out_n);

/* Command drivers; each writes its outputs and returns a JSON summary. */
SCIDEBT_API scidebt_status scidebt_run_extract(const scidebt_config* cfg, const char* manifest, const char* out,
                                               char** out_summary);
SCIDEBT_API scidebt_status scidebt_run_normalize(const scidebt_config* cfg, const char* raw, const char* out,
                                                 uint64_t seed, char** out_summary);
SCIDEBT_API scidebt_status scidebt_run_train(const scidebt_config* cfg, const char* dataset, const char* model_out,
                                             uint64_t seed, int grid, char** out_summary);
SCIDEBT_API scidebt_status scidebt_run_classify(const scidebt_config* cfg, const char* model, const char* instances,
                                                const char* out, const char* prevalence_out, char** out_summary);
SCIDEBT_API scidebt_status scidebt_run_select(const scidebt_config* cfg, uint64_t seed, const char* out,
                                              char** out_summary);
SCIDEBT_API scidebt_status scidebt_run_ingest_labels(const scidebt_config* cfg, const char* labels, int close_round,
                                                     char** out_summary);
SCIDEBT_API scidebt_status scidebt_run_kappa(const char* calibration, const char* out, char** out_summary);
SCIDEBT_API scidebt_status scidebt_run_report(const scidebt_config* cfg, const char* kind, const char* input,
                                              const char* out, uint64_t seed, char** out_summary);

SCIDEBT_API scidebt_status scidebt_server_create(const scidebt_config* cfg, scidebt_server** out);
/* Serves on a background thread; port 0 picks a free port. A NULL host or a
 * negative port falls back to the configured server address. */
SCIDEBT_API scidebt_status scidebt_server_start(scidebt_server* srv, const char* host, int port, int* out_port);
/* Blocks until scidebt_server_stop() is called from another thread. */
SCIDEBT_API scidebt_status scidebt_server_run(scidebt_server* srv, const char* host, int port);
SCIDEBT_API scidebt_status scidebt_server_stop(scidebt_server* srv);
/* Dispatches one request without the network; query is a JSON object or NULL. */
SCIDEBT_API scidebt_status scidebt_server_handle(scidebt_server* srv, const char* method, const char* path,
                                                 const char* query_json, const char* body, int* out_status,
                                                 char** out_body);
SCIDEBT_API void scidebt_server_free(scidebt_server* srv);

#ifdef __cplusplus
}
#endif

#endif

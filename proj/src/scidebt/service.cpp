#include "scidebt/service.hpp"

#include <httplib.h>

#include <filesystem>
#include <mutex>
#include <thread>

#include "scidebt/error.hpp"
#include "scidebt/reporting.hpp"

namespace scidebt {

struct ApiService::Transport {
  httplib::Server server;
  std::thread thread;
};

namespace {

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
    case ErrorCode::parse: return 400;
    case ErrorCode::conflict: return 409;
    case ErrorCode::not_found: return 404;
    default: return 500;
  }
}

ApiResponse error_response(int status, const std::string& message, json extra = json::object()) {
  extra["error"] = message;
  return {status, extra};
}

}  // namespace

ApiService::ApiService(Config config) : config_(std::move(config)) {
  if (config_.paths.dataset.empty()) fail(ErrorCode::invalid_argument, "service needs paths.dataset");
  if (config_.paths.loop_state.empty()) fail(ErrorCode::invalid_argument, "service needs paths.loop_state");
  writer_ = std::make_unique<DatasetWriter>(open_dataset_writer(config_));
  state_ = load_loop_state(config_.paths.loop_state);
  if (!config_.paths.survey.empty() && std::filesystem::exists(config_.paths.survey)) {
    for (const auto& row : read_jsonl(config_.paths.survey)) survey_.push_back(survey_response_from_json(row));
  }
}

ApiService::~ApiService() { stop(); }

ApiResponse ApiService::handle(const ApiRequest& r) {
  try {
    if (r.method == "GET") {
      if (r.path == "/rounds/current") return rounds_current();
      if (r.path == "/batches/next") return batches_next(r);
      if (r.path == "/stats/distribution") return stats_distribution();
      if (r.path == "/stats/prevalence") return stats_prevalence();
      if (r.path == "/survey/aggregate") return survey_summary();
      if (r.path == "/calibration") return calibration();
    } else if (r.method == "POST") {
      if (r.path == "/labels") return post_labels(r);
      if (r.path == "/survey") return post_survey(r);
      if (r.path == "/rounds/close") return rounds_close();
    }
    return error_response(404, "no route for " + r.method + " " + r.path);
  } catch (const Error& e) {
    return error_response(status_for(e.code()), e.what());
  } catch (const json::exception& e) {
    return error_response(400, e.what());
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }
}

ApiResponse ApiService::rounds_current() {
  std::shared_lock lock(mutex_);
  json batches = json::array();
  for (const auto& b : state_.pending_batches) {
    batches.push_back(json{{"batch_id", b.batch_id},
                           {"strategy", to_json(b.strategy)},
                           {"budget", b.budget},
                           {"size", b.items.size()},
                           {"labeled", b.labeled.size()},
                           {"skipped", b.skipped.size()}});
  }
  json history = json::array();
  for (const auto& h : state_.history) history.push_back(to_json(h));
  return {200, json{{"round", state_.round},
                    {"open", state_.round_open()},
                    {"model_hash", state_.model_hash},
                    {"dataset_ref", state_.dataset_ref},
                    {"alpha", state_.alpha},
                    {"lambda", state_.lambda},
                    {"dataset_size", writer_->snapshot().size()},
                    {"batches", batches},
                    {"history", history}}};
}

ApiResponse ApiService::batches_next(const ApiRequest& r) {
  const auto it = r.query.find("annotator");
  if (it == r.query.end() || it->second.empty()) {
    return error_response(400, "query parameter 'annotator' is required");
  }
  std::shared_lock lock(mutex_);
  for (const auto& b : state_.pending_batches) {
    json items = json::array();
    for (const auto& item : b.items) {
      if (b.is_resolved(item.instance.instance_id)) continue;
      items.push_back(json{{"instance", to_json(item.instance)}, {"prediction", to_json(item.prediction)}});
    }
    if (items.empty()) continue;
    return {200, json{{"round", state_.round},
                      {"batch_id", b.batch_id},
                      {"strategy", to_json(b.strategy)},
                      {"annotator", it->second},
                      {"exhausted", false},
                      {"items", items}}};
  }
  return {200, json{{"round", state_.round},
                    {"batch_id", nullptr},
                    {"annotator", it->second},
                    {"exhausted", true},
                    {"items", json::array()}}};
}

ApiResponse ApiService::post_labels(const ApiRequest& r) {
  const json body = parse_json(r.body, "POST /labels");
  const std::string batch_id = require_string(body, "batch_id", "POST /labels");
  const json& rows = require_field(body, "labels", "POST /labels");
  if (!rows.is_array()) return error_response(400, "POST /labels: 'labels' must be an array");
  std::vector<LabelSubmission> labels;
  for (const auto& row : rows) labels.push_back(label_submission_from_json(row));
  const bool close_batch = body.value("close_batch", false);

  std::unique_lock lock(mutex_);
  const SelectionBatch* batch = state_.find_batch(batch_id);
  if (!batch) return error_response(404, "unknown batch '" + batch_id + "'", {{"batch_id", batch_id}});
  for (const auto& l : labels) {
    if (!batch->find(l.instance_id)) {
      return error_response(400, "instance '" + l.instance_id + "' is not part of batch '" + batch_id + "'",
                            {{"instance_id", l.instance_id}});
    }
    if (batch->is_resolved(l.instance_id)) {
      return error_response(409, "instance '" + l.instance_id + "' is already labeled",
                            {{"instance_id", l.instance_id}});
    }
  }
  const AnnotationResult result = submit_labels(state_, *writer_, batch_id, labels, close_batch);
  persist_state();
  json accepted = json::array();
  for (const auto& li : result.delta) accepted.push_back(li.instance.instance_id);
  return {200, json{{"batch_id", batch_id},
                    {"round", state_.round},
                    {"accepted", accepted},
                    {"skipped", result.skipped},
                    {"dataset_size", writer_->snapshot().size()}}};
}

ApiResponse ApiService::rounds_close() {
  std::unique_lock lock(mutex_);
  const RoundRecord rec = close_round(state_, *writer_);
  if (!config_.paths.rounds_log.empty()) {
    const json row = to_json(rec);
    append_jsonl(config_.paths.rounds_log, std::span<const json>(&row, 1));
  }
  persist_state();
  return {200, to_json(rec)};
}

ApiResponse ApiService::stats_distribution() {
  std::shared_lock lock(mutex_);
  return {200, to_json(distribution(writer_->snapshot()))};
}

ApiResponse ApiService::stats_prevalence() {
  PrevalenceReport report;
  json body;
  if (!config_.paths.prevalence.empty() && std::filesystem::exists(config_.paths.prevalence)) {
    report = prevalence_from_json(parse_json(read_file(config_.paths.prevalence), "prevalence"));
  } else if (!config_.paths.predictions.empty() && std::filesystem::exists(config_.paths.predictions)) {
    report = recount_predictions(config_.paths.predictions);
  }
  body = to_json(report);
  body["csv"] = render_prevalence_csv(report);
  return {200, body};
}

ApiResponse ApiService::post_survey(const ApiRequest& r) {
  const SurveyResponse resp = survey_response_from_json(parse_json(r.body, "POST /survey"));
  std::unique_lock lock(mutex_);
  if (!config_.paths.survey.empty()) {
    const json row = to_json(resp);
    append_jsonl(config_.paths.survey, std::span<const json>(&row, 1));
  }
  survey_.push_back(resp);
  return {200, to_json(survey_aggregate(survey_))};
}

ApiResponse ApiService::survey_summary() {
  std::shared_lock lock(mutex_);
  if (survey_.empty()) return {200, json{{"responses", 0}}};
  return {200, to_json(survey_aggregate(survey_))};
}

ApiResponse ApiService::calibration() {
  if (config_.paths.calibration.empty() || !std::filesystem::exists(config_.paths.calibration)) {
    return error_response(404, "no calibration data configured");
  }
  const auto sources =
      calibration_sources_from_json(parse_json(read_file(config_.paths.calibration), "calibration"));
  const auto report = calibration_report(sources);
  json body = to_json(report);
  body["csv"] = render_calibration_csv(report);
  return {200, body};
}

void ApiService::persist_state() { save_loop_state(state_, config_.paths.loop_state); }

namespace {

void install_routes(httplib::Server& server, ApiService& service) {
  auto bridge = [&service](const httplib::Request& req, httplib::Response& res) {
    ApiRequest r{req.method, req.path, {}, req.body};
    for (const auto& [k, v] : req.params) r.query.emplace(k, v);
    const ApiResponse out = service.handle(r);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  };
  for (const char* p : {"/rounds/current", "/batches/next", "/stats/distribution", "/stats/prevalence",
                        "/survey/aggregate", "/calibration"}) {
    server.Get(p, bridge);
  }
  for (const char* p : {"/labels", "/survey", "/rounds/close"}) server.Post(p, bridge);
}

}  // namespace

int ApiService::start(const std::string& host, int port) {
  const int bound = bind(host, port);
  transport_->thread = std::thread([t = transport_.get()] { t->server.listen_after_bind(); });
  transport_->server.wait_until_ready();
  return bound;
}

int ApiService::bind(const std::string& host, int port) {
  if (transport_) fail(ErrorCode::conflict, "service already running");
  transport_ = std::make_unique<Transport>();
  install_routes(transport_->server, *this);
  int bound = port;
  if (port == 0) {
    bound = transport_->server.bind_to_any_port(host);
  } else if (!transport_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    transport_.reset();
    fail(ErrorCode::io, "cannot bind " + host + ":" + std::to_string(port));
  }
  return bound;
}

void ApiService::run(const std::string& host, int port) {
  bind(host, port);
  transport_->server.listen_after_bind();
  transport_.reset();
}

void ApiService::stop() {
  if (!transport_) return;
  // In run() mode the serving thread resets transport_ once listen returns,
  // so nothing here may touch it after server.stop().
  const bool owns_thread = transport_->thread.joinable();
  transport_->server.stop();
  if (owns_thread) {
    transport_->thread.join();
    transport_.reset();
  }
}

}  // namespace scidebt

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "scidebt/active_loop.hpp"
#include "scidebt/agreement.hpp"
#include "scidebt/config.hpp"
#include "scidebt/dataset.hpp"

namespace scidebt {

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  json body;
};

// Backend for the annotation UI. Reads share a lock; every write goes
// through the loop's submit path and the dataset's single writer.
class ApiService {
 public:
  explicit ApiService(Config config);
  ~ApiService();
  ApiService(const ApiService&) = delete;
  ApiService& operator=(const ApiService&) = delete;

  ApiResponse handle(const ApiRequest& request);

  // Binds host:port (port 0 picks a free one) and serves on a background
  // thread. Returns the bound port.
  int start(const std::string& host, int port);
  // Blocks until stop() is called from another thread or a signal.
  void run(const std::string& host, int port);
  void stop();

 private:
  ApiResponse rounds_current();
  ApiResponse batches_next(const ApiRequest& r);
  ApiResponse post_labels(const ApiRequest& r);
  ApiResponse rounds_close();
  ApiResponse stats_distribution();
  ApiResponse stats_prevalence();
  ApiResponse post_survey(const ApiRequest& r);
  ApiResponse survey_summary();
  ApiResponse calibration();

  void persist_state();
  int bind(const std::string& host, int port);

  struct Transport;

  Config config_;
  std::shared_mutex mutex_;
  std::unique_ptr<DatasetWriter> writer_;
  LoopState state_;
  std::vector<SurveyResponse> survey_;
  std::unique_ptr<Transport> transport_;
};

}  // namespace scidebt

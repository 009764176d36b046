#include "scidebt/reporting.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <thread>

#include "scidebt/error.hpp"

namespace scidebt {

std::size_t PrevalenceReport::kind_total(ArtifactKind k) const {
  std::size_t n = 0;
  for (auto v : counts[index_of(k)]) n += v;
  return n;
}

std::size_t PrevalenceReport::total() const {
  std::size_t n = 0;
  for (auto k : kAllKinds) n += kind_total(k);
  return n;
}

double PrevalenceReport::percentage(ArtifactKind k, SatdClass c) const {
  const std::size_t t = kind_total(k);
  if (t == 0) return 0.0;
  return 100.0 * static_cast<double>(counts[index_of(k)][index_of(c)]) / static_cast<double>(t);
}

std::uint64_t PrevalenceReport::percentage_hundredths(ArtifactKind k, SatdClass c) const {
  const std::uint64_t t = kind_total(k);
  if (t == 0) return 0;
  const std::uint64_t n = counts[index_of(k)][index_of(c)];
  return (n * 20000 + t) / (2 * t);
}

std::string format_count(std::size_t n) {
  std::string digits = std::to_string(n);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i != 0 && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return out;
}

std::string render_prevalence_csv(const PrevalenceReport& report) {
  std::ostringstream out;
  out << "Artifact Source,Code/Design,Documentation,Requirement,Test,Scientific,Non-Debt\n";
  for (auto k : kAllKinds) {
    out << display_name(k);
    for (auto c : kPrevalenceColumns) {
      const std::uint64_t h = report.percentage_hundredths(k, c);
      std::string pct = std::to_string(h / 100) + "." + (h % 100 < 10 ? "0" : "") +
                        std::to_string(h % 100);
      out << ',' << csv_cell(format_count(report.counts[index_of(k)][index_of(c)]) + " (" + pct + "%)");
    }
    out << '\n';
  }
  return out.str();
}

json to_json(const PrevalenceReport& report) {
  json kinds = json::object();
  for (auto k : kAllKinds) {
    json classes = json::object();
    for (auto c : kAllClasses) {
      classes[std::string(to_string(c))] =
          json{{"count", report.counts[index_of(k)][index_of(c)]},
               {"percentage", report.percentage(k, c)}};
    }
    kinds[std::string(to_string(k))] = json{{"total", report.kind_total(k)}, {"classes", classes}};
  }
  return json{{"kinds", kinds}, {"total", report.total()}};
}

PrevalenceReport prevalence_from_json(const json& j) {
  constexpr std::string_view ctx = "prevalence report";
  PrevalenceReport r;
  const json& kinds = require_field(j, "kinds", ctx);
  for (const auto& [kname, kv] : kinds.items()) {
    const auto k = parse_kind(kname);
    for (const auto& [cname, cv] : require_field(kv, "classes", ctx).items()) {
      r.counts[index_of(k)][index_of(parse_class(cname))] =
          static_cast<std::size_t>(require_int(cv, "count", ctx));
    }
  }
  return r;
}

json to_json(const PredictionRecord& r) {
  json j = to_json(r.prediction);
  j["kind"] = to_string(r.kind);
  return j;
}

PredictionRecord prediction_record_from_json(const json& j) {
  return {parse_kind(require_string(j, "kind", "prediction record")), prediction_from_json(j)};
}

namespace {

std::size_t worker_count(const ClassifyOptions& o) {
  if (o.workers) return o.workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Parallel over a chunk; results land in input order.
std::vector<PredictionRecord> predict_chunk(const Scorer& model,
                                            std::span<const NormalizedInstance> chunk,
                                            std::size_t workers) {
  std::vector<PredictionRecord> out(chunk.size());
  workers = std::min(workers, chunk.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < chunk.size(); ++i) out[i] = {chunk[i].kind, model.predict(chunk[i])};
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < chunk.size(); i += workers) {
          out[i] = {chunk[i].kind, model.predict(chunk[i])};
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

class Progress {
 public:
  explicit Progress(const ClassifyOptions& o) : options_(o) {}

  void consume(const std::vector<PredictionRecord>& records) {
    for (const auto& r : records) {
      report.add(r.kind, r.prediction.predicted);
      ++processed_;
      if (options_.on_checkpoint && options_.checkpoint_every &&
          processed_ % options_.checkpoint_every == 0) {
        options_.on_checkpoint(processed_, report);
      }
    }
  }

  PrevalenceReport report;

 private:
  const ClassifyOptions& options_;
  std::size_t processed_ = 0;
};

}  // namespace

PrevalenceReport classify_corpus(const Scorer& model, std::span<const NormalizedInstance> instances,
                                 const std::function<void(const PredictionRecord&)>& sink,
                                 const ClassifyOptions& options) {
  const std::size_t chunk = std::max<std::size_t>(1, options.chunk_size);
  const std::size_t workers = worker_count(options);
  Progress progress(options);
  for (std::size_t start = 0; start < instances.size(); start += chunk) {
    auto records = predict_chunk(model, instances.subspan(start, std::min(chunk, instances.size() - start)),
                                 workers);
    if (sink) {
      for (const auto& r : records) sink(r);
    }
    progress.consume(records);
  }
  return progress.report;
}

PrevalenceReport classify_corpus_file(const Scorer& model, const std::filesystem::path& in,
                                      const std::filesystem::path& out,
                                      const ClassifyOptions& options) {
  std::ifstream input(in, std::ios::binary);
  if (!input) fail(ErrorCode::io, "cannot open " + in.string());
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  std::ofstream output(out, std::ios::binary | std::ios::trunc);
  if (!output) fail(ErrorCode::io, "cannot write " + out.string());

  const std::size_t chunk = std::max<std::size_t>(1, options.chunk_size);
  const std::size_t workers = worker_count(options);
  Progress progress(options);
  std::vector<NormalizedInstance> buffer;
  std::string line;
  std::size_t lineno = 0;
  auto flush = [&] {
    auto records = predict_chunk(model, buffer, workers);
    for (const auto& r : records) output << to_json(r).dump() << '\n';
    progress.consume(records);
    buffer.clear();
  };
  while (std::getline(input, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    buffer.push_back(normalized_instance_from_json(
        parse_json(line, in.string() + ":" + std::to_string(lineno))));
    if (buffer.size() >= chunk) flush();
  }
  if (!buffer.empty()) flush();
  if (!output) fail(ErrorCode::io, "failed writing " + out.string());
  return progress.report;
}

PrevalenceReport recount_predictions(const std::filesystem::path& predictions) {
  PrevalenceReport r;
  for_each_line(predictions, [&](std::string_view line, std::size_t n) {
    const json j = parse_json(line, predictions.string() + ":" + std::to_string(n));
    r.add(parse_kind(require_string(j, "kind", "prediction record")),
          parse_class(require_string(j, "predicted", "prediction record")));
  });
  return r;
}

}  // namespace scidebt

#include "scidebt/config.hpp"

#include <algorithm>
#include <cctype>

#include "scidebt/error.hpp"
#include "scidebt/normalize.hpp"

extern char** environ;

namespace scidebt {

json default_config_json() {
  const SelectionCriteria c;
  json plans = json::array();
  for (const auto& p : LoopConfig{}.plans) {
    plans.push_back(json{{"strategy", to_json(p.strategy)}, {"budget", p.budget}});
  }
  return json{
      {"ingest",
       {{"bots", json::array()},
        {"criteria",
         {{"require_public", c.require_public},
          {"max_days_since_last_commit", c.max_days_since_last_commit},
          {"min_commits", c.min_commits},
          {"min_contributors", c.min_contributors},
          {"min_age_days", c.min_age_days},
          {"min_stars", c.min_stars}}},
        {"syntax", json::array()}}},
      {"normalize", {{"license_keywords", default_license_keywords()}, {"inspection_sample", 100}}},
      {"heuristics", {{"keyword_file", ""}}},
      {"model", {{"alpha", 1.0}, {"lambda", 0.5}, {"single_head", false}, {"folds", 3}}},
      {"loop", {{"seed", 0}, {"plans", plans}}},
      {"paths",
       {{"dataset", ""},
        {"seed_dataset", ""},
        {"unlabeled", ""},
        {"loop_state", ""},
        {"rounds_log", ""},
        {"predictions", ""},
        {"prevalence", ""},
        {"survey", ""},
        {"calibration", ""}}},
      {"server", {{"host", "127.0.0.1"}, {"port", 8080}}},
  };
}

namespace {

std::filesystem::path resolve(const json& v, const std::filesystem::path& base) {
  const std::string s = v.get<std::string>();
  if (s.empty()) return {};
  std::filesystem::path p(s);
  return p.is_relative() && !base.empty() ? base / p : p;
}

template <typename T>
T get(const json& section, std::string_view key, std::string_view section_name) {
  try {
    return section.at(std::string(key)).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorCode::parse, "config " + std::string(section_name) + "." + std::string(key) + ": " + e.what());
  }
}

}  // namespace

Config config_from_json(const json& j, const std::filesystem::path& base_dir) {
  Config cfg;
  cfg.source = j;
  try {
    const json& ingest = j.at("ingest");
    cfg.bots = get<std::vector<std::string>>(ingest, "bots", "ingest");
    const json& cr = ingest.at("criteria");
    cfg.criteria.require_public = get<bool>(cr, "require_public", "ingest.criteria");
    cfg.criteria.max_days_since_last_commit =
        get<std::uint64_t>(cr, "max_days_since_last_commit", "ingest.criteria");
    cfg.criteria.min_commits = get<std::uint64_t>(cr, "min_commits", "ingest.criteria");
    cfg.criteria.min_contributors = get<std::uint64_t>(cr, "min_contributors", "ingest.criteria");
    cfg.criteria.min_age_days = get<std::uint64_t>(cr, "min_age_days", "ingest.criteria");
    cfg.criteria.min_stars = get<std::uint64_t>(cr, "min_stars", "ingest.criteria");
    for (const auto& s : ingest.at("syntax")) cfg.syntax.add(comment_syntax_from_json(s));

    const json& norm = j.at("normalize");
    cfg.license_keywords = get<std::vector<std::string>>(norm, "license_keywords", "normalize");
    cfg.inspection_sample = get<std::size_t>(norm, "inspection_sample", "normalize");

    const auto keyword_file = resolve(j.at("heuristics").at("keyword_file"), base_dir);
    if (!keyword_file.empty()) cfg.keywords = parse_keyword_config(read_file(keyword_file));
    validate(cfg.keywords);

    const json& model = j.at("model");
    cfg.model.alpha = get<double>(model, "alpha", "model");
    cfg.model.lambda = get<double>(model, "lambda", "model");
    cfg.model.single_head = get<bool>(model, "single_head", "model");
    cfg.folds = get<std::size_t>(model, "folds", "model");

    const json& loop = j.at("loop");
    cfg.loop.alpha = cfg.model.alpha;
    cfg.loop.lambda = cfg.model.lambda;
    cfg.loop.seed = get<std::uint64_t>(loop, "seed", "loop");
    cfg.loop.plans.clear();
    for (const auto& p : loop.at("plans")) {
      cfg.loop.plans.push_back({strategy_from_json(p.at("strategy")), get<std::size_t>(p, "budget", "loop.plans")});
    }

    const json& paths = j.at("paths");
    cfg.paths.dataset = resolve(paths.at("dataset"), base_dir);
    cfg.paths.seed_dataset = resolve(paths.at("seed_dataset"), base_dir);
    cfg.paths.unlabeled = resolve(paths.at("unlabeled"), base_dir);
    cfg.paths.loop_state = resolve(paths.at("loop_state"), base_dir);
    cfg.paths.rounds_log = resolve(paths.at("rounds_log"), base_dir);
    cfg.paths.predictions = resolve(paths.at("predictions"), base_dir);
    cfg.paths.prevalence = resolve(paths.at("prevalence"), base_dir);
    cfg.paths.survey = resolve(paths.at("survey"), base_dir);
    cfg.paths.calibration = resolve(paths.at("calibration"), base_dir);

    const json& server = j.at("server");
    cfg.host = get<std::string>(server, "host", "server");
    cfg.port = get<int>(server, "port", "server");
  } catch (const json::exception& e) {
    fail(ErrorCode::parse, std::string("config: ") + e.what());
  }
  if (cfg.port < 0 || cfg.port > 65535) fail(ErrorCode::invalid_argument, "config server.port out of range");
  return cfg;
}

void apply_env_overrides(json& j, const std::map<std::string, std::string>& env) {
  constexpr std::string_view prefix = "SCIDEBT_";
  for (const auto& [name, value] : env) {
    if (name.rfind(prefix, 0) != 0) continue;
    const std::string rest = name.substr(prefix.size());
    const auto sep = rest.find("__");
    if (sep == std::string::npos || sep == 0 || sep + 2 >= rest.size()) continue;
    auto lower = [](std::string s) {
      std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
      return s;
    };
    const std::string section = lower(rest.substr(0, sep));
    const std::string key = lower(rest.substr(sep + 2));
    json parsed = json::parse(value, nullptr, false);
    j[section][key] = parsed.is_discarded() ? json(value) : parsed;
  }
}

std::map<std::string, std::string> process_environment() {
  std::map<std::string, std::string> env;
  for (char** e = environ; e && *e; ++e) {
    std::string_view kv(*e);
    const auto eq = kv.find('=');
    if (eq == std::string_view::npos) continue;
    env.emplace(std::string(kv.substr(0, eq)), std::string(kv.substr(eq + 1)));
  }
  return env;
}

DatasetWriter open_dataset_writer(const Config& cfg) {
  if (cfg.paths.dataset.empty()) fail(ErrorCode::invalid_argument, "no dataset path configured");
  if (!std::filesystem::exists(cfg.paths.dataset) && !cfg.paths.seed_dataset.empty()) {
    Dataset seed = load_dataset(cfg.paths.seed_dataset);
    seed.created_at = utc_now_iso8601();
    save_dataset(seed, cfg.paths.dataset);
  }
  return DatasetWriter(cfg.paths.dataset);
}

Config load_config(const std::filesystem::path& path, const std::map<std::string, std::string>& env) {
  json j = default_config_json();
  std::filesystem::path base;
  if (!path.empty()) {
    j.merge_patch(parse_json(read_file(path), path.string()));
    base = path.parent_path();
  }
  apply_env_overrides(j, env);
  return config_from_json(j, base);
}

}  // namespace scidebt

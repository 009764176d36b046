#include "scidebt/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "scidebt/error.hpp"

namespace scidebt {

std::vector<std::string> tokenize(std::string_view text) {
  if (text.empty()) fail(ErrorCode::invalid_argument, "cannot tokenize empty text");
  if (!in_normalized_alphabet(text)) {
    fail(ErrorCode::invalid_argument, "tokenize expects normalized text");
  }
  std::vector<std::string> tokens;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) tokens.push_back(std::move(word));
    word.clear();
  };
  for (char c : text) {
    if (c == ' ') {
      flush();
    } else if (c == '?' || c == '!') {
      flush();
      tokens.emplace_back(1, c);
    } else {
      word += c;
    }
  }
  flush();
  return tokens;
}

json to_json(const Prediction& p) {
  json scores;
  for (auto c : kAllClasses) scores[std::string(to_string(c))] = p.score(c);
  return json{{"instance_id", p.instance_id},
              {"predicted", to_string(p.predicted)},
              {"confidence", p.confidence},
              {"margin", p.margin},
              {"scores", scores}};
}

Prediction prediction_from_json(const json& j) {
  constexpr std::string_view ctx = "prediction";
  Prediction p;
  p.instance_id = require_string(j, "instance_id", ctx);
  p.predicted = parse_class(require_string(j, "predicted", ctx));
  const json& scores = require_field(j, "scores", ctx);
  for (auto c : kAllClasses) p.scores[index_of(c)] = scores.value(std::string(to_string(c)), 0.0);
  p.confidence = j.value("confidence", p.score(p.predicted));
  p.margin = j.value("margin", 0.0);
  return p;
}

void finalize_prediction(Prediction& p, std::span<const SatdClass> trained) {
  auto trained_has = [&](SatdClass c) {
    return std::find(trained.begin(), trained.end(), c) != trained.end();
  };
  std::optional<SatdClass> best;
  for (auto c : kAllClasses) {
    if (trained_has(c) && (!best || p.score(c) > p.score(*best))) best = c;
  }
  double runner_up = 0.0;
  for (auto c : kAllClasses) {
    if (trained_has(c) && c != *best) runner_up = std::max(runner_up, p.score(c));
  }
  p.predicted = best.value_or(SatdClass::non_debt);
  p.confidence = best ? p.score(*best) : 0.0;
  p.margin = p.confidence - runner_up;
}

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

bool NaiveBayesModel::is_trained(SatdClass c) const {
  return std::find(trained_classes_.begin(), trained_classes_.end(), c) != trained_classes_.end();
}

const NaiveBayesModel::Block& NaiveBayesModel::block_for(ArtifactKind kind) const {
  if (single_head_) return pooled_;
  const Block& h = heads_[index_of(kind)];
  return h.fallback ? pooled_ : h;
}

double NaiveBayesModel::token_log_likelihood(ArtifactKind kind, SatdClass c,
                                             std::string_view token) const {
  const auto& ll = block_for(kind).log_likelihood[index_of(c)];
  if (ll.empty()) return -std::numeric_limits<double>::infinity();
  auto it = index_.find(std::string(token));
  return it == index_.end() ? ll.back() : ll[it->second];
}

Prediction NaiveBayesModel::predict_tokens(ArtifactKind kind, std::span<const std::string> tokens,
                                           std::string instance_id) const {
  const Block& block = block_for(kind);
  std::vector<std::size_t> idx;
  idx.reserve(tokens.size());
  const std::size_t unseen = vocabulary_.size();
  for (const auto& t : tokens) {
    auto it = index_.find(t);
    idx.push_back(it == index_.end() ? unseen : it->second);
  }

  std::array<double, kClassCount> log_score{};
  double best = -std::numeric_limits<double>::infinity();
  for (auto c : trained_classes_) {
    const auto& ll = block.log_likelihood[index_of(c)];
    double s = block.log_prior[index_of(c)];
    for (auto i : idx) s += ll[i];
    log_score[index_of(c)] = s;
    best = std::max(best, s);
  }

  Prediction p;
  p.instance_id = std::move(instance_id);
  double z = 0.0;
  for (auto c : trained_classes_) {
    const double e = std::exp(log_score[index_of(c)] - best);
    p.scores[index_of(c)] = e;
    z += e;
  }
  for (auto c : trained_classes_) p.scores[index_of(c)] /= z;
  finalize_prediction(p, trained_classes_);
  return p;
}

Prediction NaiveBayesModel::predict(const NormalizedInstance& instance) const {
  const auto tokens = tokenize(instance.text);
  return predict_tokens(instance.kind, tokens, instance.instance_id);
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

namespace {

struct ClassCounts {
  std::vector<std::uint64_t> tokens;  // per vocabulary index
  std::uint64_t token_total = 0;
  std::uint64_t docs = 0;
};

using CountBlock = std::array<ClassCounts, kClassCount>;

double log_prior_of(const CountBlock& counts, SatdClass c, std::uint64_t docs_total,
                    std::size_t class_count, double alpha) {
  return std::log((static_cast<double>(counts[index_of(c)].docs) + alpha) /
                  (static_cast<double>(docs_total) + alpha * static_cast<double>(class_count)));
}

// Laplace probabilities over vocabulary + unseen slot.
std::vector<double> laplace(const ClassCounts& cc, std::size_t vocab, double alpha) {
  std::vector<double> p(vocab + 1);
  const double denom =
      static_cast<double>(cc.token_total) + alpha * static_cast<double>(vocab + 1);
  for (std::size_t i = 0; i < vocab; ++i) {
    p[i] = (static_cast<double>(cc.tokens[i]) + alpha) / denom;
  }
  p[vocab] = alpha / denom;
  return p;
}

std::vector<double> logs(const std::vector<double>& p) {
  std::vector<double> out(p.size());
  std::transform(p.begin(), p.end(), out.begin(), [](double v) { return std::log(v); });
  return out;
}

}  // namespace

NaiveBayesModel train(const Dataset& dataset, const TrainOptions& options) {
  if (!(options.alpha > 0.0)) fail(ErrorCode::invalid_argument, "alpha must be > 0");
  if (!(options.lambda >= 0.0 && options.lambda <= 1.0)) {
    fail(ErrorCode::invalid_argument, "lambda must lie in [0, 1]");
  }
  auto excluded = [&](SatdClass c) {
    return std::find(options.exclude.begin(), options.exclude.end(), c) != options.exclude.end();
  };

  std::vector<const LabeledInstance*> rows;
  std::vector<std::vector<std::string>> row_tokens;
  std::set<std::string> vocab_set;
  for (const auto& li : dataset.instances) {
    if (excluded(li.label)) continue;
    rows.push_back(&li);
    row_tokens.push_back(tokenize(li.instance.text));
    vocab_set.insert(row_tokens.back().begin(), row_tokens.back().end());
  }
  if (rows.empty()) fail(ErrorCode::invalid_argument, "training set is empty after exclusion");

  NaiveBayesModel m;
  m.alpha_ = options.alpha;
  m.lambda_ = options.lambda;
  m.single_head_ = options.single_head;
  m.vocabulary_.assign(vocab_set.begin(), vocab_set.end());
  for (std::size_t i = 0; i < m.vocabulary_.size(); ++i) m.index_.emplace(m.vocabulary_[i], i);
  const std::size_t V = m.vocabulary_.size();

  std::array<bool, kClassCount> present{};
  for (const auto* li : rows) present[index_of(li->label)] = true;
  for (auto c : kAllClasses) {
    if (present[index_of(c)]) m.trained_classes_.push_back(c);
  }
  const std::size_t C = m.trained_classes_.size();

  CountBlock pooled_counts;
  std::array<CountBlock, kArtifactKindCount> head_counts;
  std::array<std::uint64_t, kArtifactKindCount> head_docs{};
  for (auto& cc : pooled_counts) cc.tokens.assign(V, 0);
  for (auto& hb : head_counts) {
    for (auto& cc : hb) cc.tokens.assign(V, 0);
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t h = index_of(rows[r]->instance.kind);
    const std::size_t c = index_of(rows[r]->label);
    ++head_docs[h];
    ++head_counts[h][c].docs;
    ++pooled_counts[c].docs;
    for (const auto& t : row_tokens[r]) {
      const std::size_t i = m.index_.at(t);
      ++head_counts[h][c].tokens[i];
      ++head_counts[h][c].token_total;
      ++pooled_counts[c].tokens[i];
      ++pooled_counts[c].token_total;
    }
  }

  const double ninf = -std::numeric_limits<double>::infinity();
  std::array<std::vector<double>, kClassCount> pooled_prob;
  m.pooled_.log_prior.fill(ninf);
  for (auto c : m.trained_classes_) {
    m.pooled_.log_prior[index_of(c)] =
        log_prior_of(pooled_counts, c, rows.size(), C, options.alpha);
    pooled_prob[index_of(c)] = laplace(pooled_counts[index_of(c)], V, options.alpha);
    m.pooled_.log_likelihood[index_of(c)] = logs(pooled_prob[index_of(c)]);
  }

  for (auto kind : kAllKinds) {
    const std::size_t h = index_of(kind);
    auto& block = m.heads_[h];
    if (head_docs[h] == 0) {
      block = m.pooled_;
      block.fallback = true;
      m.warnings_.push_back("no training instances for " + std::string(to_string(kind)) +
                            "; head uses pooled statistics");
      continue;
    }
    block.log_prior.fill(ninf);
    for (auto c : m.trained_classes_) {
      const std::size_t ci = index_of(c);
      block.log_prior[ci] = log_prior_of(head_counts[h], c, head_docs[h], C, options.alpha);
      if (options.lambda == 0.0) {
        block.log_likelihood[ci] = m.pooled_.log_likelihood[ci];
        continue;
      }
      const auto head_prob = laplace(head_counts[h][ci], V, options.alpha);
      if (options.lambda == 1.0) {
        block.log_likelihood[ci] = logs(head_prob);
        continue;
      }
      std::vector<double> mix(V + 1);
      for (std::size_t i = 0; i <= V; ++i) {
        mix[i] = options.lambda * head_prob[i] + (1.0 - options.lambda) * pooled_prob[ci][i];
      }
      block.log_likelihood[ci] = logs(mix);
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

std::string hexf(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

double parse_hexf(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') fail(ErrorCode::parse, "model file: bad number '" + s + "'");
  return v;
}

void write_block(std::ostringstream& out, const NaiveBayesModel::Block& b,
                 std::span<const SatdClass> classes) {
  for (auto c : classes) out << "prior " << to_string(c) << ' ' << hexf(b.log_prior[index_of(c)]) << '\n';
  for (auto c : classes) {
    out << "loglik " << to_string(c);
    for (double v : b.log_likelihood[index_of(c)]) out << ' ' << hexf(v);
    out << '\n';
  }
}

class LineReader {
 public:
  explicit LineReader(std::string_view data) : in_(std::string(data)) {}

  std::istringstream next(std::string_view expected_keyword) {
    std::string line;
    if (!std::getline(in_, line)) {
      fail(ErrorCode::parse, "model file truncated before '" + std::string(expected_keyword) + "'");
    }
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw != expected_keyword) {
      fail(ErrorCode::parse, "model file: expected '" + std::string(expected_keyword) +
                                 "', found '" + kw + "'");
    }
    return ls;
  }

  std::string raw_line() {
    std::string line;
    if (!std::getline(in_, line)) fail(ErrorCode::parse, "model file truncated in vocabulary");
    return line;
  }

 private:
  std::istringstream in_;
};

void read_block(LineReader& r, NaiveBayesModel::Block& b, std::span<const SatdClass> classes,
                std::size_t vocab) {
  b.log_prior.fill(-std::numeric_limits<double>::infinity());
  for (auto c : classes) {
    auto ls = r.next("prior");
    std::string name, value;
    ls >> name >> value;
    if (parse_class(name) != c) fail(ErrorCode::parse, "model file: prior class order mismatch");
    b.log_prior[index_of(c)] = parse_hexf(value);
  }
  for (auto c : classes) {
    auto ls = r.next("loglik");
    std::string name, value;
    ls >> name;
    if (parse_class(name) != c) fail(ErrorCode::parse, "model file: likelihood class order mismatch");
    auto& ll = b.log_likelihood[index_of(c)];
    while (ls >> value) ll.push_back(parse_hexf(value));
    if (ll.size() != vocab + 1) fail(ErrorCode::parse, "model file: likelihood row has wrong length");
  }
}

}  // namespace

std::string NaiveBayesModel::serialize() const {
  std::ostringstream out;
  out << kModelMagic << ' ' << kModelVersion << '\n';
  out << "alpha " << hexf(alpha_) << '\n';
  out << "lambda " << hexf(lambda_) << '\n';
  out << "single_head " << (single_head_ ? 1 : 0) << '\n';
  out << "classes " << trained_classes_.size();
  for (auto c : trained_classes_) out << ' ' << to_string(c);
  out << '\n';
  out << "heads " << kArtifactKindCount;
  for (auto k : kAllKinds) out << ' ' << to_string(k) << ':' << (heads_[index_of(k)].fallback ? 1 : 0);
  out << '\n';
  out << "vocabulary " << vocabulary_.size() << '\n';
  for (const auto& w : vocabulary_) out << w << '\n';
  out << "pooled\n";
  write_block(out, pooled_, trained_classes_);
  for (auto k : kAllKinds) {
    out << "head " << to_string(k) << '\n';
    write_block(out, heads_[index_of(k)], trained_classes_);
  }
  out << "end\n";
  return out.str();
}

NaiveBayesModel NaiveBayesModel::deserialize(std::string_view data) {
  LineReader r(data);
  NaiveBayesModel m;
  {
    auto ls = r.next(kModelMagic);
    int version = 0;
    ls >> version;
    if (version != kModelVersion) {
      fail(ErrorCode::unsupported, "model file version " + std::to_string(version) + " unsupported");
    }
  }
  {
    auto ls = r.next("alpha");
    std::string v;
    ls >> v;
    m.alpha_ = parse_hexf(v);
  }
  {
    auto ls = r.next("lambda");
    std::string v;
    ls >> v;
    m.lambda_ = parse_hexf(v);
  }
  {
    auto ls = r.next("single_head");
    int v = 0;
    ls >> v;
    m.single_head_ = v != 0;
  }
  {
    auto ls = r.next("classes");
    std::size_t n = 0;
    ls >> n;
    for (std::size_t i = 0; i < n; ++i) {
      std::string name;
      ls >> name;
      m.trained_classes_.push_back(parse_class(name));
    }
    if (m.trained_classes_.empty()) fail(ErrorCode::parse, "model file: no trained classes");
  }
  {
    auto ls = r.next("heads");
    std::size_t n = 0;
    ls >> n;
    if (n != kArtifactKindCount) fail(ErrorCode::parse, "model file: unexpected head count");
    for (std::size_t i = 0; i < n; ++i) {
      std::string entry;
      ls >> entry;
      const auto colon = entry.find(':');
      if (colon == std::string::npos) fail(ErrorCode::parse, "model file: bad head entry");
      m.heads_[index_of(parse_kind(entry.substr(0, colon)))].fallback = entry.substr(colon + 1) == "1";
    }
  }
  {
    auto ls = r.next("vocabulary");
    std::size_t n = 0;
    ls >> n;
    m.vocabulary_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      m.vocabulary_.push_back(r.raw_line());
      m.index_.emplace(m.vocabulary_.back(), i);
    }
  }
  const std::size_t V = m.vocabulary_.size();
  r.next("pooled");
  read_block(r, m.pooled_, m.trained_classes_, V);
  for (auto k : kAllKinds) {
    auto ls = r.next("head");
    std::string name;
    ls >> name;
    if (parse_kind(name) != k) fail(ErrorCode::parse, "model file: head order mismatch");
    const bool fallback = m.heads_[index_of(k)].fallback;
    read_block(r, m.heads_[index_of(k)], m.trained_classes_, V);
    m.heads_[index_of(k)].fallback = fallback;
  }
  r.next("end");
  return m;
}

void NaiveBayesModel::save(const std::filesystem::path& path) const { write_file(path, serialize()); }

NaiveBayesModel NaiveBayesModel::load(const std::filesystem::path& path) {
  return deserialize(read_file(path));
}

std::string NaiveBayesModel::hash() const { return to_hex(fnv1a64(serialize())); }

}  // namespace scidebt

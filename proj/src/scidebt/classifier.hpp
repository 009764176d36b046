#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "scidebt/dataset.hpp"
#include "scidebt/normalize.hpp"
#include "scidebt/types.hpp"

namespace scidebt {

// Splits normalized text on spaces; '?' and '!' become standalone tokens.
// Empty or non-normalized text is a precondition violation (invalid_argument).
std::vector<std::string> tokenize(std::string_view text);

struct Prediction {
  std::string instance_id;
  std::array<double, kClassCount> scores{};  // on the simplex; untrained classes are 0
  SatdClass predicted = SatdClass::non_debt;
  double confidence = 0.0;  // top-1 score
  double margin = 0.0;      // top-1 minus top-2

  double score(SatdClass c) const { return scores[index_of(c)]; }
};

json to_json(const Prediction& p);
Prediction prediction_from_json(const json& j);

// Fills predicted/confidence/margin from scores over `trained`; ties go to
// the earlier class in enumeration order.
void finalize_prediction(Prediction& p, std::span<const SatdClass> trained);

// Anything that puts class scores on the simplex can drive the pipeline.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual Prediction predict(const NormalizedInstance& instance) const = 0;
  virtual std::vector<SatdClass> classes() const = 0;
};

struct TrainOptions {
  double alpha = 1.0;   // Laplace smoothing, > 0
  double lambda = 0.5;  // weight of head-specific vs pooled token statistics
  std::vector<SatdClass> exclude;
  // Route every artifact kind through the pooled statistics (one head).
  bool single_head = false;
};

// Multinomial naive Bayes with a shared vocabulary and one parameter block
// per artifact kind. Each head's token likelihood interpolates its own
// Laplace estimate with the pooled estimate:
//   P_h(w|c) = lambda * (n_hc(w) + a) / (N_hc + a(|V|+1))
//            + (1 - lambda) * (n_c(w) + a) / (N_c + a(|V|+1))
// The extra "+1" slot is the mass given to tokens outside the vocabulary.
// Priors are head-local: (m_hc + a) / (M_h + a|C|).
class NaiveBayesModel final : public Scorer {
 public:
  struct Block {
    bool fallback = false;  // head trained on zero instances: pooled statistics
    std::array<double, kClassCount> log_prior{};
    // Per class, |V| + 1 entries; the last is the unseen-token log mass.
    std::array<std::vector<double>, kClassCount> log_likelihood;
  };

  Prediction predict(const NormalizedInstance& instance) const override;
  std::vector<SatdClass> classes() const override { return trained_classes_; }

  Prediction predict_tokens(ArtifactKind kind, std::span<const std::string> tokens,
                            std::string instance_id = {}) const;

  double alpha() const { return alpha_; }
  double lambda() const { return lambda_; }
  bool single_head() const { return single_head_; }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const Block& head(ArtifactKind kind) const { return heads_[index_of(kind)]; }
  const Block& pooled() const { return pooled_; }
  bool is_trained(SatdClass c) const;
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Block actually used for a kind: the head, or pooled when falling back.
  const Block& block_for(ArtifactKind kind) const;
  double token_log_likelihood(ArtifactKind kind, SatdClass c, std::string_view token) const;

  // Self-describing text format; doubles as C99 hex floats so a round trip
  // is exact and retraining yields bit-identical files.
  std::string serialize() const;
  static NaiveBayesModel deserialize(std::string_view data);
  void save(const std::filesystem::path& path) const;
  static NaiveBayesModel load(const std::filesystem::path& path);
  std::string hash() const;

 private:
  friend NaiveBayesModel train(const Dataset&, const TrainOptions&);

  double alpha_ = 1.0;
  double lambda_ = 0.5;
  bool single_head_ = false;
  std::vector<SatdClass> trained_classes_;
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, std::size_t> index_;
  std::array<Block, kArtifactKindCount> heads_;
  Block pooled_;
  std::vector<std::string> warnings_;
};

NaiveBayesModel train(const Dataset& dataset, const TrainOptions& options);

inline constexpr std::string_view kModelMagic = "SCIDEBT-NB";
inline constexpr int kModelVersion = 1;

}  // namespace scidebt

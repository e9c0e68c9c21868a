#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pamine/bow.h"
#include "pamine/classifier.h"
#include "pamine/nlp.h"

namespace pamine::attributes {

// Ordinals are part of the serialized form; append only.
enum class Attribute {
  kFunctionalExcellence,
  kBuildingEffectiveTeams,
  kInterpersonalEffectiveness,
  kCustomerFocus,
  kInnovationManagement,
  kEffectiveCommunication,
  kBusinessAcumen,
  kTakingOwnership,
  kPeopleDevelopment,
  kDriveForResults,
  kStrategicCapability,
  kWithstandingPressure,
  kDealingWithAmbiguities,
  kManagingVisionAndPurpose,
  kTimelyDecisionMaking,
};

inline constexpr std::size_t kAttributeCount = 15;

std::string_view to_string(Attribute a);  // "FUNCTIONAL_EXCELLENCE", ...
Attribute attribute_from_string(std::string_view name);
inline std::size_t ordinal(Attribute a) { return static_cast<std::size_t>(a); }
inline Attribute attribute_at(std::size_t i) { return static_cast<Attribute>(i); }

using AttributeSet = std::bitset<kAttributeCount>;

AttributeSet make_set(std::initializer_list<Attribute> members);
std::vector<Attribute> members(const AttributeSet& set);
nlohmann::json to_json(const AttributeSet& set);  // names in ordinal order
AttributeSet attribute_set_from_json(const nlohmann::json& j);

// Unsupervised mapper: an attribute fires when one of its cue phrases occurs
// as a contiguous run of token lemmas.
class AttributeCueMatcher {
 public:
  // "ATTRIBUTE<TAB>cue phrase" per line.
  static AttributeCueMatcher load(const std::filesystem::path& path);
  static AttributeCueMatcher parse(std::string_view content, std::string_view origin = "<memory>");

  void add(Attribute a, std::string_view cue);
  AttributeSet match(const nlp::TaggedSentence& s) const;
  std::size_t size() const { return cues_.size(); }

 private:
  struct Cue {
    Attribute attribute;
    std::vector<std::string> lemmas;
  };
  std::vector<Cue> cues_;
};

struct LabelledAttributes {
  nlp::TaggedSentence sentence;
  AttributeSet labels;
};

// One binary logistic model per attribute over a shared unigram vocabulary.
// Attributes without positive examples are untrainable and never predicted.
struct OvrModel {
  bow::Vocabulary vocabulary;
  std::array<bow::BinaryLogistic, kAttributeCount> models;
  std::array<bool, kAttributeCount> untrainable{};
  std::array<double, kAttributeCount> thresholds{};

  std::array<double, kAttributeCount> probabilities(const nlp::TaggedSentence& s) const;
};

OvrModel train_ovr(std::span<const LabelledAttributes> data, const bow::LogisticOptions& options = {},
                   double threshold = 0.5);

// Attributes whose probability reaches the label's threshold.
AttributeSet predict_attributes(const OvrModel& model, const nlp::TaggedSentence& s);

struct LabelPair {
  AttributeSet predicted;
  AttributeSet actual;
};

// Instance-averaged scores. Precision skips instances with nothing
// predicted, recall skips instances with no actual labels; F combines the
// two averages.
struct MultilabelScores {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::size_t precision_instances = 0;
  std::size_t recall_instances = 0;
};

MultilabelScores multilabel_prf(std::span<const LabelPair> pairs);

// Rows by attribute ordinal; columns STRENGTH, WEAKNESS, SUGGESTION.
using AttributeHistogram = std::array<std::array<std::size_t, 3>, kAttributeCount>;

struct ClassifiedAttributes {
  classify::SentenceClass sentence_class;
  AttributeSet attributes;
};

// OTHER sentences are not counted.
AttributeHistogram attribute_histogram(std::span<const ClassifiedAttributes> sentences);
nlohmann::json to_json(const AttributeHistogram& histogram);

// Items are shuffled with the seeded generator and dealt round-robin into
// folds; scores are computed over the pooled out-of-fold predictions.
struct OvrCrossValidation {
  std::size_t folds = 0;
  std::vector<AttributeSet> predictions;
  MultilabelScores scores;
};

OvrCrossValidation crossvalidate_ovr(std::span<const LabelledAttributes> data, std::size_t folds,
                                     std::uint64_t seed, const bow::LogisticOptions& options = {},
                                     double threshold = 0.5);

nlohmann::json to_json(const MultilabelScores& scores);

}  // namespace pamine::attributes

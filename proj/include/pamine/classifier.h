#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pamine/bow.h"
#include "pamine/nlp.h"

namespace pamine::classify {

enum class SentenceClass { kStrength, kWeakness, kSuggestion, kOther };

inline constexpr std::array<SentenceClass, 4> kAllClasses = {
    SentenceClass::kStrength, SentenceClass::kWeakness, SentenceClass::kSuggestion, SentenceClass::kOther};

std::string_view to_string(SentenceClass c);
SentenceClass class_from_string(std::string_view name);  // case-insensitive
inline std::size_t ordinal(SentenceClass c) { return static_cast<std::size_t>(c); }

// Tag sequence pattern. Elements: an exact tag ("VB"), a tag prefix ("VB*"),
// "_" for any token; a leading "^" / trailing "$" anchor the match.
struct PosPattern {
  std::vector<std::string> elements;
  bool anchored_start = false;
  bool anchored_end = false;

  static PosPattern parse(std::string_view text_form);
  bool matches(const nlp::TaggedSentence& s) const;
};

// Unsupervised classifier: keyword phrases and tag patterns per class, with
// a tie-break order for sentences that match several classes.
class PatternRuleSet {
 public:
  enum class RuleKind { kKeyword, kPosSequence };

  struct Rule {
    SentenceClass label;
    RuleKind kind;
    std::vector<std::string> keyword;  // lowercased tokens
    PosPattern pattern;
    std::string source;
  };

  PatternRuleSet();  // empty rules, default tie-break order

  // Rule file: "class<TAB>keyword|posseq<TAB>pattern" per line, plus an
  // optional "order<TAB>SUGGESTION>WEAKNESS>STRENGTH>OTHER" line.
  static PatternRuleSet load(const std::filesystem::path& path);
  static PatternRuleSet parse(std::string_view content, std::string_view origin = "<memory>");

  void add_keyword(SentenceClass label, std::string_view phrase);
  void add_pos_pattern(SentenceClass label, std::string_view pattern);
  void set_tie_break_order(std::vector<SentenceClass> order);

  const std::vector<Rule>& rules() const { return rules_; }
  const std::vector<SentenceClass>& tie_break_order() const { return order_; }

  // Classes with at least one matching rule, in enum order.
  std::vector<SentenceClass> matching_classes(const nlp::TaggedSentence& s) const;
  SentenceClass classify(const nlp::TaggedSentence& s) const;

 private:
  std::vector<Rule> rules_;
  std::vector<SentenceClass> order_;
};

SentenceClass classify_pattern(const nlp::TaggedSentence& s, const PatternRuleSet& rules);

struct LabelledSentence {
  nlp::TaggedSentence sentence;
  SentenceClass label;
};

enum class ModelKind { kMultinomialNb, kLogisticRegression };

std::string_view to_string(ModelKind k);
ModelKind model_kind_from_string(std::string_view name);  // "nb" / "lr" or the full names

struct TrainOptions {
  double nb_smoothing = 1.0;  // additive (Laplace) smoothing
  bow::LogisticOptions logistic;
};

// Per-class scores are log joint probabilities (NB) or one-vs-rest margins
// (LR); the prediction is the argmax, ties going to the earlier class.
struct BowModel {
  ModelKind kind = ModelKind::kMultinomialNb;
  bow::Vocabulary vocabulary;
  std::vector<SentenceClass> classes;  // classes seen in training, enum order
  std::vector<double> log_priors;
  std::vector<std::vector<double>> weights;  // [class][term]
  std::vector<double> biases;                // LR intercepts; zero for NB
  TrainOptions options;

  std::vector<double> scores(const nlp::TaggedSentence& s) const;
};

BowModel train_bow(std::span<const LabelledSentence> data, ModelKind kind, const TrainOptions& options = {});
SentenceClass predict_bow(const BowModel& model, const nlp::TaggedSentence& s);

nlohmann::json to_json(const BowModel& model);
BowModel bow_model_from_json(const nlohmann::json& j);

struct ClassMetrics {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  double precision = 0;  // 0 when nothing was predicted for the class
  double recall = 0;     // 0 when the class never occurs
  double f1 = 0;
};

ClassMetrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t fn);

struct ClassificationReport {
  std::size_t size = 0;
  std::size_t correct = 0;
  double accuracy = 0;
  std::array<ClassMetrics, 4> per_class;  // indexed by ordinal()
};

ClassificationReport evaluate_predictions(std::span<const SentenceClass> gold,
                                          std::span<const SentenceClass> predicted);

// Fold id per item: each class's items are shuffled with the seeded
// generator and dealt round-robin, continuing the deal across classes.
std::vector<std::size_t> stratified_folds(std::span<const SentenceClass> labels, std::size_t folds,
                                          std::uint64_t seed);

struct CrossValidation {
  std::size_t folds = 0;
  std::vector<SentenceClass> predictions;  // pooled out-of-fold predictions
  ClassificationReport report;
};

CrossValidation crossvalidate(std::span<const LabelledSentence> data, ModelKind kind, std::size_t folds,
                              std::uint64_t seed, const TrainOptions& options = {});

nlohmann::json to_json(const ClassificationReport& report);

}  // namespace pamine::classify

#include "pamine/classifier.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>

#include "pamine/error.h"
#include "pamine/random.h"
#include "pamine/text.h"

namespace pamine::classify {

namespace {

constexpr const char* kModule = "sentence-classifier";
constexpr int kModelFormatVersion = 1;

bool element_matches(const std::string& element, const std::string& tag) {
  if (element == "_") return true;
  if (element.size() > 1 && element.back() == '*') {
    return std::string_view(tag).starts_with(std::string_view(element).substr(0, element.size() - 1));
  }
  return element == tag;
}

bool keyword_matches(const std::vector<std::string>& keyword, const nlp::TaggedSentence& s) {
  if (keyword.empty() || keyword.size() > s.size()) return false;
  for (std::size_t i = 0; i + keyword.size() <= s.size(); ++i) {
    bool ok = true;
    for (std::size_t k = 0; k < keyword.size() && ok; ++k) ok = s.tokens[i + k].lower == keyword[k];
    if (ok) return true;
  }
  return false;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    out.emplace_back(text::trim(std::string_view(line).substr(start, tab - start)));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

}  // namespace

std::string_view to_string(SentenceClass c) {
  switch (c) {
    case SentenceClass::kStrength: return "STRENGTH";
    case SentenceClass::kWeakness: return "WEAKNESS";
    case SentenceClass::kSuggestion: return "SUGGESTION";
    case SentenceClass::kOther: return "OTHER";
  }
  return "OTHER";
}

SentenceClass class_from_string(std::string_view name) {
  auto lower = text::to_lower(text::trim(name));
  for (auto c : kAllClasses) {
    if (text::to_lower(to_string(c)) == lower) return c;
  }
  throw Error(kModule, "unknown sentence class \"" + std::string(name) + "\"");
}

PosPattern PosPattern::parse(std::string_view text_form) {
  PosPattern p;
  auto parts = text::split_whitespace(text_form);
  if (!parts.empty() && parts.front() == "^") {
    p.anchored_start = true;
    parts.erase(parts.begin());
  }
  if (!parts.empty() && parts.back() == "$") {
    p.anchored_end = true;
    parts.pop_back();
  }
  if (parts.empty()) throw Error(kModule, "empty POS pattern \"" + std::string(text_form) + "\"");
  for (const auto& e : parts) {
    auto bare = e.back() == '*' ? e.substr(0, e.size() - 1) : e;
    if (e != "_" && !nlp::is_known_tag(bare) && !(e.back() == '*' && !bare.empty())) {
      throw Error(kModule, "unknown tag \"" + e + "\" in POS pattern");
    }
  }
  p.elements = std::move(parts);
  return p;
}

bool PosPattern::matches(const nlp::TaggedSentence& s) const {
  const std::size_t len = elements.size();
  if (len > s.size()) return false;
  const std::size_t last = s.size() - len;
  for (std::size_t i = 0; i <= last; ++i) {
    if (anchored_start && i != 0) break;
    if (anchored_end && i != last) continue;
    bool ok = true;
    for (std::size_t k = 0; k < len && ok; ++k) ok = element_matches(elements[k], s.tokens[i + k].pos);
    if (ok) return true;
  }
  return false;
}

PatternRuleSet::PatternRuleSet()
    : order_{SentenceClass::kSuggestion, SentenceClass::kWeakness, SentenceClass::kStrength,
             SentenceClass::kOther} {}

PatternRuleSet PatternRuleSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(kModule, "cannot open rule file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

PatternRuleSet PatternRuleSet::parse(std::string_view content, std::string_view origin) {
  PatternRuleSet set;
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto trimmed = text::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    auto f = split_tabs(line);
    try {
      if (f.size() == 2 && text::to_lower(f[0]) == "order") {
        std::vector<SentenceClass> order;
        std::string chain = f[1];
        std::replace(chain.begin(), chain.end(), '>', ' ');
        for (const auto& name : text::split_whitespace(chain)) order.push_back(class_from_string(name));
        set.set_tie_break_order(std::move(order));
        continue;
      }
      if (f.size() != 3) throw Error(kModule, "expected class<TAB>kind<TAB>pattern");
      auto label = class_from_string(f[0]);
      auto kind = text::to_lower(f[1]);
      if (kind == "keyword") {
        set.add_keyword(label, f[2]);
      } else if (kind == "posseq") {
        set.add_pos_pattern(label, f[2]);
      } else {
        throw Error(kModule, "unknown rule kind \"" + f[1] + "\"");
      }
    } catch (const Error& e) {
      throw Error(kModule, where + e.what());
    }
  }
  return set;
}

void PatternRuleSet::add_keyword(SentenceClass label, std::string_view phrase) {
  Rule r{label, RuleKind::kKeyword, {}, {}, std::string(phrase)};
  for (const auto& t : nlp::tokenize(phrase)) r.keyword.push_back(text::to_lower(t));
  if (r.keyword.empty()) throw Error(kModule, "empty keyword rule");
  rules_.push_back(std::move(r));
}

void PatternRuleSet::add_pos_pattern(SentenceClass label, std::string_view pattern) {
  rules_.push_back({label, RuleKind::kPosSequence, {}, PosPattern::parse(pattern), std::string(pattern)});
}

void PatternRuleSet::set_tie_break_order(std::vector<SentenceClass> order) {
  std::vector<SentenceClass> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.size() != kAllClasses.size() ||
      std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(kModule, "tie-break order must list each of the four classes exactly once");
  }
  order_ = std::move(order);
}

std::vector<SentenceClass> PatternRuleSet::matching_classes(const nlp::TaggedSentence& s) const {
  std::array<bool, 4> hit{};
  for (const auto& r : rules_) {
    if (hit[ordinal(r.label)]) continue;
    hit[ordinal(r.label)] =
        r.kind == RuleKind::kKeyword ? keyword_matches(r.keyword, s) : r.pattern.matches(s);
  }
  std::vector<SentenceClass> out;
  for (auto c : kAllClasses) {
    if (hit[ordinal(c)]) out.push_back(c);
  }
  return out;
}

SentenceClass PatternRuleSet::classify(const nlp::TaggedSentence& s) const {
  auto hits = matching_classes(s);
  for (auto c : order_) {
    if (std::find(hits.begin(), hits.end(), c) != hits.end()) return c;
  }
  return SentenceClass::kOther;
}

SentenceClass classify_pattern(const nlp::TaggedSentence& s, const PatternRuleSet& rules) {
  return rules.classify(s);
}

std::string_view to_string(ModelKind k) {
  return k == ModelKind::kMultinomialNb ? "multinomial_nb" : "logistic_regression";
}

ModelKind model_kind_from_string(std::string_view name) {
  auto n = text::to_lower(name);
  if (n == "nb" || n == "multinomial_nb") return ModelKind::kMultinomialNb;
  if (n == "lr" || n == "logistic_regression") return ModelKind::kLogisticRegression;
  throw Error(kModule, "unknown model kind \"" + std::string(name) + "\"");
}

BowModel train_bow(std::span<const LabelledSentence> data, ModelKind kind, const TrainOptions& options) {
  BowModel m;
  m.kind = kind;
  m.options = options;

  std::array<std::size_t, 4> class_counts{};
  for (const auto& d : data) ++class_counts[ordinal(d.label)];
  for (auto c : kAllClasses) {
    if (class_counts[ordinal(c)] > 0) m.classes.push_back(c);
  }
  if (m.classes.size() < 2) throw Error(kModule, "training data must contain at least two classes");

  std::vector<bow::SparseVector> xs;
  xs.reserve(data.size());
  for (const auto& d : data) {
    for (const auto& t : bow::terms(d.sentence)) m.vocabulary.add(t);
  }
  if (m.vocabulary.size() == 0) throw Error(kModule, "training data has an empty vocabulary");
  for (const auto& d : data) xs.push_back(bow::featurize(m.vocabulary, d.sentence));

  const std::size_t vocab = m.vocabulary.size();
  const auto n = static_cast<double>(data.size());
  for (auto c : m.classes) m.log_priors.push_back(std::log(static_cast<double>(class_counts[ordinal(c)]) / n));

  if (kind == ModelKind::kMultinomialNb) {
    if (!(options.nb_smoothing > 0)) throw Error(kModule, "NB smoothing must be positive");
    for (auto c : m.classes) {
      std::vector<double> counts(vocab, 0.0);
      double total = 0;
      for (std::size_t i = 0; i < data.size(); ++i) {
        if (data[i].label != c) continue;
        for (const auto& [j, v] : xs[i].entries) {
          counts[j] += v;
          total += v;
        }
      }
      const double denom = std::log(total + options.nb_smoothing * static_cast<double>(vocab));
      for (auto& v : counts) v = std::log(v + options.nb_smoothing) - denom;
      m.weights.push_back(std::move(counts));
      m.biases.push_back(0.0);
    }
  } else {
    auto labels = std::make_unique<bool[]>(data.size());
    for (auto c : m.classes) {
      for (std::size_t i = 0; i < data.size(); ++i) labels[i] = data[i].label == c;
      auto model = bow::train_binary_logistic(xs, std::span<const bool>(labels.get(), data.size()), vocab,
                                              options.logistic);
      m.weights.push_back(std::move(model.weights));
      m.biases.push_back(model.bias);
    }
  }
  return m;
}

std::vector<double> BowModel::scores(const nlp::TaggedSentence& s) const {
  auto x = bow::featurize(vocabulary, s);
  std::vector<double> out(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const double base = kind == ModelKind::kMultinomialNb ? log_priors[c] : biases[c];
    out[c] = base + x.dot(weights[c]);
  }
  return out;
}

SentenceClass predict_bow(const BowModel& model, const nlp::TaggedSentence& s) {
  auto sc = model.scores(s);
  std::size_t best = 0;
  for (std::size_t c = 1; c < sc.size(); ++c) {
    if (sc[c] > sc[best]) best = c;
  }
  return model.classes.at(best);
}

nlohmann::json to_json(const BowModel& model) {
  nlohmann::json classes = nlohmann::json::array();
  for (auto c : model.classes) classes.push_back(to_string(c));
  return {{"format", "pamine.bow_model"},
          {"version", kModelFormatVersion},
          {"kind", to_string(model.kind)},
          {"classes", classes},
          {"vocabulary", model.vocabulary.terms()},
          {"log_priors", model.log_priors},
          {"weights", model.weights},
          {"biases", model.biases},
          {"options", {{"nb_smoothing", model.options.nb_smoothing}, {"logistic", bow::to_json(model.options.logistic)}}}};
}

BowModel bow_model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "pamine.bow_model") throw Error(kModule, "not a bag-of-words model file");
    if (j.at("version").get<int>() != kModelFormatVersion) {
      throw Error(kModule, "unsupported model version " + j.at("version").dump());
    }
    BowModel m;
    m.kind = model_kind_from_string(j.at("kind").get<std::string>());
    for (const auto& c : j.at("classes")) m.classes.push_back(class_from_string(c.get<std::string>()));
    for (const auto& t : j.at("vocabulary")) m.vocabulary.add(t.get<std::string>());
    m.log_priors = j.at("log_priors").get<std::vector<double>>();
    m.weights = j.at("weights").get<std::vector<std::vector<double>>>();
    m.biases = j.at("biases").get<std::vector<double>>();
    if (auto it = j.find("options"); it != j.end()) {
      m.options.nb_smoothing = it->value("nb_smoothing", m.options.nb_smoothing);
      if (it->contains("logistic")) m.options.logistic = bow::logistic_options_from_json(it->at("logistic"));
    }
    const auto k = m.classes.size();
    if (m.log_priors.size() != k || m.weights.size() != k || m.biases.size() != k) {
      throw Error(kModule, "model arrays disagree with class count");
    }
    for (const auto& w : m.weights) {
      if (w.size() != m.vocabulary.size()) throw Error(kModule, "weight vector length differs from vocabulary");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(kModule, std::string("malformed model: ") + e.what());
  }
}

ClassMetrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassMetrics m{tp, fp, fn};
  if (tp + fp > 0) m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (m.precision + m.recall > 0) m.f1 = 2 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

ClassificationReport evaluate_predictions(std::span<const SentenceClass> gold,
                                          std::span<const SentenceClass> predicted) {
  if (gold.size() != predicted.size()) throw Error(kModule, "gold and predicted lengths differ");
  ClassificationReport r;
  r.size = gold.size();
  std::array<std::size_t, 4> tp{}, fp{}, fn{};
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] == predicted[i]) {
      ++r.correct;
      ++tp[ordinal(gold[i])];
    } else {
      ++fp[ordinal(predicted[i])];
      ++fn[ordinal(gold[i])];
    }
  }
  r.accuracy = r.size ? static_cast<double>(r.correct) / static_cast<double>(r.size) : 0.0;
  for (auto c : kAllClasses) {
    auto k = ordinal(c);
    r.per_class[k] = metrics_from_counts(tp[k], fp[k], fn[k]);
  }
  return r;
}

std::vector<std::size_t> stratified_folds(std::span<const SentenceClass> labels, std::size_t folds,
                                          std::uint64_t seed) {
  if (folds < 2) throw Error(kModule, "cross-validation needs at least 2 folds");
  if (folds > labels.size()) {
    throw Error(kModule, "cannot split " + std::to_string(labels.size()) + " items into " +
                             std::to_string(folds) + " folds");
  }
  std::mt19937_64 gen(seed);
  std::vector<std::size_t> fold_of(labels.size());
  std::size_t deal = 0;
  for (auto c : kAllClasses) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == c) idx.push_back(i);
    }
    seeded_shuffle(std::span<std::size_t>(idx), gen);
    for (auto i : idx) fold_of[i] = deal++ % folds;
  }
  return fold_of;
}

CrossValidation crossvalidate(std::span<const LabelledSentence> data, ModelKind kind, std::size_t folds,
                              std::uint64_t seed, const TrainOptions& options) {
  std::vector<SentenceClass> gold;
  gold.reserve(data.size());
  for (const auto& d : data) gold.push_back(d.label);
  auto fold_of = stratified_folds(gold, folds, seed);

  CrossValidation cv;
  cv.folds = folds;
  cv.predictions.assign(data.size(), SentenceClass::kOther);
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<LabelledSentence> train;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (fold_of[i] != f) train.push_back(data[i]);
    }
    auto model = train_bow(train, kind, options);
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (fold_of[i] == f) cv.predictions[i] = predict_bow(model, data[i].sentence);
    }
  }
  cv.report = evaluate_predictions(gold, cv.predictions);
  return cv;
}

nlohmann::json to_json(const ClassificationReport& report) {
  nlohmann::json per_class = nlohmann::json::object();
  for (auto c : kAllClasses) {
    const auto& m = report.per_class[ordinal(c)];
    per_class[std::string(to_string(c))] = {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1},
                                            {"tp", m.true_positives}, {"fp", m.false_positives},
                                            {"fn", m.false_negatives}};
  }
  return {{"size", report.size}, {"correct", report.correct}, {"accuracy", report.accuracy},
          {"per_class", per_class}};
}

}  // namespace pamine::classify

#include "pamine/attributes.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#include "pamine/error.h"
#include "pamine/random.h"
#include "pamine/text.h"

namespace pamine::attributes {

namespace {

constexpr const char* kModule = "attribute-mapper";

constexpr std::array<std::string_view, kAttributeCount> kNames = {
    "FUNCTIONAL_EXCELLENCE",   "BUILDING_EFFECTIVE_TEAMS", "INTERPERSONAL_EFFECTIVENESS",
    "CUSTOMER_FOCUS",          "INNOVATION_MANAGEMENT",    "EFFECTIVE_COMMUNICATION",
    "BUSINESS_ACUMEN",         "TAKING_OWNERSHIP",         "PEOPLE_DEVELOPMENT",
    "DRIVE_FOR_RESULTS",       "STRATEGIC_CAPABILITY",     "WITHSTANDING_PRESSURE",
    "DEALING_WITH_AMBIGUITIES", "MANAGING_VISION_AND_PURPOSE", "TIMELY_DECISION_MAKING",
};

std::vector<std::string> sentence_lemmas(const nlp::TaggedSentence& s) {
  std::vector<std::string> out;
  out.reserve(s.size());
  for (const auto& t : s.tokens) out.push_back(nlp::lemmatize(t.lower));
  return out;
}

void check_threshold(double threshold) {
  if (!(threshold > 0 && threshold < 1)) {
    throw Error(kModule, "decision threshold must lie in (0, 1), got " + std::to_string(threshold));
  }
}

}  // namespace

std::string_view to_string(Attribute a) { return kNames.at(ordinal(a)); }

Attribute attribute_from_string(std::string_view name) {
  std::string upper(text::trim(name));
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (std::size_t i = 0; i < kAttributeCount; ++i) {
    if (kNames[i] == upper) return attribute_at(i);
  }
  throw Error(kModule, "unknown attribute \"" + std::string(name) + "\"");
}

AttributeSet make_set(std::initializer_list<Attribute> list) {
  AttributeSet set;
  for (auto a : list) set.set(ordinal(a));
  return set;
}

std::vector<Attribute> members(const AttributeSet& set) {
  std::vector<Attribute> out;
  for (std::size_t i = 0; i < kAttributeCount; ++i) {
    if (set.test(i)) out.push_back(attribute_at(i));
  }
  return out;
}

nlohmann::json to_json(const AttributeSet& set) {
  auto out = nlohmann::json::array();
  for (auto a : members(set)) out.push_back(to_string(a));
  return out;
}

AttributeSet attribute_set_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(kModule, "attribute list must be a JSON array");
  AttributeSet set;
  for (const auto& v : j) {
    if (!v.is_string()) throw Error(kModule, "attribute names must be strings");
    set.set(ordinal(attribute_from_string(v.get<std::string>())));
  }
  return set;
}

AttributeCueMatcher AttributeCueMatcher::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(kModule, "cannot open attribute cue file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

AttributeCueMatcher AttributeCueMatcher::parse(std::string_view content, std::string_view origin) {
  AttributeCueMatcher m;
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto trimmed = text::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto tab = trimmed.find('\t');
    auto where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    if (tab == std::string_view::npos) throw Error(kModule, where + "expected ATTRIBUTE<TAB>cue");
    try {
      m.add(attribute_from_string(trimmed.substr(0, tab)), trimmed.substr(tab + 1));
    } catch (const Error& e) {
      throw Error(kModule, where + e.what());
    }
  }
  return m;
}

void AttributeCueMatcher::add(Attribute a, std::string_view cue) {
  Cue c{a, {}};
  for (const auto& t : nlp::tokenize(cue)) c.lemmas.push_back(nlp::lemmatize(t));
  if (c.lemmas.empty()) throw Error(kModule, "empty cue for " + std::string(to_string(a)));
  cues_.push_back(std::move(c));
}

AttributeSet AttributeCueMatcher::match(const nlp::TaggedSentence& s) const {
  AttributeSet out;
  const auto lemmas = sentence_lemmas(s);
  for (const auto& cue : cues_) {
    if (out.test(ordinal(cue.attribute)) || cue.lemmas.size() > lemmas.size()) continue;
    auto it = std::search(lemmas.begin(), lemmas.end(), cue.lemmas.begin(), cue.lemmas.end());
    if (it != lemmas.end()) out.set(ordinal(cue.attribute));
  }
  return out;
}

std::array<double, kAttributeCount> OvrModel::probabilities(const nlp::TaggedSentence& s) const {
  auto x = bow::featurize(vocabulary, s);
  std::array<double, kAttributeCount> out{};
  for (std::size_t a = 0; a < kAttributeCount; ++a) {
    out[a] = untrainable[a] ? 0.0 : models[a].probability(x);
  }
  return out;
}

OvrModel train_ovr(std::span<const LabelledAttributes> data, const bow::LogisticOptions& options,
                   double threshold) {
  if (data.empty()) throw Error(kModule, "cannot train on an empty dataset");
  check_threshold(threshold);
  OvrModel m;
  m.thresholds.fill(threshold);
  for (const auto& d : data) {
    for (const auto& t : bow::terms(d.sentence)) m.vocabulary.add(t);
  }
  std::vector<bow::SparseVector> xs;
  xs.reserve(data.size());
  for (const auto& d : data) xs.push_back(bow::featurize(m.vocabulary, d.sentence));

  auto ys = std::make_unique<bool[]>(data.size());
  for (std::size_t a = 0; a < kAttributeCount; ++a) {
    bool any = false;
    for (std::size_t i = 0; i < data.size(); ++i) {
      ys[i] = data[i].labels.test(a);
      any = any || ys[i];
    }
    if (!any) {
      m.untrainable[a] = true;
      m.models[a].weights.assign(m.vocabulary.size(), 0.0);
      continue;
    }
    m.models[a] = bow::train_binary_logistic(xs, std::span<const bool>(ys.get(), data.size()),
                                             m.vocabulary.size(), options);
  }
  return m;
}

AttributeSet predict_attributes(const OvrModel& model, const nlp::TaggedSentence& s) {
  auto p = model.probabilities(s);
  AttributeSet out;
  for (std::size_t a = 0; a < kAttributeCount; ++a) {
    if (!model.untrainable[a] && p[a] >= model.thresholds[a]) out.set(a);
  }
  return out;
}

MultilabelScores multilabel_prf(std::span<const LabelPair> pairs) {
  MultilabelScores s;
  double p_sum = 0;
  double r_sum = 0;
  for (const auto& pair : pairs) {
    const auto overlap = static_cast<double>((pair.predicted & pair.actual).count());
    if (pair.predicted.any()) {
      p_sum += overlap / static_cast<double>(pair.predicted.count());
      ++s.precision_instances;
    }
    if (pair.actual.any()) {
      r_sum += overlap / static_cast<double>(pair.actual.count());
      ++s.recall_instances;
    }
  }
  if (s.precision_instances == 0) throw Error(kModule, "precision is undefined for every instance");
  if (s.recall_instances == 0) throw Error(kModule, "recall is undefined for every instance");
  s.precision = p_sum / static_cast<double>(s.precision_instances);
  s.recall = r_sum / static_cast<double>(s.recall_instances);
  s.f1 = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

AttributeHistogram attribute_histogram(std::span<const ClassifiedAttributes> sentences) {
  AttributeHistogram h{};
  for (const auto& s : sentences) {
    if (s.sentence_class == classify::SentenceClass::kOther) continue;
    const auto column = classify::ordinal(s.sentence_class);
    for (std::size_t a = 0; a < kAttributeCount; ++a) {
      if (s.attributes.test(a)) ++h[a][column];
    }
  }
  return h;
}

nlohmann::json to_json(const AttributeHistogram& histogram) {
  auto rows = nlohmann::json::array();
  for (std::size_t a = 0; a < kAttributeCount; ++a) {
    rows.push_back({{"attribute", kNames[a]},
                    {"strengths", histogram[a][0]},
                    {"weaknesses", histogram[a][1]},
                    {"suggestions", histogram[a][2]}});
  }
  return rows;
}

OvrCrossValidation crossvalidate_ovr(std::span<const LabelledAttributes> data, std::size_t folds,
                                     std::uint64_t seed, const bow::LogisticOptions& options,
                                     double threshold) {
  if (folds < 2) throw Error(kModule, "cross-validation needs at least 2 folds");
  if (folds > data.size()) {
    throw Error(kModule, "cannot split " + std::to_string(data.size()) + " items into " +
                             std::to_string(folds) + " folds");
  }
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 gen(seed);
  seeded_shuffle(std::span<std::size_t>(order), gen);
  std::vector<std::size_t> fold_of(data.size());
  for (std::size_t r = 0; r < order.size(); ++r) fold_of[order[r]] = r % folds;

  OvrCrossValidation cv;
  cv.folds = folds;
  cv.predictions.resize(data.size());
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<LabelledAttributes> train;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (fold_of[i] != f) train.push_back(data[i]);
    }
    auto model = train_ovr(train, options, threshold);
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (fold_of[i] == f) cv.predictions[i] = predict_attributes(model, data[i].sentence);
    }
  }
  std::vector<LabelPair> pairs;
  pairs.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) pairs.push_back({cv.predictions[i], data[i].labels});
  cv.scores = multilabel_prf(pairs);
  return cv;
}

nlohmann::json to_json(const MultilabelScores& scores) {
  return {{"precision", scores.precision},
          {"recall", scores.recall},
          {"f1", scores.f1},
          {"precision_instances", scores.precision_instances},
          {"recall_instances", scores.recall_instances}};
}

}  // namespace pamine::attributes

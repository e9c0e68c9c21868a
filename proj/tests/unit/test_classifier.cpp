#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "pamine/classifier.h"
#include "pamine/error.h"

using namespace pamine;
using namespace pamine::classify;
using nlp::parse_pretagged;

namespace {

LabelledSentence ex(const char* pretagged, SentenceClass c) { return {parse_pretagged(pretagged), c}; }

const nlp::TaggedSentence& tagged(const std::string& text) {
  static std::map<std::string, nlp::TaggedSentence> cache;
  auto it = cache.find(text);
  if (it == cache.end()) it = cache.emplace(text, nlp::Tagger::bundled().tag_text(text)).first;
  return it->second;
}

}  // namespace

TEST_SUITE("classifier") {
  TEST_CASE("bundled pattern rules on example sentences") {
    auto rules = PatternRuleSet::load(nlp::default_data_dir() / "class_rules.tsv");
    CHECK(classify_pattern(tagged("Excellent technology leadership and delivery capabilities along with ability to "
                                  "groom technology champions within the team."),
                           rules) == SentenceClass::kStrength);
    CHECK(classify_pattern(tagged("Need to improve on business development skills, articulation of business and "
                                  "solution benefits."),
                           rules) == SentenceClass::kSuggestion);
    CHECK(classify_pattern(tagged("Tends to stretch himself and team a bit too hard."), rules) ==
          SentenceClass::kWeakness);
    CHECK(classify_pattern(tagged("The weather was mild."), rules) == SentenceClass::kOther);
  }

  TEST_CASE("tie-break order decides among matching classes") {
    PatternRuleSet rules;
    rules.add_keyword(SentenceClass::kStrength, "good");
    rules.add_keyword(SentenceClass::kSuggestion, "should");
    auto s = parse_pretagged("good_JJ but_CC should_MD plan_VB");
    CHECK(rules.matching_classes(s) == std::vector<SentenceClass>{SentenceClass::kStrength, SentenceClass::kSuggestion});
    rules.set_tie_break_order({SentenceClass::kStrength, SentenceClass::kSuggestion, SentenceClass::kWeakness,
                               SentenceClass::kOther});
    CHECK(rules.classify(s) == SentenceClass::kStrength);
    rules.set_tie_break_order({SentenceClass::kSuggestion, SentenceClass::kStrength, SentenceClass::kWeakness,
                               SentenceClass::kOther});
    CHECK(rules.classify(s) == SentenceClass::kSuggestion);
    CHECK_THROWS_AS(rules.set_tie_break_order({SentenceClass::kStrength}), Error);
  }

  TEST_CASE("pattern classification ignores case and outer whitespace") {
    auto rules = PatternRuleSet::parse("STRENGTH\tkeyword\tHard Working\nSUGGESTION\tposseq\t^ VB\n");
    const auto& tagger = nlp::Tagger::bundled();
    CHECK(rules.classify(tagger.tag_text("  HARD working person  ")) == SentenceClass::kStrength);
    CHECK(rules.classify(tagger.tag_text("hard working person")) == SentenceClass::kStrength);
    CHECK(rules.classify(parse_pretagged("improve_VB focus_NN")) == SentenceClass::kSuggestion);
    CHECK(rules.classify(parse_pretagged("the_DT improve_VB")) == SentenceClass::kOther);
  }

  TEST_CASE("a matched sentence is never OTHER") {
    auto rules = PatternRuleSet::load(nlp::default_data_dir() / "class_rules.tsv");
    std::mt19937_64 gen(5);
    const char* words[] = {"good", "should", "lacks", "team", "the", "work", "poor", "needs", "to", "is", "strong"};
    for (int trial = 0; trial < 300; ++trial) {
      std::string text;
      for (std::size_t i = 0, n = 1 + gen() % 8; i < n; ++i) text += std::string(words[gen() % 11]) + " ";
      auto s = nlp::Tagger::bundled().tag_text(text);
      if (!rules.matching_classes(s).empty()) CHECK(rules.classify(s) != SentenceClass::kOther);
    }
  }

  TEST_CASE("rule file errors") {
    CHECK_THROWS_AS(PatternRuleSet::parse("NOPE\tkeyword\tx\n"), Error);
    CHECK_THROWS_AS(PatternRuleSet::parse("STRENGTH\tregex\tx\n"), Error);
    CHECK_THROWS_AS(PatternRuleSet::parse("order\tSTRENGTH>WEAKNESS\n"), Error);
    CHECK_THROWS_AS(PosPattern::parse(""), Error);
  }

  TEST_CASE("naive bayes favours class-specific tokens") {
    std::vector<LabelledSentence> data = {ex("excellent_JJ work_NN", SentenceClass::kStrength),
                                          ex("poor_JJ work_NN", SentenceClass::kWeakness)};
    auto m = train_bow(data, ModelKind::kMultinomialNb);
    auto ex_idx = *m.vocabulary.find("excellent");
    CHECK(m.weights[0][ex_idx] > m.weights[1][ex_idx]);
    CHECK(predict_bow(m, parse_pretagged("excellent_JJ")) == SentenceClass::kStrength);
    for (const auto& w : m.weights) {
      CHECK(w.size() == m.vocabulary.size());
      for (double v : w) CHECK(std::isfinite(v));
    }
  }

  TEST_CASE("naive bayes falls back to the prior") {
    std::vector<LabelledSentence> data = {ex("good_JJ", SentenceClass::kStrength), ex("great_JJ", SentenceClass::kStrength),
                                          ex("poor_JJ", SentenceClass::kWeakness)};
    auto m = train_bow(data, ModelKind::kMultinomialNb);
    CHECK(predict_bow(m, parse_pretagged("unknown_NN words_NNS")) == SentenceClass::kStrength);
    CHECK(predict_bow(m, nlp::TaggedSentence{}) == SentenceClass::kStrength);
  }

  TEST_CASE("naive bayes matches a direct Bayes computation") {
    std::mt19937_64 gen(3);
    const char* vocab[] = {"a", "b", "c", "d", "e", "f", "g", "h"};
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<LabelledSentence> data;
      for (int i = 0; i < 12; ++i) {
        std::string text;
        for (std::size_t j = 0, n = 1 + gen() % 4; j < n; ++j) text += std::string(vocab[gen() % 8]) + "_NN ";
        data.push_back({parse_pretagged(text), kAllClasses[i % 3]});
      }
      TrainOptions opts;
      opts.nb_smoothing = 0.5 + static_cast<double>(gen() % 3);
      auto m = train_bow(data, ModelKind::kMultinomialNb, opts);

      std::map<std::string, int> seen;
      for (const auto& d : data)
        for (const auto& t : d.sentence.tokens) seen[t.lower] = 1;
      const double v = static_cast<double>(seen.size());
      std::string probe_text;
      for (std::size_t j = 0, n = gen() % 5; j < n; ++j) probe_text += std::string(vocab[gen() % 8]) + "_NN ";
      auto probe = parse_pretagged(probe_text);

      std::vector<double> expected;
      for (std::size_t c = 0; c < 3; ++c) {
        double docs = 0, total = 0;
        std::map<std::string, double> counts;
        for (const auto& d : data) {
          if (ordinal(d.label) != c) continue;
          ++docs;
          for (const auto& t : d.sentence.tokens) {
            ++counts[t.lower];
            ++total;
          }
        }
        double score = std::log(docs / static_cast<double>(data.size()));
        for (const auto& t : probe.tokens) {
          if (!seen.count(t.lower)) continue;
          score += std::log((counts[t.lower] + opts.nb_smoothing) / (total + opts.nb_smoothing * v));
        }
        expected.push_back(score);
      }
      auto got = m.scores(probe);
      REQUIRE(got.size() == 3);
      std::size_t best = 0;
      for (std::size_t c = 0; c < 3; ++c) {
        CHECK(got[c] == doctest::Approx(expected[c]).epsilon(1e-12));
        if (expected[c] > expected[best]) best = c;
      }
      CHECK(predict_bow(m, probe) == kAllClasses[best]);
    }
  }

  TEST_CASE("logistic regression fits a separable toy set") {
    std::vector<LabelledSentence> data = {ex("great_JJ", SentenceClass::kStrength), ex("weak_JJ", SentenceClass::kWeakness),
                                          ex("should_MD", SentenceClass::kSuggestion), ex("weather_NN", SentenceClass::kOther)};
    auto m = train_bow(data, ModelKind::kLogisticRegression);
    for (const auto& d : data) CHECK(predict_bow(m, d.sentence) == d.label);
  }

  TEST_CASE("degenerate training data") {
    std::vector<LabelledSentence> one_class = {ex("a_NN", SentenceClass::kStrength), ex("b_NN", SentenceClass::kStrength)};
    CHECK_THROWS_AS(train_bow(one_class, ModelKind::kMultinomialNb), Error);
    std::vector<LabelledSentence> empty_vocab = {{nlp::TaggedSentence{}, SentenceClass::kStrength},
                                                 {parse_pretagged("._."), SentenceClass::kWeakness}};
    CHECK_THROWS_AS(train_bow(empty_vocab, ModelKind::kLogisticRegression), Error);
  }

  TEST_CASE("model json round trip") {
    std::vector<LabelledSentence> data = {ex("excellent_JJ work_NN", SentenceClass::kStrength),
                                          ex("poor_JJ work_NN", SentenceClass::kWeakness)};
    for (auto kind : {ModelKind::kMultinomialNb, ModelKind::kLogisticRegression}) {
      auto m = train_bow(data, kind);
      auto back = bow_model_from_json(nlohmann::json::parse(to_json(m).dump()));
      auto probe = parse_pretagged("excellent_JJ poor_JJ work_NN");
      CHECK(back.scores(probe) == m.scores(probe));
    }
  }

  TEST_CASE("metrics from counts") {
    auto m = metrics_from_counts(8, 2, 2);
    CHECK(m.precision == doctest::Approx(0.8));
    CHECK(m.recall == doctest::Approx(0.8));
    CHECK(m.f1 == doctest::Approx(0.8));
    auto z = metrics_from_counts(0, 0, 0);
    CHECK(z.f1 == 0);
  }

  TEST_CASE("evaluate predictions") {
    std::vector<SentenceClass> gold = {SentenceClass::kStrength, SentenceClass::kStrength, SentenceClass::kWeakness,
                                       SentenceClass::kWeakness};
    auto perfect = evaluate_predictions(gold, gold);
    CHECK(perfect.accuracy == 1.0);
    CHECK(perfect.per_class[0].f1 == 1.0);
    CHECK(perfect.per_class[1].f1 == 1.0);
    std::vector<SentenceClass> constant(4, SentenceClass::kStrength);
    auto half = evaluate_predictions(gold, constant);
    CHECK(half.accuracy == 0.5);
    for (const auto& c : half.per_class) {
      if (c.precision + c.recall > 0) CHECK(c.f1 == 2 * c.precision * c.recall / (c.precision + c.recall));
    }
    std::vector<SentenceClass> short_pred(3, SentenceClass::kStrength);
    CHECK_THROWS_AS(evaluate_predictions(gold, short_pred), Error);
  }

  TEST_CASE("stratified folds") {
    std::vector<SentenceClass> labels;
    for (int i = 0; i < 20; ++i) labels.push_back(i < 10 ? SentenceClass::kStrength : SentenceClass::kWeakness);
    auto f = stratified_folds(labels, 5, 42);
    REQUIRE(f.size() == 20);
    std::map<std::pair<std::size_t, int>, int> per;
    for (std::size_t i = 0; i < 20; ++i) ++per[{f[i], i < 10}];
    for (std::size_t k = 0; k < 5; ++k) {
      CHECK(per[{k, 0}] == 2);
      CHECK(per[{k, 1}] == 2);
    }
    CHECK(stratified_folds(labels, 5, 42) == f);
    CHECK(stratified_folds(labels, 5, 43) != f);
    CHECK_THROWS_AS(stratified_folds(labels, 1, 42), Error);
    CHECK_THROWS_AS(stratified_folds(labels, 21, 42), Error);
  }

  TEST_CASE("cross-validation with leaked labels is perfect") {
    std::vector<LabelledSentence> data;
    for (int i = 0; i < 20; ++i) {
      data.push_back(ex(i % 2 ? "label_strength_NN" : "label_weakness_NN",
                        i % 2 ? SentenceClass::kStrength : SentenceClass::kWeakness));
    }
    for (auto kind : {ModelKind::kMultinomialNb, ModelKind::kLogisticRegression}) {
      auto cv = crossvalidate(data, kind, 5, 42);
      CHECK(cv.report.accuracy == 1.0);
      CHECK(cv.report.per_class[ordinal(SentenceClass::kStrength)].f1 == 1.0);
      CHECK(cv.report.per_class[ordinal(SentenceClass::kWeakness)].f1 == 1.0);
    }
  }
}

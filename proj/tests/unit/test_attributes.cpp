#include <random>

#include "doctest.h"
#include "pamine/attributes.h"
#include "pamine/error.h"

using namespace pamine;
using namespace pamine::attributes;
using classify::SentenceClass;
using nlp::parse_pretagged;

namespace {

constexpr auto FE = Attribute::kFunctionalExcellence;
constexpr auto BT = Attribute::kBuildingEffectiveTeams;
constexpr auto IE = Attribute::kInterpersonalEffectiveness;
constexpr auto CF = Attribute::kCustomerFocus;

std::vector<LabelledAttributes> toy() {
  return {{parse_pretagged("customer_NN satisfaction_NN"), make_set({CF})},
          {parse_pretagged("listens_VBZ with_IN empathy_NN"), make_set({IE})},
          {parse_pretagged("builds_VBZ teams_NNS"), make_set({BT})},
          {parse_pretagged("technology_NN expert_NN"), make_set({FE})}};
}

}  // namespace

TEST_SUITE("attributes") {
  TEST_CASE("names and ordinals") {
    CHECK(kAttributeCount == 15);
    CHECK(to_string(FE) == "FUNCTIONAL_EXCELLENCE");
    CHECK(to_string(Attribute::kTimelyDecisionMaking) == "TIMELY_DECISION_MAKING");
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
      CHECK(attribute_from_string(to_string(attribute_at(i))) == attribute_at(i));
    }
    CHECK_THROWS_AS(attribute_from_string("NOT_AN_ATTRIBUTE"), Error);
    auto set = make_set({CF, FE});
    CHECK(to_json(set).dump() == R"(["FUNCTIONAL_EXCELLENCE","CUSTOMER_FOCUS"])");
    CHECK(attribute_set_from_json(to_json(set)) == set);
  }

  TEST_CASE("cue matcher on lemma runs") {
    auto m = AttributeCueMatcher::parse("CUSTOMER_FOCUS\tcustomer\nBUILDING_EFFECTIVE_TEAMS\tgroom champion\n");
    CHECK(m.size() == 2);
    CHECK(m.match(parse_pretagged("serves_VBZ customers_NNS")) == make_set({CF}));
    CHECK(m.match(parse_pretagged("groom_VB technology_NN champions_NNS")).none());
    CHECK(m.match(parse_pretagged("groom_VB champions_NNS")) == make_set({BT}));
    CHECK_THROWS_AS(AttributeCueMatcher::parse("BOGUS\tx\n"), Error);
  }

  TEST_CASE("bundled cues map the two-attribute strength sentence") {
    auto m = AttributeCueMatcher::load(nlp::default_data_dir() / "attribute_cues.tsv");
    auto s = nlp::Tagger::bundled().tag_text(
        "Excellent technology leadership and delivery capabilities along with ability to groom technology "
        "champions within the team.");
    auto got = m.match(s);
    CHECK(got.test(ordinal(FE)));
    CHECK(got.test(ordinal(BT)));
  }

  TEST_CASE("one-vs-rest training") {
    auto data = toy();
    // One positive among four needs a lighter penalty to clear 0.5.
    bow::LogisticOptions light;
    light.l2 = 0.1;
    auto m = train_ovr(data, light);
    auto idx = *m.vocabulary.find("customer");
    CHECK(m.models[ordinal(CF)].weights[idx] > 0);
    CHECK(m.untrainable[ordinal(Attribute::kBusinessAcumen)]);
    for (const auto& d : data) CHECK(predict_attributes(m, d.sentence) == d.labels);
    CHECK(predict_attributes(m, nlp::TaggedSentence{}).none());
    CHECK(predict_attributes(m, parse_pretagged("customer_NN")).test(ordinal(CF)));
    CHECK(predict_attributes(m, parse_pretagged("she_PRP listens_VBZ with_IN empathy_NN")) == make_set({IE}));
    std::vector<LabelledAttributes> none;
    CHECK_THROWS_AS(train_ovr(none), Error);
    CHECK_THROWS_AS(train_ovr(data, {}, 1.0), Error);
  }

  TEST_CASE("higher thresholds never add labels") {
    auto data = toy();
    std::vector<double> thresholds{0.05, 0.2, 0.4, 0.5, 0.6, 0.8, 0.95};
    std::vector<OvrModel> models;
    for (double t : thresholds) models.push_back(train_ovr(data, {}, t));
    for (const char* probe : {"customer_NN", "empathy_NN teams_NNS", "", "technology_NN customer_NN x_NN"}) {
      auto s = parse_pretagged(probe);
      for (std::size_t i = 1; i < models.size(); ++i) {
        auto lo = predict_attributes(models[i - 1], s);
        auto hi = predict_attributes(models[i], s);
        CHECK((hi & ~lo).none());
      }
    }
  }

  TEST_CASE("multilabel scores") {
    std::vector<LabelPair> single{{make_set({FE, BT}), make_set({BT, IE})}};
    auto s = multilabel_prf(single);
    CHECK(s.precision == 0.5);
    CHECK(s.recall == 0.5);
    CHECK(s.f1 == 0.5);

    std::vector<LabelPair> same{{make_set({FE}), make_set({FE})}, {make_set({CF, BT}), make_set({CF, BT})}};
    s = multilabel_prf(same);
    CHECK(s.precision == 1.0);
    CHECK(s.recall == 1.0);
    CHECK(s.f1 == 1.0);

    std::vector<LabelPair> skip{{AttributeSet{}, make_set({CF})}, {make_set({CF}), make_set({CF})}};
    s = multilabel_prf(skip);
    CHECK(s.precision == 1.0);
    CHECK(s.precision_instances == 1);
    CHECK(s.recall == 0.5);
    CHECK(s.recall_instances == 2);
    CHECK(s.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

    std::vector<LabelPair> no_pred{{AttributeSet{}, make_set({CF})}};
    CHECK_THROWS_AS(multilabel_prf(no_pred), Error);
    std::vector<LabelPair> no_actual{{make_set({CF}), AttributeSet{}}};
    CHECK_THROWS_AS(multilabel_prf(no_actual), Error);
  }

  TEST_CASE("multilabel F is the harmonic mean of P and R") {
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<LabelPair> pairs;
      for (int i = 0; i < 8; ++i) pairs.push_back({AttributeSet(gen() & 0x7fff), AttributeSet(gen() & 0x7fff)});
      pairs.push_back({make_set({FE}), make_set({FE})});
      auto s = multilabel_prf(pairs);
      CHECK(s.precision >= 0);
      CHECK(s.precision <= 1);
      CHECK(s.recall >= 0);
      CHECK(s.recall <= 1);
      double f = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
      CHECK(s.f1 == f);
    }
  }

  TEST_CASE("attribute histogram") {
    std::vector<ClassifiedAttributes> none;
    for (const auto& row : attribute_histogram(none)) CHECK(row == std::array<std::size_t, 3>{0, 0, 0});

    std::vector<ClassifiedAttributes> one{{SentenceClass::kStrength, make_set({FE, BT})}};
    auto h = attribute_histogram(one);
    CHECK(h[ordinal(FE)][0] == 1);
    CHECK(h[ordinal(BT)][0] == 1);
    CHECK(h[ordinal(CF)][0] == 0);

    std::vector<ClassifiedAttributes> mixed{{SentenceClass::kStrength, make_set({FE})},
                                            {SentenceClass::kStrength, make_set({FE, CF})},
                                            {SentenceClass::kWeakness, make_set({IE})},
                                            {SentenceClass::kSuggestion, make_set({IE, CF})},
                                            {SentenceClass::kSuggestion, AttributeSet{}},
                                            {SentenceClass::kOther, make_set({FE})}};
    h = attribute_histogram(mixed);
    CHECK(h[ordinal(FE)] == std::array<std::size_t, 3>{2, 0, 0});
    CHECK(h[ordinal(CF)] == std::array<std::size_t, 3>{1, 0, 1});
    CHECK(h[ordinal(IE)] == std::array<std::size_t, 3>{0, 1, 1});
    CHECK(h[ordinal(BT)] == std::array<std::size_t, 3>{0, 0, 0});
  }

  TEST_CASE("one-vs-rest cross-validation is seeded") {
    std::vector<LabelledAttributes> data;
    for (int i = 0; i < 6; ++i) {
      auto base = toy();
      data.insert(data.end(), base.begin(), base.end());
    }
    auto a = crossvalidate_ovr(data, 3, 42);
    auto b = crossvalidate_ovr(data, 3, 42);
    CHECK(a.predictions == b.predictions);
    CHECK(a.scores.f1 == b.scores.f1);
    CHECK(a.scores.f1 > 0.9);
  }
}

#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "pamine/clustering.h"
#include "pamine/error.h"

using namespace pamine;
using namespace pamine::clustering;
using classify::SentenceClass;

namespace {

EmbeddingTable table_of(std::initializer_list<std::pair<const char*, std::vector<float>>> rows) {
  EmbeddingTable t;
  for (const auto& [w, v] : rows) t.add(w, v);
  return t;
}

}  // namespace

TEST_SUITE("clustering") {
  TEST_CASE("embedding parsing") {
    auto t = EmbeddingTable::parse("king 0.1 0.2\nqueen 0.2 0.1\n");
    CHECK(t.size() == 2);
    CHECK(t.dimension() == 2);
    CHECK((*t.find("queen"))[0] == doctest::Approx(0.2f));
    CHECK_FALSE(t.find("prince"));

    try {
      EmbeddingTable::parse("a 1 2\nb 1 2 3\n", "vec.txt");
      FAIL("mismatch accepted");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("vec.txt:2") != std::string::npos);
    }
    CHECK_THROWS_AS(EmbeddingTable::parse("a 1 x\n"), Error);

    auto empty = EmbeddingTable::parse("");
    CHECK(empty.size() == 0);
    std::vector<NounCount> nouns;
    CHECK(cluster_nouns(nouns, empty, 0.5).empty());

    std::vector<std::string> warnings;
    auto dup = EmbeddingTable::parse("2 2\nA 1 0\na 0 1\n", "<memory>", &warnings);
    CHECK(dup.size() == 1);
    CHECK(warnings.size() == 1);
    CHECK((*dup.find("a"))[0] == 1.0f);
  }

  TEST_CASE("cosine") {
    std::vector<double> v{0.3, -2, 5};
    CHECK(cosine(v, v) == doctest::Approx(1.0));
    std::vector<double> x{1, 0}, y{0, 1}, p{1, 2}, q{2, 1}, z{0, 0};
    CHECK(cosine(x, y) == 0.0);
    CHECK(cosine(p, q) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK_THROWS_AS(cosine(x, z), Error);
    CHECK_THROWS_AS(cosine(x, v), Error);
  }

  TEST_CASE("noun extraction") {
    const auto& tagger = nlp::Tagger::bundled();
    std::vector<ClassifiedSentence> sents{{tagger.tag_text("Excellent technology leadership"), SentenceClass::kStrength},
                                          {tagger.tag_text("Poor planning"), SentenceClass::kWeakness}};
    std::vector<SentenceClass> strength{SentenceClass::kStrength};
    std::vector<SentenceClass> suggestion{SentenceClass::kSuggestion};
    CHECK(extract_nouns(sents, strength, {}) == std::vector<NounCount>{{"technology", 1}, {"leadership", 1}});
    CHECK(extract_nouns(sents, suggestion, {}).empty());
    CHECK(extract_nouns(sents, strength, {"technology"}) == std::vector<NounCount>{{"leadership", 1}});

    std::vector<ClassifiedSentence> coach{
        {nlp::parse_pretagged("coaching_NN team_NN coach_NN team_NN"), SentenceClass::kStrength}};
    CHECK(extract_nouns(coach, strength, {}) ==
          std::vector<NounCount>{{"team", 2}, {"coaching", 1}, {"coach", 1}});
  }

  TEST_CASE("leader clustering examples") {
    auto t = table_of({{"a", {1, 0}}, {"b", {0.99f, 0.14f}}, {"c", {0, 1}}, {"twin", {1, 0}}});
    std::vector<NounCount> three{{"a", 1}, {"b", 1}, {"c", 1}};
    auto cl = cluster_nouns(three, t, 0.9);
    REQUIRE(cl.size() == 2);
    CHECK(cl[0].label() == "a b");
    CHECK(cl[1].label() == "c");
    CHECK(cl[0].centroid[0] == doctest::Approx((1 + 0.99f) / 2));

    std::vector<NounCount> single{{"a", 3}};
    cl = cluster_nouns(single, t, 0.5);
    REQUIRE(cl.size() == 1);
    CHECK(cl[0].count == 3);

    std::vector<NounCount> twins{{"a", 1}, {"twin", 1}};
    CHECK(cluster_nouns(twins, t, 0.5).size() == 1);

    std::vector<NounCount> with_oov{{"a", 1}, {"ghost", 5}, {"a", 2}};
    cl = cluster_nouns(with_oov, t, 0.5);
    REQUIRE(cl.size() == 2);
    CHECK(cl[0].oov);
    CHECK(cl[0].count == 5);
    CHECK(cl[1].count == 3);
    CHECK_THROWS_AS(cluster_nouns(with_oov, t, 0.0), Error);
    CHECK_THROWS_AS(cluster_nouns(with_oov, t, 1.0), Error);
  }

  TEST_CASE("members join at or above tau against the running centroid") {
    std::mt19937_64 gen(23);
    std::normal_distribution<float> nd;
    for (int trial = 0; trial < 50; ++trial) {
      EmbeddingTable t;
      std::vector<NounCount> nouns;
      std::map<std::string, std::vector<double>> vecs;
      for (int i = 0; i < 15; ++i) {
        std::vector<float> v{std::fabs(nd(gen)), std::fabs(nd(gen)), nd(gen)};
        auto w = "n" + std::to_string(i);
        t.add(w, v);
        vecs[w] = {v[0], v[1], v[2]};
        nouns.push_back({w, 1 + gen() % 4});
      }
      const double tau = 0.6;
      for (const auto& c : cluster_nouns(nouns, t, tau)) {
        std::vector<double> sum(3, 0);
        for (std::size_t m = 0; m < c.members.size(); ++m) {
          const auto& v = vecs[c.members[m].noun];
          if (m > 0) {
            std::vector<double> centroid(3);
            for (int d = 0; d < 3; ++d) centroid[d] = sum[d] / static_cast<double>(m);
            CHECK(cosine(centroid, v) >= tau);
          }
          for (int d = 0; d < 3; ++d) sum[d] += v[d];
        }
        for (int d = 0; d < 3; ++d) {
          CHECK(c.centroid[d] == doctest::Approx(sum[d] / static_cast<double>(c.members.size())));
        }
      }
    }
  }

  TEST_CASE("cluster report ordering") {
    auto t = table_of({{"x", {1, 0}}, {"y", {0, 1}}, {"z", {-1, 0}}});
    std::vector<NounCount> nouns{{"x", 1}, {"y", 4}, {"z", 1}};
    auto cl = cluster_nouns(nouns, t, 0.9);
    auto j = cluster_report(cl);
    REQUIRE(j.size() == 3);
    CHECK(j[0]["label"] == "y");
    CHECK(j[1]["label"] == "x");
    CHECK(j[2]["label"] == "z");
    CHECK(j[0]["members"][0]["frequency"] == 4);
  }
}

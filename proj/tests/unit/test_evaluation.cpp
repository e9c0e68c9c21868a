#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "pamine/error.h"
#include "pamine/evaluation.h"

using namespace pamine;
using namespace pamine::evaluation;

namespace {

// Welch statistic and p-value computed with Boost.Math.
struct Reference {
  double t, df, p;
};

Reference boost_welch(const std::vector<double>& a, const std::vector<double>& b) {
  auto mv = [](const std::vector<double>& x) {
    double m = 0;
    for (double v : x) m += v;
    m /= static_cast<double>(x.size());
    double ss = 0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::pair{m, ss / static_cast<double>(x.size() - 1)};
  };
  auto [ma, va] = mv(a);
  auto [mb, vb] = mv(b);
  double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  double se2 = va / na + vb / nb;
  double t = (ma - mb) / std::sqrt(se2);
  double df = se2 * se2 / ((va / na) * (va / na) / (na - 1) + (vb / nb) * (vb / nb) / (nb - 1));
  boost::math::students_t dist(df);
  double p = 2 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
  return {t, df, p};
}

}  // namespace

TEST_SUITE("evaluation") {
  TEST_CASE("rouge examples") {
    CHECK(rouge1("vast knowledge", "Vast knowledge!").f1 == 1.0);
    CHECK(rouge1("alpha beta", "gamma delta").f1 == 0.0);
    auto s = rouge1("effective communication team player", "effective communication skills");
    CHECK(s.overlap == 2);
    CHECK(s.precision == 0.5);
    CHECK(s.recall == 2.0 / 3.0);
    CHECK(s.f1 == doctest::Approx(4.0 / 7.0).epsilon(1e-15));
    auto clipped = rouge1("team team team", "team player team");
    CHECK(clipped.overlap == 2);
    CHECK(rouge1("", "x").f1 == 0.0);
    CHECK_THROWS_AS(rouge1("x", " , "), Error);
    CHECK(rouge_tokens("Café-Team, x1") == std::vector<std::string>{"café", "team", "x1"});
  }

  TEST_CASE("rouge swap exchanges precision and recall") {
    std::mt19937_64 gen(31);
    const char* words[] = {"a", "b", "c", "d", "e"};
    for (int trial = 0; trial < 300; ++trial) {
      std::string x, y;
      for (std::size_t i = 0, n = 1 + gen() % 6; i < n; ++i) x += std::string(words[gen() % 5]) + " ";
      for (std::size_t i = 0, n = 1 + gen() % 6; i < n; ++i) y += std::string(words[gen() % 5]) + " ";
      auto xy = rouge1(x, y);
      auto yx = rouge1(y, x);
      CHECK(xy.precision == yx.recall);
      CHECK(xy.recall == yx.precision);
      CHECK(xy.f1 == doctest::Approx(yx.f1).epsilon(1e-15));
      CHECK(xy.f1 <= 1.0);
      CHECK(xy.overlap <= xy.candidate_len);
      CHECK(xy.overlap <= xy.reference_len);
    }
  }

  TEST_CASE("aggregate") {
    std::vector<double> one{0.5};
    auto g = aggregate(one);
    CHECK(g.mean == 0.5);
    CHECK(g.stdev == 0);
    std::vector<double> two{0.2, 0.4};
    g = aggregate(two);
    CHECK(g.mean == doctest::Approx(0.3));
    CHECK(g.stdev == doctest::Approx(std::sqrt(0.02)));
    std::vector<double> flat{0.7, 0.7, 0.7};
    CHECK(aggregate(flat).stdev == 0);
    std::vector<double> none;
    CHECK_THROWS_AS(aggregate(none), Error);
  }

  TEST_CASE("incomplete beta against Boost") {
    for (double a : {0.5, 1.0, 2.5, 49.5}) {
      for (double b : {0.5, 3.0}) {
        for (double x : {0.0, 0.01, 0.3, 0.5, 0.9, 0.999, 1.0}) {
          CHECK(incomplete_beta(a, b, x) == doctest::Approx(boost::math::ibeta(a, b, x)).epsilon(1e-12));
        }
      }
    }
    CHECK_THROWS_AS(incomplete_beta(0, 1, 0.5), Error);
    CHECK_THROWS_AS(incomplete_beta(1, 1, 1.5), Error);
  }

  TEST_CASE("welch against Boost") {
    std::vector<std::pair<std::vector<double>, std::vector<double>>> fixtures = {
        {{0.24, 0.25, 0.26}, {0.25, 0.26, 0.27}},
        {{0.1, 0.4, 0.35, 0.2, 0.5}, {0.3, 0.33, 0.31}},
        {{1.0, 2.0, 3.0, 4.0, 5.0, 6.0}, {10.0, 14.0, 9.5, 20.0}}};
    for (const auto& [a, b] : fixtures) {
      auto r = welch_ttest(a, b);
      auto ref = boost_welch(a, b);
      CHECK(r.t == doctest::Approx(ref.t).epsilon(1e-10));
      CHECK(r.df == doctest::Approx(ref.df).epsilon(1e-10));
      CHECK(r.p_value == doctest::Approx(ref.p).epsilon(1e-9));
      CHECK(r.significant == (r.p_value < 0.05));
    }
  }

  TEST_CASE("welch edge cases") {
    std::vector<double> a{0.1, 0.3, 0.2};
    auto same = welch_ttest(a, a);
    CHECK(same.t == 0);
    CHECK(same.p_value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(same.significant);

    std::vector<double> zeros{0, 0, 0, 0}, ones{1, 1, 1, 1};
    auto split = welch_ttest(zeros, ones);
    CHECK(split.p_value == 0);
    CHECK(std::isinf(split.t));
    CHECK(split.df == 6);
    CHECK(split.significant);
    CHECK(welch_ttest(zeros, zeros).p_value == 1.0);

    std::vector<double> jitter_a{0, 1e-6, 2e-6, 0}, jitter_b{1, 1 + 1e-6, 1, 1 - 1e-6};
    auto sep = welch_ttest(jitter_a, jitter_b);
    CHECK(sep.p_value < 1e-9);
    CHECK(sep.significant);

    std::vector<double> single{0.5};
    CHECK_THROWS_AS(welch_ttest(single, a), Error);
    CHECK_THROWS_AS(welch_ttest(a, a, 1.5), Error);
  }

  TEST_CASE("welch from summary statistics") {
    auto r = welch_from_stats({100, 0.243, 0.15}, {100, 0.258, 0.148}, 0.05);
    CHECK_FALSE(r.significant);
    boost::math::students_t dist(r.df);
    CHECK(r.p_value == doctest::Approx(2 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t)))).epsilon(1e-9));
  }

  TEST_CASE("summary files") {
    auto set = parse_summaries(R"({"employee_id":"E1","summary":"a b"})"
                               "\n\n"
                               R"({"employee_id":"E2","summary":"c"})");
    CHECK(set.size() == 2);
    CHECK(set.at("E2") == "c");
    CHECK_THROWS_AS(parse_summaries(R"({"employee_id":"E1","summary":"a"})"
                                    "\n"
                                    R"({"employee_id":"E1","summary":"b"})"),
                    Error);
    CHECK_THROWS_AS(parse_summaries(R"({"employee_id":"E1"})"), Error);
  }

  TEST_CASE("system comparison") {
    SummarySet gold{{"E1", "humble nature, vast knowledge"}, {"E2", "team player"}, {"E3", "quick learner"}};
    SummarySet other{{"E1", "vast knowledge"}, {"E2", "player"}, {"E3", "slow"}};
    auto report = compare_systems(gold, {{"gold", gold}, {"copy", gold}, {"other", other}}, 0.05);
    REQUIRE(report.systems.size() == 3);
    CHECK(report.systems[0].f1.mean == 1.0);
    REQUIRE(report.pairs.size() == 3);
    CHECK(report.pairs[0].a == "gold");
    CHECK(report.pairs[0].b == "copy");
    CHECK(report.pairs[0].test.p_value == 1.0);
    auto j = to_json(report);
    CHECK(j["systems"][0]["per_employee"].size() == 3);

    SummarySet missing{{"E1", "x"}};
    CHECK_THROWS_AS(compare_systems(gold, {{"m", missing}}, 0.05), Error);
    SummarySet extra = gold;
    extra["E9"] = "x";
    CHECK_THROWS_AS(compare_systems(gold, {{"x", extra}}, 0.05), Error);
    CHECK_THROWS_AS(compare_systems(gold, {{"a", gold}, {"a", gold}}, 0.05), Error);
  }

  TEST_CASE("baseline sentence budget") {
    CHECK(baseline_sentence_budget(1) == 1);
    CHECK(baseline_sentence_budget(3) == 1);
    CHECK(baseline_sentence_budget(4) == 2);
    CHECK(baseline_sentence_budget(7) == 3);
  }
}

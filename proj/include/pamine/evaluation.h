#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace pamine::evaluation {

struct RougeScore {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::size_t overlap = 0;
  std::size_t candidate_len = 0;
  std::size_t reference_len = 0;
};

// Lowercased maximal alphanumeric runs; every other byte separates tokens.
std::vector<std::string> rouge_tokens(std::string_view text);

// Clipped unigram overlap. An empty candidate scores zero; an empty
// reference is an error.
RougeScore rouge1(std::string_view candidate, std::string_view reference);

struct Aggregate {
  std::size_t n = 0;
  double mean = 0;
  double stdev = 0;  // sample (n - 1); 0 when n == 1
};

Aggregate aggregate(std::span<const double> scores);

// Regularized incomplete beta I_x(a, b) by continued fraction.
double incomplete_beta(double a, double b, double x);

// Two-sided p-value of a t statistic with `df` degrees of freedom.
double student_t_two_sided_p(double t, double df);

struct WelchResult {
  double t = 0;
  double df = 0;
  double p_value = 1;
  double alpha = 0.05;
  bool significant = false;  // p < alpha
};

// Welch's unequal-variance test with Welch-Satterthwaite degrees of freedom.
// When both variances vanish, equal means give t = 0 and p = 1, unequal
// means an infinite t with p = 0 and df = n_a + n_b - 2.
WelchResult welch_ttest(std::span<const double> a, std::span<const double> b, double alpha = 0.05);
WelchResult welch_from_stats(const Aggregate& a, const Aggregate& b, double alpha = 0.05);

// employee_id -> summary text.
using SummarySet = std::map<std::string, std::string>;

// JSONL lines of {"employee_id", "summary"}.
SummarySet load_summaries(const std::filesystem::path& path);
SummarySet parse_summaries(std::string_view content, std::string_view origin = "<memory>");

struct SystemScores {
  std::string name;
  std::vector<std::string> employee_ids;  // sorted
  std::vector<RougeScore> scores;         // parallel to employee_ids
  Aggregate f1;
};

struct PairwiseTest {
  std::string a;
  std::string b;
  WelchResult test;
};

struct ComparisonReport {
  double alpha = 0.05;
  std::vector<SystemScores> systems;  // input order
  std::vector<PairwiseTest> pairs;    // every unordered pair, input order
};

// Sentence budget handed to sentence-extraction baselines for a phrase
// budget k (three phrases per sentence, rounded up).
std::size_t baseline_sentence_budget(std::size_t k);

// Every system must cover exactly the gold employee set.
ComparisonReport compare_systems(const SummarySet& gold,
                                 const std::vector<std::pair<std::string, SummarySet>>& systems, double alpha);

nlohmann::json to_json(const RougeScore& s);
nlohmann::json to_json(const WelchResult& r);
nlohmann::json to_json(const ComparisonReport& r);

}  // namespace pamine::evaluation

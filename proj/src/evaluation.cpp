#include "pamine/evaluation.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

#include "pamine/error.h"
#include "pamine/text.h"

namespace pamine::evaluation {

namespace {

constexpr const char* kModule = "evaluation";

void check_alpha(double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw Error(kModule, "alpha must lie in (0, 1), got " + std::to_string(alpha));
}

// Continued fraction for I_x(a, b), modified Lentz; converges for
// x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 500;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1, qam = a - 1;
  double c = 1;
  double d = 1 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1) < kEps) return h;
  }
  throw Error(kModule, "incomplete beta continued fraction did not converge");
}

}  // namespace

std::vector<std::string> rouge_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (text::is_alnum(c)) {
      cur += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

RougeScore rouge1(std::string_view candidate, std::string_view reference) {
  const auto ref = rouge_tokens(reference);
  if (ref.empty()) throw Error(kModule, "empty reference summary");
  const auto cand = rouge_tokens(candidate);
  std::unordered_map<std::string, std::size_t> ref_counts;
  for (const auto& t : ref) ++ref_counts[t];

  RougeScore s;
  s.candidate_len = cand.size();
  s.reference_len = ref.size();
  for (const auto& t : cand) {
    auto it = ref_counts.find(t);
    if (it != ref_counts.end() && it->second > 0) {
      --it->second;
      ++s.overlap;
    }
  }
  const auto overlap = static_cast<double>(s.overlap);
  s.precision = s.candidate_len ? overlap / static_cast<double>(s.candidate_len) : 0.0;
  s.recall = overlap / static_cast<double>(s.reference_len);
  s.f1 = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

Aggregate aggregate(std::span<const double> scores) {
  if (scores.empty()) throw Error(kModule, "cannot aggregate an empty score list");
  Aggregate g;
  g.n = scores.size();
  double sum = 0;
  for (double v : scores) sum += v;
  g.mean = sum / static_cast<double>(g.n);
  // A constant list has exactly zero spread; rounding in the mean would not.
  const bool constant = std::all_of(scores.begin(), scores.end(), [&](double v) { return v == scores.front(); });
  if (constant) g.mean = scores.front();
  if (g.n > 1 && !constant) {
    double ss = 0;
    for (double v : scores) ss += (v - g.mean) * (v - g.mean);
    g.stdev = std::sqrt(ss / static_cast<double>(g.n - 1));
  }
  return g;
}

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0 && b > 0)) throw Error(kModule, "incomplete beta needs positive shape parameters");
  if (!(x >= 0 && x <= 1)) throw Error(kModule, "incomplete beta argument outside [0, 1]");
  if (x == 0) return 0;
  if (x == 1) return 1;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1) / (a + b + 2)) return front * beta_continued_fraction(a, b, x) / a;
  return 1 - front * beta_continued_fraction(b, a, 1 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0)) throw Error(kModule, "degrees of freedom must be positive");
  if (std::isnan(t)) throw Error(kModule, "t statistic is NaN");
  if (std::isinf(t)) return 0;
  return incomplete_beta(df / 2, 0.5, df / (df + t * t));
}

WelchResult welch_from_stats(const Aggregate& a, const Aggregate& b, double alpha) {
  check_alpha(alpha);
  if (a.n < 2 || b.n < 2) throw Error(kModule, "Welch test needs at least 2 scores per sample");
  if (a.stdev < 0 || b.stdev < 0) throw Error(kModule, "negative standard deviation");
  WelchResult r;
  r.alpha = alpha;
  const double na = static_cast<double>(a.n), nb = static_cast<double>(b.n);
  const double va = a.stdev * a.stdev / na;
  const double vb = b.stdev * b.stdev / nb;
  const double diff = a.mean - b.mean;
  if (va + vb == 0) {
    r.df = na + nb - 2;
    if (diff == 0) {
      r.t = 0;
      r.p_value = 1;
    } else {
      r.t = diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
      r.p_value = 0;
    }
  } else {
    r.t = diff / std::sqrt(va + vb);
    r.df = (va + vb) * (va + vb) / (va * va / (na - 1) + vb * vb / (nb - 1));
    r.p_value = student_t_two_sided_p(r.t, r.df);
  }
  r.significant = r.p_value < alpha;
  return r;
}

WelchResult welch_ttest(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.size() < 2 || b.size() < 2) throw Error(kModule, "Welch test needs at least 2 scores per sample");
  return welch_from_stats(aggregate(a), aggregate(b), alpha);
}

SummarySet load_summaries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(kModule, "cannot open summary file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_summaries(ss.str(), path.string());
}

SummarySet parse_summaries(std::string_view content, std::string_view origin) {
  SummarySet out;
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    auto where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(kModule, where + "invalid JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("employee_id") || !j["employee_id"].is_string() ||
        !j.contains("summary") || !j["summary"].is_string()) {
      throw Error(kModule, where + "expected {\"employee_id\": string, \"summary\": string}");
    }
    auto id = j["employee_id"].get<std::string>();
    if (!out.emplace(id, j["summary"].get<std::string>()).second) {
      throw Error(kModule, where + "duplicate employee_id \"" + id + "\"");
    }
  }
  return out;
}

std::size_t baseline_sentence_budget(std::size_t k) { return (k + 2) / 3; }

ComparisonReport compare_systems(const SummarySet& gold,
                                 const std::vector<std::pair<std::string, SummarySet>>& systems, double alpha) {
  check_alpha(alpha);
  if (gold.empty()) throw Error(kModule, "gold summary set is empty");
  ComparisonReport report;
  report.alpha = alpha;
  std::set<std::string> names;
  for (const auto& [name, summaries] : systems) {
    if (!names.insert(name).second) throw Error(kModule, "duplicate system name \"" + name + "\"");
    for (const auto& [id, _] : summaries) {
      if (!gold.contains(id)) throw Error(kModule, "system \"" + name + "\" has extra employee \"" + id + "\"");
    }
    SystemScores sys;
    sys.name = name;
    std::vector<double> f1;
    for (const auto& [id, reference] : gold) {
      auto it = summaries.find(id);
      if (it == summaries.end()) throw Error(kModule, "system \"" + name + "\" is missing employee \"" + id + "\"");
      try {
        sys.scores.push_back(rouge1(it->second, reference));
      } catch (const Error& e) {
        throw Error(kModule, "employee \"" + id + "\": " + e.what());
      }
      sys.employee_ids.push_back(id);
      f1.push_back(sys.scores.back().f1);
    }
    sys.f1 = aggregate(f1);
    report.systems.push_back(std::move(sys));
  }
  for (std::size_t i = 0; i < report.systems.size(); ++i) {
    for (std::size_t j = i + 1; j < report.systems.size(); ++j) {
      report.pairs.push_back({report.systems[i].name, report.systems[j].name,
                              welch_from_stats(report.systems[i].f1, report.systems[j].f1, alpha)});
    }
  }
  return report;
}

nlohmann::json to_json(const RougeScore& s) {
  return {{"precision", s.precision},         {"recall", s.recall},
          {"f1", s.f1},                       {"overlap", s.overlap},
          {"candidate_len", s.candidate_len}, {"reference_len", s.reference_len}};
}

nlohmann::json to_json(const WelchResult& r) {
  nlohmann::json j = {{"df", r.df}, {"p_value", r.p_value}, {"alpha", r.alpha}, {"significant", r.significant}};
  if (std::isinf(r.t)) {
    j["t"] = r.t > 0 ? "inf" : "-inf";
  } else {
    j["t"] = r.t;
  }
  return j;
}

nlohmann::json to_json(const ComparisonReport& r) {
  auto systems = nlohmann::json::array();
  for (const auto& s : r.systems) {
    auto items = nlohmann::json::array();
    for (std::size_t i = 0; i < s.scores.size(); ++i) {
      auto j = to_json(s.scores[i]);
      j["employee_id"] = s.employee_ids[i];
      items.push_back(std::move(j));
    }
    systems.push_back({{"name", s.name}, {"n", s.f1.n}, {"mean_f1", s.f1.mean}, {"stdev_f1", s.f1.stdev},
                       {"per_employee", items}});
  }
  auto pairs = nlohmann::json::array();
  for (const auto& p : r.pairs) {
    auto j = to_json(p.test);
    j["a"] = p.a;
    j["b"] = p.b;
    pairs.push_back(std::move(j));
  }
  return {{"alpha", r.alpha}, {"systems", systems}, {"pairwise", pairs}};
}

}  // namespace pamine::evaluation

#include "pamine/clustering.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pamine/error.h"
#include "pamine/text.h"

namespace pamine::clustering {

namespace {

constexpr const char* kModule = "embedding-clustering";

bool parse_float(std::string_view s, float& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool is_count_header(const std::vector<std::string>& fields) {
  if (fields.size() != 2) return false;
  for (const auto& f : fields) {
    if (f.empty() || !std::all_of(f.begin(), f.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      return false;
    }
  }
  return true;
}

template <typename T>
double cosine_impl(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) {
    throw Error(kModule, "cosine of vectors with dimensions " + std::to_string(a.size()) + " and " +
                             std::to_string(b.size()));
  }
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0 || nb == 0) throw Error(kModule, "cosine of a zero-norm vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

}  // namespace

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw Error(kModule, "cannot open embedding file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string(), warnings);
}

EmbeddingTable EmbeddingTable::parse(std::string_view content, std::string_view origin,
                                     std::vector<std::string>* warnings) {
  EmbeddingTable table;
  std::vector<float> vec;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    auto eol = content.find('\n', pos);
    if (eol == std::string_view::npos) eol = content.size();
    auto line = content.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    auto fields = text::split_whitespace(line);
    if (fields.empty()) continue;
    auto where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    if (line_no == 1 && is_count_header(fields)) continue;
    if (fields.size() < 2) throw Error(kModule, where + "expected a word followed by vector components");
    vec.clear();
    for (std::size_t i = 1; i < fields.size(); ++i) {
      float v = 0;
      if (!parse_float(fields[i], v)) throw Error(kModule, where + "unparseable number \"" + fields[i] + "\"");
      vec.push_back(v);
    }
    if (table.dimension_ != 0 && vec.size() != table.dimension_) {
      throw Error(kModule, where + "dimension mismatch: expected " + std::to_string(table.dimension_) +
                               ", got " + std::to_string(vec.size()));
    }
    if (!table.add(fields[0], vec) && warnings) {
      warnings->push_back(where + "duplicate word \"" + text::to_lower(fields[0]) + "\" ignored");
    }
  }
  return table;
}

bool EmbeddingTable::add(std::string_view word, std::span<const float> vector) {
  if (vector.empty()) throw Error(kModule, "empty vector for \"" + std::string(word) + "\"");
  if (dimension_ == 0) dimension_ = vector.size();
  if (vector.size() != dimension_) {
    throw Error(kModule, "dimension mismatch for \"" + std::string(word) + "\": expected " +
                             std::to_string(dimension_) + ", got " + std::to_string(vector.size()));
  }
  auto [it, inserted] = index_.emplace(text::to_lower(word), index_.size());
  if (!inserted) return false;
  data_.insert(data_.end(), vector.begin(), vector.end());
  return true;
}

std::optional<std::span<const float>> EmbeddingTable::find(std::string_view word) const {
  auto it = index_.find(text::to_lower(word));
  if (it == index_.end()) return std::nullopt;
  return std::span<const float>(data_.data() + it->second * dimension_, dimension_);
}

double cosine(std::span<const double> a, std::span<const double> b) { return cosine_impl(a, b); }
double cosine(std::span<const float> a, std::span<const float> b) { return cosine_impl(a, b); }

std::vector<NounCount> extract_nouns(std::span<const ClassifiedSentence> sentences,
                                     std::span<const classify::SentenceClass> classes,
                                     const std::unordered_set<std::string>& stopwords) {
  std::vector<NounCount> out;
  std::unordered_map<std::string, std::size_t> slot;
  for (const auto& cs : sentences) {
    if (std::find(classes.begin(), classes.end(), cs.label) == classes.end()) continue;
    for (const auto& t : cs.sentence.tokens) {
      if (!nlp::is_noun(t.pos) || !text::has_alnum(t.lower) || stopwords.contains(t.lower)) continue;
      auto [it, inserted] = slot.emplace(t.lower, out.size());
      if (inserted) out.push_back({t.lower, 0});
      ++out[it->second].frequency;
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const NounCount& a, const NounCount& b) { return a.frequency > b.frequency; });
  return out;
}

std::string NounCluster::label() const {
  std::string out;
  for (const auto& m : members) {
    if (!out.empty()) out += ' ';
    out += m.noun;
  }
  return out;
}

std::vector<NounCluster> cluster_nouns(std::span<const NounCount> nouns, const EmbeddingTable& table,
                                       double tau) {
  if (!(tau > 0 && tau < 1)) throw Error(kModule, "tau must lie in (0, 1), got " + std::to_string(tau));

  std::vector<NounCount> items;
  std::unordered_map<std::string, std::size_t> slot;
  for (const auto& n : nouns) {
    auto key = text::to_lower(n.noun);
    auto [it, inserted] = slot.emplace(key, items.size());
    if (inserted) items.push_back({key, 0});
    items[it->second].frequency += n.frequency;
  }
  std::sort(items.begin(), items.end(), [](const NounCount& a, const NounCount& b) {
    return a.frequency != b.frequency ? a.frequency > b.frequency : a.noun < b.noun;
  });

  std::vector<NounCluster> clusters;
  std::vector<std::vector<double>> sums;  // parallel to clusters; empty for OOV
  std::vector<double> v;
  for (auto& item : items) {
    auto found = table.find(item.noun);
    bool zero = true;
    if (found) {
      v.assign(found->begin(), found->end());
      zero = std::all_of(v.begin(), v.end(), [](double x) { return x == 0; });
    }
    if (!found || zero) {
      clusters.push_back({{item}, {}, item.frequency, true});
      sums.emplace_back();
      continue;
    }
    bool placed = false;
    for (std::size_t c = 0; c < clusters.size() && !placed; ++c) {
      if (clusters[c].oov || cosine(clusters[c].centroid, v) < tau) continue;
      auto& cl = clusters[c];
      cl.members.push_back(item);
      cl.count += item.frequency;
      const auto n = static_cast<double>(cl.members.size());
      for (std::size_t d = 0; d < v.size(); ++d) {
        sums[c][d] += v[d];
        cl.centroid[d] = sums[c][d] / n;
      }
      placed = true;
    }
    if (!placed) {
      clusters.push_back({{item}, v, item.frequency, false});
      sums.push_back(v);
    }
  }
  return clusters;
}

nlohmann::json cluster_report(std::span<const NounCluster> clusters) {
  std::vector<const NounCluster*> order;
  for (const auto& c : clusters) order.push_back(&c);
  std::stable_sort(order.begin(), order.end(),
                   [](const NounCluster* a, const NounCluster* b) { return a->count > b->count; });
  auto out = nlohmann::json::array();
  for (const auto* c : order) {
    auto members = nlohmann::json::array();
    for (const auto& m : c->members) members.push_back({{"noun", m.noun}, {"frequency", m.frequency}});
    out.push_back({{"label", c->label()}, {"count", c->count}, {"oov", c->oov}, {"members", members}});
  }
  return out;
}

}  // namespace pamine::clustering

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "pamine/classifier.h"
#include "pamine/nlp.h"

namespace pamine::clustering {

// Word vectors keyed by lowercased word, stored contiguously as floats.
class EmbeddingTable {
 public:
  // "word v1 ... vd" per line. A leading "count dimension" header line is
  // skipped. Later duplicates are ignored and reported through `warnings`.
  static EmbeddingTable load(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);
  static EmbeddingTable parse(std::string_view content, std::string_view origin = "<memory>",
                              std::vector<std::string>* warnings = nullptr);

  // False when the word is already present. Throws on a dimension mismatch.
  bool add(std::string_view word, std::span<const float> vector);

  std::optional<std::span<const float>> find(std::string_view word) const;
  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return index_.size(); }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<float> data_;
  std::size_t dimension_ = 0;
};

double cosine(std::span<const double> a, std::span<const double> b);
double cosine(std::span<const float> a, std::span<const float> b);

struct NounCount {
  std::string noun;
  std::size_t frequency = 0;

  bool operator==(const NounCount&) const = default;
};

struct ClassifiedSentence {
  nlp::TaggedSentence sentence;
  classify::SentenceClass label = classify::SentenceClass::kOther;
};

// Lowercased NN* tokens from sentences whose label is in `classes`, minus
// stopwords, tallied per occurrence. Sorted by frequency descending; ties
// keep first-occurrence order.
std::vector<NounCount> extract_nouns(std::span<const ClassifiedSentence> sentences,
                                     std::span<const classify::SentenceClass> classes,
                                     const std::unordered_set<std::string>& stopwords);

struct NounCluster {
  std::vector<NounCount> members;  // admission order
  std::vector<double> centroid;    // empty for OOV singletons
  std::size_t count = 0;           // sum of member frequencies
  bool oov = false;

  std::string label() const;  // member nouns joined by spaces
};

// Greedy leader clustering. Nouns are visited by frequency descending, then
// lexicographically; each joins the first cluster whose centroid has cosine
// >= tau with it, otherwise it opens a new cluster. Centroids are the
// unweighted mean of member vectors. Nouns missing from the table (or with
// zero vectors) become flagged singletons. Repeated nouns are merged first.
std::vector<NounCluster> cluster_nouns(std::span<const NounCount> nouns, const EmbeddingTable& table,
                                       double tau);

// Clusters ordered by count descending (stable), as a JSON array of
// {label, count, oov, members}.
nlohmann::json cluster_report(std::span<const NounCluster> clusters);

}  // namespace pamine::clustering

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pamine/nlp.h"

namespace pamine::bow {

// Lowercased word tokens of a sentence; punctuation-only tokens are dropped.
std::vector<std::string> terms(const nlp::TaggedSentence& s);

class Vocabulary {
 public:
  std::size_t add(const std::string& term);
  std::optional<std::size_t> find(const std::string& term) const;
  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> terms_;
};

// Sorted (index, count) pairs.
struct SparseVector {
  std::vector<std::pair<std::size_t, double>> entries;

  double dot(std::span<const double> dense) const;
  double squared_norm() const;
};

// Unigram counts over the vocabulary; out-of-vocabulary terms are dropped.
SparseVector featurize(const Vocabulary& vocab, const nlp::TaggedSentence& s);

struct LogisticOptions {
  double l2 = 1.0;
  std::size_t max_epochs = 500;
  double tolerance = 1e-6;
};

// Binary L2-regularised logistic regression. Training minimises
//   sum_i log(1 + exp(-y_i (w.x_i + b))) + l2/2 * |w|^2
// (intercept unpenalised) with full-batch gradient descent and a
// backtracking line search; stops once the objective moves by less than
// `tolerance` or after `max_epochs` steps.
struct BinaryLogistic {
  std::vector<double> weights;
  double bias = 0;
  std::size_t epochs = 0;
  double objective = 0;

  double margin(const SparseVector& x) const { return x.dot(weights) + bias; }
  double probability(const SparseVector& x) const;
};

BinaryLogistic train_binary_logistic(std::span<const SparseVector> xs, std::span<const bool> ys,
                                     std::size_t dimension, const LogisticOptions& options);

double sigmoid(double z);

nlohmann::json to_json(const LogisticOptions& o);
LogisticOptions logistic_options_from_json(const nlohmann::json& j);

}  // namespace pamine::bow

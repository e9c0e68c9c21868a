#include "pamine/bow.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "pamine/text.h"

namespace pamine::bow {

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double objective(std::span<const SparseVector> xs, std::span<const bool> ys, std::span<const double> w,
                 double b, double l2) {
  double loss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double y = ys[i] ? 1.0 : -1.0;
    loss += softplus(-y * (xs[i].dot(w) + b));
  }
  double norm = 0;
  for (double v : w) norm += v * v;
  return loss + 0.5 * l2 * norm;
}

}  // namespace

std::vector<std::string> terms(const nlp::TaggedSentence& s) {
  std::vector<std::string> out;
  for (const auto& t : s.tokens) {
    if (text::has_alnum(t.surface)) out.push_back(t.lower);
  }
  return out;
}

std::size_t Vocabulary::add(const std::string& term) {
  auto [it, inserted] = index_.emplace(term, terms_.size());
  if (inserted) terms_.push_back(term);
  return it->second;
}

std::optional<std::size_t> Vocabulary::find(const std::string& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double SparseVector::dot(std::span<const double> dense) const {
  double s = 0;
  for (const auto& [i, v] : entries) s += v * dense[i];
  return s;
}

double SparseVector::squared_norm() const {
  double s = 0;
  for (const auto& e : entries) s += e.second * e.second;
  return s;
}

SparseVector featurize(const Vocabulary& vocab, const nlp::TaggedSentence& s) {
  std::map<std::size_t, double> counts;
  for (const auto& t : terms(s)) {
    if (auto idx = vocab.find(t)) counts[*idx] += 1.0;
  }
  SparseVector out;
  out.entries.assign(counts.begin(), counts.end());
  return out;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double BinaryLogistic::probability(const SparseVector& x) const { return sigmoid(margin(x)); }

BinaryLogistic train_binary_logistic(std::span<const SparseVector> xs, std::span<const bool> ys,
                                     std::size_t dimension, const LogisticOptions& options) {
  BinaryLogistic model;
  model.weights.assign(dimension, 0.0);
  double current = objective(xs, ys, model.weights, model.bias, options.l2);
  double step = 1.0;

  std::vector<double> grad_w(dimension);
  std::vector<double> trial_w(dimension);
  for (std::size_t epoch = 0; epoch < options.max_epochs; ++epoch) {
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    double grad_b = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double y = ys[i] ? 1.0 : -1.0;
      const double coef = -y * sigmoid(-y * model.margin(xs[i]));
      for (const auto& [j, v] : xs[i].entries) grad_w[j] += coef * v;
      grad_b += coef;
    }
    double gnorm = grad_b * grad_b;
    for (std::size_t j = 0; j < dimension; ++j) {
      grad_w[j] += options.l2 * model.weights[j];
      gnorm += grad_w[j] * grad_w[j];
    }
    model.epochs = epoch + 1;
    if (gnorm == 0) break;

    // Armijo backtracking from a step that grows after each success.
    double next = current;
    double trial_b = model.bias;
    for (int halvings = 0; halvings < 60; ++halvings) {
      for (std::size_t j = 0; j < dimension; ++j) trial_w[j] = model.weights[j] - step * grad_w[j];
      trial_b = model.bias - step * grad_b;
      next = objective(xs, ys, trial_w, trial_b, options.l2);
      if (next <= current - 1e-4 * step * gnorm) break;
      step *= 0.5;
    }
    if (next > current) break;
    model.weights.swap(trial_w);
    model.bias = trial_b;
    const double delta = current - next;
    current = next;
    step *= 2.0;
    if (delta < options.tolerance) break;
  }
  model.objective = current;
  return model;
}

nlohmann::json to_json(const LogisticOptions& o) {
  return {{"l2", o.l2}, {"max_epochs", o.max_epochs}, {"tolerance", o.tolerance}};
}

LogisticOptions logistic_options_from_json(const nlohmann::json& j) {
  LogisticOptions o;
  o.l2 = j.value("l2", o.l2);
  o.max_epochs = j.value("max_epochs", o.max_epochs);
  o.tolerance = j.value("tolerance", o.tolerance);
  return o;
}

}  // namespace pamine::bow

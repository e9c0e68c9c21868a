#include "ilp_oracle.h"

#include <stdexcept>

#include "pamine/random.h"

namespace pamine::testing {

std::int64_t oracle_objective(const summarize::IlpInstance& inst, const std::vector<std::size_t>& chosen,
                              summarize::Slacks* slacks) {
  summarize::Slacks s{};
  std::int64_t total = 0;
  for (auto i : chosen) total += inst.weights[i];
  for (std::size_t slot = 0; slot < summarize::kSlackOrder.size(); ++slot) {
    auto bit = static_cast<std::size_t>(summarize::kSlackOrder[slot]);
    bool covered = false;
    for (auto i : chosen) covered = covered || inst.types[i].test(bit);
    s[slot] = covered ? 0 : 1;
  }
  for (std::size_t a = 0; a < chosen.size(); ++a) {
    for (std::size_t b = a + 1; b < chosen.size(); ++b) {
      if (inst.same_head[chosen[a]][chosen[b]]) ++s[10];
    }
    if (inst.invalid_single_noun[chosen[a]]) ++s[11];
  }
  std::int64_t violations = 0;
  for (auto v : s) violations += v;
  if (slacks) *slacks = s;
  return total - inst.penalty * violations;
}

summarize::SummarySelection brute_force_oracle(const summarize::IlpInstance& inst) {
  const std::size_t n = inst.size();
  const std::size_t k = inst.k;
  if (n > 20) throw std::invalid_argument("brute_force_oracle: N > 20");
  if (k == 0 || k > n) throw std::invalid_argument("brute_force_oracle: K outside [1, N]");

  std::vector<std::size_t> combo(k);
  for (std::size_t i = 0; i < k; ++i) combo[i] = i;
  std::vector<std::size_t> best;
  std::int64_t best_value = 0;
  while (true) {
    auto v = oracle_objective(inst, combo);
    if (best.empty() || v > best_value) {
      best = combo;
      best_value = v;
    }
    std::size_t i = k;
    while (i > 0 && combo[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++combo[i - 1];
    for (std::size_t j = i; j < k; ++j) combo[j] = combo[j - 1] + 1;
  }

  summarize::SummarySelection sel;
  sel.chosen.assign(n, false);
  for (auto i : best) sel.chosen[i] = true;
  sel.chosen_indices = best;
  sel.objective = oracle_objective(inst, best, &sel.slacks);
  return sel;
}

summarize::IlpInstance random_instance(std::mt19937_64& gen, std::size_t min_n, std::size_t max_n) {
  summarize::IlpInstance inst;
  const std::size_t n = min_n + uniform_below(gen, max_n - min_n + 1);
  const std::size_t heads = 1 + uniform_below(gen, n);
  std::vector<std::size_t> head(n);
  for (std::size_t i = 0; i < n; ++i) {
    inst.weights.push_back(static_cast<std::int64_t>(1 + uniform_below(gen, 40)));
    summarize::TypeFlags t;
    for (std::size_t b = 0; b < summarize::kPhraseTypeCount; ++b) {
      if (uniform_below(gen, 5) == 0) t.set(b);
    }
    inst.types.push_back(t);
    inst.invalid_single_noun.push_back(uniform_below(gen, 6) == 0);
    head[i] = uniform_below(gen, heads);
  }
  inst.same_head.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inst.same_head[i][j] = i != j && head[i] == head[j];
  }
  inst.k = 1 + uniform_below(gen, n);
  return inst;
}

}  // namespace pamine::testing

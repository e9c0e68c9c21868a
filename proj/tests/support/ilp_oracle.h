#pragma once

#include <cstdint>
#include <random>

#include "pamine/summarizer.h"

namespace pamine::testing {

// Exhaustive search over all K-subsets in lexicographic order; only a
// strictly better objective replaces the incumbent. Refuses N > 20.
summarize::SummarySelection brute_force_oracle(const summarize::IlpInstance& inst);

// Objective recomputed from the instance fields without the library.
std::int64_t oracle_objective(const summarize::IlpInstance& inst, const std::vector<std::size_t>& chosen,
                              summarize::Slacks* slacks = nullptr);

// N uniform in [min_n, max_n], weights in [1, 40], random headword groups,
// type flags and invalid single nouns; K uniform in [1, N].
summarize::IlpInstance random_instance(std::mt19937_64& gen, std::size_t min_n, std::size_t max_n);

}  // namespace pamine::testing

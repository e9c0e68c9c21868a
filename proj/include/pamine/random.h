#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace pamine {

// std::shuffle and the std distributions are implementation-defined; these
// helpers keep seeded runs identical across standard libraries.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t n) {
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
  std::uint64_t v = 0;
  do {
    v = gen();
  } while (v >= limit);
  return v % n;
}

template <typename T>
void seeded_shuffle(std::span<T> items, std::mt19937_64& gen) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[uniform_below(gen, i)]);
  }
}

}  // namespace pamine

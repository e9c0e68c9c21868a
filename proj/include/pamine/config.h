#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>

#include "json.hpp"
#include "pamine/bow.h"

namespace pamine::config {

struct Paths {
  std::filesystem::path tag_lexicon;
  std::filesystem::path suffix_rules;
  std::filesystem::path context_rules;
  std::filesystem::path abbreviations;
  std::filesystem::path class_rules;
  std::filesystem::path attribute_cues;
  std::filesystem::path type_lexicons;  // directory
  std::filesystem::path noun_attribute;
  std::filesystem::path stopwords;
  std::optional<std::filesystem::path> embeddings;
};

struct PipelineConfig {
  std::filesystem::path source;  // empty when built from defaults
  Paths paths;
  double tau = 0.55;
  bow::LogisticOptions logistic;
  double nb_alpha = 1.0;
  std::size_t folds = 5;
  double attribute_threshold = 0.5;
  double alpha = 0.05;
  std::uint64_t seed = 42;
  std::filesystem::path out_dir = "out";

  // Referenced files exist and every setting is in range.
  void validate() const;
};

// Settings pointing at the data files in `data_dir`.
PipelineConfig defaults(const std::filesystem::path& data_dir);

// TOML subset: [section] headers and key = value lines, where a value is a
// double-quoted string, an integer or a float; '#' starts a comment.
// Relative paths resolve against `base_dir`; keys left out keep the
// defaults built from `data_dir`.
PipelineConfig parse(std::string_view content, const std::filesystem::path& base_dir,
                     const std::filesystem::path& data_dir, std::string_view origin = "<memory>");
PipelineConfig load(const std::filesystem::path& path, const std::filesystem::path& data_dir);

// Config file named by PAMINE_CONFIG, if set and non-empty.
std::optional<std::filesystem::path> path_from_environment();

nlohmann::json to_json(const PipelineConfig& c);

}  // namespace pamine::config

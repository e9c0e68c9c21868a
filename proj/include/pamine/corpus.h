#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "json.hpp"

namespace pamine::corpus {

struct PeerComment {
  std::string peer_id;
  std::string text;

  bool operator==(const PeerComment&) const = default;
};

// One employee: supervisor assessment plus the peer feedback about them.
struct AppraisalRecord {
  std::string employee_id;
  std::string supervisor_text;
  std::vector<PeerComment> peer_comments;
  std::optional<std::string> manual_summary;

  bool operator==(const AppraisalRecord&) const = default;
};

enum class Format { kJsonl, kCsv };

// Picks the format from the file extension (.csv, otherwise JSONL).
Format format_for(const std::filesystem::path& path);

std::vector<AppraisalRecord> load_records(const std::filesystem::path& path, Format format);

// Parses an in-memory corpus. `origin` names the source in error messages.
std::vector<AppraisalRecord> parse_jsonl(std::string_view content, std::string_view origin = "<memory>");
std::vector<AppraisalRecord> parse_csv(std::string_view content, std::string_view origin = "<memory>");

nlohmann::json to_json(const AppraisalRecord& record);
std::string to_jsonl(std::span<const AppraisalRecord> records);

// Rule-based splitter: breaks after runs of '.', '!' or '?' that are followed
// by whitespace or end of text, and at line breaks. A '.'-terminated word in
// the abbreviation list (compared lowercased, e.g. "e.g.") never ends a
// sentence.
class SentenceSplitter {
 public:
  SentenceSplitter();  // built-in abbreviation list
  explicit SentenceSplitter(std::unordered_set<std::string> abbreviations);

  static SentenceSplitter from_file(const std::filesystem::path& path);

  std::vector<std::string> split(std::string_view text) const;

  const std::unordered_set<std::string>& abbreviations() const { return abbreviations_; }

 private:
  std::unordered_set<std::string> abbreviations_;
};

std::vector<std::string> split_sentences(std::string_view text);

enum class SourceKind { kSupervisor, kPeer };

struct SentenceRecord {
  std::string employee_id;
  SourceKind source = SourceKind::kSupervisor;
  std::string peer_id;  // empty for supervisor sentences
  std::string text;
  std::size_t index = 0;  // position within its source text
};

std::vector<SentenceRecord> supervisor_sentences(const AppraisalRecord& record,
                                                 const SentenceSplitter& splitter);
std::vector<SentenceRecord> peer_sentences(const AppraisalRecord& record,
                                           const SentenceSplitter& splitter);

struct LengthSummary {
  double min = 0;
  double max = 0;
  double mean = 0;
  double stdev = 0;  // population
  double q1 = 0;
  double q2 = 0;
  double q3 = 0;
};

struct CorpusStats {
  std::size_t sentence_count = 0;
  LengthSummary words_per_sentence;
};

// Word counts are whitespace-token counts; quartiles use the inclusive
// nearest-rank rule (rank = ceil(p * n)).
CorpusStats corpus_stats(std::span<const SentenceRecord> sentences);
LengthSummary summarize_lengths(std::span<const std::size_t> lengths);

nlohmann::json to_json(const CorpusStats& stats);

}  // namespace pamine::corpus

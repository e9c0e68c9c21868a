#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "pamine/corpus.h"
#include "pamine/nlp.h"

namespace pamine::summarize {

enum class PhraseRule { kAdjInNp, kVerbNp, kVerbPrepNp, kNpOnly, kAdjOnly };

std::string_view to_string(PhraseRule r);

enum class PhraseType {
  kLeadership,
  kTeam,
  kInnovation,
  kCommunication,
  kKnowledge,
  kDelivery,
  kOwnership,
  kCustomer,
  kStrategy,
  kPersonal,
};

inline constexpr std::size_t kPhraseTypeCount = 10;
using TypeFlags = std::bitset<kPhraseTypeCount>;  // indexed by PhraseType

std::string_view to_string(PhraseType t);  // "Leadership", ...
PhraseType phrase_type_from_string(std::string_view name);

// Coverage slacks S1..S10 are numbered in this order; S11 counts chosen
// pairs sharing a headword and S12 chosen invalid single nouns.
inline constexpr std::array<PhraseType, kPhraseTypeCount> kSlackOrder = {
    PhraseType::kLeadership, PhraseType::kTeam,          PhraseType::kKnowledge, PhraseType::kDelivery,
    PhraseType::kOwnership,  PhraseType::kInnovation,    PhraseType::kCommunication,
    PhraseType::kCustomer,   PhraseType::kStrategy,      PhraseType::kPersonal};

inline constexpr std::size_t kSlackCount = 12;
using Slacks = std::array<std::int64_t, kSlackCount>;

struct CandidatePhrase {
  std::string text;  // lowercased surface of the first occurrence
  std::vector<nlp::Token> tokens;
  PhraseRule rule = PhraseRule::kNpOnly;
  std::string headword;  // lemma
  std::size_t freq = 1;  // distinct peers
  bool has_adj = false;
  bool has_verb = false;
  std::size_t num_words = 1;
  bool noun_cat = false;
  bool invalid_single_noun = false;
  TypeFlags types;
};

// Word lists consulted while scoring candidates.
struct Lexicons {
  std::unordered_set<std::string> noun_attribute;
  std::array<std::unordered_set<std::string>, kPhraseTypeCount> types;  // lemmas

  // `types_dir` holds one file per type: a "[TypeName]" header line, then
  // one word per line. Entries are lemmatized on load.
  static Lexicons load(const std::filesystem::path& noun_attribute_file, const std::filesystem::path& types_dir);
  static const Lexicons& bundled();
};

// Span matched by one of the candidate rules.
struct RuleMatch {
  std::size_t start = 0;
  std::size_t end = 0;
  PhraseRule rule = PhraseRule::kNpOnly;

  bool operator==(const RuleMatch&) const = default;
};

// Left to right; at each position the longest rule match wins (earlier rule
// on equal length) and scanning resumes after it, so matches never overlap.
std::vector<RuleMatch> match_candidate_rules(const nlp::TaggedSentence& s);

struct PeerSentences {
  std::string peer_id;
  std::vector<nlp::TaggedSentence> sentences;
};

// Candidates deduplicated by lowercased lemma sequence, in first-occurrence
// order, with all scoring flags filled in.
std::vector<CandidatePhrase> extract_candidates(std::span<const PeerSentences> peers, const Lexicons& lexicons);

std::int64_t phrase_importance(const CandidatePhrase& p);

std::size_t choose_k(std::size_t n);

// Self-contained selection problem; `phrases` is informational only and may
// be empty for synthetic instances.
struct IlpInstance {
  std::vector<std::int64_t> weights;
  std::vector<TypeFlags> types;
  std::vector<bool> invalid_single_noun;
  std::vector<std::vector<bool>> same_head;  // symmetric, zero diagonal
  std::size_t k = 0;
  std::int64_t penalty = 10000;
  std::vector<CandidatePhrase> phrases;

  std::size_t size() const { return weights.size(); }
  void validate() const;  // shape, symmetry and 1 <= k <= N
};

IlpInstance build_ilp(std::vector<CandidatePhrase> phrases);

struct SummarySelection {
  std::vector<bool> chosen;
  std::vector<std::size_t> chosen_indices;  // ascending
  Slacks slacks{};
  std::int64_t objective = 0;
  std::vector<std::string> phrases_out;  // weight descending, then index
};

// Objective and slacks of a fixed selection.
std::int64_t evaluate_selection(const IlpInstance& inst, std::span<const std::size_t> chosen, Slacks* slacks = nullptr);
SummarySelection make_selection(const IlpInstance& inst, std::vector<std::size_t> chosen);

// Exact optimum by depth-first branch and bound over X in index order,
// trying X_i = 1 first. Subsets are met in lexicographic order and only a
// strictly better objective replaces the incumbent, so among optima the
// lexicographically smallest index set is returned.
SummarySelection solve_ilp(const IlpInstance& inst);

struct SummarizerContext {
  const nlp::Tagger& tagger;
  const corpus::SentenceSplitter& splitter;
  const Lexicons& lexicons;
  bool pretagged = false;  // comment sentences are in "word_TAG" form
};

struct Summary {
  std::string employee_id;
  std::size_t n_candidates = 0;
  std::size_t k = 0;
  std::vector<std::string> phrases;
  std::int64_t objective = 0;
  Slacks slacks{};
  std::string text;        // phrases joined by ", "
  std::string diagnostic;  // set when there was nothing to summarize
};

// Candidates are ordered by weight (descending, stable) before the ILP is
// built, which gives the index tie-break a meaning and helps the search.
Summary summarize(const corpus::AppraisalRecord& record, const SummarizerContext& ctx);

nlohmann::json to_json(const Summary& s);
nlohmann::json slacks_to_json(const Slacks& slacks);

}  // namespace pamine::summarize

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pamine::nlp {

// Penn Treebank tags plus the treebank punctuation tags.
bool is_known_tag(std::string_view tag);

inline bool is_noun(std::string_view tag) { return tag.starts_with("NN"); }
inline bool is_adjective(std::string_view tag) { return tag.starts_with("JJ"); }
inline bool is_verb(std::string_view tag) { return tag.starts_with("VB"); }
inline bool is_adverb(std::string_view tag) { return tag == "RB" || tag == "RBR" || tag == "RBS"; }
inline bool is_preposition(std::string_view tag) { return tag == "IN" || tag == "TO"; }

// Forms of be/have/do. The tagger never retags them with contextual rules.
bool is_auxiliary(std::string_view word);

struct Token {
  std::string surface;
  std::string lower;
  std::string pos;

  bool operator==(const Token&) const = default;
};

struct TaggedSentence {
  std::vector<Token> tokens;
  std::string text;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

enum class PhraseKind { kNounPhrase, kVerbPhrase, kAdjective, kOther };

// Half-open token range [start, end).
struct PhraseSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  PhraseKind kind = PhraseKind::kOther;

  bool operator==(const PhraseSpan&) const = default;
};

// Whitespace split, then leading brackets/quotes and trailing punctuation
// (. , ! ? ; : closing brackets and quotes) become their own tokens. A final
// '.' stays attached when the word already contains a '.', as in "e.g.".
std::vector<std::string> tokenize(std::string_view text);

// Suffix stripping: "-ies" -> "-y", trailing "-s" unless "-ss". Lowercases.
std::string lemmatize(std::string_view word);

// Deterministic tagger: lexicon lookup, then suffix rules and capitalisation
// for unknown words, then transformation rules conditioned on context.
class Tagger {
 public:
  struct SuffixRule {
    std::string suffix;
    std::string tag;
  };

  // Transformation rule in the classic "FROM TO TEMPLATE ARG [ARG]" layout.
  struct ContextRule {
    std::string from;
    std::string to;
    std::string templ;
    std::string arg1;
    std::string arg2;
  };

  Tagger() = default;
  Tagger(std::unordered_map<std::string, std::string> lexicon, std::vector<SuffixRule> suffixes,
         std::vector<ContextRule> context);

  // Empty paths skip the optional files.
  static Tagger load(const std::filesystem::path& lexicon, const std::filesystem::path& suffix_rules = {},
                     const std::filesystem::path& context_rules = {});

  // Tagger over the data files shipped in the data directory.
  static const Tagger& bundled();

  TaggedSentence tag(std::span<const std::string> tokens, std::string source_text = {}) const;
  TaggedSentence tag_text(std::string_view sentence) const;

  // Tag chosen before contextual rules run.
  std::string initial_tag(std::string_view word) const;

  std::size_t lexicon_size() const { return lexicon_.size(); }

 private:
  std::unordered_map<std::string, std::string> lexicon_;
  std::vector<SuffixRule> suffixes_;
  std::vector<ContextRule> context_;
};

// Reads "surface_TAG surface_TAG ..." (split at the last underscore).
TaggedSentence parse_pretagged(std::string_view text);
std::string to_pretagged(const TaggedSentence& sentence);

// Maximal non-overlapping matches of (DT)? (JJ.*|NN.*)* NN.*, left to right.
std::vector<PhraseSpan> chunk_noun_phrases(const TaggedSentence& s);

// Same matcher anchored at `start`; returns the end of the longest match or
// `start` when nothing matches.
std::size_t match_noun_phrase(const TaggedSentence& s, std::size_t start, bool allow_determiner = true);

// Index of the rightmost noun in the span, else its last token.
std::size_t headword_index(const PhraseSpan& span, const TaggedSentence& s);
const Token& headword(const PhraseSpan& span, const TaggedSentence& s);

bool same_headword(const Token& a, const Token& b);

std::filesystem::path default_data_dir();

}  // namespace pamine::nlp

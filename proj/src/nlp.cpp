#include "pamine/nlp.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "pamine/error.h"
#include "pamine/text.h"

#ifndef PAMINE_DATA_DIR
#define PAMINE_DATA_DIR "data"
#endif

namespace pamine::nlp {

namespace {

constexpr const char* kModule = "nlp-core";
constexpr std::string_view kBoundary = "STAART";

const std::unordered_set<std::string_view>& tagset() {
  static const std::unordered_set<std::string_view> kTags = {
      "CC",  "CD",  "DT",  "EX",  "FW",   "IN",  "JJ",  "JJR", "JJS", "LS",    "MD",    "NN",
      "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS",   "RP",    "SYM",
      "TO",  "UH",  "VB",  "VBD", "VBG",  "VBN", "VBP", "VBZ", "WDT", "WP",    "WP$",   "WRB",
      "#",   "$",   ".",   ",",   ":",    "-LRB-", "-RRB-", "``", "''"};
  return kTags;
}

bool is_leading_punct(char c) { return c == '(' || c == '[' || c == '"' || c == '\'' || c == '`'; }

bool is_trailing_punct(char c) {
  return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':' || c == ')' || c == ']' ||
         c == '"' || c == '\'';
}

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

bool is_titlecase(std::string_view w) {
  if (w.empty() || !is_upper(w[0])) return false;
  return std::none_of(w.begin() + 1, w.end(), is_upper);
}

bool is_number(std::string_view w) {
  bool digit = false;
  for (char c : w) {
    if (c >= '0' && c <= '9') {
      digit = true;
    } else if (c != '.' && c != ',' && c != '-' && c != '%' && c != '/') {
      return false;
    }
  }
  return digit;
}

// Tags for tokens made only of punctuation; empty when not punctuation.
std::string punctuation_tag(std::string_view w) {
  if (text::has_alnum(w)) return {};
  if (w == ",") return ",";
  if (w == "." || w == "!" || w == "?") return ".";
  if (w == "(" || w == "[" || w == "{") return "-LRB-";
  if (w == ")" || w == "]" || w == "}") return "-RRB-";
  if (w == "``" || w == "`") return "``";
  if (w == "\"" || w == "''" || w == "'") return "''";
  if (w == "$") return "$";
  if (w == "#") return "#";
  if (w == ":" || w == ";" || w == "-" || w == "--" || w == "...") return ":";
  return "SYM";
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string f;
  while (is >> f) out.push_back(f);
  return out;
}

bool rule_fires(const Tagger::ContextRule& r, std::size_t i, const std::vector<std::string>& tags,
                const std::vector<std::string>& words) {
  auto n = static_cast<long>(tags.size());
  auto tag = [&](long k) -> std::string_view {
    k += static_cast<long>(i);
    return (k < 0 || k >= n) ? kBoundary : std::string_view(tags[k]);
  };
  auto word = [&](long k) -> std::string_view {
    k += static_cast<long>(i);
    return (k < 0 || k >= n) ? kBoundary : std::string_view(words[k]);
  };
  const std::string_view x = r.arg1;
  const std::string_view y = r.arg2;
  const std::string_view t = r.templ;
  if (t == "PREVTAG") return tag(-1) == x;
  if (t == "NEXTTAG") return tag(1) == x;
  if (t == "PREV2TAG") return tag(-2) == x;
  if (t == "NEXT2TAG") return tag(2) == x;
  if (t == "PREV1OR2TAG") return tag(-1) == x || tag(-2) == x;
  if (t == "NEXT1OR2TAG") return tag(1) == x || tag(2) == x;
  if (t == "PREV1OR2OR3TAG") return tag(-1) == x || tag(-2) == x || tag(-3) == x;
  if (t == "NEXT1OR2OR3TAG") return tag(1) == x || tag(2) == x || tag(3) == x;
  if (t == "SURROUNDTAG") return tag(-1) == x && tag(1) == y;
  if (t == "PREVBIGRAM") return tag(-2) == x && tag(-1) == y;
  if (t == "NEXTBIGRAM") return tag(1) == x && tag(2) == y;
  if (t == "CURWD") return word(0) == x;
  if (t == "PREVWD") return word(-1) == x;
  if (t == "NEXTWD") return word(1) == x;
  if (t == "PREV2WD") return word(-2) == x;
  if (t == "NEXT2WD") return word(2) == x;
  if (t == "PREV1OR2WD") return word(-1) == x || word(-2) == x;
  if (t == "NEXT1OR2WD") return word(1) == x || word(2) == x;
  if (t == "WDPREVTAG") return tag(-1) == x && word(0) == y;
  if (t == "WDNEXTTAG") return word(0) == x && tag(1) == y;
  if (t == "WDAND2AFT") return word(0) == x && word(2) == y;
  if (t == "WDAND2BFR") return word(-2) == x && word(0) == y;
  if (t == "WDAND2TAGAFT") return word(0) == x && tag(2) == y;
  if (t == "WDAND2TAGBFR") return tag(-2) == x && word(0) == y;
  if (t == "LBIGRAM") return word(-1) == x && word(0) == y;
  if (t == "RBIGRAM") return word(0) == x && word(1) == y;
  return false;
}

bool known_template(std::string_view t) {
  static const std::unordered_set<std::string_view> kTemplates = {
      "PREVTAG",   "NEXTTAG",   "PREV2TAG",   "NEXT2TAG",  "PREV1OR2TAG", "NEXT1OR2TAG",
      "PREV1OR2OR3TAG", "NEXT1OR2OR3TAG", "SURROUNDTAG", "PREVBIGRAM", "NEXTBIGRAM", "CURWD",
      "PREVWD",    "NEXTWD",    "PREV2WD",    "NEXT2WD",   "PREV1OR2WD",  "NEXT1OR2WD",
      "WDPREVTAG", "WDNEXTTAG", "WDAND2AFT",  "WDAND2BFR", "WDAND2TAGAFT", "WDAND2TAGBFR",
      "LBIGRAM",   "RBIGRAM"};
  return kTemplates.count(t) > 0;
}

bool two_arg_template(std::string_view t) {
  return t == "SURROUNDTAG" || t == "PREVBIGRAM" || t == "NEXTBIGRAM" || t.starts_with("WD") ||
         t == "LBIGRAM" || t == "RBIGRAM";
}

}  // namespace

bool is_known_tag(std::string_view tag) { return tagset().count(tag) > 0; }

bool is_auxiliary(std::string_view w) {
  static const std::unordered_set<std::string> kAux = {"am",  "is",   "are", "was", "were",
                                                        "be",  "been", "being", "has", "have",
                                                        "had", "do",   "does", "did"};
  return kAux.count(text::to_lower(w)) > 0;
}


std::filesystem::path default_data_dir() { return PAMINE_DATA_DIR; }

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& chunk : text::split_whitespace(text)) {
    std::string_view core = chunk;
    while (!core.empty() && is_leading_punct(core.front()) && core.size() > 1) {
      out.emplace_back(1, core.front());
      core.remove_prefix(1);
    }
    std::vector<std::string> trailing;
    while (core.size() > 1 && is_trailing_punct(core.back())) {
      if (core.back() == '.' && core.substr(0, core.size() - 1).find('.') != std::string_view::npos &&
          text::has_alnum(core)) {
        break;
      }
      trailing.emplace_back(1, core.back());
      core.remove_suffix(1);
    }
    if (!core.empty()) out.emplace_back(core);
    out.insert(out.end(), trailing.rbegin(), trailing.rend());
  }
  return out;
}

std::string lemmatize(std::string_view word) {
  std::string w = text::to_lower(word);
  if (w.size() > 4 && w.ends_with("ies")) {
    w.resize(w.size() - 3);
    w += 'y';
  } else if (w.size() > 3 && w.back() == 's' && !w.ends_with("ss")) {
    w.pop_back();
  }
  return w;
}

Tagger::Tagger(std::unordered_map<std::string, std::string> lexicon, std::vector<SuffixRule> suffixes,
               std::vector<ContextRule> context)
    : lexicon_(std::move(lexicon)), suffixes_(std::move(suffixes)), context_(std::move(context)) {}

Tagger Tagger::load(const std::filesystem::path& lexicon_path, const std::filesystem::path& suffix_path,
                    const std::filesystem::path& context_path) {
  std::unordered_map<std::string, std::string> lexicon;
  {
    std::ifstream in(lexicon_path);
    if (!in) throw Error(kModule, "cannot open tag lexicon " + lexicon_path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (text::trim(line).empty() || line.front() == '#') continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw Error(kModule, lexicon_path.string() + ":" + std::to_string(line_no) + ": expected word<TAB>TAG");
      }
      std::string word = line.substr(0, tab);
      std::string tag(text::trim(std::string_view(line).substr(tab + 1)));
      if (!is_known_tag(tag)) {
        throw Error(kModule,
                    lexicon_path.string() + ":" + std::to_string(line_no) + ": unknown tag \"" + tag + "\"");
      }
      lexicon.emplace(std::move(word), std::move(tag));  // first entry wins
    }
  }

  std::vector<SuffixRule> suffixes;
  if (!suffix_path.empty()) {
    for (const auto& line : text::read_lines(suffix_path, kModule)) {
      auto f = fields(line);
      if (f.size() != 2 || !is_known_tag(f[1])) {
        throw Error(kModule, suffix_path.string() + ": bad suffix rule \"" + line + "\"");
      }
      suffixes.push_back({text::to_lower(f[0]), f[1]});
    }
  }

  std::vector<ContextRule> context;
  if (!context_path.empty()) {
    for (const auto& line : text::read_lines(context_path, kModule)) {
      auto f = fields(line);
      if (f.size() < 4 || !known_template(f[2]) || (two_arg_template(f[2]) && f.size() < 5)) {
        throw Error(kModule, context_path.string() + ": bad context rule \"" + line + "\"");
      }
      context.push_back({f[0], f[1], f[2], f[3], f.size() > 4 ? f[4] : std::string{}});
    }
  }
  return Tagger(std::move(lexicon), std::move(suffixes), std::move(context));
}

const Tagger& Tagger::bundled() {
  static const Tagger kTagger = [] {
    auto dir = default_data_dir();
    return load(dir / "tag_lexicon.tsv", dir / "suffix_rules.tsv", dir / "tag_context_rules.txt");
  }();
  return kTagger;
}

std::string Tagger::initial_tag(std::string_view word) const {
  if (auto p = punctuation_tag(word); !p.empty()) return p;
  if (is_number(word)) return "CD";

  const std::string lower = text::to_lower(word);
  // Free-text comments capitalise words arbitrarily, so a title-case token
  // takes its lowercase reading whenever one exists.
  if (is_titlecase(word)) {
    if (auto it = lexicon_.find(lower); it != lexicon_.end()) return it->second;
  }
  if (auto it = lexicon_.find(std::string(word)); it != lexicon_.end()) return it->second;
  if (auto it = lexicon_.find(lower); it != lexicon_.end()) return it->second;

  if (word.find('-') != std::string_view::npos) return "JJ";
  for (const auto& rule : suffixes_) {
    if (lower.size() >= rule.suffix.size() + 3 && lower.ends_with(rule.suffix)) return rule.tag;
  }
  if (is_upper(word.front())) return "NNP";
  return "NN";
}

TaggedSentence Tagger::tag(std::span<const std::string> tokens, std::string source_text) const {
  std::vector<std::string> words(tokens.begin(), tokens.end());
  std::vector<std::string> tags;
  tags.reserve(words.size());
  for (const auto& w : words) tags.push_back(initial_tag(w));

  for (const auto& rule : context_) {
    for (std::size_t i = 0; i < tags.size(); ++i) {
      if (tags[i] == rule.from && !is_auxiliary(words[i]) && rule_fires(rule, i, tags, words)) {
        tags[i] = rule.to;
      }
    }
  }

  TaggedSentence out;
  out.text = source_text.empty() ? text::join(words, " ") : std::move(source_text);
  out.tokens.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    out.tokens.push_back({words[i], text::to_lower(words[i]), tags[i]});
  }
  return out;
}

TaggedSentence Tagger::tag_text(std::string_view sentence) const {
  auto toks = tokenize(sentence);
  return tag(toks, std::string(text::trim(sentence)));
}

TaggedSentence parse_pretagged(std::string_view text) {
  TaggedSentence out;
  std::vector<std::string> surfaces;
  for (const auto& item : text::split_whitespace(text)) {
    auto us = item.rfind('_');
    if (us == std::string::npos || us == 0 || us + 1 == item.size()) {
      throw Error(kModule, "pre-tagged token \"" + item + "\" is not surface_TAG");
    }
    std::string tag = item.substr(us + 1);
    if (!is_known_tag(tag)) throw Error(kModule, "pre-tagged token \"" + item + "\" has unknown tag");
    std::string surface = item.substr(0, us);
    surfaces.push_back(surface);
    out.tokens.push_back({surface, text::to_lower(surface), std::move(tag)});
  }
  out.text = text::join(surfaces, " ");
  return out;
}

std::string to_pretagged(const TaggedSentence& sentence) {
  std::string out;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    if (i) out += ' ';
    out += sentence.tokens[i].surface;
    out += '_';
    out += sentence.tokens[i].pos;
  }
  return out;
}

std::size_t match_noun_phrase(const TaggedSentence& s, std::size_t start, bool allow_determiner) {
  std::size_t i = start;
  if (allow_determiner && i < s.size() && s.tokens[i].pos == "DT") ++i;
  std::size_t end = start;
  while (i < s.size() && (is_adjective(s.tokens[i].pos) || is_noun(s.tokens[i].pos))) {
    if (is_noun(s.tokens[i].pos)) end = i + 1;
    ++i;
  }
  return end;
}

std::vector<PhraseSpan> chunk_noun_phrases(const TaggedSentence& s) {
  std::vector<PhraseSpan> out;
  std::size_t i = 0;
  while (i < s.size()) {
    auto end = match_noun_phrase(s, i);
    if (end > i) {
      out.push_back({i, end, PhraseKind::kNounPhrase});
      i = end;
    } else {
      ++i;
    }
  }
  return out;
}

std::size_t headword_index(const PhraseSpan& span, const TaggedSentence& s) {
  if (span.start >= span.end || span.end > s.size()) throw Error(kModule, "invalid phrase span");
  for (std::size_t i = span.end; i > span.start; --i) {
    if (is_noun(s.tokens[i - 1].pos)) return i - 1;
  }
  return span.end - 1;
}

const Token& headword(const PhraseSpan& span, const TaggedSentence& s) {
  return s.tokens[headword_index(span, s)];
}

bool same_headword(const Token& a, const Token& b) { return lemmatize(a.surface) == lemmatize(b.surface); }

}  // namespace pamine::nlp

#include "pamine/summarizer.h"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "pamine/error.h"
#include "pamine/text.h"

namespace pamine::summarize {

namespace {

constexpr const char* kModule = "summarizer";

constexpr std::array<std::string_view, kPhraseTypeCount> kTypeNames = {
    "Leadership", "Team",      "Innovation", "Communication", "Knowledge",
    "Delivery",   "Ownership", "Customer",   "Strategy",      "Personal"};

std::size_t type_index(PhraseType t) { return static_cast<std::size_t>(t); }

// End of "(RB)? JJ" starting at i, or i when absent. `plain` restricts the
// adjective to JJ (no comparatives or superlatives).
std::size_t match_adjective(const nlp::TaggedSentence& s, std::size_t i, bool plain) {
  auto adj = [&](std::size_t j) {
    return j < s.size() && (plain ? s.tokens[j].pos == "JJ" : nlp::is_adjective(s.tokens[j].pos));
  };
  if (i < s.size() && nlp::is_adverb(s.tokens[i].pos) && adj(i + 1)) return i + 2;
  if (adj(i)) return i + 1;
  return i;
}

bool is_content_verb(const nlp::Token& t) { return nlp::is_verb(t.pos) && !nlp::is_auxiliary(t.lower); }

// Longest match of each rule at `i`, indexed by PhraseRule; i means no match.
std::array<std::size_t, 5> rule_ends(const nlp::TaggedSentence& s, std::size_t i) {
  std::array<std::size_t, 5> ends;
  ends.fill(i);
  const std::size_t n = s.size();

  auto adj = match_adjective(s, i, false);
  if (adj > i && adj < n && s.tokens[adj].lower == "in") {
    auto np = nlp::match_noun_phrase(s, adj + 1);
    if (np > adj + 1) ends[0] = np;
  }
  if (is_content_verb(s.tokens[i])) {
    auto np = nlp::match_noun_phrase(s, i + 1);
    if (np > i + 1) ends[1] = np;
    if (i + 1 < n && nlp::is_preposition(s.tokens[i + 1].pos)) {
      np = nlp::match_noun_phrase(s, i + 2);
      if (np > i + 2) ends[2] = np;
    }
  }
  // An adverb may lead the noun phrase when it modifies an adjective inside it.
  std::size_t np_start = i;
  if (nlp::is_adverb(s.tokens[i].pos) && i + 1 < n && nlp::is_adjective(s.tokens[i + 1].pos)) np_start = i + 1;
  auto np = nlp::match_noun_phrase(s, np_start, false);
  if (np > np_start) ends[3] = np;
  ends[4] = match_adjective(s, i, true);
  return ends;
}

std::string lemma_key(std::span<const nlp::Token> tokens) {
  std::string key;
  for (const auto& t : tokens) {
    if (!key.empty()) key += ' ';
    key += nlp::lemmatize(t.lower);
  }
  return key;
}

bool in_lexicon(const std::unordered_set<std::string>& lex, const nlp::Token& t) {
  return lex.contains(t.lower) || lex.contains(nlp::lemmatize(t.lower));
}

}  // namespace

std::string_view to_string(PhraseRule r) {
  switch (r) {
    case PhraseRule::kAdjInNp: return "ADJ_IN_NP";
    case PhraseRule::kVerbNp: return "VERB_NP";
    case PhraseRule::kVerbPrepNp: return "VERB_PREP_NP";
    case PhraseRule::kNpOnly: return "NP_ONLY";
    case PhraseRule::kAdjOnly: return "ADJ_ONLY";
  }
  return "NP_ONLY";
}

std::string_view to_string(PhraseType t) { return kTypeNames.at(type_index(t)); }

PhraseType phrase_type_from_string(std::string_view name) {
  auto lower = text::to_lower(text::trim(name));
  for (std::size_t i = 0; i < kPhraseTypeCount; ++i) {
    if (text::to_lower(kTypeNames[i]) == lower) return static_cast<PhraseType>(i);
  }
  throw Error(kModule, "unknown phrase type \"" + std::string(name) + "\"");
}

Lexicons Lexicons::load(const std::filesystem::path& noun_attribute_file, const std::filesystem::path& types_dir) {
  Lexicons lex;
  lex.noun_attribute = text::read_word_set(noun_attribute_file, kModule);

  std::error_code ec;
  if (!std::filesystem::is_directory(types_dir, ec)) {
    throw Error(kModule, "type lexicon directory not found: " + types_dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(types_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::array<bool, kPhraseTypeCount> seen{};
  for (const auto& f : files) {
    auto lines = text::read_lines(f, kModule);
    if (lines.empty() || lines.front().size() < 3 || lines.front().front() != '[' || lines.front().back() != ']') {
      throw Error(kModule, f.string() + ": first line must be a [TypeName] header");
    }
    PhraseType type;
    try {
      type = phrase_type_from_string(std::string_view(lines.front()).substr(1, lines.front().size() - 2));
    } catch (const Error& e) {
      throw Error(kModule, f.string() + ": " + e.what());
    }
    if (seen[type_index(type)]) {
      throw Error(kModule, f.string() + ": duplicate lexicon for type " + std::string(to_string(type)));
    }
    seen[type_index(type)] = true;
    for (std::size_t i = 1; i < lines.size(); ++i) lex.types[type_index(type)].insert(nlp::lemmatize(lines[i]));
  }
  for (std::size_t t = 0; t < kPhraseTypeCount; ++t) {
    if (!seen[t]) {
      throw Error(kModule, "no lexicon for type " + std::string(kTypeNames[t]) + " in " + types_dir.string());
    }
  }
  return lex;
}

const Lexicons& Lexicons::bundled() {
  static const Lexicons lex =
      load(nlp::default_data_dir() / "noun_attribute.txt", nlp::default_data_dir() / "types");
  return lex;
}

std::vector<RuleMatch> match_candidate_rules(const nlp::TaggedSentence& s) {
  std::vector<RuleMatch> out;
  std::size_t i = 0;
  while (i < s.size()) {
    auto ends = rule_ends(s, i);
    std::size_t best = 0;
    for (std::size_t r = 1; r < ends.size(); ++r) {
      if (ends[r] > ends[best]) best = r;
    }
    if (ends[best] > i) {
      out.push_back({i, ends[best], static_cast<PhraseRule>(best)});
      i = ends[best];
    } else {
      ++i;
    }
  }
  return out;
}

std::vector<CandidatePhrase> extract_candidates(std::span<const PeerSentences> peers, const Lexicons& lexicons) {
  std::vector<CandidatePhrase> out;
  std::vector<std::set<std::string>> mentioned_by;
  std::unordered_map<std::string, std::size_t> slot;

  for (std::size_t p = 0; p < peers.size(); ++p) {
    const auto peer = peers[p].peer_id.empty() ? "#" + std::to_string(p) : peers[p].peer_id;
    for (const auto& s : peers[p].sentences) {
      for (const auto& m : match_candidate_rules(s)) {
        std::span<const nlp::Token> toks(s.tokens.data() + m.start, m.end - m.start);
        auto [it, inserted] = slot.emplace(lemma_key(toks), out.size());
        if (inserted) {
          CandidatePhrase c;
          c.tokens.assign(toks.begin(), toks.end());
          std::vector<std::string> words;
          for (const auto& t : toks) words.push_back(t.lower);
          c.text = text::join(words, " ");
          c.rule = m.rule;
          const auto& head = nlp::headword({m.start, m.end, nlp::PhraseKind::kOther}, s);
          c.headword = nlp::lemmatize(head.lower);
          c.num_words = toks.size();
          for (const auto& t : toks) {
            c.has_adj = c.has_adj || nlp::is_adjective(t.pos);
            c.has_verb = c.has_verb || nlp::is_verb(t.pos);
            for (std::size_t ty = 0; ty < kPhraseTypeCount; ++ty) {
              if (in_lexicon(lexicons.types[ty], t)) c.types.set(ty);
            }
          }
          c.noun_cat = nlp::is_noun(head.pos) && in_lexicon(lexicons.noun_attribute, head);
          c.invalid_single_noun = c.num_words == 1 && !c.has_adj && !c.noun_cat;
          out.push_back(std::move(c));
          mentioned_by.emplace_back();
        }
        mentioned_by[it->second].insert(peer);
      }
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].freq = mentioned_by[i].size();
  return out;
}

std::int64_t phrase_importance(const CandidatePhrase& p) {
  const std::int64_t factor = 1 + p.noun_cat + p.has_adj + p.has_verb;
  return factor * static_cast<std::int64_t>(p.freq) * static_cast<std::int64_t>(p.num_words);
}

std::size_t choose_k(std::size_t n) {
  std::size_t k = 0;
  if (n <= 10) {
    k = n / 2;
  } else if (n <= 20) {
    k = choose_k(10) + (n - 10) * 4 / 10;
  } else if (n <= 30) {
    k = choose_k(20) + (n - 20) * 3 / 10;
  } else if (n <= 50) {
    k = choose_k(30) + (n - 30) * 2 / 10;
  } else {
    k = choose_k(50) + (n - 50) / 10;
  }
  if (k < 4 && n >= 4) {
    k = 4;
  } else if (k < 4) {
    k = n;
  } else if (k > 20) {
    k = 20;
  }
  return k;
}

void IlpInstance::validate() const {
  const std::size_t n = size();
  if (n == 0) throw Error(kModule, "ILP instance has no phrases");
  if (types.size() != n || invalid_single_noun.size() != n || same_head.size() != n) {
    throw Error(kModule, "ILP parameter arrays disagree in length");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (same_head[i].size() != n) throw Error(kModule, "same-headword matrix is not square");
    if (same_head[i][i]) throw Error(kModule, "same-headword matrix has a non-zero diagonal");
    for (std::size_t j = 0; j < i; ++j) {
      if (same_head[i][j] != same_head[j][i]) throw Error(kModule, "same-headword matrix is not symmetric");
    }
  }
  if (k < 1 || k > n) {
    throw Error(kModule, "infeasible K=" + std::to_string(k) + " for N=" + std::to_string(n));
  }
  if (penalty <= 0) throw Error(kModule, "slack penalty must be positive");
}

IlpInstance build_ilp(std::vector<CandidatePhrase> phrases) {
  if (phrases.empty()) throw Error(kModule, "cannot build an ILP from an empty phrase list");
  IlpInstance inst;
  const std::size_t n = phrases.size();
  inst.same_head.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    inst.weights.push_back(phrase_importance(phrases[i]));
    inst.types.push_back(phrases[i].types);
    inst.invalid_single_noun.push_back(phrases[i].invalid_single_noun);
    for (std::size_t j = 0; j < i; ++j) {
      if (phrases[i].headword == phrases[j].headword) inst.same_head[i][j] = inst.same_head[j][i] = true;
    }
  }
  inst.k = choose_k(n);
  inst.phrases = std::move(phrases);
  return inst;
}

std::int64_t evaluate_selection(const IlpInstance& inst, std::span<const std::size_t> chosen, Slacks* slacks) {
  Slacks s{};
  std::int64_t total = 0;
  TypeFlags covered;
  for (std::size_t a = 0; a < chosen.size(); ++a) {
    const auto i = chosen[a];
    total += inst.weights.at(i);
    covered |= inst.types[i];
    if (inst.invalid_single_noun[i]) ++s[11];
    for (std::size_t b = a + 1; b < chosen.size(); ++b) {
      if (inst.same_head[i][chosen[b]]) ++s[10];
    }
  }
  for (std::size_t t = 0; t < kPhraseTypeCount; ++t) s[t] = covered.test(type_index(kSlackOrder[t])) ? 0 : 1;
  std::int64_t slack_sum = 0;
  for (auto v : s) slack_sum += v;
  if (slacks) *slacks = s;
  return total - inst.penalty * slack_sum;
}

SummarySelection make_selection(const IlpInstance& inst, std::vector<std::size_t> chosen) {
  std::sort(chosen.begin(), chosen.end());
  SummarySelection sel;
  sel.chosen.assign(inst.size(), false);
  for (auto i : chosen) sel.chosen.at(i) = true;
  sel.objective = evaluate_selection(inst, chosen, &sel.slacks);
  if (!inst.phrases.empty()) {
    auto order = chosen;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return inst.weights[a] > inst.weights[b]; });
    for (auto i : order) sel.phrases_out.push_back(inst.phrases[i].text);
  }
  sel.chosen_indices = std::move(chosen);
  return sel;
}

namespace {

class BranchAndBound {
 public:
  explicit BranchAndBound(const IlpInstance& inst)
      : inst_(inst), n_(inst.size()), share_(n_, 0), suffix_types_(n_ + 1) {
    for (std::size_t i = n_; i > 0; --i) suffix_types_[i - 1] = suffix_types_[i] | inst.types[i - 1];
    scratch_a_.reserve(n_);
    scratch_b_.reserve(n_);
  }

  std::vector<std::size_t> run() {
    search(0);
    return best_set_;
  }

 private:
  std::int64_t penalty_terms(std::size_t uncovered) const {
    return inst_.penalty * static_cast<std::int64_t>(pairs_ + invalid_ + uncovered);
  }

  static std::int64_t top_sum(std::vector<std::int64_t>& v, std::size_t r) {
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(r - 1), v.end(), std::greater<>());
    std::int64_t s = 0;
    for (std::size_t j = 0; j < r; ++j) s += v[j];
    return s;
  }

  // Two relaxations, each an upper bound on every completion; the smaller is
  // used. Both count the penalties already incurred by the chosen items and
  // by each remaining item against them.
  std::int64_t bound(std::size_t i, std::size_t r) {
    const TypeFlags uncovered = ~covered_;
    const std::size_t hopeless = (uncovered & ~suffix_types_[i]).count();
    scratch_a_.clear();
    scratch_b_.clear();
    for (std::size_t a = i; a < n_; ++a) {
      const std::int64_t v =
          inst_.weights[a] - inst_.penalty * (static_cast<std::int64_t>(inst_.invalid_single_noun[a]) + share_[a]);
      scratch_a_.push_back(v);
      scratch_b_.push_back(v + inst_.penalty * static_cast<std::int64_t>((inst_.types[a] & uncovered).count()));
    }
    const std::int64_t b1 = weight_ - penalty_terms(hopeless) + top_sum(scratch_a_, r);
    const std::int64_t b2 = weight_ - penalty_terms(uncovered.count()) + top_sum(scratch_b_, r);
    return std::min(b1, b2);
  }

  void search(std::size_t i) {
    const std::size_t r = inst_.k - chosen_.size();
    if (r == 0) {
      const std::int64_t obj = weight_ - penalty_terms((~covered_).count());
      if (!have_best_ || obj > best_) {
        have_best_ = true;
        best_ = obj;
        best_set_ = chosen_;
      }
      return;
    }
    if (n_ - i < r) return;
    if (have_best_ && bound(i, r) <= best_) return;

    include(i);
    search(i + 1);
    exclude(i);
    search(i + 1);
  }

  void include(std::size_t i) {
    chosen_.push_back(i);
    weight_ += inst_.weights[i];
    invalid_ += inst_.invalid_single_noun[i];
    pairs_ += static_cast<std::size_t>(share_[i]);
    for (std::size_t t = 0; t < kPhraseTypeCount; ++t) {
      if (inst_.types[i].test(t) && cover_count_[t]++ == 0) covered_.set(t);
    }
    for (std::size_t a = 0; a < n_; ++a) share_[a] += inst_.same_head[a][i];
  }

  void exclude(std::size_t i) {
    chosen_.pop_back();
    weight_ -= inst_.weights[i];
    invalid_ -= inst_.invalid_single_noun[i];
    for (std::size_t a = 0; a < n_; ++a) share_[a] -= inst_.same_head[a][i];
    pairs_ -= static_cast<std::size_t>(share_[i]);
    for (std::size_t t = 0; t < kPhraseTypeCount; ++t) {
      if (inst_.types[i].test(t) && --cover_count_[t] == 0) covered_.reset(t);
    }
  }

  const IlpInstance& inst_;
  const std::size_t n_;
  std::vector<std::size_t> chosen_;
  std::int64_t weight_ = 0;
  std::size_t invalid_ = 0;
  std::size_t pairs_ = 0;
  std::vector<std::int64_t> share_;  // chosen items sharing a headword with each item
  std::array<int, kPhraseTypeCount> cover_count_{};
  TypeFlags covered_;
  std::vector<TypeFlags> suffix_types_;
  std::vector<std::int64_t> scratch_a_;
  std::vector<std::int64_t> scratch_b_;
  bool have_best_ = false;
  std::int64_t best_ = std::numeric_limits<std::int64_t>::min();
  std::vector<std::size_t> best_set_;
};

}  // namespace

SummarySelection solve_ilp(const IlpInstance& inst) {
  inst.validate();
  return make_selection(inst, BranchAndBound(inst).run());
}

Summary summarize(const corpus::AppraisalRecord& record, const SummarizerContext& ctx) {
  std::vector<PeerSentences> peers;
  for (const auto& c : record.peer_comments) {
    PeerSentences ps{c.peer_id, {}};
    for (const auto& sentence : ctx.splitter.split(c.text)) {
      auto tagged = ctx.pretagged ? nlp::parse_pretagged(sentence) : ctx.tagger.tag_text(sentence);
      if (!tagged.empty()) ps.sentences.push_back(std::move(tagged));
    }
    peers.push_back(std::move(ps));
  }

  Summary out;
  out.employee_id = record.employee_id;
  auto candidates = extract_candidates(peers, ctx.lexicons);
  out.n_candidates = candidates.size();
  if (candidates.empty()) {
    out.diagnostic = "no candidate phrases in peer comments";
    return out;
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const CandidatePhrase& a, const CandidatePhrase& b) {
    return phrase_importance(a) > phrase_importance(b);
  });
  auto inst = build_ilp(std::move(candidates));
  auto sel = solve_ilp(inst);
  out.k = inst.k;
  out.phrases = sel.phrases_out;
  out.objective = sel.objective;
  out.slacks = sel.slacks;
  out.text = text::join(out.phrases, ", ");
  return out;
}

nlohmann::json slacks_to_json(const Slacks& slacks) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t s = 0; s < kSlackCount; ++s) j["S" + std::to_string(s + 1)] = slacks[s];
  return j;
}

nlohmann::json to_json(const Summary& s) {
  nlohmann::json j = {{"employee_id", s.employee_id},
                      {"k", s.k},
                      {"n_candidates", s.n_candidates},
                      {"phrases", s.phrases},
                      {"summary", s.text},
                      {"objective", s.objective},
                      {"slacks", slacks_to_json(s.slacks)}};
  if (!s.diagnostic.empty()) j["diagnostic"] = s.diagnostic;
  return j;
}

}  // namespace pamine::summarize

#include "pamine/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "pamine/error.h"
#include "pamine/text.h"

namespace pamine::corpus {

namespace {

constexpr const char* kModule = "corpus-io";

[[noreturn]] void fail_at(std::string_view origin, std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << origin << ":" << line << ": " << what;
  throw Error(kModule, os.str());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(kModule, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(kModule, "read failure on " + path.string());
  return ss.str();
}

void check_unique(std::vector<AppraisalRecord>& records, std::unordered_set<std::string>& seen,
                  std::string_view origin, std::size_t line) {
  const auto& id = records.back().employee_id;
  if (!seen.insert(id).second) fail_at(origin, line, "duplicate employee_id \"" + id + "\"");
}

std::string required_string(const nlohmann::json& obj, const char* key, std::string_view origin,
                            std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    fail_at(origin, line, std::string("field \"") + key + "\" must be a string");
  }
  return it->get<std::string>();
}

AppraisalRecord record_from_json(const nlohmann::json& obj, std::string_view origin, std::size_t line) {
  if (!obj.is_object()) fail_at(origin, line, "expected a JSON object");
  AppraisalRecord rec;
  rec.employee_id = required_string(obj, "employee_id", origin, line);
  if (text::trim(rec.employee_id).empty()) fail_at(origin, line, "empty employee_id");
  if (obj.contains("supervisor_text") && !obj["supervisor_text"].is_null()) {
    rec.supervisor_text = required_string(obj, "supervisor_text", origin, line);
  }
  if (auto it = obj.find("peer_comments"); it != obj.end() && !it->is_null()) {
    if (!it->is_array()) fail_at(origin, line, "\"peer_comments\" must be an array");
    for (const auto& c : *it) {
      if (!c.is_object()) fail_at(origin, line, "peer comment must be an object");
      PeerComment pc;
      pc.peer_id = required_string(c, "peer_id", origin, line);
      pc.text = required_string(c, "text", origin, line);
      if (text::trim(pc.text).empty()) fail_at(origin, line, "empty peer comment text");
      rec.peer_comments.push_back(std::move(pc));
    }
  }
  if (auto it = obj.find("manual_summary"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) fail_at(origin, line, "\"manual_summary\" must be a string or null");
    rec.manual_summary = it->get<std::string>();
  }
  return rec;
}

// RFC 4180 rows; quoted fields may span lines. Returns (first line number, fields).
std::vector<std::pair<std::size_t, std::vector<std::string>>> csv_rows(std::string_view content,
                                                                        std::string_view origin) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool any = false;
  std::size_t line = 1;
  std::size_t row_line = 1;
  for (std::size_t i = 0; i < content.size(); ++i) {
    char c = content[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        any = true;
        break;
      case ',':
        fields.push_back(std::move(field));
        field.clear();
        any = true;
        break;
      case '\r':
        break;
      case '\n':
        if (any || !field.empty()) {
          fields.push_back(std::move(field));
          rows.emplace_back(row_line, std::move(fields));
        }
        fields.clear();
        field.clear();
        any = false;
        ++line;
        row_line = line;
        break;
      default:
        field += c;
        any = true;
    }
  }
  if (quoted) fail_at(origin, row_line, "unterminated quoted field");
  if (any || !field.empty()) {
    fields.push_back(std::move(field));
    rows.emplace_back(row_line, std::move(fields));
  }
  return rows;
}

std::size_t nearest_rank(double p, std::size_t n) {
  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
  return std::clamp<std::size_t>(rank, 1, n) - 1;
}

const std::unordered_set<std::string>& default_abbreviations() {
  static const std::unordered_set<std::string> kAbbrev = {
      "e.g.", "i.e.", "etc.", "viz.", "vs.", "approx.", "esp.", "mr.", "mrs.",
      "ms.",  "dr.",  "prof.", "jr.", "sr.",  "st.",     "u.s.", "a.m.", "p.m."};
  return kAbbrev;
}

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

}  // namespace

Format format_for(const std::filesystem::path& path) {
  return text::to_lower(path.extension().string()) == ".csv" ? Format::kCsv : Format::kJsonl;
}

std::vector<AppraisalRecord> parse_jsonl(std::string_view content, std::string_view origin) {
  std::vector<AppraisalRecord> records;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    ++line_no;
    auto line = text::trim(content.substr(pos, nl - pos));
    pos = nl + 1;
    if (line.empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      fail_at(origin, line_no, std::string("malformed JSON: ") + e.what());
    }
    records.push_back(record_from_json(obj, origin, line_no));
    check_unique(records, seen, origin, line_no);
  }
  return records;
}

std::vector<AppraisalRecord> parse_csv(std::string_view content, std::string_view origin) {
  std::vector<AppraisalRecord> records;
  auto rows = csv_rows(content, origin);
  if (rows.empty()) return records;

  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < rows[0].second.size(); ++i) {
    column[std::string(text::trim(rows[0].second[i]))] = i;
  }
  for (const char* needed : {"employee_id", "supervisor_text", "peer_comments"}) {
    if (!column.count(needed)) fail_at(origin, rows[0].first, std::string("missing column ") + needed);
  }
  auto summary_col = column.find("manual_summary");

  std::unordered_set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& [line, fields] = rows[r];
    if (fields.size() != rows[0].second.size()) {
      fail_at(origin, line, "expected " + std::to_string(rows[0].second.size()) + " fields, got " +
                                std::to_string(fields.size()));
    }
    AppraisalRecord rec;
    rec.employee_id = std::string(text::trim(fields[column["employee_id"]]));
    if (rec.employee_id.empty()) fail_at(origin, line, "empty employee_id");
    rec.supervisor_text = fields[column["supervisor_text"]];
    std::string_view comments = fields[column["peer_comments"]];
    std::size_t start = 0;
    while (start <= comments.size()) {
      auto bar = comments.find('|', start);
      if (bar == std::string_view::npos) bar = comments.size();
      auto piece = text::trim(comments.substr(start, bar - start));
      if (!piece.empty()) {
        rec.peer_comments.push_back(
            {"P" + std::to_string(rec.peer_comments.size() + 1), std::string(piece)});
      }
      start = bar + 1;
    }
    if (summary_col != column.end() && !text::trim(fields[summary_col->second]).empty()) {
      rec.manual_summary = fields[summary_col->second];
    }
    records.push_back(std::move(rec));
    check_unique(records, seen, origin, line);
  }
  return records;
}

std::vector<AppraisalRecord> load_records(const std::filesystem::path& path, Format format) {
  auto content = read_file(path);
  auto origin = path.string();
  return format == Format::kCsv ? parse_csv(content, origin) : parse_jsonl(content, origin);
}

nlohmann::json to_json(const AppraisalRecord& record) {
  nlohmann::json comments = nlohmann::json::array();
  for (const auto& c : record.peer_comments) {
    comments.push_back({{"peer_id", c.peer_id}, {"text", c.text}});
  }
  return {{"employee_id", record.employee_id},
          {"supervisor_text", record.supervisor_text},
          {"peer_comments", std::move(comments)},
          {"manual_summary",
           record.manual_summary ? nlohmann::json(*record.manual_summary) : nlohmann::json(nullptr)}};
}

std::string to_jsonl(std::span<const AppraisalRecord> records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json(r).dump();
    out += '\n';
  }
  return out;
}

SentenceSplitter::SentenceSplitter() : abbreviations_(default_abbreviations()) {}

SentenceSplitter::SentenceSplitter(std::unordered_set<std::string> abbreviations)
    : abbreviations_(std::move(abbreviations)) {}

SentenceSplitter SentenceSplitter::from_file(const std::filesystem::path& path) {
  return SentenceSplitter(text::read_word_set(path, kModule));
}

std::vector<std::string> SentenceSplitter::split(std::string_view text) const {
  std::vector<std::string> out;
  auto emit = [&](std::size_t b, std::size_t e) {
    auto s = text::trim(text.substr(b, e - b));
    if (!s.empty()) out.emplace_back(s);
  };
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      emit(start, i);
      start = ++i;
      continue;
    }
    if (!is_terminator(c)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_terminator(text[j])) ++j;
    while (j < text.size() && is_closer(text[j])) ++j;
    if (j < text.size() && !text::is_space(text[j])) {
      i = j;
      continue;
    }
    if (j == i + 1 && c == '.') {
      std::size_t w = i;
      while (w > start && !text::is_space(text[w - 1])) --w;
      auto word = text.substr(w, i + 1 - w);
      while (!word.empty() && (word.front() == '(' || word.front() == '"' || word.front() == '\'')) {
        word.remove_prefix(1);
      }
      if (abbreviations_.count(text::to_lower(word))) {
        i = j;
        continue;
      }
    }
    emit(start, j);
    start = i = j;
  }
  emit(start, text.size());
  return out;
}

std::vector<std::string> split_sentences(std::string_view text) {
  static const SentenceSplitter kDefault;
  return kDefault.split(text);
}

std::vector<SentenceRecord> supervisor_sentences(const AppraisalRecord& record,
                                                 const SentenceSplitter& splitter) {
  std::vector<SentenceRecord> out;
  for (auto& s : splitter.split(record.supervisor_text)) {
    out.push_back({record.employee_id, SourceKind::kSupervisor, "", std::move(s), out.size()});
  }
  return out;
}

std::vector<SentenceRecord> peer_sentences(const AppraisalRecord& record,
                                           const SentenceSplitter& splitter) {
  std::vector<SentenceRecord> out;
  std::map<std::string, std::size_t> next_index;
  for (const auto& c : record.peer_comments) {
    for (auto& s : splitter.split(c.text)) {
      out.push_back(
          {record.employee_id, SourceKind::kPeer, c.peer_id, std::move(s), next_index[c.peer_id]++});
    }
  }
  return out;
}

LengthSummary summarize_lengths(std::span<const std::size_t> lengths) {
  if (lengths.empty()) throw Error(kModule, "empty corpus: no sentences to summarize");
  std::vector<std::size_t> sorted(lengths.begin(), lengths.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double sum = 0;
  for (auto v : sorted) sum += static_cast<double>(v);
  const double mean = sum / n;
  double ss = 0;
  for (auto v : sorted) ss += (static_cast<double>(v) - mean) * (static_cast<double>(v) - mean);

  LengthSummary out;
  out.min = static_cast<double>(sorted.front());
  out.max = static_cast<double>(sorted.back());
  out.mean = mean;
  out.stdev = std::sqrt(ss / n);
  out.q1 = static_cast<double>(sorted[nearest_rank(0.25, sorted.size())]);
  out.q2 = static_cast<double>(sorted[nearest_rank(0.50, sorted.size())]);
  out.q3 = static_cast<double>(sorted[nearest_rank(0.75, sorted.size())]);
  return out;
}

CorpusStats corpus_stats(std::span<const SentenceRecord> sentences) {
  std::vector<std::size_t> lengths;
  lengths.reserve(sentences.size());
  for (const auto& s : sentences) lengths.push_back(text::split_whitespace(s.text).size());
  return {sentences.size(), summarize_lengths(lengths)};
}

nlohmann::json to_json(const CorpusStats& stats) {
  const auto& w = stats.words_per_sentence;
  return {{"sentence_count", stats.sentence_count},
          {"words_per_sentence",
           {{"min", w.min}, {"max", w.max}, {"mean", w.mean}, {"stdev", w.stdev},
            {"q1", w.q1}, {"q2", w.q2}, {"q3", w.q3}}}};
}

}  // namespace pamine::corpus

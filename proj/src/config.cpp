#include "pamine/config.h"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <variant>

#include "pamine/error.h"
#include "pamine/text.h"

namespace pamine::config {

namespace {

constexpr const char* kModule = "cli";

using Value = std::variant<std::string, std::int64_t, double>;

// Strips a '#' comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

Value parse_value(std::string_view raw, const std::string& where) {
  if (raw.empty()) throw Error(kModule, where + "missing value");
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') throw Error(kModule, where + "unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
      if (raw[i] == '\\' && i + 2 < raw.size()) {
        char n = raw[++i];
        out += n == 'n' ? '\n' : n == 't' ? '\t' : n;
      } else {
        out += raw[i];
      }
    }
    return out;
  }
  std::int64_t iv = 0;
  auto [p1, e1] = std::from_chars(raw.data(), raw.data() + raw.size(), iv);
  if (e1 == std::errc() && p1 == raw.data() + raw.size()) return iv;
  double dv = 0;
  auto [p2, e2] = std::from_chars(raw.data(), raw.data() + raw.size(), dv);
  if (e2 == std::errc() && p2 == raw.data() + raw.size()) return dv;
  throw Error(kModule, where + "cannot parse value \"" + std::string(raw) + "\"");
}

std::string as_string(const Value& v, const std::string& where) {
  if (auto s = std::get_if<std::string>(&v)) return *s;
  throw Error(kModule, where + "expected a quoted string");
}

double as_double(const Value& v, const std::string& where) {
  if (auto d = std::get_if<double>(&v)) return *d;
  if (auto i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  throw Error(kModule, where + "expected a number");
}

std::int64_t as_integer(const Value& v, const std::string& where) {
  if (auto i = std::get_if<std::int64_t>(&v)) return *i;
  throw Error(kModule, where + "expected an integer");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

void require_file(const std::filesystem::path& p, std::string_view key) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(p, ec)) {
    throw Error(kModule, "config paths." + std::string(key) + ": file not found: " + p.string());
  }
}

void require_unit_interval(double v, std::string_view key) {
  if (!(v > 0 && v < 1)) throw Error(kModule, "config " + std::string(key) + " must lie in (0, 1)");
}

}  // namespace

void PipelineConfig::validate() const {
  require_file(paths.tag_lexicon, "tag_lexicon");
  require_file(paths.suffix_rules, "suffix_rules");
  require_file(paths.context_rules, "context_rules");
  require_file(paths.abbreviations, "abbreviations");
  require_file(paths.class_rules, "class_rules");
  require_file(paths.attribute_cues, "attribute_cues");
  require_file(paths.noun_attribute, "noun_attribute");
  require_file(paths.stopwords, "stopwords");
  if (paths.embeddings) require_file(*paths.embeddings, "embeddings");
  std::error_code ec;
  if (!std::filesystem::is_directory(paths.type_lexicons, ec)) {
    throw Error(kModule, "config paths.type_lexicons: directory not found: " + paths.type_lexicons.string());
  }
  require_unit_interval(tau, "clustering.tau");
  require_unit_interval(attribute_threshold, "attributes.threshold");
  require_unit_interval(alpha, "evaluation.alpha");
  if (!(logistic.l2 >= 0)) throw Error(kModule, "config classifier.l2 must be non-negative");
  if (logistic.max_epochs == 0) throw Error(kModule, "config classifier.max_epochs must be positive");
  if (!(logistic.tolerance > 0)) throw Error(kModule, "config classifier.tolerance must be positive");
  if (!(nb_alpha > 0)) throw Error(kModule, "config classifier.nb_alpha must be positive");
  if (folds < 2) throw Error(kModule, "config classifier.folds must be at least 2");
}

PipelineConfig defaults(const std::filesystem::path& data_dir) {
  PipelineConfig c;
  c.paths.tag_lexicon = data_dir / "tag_lexicon.tsv";
  c.paths.suffix_rules = data_dir / "suffix_rules.tsv";
  c.paths.context_rules = data_dir / "tag_context_rules.txt";
  c.paths.abbreviations = data_dir / "abbreviations.txt";
  c.paths.class_rules = data_dir / "class_rules.tsv";
  c.paths.attribute_cues = data_dir / "attribute_cues.tsv";
  c.paths.type_lexicons = data_dir / "types";
  c.paths.noun_attribute = data_dir / "noun_attribute.txt";
  c.paths.stopwords = data_dir / "stopwords.txt";
  return c;
}

PipelineConfig parse(std::string_view content, const std::filesystem::path& base_dir,
                     const std::filesystem::path& data_dir, std::string_view origin) {
  PipelineConfig c = defaults(data_dir);
  std::string section;
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t line_no = 0;

  using Setter = std::function<void(const Value&, const std::string&)>;
  auto path_setter = [&](std::filesystem::path& target) -> Setter {
    return [&](const Value& v, const std::string& w) { target = resolve(base_dir, as_string(v, w)); };
  };
  const std::map<std::string, Setter> setters = {
      {"paths.tag_lexicon", path_setter(c.paths.tag_lexicon)},
      {"paths.suffix_rules", path_setter(c.paths.suffix_rules)},
      {"paths.context_rules", path_setter(c.paths.context_rules)},
      {"paths.abbreviations", path_setter(c.paths.abbreviations)},
      {"paths.class_rules", path_setter(c.paths.class_rules)},
      {"paths.attribute_cues", path_setter(c.paths.attribute_cues)},
      {"paths.type_lexicons", path_setter(c.paths.type_lexicons)},
      {"paths.noun_attribute", path_setter(c.paths.noun_attribute)},
      {"paths.stopwords", path_setter(c.paths.stopwords)},
      {"paths.embeddings",
       [&](const Value& v, const std::string& w) { c.paths.embeddings = resolve(base_dir, as_string(v, w)); }},
      {"clustering.tau", [&](const Value& v, const std::string& w) { c.tau = as_double(v, w); }},
      {"classifier.l2", [&](const Value& v, const std::string& w) { c.logistic.l2 = as_double(v, w); }},
      {"classifier.max_epochs",
       [&](const Value& v, const std::string& w) {
         auto n = as_integer(v, w);
         if (n <= 0) throw Error(kModule, w + "max_epochs must be positive");
         c.logistic.max_epochs = static_cast<std::size_t>(n);
       }},
      {"classifier.tolerance", [&](const Value& v, const std::string& w) { c.logistic.tolerance = as_double(v, w); }},
      {"classifier.nb_alpha", [&](const Value& v, const std::string& w) { c.nb_alpha = as_double(v, w); }},
      {"classifier.folds",
       [&](const Value& v, const std::string& w) {
         auto n = as_integer(v, w);
         if (n < 2) throw Error(kModule, w + "folds must be at least 2");
         c.folds = static_cast<std::size_t>(n);
       }},
      {"attributes.threshold",
       [&](const Value& v, const std::string& w) { c.attribute_threshold = as_double(v, w); }},
      {"evaluation.alpha", [&](const Value& v, const std::string& w) { c.alpha = as_double(v, w); }},
      {"run.seed",
       [&](const Value& v, const std::string& w) {
         auto n = as_integer(v, w);
         if (n < 0) throw Error(kModule, w + "seed must be non-negative");
         c.seed = static_cast<std::uint64_t>(n);
       }},
      {"run.out", path_setter(c.out_dir)},
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    auto body = text::trim(strip_comment(line));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw Error(kModule, where + "malformed section header");
      section = std::string(text::trim(body.substr(1, body.size() - 2)));
      continue;
    }
    auto eq = body.find('=');
    if (eq == std::string_view::npos) throw Error(kModule, where + "expected key = value");
    auto key = std::string(text::trim(body.substr(0, eq)));
    auto full = section.empty() ? key : section + "." + key;
    auto it = setters.find(full);
    if (it == setters.end()) throw Error(kModule, where + "unknown setting \"" + full + "\"");
    it->second(parse_value(text::trim(body.substr(eq + 1)), where), where);
  }
  return c;
}

PipelineConfig load(const std::filesystem::path& path, const std::filesystem::path& data_dir) {
  std::ifstream in(path);
  if (!in) throw Error(kModule, "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  auto c = parse(ss.str(), path.parent_path(), data_dir, path.string());
  c.source = path;
  return c;
}

std::optional<std::filesystem::path> path_from_environment() {
  const char* v = std::getenv("PAMINE_CONFIG");
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::filesystem::path(v);
}

nlohmann::json to_json(const PipelineConfig& c) {
  nlohmann::json paths = {{"tag_lexicon", c.paths.tag_lexicon.string()},
                          {"suffix_rules", c.paths.suffix_rules.string()},
                          {"context_rules", c.paths.context_rules.string()},
                          {"abbreviations", c.paths.abbreviations.string()},
                          {"class_rules", c.paths.class_rules.string()},
                          {"attribute_cues", c.paths.attribute_cues.string()},
                          {"type_lexicons", c.paths.type_lexicons.string()},
                          {"noun_attribute", c.paths.noun_attribute.string()},
                          {"stopwords", c.paths.stopwords.string()}};
  paths["embeddings"] = c.paths.embeddings ? nlohmann::json(c.paths.embeddings->string()) : nlohmann::json();
  return {{"paths", paths},
          {"clustering", {{"tau", c.tau}}},
          {"classifier",
           {{"l2", c.logistic.l2},
            {"max_epochs", c.logistic.max_epochs},
            {"tolerance", c.logistic.tolerance},
            {"nb_alpha", c.nb_alpha},
            {"folds", c.folds}}},
          {"attributes", {{"threshold", c.attribute_threshold}}},
          {"evaluation", {{"alpha", c.alpha}}},
          {"run", {{"seed", c.seed}, {"out", c.out_dir.string()}}}};
}

}  // namespace pamine::config

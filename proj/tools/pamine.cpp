// Command-line front end for the appraisal text-mining pipeline.

#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pamine/attributes.h"
#include "pamine/classifier.h"
#include "pamine/clustering.h"
#include "pamine/config.h"
#include "pamine/corpus.h"
#include "pamine/error.h"
#include "pamine/evaluation.h"
#include "pamine/nlp.h"
#include "pamine/summarizer.h"
#include "pamine/text.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

struct CommonOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool pretagged = false;
  std::string format = "auto";
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "Pipeline config file (default: $PAMINE_CONFIG, else bundled data)");
  cmd->add_option("--out", o.out, "Output directory (overrides run.out)");
  cmd->add_option("--seed", o.seed, "Random seed (overrides run.seed)");
  cmd->add_flag("--pretagged", o.pretagged, "Text is already tagged as word_TAG tokens");
  cmd->add_option("--format", o.format, "Corpus format")->check(CLI::IsMember({"auto", "jsonl", "csv"}));
}

// Config is resolved and validated before any corpus is read.
pamine::config::PipelineConfig resolve_config(const CommonOptions& o) {
  pamine::config::PipelineConfig c;
  if (!o.config.empty()) {
    c = pamine::config::load(o.config, pamine::nlp::default_data_dir());
  } else if (auto env = pamine::config::path_from_environment()) {
    c = pamine::config::load(*env, pamine::nlp::default_data_dir());
  } else {
    c = pamine::config::defaults(pamine::nlp::default_data_dir());
  }
  if (!o.out.empty()) c.out_dir = o.out;
  if (o.seed) c.seed = *o.seed;
  c.validate();
  return c;
}

std::vector<pamine::corpus::AppraisalRecord> read_corpus(const std::string& path, const CommonOptions& o) {
  auto format = o.format == "csv"     ? pamine::corpus::Format::kCsv
                : o.format == "jsonl" ? pamine::corpus::Format::kJsonl
                                      : pamine::corpus::format_for(path);
  return pamine::corpus::load_records(path, format);
}

fs::path output_file(const pamine::config::PipelineConfig& c, const std::string& name) {
  std::error_code ec;
  fs::create_directories(c.out_dir, ec);
  if (ec) throw pamine::Error("cli", "cannot create output directory " + c.out_dir.string() + ": " + ec.message());
  return c.out_dir / name;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw pamine::Error("cli", "cannot write " + path.string());
  out << content;
  if (!out) throw pamine::Error("cli", "write failed for " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void write_jsonl(const fs::path& path, const std::vector<json>& lines) {
  std::string content;
  for (const auto& j : lines) content += j.dump() + "\n";
  write_text(path, content);
}

std::vector<json> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pamine::Error("cli", "cannot open " + path);
  std::vector<json> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (pamine::text::trim(line).empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw pamine::Error("cli", path + ":" + std::to_string(line_no) + ": invalid JSON: " + e.what());
    }
  }
  return out;
}

std::string required_string(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key) || !j[key].is_string()) {
    throw pamine::Error("cli", where + ": missing string field \"" + key + "\"");
  }
  return j[key].get<std::string>();
}

// Shared state for subcommands that tag text.
struct Pipeline {
  pamine::config::PipelineConfig config;
  pamine::nlp::Tagger tagger;
  pamine::corpus::SentenceSplitter splitter;
  bool pretagged = false;

  Pipeline(pamine::config::PipelineConfig c, bool pre)
      : config(std::move(c)),
        tagger(pamine::nlp::Tagger::load(config.paths.tag_lexicon, config.paths.suffix_rules,
                                         config.paths.context_rules)),
        splitter(pamine::corpus::SentenceSplitter::from_file(config.paths.abbreviations)),
        pretagged(pre) {}

  pamine::nlp::TaggedSentence tag(const std::string& sentence) const {
    return pretagged ? pamine::nlp::parse_pretagged(sentence) : tagger.tag_text(sentence);
  }

  pamine::classify::TrainOptions train_options() const {
    pamine::classify::TrainOptions t;
    t.nb_smoothing = config.nb_alpha;
    t.logistic = config.logistic;
    return t;
  }
};

struct ClassifiedItem {
  pamine::corpus::SentenceRecord record;
  pamine::nlp::TaggedSentence tagged;
  pamine::classify::SentenceClass label;
};

std::vector<pamine::classify::LabelledSentence> read_labelled_sentences(const std::string& path,
                                                                        const Pipeline& p) {
  std::vector<pamine::classify::LabelledSentence> out;
  std::size_t n = 0;
  for (const auto& j : read_jsonl(path)) {
    auto where = path + " item " + std::to_string(++n);
    out.push_back({p.tag(required_string(j, "sentence", where)),
                   pamine::classify::class_from_string(required_string(j, "class", where))});
  }
  return out;
}

// Supervisor sentences labelled by the pattern rules or a trained model.
std::vector<ClassifiedItem> classify_corpus(const std::vector<pamine::corpus::AppraisalRecord>& records,
                                            const Pipeline& p, const std::string& mode,
                                            const std::optional<pamine::classify::BowModel>& model) {
  std::optional<pamine::classify::PatternRuleSet> rules;
  if (mode == "pattern") rules = pamine::classify::PatternRuleSet::load(p.config.paths.class_rules);
  std::vector<ClassifiedItem> out;
  for (const auto& r : records) {
    for (auto& s : pamine::corpus::supervisor_sentences(r, p.splitter)) {
      auto tagged = p.tag(s.text);
      auto label = rules ? rules->classify(tagged) : pamine::classify::predict_bow(*model, tagged);
      out.push_back({std::move(s), std::move(tagged), label});
    }
  }
  return out;
}

std::optional<pamine::classify::BowModel> train_if_needed(const std::string& mode, const std::string& train,
                                                          const Pipeline& p) {
  if (mode == "pattern") return std::nullopt;
  if (train.empty()) throw pamine::Error("cli", "--mode " + mode + " needs --train FILE");
  auto data = read_labelled_sentences(train, p);
  return pamine::classify::train_bow(data, pamine::classify::model_kind_from_string(mode), p.train_options());
}

int cmd_stats(const CommonOptions& o, const std::string& corpus_path) {
  auto config = resolve_config(o);
  auto records = read_corpus(corpus_path, o);
  auto splitter = pamine::corpus::SentenceSplitter::from_file(config.paths.abbreviations);
  std::vector<pamine::corpus::SentenceRecord> sup, peer;
  for (const auto& r : records) {
    for (auto& s : pamine::corpus::supervisor_sentences(r, splitter)) sup.push_back(std::move(s));
    for (auto& s : pamine::corpus::peer_sentences(r, splitter)) peer.push_back(std::move(s));
  }
  json j = {{"records", records.size()}, {"supervisor", pamine::corpus::to_json(pamine::corpus::corpus_stats(sup))}};
  j["peer"] = peer.empty() ? json() : pamine::corpus::to_json(pamine::corpus::corpus_stats(peer));
  write_json(output_file(config, "stats.json"), j);
  return kExitOk;
}

int cmd_classify(const CommonOptions& o, const std::string& corpus_path, const std::string& mode,
                 const std::string& train, std::size_t folds) {
  Pipeline p(resolve_config(o), o.pretagged);
  if (folds > 0 && train.empty()) throw pamine::Error("cli", "--folds needs --train FILE");
  auto records = read_corpus(corpus_path, o);
  auto model = train_if_needed(mode, train, p);
  if (model) write_json(output_file(p.config, "classify_model.json"), pamine::classify::to_json(*model));

  std::vector<json> lines;
  for (const auto& item : classify_corpus(records, p, mode, model)) {
    lines.push_back({{"employee_id", item.record.employee_id},
                     {"index", item.record.index},
                     {"sentence", item.record.text},
                     {"class", pamine::classify::to_string(item.label)}});
  }
  write_jsonl(output_file(p.config, "classify.jsonl"), lines);

  if (folds > 0) {
    auto data = read_labelled_sentences(train, p);
    json report = json::object();
    for (auto kind : {pamine::classify::ModelKind::kMultinomialNb, pamine::classify::ModelKind::kLogisticRegression}) {
      auto cv = pamine::classify::crossvalidate(data, kind, folds, p.config.seed, p.train_options());
      report[std::string(pamine::classify::to_string(kind))] = pamine::classify::to_json(cv.report);
    }
    std::vector<pamine::classify::SentenceClass> gold, predicted;
    auto rules = pamine::classify::PatternRuleSet::load(p.config.paths.class_rules);
    for (const auto& d : data) {
      gold.push_back(d.label);
      predicted.push_back(rules.classify(d.sentence));
    }
    report["pattern"] = pamine::classify::to_json(pamine::classify::evaluate_predictions(gold, predicted));
    write_json(output_file(p.config, "classify_cv.json"),
               {{"folds", folds}, {"seed", p.config.seed}, {"results", report}});
  }
  return kExitOk;
}

std::vector<pamine::attributes::LabelledAttributes> read_labelled_attributes(const std::string& path,
                                                                             const Pipeline& p) {
  std::vector<pamine::attributes::LabelledAttributes> out;
  std::size_t n = 0;
  for (const auto& j : read_jsonl(path)) {
    auto where = path + " item " + std::to_string(++n);
    auto sentence = required_string(j, "sentence", where);
    if (!j.contains("attributes")) throw pamine::Error("cli", where + ": missing field \"attributes\"");
    out.push_back({p.tag(sentence), pamine::attributes::attribute_set_from_json(j["attributes"])});
  }
  return out;
}

int cmd_attributes(const CommonOptions& o, const std::string& corpus_path, const std::string& mode,
                   const std::string& train, std::size_t folds) {
  Pipeline p(resolve_config(o), o.pretagged);
  if (mode == "lr" && train.empty()) throw pamine::Error("cli", "--mode lr needs --train FILE");
  if (folds > 0 && train.empty()) throw pamine::Error("cli", "--folds needs --train FILE");
  auto records = read_corpus(corpus_path, o);

  auto cues = pamine::attributes::AttributeCueMatcher::load(p.config.paths.attribute_cues);
  std::optional<pamine::attributes::OvrModel> model;
  std::vector<pamine::attributes::LabelledAttributes> data;
  if (!train.empty()) data = read_labelled_attributes(train, p);
  if (mode == "lr") model = pamine::attributes::train_ovr(data, p.config.logistic, p.config.attribute_threshold);

  std::vector<json> lines;
  std::vector<pamine::attributes::ClassifiedAttributes> tally;
  for (const auto& item : classify_corpus(records, p, "pattern", std::nullopt)) {
    auto attrs = model ? pamine::attributes::predict_attributes(*model, item.tagged) : cues.match(item.tagged);
    lines.push_back({{"employee_id", item.record.employee_id},
                     {"sentence", item.record.text},
                     {"class", pamine::classify::to_string(item.label)},
                     {"attributes", pamine::attributes::to_json(attrs)}});
    tally.push_back({item.label, attrs});
  }
  write_jsonl(output_file(p.config, "attributes.jsonl"), lines);
  write_json(output_file(p.config, "attribute_histogram.json"),
             pamine::attributes::to_json(pamine::attributes::attribute_histogram(tally)));

  if (folds > 0) {
    auto cv = pamine::attributes::crossvalidate_ovr(data, folds, p.config.seed, p.config.logistic,
                                                   p.config.attribute_threshold);
    std::vector<pamine::attributes::LabelPair> pattern_pairs;
    for (const auto& d : data) pattern_pairs.push_back({cues.match(d.sentence), d.labels});
    write_json(output_file(p.config, "attributes_cv.json"),
               {{"folds", folds},
                {"seed", p.config.seed},
                {"logistic_regression", pamine::attributes::to_json(cv.scores)},
                {"pattern", pamine::attributes::to_json(pamine::attributes::multilabel_prf(pattern_pairs))}});
  }
  return kExitOk;
}

int cmd_cluster(const CommonOptions& o, const std::string& corpus_path, const std::vector<std::string>& classes,
                const std::string& mode, const std::string& train, const std::string& embeddings) {
  auto config = resolve_config(o);
  if (!embeddings.empty()) config.paths.embeddings = embeddings;
  if (!config.paths.embeddings) throw pamine::Error("cli", "cluster needs an embedding file (paths.embeddings or --embeddings)");
  Pipeline p(config, o.pretagged);
  auto records = read_corpus(corpus_path, o);

  std::vector<pamine::classify::SentenceClass> filter;
  for (const auto& c : classes) filter.push_back(pamine::classify::class_from_string(c));

  std::vector<std::string> warnings;
  auto table = pamine::clustering::EmbeddingTable::load(*p.config.paths.embeddings, &warnings);
  for (const auto& w : warnings) std::cerr << json{{"warning", {{"module", "embedding-clustering"}, {"message", w}}}}.dump() << "\n";

  auto stopwords = pamine::text::read_word_set(p.config.paths.stopwords, "embedding-clustering");
  auto model = train_if_needed(mode, train, p);
  std::vector<pamine::clustering::ClassifiedSentence> sentences;
  for (auto& item : classify_corpus(records, p, mode, model)) sentences.push_back({std::move(item.tagged), item.label});
  auto nouns = pamine::clustering::extract_nouns(sentences, filter, stopwords);
  auto clusters = pamine::clustering::cluster_nouns(nouns, table, p.config.tau);

  json class_names = json::array();
  for (auto c : filter) class_names.push_back(pamine::classify::to_string(c));
  write_json(output_file(p.config, "clusters.json"), {{"classes", class_names},
                                                      {"tau", p.config.tau},
                                                      {"nouns", nouns.size()},
                                                      {"clusters", pamine::clustering::cluster_report(clusters)}});
  return kExitOk;
}

int cmd_summarize(const CommonOptions& o, const std::string& corpus_path) {
  Pipeline p(resolve_config(o), o.pretagged);
  auto lexicons = pamine::summarize::Lexicons::load(p.config.paths.noun_attribute, p.config.paths.type_lexicons);
  auto records = read_corpus(corpus_path, o);
  pamine::summarize::SummarizerContext ctx{p.tagger, p.splitter, lexicons, p.pretagged};
  std::vector<json> lines;
  for (const auto& r : records) {
    auto s = pamine::summarize::summarize(r, ctx);
    auto j = pamine::summarize::to_json(s);
    j["baseline_sentences"] = pamine::evaluation::baseline_sentence_budget(s.k);
    lines.push_back(std::move(j));
  }
  write_jsonl(output_file(p.config, "summaries.jsonl"), lines);
  return kExitOk;
}

int cmd_evaluate(const CommonOptions& o, const std::string& gold_path, const std::vector<std::string>& system_args) {
  auto config = resolve_config(o);
  std::vector<std::pair<std::string, pamine::evaluation::SummarySet>> systems;
  std::vector<std::pair<std::string, std::string>> named;
  for (const auto& arg : system_args) {
    auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size()) {
      throw CLI::ValidationError("--system", "expected NAME=PATH, got \"" + arg + "\"");
    }
    named.emplace_back(arg.substr(0, eq), arg.substr(eq + 1));
  }
  auto gold = pamine::evaluation::load_summaries(gold_path);
  for (const auto& [name, path] : named) systems.emplace_back(name, pamine::evaluation::load_summaries(path));
  auto report = pamine::evaluation::compare_systems(gold, systems, config.alpha);
  write_json(output_file(config, "evaluation.json"), pamine::evaluation::to_json(report));
  return kExitOk;
}

void report_error(std::string_view module, std::string_view message) {
  std::cerr << json{{"error", {{"module", module}, {"message", message}}}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mines performance-appraisal text: sentence classes, attributes, noun clusters, peer summaries"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string corpus_path, mode = "pattern", train, gold, embeddings;
  std::size_t folds = 0;
  std::vector<std::string> classes = {"STRENGTH"};
  std::vector<std::string> systems;

  auto* stats = app.add_subcommand("stats", "Sentence length statistics");
  auto* classify = app.add_subcommand("classify", "Label supervisor sentences STRENGTH/WEAKNESS/SUGGESTION/OTHER");
  auto* attributes = app.add_subcommand("attributes", "Map supervisor sentences to performance attributes");
  auto* cluster = app.add_subcommand("cluster", "Cluster the nouns of one or more sentence classes");
  auto* summarize = app.add_subcommand("summarize", "Phrase summaries of peer feedback");
  auto* evaluate = app.add_subcommand("evaluate", "ROUGE-1 comparison of summaries against gold summaries");

  for (auto* cmd : {stats, classify, attributes, cluster, summarize, evaluate}) add_common(cmd, common);
  for (auto* cmd : {stats, classify, attributes, cluster, summarize}) {
    cmd->add_option("corpus", corpus_path, "Appraisal corpus (JSONL or CSV)")->required();
  }
  classify->add_option("--mode", mode, "Classifier")->check(CLI::IsMember({"pattern", "nb", "lr"}));
  classify->add_option("--train", train, "Labelled sentences, JSONL {sentence, class}");
  classify->add_option("--folds", folds, "Cross-validate on the training data")->check(CLI::Range(2, 1000));
  attributes->add_option("--mode", mode, "Mapper")->check(CLI::IsMember({"pattern", "lr"}));
  attributes->add_option("--train", train, "Labelled sentences, JSONL {sentence, attributes}");
  attributes->add_option("--folds", folds, "Cross-validate on the training data")->check(CLI::Range(2, 1000));
  cluster->add_option("--class", classes, "Sentence classes whose nouns are clustered (repeatable)")
      ->delimiter(',')
      ->allow_extra_args(false);
  cluster->add_option("--mode", mode, "Sentence classifier")->check(CLI::IsMember({"pattern", "nb", "lr"}));
  cluster->add_option("--train", train, "Labelled sentences for --mode nb|lr");
  cluster->add_option("--embeddings", embeddings, "Word vector file (overrides paths.embeddings)");
  evaluate->add_option("--gold", gold, "Gold summaries, JSONL {employee_id, summary}")->required();
  evaluate->add_option("--system", systems, "System summaries as NAME=PATH (repeatable)")
      ->required()
      ->allow_extra_args(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*stats) return cmd_stats(common, corpus_path);
    if (*classify) return cmd_classify(common, corpus_path, mode, train, folds);
    if (*attributes) return cmd_attributes(common, corpus_path, mode, train, folds);
    if (*cluster) return cmd_cluster(common, corpus_path, classes, mode, train, embeddings);
    if (*summarize) return cmd_summarize(common, corpus_path);
    if (*evaluate) return cmd_evaluate(common, gold, systems);
  } catch (const CLI::ValidationError& e) {
    report_error("cli", e.what());
    return kExitUsage;
  } catch (const pamine::Error& e) {
    report_error(e.module(), e.what());
    return kExitData;
  } catch (const std::exception& e) {
    report_error("internal", e.what());
    return kExitInternal;
  }
  return kExitUsage;
}

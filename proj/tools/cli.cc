// Copyright 2026 The bioevents Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "bioevents/adapters/adapters.h"
#include "bioevents/core/io.h"
#include "bioevents/core/labels.h"
#include "bioevents/core/random.h"
#include "bioevents/core/text.h"
#include "bioevents/core/validate.h"
#include "bioevents/ingest/ingest.h"
#include "bioevents/metrics/metrics.h"
#include "bioevents/pipeline/pipeline.h"
#include "bioevents/shift/shift.h"
#include "bioevents/tagger/anova.h"
#include "bioevents/tagger/harness.h"
#include "bioevents/tagger/presets.h"
#include "json.hpp"

namespace bioevents::cli {

namespace fs = std::filesystem;
using nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";

struct Settings {
  std::string config;
  std::uint64_t seed = 13;
  bool quiet = false;

  struct {
    std::string input;
    std::string format = "jsonl";
    std::string output;
    bool person_filter = false;
    bool light_verb_rewrite = false;
    std::string light_verbs;
    bool no_validate = false;
  } convert;

  struct {
    std::vector<std::string> corpora;
    std::string data_dir;
    std::string basis = "lemma";
    std::string out;
    unsigned threads = 1;
    std::size_t top_k = 10;
  } stats;

  struct {
    std::string a;
    std::string b;
    std::vector<std::string> layers{"entity", "event", "link", "cont_mod"};
    std::vector<std::string> annotators{"A", "B"};
    std::string out;
  } iaa;

  struct {
    std::string preset;
    bool list_presets = false;
    bool mock_classifier = false;
    double mock_noise = 0.0;
    std::string classifier = "perceptron";
    std::string data_dir;
    int epochs = 0;
    std::string out;
  } train;

  struct {
    std::string classifier = "perceptron";
    std::string train;
    std::string test;
    std::string task = "event";
    int epochs = 5;
    std::string out;
  } eval;

  struct {
    std::string manifest;
    std::string out;
    std::string classifier = "memorizing";
    std::string entity_train;
    std::string event_train;
    int epochs = 5;
    unsigned threads = 1;
    std::string checkpoint;
    std::size_t stop_after = 0;
    int max_length = 128;
    bool strict = false;
  } pipeline;

  struct {
    std::string out;
    std::string sparql_url = ingest::EndpointConfig{}.sparql_url;
    std::string article_api_url = ingest::EndpointConfig{}.article_api_url;
    std::string cache_dir = "cache";
    std::string western = "config/western_countries.tsv";
    std::string minority = "config/minority_ethnic_groups.tsv";
    int birth_year_min = 1808;
    std::size_t page_size = 5000;
    std::size_t max_pages = 0;
    std::size_t max_biographies = 0;
    double requests_per_second = 1.0;
    unsigned parallelism = 2;
    int timeout = 60;
    std::string replay;
    std::string record;
  } ingest;

  struct {
    std::vector<std::string> inputs;
    std::vector<std::string> groups{"TW", "TM", "WM", "WW"};
    std::size_t top_k = 20;
    bool surface = false;
    std::string out;
  } shift;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return kExitUsage;
    case ErrorCode::kParse:
      return kExitParse;
    case ErrorCode::kValidation:
    case ErrorCode::kNoPersonEntity:
    case ErrorCode::kLengthMismatch:
    case ErrorCode::kTokenizationMismatch:
    case ErrorCode::kMissingField:
      return kExitValidation;
    case ErrorCode::kIo:
    case ErrorCode::kNotFound:
      return kExitIo;
    case ErrorCode::kInsufficientData:
    case ErrorCode::kEmptyGroup:
    case ErrorCode::kEmptySupport:
      return kExitInsufficientData;
    case ErrorCode::kNetwork:
      return kExitNetwork;
    case ErrorCode::kSchemaChange:
      return kExitSchemaChange;
    case ErrorCode::kRebuildRequired:
      return kExitRebuildRequired;
    case ErrorCode::kUndefined:
    case ErrorCode::kNotNormalized:
      return kExitNumeric;
    case ErrorCode::kClassifier:
      return kExitFailure;
  }
  return kExitFailure;
}

namespace {

constexpr const char* kExitCodeHelp =
    "Exit codes: 0 ok, 1 other failure, 2 usage, 3 parse error, 4 validation, 5 I/O, "
    "6 insufficient data, 7 network, 8 upstream schema change, 9 checkpoint rebuild required, "
    "10 partial failure under --strict, 11 undefined or non-normalizable quantity.";

std::vector<std::string> presets_help() {
  std::vector<std::string> names;
  for (const auto& p : tagger::all_presets()) names.push_back(p.name);
  return names;
}

}  // namespace

std::unique_ptr<CLI::App> make_app(Settings& s) {
  auto app = std::make_unique<CLI::App>(
      "Biographical event detection toolkit: corpus conversion, statistics, tagging, "
      "pipeline runs, knowledge-base ingestion and group-level event shifts.",
      "bioevents");
  app->footer(kExitCodeHelp);
  app->require_subcommand(1);
  app->set_config("--config", "", "INI file; [section] names match subcommands");
  app->add_option("--seed", s.seed, "Seed for every sampled quantity")->capture_default_str();
  app->add_flag("--quiet", s.quiet, "Suppress progress messages on stderr");

  auto* convert = app->add_subcommand("convert", "Convert a source corpus to the canonical format");
  convert->add_option("--input", s.convert.input, "Source file or directory")->required();
  convert->add_option("--format", s.convert.format,
                      "Source format: jsonl, ontonotes, gum, timeml, litbank")
      ->capture_default_str()
      ->check(CLI::IsMember({"jsonl", "ontonotes", "gum", "timeml", "litbank"}));
  convert->add_option("--output", s.convert.output, "Canonical JSONL output file")->required();
  convert->add_flag("--person-filter", s.convert.person_filter,
                    "Keep only documents with a person coreference chain");
  convert->add_flag("--light-verb-rewrite", s.convert.light_verb_rewrite,
                    "Move light-verb events to their complements and add LINKs");
  convert->add_option("--light-verbs", s.convert.light_verbs,
                      "Light-verb lexicon file (one form per line); built-in list when absent");
  convert->add_flag("--no-validate", s.convert.no_validate,
                    "Skip invariant checks on the converted corpus");

  auto* stats = app->add_subcommand("stats", "Corpus profiles and the pairwise JSD matrix");
  stats->add_option("--corpora", s.stats.corpora,
                    "Corpus names (resolved as <data-dir>/<name>.jsonl) or paths")
      ->delimiter(',')
      ->required();
  stats->add_option("--data-dir", s.stats.data_dir, "Directory holding canonical corpora");
  stats->add_option("--basis", s.stats.basis, "Distribution basis: lemma, surface, event")
      ->capture_default_str()
      ->check(CLI::IsMember({"lemma", "surface", "event"}));
  stats->add_option("--out", s.stats.out, "Output directory")->required();
  stats->add_option("--threads", s.stats.threads, "Worker threads for the matrix")
      ->capture_default_str();
  stats->add_option("--top-k", s.stats.top_k, "Event lemmas listed per profile")
      ->capture_default_str();

  auto* iaa = app->add_subcommand("iaa", "Cohen's kappa between two annotators");
  iaa->add_option("--a", s.iaa.a, "First annotator's canonical corpus")->required();
  iaa->add_option("--b", s.iaa.b, "Second annotator's canonical corpus")->required();
  iaa->add_option("--layers", s.iaa.layers, "Layers: entity, event, link, cont_mod")
      ->delimiter(',')
      ->capture_default_str();
  iaa->add_option("--annotators", s.iaa.annotators, "Two annotator names")
      ->delimiter(',')
      ->expected(2)
      ->capture_default_str();
  iaa->add_option("--out", s.iaa.out, "Output directory for iaa.csv");

  auto* train = app->add_subcommand("train", "Train and score one preset table row");
  train->add_option("--preset", s.train.preset, "Preset name, e.g. table5:timebank+wikibio");
  train->add_flag("--list-presets", s.train.list_presets, "Print preset names and exit");
  train->add_flag("--mock-classifier", s.train.mock_classifier,
                  "Use the gold-replaying classifier instead of a trainable one");
  train->add_option("--mock-noise", s.train.mock_noise,
                    "Label corruption rate of the mock classifier")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  train->add_option("--classifier", s.train.classifier, "Trainable classifier: perceptron")
      ->capture_default_str()
      ->check(CLI::IsMember({"perceptron", "memorizing"}));
  train->add_option("--data-dir", s.train.data_dir, "Directory holding canonical corpora")
      ->required();
  train->add_option("--epochs", s.train.epochs, "Override the preset's epoch count (0 keeps it)")
      ->capture_default_str();
  train->add_option("--out", s.train.out, "Output directory for run_log.json");

  auto* eval = app->add_subcommand("eval", "Train on one corpus and score another");
  eval->add_option("--classifier", s.eval.classifier, "perceptron or memorizing")
      ->capture_default_str()
      ->check(CLI::IsMember({"perceptron", "memorizing"}));
  eval->add_option("--train", s.eval.train, "Canonical training corpus")->required();
  eval->add_option("--test", s.eval.test, "Canonical test corpus")->required();
  eval->add_option("--task", s.eval.task, "entity or event")
      ->capture_default_str()
      ->check(CLI::IsMember({"entity", "event"}));
  eval->add_option("--epochs", s.eval.epochs, "Training epochs")->capture_default_str();
  eval->add_option("--out", s.eval.out, "Output directory for eval.json");

  auto* pipe = app->add_subcommand("pipeline", "Two-stage sentence filter and event detection");
  pipe->add_option("--manifest", s.pipeline.manifest, "Manifest JSONL")->required();
  pipe->add_option("--out", s.pipeline.out, "Output directory")->required();
  pipe->add_option("--classifier", s.pipeline.classifier, "memorizing or perceptron")
      ->capture_default_str()
      ->check(CLI::IsMember({"perceptron", "memorizing"}));
  pipe->add_option("--entity-train", s.pipeline.entity_train,
                   "Training corpus for the mention model (defaults to manifest gold)");
  pipe->add_option("--event-train", s.pipeline.event_train,
                   "Training corpus for the event model (defaults to manifest gold)");
  pipe->add_option("--epochs", s.pipeline.epochs, "Training epochs for trainable models")
      ->capture_default_str();
  pipe->add_option("--threads", s.pipeline.threads, "Worker threads")->capture_default_str();
  pipe->add_option("--checkpoint", s.pipeline.checkpoint,
                   "Checkpoint log (defaults to <out>/checkpoint.log)");
  pipe->add_option("--stop-after", s.pipeline.stop_after,
                   "Stop after this many new documents without final outputs (0 runs all)")
      ->capture_default_str();
  pipe->add_option("--max-length", s.pipeline.max_length, "Maximum tokens per model window")
      ->capture_default_str();
  pipe->add_flag("--strict", s.pipeline.strict, "Exit 10 when any document is quarantined");

  auto* ing = app->add_subcommand("ingest", "Fetch writers, group them and cache biographies");
  ing->add_option("--out", s.ingest.out, "Output directory")->required();
  ing->add_option("--sparql-url", s.ingest.sparql_url,
                  "SPARQL endpoint (env BIOEVENTS_SPARQL_URL)")
      ->capture_default_str();
  ing->add_option("--article-api-url", s.ingest.article_api_url,
                  "MediaWiki API endpoint (env BIOEVENTS_ARTICLE_API_URL)")
      ->capture_default_str();
  ing->add_option("--cache-dir", s.ingest.cache_dir, "Article cache (env BIOEVENTS_CACHE_DIR)")
      ->capture_default_str();
  ing->add_option("--western-countries", s.ingest.western, "Versioned Western country list")
      ->capture_default_str();
  ing->add_option("--minority-groups", s.ingest.minority, "Versioned minority ethnic group list")
      ->capture_default_str();
  ing->add_option("--birth-year-min", s.ingest.birth_year_min, "Earliest birth year kept")
      ->capture_default_str();
  ing->add_option("--page-size", s.ingest.page_size, "Rows per SPARQL page")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  ing->add_option("--max-pages", s.ingest.max_pages, "Stop after this many pages (0: all)")
      ->capture_default_str();
  ing->add_option("--max-biographies", s.ingest.max_biographies,
                  "Fetch at most this many articles (0: all)")
      ->capture_default_str();
  ing->add_option("--requests-per-second", s.ingest.requests_per_second,
                  "Request rate limit shared by all workers")
      ->capture_default_str();
  ing->add_option("--parallelism", s.ingest.parallelism, "Concurrent article fetches")
      ->capture_default_str();
  ing->add_option("--timeout", s.ingest.timeout, "Per-request timeout in seconds")
      ->capture_default_str();
  ing->add_option("--replay", s.ingest.replay, "Serve HTTP from recordings in this directory");
  ing->add_option("--record", s.ingest.record, "Store every HTTP exchange in this directory");

  auto* sh = app->add_subcommand("shift", "Group event distributions and pairwise JSD shifts");
  sh->add_option("--input", s.shift.inputs, "Annotated JSONL with group labels (repeatable)")
      ->required();
  sh->add_option("--groups", s.shift.groups, "Group codes; the first is the focal group")
      ->delimiter(',')
      ->capture_default_str();
  sh->add_option("--top-k", s.shift.top_k, "Bars per side in each plot")->capture_default_str();
  sh->add_flag("--surface", s.shift.surface, "Use lowercased surface forms instead of lemmas");
  sh->add_option("--out", s.shift.out, "Output directory")->required();

  return app;
}

std::unique_ptr<CLI::App> make_app() {
  static Settings scratch;
  return make_app(scratch);
}

// ---------------------------------------------------------------------------

namespace {

struct Context {
  Settings& s;
  CLI::App& app;
  std::vector<std::string> argv;
  std::ostream& out;
  std::ostream& err;

  void progress(const std::string& message) const {
    if (!s.quiet) err << message << '\n';
  }
  bool on_command_line(std::string_view flag) const {
    return std::any_of(argv.begin(), argv.end(), [&](const std::string& a) {
      return a == flag || a.starts_with(std::string(flag) + "=");
    });
  }
};

std::string digest_of(const fs::path& path) {
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(path)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::string joined;
    for (const auto& f : files) joined += fs::relative(f, path).string() + ":" + hex_digest(read_file(f)) + "\n";
    return hex_digest(joined);
  }
  return hex_digest(read_file(path));
}

// Writes the effective configuration and provenance next to the outputs.
void echo_provenance(const Context& ctx, const fs::path& dir, const std::string& prefix,
                     const std::vector<fs::path>& inputs, const json& extra = json::object()) {
  fs::create_directories(dir);
  json inputs_json = json::array();
  for (const auto& p : inputs) {
    if (p.empty()) continue;
    inputs_json.push_back({{"path", p.string()}, {"digest", fs::exists(p) ? digest_of(p) : "missing"}});
  }
  json prov = {{"tool_version", kToolVersion},
               {"command", ctx.app.get_subcommands().front()->get_name()},
               {"seed", ctx.s.seed},
               {"argv", ctx.argv},
               {"config_file", ctx.s.config},
               {"inputs", inputs_json},
               {"splitter_version", std::string(text::kSplitterVersion)}};
  if (!extra.empty()) prov["details"] = extra;
  write_file_atomic(dir / (prefix + "effective_config.ini"), ctx.app.config_to_str(true, false));
  write_file_atomic(dir / (prefix + "provenance.json"), prov.dump(2) + "\n");
}

fs::path resolve_corpus(const std::string& name, const std::string& data_dir) {
  fs::path p(name);
  if (fs::exists(p)) return p;
  if (!data_dir.empty()) {
    for (fs::path candidate : {fs::path(data_dir) / (name + ".jsonl"), fs::path(data_dir) / name}) {
      if (fs::exists(candidate)) return candidate;
    }
  }
  throw Error(ErrorCode::kIo, "corpus '" + name + "' not found" +
                                  (data_dir.empty() ? std::string(" (no --data-dir)")
                                                    : " in " + data_dir));
}

Corpus load_named(const std::string& name, const std::string& data_dir) {
  fs::path path = resolve_corpus(name, data_dir);
  LoadOptions options;
  options.name = fs::exists(fs::path(name)) ? fs::path(name).stem().string() : name;
  return load_corpus(path, "jsonl", options);
}

std::unique_ptr<tagger::TokenClassifier> trained(const std::string& kind, const Corpus& corpus,
                                                 tagger::Task task, int epochs, std::uint64_t seed,
                                                 int max_length) {
  auto model = tagger::make_classifier(kind, 0.0, seed);
  tagger::ChunkingSpec chunking;
  chunking.max_sequence_length = max_length;
  auto batches = tagger::make_batches(corpus, chunking, task);
  tagger::TrainConfig config;
  config.epochs = epochs;
  config.seed = seed;
  config.task = task;
  model->train(batches, config);
  return model;
}

// --- convert ---------------------------------------------------------------

int cmd_convert(const Context& ctx) {
  const auto& c = ctx.s.convert;
  Corpus corpus;
  json details;
  if (c.format == "jsonl") {
    if (c.person_filter || c.light_verb_rewrite) {
      throw Error(ErrorCode::kInvalidArgument,
                  "--person-filter and --light-verb-rewrite apply to source formats only");
    }
    LoadOptions options;
    options.validate = !c.no_validate;
    corpus = load_corpus(c.input, "jsonl", options);
  } else {
    adapters::AdapterConfig config;
    config.source_format = c.format;
    config.person_entity_filter = c.person_filter;
    config.light_verb_rewrite = c.light_verb_rewrite;
    config.rng_seed = ctx.s.seed;
    if (!c.light_verbs.empty()) config.light_verb_lexicon = LightVerbLexicon::FromFile(c.light_verbs);
    auto result = adapters::convert_corpus(c.input, config);
    corpus = std::move(result.corpus);
    json log = json::array();
    for (const auto& e : result.rewrite_log) {
      log.push_back({{"doc_id", e.doc_id}, {"token", e.verb_token}, {"verb", e.verb}, {"reason", e.reason}});
    }
    details = {{"excluded", result.excluded}, {"rewrite_log", log}};
    if (!c.no_validate) {
      ValidationOptions vo;
      for (const auto& report : validate_corpus(corpus, vo)) {
        if (!report.ok()) throw Error(ErrorCode::kValidation, report.summary());
      }
    }
  }
  std::size_t events = 0, links = 0, cont_mods = 0, mentions = 0;
  for (const auto& d : corpus.documents) {
    events += d.events.size();
    links += d.links.size();
    cont_mods += d.cont_mods.size();
    mentions += d.entity_mentions.size();
  }
  details["counts"] = {{"documents", corpus.documents.size()}, {"events", events},
                       {"links", links}, {"cont_mods", cont_mods}, {"mentions", mentions}};
  fs::path output(c.output);
  if (output.has_parent_path()) fs::create_directories(output.parent_path());
  save_corpus(corpus, output, "jsonl");
  echo_provenance(ctx, output.has_parent_path() ? output.parent_path() : fs::path("."),
                  output.filename().string() + ".", {c.input, c.light_verbs}, details);
  ctx.out << "documents=" << corpus.documents.size() << " events=" << events << " links=" << links
          << " cont_mods=" << cont_mods << " mentions=" << mentions << '\n';
  return kExitOk;
}

// --- stats -------------------------------------------------------------------

int cmd_stats(const Context& ctx) {
  const auto& st = ctx.s.stats;
  std::vector<Corpus> corpora;
  std::vector<fs::path> inputs;
  for (const auto& name : st.corpora) {
    inputs.push_back(resolve_corpus(name, st.data_dir));
    corpora.push_back(load_named(name, st.data_dir));
    ctx.progress("loaded " + corpora.back().name + " (" +
                 std::to_string(corpora.back().documents.size()) + " documents)");
  }
  const fs::path out(st.out);
  fs::create_directories(out);
  auto matrix = metrics::jsd_matrix(corpora, metrics::parse_basis(st.basis), st.threads);
  write_file_atomic(out / "jsd_matrix.csv", matrix.to_csv());
  std::vector<metrics::CorpusProfile> profiles;
  for (const auto& c : corpora) profiles.push_back(metrics::corpus_profile(c, st.top_k));
  write_file_atomic(out / "profiles.csv", metrics::profiles_to_csv(profiles));
  echo_provenance(ctx, out, "", inputs);
  ctx.out << matrix.to_csv();
  return kExitOk;
}

// --- iaa ---------------------------------------------------------------------

int cmd_iaa(const Context& ctx) {
  const auto& ia = ctx.s.iaa;
  Corpus a = load_corpus(ia.a);
  Corpus b = load_corpus(ia.b);
  std::ostringstream csv;
  csv << "layer,annotator_a,annotator_b,kappa,items\n";
  for (const auto& name : ia.layers) {
    auto report = metrics::pairwise_iaa(a.documents, b.documents, parse_layer(name),
                                        {ia.annotators.at(0), ia.annotators.at(1)});
    csv << to_string(report.layer) << ',' << report.annotator_pair.first << ','
        << report.annotator_pair.second << ','
        << (report.kappa ? std::to_string(*report.kappa) : std::string("undefined")) << ','
        << report.n_items << '\n';
  }
  if (!ia.out.empty()) {
    fs::create_directories(ia.out);
    write_file_atomic(fs::path(ia.out) / "iaa.csv", csv.str());
    echo_provenance(ctx, ia.out, "", {ia.a, ia.b});
  }
  ctx.out << csv.str();
  return kExitOk;
}

// --- train / eval ------------------------------------------------------------

int cmd_train(const Context& ctx) {
  const auto& t = ctx.s.train;
  if (t.list_presets) {
    for (const auto& name : presets_help()) ctx.out << name << '\n';
    return kExitOk;
  }
  if (t.preset.empty()) throw Error(ErrorCode::kInvalidArgument, "--preset is required");
  tagger::Preset preset;
  try {
    preset = tagger::find_preset(t.preset);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotFound) throw;
    throw Error(ErrorCode::kInvalidArgument, e.what());
  }
  if (t.epochs > 0) preset.epochs = t.epochs;

  std::map<std::string, Corpus> corpora;
  std::vector<fs::path> inputs;
  for (const auto& entry : fs::directory_iterator(t.data_dir)) {
    if (entry.path().extension() != ".jsonl") continue;
    const std::string name = entry.path().stem().string();
    LoadOptions options;
    options.name = name;
    corpora.emplace(name, load_corpus(entry.path(), "jsonl", options));
    inputs.push_back(entry.path());
  }
  auto data = tagger::prepare_preset(preset, corpora, ctx.s.seed);
  ctx.progress("training set " + data.training.name + ": " +
               std::to_string(data.training.documents.size()) + " units");

  std::unique_ptr<tagger::TokenClassifier> model =
      t.mock_classifier ? tagger::make_classifier("memorizing", t.mock_noise, ctx.s.seed)
                        : tagger::make_classifier(t.classifier, 0.0, ctx.s.seed);
  tagger::TrainConfig config;
  config.epochs = preset.epochs;
  config.seed = ctx.s.seed;
  config.task = preset.task;
  auto report = tagger::run_experiment(data.training, data.wikibio.dev, data.wikibio.test, config, *model);
  json log = tagger::run_log(report);
  log["preset"] = preset.name;
  log["reported"] = preset.reported;
  if (!t.out.empty()) {
    fs::create_directories(t.out);
    write_file_atomic(fs::path(t.out) / "run_log.json", log.dump(2) + "\n");
    echo_provenance(ctx, t.out, "", inputs);
  }
  char line[160];
  std::snprintf(line, sizeof line, "%s F_train=%.3f F_dev=%.3f F_test=%.3f (reported %.3f/%.3f/%.3f)",
                preset.name.c_str(), report.f_train, report.f_dev, report.f_test, preset.reported[0],
                preset.reported[1], preset.reported[2]);
  ctx.out << line << '\n';
  return kExitOk;
}

int cmd_eval(const Context& ctx) {
  const auto& e = ctx.s.eval;
  const tagger::Task task = tagger::parse_task(e.task);
  Corpus train = load_corpus(e.train);
  Corpus test = load_corpus(e.test);
  auto model = trained(e.classifier, train, task, e.epochs, ctx.s.seed, 128);
  auto f1 = tagger::score_corpus(test, *model, task);
  json j = {{"classifier", model->name()}, {"task", e.task}, {"tp", f1.tp}, {"fp", f1.fp},
            {"fn", f1.fn}, {"precision", f1.precision}, {"recall", f1.recall}, {"f1", f1.f1}};
  if (!e.out.empty()) {
    fs::create_directories(e.out);
    write_file_atomic(fs::path(e.out) / "eval.json", j.dump(2) + "\n");
    echo_provenance(ctx, e.out, "", {e.train, e.test});
  }
  ctx.out << j.dump() << '\n';
  return kExitOk;
}

// --- pipeline ----------------------------------------------------------------

Corpus manifest_gold(const std::vector<pipeline::ManifestEntry>& manifest) {
  Corpus gold;
  gold.name = "manifest-gold";
  for (const auto& entry : manifest) {
    if (entry.doc_path.empty()) {
      throw Error(ErrorCode::kInsufficientData,
                  "entry " + entry.id + " has no annotated document; pass --entity-train/--event-train");
    }
    Corpus c = load_corpus(entry.doc_path);
    for (auto& d : c.documents) {
      d.doc_id = entry.id;
      gold.documents.push_back(std::move(d));
    }
  }
  return gold;
}

int cmd_pipeline(const Context& ctx) {
  const auto& p = ctx.s.pipeline;
  auto manifest = pipeline::read_manifest(p.manifest);
  std::optional<Corpus> gold;
  auto training = [&](const std::string& path) -> Corpus {
    if (!path.empty()) return load_corpus(path);
    if (!gold) gold = manifest_gold(manifest);
    return *gold;
  };
  auto entity = trained(p.classifier, training(p.entity_train), tagger::Task::kEntity, p.epochs,
                        ctx.s.seed, p.max_length);
  auto event = trained(p.classifier, training(p.event_train), tagger::Task::kEvent, p.epochs,
                       ctx.s.seed, p.max_length);
  pipeline::PipelineOptions options;
  options.out_dir = p.out;
  if (!p.checkpoint.empty()) options.checkpoint_path = p.checkpoint;
  options.threads = p.threads;
  if (p.stop_after > 0) options.stop_after = p.stop_after;
  options.chunking.max_sequence_length = p.max_length;
  auto run = pipeline::run_corpus_pipeline(manifest, {entity.get(), event.get()}, options);
  echo_provenance(ctx, p.out, "", {p.manifest, p.entity_train, p.event_train});

  ctx.out << "documents=" << run.totals.documents << " sentences=" << run.totals.sentences_before
          << " retained=" << run.totals.sentences_after << " events=" << run.totals.events
          << " quarantined=" << run.quarantine.size() << (run.complete ? "" : " (incomplete)")
          << '\n';
  for (const auto& q : run.quarantine) ctx.err << "quarantined " << q.doc_id << ": " << q.reason << '\n';
  if (!run.quarantine.empty() && p.strict) return kExitPartialFailure;
  return kExitOk;
}

// --- ingest ------------------------------------------------------------------

int cmd_ingest(const Context& ctx) {
  const auto& in = ctx.s.ingest;
  ingest::EndpointConfig endpoint;
  endpoint.sparql_url = in.sparql_url;
  endpoint.article_api_url = in.article_api_url;
  endpoint.cache_dir = in.cache_dir;
  endpoint.timeout = std::chrono::seconds(in.timeout);
  endpoint.requests_per_second = in.requests_per_second;
  endpoint.page_size = in.page_size;
  endpoint.parallelism = in.parallelism;
  // Environment beats the config file; explicit flags beat both.
  ingest::EndpointConfig env = endpoint;
  ingest::apply_environment(env);
  if (!ctx.on_command_line("--sparql-url")) endpoint.sparql_url = env.sparql_url;
  if (!ctx.on_command_line("--article-api-url")) endpoint.article_api_url = env.article_api_url;
  if (!ctx.on_command_line("--cache-dir")) endpoint.cache_dir = env.cache_dir;

  auto grouping = ingest::load_grouping_config(in.western, in.minority, in.birth_year_min);

  std::unique_ptr<ingest::HttpTransport> base;
  if (!in.replay.empty()) {
    base = std::make_unique<ingest::ReplayTransport>(in.replay);
  } else {
    base = std::make_unique<ingest::LiveTransport>(endpoint.timeout, endpoint.user_agent);
  }
  std::unique_ptr<ingest::RecordingTransport> recorder;
  ingest::HttpTransport* transport = base.get();
  if (!in.record.empty()) {
    recorder = std::make_unique<ingest::RecordingTransport>(*base, in.record);
    transport = recorder.get();
  }

  ingest::IngestOptions options;
  options.out_dir = in.out;
  if (in.max_pages > 0) options.fetch.max_pages = in.max_pages;
  if (in.max_biographies > 0) options.max_biographies = in.max_biographies;
  if (!in.replay.empty()) {
    options.fetch.sleeper = [](std::chrono::milliseconds) {};
  }
  auto report = ingest::run_ingest(*transport, endpoint, grouping, options);
  echo_provenance(ctx, in.out, "", {in.western, in.minority},
                  {{"sparql_url", endpoint.sparql_url},
                   {"article_api_url", endpoint.article_api_url},
                   {"cache_dir", endpoint.cache_dir.string()},
                   {"western_countries_version", grouping.western_version},
                   {"minority_ethnic_groups_version", grouping.minority_version}});

  const auto& part = report.partition;
  ctx.out << "records=" << part.total << " grouped=" << part.grouped();
  for (const auto& [code, members] : part.groups) ctx.out << ' ' << code << '=' << members.size();
  std::size_t excluded = 0;
  for (const auto& [reason, n] : part.excluded) excluded += n;
  ctx.out << " excluded=" << excluded << " biographies=" << report.biographies
          << " failures=" << report.failures.size() << '\n';
  return kExitOk;
}

// --- shift -------------------------------------------------------------------

int cmd_shift(const Context& ctx) {
  const auto& sh = ctx.s.shift;
  if (sh.groups.size() < 2) throw Error(ErrorCode::kInvalidArgument, "--groups needs at least two codes");
  std::vector<AnnotatedDocument> docs;
  for (const auto& path : sh.inputs) {
    LoadOptions options;
    options.validate = false;
    Corpus c = load_corpus(path, "jsonl", options);
    for (auto& d : c.documents) docs.push_back(std::move(d));
  }
  const auto mode = sh.surface ? shift::TypeMode::kSurface : shift::TypeMode::kLemma;
  auto by_group = shift::group_distributions(docs, mode);

  std::vector<shift::EventDistribution> dists;
  for (const auto& code : sh.groups) {
    auto label = parse_group_code(code);
    if (!label) throw Error(ErrorCode::kInvalidArgument, "unknown group code '" + code + "'");
    auto it = by_group.find(*label);
    if (it == by_group.end()) {
      throw Error(ErrorCode::kEmptyGroup, "no biographies in group " + code);
    }
    dists.push_back(it->second);
  }
  std::vector<shift::ShiftResult> results;
  for (std::size_t i = 1; i < dists.size(); ++i) results.push_back(shift::jsd_shift(dists[0], dists[i]));

  shift::ReportOptions options;
  options.out_dir = sh.out;
  options.top_k = sh.top_k;
  options.mode = mode;
  auto files = shift::emit_report(results, dists, options);
  std::vector<fs::path> inputs(sh.inputs.begin(), sh.inputs.end());
  echo_provenance(ctx, sh.out, "", inputs);
  for (const auto& r : results) {
    ctx.out << r.first << " vs " << r.second << ": JSD=" << r.total_jsd << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Settings settings;
  auto app = make_app(settings);
  try {
    app->parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app->exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }
  Context ctx{settings, *app, std::vector<std::string>(argv + 1, argv + argc), out, err};
  try {
    adapters::register_adapter_readers();
    const std::string name = app->get_subcommands().front()->get_name();
    if (name == "convert") return cmd_convert(ctx);
    if (name == "stats") return cmd_stats(ctx);
    if (name == "iaa") return cmd_iaa(ctx);
    if (name == "train") return cmd_train(ctx);
    if (name == "eval") return cmd_eval(ctx);
    if (name == "pipeline") return cmd_pipeline(ctx);
    if (name == "ingest") return cmd_ingest(ctx);
    if (name == "shift") return cmd_shift(ctx);
    err << "unknown subcommand " << name << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"bioevents"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace bioevents::cli

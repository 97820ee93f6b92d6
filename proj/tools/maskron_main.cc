// Copyright 2026 The Maskron Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// maskron: detect and mask PII in text, NDJSON and CSV streams.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "maskron/config.h"
#include "maskron/dictionary_detector.h"
#include "maskron/error.h"
#include "maskron/eval.h"
#include "maskron/external_detector.h"
#include "maskron/keyring.h"
#include "maskron/masking.h"
#include "maskron/metrics.h"
#include "maskron/pipeline.h"

namespace fs = std::filesystem;

namespace maskron {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitDeadLetters = 2;

// An input or output stream that is either a file or stdin/stdout ("-").
class Streams {
 public:
  std::istream& In(const std::string& path) {
    if (path == "-") return std::cin;
    auto f = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*f) throw Error(ErrorCode::kIoError, "cannot open " + path);
    in_ = std::move(f);
    return *in_;
  }

  std::ostream& Out(const std::string& path) {
    if (path == "-") return std::cout;
    auto f = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*f) throw Error(ErrorCode::kIoError, "cannot create " + path);
    out_.push_back(std::move(f));
    return *out_.back();
  }

 private:
  std::unique_ptr<std::istream> in_;
  std::vector<std::unique_ptr<std::ostream>> out_;
};

void WriteJsonFile(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot create " + path.string());
  out << j.dump(2) << '\n';
}

void WarnIfKeyringOpen(const std::optional<fs::path>& path) {
  if (path && KeyringPermissionsTooOpen(*path)) {
    std::cerr << "maskron: warning: keyring " << path->string()
              << " is readable by group or others; chmod 600 it\n";
  }
}

struct RunOptions {
  std::string config;
  std::string input = "-";
  std::string output = "-";
  std::string metrics;
  std::string dead_letter;
  std::string keyring;
  std::size_t parallelism = 0;
};

Config LoadRunConfig(const RunOptions& o) {
  LoadOptions load;
  if (!o.keyring.empty()) load.keyring_override = o.keyring;
  Config c;
  if (o.config.empty()) {
    c = BuildConfig(nlohmann::json::object(), fs::current_path(), load);
  } else {
    c = load_config(o.config, load);
  }
  if (o.parallelism > 0) c.parallelism = o.parallelism;
  if (!o.metrics.empty()) c.metrics_path = o.metrics;
  if (!o.dead_letter.empty()) c.dead_letter_path = o.dead_letter;
  WarnIfKeyringOpen(c.keyring_path);
  return c;
}

int RunPipeline(const RunOptions& o, bool mask) {
  Config config = LoadRunConfig(o);
  Streams streams;
  std::istream& in = streams.In(o.input);
  std::ostream& out = streams.Out(o.output);
  std::ostream& dead = config.dead_letter_path ? streams.Out(config.dead_letter_path->string())
                                               : std::cerr;
  Pipeline pipeline(config);
  MetricsReport report = mask ? pipeline.RunMask(in, out, &dead) : pipeline.RunDetect(in, out, &dead);
  out.flush();
  if (config.metrics_path) WriteJsonFile(*config.metrics_path, MetricsToJson(report));
  auto it = report.warnings.find("dead_letter");
  if (it != report.warnings.end() && it->second > 0) {
    std::cerr << "maskron: " << it->second << " record(s) dead-lettered\n";
    return kExitDeadLetters;
  }
  return kExitOk;
}

std::optional<fs::path> KeyringPath(const std::string& flag) {
  if (!flag.empty()) return fs::path(flag);
  if (const char* env = std::getenv(kKeyringEnvVar); env != nullptr && *env != '\0') {
    return fs::path(env);
  }
  return std::nullopt;
}

int RunUnmask(const std::string& keyring_flag, const std::string& input,
              const std::string& output) {
  auto path = KeyringPath(keyring_flag);
  if (!path) throw Error(ErrorCode::kValidationError, "unmask needs --keyring or MASKRON_KEYRING");
  WarnIfKeyringOpen(path);
  Keyring ring = Keyring::Load(*path);
  Streams streams;
  std::istream& in = streams.In(input);
  std::ostream& out = streams.Out(output);
  std::size_t auth_failures = 0, unknown_keys = 0, malformed = 0;
  std::string line;
  while (std::getline(in, line)) {
    UnmaskResult r = unmask(line, ring);
    auth_failures += r.auth_failures.size();
    unknown_keys += r.unknown_keys;
    malformed += r.malformed_tokens;
    out << r.text;
    if (!in.eof()) out << '\n';
  }
  out.flush();
  if (unknown_keys > 0) std::cerr << "maskron: " << unknown_keys << " token(s) with unknown key ids\n";
  if (malformed > 0) std::cerr << "maskron: " << malformed << " malformed token(s) left in place\n";
  if (auth_failures > 0) {
    std::cerr << "maskron: " << auth_failures << " token(s) failed authentication\n";
    return kExitDeadLetters;
  }
  return kExitOk;
}

int RunKeygen(const std::string& keyring_flag, bool salt) {
  auto path = KeyringPath(keyring_flag);
  if (!path) throw Error(ErrorCode::kValidationError, "keygen needs --keyring or MASKRON_KEYRING");
  Keyring ring = fs::exists(*path) ? Keyring::Load(*path) : Keyring();
  std::string id;
  if (salt) {
    auto [salt_id, material] = salt_gen();
    ring.AddSalt(salt_id, std::move(material));
    id = salt_id;
  } else {
    auto [key_id, material] = keygen();
    ring.AddKey(key_id, std::move(material));
    id = key_id;
  }
  ring.Save(*path);
  std::cout << id << '\n';
  return kExitOk;
}

DictionaryConfig DictConfig(const std::string& normalization) {
  DictionaryConfig cfg;
  if (normalization == "none") {
    cfg.normalization = Normalization::kNone;
  } else if (normalization != "lowercase") {
    throw Error(ErrorCode::kValidationError, "--normalization must be lowercase or none");
  }
  return cfg;
}

int RunDictBuild(const std::string& source, const std::string& output, double fpr,
                 const std::string& normalization) {
  BloomFilter filter = bloom_load_dictionary(fs::path(source), DictConfig(normalization), fpr);
  WriteFilterFile(output, filter);
  std::cerr << "maskron: " << filter.inserted() << " entries, m=" << filter.bit_count()
            << " k=" << filter.hash_count() << ", expected fpr " << filter.AnalyticFpr() << '\n';
  return kExitOk;
}

int RunDictProbe(const std::string& filter_path, const std::vector<std::string>& words,
                 const std::string& normalization) {
  BloomFilter filter = ReadFilterFile(filter_path);
  Normalization norm = DictConfig(normalization).normalization;
  for (const std::string& w : words) {
    std::cout << w << '\t' << (filter.MightContain(Normalize(w, norm)) ? "maybe" : "no") << '\n';
  }
  return kExitOk;
}

int RunEval(const std::string& config_path, const std::string& corpus, const std::string& mode,
            const std::string& report_path) {
  RunOptions o;
  o.config = config_path;
  Pipeline pipeline(LoadRunConfig(o));
  std::vector<AnnotatedDoc> docs = load_corpus(fs::path(corpus));
  std::vector<std::vector<Detection>> predictions;
  predictions.reserve(docs.size());
  for (const AnnotatedDoc& doc : docs) predictions.push_back(pipeline.Detect(doc.text).resolved);
  Metrics m = score(predictions, docs, mode == "overlap" ? MatchMode::kOverlap : MatchMode::kExact);
  nlohmann::json report = MetricsToJson(m);
  report["mode"] = mode;
  report["documents"] = docs.size();
  if (report_path.empty()) {
    std::cout << report.dump(2) << '\n';
  } else {
    WriteJsonFile(report_path, report);
  }
  return kExitOk;
}

int RunSynth(std::uint64_t seed, std::size_t docs, const std::vector<std::string>& types,
             const std::string& output) {
  SyntheticOptions opts;
  opts.seed = seed;
  opts.n_docs = docs;
  for (const std::string& t : types) opts.mix[PiiType::Parse(t)] = 1.0;
  auto corpus = generate_synthetic_corpus(opts);
  Streams streams;
  std::ostream& out = streams.Out(output);
  WriteCorpus(out, corpus);
  out.flush();
  return kExitOk;
}

int RunHealth(const std::string& config_path) {
  RunOptions o;
  o.config = config_path;
  Config config = LoadRunConfig(o);
  if (config.external.empty()) {
    std::cout << "no external detectors configured\n";
    return kExitOk;
  }
  bool all_ok = true;
  for (const ExternalEndpoint& ep : config.external) {
    HealthStatus h = health_check(ep);
    const char* kind = h.kind == HealthStatus::Kind::kOk         ? "OK"
                       : h.kind == HealthStatus::Kind::kDegraded ? "DEGRADED"
                                                                 : "DOWN";
    all_ok = all_ok && h.kind != HealthStatus::Kind::kDown;
    std::cout << ep.name << '\t' << kind << '\t' << h.latency_ms << "ms";
    if (!h.reason.empty()) std::cout << '\t' << h.reason;
    std::cout << '\n';
  }
  return all_ok ? kExitOk : kExitDeadLetters;
}

void AddRunFlags(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("-c,--config", o.config, "Configuration file")->check(CLI::ExistingFile);
  cmd->add_option("-i,--input", o.input, "Input file, - for stdin")->capture_default_str();
  cmd->add_option("-o,--output", o.output, "Output file, - for stdout")->capture_default_str();
  cmd->add_option("--metrics", o.metrics, "Write the metrics report (JSON) here");
  cmd->add_option("--dead-letter", o.dead_letter, "Write failed records here (default stderr)");
  cmd->add_option("--keyring", o.keyring, "Keyring file (overrides config and MASKRON_KEYRING)");
  cmd->add_option("-j,--parallelism", o.parallelism, "Worker threads")->check(CLI::Range(1, 1024));
}

}  // namespace
}  // namespace maskron

int main(int argc, char** argv) {
  using namespace maskron;
  CLI::App app{"Detect and mask PII in text, NDJSON and CSV streams"};
  app.require_subcommand(1);

  RunOptions mask_opts, detect_opts;
  AddRunFlags(app.add_subcommand("mask", "Detect and rewrite PII"), mask_opts);
  AddRunFlags(app.add_subcommand("detect", "Report detections as NDJSON without rewriting"),
              detect_opts);

  std::string unmask_keyring, unmask_in = "-", unmask_out = "-";
  auto* unmask_cmd = app.add_subcommand("unmask", "Decrypt encryption tokens");
  unmask_cmd->add_option("--keyring", unmask_keyring, "Keyring file");
  unmask_cmd->add_option("-i,--input", unmask_in, "Input file, - for stdin");
  unmask_cmd->add_option("-o,--output", unmask_out, "Output file, - for stdout");

  std::string keygen_keyring;
  bool keygen_salt = false;
  auto* keygen_cmd = app.add_subcommand("keygen", "Add a fresh key (or salt) to a keyring");
  keygen_cmd->add_option("--keyring", keygen_keyring, "Keyring file, created if missing");
  keygen_cmd->add_flag("--salt", keygen_salt, "Generate a hashing salt instead of a key");

  auto* dict_cmd = app.add_subcommand("dict", "Build or probe Bloom filter dictionaries");
  dict_cmd->require_subcommand(1);
  std::string dict_source, dict_output, dict_filter, dict_norm = "lowercase";
  double dict_fpr = 0.001;
  std::vector<std::string> probe_words;
  auto* build_cmd = dict_cmd->add_subcommand("build", "Build a filter file from a word list");
  build_cmd->add_option("--source", dict_source, "One entry per line")->required()->check(CLI::ExistingFile);
  build_cmd->add_option("-o,--output", dict_output, "Filter file to write")->required();
  build_cmd->add_option("--fpr", dict_fpr, "Target false positive rate")->capture_default_str();
  build_cmd->add_option("--normalization", dict_norm, "lowercase or none")->capture_default_str();
  auto* probe_cmd = dict_cmd->add_subcommand("probe", "Query a filter file");
  probe_cmd->add_option("--filter", dict_filter, "Filter file")->required()->check(CLI::ExistingFile);
  probe_cmd->add_option("words", probe_words, "Words to look up")->required();
  probe_cmd->add_option("--normalization", dict_norm, "lowercase or none")->capture_default_str();

  std::string eval_config, eval_corpus, eval_mode = "exact", eval_report;
  auto* eval_cmd = app.add_subcommand("eval", "Score the configured detectors on a corpus");
  eval_cmd->add_option("-c,--config", eval_config, "Configuration file")->check(CLI::ExistingFile);
  eval_cmd->add_option("--corpus", eval_corpus, "Annotated NDJSON corpus")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--mode", eval_mode, "exact or overlap")
      ->check(CLI::IsMember({"exact", "overlap"}))
      ->capture_default_str();
  eval_cmd->add_option("--report", eval_report, "Write the report here instead of stdout");

  std::uint64_t synth_seed = 42;
  std::size_t synth_docs = 100;
  std::vector<std::string> synth_types;
  std::string synth_out = "-";
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic annotated corpus");
  synth_cmd->add_option("--seed", synth_seed, "RNG seed")->capture_default_str();
  synth_cmd->add_option("-n,--docs", synth_docs, "Number of documents")->capture_default_str();
  synth_cmd->add_option("--types", synth_types, "Restrict to these types");
  synth_cmd->add_option("-o,--output", synth_out, "Output file, - for stdout");

  std::string health_config;
  auto* health_cmd = app.add_subcommand("health", "Probe the configured external detectors");
  health_cmd->add_option("-c,--config", health_config, "Configuration file")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (app.got_subcommand("mask")) return RunPipeline(mask_opts, true);
    if (app.got_subcommand("detect")) return RunPipeline(detect_opts, false);
    if (unmask_cmd->parsed()) return RunUnmask(unmask_keyring, unmask_in, unmask_out);
    if (keygen_cmd->parsed()) return RunKeygen(keygen_keyring, keygen_salt);
    if (build_cmd->parsed()) return RunDictBuild(dict_source, dict_output, dict_fpr, dict_norm);
    if (probe_cmd->parsed()) return RunDictProbe(dict_filter, probe_words, dict_norm);
    if (eval_cmd->parsed()) return RunEval(eval_config, eval_corpus, eval_mode, eval_report);
    if (synth_cmd->parsed()) return RunSynth(synth_seed, synth_docs, synth_types, synth_out);
    if (health_cmd->parsed()) return RunHealth(health_config);
  } catch (const std::exception& e) {
    std::cerr << "maskron: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

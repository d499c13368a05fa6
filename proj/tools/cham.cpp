// cham: compute domain mixture weights from embedding geometry and
// materialize reproducible weighted sample streams.
//
// Subcommands: embed | weights | mix | verify. Exit codes: 0 success,
// 1 configuration error, 2 data error, 3 verification failure.

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <string>
#include <vector>

#include "cham/affinity.hpp"
#include "cham/error.hpp"
#include "cham/manifest.hpp"
#include "cham/mixer.hpp"
#include "cham/oracle.hpp"
#include "cham/pipeline.hpp"
#include "cham/sample_set.hpp"
#include "cham/scores.hpp"
#include "cham/weights.hpp"

namespace {

namespace fs = std::filesystem;

struct PipelineConfig {
  double lambda = cham::kDefaultLambda;
  double temperature = 0.0;  // 0 = phase default
  std::string phase = "pretrain";
  std::uint64_t seed = 0;
  std::uint64_t samples_per_domain = cham::kDefaultSamplesPerDomain;
  bool normalize_domain = false;
  cham::EmbedderSpec embedder;
  std::string manifest;
  std::string out;
  std::string format = "jsonl";
  std::string corpus;
  std::string report;
  std::string sources;  // path to a {"name": "records.jsonl", ...} map
  std::uint64_t length = 0;
  std::string wrap = "cycle";

  double effective_temperature() const {
    if (temperature > 0.0) return temperature;
    return phase == "finetune" ? cham::kDefaultFinetuneTau
                               : cham::kDefaultPretrainTau;
  }
};

void apply_config_file(PipelineConfig& cfg, const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw cham::ConfigError("cannot open config " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw cham::ConfigError("config " + path.string() + ": " + e.what());
  }

  try {
    if (j.contains("lambda")) cfg.lambda = j["lambda"].get<double>();
    if (j.contains("temperature")) cfg.temperature = j["temperature"].get<double>();
    if (j.contains("phase")) cfg.phase = j["phase"].get<std::string>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("samples_per_domain")) {
      cfg.samples_per_domain = j["samples_per_domain"].get<std::uint64_t>();
    }
    if (j.contains("normalize_domain")) {
      cfg.normalize_domain = j["normalize_domain"].get<bool>();
    }
    if (j.contains("manifest")) cfg.manifest = j["manifest"].get<std::string>();
    if (j.contains("out")) cfg.out = j["out"].get<std::string>();
    if (j.contains("format")) cfg.format = j["format"].get<std::string>();
    if (j.contains("corpus")) cfg.corpus = j["corpus"].get<std::string>();
    if (j.contains("report")) cfg.report = j["report"].get<std::string>();
    if (j.contains("sources")) cfg.sources = j["sources"].get<std::string>();
    if (j.contains("length")) cfg.length = j["length"].get<std::uint64_t>();
    if (j.contains("wrap")) cfg.wrap = j["wrap"].get<std::string>();
    if (j.contains("embedder")) {
      const auto& e = j["embedder"];
      if (e.contains("kind")) {
        const std::string kind = e["kind"].get<std::string>();
        if (kind == "hashed-ngram") {
          cfg.embedder.kind = cham::EmbedderKind::hashed_ngram;
        } else if (kind == "external-file") {
          cfg.embedder.kind = cham::EmbedderKind::external_file;
        } else {
          throw cham::ConfigError("unknown embedder kind: " + kind);
        }
      }
      if (e.contains("ngram_order")) cfg.embedder.ngram_order = e["ngram_order"].get<int>();
      if (e.contains("dim")) cfg.embedder.dim = e["dim"].get<int>();
      if (e.contains("normalize_sample")) {
        cfg.embedder.normalize_sample = e["normalize_sample"].get<bool>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw cham::ConfigError("config " + path.string() + ": " + e.what());
  }
}

void check_config(const PipelineConfig& cfg) {
  if (!(cfg.lambda > 0.0)) {
    throw cham::ConfigError("lambda must be positive");
  }
  if (cfg.temperature < 0.0) {
    throw cham::ConfigError("temperature must be positive");
  }
  if (cfg.samples_per_domain == 0) {
    throw cham::ConfigError("samples-per-domain must be at least 1");
  }
  cham::phase_from_string(cfg.phase);       // throws on bad value
  cham::wrap_policy_from_string(cfg.wrap);  // throws on bad value
  if (cfg.format != "jsonl" && cfg.format != "binary") {
    throw cham::ConfigError("format must be jsonl or binary");
  }
  cfg.embedder.validate();
}

int cmd_embed(const PipelineConfig& cfg) {
  if (cfg.corpus.empty()) {
    throw cham::ConfigError("embed requires a corpus (positional or config)");
  }
  if (cfg.out.empty()) {
    throw cham::ConfigError("embed requires --out DIR");
  }
  const cham::TextCorpus corpus = cham::read_jsonl_corpus(cfg.corpus);
  const cham::EmbedResult result =
      cham::embed_corpus(corpus, cfg.embedder, cfg.out);
  std::cerr << "embedded " << result.stats.embedded_domains << " domain(s) ("
            << result.stats.embedded_samples << " samples), reused "
            << result.stats.cached_domains << " cached domain(s)\n";
  std::cout << (fs::path(cfg.out) / "manifest.json").string() << "\n";
  return 0;
}

int cmd_weights(const PipelineConfig& cfg) {
  if (cfg.manifest.empty()) {
    throw cham::ConfigError("weights requires --manifest PATH");
  }
  const cham::DomainManifest manifest = cham::read_manifest(cfg.manifest);
  const auto sets = cham::load_manifest(manifest);
  cham::EmbeddingMatrix x =
      cham::build_embedding_matrix(sets, cfg.samples_per_domain, cfg.seed);
  if (cfg.normalize_domain) {
    x = cham::l2_normalized(x);
  }
  x.set_fingerprint(manifest.embedder_fingerprint);

  const cham::AffinityMatrix omega = cham::build_affinity(x);
  const cham::ScoreVector scores = cham::krls_direct(omega, cfg.lambda);
  const cham::Phase phase = cham::phase_from_string(cfg.phase);
  cham::MixtureWeights weights =
      phase == cham::Phase::pretrain
          ? cham::pretrain_weights(scores, x.labels(),
                                   cfg.effective_temperature())
          : cham::finetune_weights(scores, x.labels(),
                                   cfg.effective_temperature());
  weights.embedder_fingerprint = x.fingerprint();

  const std::string json = cham::weight_report_json(weights, scores);
  std::cout << json << "\n";
  if (!cfg.out.empty()) {
    cham::write_weight_report(cfg.out, weights, scores);
  }
  return 0;
}

int cmd_mix(const PipelineConfig& cfg) {
  if (cfg.report.empty()) {
    throw cham::ConfigError("mix requires --report PATH (a weight report)");
  }
  if (cfg.sources.empty()) {
    throw cham::ConfigError("mix requires --sources PATH (domain -> jsonl map)");
  }
  if (cfg.out.empty()) {
    throw cham::ConfigError("mix requires --out PATH");
  }
  if (cfg.length == 0) {
    throw cham::ConfigError("mix requires --length >= 1");
  }

  const cham::WeightReport report = cham::read_weight_report(cfg.report);

  std::ifstream in(cfg.sources);
  if (!in) {
    throw cham::IoError("cannot open sources map " + cfg.sources);
  }
  nlohmann::json sj;
  try {
    in >> sj;
  } catch (const nlohmann::json::exception& e) {
    throw cham::IoError("sources map " + cfg.sources + ": " + e.what());
  }
  const fs::path sources_dir = fs::path(cfg.sources).parent_path();

  std::vector<cham::RecordSource> sources;
  for (const auto& name : report.weights.labels) {
    if (!sj.contains(name)) {
      throw cham::InputError("weight report names domain '" + name +
                             "' but the sources map does not");
    }
    fs::path rec_path(sj[name].get<std::string>());
    if (rec_path.is_relative() && !sources_dir.empty()) {
      rec_path = sources_dir / rec_path;
    }
    sources.push_back(cham::read_jsonl_source(rec_path, name));
  }
  if (sj.size() != report.weights.labels.size()) {
    throw cham::InputError("sources map lists domains absent from the report");
  }

  cham::MixPlan plan;
  plan.weights = report.weights;
  plan.seed = cfg.seed;
  plan.length = cfg.length;
  plan.wrap = cham::wrap_policy_from_string(cfg.wrap);

  const auto records = cham::mix_stream(sources, plan);

  if (cfg.format == "binary") {
    std::vector<std::uint16_t> indices;
    indices.reserve(records.size());
    for (const auto& rec : records) {
      indices.push_back(static_cast<std::uint16_t>(rec.domain_index));
    }
    cham::write_mix_binary(cfg.out, static_cast<int>(sources.size()), indices);
  } else {
    std::ofstream out(cfg.out);
    if (!out) {
      throw cham::IoError("cannot write stream " + cfg.out);
    }
    cham::write_mix_jsonl(out, records);
  }

  const auto freq =
      cham::empirical_frequencies(records, static_cast<int>(sources.size()));
  std::vector<std::uint64_t> counts(sources.size(), 0);
  for (const auto& rec : records) {
    counts[static_cast<std::size_t>(rec.domain_index)] += 1;
  }
  for (std::size_t i = 0; i < sources.size(); ++i) {
    std::cerr << sources[i].name << ": " << counts[i] << " records ("
              << freq[i] << ")\n";
  }
  return 0;
}

int cmd_verify(const PipelineConfig& cfg, bool inject_corruption) {
  const double corruption = inject_corruption ? 1e-3 : 0.0;
  const auto reports = cham::run_verification_suite(cfg.seed, corruption);
  bool all_pass = true;
  for (const auto& r : reports) {
    std::cout << cham::report_json_line(r) << "\n";
    all_pass = all_pass && r.pass;
  }
  return all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"domain mixture weighting from embedding-space leverage"};
  app.require_subcommand(1);

  PipelineConfig cli;  // values given on the command line
  std::string config_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file")
        ->check(CLI::ExistingFile);
    sub->add_option("--lambda", cli.lambda, "regularization constant");
    sub->add_option("--temperature", cli.temperature, "softmax temperature");
    sub->add_option("--phase", cli.phase, "pretrain | finetune");
    sub->add_option("--seed", cli.seed, "64-bit run seed");
    sub->add_option("--samples-per-domain", cli.samples_per_domain,
                    "subsample size per domain");
    sub->add_flag("--normalize-domain", cli.normalize_domain,
                  "L2-normalize domain embeddings before affinity");
    sub->add_option("--manifest", cli.manifest, "embedding manifest path");
    sub->add_option("--out", cli.out, "output path");
    sub->add_option("--format", cli.format, "jsonl | binary");
  };

  CLI::App* embed = app.add_subcommand(
      "embed", "embed a JSONL text corpus into per-domain embedding files");
  embed->add_option("corpus", cli.corpus,
                    "JSONL corpus, one {\"domain\",\"text\"} per line");
  add_common(embed);

  CLI::App* weights = app.add_subcommand(
      "weights", "compute scores and phase mixture weights from a manifest");
  add_common(weights);

  CLI::App* mix = app.add_subcommand(
      "mix", "interleave domain sources into one reproducible stream");
  add_common(mix);
  mix->add_option("--report", cli.report, "weight report JSON path");
  mix->add_option("--sources", cli.sources,
                  "JSON map of domain name to records file");
  mix->add_option("--length", cli.length, "records to emit");
  mix->add_option("--wrap", cli.wrap, "cycle | reshuffle-cycle");

  CLI::App* verify = app.add_subcommand(
      "verify", "run the built-in verification suite over a seeded grid");
  add_common(verify);
  bool inject_corruption = false;
  verify
      ->add_flag("--inject-corruption", inject_corruption,
                 "negative-control hook: perturb one score by 1e-3")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);

    // Precedence: defaults < config file < explicit flags.
    PipelineConfig cfg;
    if (!config_path.empty()) {
      apply_config_file(cfg, config_path);
    }
    CLI::App* sub = app.get_subcommands().front();
    auto overridden = [&](const std::string& name) {
      const CLI::Option* opt = sub->get_option_no_throw(name);
      return opt != nullptr && opt->count() > 0;
    };
    if (overridden("--lambda")) cfg.lambda = cli.lambda;
    if (overridden("--temperature")) cfg.temperature = cli.temperature;
    if (overridden("--phase")) cfg.phase = cli.phase;
    if (overridden("--seed")) cfg.seed = cli.seed;
    if (overridden("--samples-per-domain")) {
      cfg.samples_per_domain = cli.samples_per_domain;
    }
    if (overridden("--normalize-domain")) {
      cfg.normalize_domain = cli.normalize_domain;
    }
    if (overridden("--manifest")) cfg.manifest = cli.manifest;
    if (overridden("--out")) cfg.out = cli.out;
    if (overridden("--format")) cfg.format = cli.format;
    if (overridden("corpus")) cfg.corpus = cli.corpus;
    if (overridden("--report")) cfg.report = cli.report;
    if (overridden("--sources")) cfg.sources = cli.sources;
    if (overridden("--length")) cfg.length = cli.length;
    if (overridden("--wrap")) cfg.wrap = cli.wrap;
    check_config(cfg);

    if (sub == embed) return cmd_embed(cfg);
    if (sub == weights) return cmd_weights(cfg);
    if (sub == mix) return cmd_mix(cfg);
    return cmd_verify(cfg, inject_corruption);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help
    }
    app.exit(e);
    return 1;
  } catch (const cham::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const cham::ParamError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const cham::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

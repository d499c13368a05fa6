#include "cham/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "cham/error.hpp"
#include "cham/hashing.hpp"

namespace cham {

namespace {

std::string domain_content_hash(const std::vector<std::string>& texts) {
  constexpr std::string_view kRecordSep("\x1f", 1);
  std::uint64_t h = kFnv1aOffsetBasis;
  for (const auto& t : texts) {
    h = fnv1a64(std::string_view(t), h);
    h = fnv1a64(kRecordSep, h);  // separator so ("ab","c") != ("a","bc")
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

// File names are keyed by the domain name, not its position, so cached
// entries stay valid when the domain set grows or reorders.
std::string domain_file_name(const std::string& name) {
  std::string sanitized;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_';
    sanitized.push_back(ok ? c : '_');
  }
  char suffix[17];
  std::snprintf(suffix, sizeof(suffix), "%016llx",
                static_cast<unsigned long long>(fnv1a64(name)));
  return sanitized + "-" + suffix + ".emb";
}

}  // namespace

TextCorpus read_jsonl_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open corpus " + path.string());
  }

  TextCorpus corpus;
  std::map<std::string, std::size_t> index;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      std::ostringstream os;
      os << path.string() << ":" << lineno << ": " << e.what();
      throw IoError(os.str());
    }
    if (!j.contains("domain") || !j.contains("text")) {
      std::ostringstream os;
      os << path.string() << ":" << lineno
         << ": expected {\"domain\": str, \"text\": str}";
      throw IoError(os.str());
    }
    const std::string domain = j["domain"].get<std::string>();
    auto [it, inserted] = index.try_emplace(domain, corpus.domains.size());
    if (inserted) {
      corpus.domains.emplace_back(domain, std::vector<std::string>{});
    }
    corpus.domains[it->second].second.push_back(j["text"].get<std::string>());
  }
  if (corpus.domains.empty()) {
    throw InputError("corpus " + path.string() + " holds no records");
  }
  return corpus;
}

EmbedResult embed_corpus(const TextCorpus& corpus, const EmbedderSpec& spec,
                         const std::filesystem::path& out_dir,
                         bool reuse_cached) {
  spec.validate();
  if (spec.kind != EmbedderKind::hashed_ngram) {
    throw ConfigError(
        "embed requires the hashed-ngram embedder; external embeddings "
        "enter through a manifest instead");
  }
  for (const auto& [name, texts] : corpus.domains) {
    if (texts.empty()) {
      throw InputError("domain " + name + " has no samples");
    }
  }

  std::filesystem::create_directories(out_dir);
  const std::string fingerprint = spec.fingerprint();

  DomainManifest previous;
  bool have_previous = false;
  const std::filesystem::path manifest_path = out_dir / "manifest.json";
  if (reuse_cached && std::filesystem::exists(manifest_path)) {
    try {
      previous = read_manifest(manifest_path);
      have_previous = previous.embedder_fingerprint == fingerprint &&
                      previous.dims == static_cast<std::uint32_t>(spec.dim);
    } catch (const Error&) {
      have_previous = false;
    }
  }

  EmbedResult result;
  result.manifest.dims = static_cast<std::uint32_t>(spec.dim);
  result.manifest.embedder_fingerprint = fingerprint;
  result.manifest.base_dir = out_dir;

  for (const auto& [name, texts] : corpus.domains) {
    const std::string content = domain_content_hash(texts);

    ManifestDomain entry;
    entry.name = name;
    entry.count = texts.size();
    entry.content_hash = content;

    const ManifestDomain* prior =
        have_previous ? previous.find(name) : nullptr;
    if (prior != nullptr && prior->content_hash == content &&
        prior->count == texts.size() &&
        std::filesystem::exists(previous.resolve(*prior))) {
      entry.file = prior->file;
      result.stats.cached_domains += 1;
      result.manifest.domains.push_back(std::move(entry));
      continue;
    }

    SampleEmbeddingSet set;
    set.domain = name;
    set.vectors.resize(static_cast<Eigen::Index>(texts.size()), spec.dim);
    for (std::size_t r = 0; r < texts.size(); ++r) {
      set.vectors.row(static_cast<Eigen::Index>(r)) =
          embed_text(texts[r], spec).values.transpose();
    }
    entry.file = domain_file_name(name);
    write_embedding_file(out_dir / entry.file, set);
    result.stats.embedded_domains += 1;
    result.stats.embedded_samples += texts.size();
    result.manifest.domains.push_back(std::move(entry));
  }

  write_manifest(result.manifest, manifest_path);
  return result;
}

}  // namespace cham

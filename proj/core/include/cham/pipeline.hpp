#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "cham/embedder.hpp"
#include "cham/manifest.hpp"

namespace cham {

// Raw text corpus grouped by domain. Domain order is first appearance in
// the input; sample order within a domain is input order.
struct TextCorpus {
  std::vector<std::pair<std::string, std::vector<std::string>>> domains;
};

// JSONL, one {"domain": str, "text": str} object per line.
TextCorpus read_jsonl_corpus(const std::filesystem::path& path);

struct EmbedStats {
  std::size_t embedded_domains = 0;
  std::size_t cached_domains = 0;
  std::uint64_t embedded_samples = 0;
};

struct EmbedResult {
  DomainManifest manifest;
  EmbedStats stats;
};

// Embeds each domain's texts and writes <out_dir>/<domain>.emb plus
// <out_dir>/manifest.json. When reuse_cached is set and out_dir already
// holds a manifest whose fingerprint, dims, and per-domain content hashes
// match, those domains are not re-embedded; this is what makes extending a
// domain set cheap. Stats report exactly how much work was done.
EmbedResult embed_corpus(const TextCorpus& corpus, const EmbedderSpec& spec,
                         const std::filesystem::path& out_dir,
                         bool reuse_cached = true);

}  // namespace cham

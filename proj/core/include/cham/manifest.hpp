#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cham/sample_set.hpp"

namespace cham {

struct ManifestDomain {
  std::string name;
  std::string file;
  std::uint64_t count = 0;
  std::optional<int> layer;
  // FNV-1a hash of the domain's source text, when the embeddings were
  // produced by the built-in embedder. Lets a re-run skip domains whose
  // input has not changed.
  std::string content_hash;
};

// Index of per-domain embedding files. Relative file entries resolve
// against base_dir (the manifest's own directory when read from disk).
struct DomainManifest {
  std::uint32_t dims = 0;
  std::vector<ManifestDomain> domains;
  std::string embedder_fingerprint;
  std::filesystem::path base_dir;

  void validate() const;
  std::filesystem::path resolve(const ManifestDomain& d) const;
  const ManifestDomain* find(const std::string& name) const;
};

DomainManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const DomainManifest& manifest,
                    const std::filesystem::path& path);

// Binary embedding file: magic "CHAMEMB1", u32 LE count, u32 LE dim, then
// count*dim float32 LE row-major.
SampleEmbeddingSet read_embedding_file(const std::filesystem::path& path,
                                       const std::string& domain_name);
void write_embedding_file(const std::filesystem::path& path,
                          const SampleEmbeddingSet& set);

// Reads every domain's embedding file, validating dims against the
// manifest, declared counts against file headers, and finiteness of every
// value. Errors name the file and byte offset.
std::vector<SampleEmbeddingSet> load_manifest(const DomainManifest& manifest);

}  // namespace cham

#pragma once

#include <Eigen/Core>
#include <string>
#include <string_view>

namespace cham {

enum class EmbedderKind { external_file, hashed_ngram };

// Deterministic stand-in embedder: hashed byte n-grams. It exists so the
// whole pipeline can run end-to-end on raw text without any upstream
// model; production embeddings arrive through the binary file format
// instead (kind = external_file).
struct EmbedderSpec {
  EmbedderKind kind = EmbedderKind::hashed_ngram;
  int ngram_order = 3;
  int dim = 512;
  bool normalize_sample = true;

  void validate() const;

  // Stable content hash over the canonicalized fields, used to assert that
  // two embedding runs are comparable.
  std::string fingerprint() const;
};

struct TextEmbedding {
  Eigen::VectorXf values;
  // Set when the sample produced no n-gram windows (shorter than
  // ngram_order bytes); values is then the zero vector.
  bool empty_input = false;
};

// Slides a window of ngram_order bytes over the UTF-8 bytes of `sample`,
// hashes each window with 64-bit FNV-1a, and increments slot hash % dim.
// With normalize_sample the count vector is scaled to unit L2 norm.
TextEmbedding embed_text(std::string_view sample, const EmbedderSpec& spec);

}  // namespace cham

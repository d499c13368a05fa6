#include "cham/embedder.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "cham/error.hpp"
#include "cham/hashing.hpp"

namespace cham {

void EmbedderSpec::validate() const {
  if (kind == EmbedderKind::hashed_ngram) {
    if (dim < 2) {
      throw ParamError("hashed-ngram embedder requires dim >= 2");
    }
    if (ngram_order < 1 || ngram_order > 8) {
      std::ostringstream os;
      os << "ngram_order must be in [1, 8], got " << ngram_order;
      throw ParamError(os.str());
    }
  }
}

std::string EmbedderSpec::fingerprint() const {
  std::ostringstream os;
  if (kind == EmbedderKind::external_file) {
    os << "kind=external-file;dim=" << dim;
  } else {
    os << "kind=hashed-ngram;ngram_order=" << ngram_order << ";dim=" << dim
       << ";hash=fnv1a64;normalize_sample=" << (normalize_sample ? 1 : 0);
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(os.str())));
  return std::string(buf);
}

TextEmbedding embed_text(std::string_view sample, const EmbedderSpec& spec) {
  spec.validate();
  if (spec.kind != EmbedderKind::hashed_ngram) {
    throw ParamError("embed_text requires a hashed-ngram embedder spec");
  }

  const std::size_t order = static_cast<std::size_t>(spec.ngram_order);
  std::vector<double> counts(static_cast<std::size_t>(spec.dim), 0.0);

  TextEmbedding out;
  if (sample.size() < order) {
    out.values = Eigen::VectorXf::Zero(spec.dim);
    out.empty_input = true;
    return out;
  }

  const std::uint64_t dim = static_cast<std::uint64_t>(spec.dim);
  for (std::size_t i = 0; i + order <= sample.size(); ++i) {
    const std::uint64_t h = fnv1a64_bytes(sample.data() + i, order);
    counts[static_cast<std::size_t>(h % dim)] += 1.0;
  }

  if (spec.normalize_sample) {
    double sq = 0.0;
    for (double c : counts) sq += c * c;
    const double norm = std::sqrt(sq);
    if (norm > 0.0) {
      for (double& c : counts) c /= norm;
    }
  }

  out.values.resize(spec.dim);
  for (int i = 0; i < spec.dim; ++i) {
    out.values(i) = static_cast<float>(counts[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace cham

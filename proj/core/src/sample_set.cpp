#include "cham/sample_set.hpp"

#include <numeric>
#include <sstream>
#include <utility>

#include "cham/error.hpp"
#include "cham/hashing.hpp"
#include "cham/rng.hpp"

namespace cham {

Eigen::VectorXd aggregate_domain(const SampleEmbeddingSet& samples,
                                 bool* zero_mean) {
  if (samples.count() < 1) {
    throw InputError("cannot aggregate empty domain " + samples.domain);
  }
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(samples.dim());
  for (Eigen::Index r = 0; r < samples.count(); ++r) {
    acc += samples.vectors.row(r).cast<double>();
  }
  acc /= static_cast<double>(samples.count());
  if (zero_mean != nullptr) {
    *zero_mean = (acc.norm() == 0.0);
  }
  return acc;
}

SampleEmbeddingSet subsample_domain(const SampleEmbeddingSet& samples,
                                    std::uint64_t n, std::uint64_t seed) {
  if (n == 0) {
    throw ParamError("subsample size must be at least 1");
  }
  const std::uint64_t total = static_cast<std::uint64_t>(samples.count());
  if (n >= total) {
    return samples;
  }

  std::vector<std::uint64_t> idx(total);
  std::iota(idx.begin(), idx.end(), 0);

  Xoshiro256ss rng(mix_seed(seed, fnv1a64(samples.domain)));
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t j = i + rng.next_bounded(total - i);
    std::swap(idx[i], idx[j]);
  }

  SampleEmbeddingSet out;
  out.domain = samples.domain;
  out.vectors.resize(static_cast<Eigen::Index>(n), samples.dim());
  for (std::uint64_t i = 0; i < n; ++i) {
    out.vectors.row(static_cast<Eigen::Index>(i)) =
        samples.vectors.row(static_cast<Eigen::Index>(idx[i]));
  }
  return out;
}

EmbeddingMatrix build_embedding_matrix(
    const std::vector<SampleEmbeddingSet>& sets, std::uint64_t n,
    std::uint64_t seed) {
  if (sets.empty()) {
    throw InputError("need at least one domain to build an embedding matrix");
  }
  const Eigen::Index dim = sets.front().dim();
  for (const auto& set : sets) {
    if (set.dim() != dim) {
      std::ostringstream os;
      os << "inconsistent embedding dims: domain " << set.domain << " has "
         << set.dim() << ", expected " << dim;
      throw InputError(os.str());
    }
  }

  Eigen::MatrixXd rows(static_cast<Eigen::Index>(sets.size()), dim);
  std::vector<std::string> labels;
  std::vector<std::string> degenerate;
  labels.reserve(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    bool zero_mean = false;
    const SampleEmbeddingSet sub = subsample_domain(sets[i], n, seed);
    rows.row(static_cast<Eigen::Index>(i)) =
        aggregate_domain(sub, &zero_mean).transpose();
    if (zero_mean) {
      degenerate.push_back(sets[i].domain);
    }
    labels.push_back(sets[i].domain);
  }

  if (!degenerate.empty()) {
    std::ostringstream os;
    os << "zero-norm domain embedding for:";
    for (const auto& name : degenerate) os << ' ' << name;
    throw InputError(os.str());
  }
  return EmbeddingMatrix(std::move(rows), std::move(labels));
}

}  // namespace cham

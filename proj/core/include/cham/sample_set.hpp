#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "cham/embedding_matrix.hpp"

namespace cham {

// Row-major to mirror the on-disk layout (count x dim float32, row-major).
using SampleMatrix =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Per-sample embeddings for one domain. Vectors are kept in the file
// format's float32; all arithmetic on them runs at 64-bit precision.
struct SampleEmbeddingSet {
  std::string domain;
  SampleMatrix vectors;

  Eigen::Index count() const { return vectors.rows(); }
  Eigen::Index dim() const { return vectors.cols(); }
};

// Arithmetic mean over rows, accumulated in fixed sequential row order at
// 64-bit precision. Sets *zero_mean (when given) if the mean has zero norm;
// rejection is deferred to EmbeddingMatrix construction.
Eigen::VectorXd aggregate_domain(const SampleEmbeddingSet& samples,
                                 bool* zero_mean = nullptr);

// Draws n rows without replacement via a seeded partial Fisher-Yates
// shuffle, emitted in selection order. The domain name is mixed into the
// seed so per-domain draws are independent. n >= count is the identity
// (original order); n = 0 is a parameter error.
SampleEmbeddingSet subsample_domain(const SampleEmbeddingSet& samples,
                                    std::uint64_t n, std::uint64_t seed);

// subsample_domain then aggregate_domain per domain, rows in input order.
// Domains whose mean embedding has zero norm are collected and reported in
// one error.
EmbeddingMatrix build_embedding_matrix(
    const std::vector<SampleEmbeddingSet>& sets, std::uint64_t n,
    std::uint64_t seed);

}  // namespace cham

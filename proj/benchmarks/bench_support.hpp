#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cham/embedding_matrix.hpp"
#include "cham/rng.hpp"

namespace cham::bench {

inline double gaussian(Xoshiro256ss& rng) {
  const double u1 = (static_cast<double>(rng.next() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = rng.next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline EmbeddingMatrix random_embedding(Eigen::Index k, Eigen::Index p,
                                        std::uint64_t seed) {
  Xoshiro256ss rng(seed);
  Eigen::MatrixXd data(k, p);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      data(i, j) = gaussian(rng);
    }
  }
  std::vector<std::string> labels;
  for (Eigen::Index i = 0; i < k; ++i) {
    labels.push_back("d" + std::to_string(i));
  }
  return EmbeddingMatrix(std::move(data), std::move(labels));
}

}  // namespace cham::bench

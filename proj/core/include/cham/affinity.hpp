#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "cham/embedding_matrix.hpp"

namespace cham {

// k x k Gram matrix of pairwise domain inner products under the linear
// kernel. Stored exactly symmetric: the constructor replaces its argument
// with (M + M^T)/2 because floating-point dot products do not commute
// bit-exactly.
class AffinityMatrix {
 public:
  explicit AffinityMatrix(Eigen::MatrixXd omega,
                          std::vector<std::string> labels = {});

  Eigen::Index dim() const { return data_.rows(); }
  const Eigen::MatrixXd& data() const { return data_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  Eigen::MatrixXd data_;
  std::vector<std::string> labels_;
};

// Omega = X X^T, symmetrized; labels carried through.
AffinityMatrix build_affinity(const EmbeddingMatrix& x);

}  // namespace cham

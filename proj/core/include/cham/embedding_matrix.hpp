#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace cham {

// k x p matrix of domain embeddings, row i = domain i. Construction
// enforces: k >= 1, p >= 1, all entries finite, no zero-norm row, labels
// unique and index-aligned with rows. An optional embedder fingerprint
// travels with the matrix so downstream consumers can assert that two
// matrices came from the same embedder configuration.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix(Eigen::MatrixXd data, std::vector<std::string> labels);

  Eigen::Index domain_count() const { return data_.rows(); }
  Eigen::Index dim() const { return data_.cols(); }
  const Eigen::MatrixXd& data() const { return data_; }
  const std::vector<std::string>& labels() const { return labels_; }

  const std::string& fingerprint() const { return fingerprint_; }
  void set_fingerprint(std::string fp) { fingerprint_ = std::move(fp); }

 private:
  Eigen::MatrixXd data_;
  std::vector<std::string> labels_;
  std::string fingerprint_;
};

// Copy with each row scaled to unit L2 norm. Off by default in the
// pipeline; raw inner products are the baseline affinity.
EmbeddingMatrix l2_normalized(const EmbeddingMatrix& x);

}  // namespace cham

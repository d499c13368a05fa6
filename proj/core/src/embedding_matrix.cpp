#include "cham/embedding_matrix.hpp"

#include <cmath>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "cham/error.hpp"

namespace cham {

EmbeddingMatrix::EmbeddingMatrix(Eigen::MatrixXd data,
                                 std::vector<std::string> labels)
    : data_(std::move(data)), labels_(std::move(labels)) {
  if (data_.rows() < 1 || data_.cols() < 1) {
    throw InputError("embedding matrix must have at least one domain and one dimension");
  }
  if (static_cast<Eigen::Index>(labels_.size()) != data_.rows()) {
    std::ostringstream os;
    os << "label count " << labels_.size() << " does not match domain count "
       << data_.rows();
    throw InputError(os.str());
  }
  std::unordered_set<std::string> seen;
  for (const auto& label : labels_) {
    if (!seen.insert(label).second) {
      throw InputError("duplicate domain label: " + label);
    }
  }
  for (Eigen::Index i = 0; i < data_.rows(); ++i) {
    if (!data_.row(i).allFinite()) {
      std::ostringstream os;
      os << "non-finite entry in embedding row " << i << " (" << labels_[i] << ")";
      throw InputError(os.str());
    }
    if (data_.row(i).norm() == 0.0) {
      std::ostringstream os;
      os << "zero-norm embedding row " << i << " (" << labels_[i] << ")";
      throw InputError(os.str());
    }
  }
}

EmbeddingMatrix l2_normalized(const EmbeddingMatrix& x) {
  Eigen::MatrixXd scaled = x.data();
  for (Eigen::Index i = 0; i < scaled.rows(); ++i) {
    scaled.row(i) /= scaled.row(i).norm();
  }
  EmbeddingMatrix out(std::move(scaled), x.labels());
  out.set_fingerprint(x.fingerprint());
  return out;
}

}  // namespace cham

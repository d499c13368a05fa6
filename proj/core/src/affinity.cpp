#include "cham/affinity.hpp"

#include <sstream>
#include <utility>

#include "cham/error.hpp"

namespace cham {

AffinityMatrix::AffinityMatrix(Eigen::MatrixXd omega,
                               std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  if (omega.rows() < 1 || omega.rows() != omega.cols()) {
    std::ostringstream os;
    os << "affinity matrix must be square and non-empty, got " << omega.rows()
       << "x" << omega.cols();
    throw InputError(os.str());
  }
  if (!omega.allFinite()) {
    throw InputError("non-finite entry in affinity matrix");
  }
  if (!labels_.empty() &&
      static_cast<Eigen::Index>(labels_.size()) != omega.rows()) {
    throw InputError("affinity label count does not match dimension");
  }
  data_ = 0.5 * (omega + omega.transpose()).eval();
}

AffinityMatrix build_affinity(const EmbeddingMatrix& x) {
  Eigen::MatrixXd omega = x.data() * x.data().transpose();
  return AffinityMatrix(std::move(omega), x.labels());
}

}  // namespace cham

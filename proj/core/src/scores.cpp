#include "cham/scores.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <sstream>

#include "cham/error.hpp"

namespace cham {

namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0)) {
    std::ostringstream os;
    os << "lambda must be positive, got " << lambda;
    throw ParamError(os.str());
  }
}

}  // namespace

ScoreVector krls_direct(const AffinityMatrix& omega, double lambda) {
  check_lambda(lambda);
  const Eigen::Index k = omega.dim();
  const double shift = static_cast<double>(k) * lambda;

  Eigen::MatrixXd regularized = omega.data();
  regularized.diagonal().array() += shift;

  Eigen::LLT<Eigen::MatrixXd> llt(regularized);
  if (llt.info() != Eigen::Success) {
    // Should be unreachable for PSD input with lambda > 0; report the
    // spectrum so the caller can see what went wrong.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(omega.data(),
                                                      Eigen::EigenvaluesOnly);
    std::ostringstream os;
    os << "Cholesky factorization of (Omega + k*lambda*I) failed; "
       << "eigenvalue range of Omega [" << es.eigenvalues().minCoeff() << ", "
       << es.eigenvalues().maxCoeff() << "], shift " << shift
       << ", shifted condition estimate "
       << (es.eigenvalues().maxCoeff() + shift) /
              (es.eigenvalues().minCoeff() + shift);
    throw NumericalError(os.str());
  }

  // diag(Omega M) = diag(M Omega) for symmetric Omega, M; solving
  // (Omega + k*lambda*I) Y = Omega therefore yields the hat diagonal.
  Eigen::MatrixXd y = llt.solve(omega.data());
  return ScoreVector{y.diagonal(), lambda, ScoreMethod::direct};
}

ScoreVector krls_eigen(const AffinityMatrix& omega, double lambda) {
  check_lambda(lambda);
  const Eigen::Index k = omega.dim();
  const double shift = static_cast<double>(k) * lambda;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(omega.data());
  if (es.info() != Eigen::Success) {
    throw NumericalError("symmetric eigendecomposition did not converge");
  }

  Eigen::VectorXd sigma = es.eigenvalues().cwiseMax(0.0);
  Eigen::VectorXd filter = sigma.array() / (sigma.array() + shift);
  Eigen::VectorXd scores =
      (es.eigenvectors().array().square().matrix() * filter).eval();
  return ScoreVector{std::move(scores), lambda, ScoreMethod::eigen};
}

ScoreVector statistical_leverage(const EmbeddingMatrix& x) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(x.data(), Eigen::ComputeThinU);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = 1e-10 * sv(0);

  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;

  Eigen::VectorXd leverage =
      svd.matrixU().leftCols(rank).array().square().rowwise().sum();
  return ScoreVector{std::move(leverage), 0.0, ScoreMethod::ridgeless};
}

double effective_dimension(const AffinityMatrix& omega, double lambda) {
  check_lambda(lambda);
  const double shift = static_cast<double>(omega.dim()) * lambda;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(omega.data(),
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("symmetric eigendecomposition did not converge");
  }
  Eigen::VectorXd sigma = es.eigenvalues().cwiseMax(0.0);
  return (sigma.array() / (sigma.array() + shift)).sum();
}

}  // namespace cham

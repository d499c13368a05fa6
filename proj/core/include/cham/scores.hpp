#pragma once

#include <Eigen/Core>

#include "cham/affinity.hpp"
#include "cham/embedding_matrix.hpp"

namespace cham {

enum class ScoreMethod { direct, eigen, ridgeless };

// Per-domain kernel ridge leverage scores. For lambda > 0 every value lies
// in [0, 1) and the sum is bounded by rank(Omega) <= min(k, p).
struct ScoreVector {
  Eigen::VectorXd values;
  double lambda = 0.0;
  ScoreMethod method = ScoreMethod::direct;

  Eigen::Index size() const { return values.size(); }
};

// diag(Omega (Omega + k*lambda*I)^{-1}) via a symmetric positive-definite
// Cholesky solve of (Omega + k*lambda*I) Y = Omega. Never forms an inverse.
ScoreVector krls_direct(const AffinityMatrix& omega, double lambda);

// Same scores through the spectral route: sum_j sigma_j/(sigma_j + k*lambda)
// * U_ij^2 with Omega = U Sigma U^T. Tiny negative eigenvalues from rounding
// on PSD input are clamped to zero.
ScoreVector krls_eigen(const AffinityMatrix& omega, double lambda);

// Ridgeless statistical leverage: diagonal of the projection onto the row
// space of X, computed from the SVD of X with singular-value cutoff
// 1e-10 * sigma_max. Values in [0, 1].
ScoreVector statistical_leverage(const EmbeddingMatrix& x);

// Trace of the hat matrix, sum_j sigma_j/(sigma_j + k*lambda). Equals the
// sum of krls_direct values; computed from eigenvalues only so the
// agreement is a meaningful cross-check.
double effective_dimension(const AffinityMatrix& omega, double lambda);

}  // namespace cham

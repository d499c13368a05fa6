#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "cham/affinity.hpp"
#include "cham/embedding_matrix.hpp"

namespace cham {

// Everything in this header re-derives quantities through factorizations
// and formulas deliberately disjoint from scores.hpp (LDLT and complete
// orthogonal decompositions instead of Cholesky/eigendecomposition/SVD).
// That independence is the point: agreement between the two sides is
// evidence, not tautology.

struct VerificationReport {
  std::string check;
  int k = 0;
  int p = 0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

std::string report_json_line(const VerificationReport& report);

// Squared norm of the least-norm y solving X^T y = x_i, computed through a
// complete orthogonal decomposition of X^T. Equals the ridgeless leverage
// of row i.
double min_norm_leverage(const EmbeddingMatrix& x, Eigen::Index i);

// Closed-form regularized Christoffel values at the k domains with unit
// density weights: (1/k) / hat_jj where the hat diagonal is recomputed
// here via an LDLT solve. Satisfies k * C_j * S_j = 1 against the direct
// scores.
Eigen::VectorXd christoffel_values(const AffinityMatrix& omega, double lambda);

// General density weights eta > 0: C_j = (eta_j/k) / [K (K + k*lambda*
// diag(eta)^{-1})^{-1}]_jj. The pipeline only uses eta = 1; this overload
// exists for one parameterized check.
Eigen::VectorXd christoffel_values(const AffinityMatrix& omega, double lambda,
                                   const Eigen::VectorXd& eta);

// Feature-space hat diagonal diag(X (X^T X + lambda I_p)^{-1} X^T) via a
// p x p solve against the kernel-space diag(Omega (Omega + lambda I_k)^{-1})
// via a k x k solve. Bare lambda on both sides, per the identity being
// checked. Tolerance 1e-9.
VerificationReport verify_hat_equivalence(const EmbeddingMatrix& x,
                                          double lambda);

// Component-wise non-increase of the direct scores along an ascending
// lambda grid, 1e-12 rounding slack.
VerificationReport verify_lambda_monotonicity(const AffinityMatrix& omega,
                                              const std::vector<double>& grid);

// The full suite over a deterministic instance grid derived from `seed`.
// `corruption` is a test hook: it is added to one recomputed score inside
// the Christoffel identity check so negative-control runs fail loudly.
std::vector<VerificationReport> run_verification_suite(std::uint64_t seed,
                                                       double corruption = 0.0);

}  // namespace cham

#include "cham/oracle.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "cham/error.hpp"
#include "cham/rng.hpp"
#include "cham/scores.hpp"

namespace cham {

namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0)) {
    std::ostringstream os;
    os << "lambda must be positive, got " << lambda;
    throw ParamError(os.str());
  }
}

// Standard normal via Box-Muller on the project PRNG; keeps the suite's
// instances platform-independent.
double gaussian(Xoshiro256ss& rng) {
  const double u1 =
      (static_cast<double>(rng.next() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  const double u2 = rng.next_double();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
}

EmbeddingMatrix random_embedding(Eigen::Index k, Eigen::Index p,
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

VerificationReport make_report(std::string check, int k, int p, double lambda,
                               std::uint64_t seed, double deviation,
                               double tolerance) {
  VerificationReport r;
  r.check = std::move(check);
  r.k = k;
  r.p = p;
  r.lambda = lambda;
  r.seed = seed;
  r.deviation = deviation;
  r.tolerance = tolerance;
  r.pass = deviation <= tolerance;
  return r;
}

}  // namespace

std::string report_json_line(const VerificationReport& report) {
  nlohmann::ordered_json j;
  j["check"] = report.check;
  j["k"] = report.k;
  j["p"] = report.p;
  j["lambda"] = report.lambda;
  j["deviation"] = report.deviation;
  j["pass"] = report.pass;
  return j.dump();
}

double min_norm_leverage(const EmbeddingMatrix& x, Eigen::Index i) {
  if (i < 0 || i >= x.domain_count()) {
    std::ostringstream os;
    os << "domain index " << i << " out of range [0, " << x.domain_count()
       << ")";
    throw ParamError(os.str());
  }
  // Least-norm solution of X^T y = x_i. The complete orthogonal
  // decomposition returns exactly that minimizer; rank deficiency is
  // absorbed by its pivot threshold rather than thrown.
  Eigen::MatrixXd xt = x.data().transpose();
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(xt);
  Eigen::VectorXd y = cod.solve(x.data().row(i).transpose());
  return y.squaredNorm();
}

Eigen::VectorXd christoffel_values(const AffinityMatrix& omega,
                                   double lambda) {
  return christoffel_values(omega, lambda,
                            Eigen::VectorXd::Ones(omega.dim()));
}

Eigen::VectorXd christoffel_values(const AffinityMatrix& omega, double lambda,
                                   const Eigen::VectorXd& eta) {
  check_lambda(lambda);
  const Eigen::Index k = omega.dim();
  if (eta.size() != k || (eta.array() <= 0.0).any()) {
    throw ParamError("eta must be strictly positive with one entry per domain");
  }

  // (K + k*lambda*diag(eta)^{-1}) H = K, then C_j = (eta_j/k) / H_jj.
  Eigen::MatrixXd m = omega.data();
  m.diagonal() += static_cast<double>(k) * lambda * eta.cwiseInverse();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
  if (ldlt.info() != Eigen::Success) {
    throw NumericalError("LDLT factorization failed in Christoffel evaluation");
  }
  Eigen::VectorXd hat_diag = ldlt.solve(omega.data()).diagonal();

  Eigen::VectorXd values(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    if (hat_diag(j) <= 1e-12) {
      std::ostringstream os;
      os << "degenerate hat diagonal " << hat_diag(j) << " at domain " << j;
      throw InputError(os.str());
    }
    values(j) = eta(j) / static_cast<double>(k) / hat_diag(j);
  }
  return values;
}

VerificationReport verify_hat_equivalence(const EmbeddingMatrix& x,
                                          double lambda) {
  check_lambda(lambda);
  const Eigen::Index k = x.domain_count();
  const Eigen::Index p = x.dim();

  // Feature space: p x p solve.
  Eigen::MatrixXd gram = x.data().transpose() * x.data();
  gram.diagonal().array() += lambda;
  Eigen::LDLT<Eigen::MatrixXd> feature(gram);
  Eigen::MatrixXd z = feature.solve(x.data().transpose());  // p x k
  Eigen::VectorXd hat_feature(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    hat_feature(i) = x.data().row(i).dot(z.col(i));
  }

  // Kernel space: k x k solve, bare lambda.
  Eigen::MatrixXd omega = x.data() * x.data().transpose();
  omega = 0.5 * (omega + omega.transpose()).eval();
  Eigen::MatrixXd shifted = omega;
  shifted.diagonal().array() += lambda;
  Eigen::LDLT<Eigen::MatrixXd> kernel(shifted);
  Eigen::VectorXd hat_kernel = kernel.solve(omega).diagonal();

  const double deviation = (hat_feature - hat_kernel).cwiseAbs().maxCoeff();
  return make_report("hat_equivalence", static_cast<int>(k),
                     static_cast<int>(p), lambda, 0, deviation, 1e-9);
}

VerificationReport verify_lambda_monotonicity(const AffinityMatrix& omega,
                                              const std::vector<double>& grid) {
  if (grid.size() < 2) {
    throw ParamError("lambda grid needs at least two points");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    check_lambda(grid[i]);
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw ParamError("lambda grid must be strictly ascending");
    }
  }

  double worst_increase = 0.0;
  Eigen::VectorXd prev = krls_direct(omega, grid[0]).values;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    Eigen::VectorXd cur = krls_direct(omega, grid[g]).values;
    worst_increase = std::max(worst_increase, (cur - prev).maxCoeff());
    prev = std::move(cur);
  }
  return make_report("lambda_monotonicity", static_cast<int>(omega.dim()), 0,
                     grid.back(), 0, std::max(worst_increase, 0.0), 1e-12);
}

std::vector<VerificationReport> run_verification_suite(std::uint64_t seed,
                                                       double corruption) {
  std::vector<VerificationReport> reports;

  // Hat-matrix equivalence on tall (k > p) and fat (p > k) instances.
  const std::pair<int, int> shapes[] = {{8, 3}, {3, 64}, {16, 16}, {32, 8},
                                        {8, 256}};
  int instance = 0;
  for (const auto& [k, p] : shapes) {
    for (double lambda : {0.1, 10.0}) {
      const std::uint64_t s = seed + 1000 + static_cast<std::uint64_t>(instance++);
      EmbeddingMatrix x = random_embedding(k, p, s);
      VerificationReport r = verify_hat_equivalence(x, lambda);
      r.seed = s;
      reports.push_back(std::move(r));
    }
  }

  // Christoffel identity k*C*S = 1 against the direct scores.
  instance = 0;
  for (int k : {2, 4, 8, 16, 32}) {
    for (double lambda : {0.01, 1.0, 100.0}) {
      const std::uint64_t s = seed + 2000 + static_cast<std::uint64_t>(instance++);
      EmbeddingMatrix x = random_embedding(k, 2 * k, s);
      AffinityMatrix omega = build_affinity(x);
      Eigen::VectorXd scores = krls_direct(omega, lambda).values;
      if (corruption != 0.0) {
        scores(0) += corruption;
      }
      Eigen::VectorXd c = christoffel_values(omega, lambda);
      const double deviation =
          (static_cast<double>(k) * c.array() * scores.array() - 1.0)
              .abs()
              .maxCoeff();
      reports.push_back(make_report("christoffel_identity", k, 2 * k, lambda,
                                    s, deviation, 1e-9));
    }
  }

  // Min-norm certificate against projection leverage, small instances.
  instance = 0;
  for (int k = 2; k <= 8; ++k) {
    const std::uint64_t s = seed + 3000 + static_cast<std::uint64_t>(instance++);
    const int p = (k % 2 == 0) ? k + 1 : 2 * k;
    EmbeddingMatrix x = random_embedding(k, p, s);
    Eigen::VectorXd lev = statistical_leverage(x).values;
    double deviation = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      deviation =
          std::max(deviation, std::abs(min_norm_leverage(x, i) - lev(i)));
    }
    reports.push_back(
        make_report("min_norm_leverage", k, p, 0.0, s, deviation, 1e-6));
  }

  // Score monotonicity in lambda along a 50-point log grid.
  instance = 0;
  for (int k : {4, 16}) {
    const std::uint64_t s = seed + 4000 + static_cast<std::uint64_t>(instance++);
    EmbeddingMatrix x = random_embedding(k, 2 * k, s);
    AffinityMatrix omega = build_affinity(x);
    std::vector<double> grid(50);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      grid[g] = std::pow(10.0, -3.0 + 6.0 * static_cast<double>(g) / 49.0);
    }
    VerificationReport r = verify_lambda_monotonicity(omega, grid);
    r.p = 2 * k;
    r.seed = s;
    reports.push_back(std::move(r));
  }

  return reports;
}

}  // namespace cham

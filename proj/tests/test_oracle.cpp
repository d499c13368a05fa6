#include <doctest.h>

#include <Eigen/LU>
#include <json.hpp>

#include "cham/error.hpp"
#include "cham/oracle.hpp"
#include "cham/scores.hpp"
#include "test_support.hpp"

using namespace cham;

namespace {

AffinityMatrix worked_affinity() {
  Eigen::MatrixXd omega(3, 3);
  omega << 1, 1, 0, 1, 1, 0, 0, 0, 1;
  return AffinityMatrix(omega, {"dup_a", "dup_b", "unique"});
}

}  // namespace

TEST_SUITE("min_norm_leverage") {
  TEST_CASE("orthogonal row has leverage one") {
    Eigen::MatrixXd x(2, 2);
    x << 1, 0, 0, 1;
    EmbeddingMatrix m(x, {"a", "b"});
    CHECK(min_norm_leverage(m, 0) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("duplicate rows certify half a unit each") {
    // y = (1/2, 1/2, 0) satisfies X^T y = x_0 with squared norm 1/2.
    Eigen::MatrixXd x(3, 2);
    x << 1, 0, 1, 0, 0, 1;
    EmbeddingMatrix m(x, {"a", "b", "c"});
    CHECK(min_norm_leverage(m, 0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(min_norm_leverage(m, 2) == doctest::Approx(1.0).epsilon(1e-10));
  }

  TEST_CASE("row scaling of a full-rank square system keeps leverage one") {
    Eigen::MatrixXd x(2, 2);
    x << 2, 0, 0, 1;
    EmbeddingMatrix m(x, {"a", "b"});
    CHECK(min_norm_leverage(m, 0) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("agrees with projection leverage and never undercuts it") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const Eigen::Index k = 2 + seed;
      const Eigen::Index p = (seed % 2 == 0) ? k + 2 : 2 * k;
      EmbeddingMatrix x = test::random_embedding(k, p, 50 + seed);
      Eigen::VectorXd lev = statistical_leverage(x).values;
      for (Eigen::Index i = 0; i < k; ++i) {
        const double mn = min_norm_leverage(x, i);
        CHECK(std::abs(mn - lev(i)) < 1e-6);
        CHECK(mn >= lev(i) - 1e-6);
      }
    }
  }

  TEST_CASE("index out of range is a parameter error") {
    EmbeddingMatrix x = test::random_embedding(3, 4, 1);
    CHECK_THROWS_AS(min_norm_leverage(x, 3), ParamError);
    CHECK_THROWS_AS(min_norm_leverage(x, -1), ParamError);
  }
}

TEST_SUITE("christoffel") {
  TEST_CASE("identity affinity") {
    AffinityMatrix omega(Eigen::MatrixXd::Identity(2, 2));
    Eigen::VectorXd c = christoffel_values(omega, 0.5);
    CHECK(c(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c(1) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("worked instance") {
    Eigen::VectorXd c = christoffel_values(worked_affinity(), 0.1);
    CHECK(c(0) == doctest::Approx(0.7666666666666667).epsilon(1e-9));
    CHECK(c(1) == doctest::Approx(0.7666666666666667).epsilon(1e-9));
    CHECK(c(2) == doctest::Approx(0.4333333333333333).epsilon(1e-9));
  }

  TEST_CASE("inverse relation k*C*S = 1 over random instances") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Eigen::Index k = 2 + (seed * 5) % 30;
      EmbeddingMatrix x = test::random_embedding(k, 2 * k, 500 + seed);
      AffinityMatrix omega = build_affinity(x);
      for (double lambda : {0.01, 1.0, 100.0}) {
        Eigen::VectorXd s = krls_direct(omega, lambda).values;
        Eigen::VectorXd c = christoffel_values(omega, lambda);
        const double dev =
            (static_cast<double>(k) * c.array() * s.array() - 1.0)
                .abs()
                .maxCoeff();
        CHECK(dev < 1e-9);
      }
    }
  }

  TEST_CASE("heterogeneous density weights") {
    // eta != 1: C_j = (eta_j/k) / [K (K + k*lambda*diag(eta)^{-1})^{-1}]_jj,
    // checked against an explicit-inverse evaluation.
    EmbeddingMatrix x = test::random_embedding(4, 8, 777);
    AffinityMatrix omega = build_affinity(x);
    Eigen::VectorXd eta(4);
    eta << 0.5, 1.0, 2.0, 4.0;
    const double lambda = 0.7;
    Eigen::VectorXd c = christoffel_values(omega, lambda, eta);

    Eigen::MatrixXd m = omega.data();
    m.diagonal() += 4.0 * lambda * eta.cwiseInverse();
    Eigen::MatrixXd hat = omega.data() * m.inverse();
    for (Eigen::Index j = 0; j < 4; ++j) {
      CHECK(c(j) ==
            doctest::Approx(eta(j) / 4.0 / hat(j, j)).epsilon(1e-9));
    }
  }

  TEST_CASE("rejects invalid eta and lambda") {
    AffinityMatrix omega(Eigen::MatrixXd::Identity(2, 2));
    CHECK_THROWS_AS(christoffel_values(omega, 0.0), ParamError);
    Eigen::VectorXd eta(2);
    eta << 1.0, -1.0;
    CHECK_THROWS_AS(christoffel_values(omega, 1.0, eta), ParamError);
  }
}

TEST_SUITE("verify_hat_equivalence") {
  TEST_CASE("identity feature matrix") {
    Eigen::MatrixXd x = Eigen::MatrixXd::Identity(3, 3);
    VerificationReport r =
        verify_hat_equivalence(EmbeddingMatrix(x, {"a", "b", "c"}), 1.0);
    CHECK(r.pass);
    CHECK(r.deviation < 1e-12);
    CHECK(r.check == "hat_equivalence");
  }

  TEST_CASE("tall and fat random instances agree within 1e-9") {
    VerificationReport tall =
        verify_hat_equivalence(test::random_embedding(8, 3, 61), 0.1);
    CHECK(tall.pass);
    CHECK(tall.k == 8);
    CHECK(tall.p == 3);

    VerificationReport fat =
        verify_hat_equivalence(test::random_embedding(3, 64, 62), 10.0);
    CHECK(fat.pass);
    CHECK(fat.deviation < 1e-9);
  }
}

TEST_SUITE("verify_lambda_monotonicity") {
  TEST_CASE("identity closed form passes") {
    AffinityMatrix omega(Eigen::MatrixXd::Identity(4, 4));
    VerificationReport r =
        verify_lambda_monotonicity(omega, {0.1, 1.0, 10.0});
    CHECK(r.pass);
  }

  TEST_CASE("worked affinity over a wider grid") {
    VerificationReport r =
        verify_lambda_monotonicity(worked_affinity(), {0.01, 0.1, 1.0, 10.0});
    CHECK(r.pass);
  }

  TEST_CASE("random instances over a 50-point log grid") {
    std::vector<double> grid(50);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      grid[g] = std::pow(10.0, -3.0 + 6.0 * static_cast<double>(g) / 49.0);
    }
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      EmbeddingMatrix x = test::random_embedding(6, 9, 300 + seed);
      VerificationReport r =
          verify_lambda_monotonicity(build_affinity(x), grid);
      CHECK(r.pass);
    }
  }

  TEST_CASE("rejects malformed grids") {
    AffinityMatrix omega(Eigen::MatrixXd::Identity(2, 2));
    CHECK_THROWS_AS(verify_lambda_monotonicity(omega, {1.0}), ParamError);
    CHECK_THROWS_AS(verify_lambda_monotonicity(omega, {1.0, 0.5}), ParamError);
    CHECK_THROWS_AS(verify_lambda_monotonicity(omega, {-1.0, 1.0}), ParamError);
  }
}

TEST_SUITE("verification_suite") {
  TEST_CASE("default grid passes clean") {
    auto reports = run_verification_suite(12345);
    CHECK(reports.size() > 20);
    for (const auto& r : reports) {
      CAPTURE(r.check);
      CAPTURE(r.seed);
      CHECK(r.pass);
      CHECK(r.pass == (r.deviation <= r.tolerance));
    }
  }

  TEST_CASE("injected corruption fails the christoffel identity") {
    auto reports = run_verification_suite(12345, 1e-3);
    bool any_fail = false;
    for (const auto& r : reports) {
      if (r.check == "christoffel_identity" && !r.pass) any_fail = true;
    }
    CHECK(any_fail);
  }

  TEST_CASE("report lines are valid json with the documented keys") {
    auto reports = run_verification_suite(7);
    for (const auto& r : reports) {
      const std::string line = report_json_line(r);
      nlohmann::json j = nlohmann::json::parse(line);
      CHECK(j.contains("check"));
      CHECK(j.contains("k"));
      CHECK(j.contains("p"));
      CHECK(j.contains("lambda"));
      CHECK(j.contains("deviation"));
      CHECK(j.contains("pass"));
      CHECK(j["pass"].is_boolean());
    }
  }
}

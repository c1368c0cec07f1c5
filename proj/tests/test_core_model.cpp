#include <doctest.h>

#include <cmath>

#include "aircomp/types.hpp"
#include "test_util.hpp"

using namespace aircomp;

TEST_CASE("validate_config accepts the reference parameter set") {
  // M = 10 users, scalar signals, unit power, legitimate noise 0.1.
  const SystemConfig cfg = SystemConfig::isotropic(10, 1, 1.0, 0.1, 0.0);
  const ValidationReport report = validate_config(cfg);
  CHECK(report.ok);
  CHECK(report.violations.empty());
}

TEST_CASE("validate_config rejects a single user") {
  const SystemConfig cfg = SystemConfig::isotropic(1, 1, 1.0, 0.1, 0.0);
  const ValidationReport report = validate_config(cfg);
  CHECK_FALSE(report.ok);
}

TEST_CASE("validate_config rejects a non-unit-trace covariance") {
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
  cov(0, 0) = 0.6;
  cov(1, 1) = 0.6;
  const SystemConfig cfg(10, 2, 1.0, cov, 0.1, 0.0);
  const ValidationReport report = validate_config(cfg);
  CHECK_FALSE(report.ok);
}

TEST_CASE("validate_config rejects asymmetric and indefinite covariances") {
  Eigen::MatrixXd asym(2, 2);
  asym << 0.5, 0.3, 0.1, 0.5;
  CHECK_FALSE(validate_config(SystemConfig(4, 2, 1.0, asym, 0.1, 0.0)).ok);

  Eigen::MatrixXd indef(2, 2);
  indef << 1.2, 0.0, 0.0, -0.2;
  CHECK_FALSE(validate_config(SystemConfig(4, 2, 1.0, indef, 0.1, 0.0)).ok);

  CHECK_FALSE(validate_config(SystemConfig::isotropic(4, 2, 0.0, 0.1, 0.0)).ok);
  CHECK_FALSE(validate_config(SystemConfig::isotropic(4, 2, 1.0, -0.1, 0.0)).ok);
}

TEST_CASE("covariance eigenvalues are stored descending") {
  Eigen::MatrixXd cov(2, 2);
  cov << 0.75, 0.0, 0.0, 0.25;
  const SystemConfig cfg(4, 2, 1.0, cov, 0.1, 0.0);
  REQUIRE(cfg.covariance_eigenvalues().size() == 2);
  CHECK(cfg.covariance_eigenvalues()[0] == doctest::Approx(0.75));
  CHECK(cfg.covariance_eigenvalues()[1] == doctest::Approx(0.25));
  CHECK_FALSE(cfg.covariance_is_isotropic());
  CHECK(SystemConfig::isotropic(4, 3, 1.0, 0.1, 0.0).covariance_is_isotropic());
}

TEST_CASE("sampled inputs sum exactly to the target") {
  const SystemConfig cfg = SystemConfig::isotropic(5, 3, 1.0, 0.1, 0.0);
  RandomStream rng(StreamKey::root(3).child("inputs"));
  for (int rep = 0; rep < 50; ++rep) {
    const InputBatch batch = sample_inputs(cfg, rng);
    REQUIRE(batch.gammas.size() == 5);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(3);
    for (const auto& gamma : batch.gammas) sum += gamma;
    CHECK((batch.target - sum).norm() == 0.0);  // same summation order, exact
  }
}

TEST_CASE("isotropic inputs match per-coordinate variance and unit power") {
  const int k = 4;
  const SystemConfig cfg = SystemConfig::isotropic(2, k, 1.0, 0.1, 0.0);
  RandomStream rng(StreamKey::root(11).child("inputs"));
  const int n = 100000;
  double coord_sq = 0.0, norm_sq = 0.0, cross = 0.0;
  for (int i = 0; i < n; ++i) {
    const InputBatch batch = sample_inputs(cfg, rng);
    coord_sq += batch.gammas[0][0] * batch.gammas[0][0];
    norm_sq += batch.gammas[0].squaredNorm();
    cross += batch.gammas[0][0] * batch.gammas[1][0];  // independent users
  }
  CHECK(std::abs(coord_sq / n - 1.0 / k) < 0.03 / k);
  CHECK(std::abs(norm_sq / n - 1.0) < 0.03);
  // Cross-user covariance is 0; SE of the product estimate is (1/k)/sqrt(n).
  CHECK(std::abs(cross / n) < 3.0 / (k * std::sqrt(static_cast<double>(n))));
}

TEST_CASE("sample covariance converges to the configured covariance") {
  const int k = 3;
  RandomStream spd_rng(StreamKey::root(17).child("spd"));
  const Eigen::MatrixXd cov = testing::random_unit_trace_spd(k, spd_rng);
  const SystemConfig cfg(2, k, 1.0, cov, 0.1, 0.0);
  REQUIRE(validate_config(cfg).ok);

  RandomStream rng(StreamKey::root(17).child("inputs"));
  const int n = 100000;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < n; ++i) {
    const InputBatch batch = sample_inputs(cfg, rng);
    acc += batch.gammas[0] * batch.gammas[0].transpose();
  }
  acc /= n;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      // Gaussian fourth-moment identity for the entry variance.
      const double entry_var = cov(i, i) * cov(j, j) + cov(i, j) * cov(i, j);
      const double se = std::sqrt(entry_var / n);
      CHECK(std::abs(acc(i, j) - cov(i, j)) < 5.0 * se);
    }
  }
}

TEST_CASE("sample_inputs refuses a non-positive-definite covariance") {
  Eigen::MatrixXd indef(2, 2);
  indef << 1.2, 0.0, 0.0, -0.2;
  const SystemConfig cfg(4, 2, 1.0, indef, 0.1, 0.0);
  RandomStream rng(StreamKey::root(1));
  CHECK_THROWS_AS(sample_inputs(cfg, rng), DegenerateDesign);
}

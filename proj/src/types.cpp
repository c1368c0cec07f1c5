#include "aircomp/types.hpp"

#include <cmath>
#include <utility>

namespace aircomp {

SystemConfig::SystemConfig(int num_users, int dimension, double power_limit,
                           Eigen::MatrixXd input_covariance, double sigma_y_sq,
                           double sigma_z_sq, double sigma_h, double sigma_g)
    : num_users_(num_users),
      dimension_(dimension),
      power_limit_(power_limit),
      covariance_(std::move(input_covariance)),
      sigma_y_sq_(sigma_y_sq),
      sigma_z_sq_(sigma_z_sq),
      sigma_h_(sigma_h),
      sigma_g_(sigma_g) {
  if (covariance_.rows() == dimension_ && covariance_.cols() == dimension_ && dimension_ > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(covariance_);
    if (es.info() == Eigen::Success) {
      eigenvalues_ = es.eigenvalues().reverse();  // descending
    }
    Eigen::LLT<Eigen::MatrixXd> llt(covariance_);
    if (llt.info() == Eigen::Success) {
      cholesky_ = llt.matrixL();
      cholesky_ok_ = true;
    }
  }
}

SystemConfig SystemConfig::isotropic(int num_users, int dimension, double power_limit,
                                     double sigma_y_sq, double sigma_z_sq,
                                     double sigma_h, double sigma_g) {
  Eigen::MatrixXd cov =
      Eigen::MatrixXd::Identity(dimension, dimension) / static_cast<double>(dimension);
  return SystemConfig(num_users, dimension, power_limit, std::move(cov), sigma_y_sq,
                      sigma_z_sq, sigma_h, sigma_g);
}

bool SystemConfig::covariance_is_isotropic(double tol) const {
  if (covariance_.rows() != dimension_ || covariance_.cols() != dimension_) return false;
  const Eigen::MatrixXd iso =
      Eigen::MatrixXd::Identity(dimension_, dimension_) / static_cast<double>(dimension_);
  return (covariance_ - iso).cwiseAbs().maxCoeff() <= tol;
}

ValidationReport validate_config(const SystemConfig& cfg) {
  ValidationReport report;
  auto fail = [&report](std::string msg) {
    report.ok = false;
    report.violations.push_back(std::move(msg));
  };

  if (cfg.num_users() < 2)
    fail("num_users must be >= 2 (the artificial-noise basis has M-1 rows)");
  if (cfg.dimension() < 1) fail("dimension must be >= 1");
  if (!(cfg.power_limit() > 0.0)) fail("power_limit must be > 0");
  if (cfg.sigma_y_sq() < 0.0) fail("sigma_y_sq must be >= 0");
  if (cfg.sigma_z_sq() < 0.0) fail("sigma_z_sq must be >= 0");
  if (!(cfg.sigma_h() > 0.0)) fail("sigma_h must be > 0");
  if (!(cfg.sigma_g() > 0.0)) fail("sigma_g must be > 0");

  const Eigen::MatrixXd& cov = cfg.input_covariance();
  if (cov.rows() != cfg.dimension() || cov.cols() != cfg.dimension()) {
    fail("input_covariance must be a dimension x dimension matrix");
    return report;
  }
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    fail("input_covariance must be symmetric (tolerance 1e-12)");
  if (std::abs(cov.trace() - 1.0) > 1e-9)
    fail("input_covariance trace must be 1 (unit input power, tolerance 1e-9)");
  if (cfg.covariance_eigenvalues().size() == 0 ||
      cfg.covariance_eigenvalues().minCoeff() <= 0.0)
    fail("input_covariance must be positive definite");

  return report;
}

InputBatch sample_inputs(const SystemConfig& cfg, RandomStream& rng) {
  if (!cfg.cholesky_ok())
    throw DegenerateDesign("sample_inputs requires a positive-definite input covariance");
  const int m_users = cfg.num_users();
  const int k = cfg.dimension();

  InputBatch batch;
  batch.gammas.reserve(m_users);
  Eigen::VectorXd xi(k);
  for (int m = 0; m < m_users; ++m) {
    for (int i = 0; i < k; ++i) xi[i] = rng.normal();
    batch.gammas.emplace_back(cfg.covariance_cholesky() * xi);
  }
  // Left-to-right sum; tests rely on the exact order.
  batch.target = Eigen::VectorXd::Zero(k);
  for (const auto& gamma : batch.gammas) batch.target += gamma;
  return batch;
}

}  // namespace aircomp

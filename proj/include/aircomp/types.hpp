#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "aircomp/errors.hpp"
#include "aircomp/rng.hpp"

namespace aircomp {

// Static problem parameters: user count M, signal dimension k (equal to the
// number of channel uses, uncoded transmission), per-user power limit P,
// input covariance, receiver noise variances and Rayleigh scales.
//
// Immutable after construction. The covariance eigendecomposition and
// Cholesky factor are computed once here; scaling design and input sampling
// consume them directly. Construction never throws on out-of-contract
// values; validate_config() reports violations as a verdict.
class SystemConfig {
 public:
  SystemConfig(int num_users, int dimension, double power_limit,
               Eigen::MatrixXd input_covariance, double sigma_y_sq,
               double sigma_z_sq, double sigma_h = 1.0, double sigma_g = 1.0);

  // Convenience constructor with input covariance I/k.
  static SystemConfig isotropic(int num_users, int dimension, double power_limit,
                                double sigma_y_sq, double sigma_z_sq,
                                double sigma_h = 1.0, double sigma_g = 1.0);

  int num_users() const { return num_users_; }
  int dimension() const { return dimension_; }
  double power_limit() const { return power_limit_; }
  const Eigen::MatrixXd& input_covariance() const { return covariance_; }
  double sigma_y_sq() const { return sigma_y_sq_; }
  double sigma_z_sq() const { return sigma_z_sq_; }
  double sigma_h() const { return sigma_h_; }
  double sigma_g() const { return sigma_g_; }

  // Eigenvalues of the input covariance, sorted descending. Empty when the
  // covariance is not a square k x k matrix.
  const Eigen::VectorXd& covariance_eigenvalues() const { return eigenvalues_; }
  // Lower-triangular Cholesky factor; valid only if cholesky_ok().
  const Eigen::MatrixXd& covariance_cholesky() const { return cholesky_; }
  bool cholesky_ok() const { return cholesky_ok_; }

  bool covariance_is_isotropic(double tol = 1e-12) const;

 private:
  int num_users_;
  int dimension_;
  double power_limit_;
  Eigen::MatrixXd covariance_;
  double sigma_y_sq_;
  double sigma_z_sq_;
  double sigma_h_;
  double sigma_g_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd cholesky_;
  bool cholesky_ok_ = false;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
};

// Checks every structural invariant of a SystemConfig: M >= 2, k >= 1,
// P > 0, unit-trace symmetric positive-definite covariance, nonnegative
// noise variances, positive Rayleigh scales.
ValidationReport validate_config(const SystemConfig& cfg);

// One draw of the block channel coefficients. h is sorted ascending
// (h[0] is the weakest user); g is permuted jointly with h's sort so the
// per-user pairing survives the relabeling.
struct ChannelRealization {
  Eigen::VectorXd h;
  Eigen::VectorXd g;
};

// Pre-processed user inputs and their coordinate-wise sum.
struct InputBatch {
  std::vector<Eigen::VectorXd> gammas;
  Eigen::VectorXd target;
};

// Draws M independent zero-mean Gaussian input vectors with the configured
// covariance (Cholesky factor applied to standard normals) and forms the
// target as their exact left-to-right sum.
InputBatch sample_inputs(const SystemConfig& cfg, RandomStream& rng);

}  // namespace aircomp

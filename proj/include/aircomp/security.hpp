#pragma once

#include <memory>
#include <optional>
#include <utility>

#include "aircomp/precoding.hpp"
#include "aircomp/types.hpp"

namespace aircomp {

// A complete transmission design: signal scaling plus precoder, bound to
// the channel realization and configuration they were designed for.
// make_scheme_design enforces the scaling/precoder power coupling
// c^2 <= min_m h_m^2 (P - ||a_m||^2).
struct SchemeDesign {
  std::shared_ptr<const SystemConfig> config;
  ChannelRealization channel;
  Precoder precoder;
  double c_sq = 0.0;

  const SystemConfig& cfg() const { return *config; }
};

SchemeDesign make_scheme_design(std::shared_ptr<const SystemConfig> config,
                                ChannelRealization channel, Precoder precoder, double c_sq);
// Convenience overload copying the configuration into shared ownership.
SchemeDesign make_scheme_design(const SystemConfig& config, ChannelRealization channel,
                                Precoder precoder, double c_sq);

// Closed-form and (optionally) empirically estimated figures for one design.
struct SecurityReport {
  double d_closed = 0.0;  // MSE reachable at the legitimate receiver
  double s_closed = 0.0;  // MSE forced on the eavesdropper
  double snr = 0.0;
  std::optional<double> empirical_d;
  std::optional<double> empirical_s;
};

// MSE of the optimal estimator at the legitimate receiver:
//   D = M - c^2 M^2 trace(Sigma (c^2 M Sigma + sigma_y^2 I)^{-1} Sigma).
// Throws DegenerateDesign when the receive covariance is singular
// (c = 0 together with sigma_y^2 = 0).
double approximation_level(const SchemeDesign& design);

// MSE forced on every estimator at the eavesdropper:
//   S = M - c^2 (sum_m g_m/h_m)^2 trace(Sigma R^{-1} Sigma),
//   R = c^2 (sum_m g_m^2/h_m^2) Sigma + (||A g||^2 + sigma_z^2) I.
// A singular R means the eavesdropper receives exactly zero; S = M then.
double security_level(const SchemeDesign& design);

// Specialized levels for isotropic input covariance Sigma = I/k. Requires
// an isotropic configuration; agrees with the general evaluators to
// floating-point accuracy.
std::pair<double, double> corollary_levels(const SchemeDesign& design);

// Covariance of the effective noise seen by the eavesdropper,
//   c^2 sum_m (g_m/h_m - 1)^2 Sigma + (||A g||^2 + sigma_z^2) I,
// returned as the full matrix plus the coefficient of the identity part.
struct EffectiveNoise {
  Eigen::MatrixXd covariance;
  double identity_term = 0.0;
};
EffectiveNoise effective_noise_covariance(const SchemeDesign& design);

// Linear MMSE estimator matrices (estimate = matrix * received vector).
Eigen::MatrixXd legit_estimator_matrix(const SchemeDesign& design);
Eigen::MatrixXd eve_estimator_matrix(const SchemeDesign& design);

Eigen::VectorXd mmse_estimate_legit(const Eigen::VectorXd& y, const SchemeDesign& design);
Eigen::VectorXd mmse_estimate_eve(const Eigen::VectorXd& z, const SchemeDesign& design);

// Assembles the transmit block: column m = c h_m^{-1} gamma_m + w_m with
// fresh artificial noise W = V A. Over a noiseless channel the legitimate
// receiver then sees exactly c * target.
Eigen::MatrixXd build_transmit_matrix(const InputBatch& batch, const SchemeDesign& design,
                                      RandomStream& rng);

}  // namespace aircomp

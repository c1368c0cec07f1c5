#pragma once

#include "aircomp/types.hpp"

namespace aircomp {

enum class BoundKind {
  // Closed-form lower bound on c^2 from the largest covariance eigenvalue.
  // Exact (D equals mu) for isotropic covariances.
  thm2_closed_form,
  // Inversion of the strictly increasing per-eigenvalue bound by bisection.
  // No closed form; meets D <= mu for every positive-definite covariance.
  improved_monotone,
};

struct ScalingDesign {
  double c_sq = 0.0;
  double mu = 0.0;
  BoundKind bound_kind = BoundKind::thm2_closed_form;
  // mu == M asks for no transmission at all; flagged rather than rejected
  // so sweeps can include the limit point.
  bool degenerate = false;
};

// Signal scaling from an MSE requirement mu at the legitimate receiver,
// using the closed-form eigenvalue bound:
//   c^2 = sigma_y^2 (M - mu) / (M^2 k lambda_1^2 - M (M - mu) lambda_1).
// Throws InfeasibleDesign (carrying the floor) when mu is below
// feasible_mu_min or above M, or when the resulting c^2 exceeds h_1^2 P.
ScalingDesign scaling_from_mse(const SystemConfig& cfg, const Eigen::VectorXd& h, double mu);

// Signal scaling from the monotone per-eigenvalue bound
//   g(x) = sum_i M x / ((M / lambda_i) x + sigma_y^2 / lambda_k^2),
// solved for g(c^2) = 1 - mu/M by bisection on [0, h_1^2 P] to absolute
// tolerance 1e-12. Throws InfeasibleDesign when the target is outside the
// range of g on that bracket.
ScalingDesign scaling_improved_bound(const SystemConfig& cfg, const Eigen::VectorXd& h, double mu);

// Smallest MSE requirement reachable at full power:
//   M - h_1^2 P M^2 trace(Sigma (h_1^2 P M Sigma + sigma_y^2 I)^{-1} Sigma).
double feasible_mu_min(const SystemConfig& cfg, const Eigen::VectorXd& h);

// Receive SNR at the legitimate receiver for a signal scaling: c^2 M / sigma_y^2.
double snr_of(const SystemConfig& cfg, double c_sq);

// Inverse map snr -> c^2 = snr sigma_y^2 / M.
double c_sq_of_snr(const SystemConfig& cfg, double snr);

// Same, but rejects scalings beyond the weakest user's power (c^2 > h_1^2 P).
double c_sq_of_snr(const SystemConfig& cfg, double snr, const Eigen::VectorXd& h);

}  // namespace aircomp

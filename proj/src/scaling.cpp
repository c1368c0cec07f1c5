#include "aircomp/scaling.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace aircomp {

namespace {

double require_positive_weakest(const Eigen::VectorXd& h) {
  if (h.size() < 1 || !(h.minCoeff() > 0.0))
    throw std::invalid_argument("scaling design requires strictly positive channel gains");
  return h.minCoeff();
}

// Lower bound on the post-inversion trace term, as a function of c^2:
// g(x) = sum_i M x / ((M / lambda_i) x + sigma_y^2 / lambda_min^2).
// Strictly increasing, g(0) = 0, sup = trace(Sigma) = 1.
double monotone_bound(const SystemConfig& cfg, double x) {
  const Eigen::VectorXd& lambda = cfg.covariance_eigenvalues();
  const double m_users = cfg.num_users();
  const double lambda_min = lambda[lambda.size() - 1];
  const double noise_term = cfg.sigma_y_sq() / (lambda_min * lambda_min);
  double sum = 0.0;
  for (int i = 0; i < lambda.size(); ++i)
    sum += m_users * x / ((m_users / lambda[i]) * x + noise_term);
  return sum;
}

void check_mu_range(const SystemConfig& cfg, const Eigen::VectorXd& h, double mu) {
  const double m_users = cfg.num_users();
  if (mu > m_users) {
    std::ostringstream msg;
    msg << "MSE requirement mu = " << mu << " exceeds the prior variance M = " << m_users;
    throw InfeasibleDesign(msg.str(), feasible_mu_min(cfg, h));
  }
  const double floor = feasible_mu_min(cfg, h);
  if (mu < floor - 1e-12) {
    std::ostringstream msg;
    msg << "MSE requirement mu = " << mu << " is below the feasible floor " << floor
        << " set by the weakest user's power";
    throw InfeasibleDesign(msg.str(), floor);
  }
}

}  // namespace

ScalingDesign scaling_from_mse(const SystemConfig& cfg, const Eigen::VectorXd& h, double mu) {
  const double h1 = require_positive_weakest(h);
  check_mu_range(cfg, h, mu);

  const double m_users = cfg.num_users();
  const double k = cfg.dimension();
  const double lambda_1 = cfg.covariance_eigenvalues()[0];
  const double cap = h1 * h1 * cfg.power_limit();

  ScalingDesign design;
  design.mu = mu;
  design.bound_kind = BoundKind::thm2_closed_form;
  if (mu >= m_users) {
    design.c_sq = 0.0;
    design.degenerate = true;
    return design;
  }

  const double denom =
      m_users * m_users * k * lambda_1 * lambda_1 - m_users * (m_users - mu) * lambda_1;
  if (!(denom > 0.0))
    throw InfeasibleDesign("closed-form scaling bound degenerates (nonpositive denominator)",
                           feasible_mu_min(cfg, h));
  design.c_sq = cfg.sigma_y_sq() * (m_users - mu) / denom;
  if (design.c_sq > cap + 1e-12 * std::max(1.0, cap)) {
    std::ostringstream msg;
    msg << "required c^2 = " << design.c_sq << " exceeds the weakest user's power h_1^2 P = "
        << cap;
    throw InfeasibleDesign(msg.str(), feasible_mu_min(cfg, h));
  }
  design.c_sq = std::min(design.c_sq, cap);
  return design;
}

ScalingDesign scaling_improved_bound(const SystemConfig& cfg, const Eigen::VectorXd& h,
                                     double mu) {
  const double h1 = require_positive_weakest(h);
  const double m_users = cfg.num_users();
  if (mu > m_users)
    throw InfeasibleDesign("MSE requirement exceeds the prior variance M", feasible_mu_min(cfg, h));

  ScalingDesign design;
  design.mu = mu;
  design.bound_kind = BoundKind::improved_monotone;
  if (mu >= m_users) {
    design.c_sq = 0.0;
    design.degenerate = true;
    return design;
  }

  const double target = 1.0 - mu / m_users;
  const double cap = h1 * h1 * cfg.power_limit();
  if (monotone_bound(cfg, cap) < target) {
    // The g-implied floor, analogous to feasible_mu_min for the closed form.
    const double floor = m_users * (1.0 - monotone_bound(cfg, cap));
    std::ostringstream msg;
    msg << "MSE requirement mu = " << mu << " is below the monotone-bound floor " << floor;
    throw InfeasibleDesign(msg.str(), floor);
  }

  double lo = 0.0, hi = cap;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (monotone_bound(cfg, mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  design.c_sq = hi;  // upper end of the bracket keeps g(c^2) >= target
  return design;
}

double feasible_mu_min(const SystemConfig& cfg, const Eigen::VectorXd& h) {
  const double h1 = require_positive_weakest(h);
  const double m_users = cfg.num_users();
  const double x = h1 * h1 * cfg.power_limit();
  const Eigen::MatrixXd& cov = cfg.input_covariance();
  const int k = cfg.dimension();

  const Eigen::MatrixXd inner =
      x * m_users * cov + cfg.sigma_y_sq() * Eigen::MatrixXd::Identity(k, k);
  if (!(x > 0.0) && !(cfg.sigma_y_sq() > 0.0)) return m_users;  // P = 0 and no noise
  Eigen::LLT<Eigen::MatrixXd> llt(inner);
  if (llt.info() != Eigen::Success) return m_users;
  const double trace_term = (cov * llt.solve(cov)).trace();
  return m_users - x * m_users * m_users * trace_term;
}

double snr_of(const SystemConfig& cfg, double c_sq) {
  if (c_sq < 0.0) throw std::invalid_argument("snr_of: c_sq must be >= 0");
  if (!(cfg.sigma_y_sq() > 0.0))
    throw DegenerateDesign("snr_of: undefined for sigma_y_sq = 0");
  return c_sq * cfg.num_users() / cfg.sigma_y_sq();
}

double c_sq_of_snr(const SystemConfig& cfg, double snr) {
  if (snr < 0.0) throw std::invalid_argument("c_sq_of_snr: snr must be >= 0");
  return snr * cfg.sigma_y_sq() / cfg.num_users();
}

double c_sq_of_snr(const SystemConfig& cfg, double snr, const Eigen::VectorXd& h) {
  const double h1 = require_positive_weakest(h);
  const double c_sq = c_sq_of_snr(cfg, snr);
  const double cap = h1 * h1 * cfg.power_limit();
  if (c_sq > cap + 1e-12 * std::max(1.0, cap)) {
    std::ostringstream msg;
    msg << "snr = " << snr << " requires c^2 = " << c_sq
        << " beyond the weakest user's power h_1^2 P = " << cap;
    throw InfeasibleDesign(msg.str());
  }
  return std::min(c_sq, cap);
}

}  // namespace aircomp

#include "aircomp/security.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "aircomp/scaling.hpp"

namespace aircomp {

namespace {

// Relative threshold below which a receive covariance counts as singular.
constexpr double kSingularTol = 1e-12;

// Solves cov * X = rhs for symmetric positive-semidefinite cov, throwing
// DegenerateDesign when cov is singular at the relative threshold.
Eigen::MatrixXd spd_solve(const Eigen::MatrixXd& cov, const Eigen::MatrixXd& rhs,
                          const char* what) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
  const Eigen::VectorXd d = ldlt.vectorD();
  const double dmax = d.cwiseAbs().maxCoeff();
  if (ldlt.info() != Eigen::Success || !(dmax > 0.0) ||
      d.minCoeff() <= kSingularTol * dmax)
    throw DegenerateDesign(what);
  return ldlt.solve(rhs);
}

struct EveChannelSums {
  double ratio_sum = 0.0;     // sum_m g_m / h_m
  double ratio_sq_sum = 0.0;  // sum_m g_m^2 / h_m^2
};

EveChannelSums eve_channel_sums(const ChannelRealization& ch) {
  EveChannelSums sums;
  for (int m = 0; m < ch.h.size(); ++m) {
    const double r = ch.g[m] / ch.h[m];
    sums.ratio_sum += r;
    sums.ratio_sq_sum += r * r;
  }
  return sums;
}

}  // namespace

SchemeDesign make_scheme_design(std::shared_ptr<const SystemConfig> config,
                                ChannelRealization channel, Precoder precoder, double c_sq) {
  if (c_sq < 0.0) throw std::invalid_argument("scheme design: c_sq must be >= 0");
  const Eigen::VectorXd norms_sq = column_norms_sq(precoder.A);
  const double p = config->power_limit();
  double cap = std::numeric_limits<double>::infinity();
  for (int m = 0; m < channel.h.size(); ++m)
    cap = std::min(cap, channel.h[m] * channel.h[m] * (p - norms_sq[m]));
  if (c_sq > cap + 1e-9 * std::max(1.0, std::abs(cap))) {
    std::ostringstream msg;
    msg << "scheme design violates the power coupling: c^2 = " << c_sq
        << " > min_m h_m^2 (P - ||a_m||^2) = " << cap;
    throw InfeasibleDesign(msg.str());
  }
  return SchemeDesign{std::move(config), std::move(channel), std::move(precoder), c_sq};
}

SchemeDesign make_scheme_design(const SystemConfig& config, ChannelRealization channel,
                                Precoder precoder, double c_sq) {
  return make_scheme_design(std::make_shared<const SystemConfig>(config), std::move(channel),
                            std::move(precoder), c_sq);
}

double approximation_level(const SchemeDesign& design) {
  const SystemConfig& cfg = design.cfg();
  const double m_users = cfg.num_users();
  const Eigen::MatrixXd& cov = cfg.input_covariance();
  const int k = cfg.dimension();

  const Eigen::MatrixXd receive_cov =
      design.c_sq * m_users * cov + cfg.sigma_y_sq() * Eigen::MatrixXd::Identity(k, k);
  const Eigen::MatrixXd solved =
      spd_solve(receive_cov, cov, "approximation level undefined: zero signal and zero noise");
  return m_users - design.c_sq * m_users * m_users * (cov * solved).trace();
}

double security_level(const SchemeDesign& design) {
  const SystemConfig& cfg = design.cfg();
  const double m_users = cfg.num_users();
  const Eigen::MatrixXd& cov = cfg.input_covariance();
  const int k = cfg.dimension();

  const EveChannelSums sums = eve_channel_sums(design.channel);
  const double noise_diag =
      realized_noise_power_at_eve(design.precoder.A, design.channel.g) + cfg.sigma_z_sq();
  const Eigen::MatrixXd receive_cov = design.c_sq * sums.ratio_sq_sum * cov +
                                      noise_diag * Eigen::MatrixXd::Identity(k, k);
  Eigen::MatrixXd solved;
  try {
    solved = spd_solve(receive_cov, cov, "singular eavesdropper covariance");
  } catch (const DegenerateDesign&) {
    // The eavesdropper receives exactly zero; its best estimator is the
    // prior mean, so the full prior variance remains.
    return m_users;
  }
  const double ratio_factor = sums.ratio_sum * sums.ratio_sum;
  return m_users - design.c_sq * ratio_factor * (cov * solved).trace();
}

std::pair<double, double> corollary_levels(const SchemeDesign& design) {
  const SystemConfig& cfg = design.cfg();
  if (!cfg.covariance_is_isotropic())
    throw std::invalid_argument("corollary_levels requires an isotropic input covariance");
  const double m_users = cfg.num_users();
  const double k = cfg.dimension();
  const double c_sq = design.c_sq;

  const double d_denom = c_sq * m_users + k * cfg.sigma_y_sq();
  const double d = (d_denom > 0.0) ? m_users - c_sq * m_users * m_users / d_denom : m_users;

  const EveChannelSums sums = eve_channel_sums(design.channel);
  const double noise = realized_noise_power_at_eve(design.precoder.A, design.channel.g) +
                       cfg.sigma_z_sq();
  const double s_denom = c_sq * sums.ratio_sq_sum + k * noise;
  const double s =
      (s_denom > 0.0) ? m_users - c_sq * sums.ratio_sum * sums.ratio_sum / s_denom : m_users;
  return {d, s};
}

EffectiveNoise effective_noise_covariance(const SchemeDesign& design) {
  const SystemConfig& cfg = design.cfg();
  const int k = cfg.dimension();
  double mismatch = 0.0;
  for (int m = 0; m < design.channel.h.size(); ++m) {
    const double r = design.channel.g[m] / design.channel.h[m] - 1.0;
    mismatch += r * r;
  }
  EffectiveNoise noise;
  noise.identity_term =
      realized_noise_power_at_eve(design.precoder.A, design.channel.g) + cfg.sigma_z_sq();
  noise.covariance = design.c_sq * mismatch * cfg.input_covariance() +
                     noise.identity_term * Eigen::MatrixXd::Identity(k, k);
  return noise;
}

Eigen::MatrixXd legit_estimator_matrix(const SchemeDesign& design) {
  const SystemConfig& cfg = design.cfg();
  const double m_users = cfg.num_users();
  const Eigen::MatrixXd& cov = cfg.input_covariance();
  const int k = cfg.dimension();
  const double c = std::sqrt(design.c_sq);

  if (design.c_sq == 0.0 && cfg.sigma_y_sq() > 0.0) return Eigen::MatrixXd::Zero(k, k);
  const Eigen::MatrixXd receive_cov =
      design.c_sq * m_users * cov + cfg.sigma_y_sq() * Eigen::MatrixXd::Identity(k, k);
  // estimate = Cov[s,y] Cov[y]^{-1} y; solve on the transposed system.
  const Eigen::MatrixXd solved = spd_solve(
      receive_cov, c * m_users * cov, "legitimate receive covariance is singular");
  return solved.transpose();
}

Eigen::MatrixXd eve_estimator_matrix(const SchemeDesign& design) {
  const SystemConfig& cfg = design.cfg();
  const Eigen::MatrixXd& cov = cfg.input_covariance();
  const int k = cfg.dimension();
  const double c = std::sqrt(design.c_sq);

  const EveChannelSums sums = eve_channel_sums(design.channel);
  const double noise_diag =
      realized_noise_power_at_eve(design.precoder.A, design.channel.g) + cfg.sigma_z_sq();
  if (design.c_sq == 0.0 && noise_diag > 0.0) return Eigen::MatrixXd::Zero(k, k);
  const Eigen::MatrixXd receive_cov =
      design.c_sq * sums.ratio_sq_sum * cov + noise_diag * Eigen::MatrixXd::Identity(k, k);
  const Eigen::MatrixXd solved = spd_solve(receive_cov, c * sums.ratio_sum * cov,
                                           "eavesdropper receive covariance is singular");
  return solved.transpose();
}

Eigen::VectorXd mmse_estimate_legit(const Eigen::VectorXd& y, const SchemeDesign& design) {
  return legit_estimator_matrix(design) * y;
}

Eigen::VectorXd mmse_estimate_eve(const Eigen::VectorXd& z, const SchemeDesign& design) {
  return eve_estimator_matrix(design) * z;
}

Eigen::MatrixXd build_transmit_matrix(const InputBatch& batch, const SchemeDesign& design,
                                      RandomStream& rng) {
  const SystemConfig& cfg = design.cfg();
  const int m_users = cfg.num_users();
  const int n = cfg.dimension();  // uncoded: block length equals input dimension
  if (static_cast<int>(batch.gammas.size()) != m_users)
    throw std::invalid_argument("build_transmit_matrix: batch size must equal num_users");

  const double c = std::sqrt(design.c_sq);
  Eigen::MatrixXd x = sample_artificial_noise(design.precoder.A, n, rng);
  for (int m = 0; m < m_users; ++m) x.col(m) += (c / design.channel.h[m]) * batch.gammas[m];
  return x;
}

}  // namespace aircomp

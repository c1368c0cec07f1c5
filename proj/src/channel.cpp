#include "aircomp/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace aircomp {

namespace {
constexpr double kPi = std::numbers::pi;

// Sorts (h, g) pairs by h ascending. Stable so equal gains keep their draw
// order, which keeps resampling bit-reproducible.
ChannelRealization sorted_by_h(Eigen::VectorXd h, Eigen::VectorXd g) {
  const int m = static_cast<int>(h.size());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&h](int a, int b) { return h[a] < h[b]; });
  ChannelRealization ch{Eigen::VectorXd(m), Eigen::VectorXd(m)};
  for (int i = 0; i < m; ++i) {
    ch.h[i] = h[order[i]];
    ch.g[i] = g[order[i]];
  }
  return ch;
}
}  // namespace

double rayleigh_mean_minus_sd(double scale) {
  return scale * (std::sqrt(kPi) - std::sqrt(4.0 - kPi)) / std::sqrt(2.0);
}

double rayleigh_mean_minus_sd_quarter(double scale) {
  return 0.25 * rayleigh_mean_minus_sd(scale);
}

double rayleigh_inverse_cdf(double u, double scale) {
  if (!(u >= 0.0 && u < 1.0)) throw std::domain_error("rayleigh_inverse_cdf: u must be in [0, 1)");
  if (!(scale > 0.0)) throw std::domain_error("rayleigh_inverse_cdf: scale must be > 0");
  return scale * std::sqrt(-2.0 * std::log1p(-u));
}

ChannelRealization sample_channel(const SystemConfig& cfg, const ChannelProtocol& proto,
                                  RandomStream& rng) {
  const int m = cfg.num_users();
  Eigen::VectorXd h(m), g(m);

  if (proto.mode == ChannelMode::fixed_weakest) {
    if (!(proto.h1_fixed > 0.0))
      throw std::invalid_argument("fixed_weakest mode requires h1_fixed > 0");
    h[0] = proto.h1_fixed;
    // Truncated Rayleigh on [h1_fixed, inf): map a uniform draw onto the
    // restricted CDF range [F(h1_fixed), 1) before inverting.
    const double s = cfg.sigma_h();
    const double f_lo = -std::expm1(-proto.h1_fixed * proto.h1_fixed / (2.0 * s * s));
    for (int i = 1; i < m; ++i) {
      const double u = f_lo + rng.uniform01() * (1.0 - f_lo);
      h[i] = rayleigh_inverse_cdf(u, s);
    }
  } else {
    for (int i = 0; i < m; ++i) h[i] = rng.rayleigh(cfg.sigma_h());
  }
  for (int i = 0; i < m; ++i) g[i] = rng.rayleigh(cfg.sigma_g());

  return sorted_by_h(std::move(h), std::move(g));
}

ChannelRealization make_channel_realization(Eigen::VectorXd h, Eigen::VectorXd g) {
  if (h.size() != g.size())
    throw std::invalid_argument("channel realization: h and g must have equal length");
  if (h.size() < 2) throw std::invalid_argument("channel realization: need at least 2 users");
  if (!(h.minCoeff() > 0.0))
    throw std::invalid_argument("channel realization: all entries of h must be > 0");
  return sorted_by_h(std::move(h), std::move(g));
}

ChannelOutputs transmit(const Eigen::MatrixXd& X, const ChannelRealization& ch,
                        const SystemConfig& cfg, RandomStream& rng) {
  if (X.cols() != ch.h.size() || X.cols() != cfg.num_users())
    throw std::invalid_argument("transmit: X must have one column per user");

  const int n = static_cast<int>(X.rows());
  ChannelOutputs out{X * ch.h, X * ch.g};
  const double sd_y = std::sqrt(cfg.sigma_y_sq());
  const double sd_z = std::sqrt(cfg.sigma_z_sq());
  for (int i = 0; i < n; ++i) out.y[i] += sd_y * rng.normal();
  for (int i = 0; i < n; ++i) out.z[i] += sd_z * rng.normal();
  return out;
}

}  // namespace aircomp

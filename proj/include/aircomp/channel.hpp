#pragma once

#include "aircomp/types.hpp"

namespace aircomp {

enum class ChannelMode {
  // All coefficients drawn i.i.d. Rayleigh.
  free_rayleigh,
  // Weakest legitimate gain pinned to h1_fixed; the remaining legitimate
  // gains are drawn from the Rayleigh distribution truncated to
  // [h1_fixed, inf) by inverse-CDF on the restricted uniform range.
  fixed_weakest,
};

// One-sigma-below-mean point of a Rayleigh distribution:
// scale * (sqrt(pi) - sqrt(4 - pi)) / sqrt(2). Default pin for the weakest
// user's gain in fixed_weakest sweeps.
double rayleigh_mean_minus_sd(double scale = 1.0);
// Quarter-scale variant of the same pin, selectable in configs for
// comparison runs.
double rayleigh_mean_minus_sd_quarter(double scale = 1.0);

struct ChannelProtocol {
  ChannelMode mode = ChannelMode::free_rayleigh;
  double h1_fixed = 0.0;  // used only in fixed_weakest mode
};

// Received blocks at the legitimate receiver and the eavesdropper.
struct ChannelOutputs {
  Eigen::VectorXd y;
  Eigen::VectorXd z;
};

// Inverse CDF of the Rayleigh distribution: scale * sqrt(-2 ln(1-u)).
// Strictly increasing on [0, 1); throws std::domain_error outside.
double rayleigh_inverse_cdf(double u, double scale);

// Draws one block-fading realization under the protocol. Legitimate and
// eavesdropper coefficients are sorted jointly by h ascending.
ChannelRealization sample_channel(const SystemConfig& cfg, const ChannelProtocol& proto,
                                  RandomStream& rng);

// Builds a realization from explicit coefficient vectors (joint sort by h,
// positivity check on h). Used when channels are supplied by hand.
ChannelRealization make_channel_realization(Eigen::VectorXd h, Eigen::VectorXd g);

// Applies the additive-noise multiple-access channel to a transmit matrix:
// y = X h + n_y, z = X g + n_z with independent Gaussian noise of variance
// sigma_y_sq and sigma_z_sq per coordinate.
ChannelOutputs transmit(const Eigen::MatrixXd& X, const ChannelRealization& ch,
                        const SystemConfig& cfg, RandomStream& rng);

}  // namespace aircomp

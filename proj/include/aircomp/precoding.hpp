#pragma once

#include <optional>
#include <string_view>

#include "aircomp/types.hpp"

namespace aircomp {

enum class PrecoderMethod {
  rre_unknown_csi,  // reduced-row-echelon basis, power allocated for expected eavesdropper noise
  rre_known_csi,    // reduced-row-echelon basis, power allocated against the realized g
  naive_svd,        // orthonormal null-space basis with one common power scalar
  no_noise,         // A = 0 baseline
};

std::string_view to_string(PrecoderMethod method);
std::optional<PrecoderMethod> precoder_method_from_string(std::string_view name);

// Artificial-noise precoder. Rows of A span (a subset of) the null space of
// the legitimate channel vector, so A h = 0. d_sq holds the squared row
// scalings of the reduced-row-echelon construction; it is zero-filled for
// the baselines where row scalings do not apply.
struct Precoder {
  Eigen::MatrixXd A;     // (M-1) x M
  Eigen::VectorXd d_sq;  // length M-1, entries >= 0
  PrecoderMethod method = PrecoderMethod::no_noise;
};

// Per-user artificial-noise power budget: entry m = P - c^2 / h_m^2.
struct NoiseBudget {
  Eigen::VectorXd per_user;
};

// Reduced-row-echelon null-space basis of h: row i is the i-th unit vector
// on the first M-1 coordinates with last coordinate -h_i / h_M.
Eigen::MatrixXd build_rre_basis(const Eigen::VectorXd& h);

// Power left for artificial noise per user under signal scaling c^2.
// Throws InfeasibleDesign naming the violating user when any entry would be
// negative (beyond a 1e-12 rounding allowance, which is clamped to zero).
NoiseBudget noise_budget(const SystemConfig& cfg, const Eigen::VectorXd& h, double c_sq);

// Row-scaling allocation maximizing the expected eavesdropper noise power
// E[||A g||^2] when g is unknown (only its Rayleigh scale enters, and only
// as a positive factor, so it drops out of the argmax). Exact solution of
// the box-plus-one-coupling-row linear program by ratio-greedy filling.
Precoder optimize_unknown_csi(const Eigen::VectorXd& h, const NoiseBudget& budget);

// Same program with the realized ||A g||^2 as objective, for known
// eavesdropper coefficients g.
Precoder optimize_known_csi(const Eigen::VectorXd& h, const Eigen::VectorXd& g,
                            const NoiseBudget& budget);

// Baseline: orthonormal null-space basis from the SVD of h, scaled by the
// single largest scalar that fits every user's budget.
Precoder naive_svd_precoder(const Eigen::VectorXd& h, const NoiseBudget& budget);

// Baseline: no artificial noise at all.
Precoder no_noise_precoder(int num_users);

// Dispatch by method. g is required only for rre_known_csi.
Precoder make_precoder(PrecoderMethod method, const Eigen::VectorXd& h,
                       const Eigen::VectorXd* g, const NoiseBudget& budget);

// Closed form of E[||A g||^2] over g ~ i.i.d. Rayleigh(sigma_g) for a
// reduced-row-echelon precoder with squared row scalings d_sq:
// sigma_g^2 * sum_m d_m^2 (2 h_m^2/h_M^2 - pi h_m/h_M + 2).
double expected_noise_power_at_eve(const Eigen::VectorXd& h, const Eigen::VectorXd& d_sq,
                                   double sigma_g);

// ||A g||^2 for one realized g.
double realized_noise_power_at_eve(const Eigen::MatrixXd& A, const Eigen::VectorXd& g);

// Draws the artificial-noise block W = V A with V an n x (M-1) matrix of
// i.i.d. Gaussian entries of variance 1/n, so E[||w_m||^2] = ||a_m||^2
// independent of the block length.
Eigen::MatrixXd sample_artificial_noise(const Eigen::MatrixXd& A, int n, RandomStream& rng);

// Squared column norms ||a_m||^2 of a precoding matrix.
Eigen::VectorXd column_norms_sq(const Eigen::MatrixXd& A);

}  // namespace aircomp

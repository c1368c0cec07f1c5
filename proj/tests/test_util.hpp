#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "aircomp/rng.hpp"

namespace aircomp::testing {

// Random symmetric positive-definite matrix with unit trace: random
// orthogonal basis (QR of a Gaussian matrix) with positive eigenvalues
// normalized to sum 1.
inline Eigen::MatrixXd random_unit_trace_spd(int k, RandomStream& rng,
                                             double min_eigenvalue_gap = 0.05) {
  Eigen::MatrixXd gauss(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) gauss(i, j) = rng.normal();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
  const Eigen::MatrixXd q = qr.householderQ();

  Eigen::VectorXd eig(k);
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    eig[i] = min_eigenvalue_gap + rng.uniform01();
    sum += eig[i];
  }
  eig /= sum;
  Eigen::MatrixXd spd = q * eig.asDiagonal() * q.transpose();
  // Exact symmetry; the eigen-normalization keeps the trace at 1 up to
  // rounding, which the 1e-9 config tolerance absorbs.
  return 0.5 * (spd + spd.transpose());
}

// Exhaustive LP oracle for max obj.t over {0 <= t <= box, w.t <= coupling},
// independent of the greedy implementation. Every vertex of this polytope
// has at most one coordinate strictly between its bounds, so enumerating
// box-bound patterns plus one fractional coordinate covers the optimum.
inline double lp_vertex_oracle(const Eigen::VectorXd& obj, const Eigen::VectorXd& box,
                               const Eigen::VectorXd& w, double coupling,
                               Eigen::VectorXd* argmax = nullptr) {
  const int q = static_cast<int>(obj.size());
  double best = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_t = Eigen::VectorXd::Zero(q);

  const auto consider = [&](const Eigen::VectorXd& t) {
    const double value = obj.dot(t);
    if (value > best) {
      best = value;
      best_t = t;
    }
  };

  for (unsigned mask = 0; mask < (1u << q); ++mask) {
    Eigen::VectorXd t = Eigen::VectorXd::Zero(q);
    double used = 0.0;
    for (int i = 0; i < q; ++i) {
      if (mask & (1u << i)) {
        t[i] = box[i];
        used += w[i] * box[i];
      }
    }
    if (used <= coupling + 1e-15) consider(t);
    for (int j = 0; j < q; ++j) {
      if (mask & (1u << j)) continue;
      const double room = (coupling - used) / w[j];
      if (room <= 0.0) continue;
      Eigen::VectorXd tf = t;
      tf[j] = std::min(box[j], room);
      consider(tf);
    }
  }
  if (argmax) *argmax = best_t;
  return best;
}

// Uniform random point of the same polytope: uniform in the boxes, then
// scaled down onto the coupling constraint if needed.
inline Eigen::VectorXd random_feasible_point(const Eigen::VectorXd& box,
                                             const Eigen::VectorXd& w, double coupling,
                                             RandomStream& rng) {
  const int q = static_cast<int>(box.size());
  Eigen::VectorXd t(q);
  for (int i = 0; i < q; ++i) t[i] = rng.uniform01() * box[i];
  const double used = w.dot(t);
  if (used > coupling) t *= (coupling > 0.0 ? coupling / used : 0.0);
  return t;
}

inline Eigen::VectorXd random_rayleigh_vector(int size, double scale, RandomStream& rng) {
  Eigen::VectorXd v(size);
  for (int i = 0; i < size; ++i) v[i] = rng.rayleigh(scale);
  return v;
}

}  // namespace aircomp::testing

#include "aircomp/precoding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace aircomp {

namespace {
constexpr double kPi = std::numbers::pi;

void require_valid_h(const Eigen::VectorXd& h) {
  if (h.size() < 2) throw std::invalid_argument("precoding requires at least 2 users");
  if (!(h.minCoeff() > 0.0)) throw std::invalid_argument("all entries of h must be > 0");
}

// Exact maximizer of obj . t over { 0 <= t <= box, w . t <= coupling },
// all obj >= 0, w > 0. Continuous knapsack: fill boxes in descending
// obj/w ratio, truncating the last variable at the coupling row. Ties
// break toward the lower index; zero-objective and zero-box variables are
// left at zero.
Eigen::VectorXd solve_box_coupled_lp(const Eigen::VectorXd& obj, const Eigen::VectorXd& box,
                                     const Eigen::VectorXd& w, double coupling) {
  const int q = static_cast<int>(obj.size());
  std::vector<int> order(q);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ra = obj[a] / w[a];
    const double rb = obj[b] / w[b];
    if (ra != rb) return ra > rb;
    return a < b;
  });

  Eigen::VectorXd t = Eigen::VectorXd::Zero(q);
  double remaining = std::max(coupling, 0.0);
  for (int idx : order) {
    if (obj[idx] <= 0.0 || box[idx] <= 0.0) continue;
    if (remaining <= 0.0) break;
    const double take = std::min(box[idx], remaining / w[idx]);
    t[idx] = take;
    remaining -= take * w[idx];
  }
  return t;
}

Precoder scaled_rre_precoder(const Eigen::VectorXd& h, const Eigen::VectorXd& d_sq,
                             PrecoderMethod method) {
  Precoder p;
  p.method = method;
  p.d_sq = d_sq;
  p.A = d_sq.cwiseSqrt().asDiagonal() * build_rre_basis(h);
  return p;
}
}  // namespace

std::string_view to_string(PrecoderMethod method) {
  switch (method) {
    case PrecoderMethod::rre_unknown_csi: return "rre_unknown_csi";
    case PrecoderMethod::rre_known_csi: return "rre_known_csi";
    case PrecoderMethod::naive_svd: return "naive_svd";
    case PrecoderMethod::no_noise: return "no_noise";
  }
  return "unknown";
}

std::optional<PrecoderMethod> precoder_method_from_string(std::string_view name) {
  if (name == "rre_unknown_csi") return PrecoderMethod::rre_unknown_csi;
  if (name == "rre_known_csi") return PrecoderMethod::rre_known_csi;
  if (name == "naive_svd") return PrecoderMethod::naive_svd;
  if (name == "no_noise") return PrecoderMethod::no_noise;
  return std::nullopt;
}

Eigen::MatrixXd build_rre_basis(const Eigen::VectorXd& h) {
  require_valid_h(h);
  const int m = static_cast<int>(h.size());
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(m - 1, m);
  for (int i = 0; i < m - 1; ++i) {
    basis(i, i) = 1.0;
    basis(i, m - 1) = -h[i] / h[m - 1];
  }
  return basis;
}

NoiseBudget noise_budget(const SystemConfig& cfg, const Eigen::VectorXd& h, double c_sq) {
  const int m = static_cast<int>(h.size());
  const double p = cfg.power_limit();
  // Rounding allowance for designs sitting exactly on the power boundary.
  const double tol = 1e-12 * std::max(1.0, p);

  NoiseBudget budget{Eigen::VectorXd(m)};
  for (int i = 0; i < m; ++i) {
    const double b = p - c_sq / (h[i] * h[i]);
    if (b < -tol) {
      std::ostringstream msg;
      msg << "infeasible signal scaling: c^2 = " << c_sq << " exceeds h_" << (i + 1)
          << "^2 * P = " << h[i] * h[i] * p << " (user " << (i + 1) << ")";
      throw InfeasibleDesign(msg.str(), std::numeric_limits<double>::quiet_NaN(), i);
    }
    budget.per_user[i] = std::max(b, 0.0);
  }
  return budget;
}

Precoder optimize_unknown_csi(const Eigen::VectorXd& h, const NoiseBudget& budget) {
  require_valid_h(h);
  const int m = static_cast<int>(h.size());
  const double h_last = h[m - 1];

  Eigen::VectorXd obj(m - 1), w(m - 1);
  for (int i = 0; i < m - 1; ++i) {
    const double r = h[i] / h_last;
    obj[i] = r * r - 0.5 * kPi * r + 1.0;  // > 0 for every r
    w[i] = r * r;
  }
  const Eigen::VectorXd d_sq =
      solve_box_coupled_lp(obj, budget.per_user.head(m - 1), w, budget.per_user[m - 1]);
  return scaled_rre_precoder(h, d_sq, PrecoderMethod::rre_unknown_csi);
}

Precoder optimize_known_csi(const Eigen::VectorXd& h, const Eigen::VectorXd& g,
                            const NoiseBudget& budget) {
  require_valid_h(h);
  if (g.size() != h.size())
    throw std::invalid_argument("optimize_known_csi: g must have the same length as h");
  const int m = static_cast<int>(h.size());
  const double h_last = h[m - 1];
  const double g_last = g[m - 1];

  Eigen::VectorXd obj(m - 1), w(m - 1);
  for (int i = 0; i < m - 1; ++i) {
    const double r = h[i] / h_last;
    const double mismatch = r * g_last - g[i];
    obj[i] = mismatch * mismatch;  // zero exactly when g_i/g_M = h_i/h_M
    w[i] = r * r;
  }
  const Eigen::VectorXd d_sq =
      solve_box_coupled_lp(obj, budget.per_user.head(m - 1), w, budget.per_user[m - 1]);
  return scaled_rre_precoder(h, d_sq, PrecoderMethod::rre_known_csi);
}

Precoder naive_svd_precoder(const Eigen::VectorXd& h, const NoiseBudget& budget) {
  require_valid_h(h);
  const int m = static_cast<int>(h.size());

  // Right singular vectors of the 1 x M channel row with zero singular
  // value form an orthonormal null-space basis.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(h.transpose(), Eigen::ComputeFullV);
  Eigen::MatrixXd basis(m - 1, m);
  for (int i = 0; i < m - 1; ++i) basis.row(i) = svd.matrixV().col(i + 1).transpose();

  // Sign convention: first entry of nonnegligible magnitude made positive.
  for (int i = 0; i < m - 1; ++i) {
    for (int j = 0; j < m; ++j) {
      if (std::abs(basis(i, j)) > 1e-12) {
        if (basis(i, j) < 0.0) basis.row(i) = -basis.row(i);
        break;
      }
    }
  }

  const Eigen::VectorXd norms_sq = column_norms_sq(basis);
  double beta_sq = std::numeric_limits<double>::infinity();
  for (int j = 0; j < m; ++j) {
    if (norms_sq[j] > 0.0) beta_sq = std::min(beta_sq, budget.per_user[j] / norms_sq[j]);
  }
  if (!std::isfinite(beta_sq)) beta_sq = 0.0;

  Precoder p;
  p.method = PrecoderMethod::naive_svd;
  p.d_sq = Eigen::VectorXd::Zero(m - 1);
  p.A = std::sqrt(beta_sq) * basis;
  return p;
}

Precoder no_noise_precoder(int num_users) {
  if (num_users < 2) throw std::invalid_argument("precoding requires at least 2 users");
  Precoder p;
  p.method = PrecoderMethod::no_noise;
  p.d_sq = Eigen::VectorXd::Zero(num_users - 1);
  p.A = Eigen::MatrixXd::Zero(num_users - 1, num_users);
  return p;
}

Precoder make_precoder(PrecoderMethod method, const Eigen::VectorXd& h,
                       const Eigen::VectorXd* g, const NoiseBudget& budget) {
  switch (method) {
    case PrecoderMethod::rre_unknown_csi: return optimize_unknown_csi(h, budget);
    case PrecoderMethod::rre_known_csi:
      if (g == nullptr)
        throw std::invalid_argument("rre_known_csi requires eavesdropper coefficients g");
      return optimize_known_csi(h, *g, budget);
    case PrecoderMethod::naive_svd: return naive_svd_precoder(h, budget);
    case PrecoderMethod::no_noise: return no_noise_precoder(static_cast<int>(h.size()));
  }
  throw std::invalid_argument("unknown precoder method");
}

double expected_noise_power_at_eve(const Eigen::VectorXd& h, const Eigen::VectorXd& d_sq,
                                   double sigma_g) {
  require_valid_h(h);
  const int m = static_cast<int>(h.size());
  if (d_sq.size() != m - 1)
    throw std::invalid_argument("expected_noise_power_at_eve: d_sq must have length M-1");
  const double h_last = h[m - 1];
  double sum = 0.0;
  for (int i = 0; i < m - 1; ++i) {
    const double r = h[i] / h_last;
    sum += d_sq[i] * (2.0 * r * r - kPi * r + 2.0);
  }
  return sigma_g * sigma_g * sum;
}

double realized_noise_power_at_eve(const Eigen::MatrixXd& A, const Eigen::VectorXd& g) {
  if (A.cols() != g.size())
    throw std::invalid_argument("realized_noise_power_at_eve: A and g shapes disagree");
  return (A * g).squaredNorm();
}

Eigen::MatrixXd sample_artificial_noise(const Eigen::MatrixXd& A, int n, RandomStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_artificial_noise: n must be >= 1");
  const int rows = static_cast<int>(A.rows());
  // Entry variance 1/n keeps E[||w_m||^2] = ||a_m||^2 for every block length.
  const double sd = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::MatrixXd v(n, rows);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < rows; ++j) v(i, j) = sd * rng.normal();
  return v * A;
}

Eigen::VectorXd column_norms_sq(const Eigen::MatrixXd& A) {
  return A.colwise().squaredNorm().transpose();
}

}  // namespace aircomp

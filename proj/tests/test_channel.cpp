#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "aircomp/channel.hpp"

using namespace aircomp;

namespace {
constexpr double kPi = std::numbers::pi;

double ks_statistic(std::vector<double> sample, double (*cdf)(double, const double*),
                    const double* params) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i], params);
    d = std::max(d, std::abs((i + 1) / n - f));
    d = std::max(d, std::abs(i / n - f));
  }
  return d;
}

// params = {scale, lower_truncation}
double truncated_rayleigh_cdf(double x, const double* params) {
  const double s = params[0], a = params[1];
  if (x < a) return 0.0;
  const double num = std::exp(-a * a / (2 * s * s)) - std::exp(-x * x / (2 * s * s));
  const double den = std::exp(-a * a / (2 * s * s));
  return num / den;
}
}  // namespace

TEST_CASE("rayleigh inverse CDF analytic points") {
  CHECK(rayleigh_inverse_cdf(0.0, 1.0) == 0.0);
  CHECK(rayleigh_inverse_cdf(1.0 - std::exp(-0.5), 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rayleigh_inverse_cdf(1.0 - std::exp(-2.0), 2.0) == doctest::Approx(4.0).epsilon(1e-12));
  SUBCASE("strictly increasing in u") {
    double prev = -1.0;
    for (double u = 0.0; u < 1.0; u += 0.01) {
      const double x = rayleigh_inverse_cdf(u, 1.3);
      CHECK(x > prev);
      prev = x;
    }
  }
  CHECK_THROWS_AS(rayleigh_inverse_cdf(1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(rayleigh_inverse_cdf(-0.1, 1.0), std::domain_error);
  CHECK_THROWS_AS(rayleigh_inverse_cdf(0.5, 0.0), std::domain_error);
}

TEST_CASE("pinned weakest gain sits one sd below the Rayleigh mean") {
  const double pin = rayleigh_mean_minus_sd();
  CHECK(pin == doctest::Approx((std::sqrt(kPi) - std::sqrt(4.0 - kPi)) / std::sqrt(2.0)));
  const double mean = std::sqrt(kPi / 2.0);
  const double sd = std::sqrt(2.0 - kPi / 2.0);
  CHECK(pin == doctest::Approx(mean - sd).epsilon(1e-12));
  CHECK(rayleigh_mean_minus_sd_quarter() == doctest::Approx(pin / 4.0));
}

TEST_CASE("fixed_weakest pins h_1 exactly and keeps the rest above it") {
  const SystemConfig cfg = SystemConfig::isotropic(10, 1, 1.0, 0.1, 0.0);
  const ChannelProtocol proto{ChannelMode::fixed_weakest, rayleigh_mean_minus_sd()};
  RandomStream rng(StreamKey::root(21).child("channel"));
  for (int rep = 0; rep < 200; ++rep) {
    const ChannelRealization ch = sample_channel(cfg, proto, rng);
    CHECK(ch.h[0] == proto.h1_fixed);  // exact, not approximate
    for (int m = 1; m < 10; ++m) {
      CHECK(ch.h[m] >= proto.h1_fixed);
      CHECK(ch.h[m] >= ch.h[m - 1]);
    }
  }
}

TEST_CASE("free_rayleigh moments: pooled mean and second moment") {
  const int m_users = 4;
  const SystemConfig cfg = SystemConfig::isotropic(m_users, 1, 1.0, 0.1, 0.0);
  const ChannelProtocol proto{ChannelMode::free_rayleigh, 0.0};
  RandomStream rng(StreamKey::root(22).child("channel"));
  const int draws = 25000;  // 1e5 coefficients pooled
  double h_sum = 0.0, g_sq_sum = 0.0;
  for (int i = 0; i < draws; ++i) {
    const ChannelRealization ch = sample_channel(cfg, proto, rng);
    h_sum += ch.h.sum();  // pooled mean is sort-invariant
    g_sq_sum += ch.g.squaredNorm();
  }
  const double n = static_cast<double>(draws) * m_users;
  const double mean_h = h_sum / n;
  const double rayleigh_mean = std::sqrt(kPi / 2.0);
  const double rayleigh_sd = std::sqrt(2.0 - kPi / 2.0);
  CHECK(std::abs(mean_h - rayleigh_mean) < 3.0 * rayleigh_sd / std::sqrt(n));

  const double second_g = g_sq_sum / n;
  const double se_second = 2.0 / std::sqrt(n);  // Var(g^2) = 4 sigma^4
  CHECK(std::abs(second_g - 2.0) < 3.0 * se_second);
}

TEST_CASE("truncated sampler matches the analytic truncated CDF") {
  const int m_users = 5;
  const SystemConfig cfg = SystemConfig::isotropic(m_users, 1, 1.0, 0.1, 0.0);
  const double pin = rayleigh_mean_minus_sd();
  const ChannelProtocol proto{ChannelMode::fixed_weakest, pin};
  RandomStream rng(StreamKey::root(23).child("channel"));
  std::vector<double> pooled;
  pooled.reserve(100000);
  while (pooled.size() < 100000) {
    const ChannelRealization ch = sample_channel(cfg, proto, rng);
    for (int m = 1; m < m_users; ++m) pooled.push_back(ch.h[m]);
  }
  const double params[2] = {1.0, pin};
  CHECK(ks_statistic(std::move(pooled), truncated_rayleigh_cdf, params) < 0.01);
}

TEST_CASE("sorting permutes h and g jointly") {
  // Reproduce the documented draw order (h first, then g) from the same key
  // and verify the pairing survives the sort.
  const SystemConfig cfg = SystemConfig::isotropic(6, 1, 1.0, 0.1, 0.0);
  const ChannelProtocol proto{ChannelMode::free_rayleigh, 0.0};
  const StreamKey key = StreamKey::root(24).child("channel");

  RandomStream sampler(key);
  const ChannelRealization ch = sample_channel(cfg, proto, sampler);

  RandomStream replay(key);
  std::vector<std::pair<double, double>> pairs(6);
  for (auto& p : pairs) p.first = replay.rayleigh(1.0);
  for (auto& p : pairs) p.second = replay.rayleigh(1.0);
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (int m = 0; m < 6; ++m) {
    CHECK(ch.h[m] == pairs[m].first);
    CHECK(ch.g[m] == pairs[m].second);
  }
}

TEST_CASE("transmit: zero signal, linearity, and a dot-product example") {
  const SystemConfig noiseless = SystemConfig::isotropic(2, 1, 1.0, 0.0, 0.0);
  const ChannelRealization ch = make_channel_realization(
      (Eigen::VectorXd(2) << 0.5, 1.0).finished(), (Eigen::VectorXd(2) << 1.0, 2.0).finished());

  SUBCASE("zero transmit matrix gives zero output") {
    RandomStream rng(StreamKey::root(1));
    const ChannelOutputs out = transmit(Eigen::MatrixXd::Zero(1, 2), ch, noiseless, rng);
    CHECK(out.y[0] == 0.0);
    CHECK(out.z[0] == 0.0);
  }

  SUBCASE("dot product: X = [[1, 2]], h = (0.5, 1) -> y = 2.5") {
    RandomStream rng(StreamKey::root(1));
    Eigen::MatrixXd x(1, 2);
    x << 1.0, 2.0;
    const ChannelOutputs out = transmit(x, ch, noiseless, rng);
    CHECK(out.y[0] == doctest::Approx(2.5).epsilon(1e-12));
  }

  SUBCASE("rank-one signal sums the channel gains") {
    RandomStream rng(StreamKey::root(1));
    Eigen::VectorXd v(3);
    v << 1.0, -2.0, 0.5;
    const SystemConfig cfg3 = SystemConfig::isotropic(2, 3, 1.0, 0.0, 0.0);
    const Eigen::MatrixXd x = v * Eigen::RowVector2d::Ones();
    const ChannelOutputs out = transmit(x, ch, cfg3, rng);
    CHECK((out.y - v * ch.h.sum()).norm() < 1e-12);
  }

  SUBCASE("linear in X under a shared noise stream") {
    const SystemConfig noisy = SystemConfig::isotropic(2, 3, 1.0, 0.3, 0.2);
    const StreamKey key = StreamKey::root(5).child("noise");
    Eigen::MatrixXd x1 = Eigen::MatrixXd::Random(3, 2), x2 = Eigen::MatrixXd::Random(3, 2);
    const double a = 1.7, b = -0.4;

    RandomStream rng_combined(key);
    const ChannelOutputs combined = transmit(a * x1 + b * x2, ch, noisy, rng_combined);
    RandomStream rng_noise(key);
    const ChannelOutputs noise_only = transmit(Eigen::MatrixXd::Zero(3, 2), ch, noisy, rng_noise);

    const Eigen::VectorXd expected_y = a * (x1 * ch.h) + b * (x2 * ch.h) + noise_only.y;
    const Eigen::VectorXd expected_z = a * (x1 * ch.g) + b * (x2 * ch.g) + noise_only.z;
    CHECK((combined.y - expected_y).norm() < 1e-12);
    CHECK((combined.z - expected_z).norm() < 1e-12);
  }

  SUBCASE("shape mismatch is rejected") {
    RandomStream rng(StreamKey::root(1));
    CHECK_THROWS_AS(transmit(Eigen::MatrixXd::Zero(1, 3), ch, noiseless, rng),
                    std::invalid_argument);
  }
}

TEST_CASE("make_channel_realization validates and sorts") {
  CHECK_THROWS_AS(make_channel_realization((Eigen::VectorXd(2) << -1.0, 1.0).finished(),
                                           (Eigen::VectorXd(2) << 1.0, 1.0).finished()),
                  std::invalid_argument);
  const ChannelRealization ch = make_channel_realization(
      (Eigen::VectorXd(3) << 2.0, 0.5, 1.0).finished(),
      (Eigen::VectorXd(3) << 30.0, 10.0, 20.0).finished());
  CHECK(ch.h[0] == 0.5);
  CHECK(ch.g[0] == 10.0);
  CHECK(ch.h[2] == 2.0);
  CHECK(ch.g[2] == 30.0);
}

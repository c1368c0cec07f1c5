#include "aircomp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <unistd.h>

#include "aircomp/errors.hpp"
#include "aircomp/scaling.hpp"

namespace aircomp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Deterministic empirical-subsample selection: a pure function of the trial
// key, independent of the channel draw and of worker scheduling.
bool empirical_selected(StreamKey trial_key, double fraction) {
  if (fraction >= 1.0) return true;
  if (fraction <= 0.0) return false;
  const double u =
      static_cast<double>(mix64(trial_key.state ^ hash_tag("empirical_select")) >> 11) *
      0x1.0p-53;
  return u < fraction;
}

std::string format17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct MeanSe {
  double mean = kNaN;
  double se = kNaN;
  long count = 0;
};

MeanSe mean_and_se(std::span<const double> values) {
  MeanSe out;
  out.count = static_cast<long>(values.size());
  if (out.count == 0) return out;
  out.mean = pairwise_sum(values) / static_cast<double>(out.count);
  if (out.count == 1) {
    out.se = 0.0;
    return out;
  }
  std::vector<double> sq(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - out.mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(out.count - 1);
  out.se = std::sqrt(var / static_cast<double>(out.count));
  return out;
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

void validate_sweep_spec(const SystemConfig& cfg, const ChannelProtocol& proto,
                         const SweepSpec& spec) {
  if (spec.trials < 1) throw ConfigError("sweep: trials must be >= 1");
  if (!(spec.empirical_check_fraction >= 0.0 && spec.empirical_check_fraction <= 1.0))
    throw ConfigError("sweep: empirical_check_fraction must be in [0, 1]");
  for (size_t i = 1; i < spec.snr_grid_db.size(); ++i)
    if (!(spec.snr_grid_db[i] > spec.snr_grid_db[i - 1]))
      throw ConfigError("sweep: snr_grid_db must be strictly ascending");
  if (proto.mode == ChannelMode::fixed_weakest && !spec.snr_grid_db.empty()) {
    if (!(cfg.sigma_y_sq() > 0.0))
      throw ConfigError("sweep: sigma_y_sq must be > 0 to define an SNR grid");
    const double cap_linear =
        proto.h1_fixed * proto.h1_fixed * cfg.power_limit() * cfg.num_users() / cfg.sigma_y_sq();
    const double cap_db = 10.0 * std::log10(cap_linear);
    const double max_db = spec.snr_grid_db.back();
    if (max_db > cap_db + 1e-9) {
      std::ostringstream msg;
      msg << "sweep: max grid point " << max_db << " dB exceeds the reachable SNR " << cap_db
          << " dB for the pinned weakest user";
      throw ConfigError(msg.str());
    }
  }
}

TrialOutcome run_trial(const std::shared_ptr<const SystemConfig>& cfg,
                       const ChannelProtocol& proto, double snr_linear,
                       PrecoderMethod method, StreamKey trial_key, bool with_empirical) {
  RandomStream channel_rng(trial_key.child("channel"));
  ChannelRealization ch = sample_channel(*cfg, proto, channel_rng);

  const double c_sq = c_sq_of_snr(*cfg, snr_linear);
  const double h1 = ch.h[0];
  const double cap = h1 * h1 * cfg->power_limit();
  if (c_sq > cap + 1e-12 * std::max(1.0, cap)) return TrialOutcome{true, {}};

  const NoiseBudget budget = noise_budget(*cfg, ch.h, c_sq);
  Precoder precoder = make_precoder(method, ch.h, &ch.g, budget);
  SchemeDesign design =
      make_scheme_design(cfg, std::move(ch), std::move(precoder), c_sq);

  TrialOutcome outcome;
  outcome.report.d_closed = approximation_level(design);
  outcome.report.s_closed = security_level(design);
  outcome.report.snr = snr_linear;

  if (with_empirical) {
    RandomStream input_rng(trial_key.child("inputs"));
    RandomStream noise_matrix_rng(trial_key.child("noise_matrix"));
    RandomStream rx_noise_rng(trial_key.child("rx_noise"));
    const InputBatch batch = sample_inputs(*cfg, input_rng);
    const Eigen::MatrixXd x = build_transmit_matrix(batch, design, noise_matrix_rng);
    const ChannelOutputs outputs = transmit(x, design.channel, *cfg, rx_noise_rng);
    outcome.report.empirical_d =
        (mmse_estimate_legit(outputs.y, design) - batch.target).squaredNorm();
    outcome.report.empirical_s =
        (mmse_estimate_eve(outputs.z, design) - batch.target).squaredNorm();
  }
  return outcome;
}

SweepResult run_sweep(const SystemConfig& cfg, const ChannelProtocol& proto,
                      const SweepSpec& spec, int workers) {
  validate_sweep_spec(cfg, proto, spec);
  const auto shared_cfg = std::make_shared<const SystemConfig>(cfg);
  const long trials = spec.trials;
  workers = static_cast<int>(std::clamp<long>(workers, 1, trials));

  SweepResult result;
  result.spec = spec;
  const StreamKey root = StreamKey::root(spec.master_seed).child("trial");

  for (size_t snr_index = 0; snr_index < spec.snr_grid_db.size(); ++snr_index) {
    const double snr_db = spec.snr_grid_db[snr_index];
    const double snr_linear = db_to_linear(snr_db);
    const StreamKey snr_key = root.child(static_cast<std::uint64_t>(snr_index));

    for (PrecoderMethod method : spec.methods) {
      const StreamKey method_key =
          snr_key.child(static_cast<std::uint64_t>(method));

      // Per-trial slots; workers write disjoint ranges, aggregation below
      // runs single-threaded in trial-index order.
      std::vector<double> d_closed(trials, kNaN), s_closed(trials, kNaN);
      std::vector<double> d_emp(trials, kNaN), s_emp(trials, kNaN);
      std::vector<unsigned char> rejected(trials, 0);

      auto worker_fn = [&](long lo, long hi) {
        for (long t = lo; t < hi; ++t) {
          const StreamKey trial_key = method_key.child(static_cast<std::uint64_t>(t));
          const bool with_empirical =
              empirical_selected(trial_key, spec.empirical_check_fraction);
          const TrialOutcome outcome =
              run_trial(shared_cfg, proto, snr_linear, method, trial_key, with_empirical);
          if (outcome.rejected) {
            rejected[t] = 1;
            continue;
          }
          d_closed[t] = outcome.report.d_closed;
          s_closed[t] = outcome.report.s_closed;
          if (outcome.report.empirical_d) d_emp[t] = *outcome.report.empirical_d;
          if (outcome.report.empirical_s) s_emp[t] = *outcome.report.empirical_s;
        }
      };

      if (workers == 1) {
        worker_fn(0, trials);
      } else {
        std::vector<std::thread> pool;
        const long chunk = (trials + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
          const long lo = w * chunk;
          const long hi = std::min(trials, lo + chunk);
          if (lo >= hi) break;
          pool.emplace_back(worker_fn, lo, hi);
        }
        for (auto& th : pool) th.join();
      }

      std::vector<double> d_acc, s_acc, de_acc, se_acc;
      d_acc.reserve(trials);
      s_acc.reserve(trials);
      long rejected_count = 0;
      for (long t = 0; t < trials; ++t) {
        if (rejected[t]) {
          ++rejected_count;
          continue;
        }
        d_acc.push_back(d_closed[t]);
        s_acc.push_back(s_closed[t]);
        if (!std::isnan(d_emp[t])) {
          de_acc.push_back(d_emp[t]);
          se_acc.push_back(s_emp[t]);
        }
      }

      SweepCell cell;
      cell.snr_db = snr_db;
      cell.method = method;
      cell.trials = static_cast<long>(d_acc.size());
      cell.rejected_fraction =
          static_cast<double>(rejected_count) / static_cast<double>(trials);
      const MeanSe d_stats = mean_and_se(d_acc);
      const MeanSe s_stats = mean_and_se(s_acc);
      cell.d_closed_mean = d_stats.mean;
      cell.d_closed_se = d_stats.se;
      cell.s_closed_mean = s_stats.mean;
      cell.s_closed_se = s_stats.se;
      if (!de_acc.empty()) {
        const MeanSe de_stats = mean_and_se(de_acc);
        const MeanSe se_stats = mean_and_se(se_acc);
        cell.d_emp_mean = de_stats.mean;
        cell.d_emp_se = de_stats.se;
        cell.s_emp_mean = se_stats.mean;
        cell.s_emp_se = se_stats.se;
        cell.empirical_count = de_stats.count;
      }
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "snr_db,method,trials,d_closed_mean,d_closed_se,s_closed_mean,s_closed_se,"
         "d_emp_mean,d_emp_se,s_emp_mean,s_emp_se,rejected_fraction\n";
  for (const SweepCell& cell : result.cells) {
    out << format17(cell.snr_db) << ',' << to_string(cell.method) << ',' << cell.trials << ','
        << format17(cell.d_closed_mean) << ',' << format17(cell.d_closed_se) << ','
        << format17(cell.s_closed_mean) << ',' << format17(cell.s_closed_se) << ',';
    if (cell.d_emp_mean) {
      out << format17(*cell.d_emp_mean) << ',' << format17(*cell.d_emp_se) << ','
          << format17(*cell.s_emp_mean) << ',' << format17(*cell.s_emp_se);
    } else {
      out << ",,,";
    }
    out << ',' << format17(cell.rejected_fraction) << '\n';
  }
  return out.str();
}

std::string sweep_plot_data(const SweepResult& result) {
  std::ostringstream out;
  auto emit_series = [&](PrecoderMethod method, const char* metric, auto value_of) {
    out << "# series: method=" << to_string(method) << " metric=" << metric << '\n';
    for (const SweepCell& cell : result.cells) {
      if (cell.method != method) continue;
      out << format17(cell.snr_db) << ' ' << format17(value_of(cell)) << '\n';
    }
    out << '\n';
  };
  for (PrecoderMethod method : result.spec.methods) {
    emit_series(method, "d_closed_mean", [](const SweepCell& c) { return c.d_closed_mean; });
    emit_series(method, "s_closed_mean", [](const SweepCell& c) { return c.s_closed_mean; });
  }
  return out.str();
}

std::string sweep_summary_table(const SweepResult& result) {
  std::ostringstream out;
  out << "snr_db trials";
  for (PrecoderMethod method : result.spec.methods) {
    const auto name = to_string(method);
    out << ' ' << name << ":d_mean " << name << ":d_se " << name << ":s_mean " << name
        << ":s_se";
  }
  out << '\n';

  for (size_t snr_index = 0; snr_index < result.spec.snr_grid_db.size(); ++snr_index) {
    const double snr_db = result.spec.snr_grid_db[snr_index];
    out << format17(snr_db) << ' ' << result.spec.trials;
    for (PrecoderMethod method : result.spec.methods) {
      for (const SweepCell& cell : result.cells) {
        if (cell.snr_db == snr_db && cell.method == method) {
          char buf[160];
          std::snprintf(buf, sizeof(buf), " %.6g %.3g %.6g %.3g", cell.d_closed_mean,
                        cell.d_closed_se, cell.s_closed_mean, cell.s_closed_se);
          out << buf;
          break;
        }
      }
    }
    out << '\n';
  }
  return out.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw std::runtime_error("rename failed: " + tmp.string() + " -> " + path + ": " +
                                   ec.message());
}

void summarize(const SweepResult& result, const std::string& csv_path,
               const std::string& plot_path, std::ostream& table_out) {
  if (!csv_path.empty()) write_file_atomic(csv_path, sweep_csv(result));
  if (!plot_path.empty()) write_file_atomic(plot_path, sweep_plot_data(result));
  table_out << sweep_summary_table(result);
}

}  // namespace aircomp

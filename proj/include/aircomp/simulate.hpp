#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "aircomp/channel.hpp"
#include "aircomp/security.hpp"

namespace aircomp {

// Sweep protocol: MSE at both receivers versus receive SNR, across precoder
// methods, averaged over channel draws.
struct SweepSpec {
  std::vector<double> snr_grid_db;  // ascending
  long trials = 10000;
  std::uint64_t master_seed = 1;
  std::vector<PrecoderMethod> methods;
  // Fraction of trials that additionally run the sampled transmission path
  // with MMSE estimation (the expensive empirical cross-check).
  double empirical_check_fraction = 0.01;
};

// Throws ConfigError on malformed specs; in fixed_weakest mode also rejects
// grids that exceed the reachable SNR 10 log10(h_1^2 P M / sigma_y^2).
void validate_sweep_spec(const SystemConfig& cfg, const ChannelProtocol& proto,
                         const SweepSpec& spec);

struct TrialOutcome {
  bool rejected = false;  // sampled channel cannot carry the requested c^2
  SecurityReport report;
};

// One Monte Carlo trial: channel draw, scaling from the (linear) SNR,
// precoder construction against the power budget, closed-form levels, and
// optionally one sampled transmission with MMSE estimation. Bit-reproducible
// from the stream key alone.
TrialOutcome run_trial(const std::shared_ptr<const SystemConfig>& cfg,
                       const ChannelProtocol& proto, double snr_linear,
                       PrecoderMethod method, StreamKey trial_key, bool with_empirical);

// Aggregated statistics for one (snr, method) grid cell. Means are over
// accepted trials; empirical fields are present only if at least one trial
// ran the sampled path.
struct SweepCell {
  double snr_db = 0.0;
  PrecoderMethod method = PrecoderMethod::no_noise;
  long trials = 0;  // accepted trials
  double d_closed_mean = 0.0, d_closed_se = 0.0;
  double s_closed_mean = 0.0, s_closed_se = 0.0;
  std::optional<double> d_emp_mean, d_emp_se, s_emp_mean, s_emp_se;
  long empirical_count = 0;
  double rejected_fraction = 0.0;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepCell> cells;  // grid-major, methods in spec order
};

// Runs the full sweep. Trial seeds derive from (master_seed, snr index,
// method id, trial index); workers fill disjoint per-trial slots and
// aggregation runs afterwards in trial-index order with pairwise summation,
// so the result bytes are independent of the worker count.
SweepResult run_sweep(const SystemConfig& cfg, const ChannelProtocol& proto,
                      const SweepSpec& spec, int workers = 1);

// Deterministic recursive pairwise sum (fixed association order).
double pairwise_sum(std::span<const double> values);

// Long-format CSV, one row per (snr, method), 17-significant-digit values.
std::string sweep_csv(const SweepResult& result);
// Gnuplot-style companion: one two-column (snr, value) block per series.
std::string sweep_plot_data(const SweepResult& result);
// Wide human-readable table: snr_db, trials, then 4 columns per method.
std::string sweep_summary_table(const SweepResult& result);

// Writes CSV and plot data (atomically, temp file + rename) and streams the
// summary table. Empty paths skip the respective file.
void summarize(const SweepResult& result, const std::string& csv_path,
               const std::string& plot_path, std::ostream& table_out);

// Atomic file write: temp file in the target directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace aircomp

// Command-line entry point: design, evaluate, sweep, and check workflows
// over sectioned config files.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "aircomp/channel.hpp"
#include "aircomp/config_file.hpp"
#include "aircomp/errors.hpp"
#include "aircomp/precoding.hpp"
#include "aircomp/scaling.hpp"
#include "aircomp/security.hpp"
#include "aircomp/simulate.hpp"

namespace {

using namespace aircomp;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitConfig = 3;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;  // section.key=value
  std::optional<std::uint64_t> seed;
  int verbosity = 0;
};

ConfigFile load_config(const CommonArgs& args) {
  ConfigFile config = args.config_path.empty() ? ConfigFile{}
                                               : ConfigFile::parse_file(args.config_path);
  config.apply_env_overrides();
  for (const std::string& item : args.overrides) {
    const size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--set expects section.key=value, got: " + item);
    config.set(item.substr(0, eq), item.substr(eq + 1));
  }
  return config;
}

SystemConfig load_system_config(const ConfigFile& config) {
  SystemConfig cfg = system_config_from(config);
  const ValidationReport report = validate_config(cfg);
  if (!report.ok) {
    std::string msg = "invalid system configuration:";
    for (const std::string& v : report.violations) msg += "\n  - " + v;
    throw ConfigError(msg);
  }
  return cfg;
}

std::uint64_t effective_seed(const CommonArgs& args, const ConfigFile& config) {
  if (args.seed) return *args.seed;
  return config.get_uint64_or("sweep", "master_seed", 1);
}

Eigen::VectorXd parse_vector(const std::string& raw, const std::string& what) {
  std::vector<double> items;
  std::string current;
  for (char c : raw) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) {
        items.push_back(std::stod(current));
        current.clear();
      }
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) items.push_back(std::stod(current));
  if (items.empty()) throw ConfigError(what + ": empty vector");
  return Eigen::Map<Eigen::VectorXd>(items.data(), static_cast<Eigen::Index>(items.size()));
}

ChannelRealization resolve_channel(const SystemConfig& cfg, const ChannelProtocol& proto,
                                   const std::string& h_raw, const std::string& g_raw,
                                   std::uint64_t seed) {
  RandomStream rng(StreamKey::root(seed).child("cli_channel"));
  if (h_raw.empty()) {
    ChannelRealization ch = sample_channel(cfg, proto, rng);
    if (!g_raw.empty()) ch.g = parse_vector(g_raw, "--g");
    return ch;
  }
  Eigen::VectorXd h = parse_vector(h_raw, "--h");
  Eigen::VectorXd g;
  if (!g_raw.empty()) {
    g = parse_vector(g_raw, "--g");
    if (g.size() != h.size()) throw ConfigError("--g must have the same length as --h");
  } else {
    g = Eigen::VectorXd(h.size());
    for (int i = 0; i < h.size(); ++i) g[i] = rng.rayleigh(cfg.sigma_g());
  }
  return make_channel_realization(std::move(h), std::move(g));
}

void print_design(const SystemConfig& cfg, const ChannelRealization& ch,
                  const Precoder& precoder, double c_sq, bool g_known) {
  const int m_users = cfg.num_users();
  std::cout << "c_sq = " << c_sq;
  if (cfg.sigma_y_sq() > 0.0) {
    const double snr = snr_of(cfg, c_sq);
    std::cout << "   (receive SNR " << snr << " = "
              << (snr > 0.0 ? 10.0 * std::log10(snr) : -std::numeric_limits<double>::infinity())
              << " dB)";
  }
  std::cout << "\nmethod = " << to_string(precoder.method) << "\nd_sq =";
  for (int i = 0; i < precoder.d_sq.size(); ++i) std::cout << ' ' << precoder.d_sq[i];
  std::cout << "\nA =\n" << dump_matrix(precoder.A);

  const Eigen::VectorXd norms_sq = column_norms_sq(precoder.A);
  std::cout << "per-user power (signal + artificial noise <= P = " << cfg.power_limit()
            << "):\n";
  for (int m = 0; m < m_users; ++m) {
    const double signal = c_sq / (ch.h[m] * ch.h[m]);
    std::cout << "  user " << (m + 1) << ": " << signal << " + " << norms_sq[m] << " = "
              << signal + norms_sq[m] << '\n';
  }

  SchemeDesign design = make_scheme_design(cfg, ch, precoder, c_sq);
  std::cout << "predicted D = " << approximation_level(design) << '\n';
  if (g_known) {
    std::cout << "predicted S = " << security_level(design)
              << "   (realized ||A g||^2 = " << realized_noise_power_at_eve(precoder.A, ch.g)
              << ")\n";
  } else {
    std::cout << "expected eavesdropper noise power E[||A g||^2] = "
              << expected_noise_power_at_eve(ch.h, precoder.d_sq, cfg.sigma_g()) << '\n';
  }
  std::cout << "feasibility: c_sq cap h_1^2 P = " << ch.h[0] * ch.h[0] * cfg.power_limit()
            << ", mu floor = " << feasible_mu_min(cfg, ch.h) << '\n';
}

int cmd_design(const CommonArgs& common, const std::string& h_raw, const std::string& g_raw,
               std::optional<double> mu, std::optional<double> snr_db,
               const std::string& method_name, const std::string& bound_name,
               const std::string& out_path) {
  const ConfigFile config = load_config(common);
  const SystemConfig cfg = load_system_config(config);
  const ChannelProtocol proto = channel_protocol_from(config);
  const std::uint64_t seed = effective_seed(common, config);

  const auto method = precoder_method_from_string(method_name);
  if (!method) throw ConfigError("unknown precoder method: " + method_name);

  ChannelRealization ch = resolve_channel(cfg, proto, h_raw, g_raw, seed);
  const bool g_known = !g_raw.empty() || h_raw.empty();
  if (*method == PrecoderMethod::rre_known_csi && !g_known)
    throw ConfigError("method rre_known_csi needs eavesdropper CSI: pass --g");

  double c_sq = 0.0;
  bool degenerate = false;
  if (mu) {
    ScalingDesign scaling;
    if (bound_name == "improved")
      scaling = scaling_improved_bound(cfg, ch.h, *mu);
    else
      scaling = scaling_from_mse(cfg, ch.h, *mu);
    c_sq = scaling.c_sq;
    degenerate = scaling.degenerate;
  } else {
    c_sq = c_sq_of_snr(cfg, std::pow(10.0, *snr_db / 10.0), ch.h);
  }

  const NoiseBudget budget = noise_budget(cfg, ch.h, c_sq);
  const Precoder precoder = make_precoder(*method, ch.h, &ch.g, budget);
  if (degenerate)
    std::cout << "warning: mu = M asks for no transmission; the design is degenerate (c = 0)\n";
  print_design(cfg, ch, precoder, c_sq, g_known);
  if (!out_path.empty()) {
    write_file_atomic(out_path, dump_matrix(precoder.A));
    std::cout << "precoder written to " << out_path << '\n';
  }
  return kExitOk;
}

int cmd_evaluate(const CommonArgs& common, const std::string& h_raw, const std::string& g_raw,
                 std::optional<double> mu, std::optional<double> snr_db,
                 std::optional<double> c_sq_arg, const std::string& method_name,
                 long empirical_trials) {
  const ConfigFile config = load_config(common);
  const SystemConfig cfg = load_system_config(config);
  const ChannelProtocol proto = channel_protocol_from(config);
  const std::uint64_t seed = effective_seed(common, config);

  const auto method = precoder_method_from_string(method_name);
  if (!method) throw ConfigError("unknown precoder method: " + method_name);

  ChannelRealization ch = resolve_channel(cfg, proto, h_raw, g_raw, seed);
  double c_sq = 0.0;
  if (c_sq_arg)
    c_sq = *c_sq_arg;
  else if (mu)
    c_sq = scaling_from_mse(cfg, ch.h, *mu).c_sq;
  else
    c_sq = c_sq_of_snr(cfg, std::pow(10.0, *snr_db / 10.0), ch.h);

  const NoiseBudget budget = noise_budget(cfg, ch.h, c_sq);
  const Precoder precoder = make_precoder(*method, ch.h, &ch.g, budget);
  SchemeDesign design = make_scheme_design(cfg, ch, precoder, c_sq);

  std::cout << "d_closed = " << approximation_level(design) << '\n';
  std::cout << "s_closed = " << security_level(design) << '\n';
  if (cfg.sigma_y_sq() > 0.0) std::cout << "snr = " << snr_of(cfg, c_sq) << '\n';

  if (empirical_trials > 0) {
    const StreamKey key = StreamKey::root(seed).child("cli_evaluate");
    double d_sum = 0.0, s_sum = 0.0;
    for (long t = 0; t < empirical_trials; ++t) {
      const StreamKey trial = key.child(static_cast<std::uint64_t>(t));
      RandomStream input_rng(trial.child("inputs"));
      RandomStream noise_matrix_rng(trial.child("noise_matrix"));
      RandomStream rx_rng(trial.child("rx_noise"));
      const InputBatch batch = sample_inputs(cfg, input_rng);
      const Eigen::MatrixXd x = build_transmit_matrix(batch, design, noise_matrix_rng);
      const ChannelOutputs outputs = transmit(x, ch, cfg, rx_rng);
      d_sum += (mmse_estimate_legit(outputs.y, design) - batch.target).squaredNorm();
      s_sum += (mmse_estimate_eve(outputs.z, design) - batch.target).squaredNorm();
    }
    std::cout << "d_empirical = " << d_sum / static_cast<double>(empirical_trials) << "   ("
              << empirical_trials << " draws)\n";
    std::cout << "s_empirical = " << s_sum / static_cast<double>(empirical_trials) << '\n';
  }
  return kExitOk;
}

int cmd_sweep(const CommonArgs& common, const std::string& out_path,
              const std::string& plot_path, std::optional<long> trials,
              std::optional<std::string> methods_raw, std::optional<std::string> grid_raw,
              int workers, bool full) {
  const ConfigFile config = load_config(common);
  const SystemConfig cfg = load_system_config(config);
  const ChannelProtocol proto = channel_protocol_from(config);

  SweepSpec spec = sweep_spec_from(config);
  if (common.seed) spec.master_seed = *common.seed;
  if (trials) spec.trials = *trials;
  if (full) spec.trials = 1000000;
  if (grid_raw) {
    const Eigen::VectorXd grid = parse_vector(*grid_raw, "--snr-grid-db");
    spec.snr_grid_db.assign(grid.data(), grid.data() + grid.size());
  }
  if (methods_raw) {
    spec.methods.clear();
    std::string current;
    auto flush = [&] {
      if (current.empty()) return;
      const auto method = precoder_method_from_string(current);
      if (!method) throw ConfigError("unknown precoder method: " + current);
      spec.methods.push_back(*method);
      current.clear();
    };
    for (char c : *methods_raw) {
      if (c == ',' || std::isspace(static_cast<unsigned char>(c)))
        flush();
      else
        current.push_back(c);
    }
    flush();
  }

  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers <= 0) workers = 1;

  const SweepResult result = run_sweep(cfg, proto, spec, workers);
  std::string plot = plot_path;
  if (plot.empty() && !out_path.empty())
    plot = std::filesystem::path(out_path).replace_extension(".dat").string();
  summarize(result, out_path, plot, std::cout);

  long rejected_cells = 0;
  for (const SweepCell& cell : result.cells)
    if (cell.rejected_fraction > 0.0) ++rejected_cells;
  if (rejected_cells > 0)
    std::cout << "note: " << rejected_cells
              << " grid cells rejected some trials (infeasible c for the sampled channel)\n";
  if (!out_path.empty()) std::cout << "csv written to " << out_path << '\n';
  if (!plot.empty()) std::cout << "plot data written to " << plot << '\n';
  return kExitOk;
}

struct CheckFailure {
  std::string what;
};

int cmd_check(const CommonArgs& common, const std::string& precoder_path,
              const std::string& h_raw) {
  const ConfigFile config = load_config(common);
  const SystemConfig cfg = load_system_config(config);
  const ChannelProtocol proto = channel_protocol_from(config);
  const std::uint64_t seed = effective_seed(common, config);

  int failures = 0;
  auto report = [&failures](bool ok, const std::string& name) {
    std::cout << (ok ? "[ ok ] " : "[FAIL] ") << name << '\n';
    if (!ok) ++failures;
  };
  const auto zero_forcing_ok = [](const Eigen::MatrixXd& a, const Eigen::VectorXd& h) {
    return (a * h).norm() <= 1e-9 * (1.0 + a.norm() * h.norm());
  };

  if (!precoder_path.empty()) {
    if (h_raw.empty()) throw ConfigError("check --precoder also needs --h");
    const Eigen::VectorXd h = parse_vector(h_raw, "--h");
    std::ifstream in(precoder_path);
    if (!in) throw ConfigError("cannot open precoder file: " + precoder_path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const Eigen::MatrixXd a = parse_matrix(buffer.str());
    if (a.cols() != h.size())
      throw ConfigError("precoder has " + std::to_string(a.cols()) +
                        " columns, h has length " + std::to_string(h.size()));
    report(zero_forcing_ok(a, h), "zero-forcing residual of " + precoder_path);
    return failures == 0 ? kExitOk : kExitInternal;
  }

  // Structural checks on sampled instances.
  bool feasibility_ok = true;
  std::string feasibility_msg = "scaling feasibility (mu within [floor, M])";
  bool zf_ok = true, power_ok = true, corollary_ok = true;

  const StreamKey root = StreamKey::root(seed).child("check");
  for (std::uint64_t i = 0; i < 16; ++i) {
    RandomStream rng(root.child(i));
    ChannelRealization ch = sample_channel(cfg, proto, rng);

    const double floor = feasible_mu_min(cfg, ch.h);
    double mu = config.has("design", "mu")
                    ? config.get_double("design", "mu")
                    : floor + 0.5 * (cfg.num_users() - floor);
    double c_sq = 0.0;
    try {
      c_sq = scaling_from_mse(cfg, ch.h, mu).c_sq;
    } catch (const InfeasibleDesign& err) {
      feasibility_ok = false;
      feasibility_msg += std::string(" -- ") + err.what();
      break;
    }

    NoiseBudget budget = noise_budget(cfg, ch.h, c_sq);
    for (PrecoderMethod method :
         {PrecoderMethod::rre_unknown_csi, PrecoderMethod::rre_known_csi,
          PrecoderMethod::naive_svd, PrecoderMethod::no_noise}) {
      const Precoder precoder = make_precoder(method, ch.h, &ch.g, budget);
      zf_ok = zf_ok && zero_forcing_ok(precoder.A, ch.h);
      const Eigen::VectorXd norms_sq = column_norms_sq(precoder.A);
      for (int m = 0; m < cfg.num_users(); ++m) {
        power_ok = power_ok && norms_sq[m] <= budget.per_user[m] + 1e-9;
        power_ok = power_ok &&
                   c_sq <= ch.h[m] * ch.h[m] * (cfg.power_limit() - norms_sq[m]) + 1e-9;
      }
      if (cfg.covariance_is_isotropic()) {
        SchemeDesign design = make_scheme_design(cfg, ch, precoder, c_sq);
        const auto [d_cor, s_cor] = corollary_levels(design);
        const double d_gen = approximation_level(design);
        const double s_gen = security_level(design);
        corollary_ok = corollary_ok && std::abs(d_cor - d_gen) <= 1e-12 * cfg.num_users() &&
                       std::abs(s_cor - s_gen) <= 1e-12 * cfg.num_users();
      }
    }
  }

  report(feasibility_ok, feasibility_msg);
  report(zf_ok, "zero-forcing residual ||A h|| (all methods, sampled channels)");
  report(power_ok, "power budget: column norms within per-user budgets, c^2 within cap");
  report(corollary_ok, "isotropic corollary agrees with general evaluators");

  if (!feasibility_ok) return kExitInfeasible;
  return failures == 0 ? kExitOk : kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"secure over-the-air computation: design, evaluation, and sweep workflows"};
  app.require_subcommand(1);

  CommonArgs common;
  app.add_option("--config", common.config_path, "config file path")->envname("AIRCOMP_CONFIG");
  app.add_option("--seed", common.seed, "master seed override");
  app.add_option("--set", common.overrides, "config override section.key=value")
      ->take_all();
  app.add_flag("-v", common.verbosity, "verbosity");

  std::string h_raw, g_raw, method_name = "rre_unknown_csi", bound_name = "thm2";
  std::string out_path, plot_path, precoder_path;
  std::optional<double> mu, snr_db, c_sq_arg;
  std::optional<long> trials_opt;
  std::optional<std::string> methods_raw, grid_raw;
  long empirical_trials = 0;
  int workers = 0;
  bool full = false;

  CLI::App* design = app.add_subcommand("design", "design a transmission scheme");
  design->add_option("--h", h_raw, "legitimate channel coefficients (comma separated)");
  design->add_option("--g", g_raw, "eavesdropper channel coefficients");
  auto* design_mu = design->add_option("--mu", mu, "MSE requirement at the legitimate receiver");
  auto* design_snr = design->add_option("--snr-db", snr_db, "target receive SNR in dB");
  design->add_option("--method", method_name, "precoder method")->capture_default_str();
  design->add_option("--bound", bound_name, "scaling bound: thm2 | improved")
      ->capture_default_str();
  design->add_option("--out", out_path, "write the precoding matrix dump here");
  design_mu->excludes(design_snr);

  CLI::App* evaluate = app.add_subcommand("evaluate", "evaluate levels for one design");
  evaluate->add_option("--h", h_raw, "legitimate channel coefficients");
  evaluate->add_option("--g", g_raw, "eavesdropper channel coefficients");
  auto* eval_mu = evaluate->add_option("--mu", mu, "MSE requirement");
  auto* eval_snr = evaluate->add_option("--snr-db", snr_db, "receive SNR in dB");
  auto* eval_c = evaluate->add_option("--c-sq", c_sq_arg, "signal scaling c^2");
  evaluate->add_option("--method", method_name, "precoder method")->capture_default_str();
  evaluate->add_option("--empirical-trials", empirical_trials,
                       "also estimate MSE from sampled transmissions");
  eval_mu->excludes(eval_snr);
  eval_mu->excludes(eval_c);
  eval_snr->excludes(eval_c);

  CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over the SNR grid");
  sweep->add_option("--out", out_path, "CSV output path")->capture_default_str();
  sweep->add_option("--plot-out", plot_path, "plot-data output path (default: out with .dat)");
  sweep->add_option("--trials", trials_opt, "trials per grid cell");
  sweep->add_option("--methods", methods_raw, "comma-separated method subset");
  sweep->add_option("--snr-grid-db", grid_raw, "comma-separated SNR grid in dB");
  sweep->add_option("--workers", workers, "worker threads (0 = hardware)");
  sweep->add_flag("--full", full, "run 1e6 trials per cell");

  CLI::App* check = app.add_subcommand("check", "fast structural invariant checks");
  check->add_option("--precoder", precoder_path, "verify a precoder matrix dump");
  check->add_option("--h", h_raw, "channel coefficients for --precoder");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (design->parsed()) {
      if (!mu && !snr_db) throw ConfigError("design needs exactly one of --mu or --snr-db");
      return cmd_design(common, h_raw, g_raw, mu, snr_db, method_name, bound_name, out_path);
    }
    if (evaluate->parsed()) {
      if (!mu && !snr_db && !c_sq_arg)
        throw ConfigError("evaluate needs one of --mu, --snr-db, --c-sq");
      return cmd_evaluate(common, h_raw, g_raw, mu, snr_db, c_sq_arg, method_name,
                          empirical_trials);
    }
    if (sweep->parsed())
      return cmd_sweep(common, out_path.empty() ? "sweep.csv" : out_path, plot_path,
                       trials_opt, methods_raw, grid_raw, workers, full);
    if (check->parsed()) return cmd_check(common, precoder_path, h_raw);
    throw ConfigError("no subcommand given");
  } catch (const InfeasibleDesign& err) {
    std::cerr << "infeasible: " << err.what() << '\n';
    if (std::isfinite(err.mu_floor()))
      std::cerr << "feasible mu floor: " << err.mu_floor() << '\n';
    return kExitInfeasible;
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitInternal;
  }
}

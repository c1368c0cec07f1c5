#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aircomp/channel.hpp"
#include "aircomp/simulate.hpp"
#include "aircomp/types.hpp"

namespace aircomp {

// Sectioned key-value configuration text:
//
//   # comment
//   [system]
//   num_users = 10
//   input_covariance = isotropic     # or row-major rows split by ';'
//
// Keys are case-sensitive; values are raw strings parsed by the typed
// getters. Environment variables named <PREFIX><SECTION>_<KEY> (upper case)
// override file values; explicit set() calls override both.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text);

  void apply_env_overrides(const std::string& prefix = "AIRCOMP_");
  // dotted_key is "section.key".
  void set(const std::string& dotted_key, const std::string& value);

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;
  long get_int(const std::string& section, const std::string& key) const;
  long get_int_or(const std::string& section, const std::string& key, long fallback) const;
  std::uint64_t get_uint64_or(const std::string& section, const std::string& key,
                              std::uint64_t fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  std::vector<double> get_double_list(const std::string& section, const std::string& key) const;
  std::vector<std::string> get_string_list(const std::string& section,
                                           const std::string& key) const;

  const std::map<std::string, std::map<std::string, std::string>>& sections() const {
    return values_;
  }

 private:
  std::map<std::string, std::map<std::string, std::string>> values_;
};

// Typed loaders for the domain objects. All throw ConfigError with the
// offending section/key on malformed input.
SystemConfig system_config_from(const ConfigFile& config);
ChannelProtocol channel_protocol_from(const ConfigFile& config);
SweepSpec sweep_spec_from(const ConfigFile& config);

// Plain-text matrix dump: one row per line, space-separated
// 17-significant-digit decimals.
std::string dump_matrix(const Eigen::MatrixXd& matrix);
Eigen::MatrixXd parse_matrix(const std::string& text);

}  // namespace aircomp

#include "aircomp/config_file.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

extern "C" char** environ;

namespace aircomp {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_items(const std::string& raw) {
  std::vector<std::string> items;
  std::string current;
  for (char c : raw) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      if (!current.empty()) items.push_back(std::exchange(current, {}));
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) items.push_back(current);
  return items;
}

double parse_double(const std::string& raw, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(raw.c_str(), &end);
  if (end == raw.c_str() || *end != '\0' || errno == ERANGE)
    throw ConfigError(where + ": cannot parse '" + raw + "' as a number");
  return v;
}

long parse_long(const std::string& raw, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(raw.c_str(), &end, 10);
  if (end == raw.c_str() || *end != '\0' || errno == ERANGE)
    throw ConfigError(where + ": cannot parse '" + raw + "' as an integer");
  return v;
}

std::string strip_inline_comment(const std::string& line) {
  // '#' starts a comment unless inside a value that needs it; the format
  // has no quoting, so any '#' is a comment.
  const size_t pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

}  // namespace

ConfigFile ConfigFile::parse_string(const std::string& text) {
  ConfigFile config;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(strip_inline_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(line_no) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("config line " + std::to_string(line_no) + ": empty section name");
      config.values_[section];
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (section.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": key outside any section");
    config.values_[section][key] = value;
  }
  return config;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_string(buffer.str());
  } catch (const ConfigError& err) {
    throw ConfigError(path + ": " + err.what());
  }
}

void ConfigFile::apply_env_overrides(const std::string& prefix) {
  // Variables look like <PREFIX><SECTION>_<KEY>; section names carry no
  // underscores, so the first underscore after the prefix splits the two.
  for (char** env = environ; env != nullptr && *env != nullptr; ++env) {
    const std::string entry(*env);
    const size_t eq = entry.find('=');
    if (eq == std::string::npos) continue;
    const std::string name = entry.substr(0, eq);
    if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) continue;
    const std::string rest = name.substr(prefix.size());
    const size_t split = rest.find('_');
    if (split == std::string::npos || split == 0 || split + 1 >= rest.size()) continue;
    const std::string section = lower(rest.substr(0, split));
    const std::string key = lower(rest.substr(split + 1));
    values_[section][key] = entry.substr(eq + 1);
  }
}

void ConfigFile::set(const std::string& dotted_key, const std::string& value) {
  const size_t dot = dotted_key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 >= dotted_key.size())
    throw ConfigError("override key must look like section.key: " + dotted_key);
  values_[dotted_key.substr(0, dot)][dotted_key.substr(dot + 1)] = value;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  const auto sec = values_.find(section);
  return sec != values_.end() && sec->second.count(key) > 0;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key) const {
  const auto sec = values_.find(section);
  if (sec != values_.end()) {
    const auto item = sec->second.find(key);
    if (item != sec->second.end()) return item->second;
  }
  throw ConfigError("missing config key [" + section + "] " + key);
}

std::string ConfigFile::get_string_or(const std::string& section, const std::string& key,
                                      const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}

long ConfigFile::get_int(const std::string& section, const std::string& key) const {
  return parse_long(get_string(section, key), "[" + section + "] " + key);
}

long ConfigFile::get_int_or(const std::string& section, const std::string& key,
                            long fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

std::uint64_t ConfigFile::get_uint64_or(const std::string& section, const std::string& key,
                                        std::uint64_t fallback) const {
  if (!has(section, key)) return fallback;
  const std::string raw = get_string(section, key);
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw.c_str(), &end, 10);
  if (end == raw.c_str() || *end != '\0' || errno == ERANGE)
    throw ConfigError("[" + section + "] " + key + ": cannot parse '" + raw +
                      "' as an unsigned integer");
  return v;
}

double ConfigFile::get_double(const std::string& section, const std::string& key) const {
  return parse_double(get_string(section, key), "[" + section + "] " + key);
}

double ConfigFile::get_double_or(const std::string& section, const std::string& key,
                                 double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

std::vector<double> ConfigFile::get_double_list(const std::string& section,
                                                const std::string& key) const {
  const std::string where = "[" + section + "] " + key;
  std::vector<double> out;
  for (const std::string& item : split_items(get_string(section, key)))
    out.push_back(parse_double(item, where));
  return out;
}

std::vector<std::string> ConfigFile::get_string_list(const std::string& section,
                                                     const std::string& key) const {
  return split_items(get_string(section, key));
}

namespace {

Eigen::MatrixXd covariance_from_string(const std::string& raw, int dimension) {
  const std::string value = trim(raw);
  if (lower(value) == "isotropic")
    return Eigen::MatrixXd::Identity(dimension, dimension) / static_cast<double>(dimension);

  // Explicit matrix: rows split by ';', entries by spaces or commas.
  std::vector<std::vector<double>> rows;
  std::string row_text;
  std::istringstream rows_in(value);
  while (std::getline(rows_in, row_text, ';')) {
    std::vector<double> row;
    for (const std::string& item : split_items(row_text))
      row.push_back(parse_double(item, "[system] input_covariance"));
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("[system] input_covariance: empty matrix");
  const size_t cols = rows.front().size();
  for (const auto& row : rows)
    if (row.size() != cols)
      throw ConfigError("[system] input_covariance: ragged matrix rows");
  Eigen::MatrixXd cov(rows.size(), cols);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols; ++j) cov(i, j) = rows[i][j];
  return cov;
}

}  // namespace

SystemConfig system_config_from(const ConfigFile& config) {
  const int num_users = static_cast<int>(config.get_int("system", "num_users"));
  const int dimension = static_cast<int>(config.get_int("system", "dimension"));
  const double power_limit = config.get_double("system", "power_limit");
  const Eigen::MatrixXd cov = covariance_from_string(
      config.get_string_or("system", "input_covariance", "isotropic"), dimension);
  return SystemConfig(num_users, dimension, power_limit, cov,
                      config.get_double("system", "sigma_y_sq"),
                      config.get_double("system", "sigma_z_sq"),
                      config.get_double_or("system", "sigma_h", 1.0),
                      config.get_double_or("system", "sigma_g", 1.0));
}

ChannelProtocol channel_protocol_from(const ConfigFile& config) {
  ChannelProtocol proto;
  const std::string mode = lower(config.get_string_or("channel", "mode", "free_rayleigh"));
  if (mode == "free_rayleigh") {
    proto.mode = ChannelMode::free_rayleigh;
  } else if (mode == "fixed_weakest") {
    proto.mode = ChannelMode::fixed_weakest;
    const std::string pin = lower(config.get_string_or("channel", "h1_fixed", "sigma_point"));
    const double scale = config.get_double_or("system", "sigma_h", 1.0);
    if (pin == "sigma_point")
      proto.h1_fixed = rayleigh_mean_minus_sd(scale);
    else if (pin == "sigma_point_quarter")
      proto.h1_fixed = rayleigh_mean_minus_sd_quarter(scale);
    else
      proto.h1_fixed = parse_double(pin, "[channel] h1_fixed");
    if (!(proto.h1_fixed > 0.0)) throw ConfigError("[channel] h1_fixed must be > 0");
  } else {
    throw ConfigError("[channel] mode must be free_rayleigh or fixed_weakest");
  }
  return proto;
}

SweepSpec sweep_spec_from(const ConfigFile& config) {
  SweepSpec spec;
  spec.snr_grid_db = config.get_double_list("sweep", "snr_grid_db");
  spec.trials = config.get_int("sweep", "trials");
  spec.master_seed = config.get_uint64_or("sweep", "master_seed", 1);
  spec.empirical_check_fraction =
      config.get_double_or("sweep", "empirical_check_fraction", 0.01);
  for (const std::string& name : config.get_string_list("sweep", "methods")) {
    const auto method = precoder_method_from_string(name);
    if (!method) throw ConfigError("[sweep] methods: unknown method '" + name + "'");
    spec.methods.push_back(*method);
  }
  return spec;
}

std::string dump_matrix(const Eigen::MatrixXd& matrix) {
  std::ostringstream out;
  char buf[64];
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", matrix(i, j));
      if (j) out << ' ';
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

Eigen::MatrixXd parse_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(strip_inline_comment(line));
    if (line.empty()) continue;
    std::vector<double> row;
    for (const std::string& item : split_items(line))
      row.push_back(parse_double(item, "matrix dump"));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("matrix dump: no rows");
  const size_t cols = rows.front().size();
  for (const auto& row : rows)
    if (row.size() != cols) throw ConfigError("matrix dump: ragged rows");
  Eigen::MatrixXd matrix(rows.size(), cols);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols; ++j) matrix(i, j) = rows[i][j];
  return matrix;
}

}  // namespace aircomp

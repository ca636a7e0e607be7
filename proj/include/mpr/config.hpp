#pragma once

#include "mpr/experiments.hpp"
#include "mpr/export.hpp"

#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

// Experiment config files: one `key = value` per line, `#` starts a comment,
// lists are comma separated. Values set from the command line replace file
// values and carry line 0.

namespace mpr {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

class KeyValueConfig {
 public:
  void set(const std::string& key, const std::string& value, int line = 0);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& source() const { return source_; }
  void set_source(std::string s) { source_ = std::move(s); }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<Index> get_indices(const std::string& key, const std::vector<Index>& fallback) const;

  /// Throws ConfigError at the first key that is not in `allowed`.
  void check_keys(const std::set<std::string>& allowed) const;

 private:
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
  std::string source_ = "<config>";
};

KeyValueConfig parse_config(std::istream& in, const std::string& source = "<config>");
KeyValueConfig load_config(const std::filesystem::path& path);

/// Builders validate keys for the subcommand, start from desk-scale defaults
/// (or the full-size settings when `full_scale`), then apply the config.
LinearityConfig linearity_config(const KeyValueConfig& kv, bool full_scale = false);
GoodBitsConfig goodbits_config(const KeyValueConfig& kv, bool full_scale = false);
SrlsConfig srls_config(const KeyValueConfig& kv, bool full_scale = false);
RsvdConfig rsvd_config(const KeyValueConfig& kv, bool full_scale = false);
DigitSvdConfig digit_svd_config(const KeyValueConfig& kv, bool full_scale = false);
ScalingExperimentConfig scaling_config(const KeyValueConfig& kv, bool full_scale = false);
DesignRefsConfig design_refs_config(const KeyValueConfig& kv, bool full_scale = false);

/// Fully resolved settings, used for the config hash line.
ConfigMap describe(const LinearityConfig& cfg);
ConfigMap describe(const GoodBitsConfig& cfg);
ConfigMap describe(const SrlsConfig& cfg);
ConfigMap describe(const RsvdConfig& cfg);
ConfigMap describe(const DigitSvdConfig& cfg);
ConfigMap describe(const ScalingExperimentConfig& cfg);
ConfigMap describe(const DesignRefsConfig& cfg);

}  // namespace mpr

#include "mpr/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace mpr {

ConfigError::ConfigError(const std::string& source, int line, const std::string& what)
    : std::runtime_error(line > 0 ? fmt::format("{}:{}: {}", source, line, what)
                                  : fmt::format("{}: {}", source, what)),
      line_(line) {}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool parse_double(const std::string& s, double& out) {
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, out);
  return res.ec == std::errc() && res.ptr == end;
}

bool parse_int(const std::string& s, long long& out) {
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, out);
  return res.ec == std::errc() && res.ptr == end;
}

}  // namespace

void KeyValueConfig::set(const std::string& key, const std::string& value, int line) {
  values_[key] = value;
  lines_[key] = line;
}

void KeyValueConfig::fail(const std::string& key, const std::string& what) const {
  const auto it = lines_.find(key);
  throw ConfigError(it != lines_.end() && it->second > 0 ? source_ : "command line",
                    it != lines_.end() ? it->second : 0, fmt::format("{}: {}", key, what));
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  double v = 0.0;
  if (!parse_double(values_.at(key), v)) fail(key, "expected a number, got '" + values_.at(key) + "'");
  return v;
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const {
  if (!has(key)) return fallback;
  long long v = 0;
  if (!parse_int(values_.at(key), v)) fail(key, "expected an integer, got '" + values_.at(key) + "'");
  return v;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  std::string v = values_.at(key);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  fail(key, "expected a boolean, got '" + values_.at(key) + "'");
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key, const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(values_.at(key))) {
    double v = 0.0;
    if (!parse_double(item, v)) fail(key, "expected a list of numbers, got '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) fail(key, "empty list");
  return out;
}

std::vector<Index> KeyValueConfig::get_indices(const std::string& key, const std::vector<Index>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<Index> out;
  for (const auto& item : split_list(values_.at(key))) {
    long long v = 0;
    if (!parse_int(item, v)) fail(key, "expected a list of integers, got '" + item + "'");
    out.push_back(static_cast<Index>(v));
  }
  if (out.empty()) fail(key, "empty list");
  return out;
}

void KeyValueConfig::check_keys(const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : values_)
    if (!allowed.count(key)) fail(key, "unknown key");
}

KeyValueConfig parse_config(std::istream& in, const std::string& source) {
  KeyValueConfig kv;
  kv.set_source(source);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line, "expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError(source, line, "missing key");
    if (value.empty()) throw ConfigError(source, line, "missing value for '" + key + "'");
    if (kv.has(key)) throw ConfigError(source, line, "duplicate key '" + key + "'");
    kv.set(key, value, line);
  }
  return kv;
}

KeyValueConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
  return parse_config(in, path.string());
}

namespace {

const std::set<std::string> kSolverKeys{"gd_max_iters", "gd_backtrack",     "gd_armijo",
                                        "gd_tol",       "imputation",       "eigenvalue_floor",
                                        "norm_filter_threshold", "gd_restarts"};

std::set<std::string> with_solver(std::set<std::string> keys) {
  keys.insert(kSolverKeys.begin(), kSolverKeys.end());
  return keys;
}

SolverConfig read_solver(const KeyValueConfig& kv, SolverConfig cfg) {
  cfg.gd_max_iters = static_cast<int>(kv.get_int("gd_max_iters", cfg.gd_max_iters));
  cfg.gd_backtrack = kv.get_double("gd_backtrack", cfg.gd_backtrack);
  cfg.gd_armijo = kv.get_double("gd_armijo", cfg.gd_armijo);
  cfg.gd_tol = kv.get_double("gd_tol", cfg.gd_tol);
  cfg.gd_restarts = static_cast<int>(kv.get_int("gd_restarts", cfg.gd_restarts));
  cfg.eigenvalue_floor = kv.get_double("eigenvalue_floor", cfg.eigenvalue_floor);
  cfg.norm_filter_threshold = kv.get_double("norm_filter_threshold", cfg.norm_filter_threshold);
  if (kv.has("imputation")) {
    const std::string v = kv.get_string("imputation", "");
    if (v == "zero")
      cfg.imputation = Imputation::kZero;
    else if (v == "mean")
      cfg.imputation = Imputation::kObservedMean;
    else
      throw ConfigError(kv.source(), 0, "imputation: expected 'zero' or 'mean', got '" + v + "'");
  }
  try {
    validate_solver_config(cfg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(kv.source(), 0, e.what());
  }
  return cfg;
}

std::uint64_t read_seed(const KeyValueConfig& kv, std::uint64_t fallback) {
  const long long v = kv.get_int("seed", static_cast<long long>(fallback));
  if (v < 0) throw ConfigError(kv.source(), 0, "seed must be nonnegative");
  return static_cast<std::uint64_t>(v);
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_floating_point_v<T>)
      out += format_number(v[i]);
    else
      out += std::to_string(v[i]);
  }
  return out;
}

void add_solver(ConfigMap& m, const SolverConfig& s) {
  m["gd_max_iters"] = std::to_string(s.gd_max_iters);
  m["gd_backtrack"] = format_number(s.gd_backtrack);
  m["gd_armijo"] = format_number(s.gd_armijo);
  m["gd_tol"] = format_number(s.gd_tol);
  m["gd_restarts"] = std::to_string(s.gd_restarts);
  m["imputation"] = s.imputation == Imputation::kZero ? "zero" : "mean";
  m["eigenvalue_floor"] = format_number(s.eigenvalue_floor);
  m["norm_filter_threshold"] = format_number(s.norm_filter_threshold);
}

std::string flag(bool b) { return b ? "1" : "0"; }

}  // namespace

LinearityConfig linearity_config(const KeyValueConfig& kv, bool full_scale) {
  kv.check_keys(with_solver({"seed", "anchors", "tau", "bits", "trials", "input_dim", "rows", "noiseless",
                             "exposure_target"}));
  LinearityConfig c;
  if (full_scale) c.trials = 100;
  c.seed = read_seed(kv, c.seed);
  c.anchors = kv.get_indices("anchors", c.anchors);
  c.taus = kv.get_doubles("tau", c.taus);
  c.bits = static_cast<int>(kv.get_int("bits", c.bits));
  c.trials = static_cast<int>(kv.get_int("trials", c.trials));
  c.input_dim = kv.get_int("input_dim", c.input_dim);
  c.rows = kv.get_int("rows", c.rows);
  c.noiseless = kv.get_bool("noiseless", c.noiseless);
  c.exposure_target = kv.get_double("exposure_target", c.exposure_target);
  c.solver = read_solver(kv, c.solver);
  return c;
}

GoodBitsConfig goodbits_config(const KeyValueConfig& kv, bool full_scale) {
  kv.check_keys(with_solver({"seed", "anchors", "tau", "bits", "trials", "input_dim", "noiseless",
                             "exposure_target"}));
  GoodBitsConfig c;
  if (full_scale) c.trials = 1000;
  c.seed = read_seed(kv, c.seed);
  c.anchors = kv.get_indices("anchors", c.anchors);
  c.taus = kv.get_doubles("tau", c.taus);
  c.bits = static_cast<int>(kv.get_int("bits", c.bits));
  c.trials = static_cast<int>(kv.get_int("trials", c.trials));
  c.input_dim = kv.get_int("input_dim", c.input_dim);
  c.noiseless = kv.get_bool("noiseless", c.noiseless);
  c.exposure_target = kv.get_double("exposure_target", c.exposure_target);
  c.solver = read_solver(kv, c.solver);
  return c;
}

SrlsConfig srls_config(const KeyValueConfig& kv, bool full_scale) {
  kv.check_keys(with_solver({"seed", "anchors", "tau", "bits", "trials", "input_dim", "noiseless",
                             "exposure_target"}));
  SrlsConfig c;
  if (full_scale) c.trials = 1000;
  c.seed = read_seed(kv, c.seed);
  c.anchors = kv.get_indices("anchors", c.anchors);
  const std::vector<double> taus = kv.get_doubles("tau", {c.tau});
  if (taus.size() != 1) throw ConfigError(kv.source(), 0, "tau: srls-vs-mds takes a single value");
  c.tau = taus.front();
  c.bits = static_cast<int>(kv.get_int("bits", c.bits));
  c.trials = static_cast<int>(kv.get_int("trials", c.trials));
  c.input_dim = kv.get_int("input_dim", c.input_dim);
  c.noiseless = kv.get_bool("noiseless", c.noiseless);
  c.exposure_target = kv.get_double("exposure_target", c.exposure_target);
  c.solver = read_solver(kv, c.solver);
  return c;
}

namespace {
const std::set<std::string> kRsvdKeys{"seed",     "projections",      "matrix_rows", "matrix_cols",
                                      "planted",  "bits",             "tau",         "trials",
                                      "noiseless", "anchors",         "exposure_target", "digits",
                                      "images",   "digit_projections", "vectors",    "flip_probability"};
}

RsvdConfig rsvd_config(const KeyValueConfig& kv, bool full_scale) {
  kv.check_keys(with_solver(kRsvdKeys));
  RsvdConfig c;
  if (full_scale) c.matrix_cols = 10000;
  c.seed = read_seed(kv, c.seed);
  c.projections = kv.get_indices("projections", c.projections);
  c.matrix_rows = kv.get_int("matrix_rows", c.matrix_rows);
  c.matrix_cols = kv.get_int("matrix_cols", c.matrix_cols);
  c.planted_spectrum = kv.get_bool("planted", c.planted_spectrum);
  c.bits = static_cast<int>(kv.get_int("bits", c.bits));
  const std::vector<double> taus = kv.get_doubles("tau", {c.tau});
  if (taus.size() != 1) throw ConfigError(kv.source(), 0, "tau: rsvd takes a single value");
  c.tau = taus.front();
  c.trials = static_cast<int>(kv.get_int("trials", c.trials));
  c.noiseless = kv.get_bool("noiseless", c.noiseless);
  const std::vector<Index> anchors = kv.get_indices("anchors", {c.anchors});
  if (anchors.size() != 1) throw ConfigError(kv.source(), 0, "anchors: rsvd takes a single value");
  c.anchors = anchors.front();
  c.exposure_target = kv.get_double("exposure_target", c.exposure_target);
  c.solver = read_solver(kv, c.solver);
  return c;
}

DigitSvdConfig digit_svd_config(const KeyValueConfig& kv, bool full_scale) {
  kv.check_keys(with_solver(kRsvdKeys));
  DigitSvdConfig c;
  if (full_scale) {
    c.images = 500;
    c.projections = 500;
  }
  c.seed = read_seed(kv, c.seed);
  c.images = kv.get_int("images", c.images);
  c.projections = kv.get_int("digit_projections", c.projections);
  c.vectors = kv.get_int("vectors", c.vectors);
  c.bits = static_cast<int>(kv.get_int("bits", c.bits));
  const std::vector<Index> anchors = kv.get_indices("anchors", {c.anchors});
  if (anchors.size() != 1) throw ConfigError(kv.source(), 0, "anchors: rsvd takes a single value");
  c.anchors = anchors.front();
  c.flip_probability = kv.get_double("flip_probability", c.flip_probability);
  c.exposure_target = kv.get_double("exposure_target", c.exposure_target);
  c.solver = read_solver(kv, c.solver);
  return c;
}

ScalingExperimentConfig scaling_config(const KeyValueConfig& kv, bool full_scale) {
  kv.check_keys(with_solver({"seed", "anchors", "keep_probabilities", "bits", "trials", "noiseless"}));
  ScalingExperimentConfig c;
  if (full_scale) c.trials = 200;
  c.seed = read_seed(kv, c.seed);
  c.anchors = kv.get_indices("anchors", c.anchors);
  c.keep_probabilities = kv.get_doubles("keep_probabilities", c.keep_probabilities);
  c.bits = static_cast<int>(kv.get_int("bits", c.bits));
  c.trials = static_cast<int>(kv.get_int("trials", c.trials));
  c.noiseless = kv.get_bool("noiseless", c.noiseless);
  c.solver = read_solver(kv, c.solver);
  return c;
}

DesignRefsConfig design_refs_config(const KeyValueConfig& kv, bool full_scale) {
  kv.check_keys({"seed", "anchors", "input_dim", "flip_probability", "frames", "frame_density", "trials"});
  DesignRefsConfig c;
  if (full_scale) c.sets = 10000;
  c.seed = read_seed(kv, c.seed);
  const std::vector<Index> anchors = kv.get_indices("anchors", {c.anchors});
  if (anchors.size() != 1) throw ConfigError(kv.source(), 0, "anchors: design-refs takes a single value");
  c.anchors = anchors.front();
  c.input_dim = kv.get_int("input_dim", c.input_dim);
  c.flip_probability = kv.get_double("flip_probability", c.flip_probability);
  c.frames = kv.get_int("frames", c.frames);
  c.frame_density = kv.get_double("frame_density", c.frame_density);
  c.sets = static_cast<int>(kv.get_int("trials", c.sets));
  return c;
}

ConfigMap describe(const LinearityConfig& c) {
  ConfigMap m{{"experiment", "linearity"},
              {"seed", std::to_string(c.seed)},
              {"anchors", join(c.anchors)},
              {"tau", join(c.taus)},
              {"bits", std::to_string(c.bits)},
              {"trials", std::to_string(c.trials)},
              {"input_dim", std::to_string(c.input_dim)},
              {"rows", std::to_string(c.rows)},
              {"noiseless", flag(c.noiseless)},
              {"exposure_target", format_number(c.exposure_target)}};
  add_solver(m, c.solver);
  return m;
}

ConfigMap describe(const GoodBitsConfig& c) {
  ConfigMap m{{"experiment", "goodbits"},
              {"seed", std::to_string(c.seed)},
              {"anchors", join(c.anchors)},
              {"tau", join(c.taus)},
              {"bits", std::to_string(c.bits)},
              {"trials", std::to_string(c.trials)},
              {"input_dim", std::to_string(c.input_dim)},
              {"noiseless", flag(c.noiseless)},
              {"exposure_target", format_number(c.exposure_target)}};
  add_solver(m, c.solver);
  return m;
}

ConfigMap describe(const SrlsConfig& c) {
  ConfigMap m{{"experiment", "srls-vs-mds"},
              {"seed", std::to_string(c.seed)},
              {"anchors", join(c.anchors)},
              {"tau", format_number(c.tau)},
              {"bits", std::to_string(c.bits)},
              {"trials", std::to_string(c.trials)},
              {"input_dim", std::to_string(c.input_dim)},
              {"noiseless", flag(c.noiseless)},
              {"exposure_target", format_number(c.exposure_target)}};
  add_solver(m, c.solver);
  return m;
}

ConfigMap describe(const RsvdConfig& c) {
  ConfigMap m{{"experiment", "rsvd"},
              {"seed", std::to_string(c.seed)},
              {"projections", join(c.projections)},
              {"matrix_rows", std::to_string(c.matrix_rows)},
              {"matrix_cols", std::to_string(c.matrix_cols)},
              {"planted", flag(c.planted_spectrum)},
              {"bits", std::to_string(c.bits)},
              {"tau", format_number(c.tau)},
              {"trials", std::to_string(c.trials)},
              {"noiseless", flag(c.noiseless)},
              {"anchors", std::to_string(c.anchors)},
              {"exposure_target", format_number(c.exposure_target)}};
  add_solver(m, c.solver);
  return m;
}

ConfigMap describe(const DigitSvdConfig& c) {
  ConfigMap m{{"experiment", "rsvd-digits"},
              {"seed", std::to_string(c.seed)},
              {"images", std::to_string(c.images)},
              {"digit_projections", std::to_string(c.projections)},
              {"vectors", std::to_string(c.vectors)},
              {"bits", std::to_string(c.bits)},
              {"anchors", std::to_string(c.anchors)},
              {"flip_probability", format_number(c.flip_probability)},
              {"exposure_target", format_number(c.exposure_target)}};
  add_solver(m, c.solver);
  return m;
}

ConfigMap describe(const ScalingExperimentConfig& c) {
  ConfigMap m{{"experiment", "scaling"},
              {"seed", std::to_string(c.seed)},
              {"anchors", join(c.anchors)},
              {"keep_probabilities", join(c.keep_probabilities)},
              {"bits", std::to_string(c.bits)},
              {"trials", std::to_string(c.trials)},
              {"noiseless", flag(c.noiseless)}};
  add_solver(m, c.solver);
  return m;
}

ConfigMap describe(const DesignRefsConfig& c) {
  return {{"experiment", "design-refs"},
          {"seed", std::to_string(c.seed)},
          {"anchors", std::to_string(c.anchors)},
          {"input_dim", std::to_string(c.input_dim)},
          {"flip_probability", format_number(c.flip_probability)},
          {"frames", std::to_string(c.frames)},
          {"frame_density", format_number(c.frame_density)},
          {"trials", std::to_string(c.sets)}};
}

}  // namespace mpr

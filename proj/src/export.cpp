#include "mpr/export.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mpr {

std::string config_hash(const ConfigMap& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto feed = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& [key, value] : config) feed(key + "=" + value + "\n");
  return fmt::format("{:016x}", h);
}

std::string format_number(double value) { return fmt::format("{}", value); }

void write_table(std::ostream& os, const Table& table, const std::string& hash) {
  os << "# config_hash=" << hash << '\n';
  const auto line = [&os](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) {
    if (r.size() != table.header.size()) throw std::logic_error("table row width mismatch");
    line(r);
  }
}

Table to_table(const std::vector<LinearityRow>& rows) {
  Table t{{"anchors", "method", "tau", "mean_linearity_error", "std_error", "trials", "mean_retained_rows"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({std::to_string(r.anchors), r.method, format_number(r.tau), format_number(r.mean_error),
                      format_number(r.std_error), std::to_string(r.trials), format_number(r.retained_rows)});
  return t;
}

Table to_table(const std::vector<GoodBitsRow>& rows) {
  Table t{{"anchors", "method", "tau", "mean_good_bits", "std_error", "trials"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({std::to_string(r.anchors), r.method, format_number(r.tau), format_number(r.mean_good_bits),
                      format_number(r.std_error), std::to_string(r.trials)});
  return t;
}

Table to_table(const std::vector<SrlsRow>& rows) {
  Table t{{"anchors", "method", "mean_snr_db", "std_error", "trials"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({std::to_string(r.anchors), r.method, format_number(r.mean_snr_db),
                      format_number(r.std_error), std::to_string(r.trials)});
  return t;
}

Table to_table(const std::vector<RsvdRow>& rows) {
  Table t{{"projections", "method", "mean_abs_error", "median_abs_error", "trials"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({std::to_string(r.projections), r.method, format_number(r.mean_error),
                      format_number(r.median_error), std::to_string(r.trials)});
  return t;
}

Table to_table(const std::vector<ScalingExperimentRow>& rows) {
  Table t{{"keep_probability", "anchors", "mean_error", "std_error", "normalized_error", "trials"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({format_number(r.keep_probability), std::to_string(r.row.anchors),
                      format_number(r.row.mean_error), format_number(r.row.std_error),
                      format_number(r.row.normalized), std::to_string(r.row.trials)});
  return t;
}

Table to_table(const std::vector<DesignRefsRow>& rows) {
  Table t{{"set", "ok", "retries", "nested", "binary_differences"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({std::to_string(r.set), r.ok ? "1" : "0", std::to_string(r.retries), r.nested ? "1" : "0",
                      r.binary_differences ? "1" : "0"});
  return t;
}

void write_projections_csv(std::ostream& os, const RecoveredProjections& rp) {
  os << "row,frame,re,im,flag\n";
  for (Index m = 0; m < rp.rows(); ++m)
    for (Index s = 0; s < rp.frames(); ++s)
      os << m + 1 << ',' << s + 1 << ',' << format_number(rp.y(m, s).real()) << ','
         << format_number(rp.y(m, s).imag()) << ',' << static_cast<int>(rp.flags[static_cast<std::size_t>(m)])
         << '\n';
}

namespace {

nlohmann::ordered_json solver_json(const SolverConfig& cfg) {
  nlohmann::ordered_json j;
  j["gd_max_iters"] = cfg.gd_max_iters;
  j["gd_backtrack"] = cfg.gd_backtrack;
  j["gd_armijo"] = cfg.gd_armijo;
  j["gd_tol"] = cfg.gd_tol;
  j["gd_restarts"] = cfg.gd_restarts;
  j["imputation"] = cfg.imputation == Imputation::kZero ? "zero" : "mean";
  j["eigenvalue_floor"] = cfg.eigenvalue_floor;
  j["norm_filter_threshold"] = cfg.norm_filter_threshold;
  return j;
}

}  // namespace

std::string projections_sidecar_json(const SolverConfig& cfg,
                                     const std::map<std::string, std::uint64_t>& seeds) {
  nlohmann::ordered_json j;
  j["solver"] = solver_json(cfg);
  j["seeds"] = seeds;
  return j.dump(2) + "\n";
}

std::string rsvd_manifest_json(Index projections, Index anchors, const CameraConfig& camera,
                               const std::map<std::string, std::uint64_t>& seeds) {
  nlohmann::ordered_json cam;
  cam["bits"] = camera.bits;
  cam["exposure_gain"] = camera.exposure_gain;
  cam["sensitivity_threshold"] =
      camera.sensitivity_threshold ? nlohmann::ordered_json(*camera.sensitivity_threshold) : nullptr;
  cam["binary_mode"] = camera.binary_mode;
  cam["quantize"] = camera.quantize;
  cam["dark_level"] = camera.dark_level;
  nlohmann::ordered_json j;
  j["projections"] = projections;
  j["anchors"] = anchors;
  j["camera"] = cam;
  j["seeds"] = seeds;
  return j.dump(2) + "\n";
}

void write_matrix_csv(std::ostream& os, const Matrix& m) {
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) os << (c ? "," : "") << format_number(m(r, c));
    os << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << contents;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace mpr

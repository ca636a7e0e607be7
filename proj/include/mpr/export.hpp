#pragma once

#include "mpr/core.hpp"
#include "mpr/experiments.hpp"
#include "mpr/opusim.hpp"
#include "mpr/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace mpr {

/// Flat key=value description of a run. Ordered, so the hash is canonical.
using ConfigMap = std::map<std::string, std::string>;

/// 64-bit FNV-1a over "key=value\n" lines in key order, as 16 hex digits.
std::string config_hash(const ConfigMap& config);

/// Shortest round-trippable decimal for a double.
std::string format_number(double value);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// "# config_hash=<hash>", then the header, then the rows.
void write_table(std::ostream& os, const Table& table, const std::string& hash);

Table to_table(const std::vector<LinearityRow>& rows);
Table to_table(const std::vector<GoodBitsRow>& rows);
Table to_table(const std::vector<SrlsRow>& rows);
Table to_table(const std::vector<RsvdRow>& rows);
Table to_table(const std::vector<ScalingExperimentRow>& rows);
Table to_table(const std::vector<DesignRefsRow>& rows);

/// Columns: row, frame, re, im, flag (1-based row and frame).
void write_projections_csv(std::ostream& os, const RecoveredProjections& rp);

/// JSON object with the solver settings and the named seeds.
std::string projections_sidecar_json(const SolverConfig& cfg,
                                     const std::map<std::string, std::uint64_t>& seeds);

/// JSON manifest of an RSVD run.
std::string rsvd_manifest_json(Index projections, Index anchors, const CameraConfig& camera,
                               const std::map<std::string, std::uint64_t>& seeds);

/// Plain comma-separated matrix, one line per row.
void write_matrix_csv(std::ostream& os, const Matrix& m);

/// Writes `contents` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace mpr

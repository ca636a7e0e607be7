#pragma once

#include "mpr/core.hpp"
#include "mpr/metrics.hpp"
#include "mpr/opusim.hpp"
#include "mpr/rsvd.hpp"
#include "mpr/solver.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

// Simulation drivers behind the command-line subcommands. Every driver is a
// pure function of its config: the same config and seed give identical rows.

namespace mpr {

/// Camera thresholds are given as a list; a negative value means "no mask".
std::optional<double> threshold_from_setting(double tau);

struct LinearityConfig {
  std::uint64_t seed = 1;
  std::vector<Index> anchors{3, 6, 9, 12, 15};
  std::vector<double> taus{0.0, 6.0};
  int bits = 8;
  int trials = 10;
  Index input_dim = 4096;
  Index rows = 100;
  /// Ideal sensor: no quantization, no threshold, unit gain.
  bool noiseless = false;
  double exposure_target = 250.0;
  SolverConfig solver{.imputation = Imputation::kZero};
};

struct LinearityRow {
  Index anchors = 0;
  std::string method;  // "MDS" or "MDS-GD"
  double tau = 0.0;
  double mean_error = 0.0;
  double std_error = 0.0;
  int trials = 0;
  double retained_rows = 0.0;  // mean over trials
};

std::vector<LinearityRow> run_linearity(const LinearityConfig& cfg);

struct GoodBitsConfig {
  std::uint64_t seed = 2;
  std::vector<Index> anchors{2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
  std::vector<double> taus{0.0, 6.0};
  int bits = 8;
  int trials = 100;
  Index input_dim = 100;
  bool noiseless = false;
  double exposure_target = 250.0;
  SolverConfig solver{.imputation = Imputation::kZero};
};

struct GoodBitsRow {
  Index anchors = 0;
  std::string method;  // "raw", "MDS" or "MDS-GD"
  double tau = 0.0;
  double mean_good_bits = 0.0;
  double std_error = 0.0;
  int trials = 0;
};

std::vector<GoodBitsRow> run_goodbits(const GoodBitsConfig& cfg);

struct SrlsConfig {
  std::uint64_t seed = 3;
  std::vector<Index> anchors{3, 5, 7, 9, 11, 13, 15};
  double tau = -1.0;
  int bits = 8;
  int trials = 100;
  Index input_dim = 4096;
  bool noiseless = false;
  double exposure_target = 250.0;
  SolverConfig solver{.gd_max_iters = 0, .imputation = Imputation::kZero};
};

struct SrlsRow {
  Index anchors = 0;
  std::string method;  // "SR-LS-known-anchors" or "MDS-joint"
  double mean_snr_db = 0.0;
  double std_error = 0.0;
  int trials = 0;
};

std::vector<SrlsRow> run_srls_vs_mds(const SrlsConfig& cfg);

struct RsvdConfig {
  std::uint64_t seed = 4;
  std::vector<Index> projections{2, 5, 10, 20};
  Index matrix_rows = 10;
  Index matrix_cols = 1000;
  /// Planted spectrum instead of random binary entries.
  bool planted_spectrum = false;
  int bits = 8;
  double tau = -1.0;
  int trials = 10;
  bool noiseless = false;
  Index anchors = 5;
  double exposure_target = 250.0;
  SolverConfig solver{};
};

struct RsvdRow {
  Index projections = 0;
  std::string method;  // "prototype" or "opu"
  double mean_error = 0.0;    // mean over trials of the mean absolute entry error
  double median_error = 0.0;
  int trials = 0;
};

struct RsvdRun {
  std::vector<RsvdRow> rows;
  /// Factors from the first trial at the largest projection count.
  SvdFactors prototype_factors;
  SvdFactors opu_factors;
  RecoveredProjections opu_projections;
  /// Camera and seeds behind opu_factors.
  CameraConfig opu_camera;
  std::uint64_t opu_seed = 0;
};

RsvdRun run_rsvd(const RsvdConfig& cfg);

/// Random binary matrix (entries 1 with probability `density`).
Matrix random_binary_matrix(Index rows, Index cols, double density, std::uint64_t seed);
/// rows x cols matrix U diag(spectrum) V^T with random orthonormal U, V.
Matrix planted_spectrum_matrix(Index rows, Index cols, const Vector& spectrum, std::uint64_t seed);
/// Binarized 28x28 stroke images standing in for thresholded handwritten digits.
Matrix digit_like_matrix(Index count, std::uint64_t seed);

struct DigitSvdConfig {
  std::uint64_t seed = 5;
  Index images = 100;
  Index projections = 50;
  Index vectors = 7;
  int bits = 8;
  Index anchors = 5;
  double flip_probability = 0.2;
  double exposure_target = 250.0;
  SolverConfig solver{};
};

struct DigitSvdResult {
  Vector relative_errors;  // per leading right singular vector
  SvdFactors opu_factors;
};

/// Leading right singular vectors of a binary digit-like matrix from a
/// binary-input device versus a dense SVD.
DigitSvdResult run_digit_svd(const DigitSvdConfig& cfg);

struct ScalingExperimentConfig {
  std::uint64_t seed = 6;
  std::vector<double> keep_probabilities{0.6, 0.9};
  std::vector<Index> anchors{10, 20, 40, 80};
  int bits = 8;
  int trials = 50;
  bool noiseless = false;
  SolverConfig solver{.gd_restarts = 10};
};

struct ScalingExperimentRow {
  double keep_probability = 0.0;
  ScalingRow row;
};

std::vector<ScalingExperimentRow> run_scaling(const ScalingExperimentConfig& cfg);

struct DesignRefsConfig {
  std::uint64_t seed = 7;
  Index input_dim = 4096;
  Index anchors = 9;
  double flip_probability = 0.2;
  Index frames = 3;
  double frame_density = 0.3;
  int sets = 1000;
};

struct DesignRefsRow {
  int set = 0;
  int retries = 0;
  bool ok = false;
  bool nested = false;
  bool binary_differences = false;
};

struct DesignRefsRun {
  std::vector<DesignRefsRow> rows;
  std::optional<ReferenceSet> first;
};

DesignRefsRun run_design_refs(const DesignRefsConfig& cfg);

/// Nesting and binary-difference invariants of a reference set for the given frames.
bool references_nested(const ReferenceSet& refs);
bool references_binary_differences(const ReferenceSet& refs, std::span<const Frame> frames);

}  // namespace mpr

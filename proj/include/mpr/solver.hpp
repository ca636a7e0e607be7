#pragma once

#include "mpr/core.hpp"

#include <span>
#include <vector>

namespace mpr {

enum class Imputation { kObservedMean, kZero };

struct SolverConfig {
  /// 0 disables refinement (classical MDS only).
  int gd_max_iters = 200;
  /// Backtracking shrink factor and Armijo sufficient-decrease constant.
  double gd_backtrack = 0.5;
  double gd_armijo = 1e-4;
  /// Stop once an accepted step lowers the stress by less than this fraction.
  double gd_tol = 1e-9;
  Imputation imputation = Imputation::kObservedMean;
  /// Eigenvalues of the centered Gram matrix below this are clamped to it.
  double eigenvalue_floor = 0.0;
  /// Rows whose recovered point has a smaller modulus (camera units) in any
  /// frame are flagged.
  double norm_filter_threshold = 2.0;
  /// Extra gradient descent runs from random starts; the lowest stress wins.
  int gd_restarts = 0;
};

void validate_solver_config(const SolverConfig& cfg);

/// Copy of d2 with masked off-diagonal entries filled per the imputation rule.
Matrix impute_missing(const DistanceObservation& obs, Imputation rule);

/// Classical MDS in the plane: top-2 eigenpairs of -1/2 J D J. Each
/// eigenvector's largest-magnitude entry is made positive.
PointSet classical_mds(const DistanceObservation& obs, const SolverConfig& cfg = {});

struct StressEvaluation {
  double value = 0.0;
  PointSet gradient;
};

/// f(Z) = || W .* (D - K(Z^T Z)) ||_F^2 and its gradient with respect to Z.
StressEvaluation squared_stress(const PointSet& points, const DistanceObservation& obs);
double squared_stress_value(const PointSet& points, const DistanceObservation& obs);

struct RefineResult {
  PointSet points;
  /// Stress before the first step, then after every accepted step.
  std::vector<double> stress_trace;
  int iterations = 0;
};

/// Gradient descent with Armijo backtracking on the masked squared stress.
/// Never returns a point set with higher stress than `init`.
RefineResult refine_gd(const DistanceObservation& obs, const PointSet& init,
                       const SolverConfig& cfg = {});

/// refine_gd from `init`, then from cfg.gd_restarts random configurations of
/// the same spread. Starts are seeded from the row and frame of `obs`.
RefineResult refine_multistart(const DistanceObservation& obs, const PointSet& init,
                               const SolverConfig& cfg = {});

/// Shifts every column so the last one (the origin anchor) lands at (0, 0).
PointSet center_to_origin(const PointSet& points);

struct ProcrustesResult {
  Eigen::Matrix2d rotation;
  /// The cross-covariance had (numerically) rank < 2, so R is not unique.
  bool degenerate = false;
};

/// Orthogonal R minimizing ||R * current - reference||_F. Reflections are
/// allowed (det R = -1 corresponds to conjugation).
ProcrustesResult procrustes(const Eigen::Matrix2Xd& reference, const Eigen::Matrix2Xd& current);

/// Localizes one point from squared-range measurements to known anchors by
/// minimizing sum_q (||u - a_q||^2 - d_q^2)^2. Needs at least 3 anchors.
Eigen::Vector2d srls_localize(const Eigen::Matrix2Xd& anchors, const Vector& distances);
double srls_objective(const Eigen::Matrix2Xd& anchors, const Vector& distances,
                      const Eigen::Vector2d& point);

/// Per-frame localization of one row: MDS, optional refinement, translation
/// to the origin anchor.
PointSet localize_frame(const DistanceObservation& obs, const SolverConfig& cfg);

struct RowSolution {
  std::vector<PointSet> frames;  // aligned to frame 1
  std::uint8_t flags = kRowOk;
};

/// Solves one row over all frames; frame 1 fixes the gauge.
RowSolution solve_row(std::span<const DistanceObservation> frames, const SolverConfig& cfg);

/// observations[s][m]: frame s, row m. Rows are solved independently and in
/// parallel.
RecoveredProjections solve_mpr(const std::vector<std::vector<DistanceObservation>>& observations,
                               const SolverConfig& cfg = {});

}  // namespace mpr

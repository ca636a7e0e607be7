#include "mpr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mpr {

void validate_solver_config(const SolverConfig& cfg) {
  if (cfg.gd_max_iters < 0) throw std::invalid_argument("gd_max_iters must be >= 0");
  if (cfg.gd_restarts < 0) throw std::invalid_argument("gd_restarts must be >= 0");
  if (!(cfg.gd_backtrack > 0.0 && cfg.gd_backtrack < 1.0))
    throw std::invalid_argument("gd_backtrack must lie in (0, 1)");
  if (!(cfg.gd_armijo > 0.0 && cfg.gd_armijo < 1.0))
    throw std::invalid_argument("gd_armijo must lie in (0, 1)");
  if (cfg.gd_tol < 0.0) throw std::invalid_argument("gd_tol must be >= 0");
  if (cfg.norm_filter_threshold < 0.0) throw std::invalid_argument("norm filter threshold must be >= 0");
}

Matrix impute_missing(const DistanceObservation& obs, Imputation rule) {
  const Index q = obs.size();
  double fill = 0.0;
  if (rule == Imputation::kObservedMean) {
    double sum = 0.0;
    Index count = 0;
    for (Index j = 0; j < q; ++j)
      for (Index l = j + 1; l < q; ++l)
        if (obs.mask(j, l) != 0.0) {
          sum += obs.d2(j, l);
          ++count;
        }
    fill = count > 0 ? sum / static_cast<double>(count) : 0.0;
  }
  Matrix d = obs.d2;
  for (Index j = 0; j < q; ++j)
    for (Index l = 0; l < q; ++l)
      if (j != l && obs.mask(j, l) == 0.0) d(j, l) = fill;
  return d;
}

PointSet classical_mds(const DistanceObservation& obs, const SolverConfig& cfg) {
  const Index q = obs.size();
  PointSet points = PointSet::Zero(2, q);
  if (q == 0) return points;
  const Matrix g = centered_gram(impute_missing(obs, cfg.imputation));
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g);
  if (eig.info() != Eigen::Success) throw std::runtime_error("classical_mds: eigendecomposition failed");
  // Eigen sorts ascending; walk from the top.
  for (Index k = 0; k < std::min<Index>(2, q); ++k) {
    const Index idx = q - 1 - k;
    const double lambda = std::max(eig.eigenvalues()(idx), cfg.eigenvalue_floor);
    if (lambda <= 0.0) continue;
    Vector v = eig.eigenvectors().col(idx);
    Index pivot = 0;
    v.cwiseAbs().maxCoeff(&pivot);
    if (v(pivot) < 0.0) v = -v;
    points.row(k) = std::sqrt(lambda) * v.transpose();
  }
  return points;
}

namespace {

// Residual weights C = W .* (D - K(Z^T Z)).
Matrix stress_residual(const PointSet& points, const DistanceObservation& obs) {
  const Matrix model = kappa_operator(points.transpose() * points);
  return obs.mask.cwiseProduct(obs.d2 - model);
}

}  // namespace

double squared_stress_value(const PointSet& points, const DistanceObservation& obs) {
  if (points.cols() != obs.size()) throw std::invalid_argument("point count does not match observation");
  return stress_residual(points, obs).squaredNorm();
}

StressEvaluation squared_stress(const PointSet& points, const DistanceObservation& obs) {
  if (points.cols() != obs.size()) throw std::invalid_argument("point count does not match observation");
  const Matrix c = stress_residual(points, obs);
  StressEvaluation out;
  out.value = c.squaredNorm();
  // d/dz_i = -8 sum_j C_ij (z_i - z_j)
  Matrix laplacian = -c;
  laplacian.diagonal() += c.rowwise().sum();
  out.gradient = -8.0 * points * laplacian;
  return out;
}

RefineResult refine_gd(const DistanceObservation& obs, const PointSet& init, const SolverConfig& cfg) {
  validate_solver_config(cfg);
  RefineResult result;
  result.points = init;
  StressEvaluation current = squared_stress(init, obs);
  result.stress_trace.push_back(current.value);

  const double init_scale = std::max(init.norm(), 1.0);
  double step = -1.0;
  for (int it = 0; it < cfg.gd_max_iters; ++it) {
    const double grad_sq = current.gradient.squaredNorm();
    if (current.value == 0.0 || grad_sq == 0.0) break;
    if (step < 0.0) step = 0.1 * init_scale / std::sqrt(grad_sq);
    else step /= cfg.gd_backtrack;  // let the step grow back after easy iterations

    const double min_step = step * 1e-30;
    PointSet trial;
    double trial_value = std::numeric_limits<double>::infinity();
    while (step > min_step) {
      trial = result.points - step * current.gradient;
      trial_value = squared_stress_value(trial, obs);
      if (trial_value <= current.value - cfg.gd_armijo * step * grad_sq) break;
      step *= cfg.gd_backtrack;
    }
    if (!(trial_value < current.value)) break;  // line search could not improve

    const double decrease = (current.value - trial_value) / current.value;
    result.points = trial;
    current = squared_stress(trial, obs);
    result.stress_trace.push_back(current.value);
    result.iterations = it + 1;
    if (decrease < cfg.gd_tol) break;
  }
  return result;
}

PointSet center_to_origin(const PointSet& points) {
  if (points.cols() == 0) return points;
  const Eigen::Vector2d origin = points.col(points.cols() - 1);
  PointSet out = points.colwise() - origin;
  out.col(out.cols() - 1).setZero();
  return out;
}

ProcrustesResult procrustes(const Eigen::Matrix2Xd& reference, const Eigen::Matrix2Xd& current) {
  if (reference.cols() != current.cols() || reference.cols() < 2)
    throw std::invalid_argument("procrustes needs two equally sized sets of at least 2 points");
  const Eigen::Matrix2d cross = current * reference.transpose();
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  ProcrustesResult out;
  out.rotation = svd.matrixV() * svd.matrixU().transpose();
  const auto& s = svd.singularValues();
  out.degenerate = !(s(0) > 0.0) || s(1) <= 1e-10 * s(0);
  return out;
}

RefineResult refine_multistart(const DistanceObservation& obs, const PointSet& init, const SolverConfig& cfg) {
  RefineResult best = refine_gd(obs, init, cfg);
  if (cfg.gd_restarts == 0) return best;
  const Index q = init.cols();
  const double spread = std::max(init.norm() / std::sqrt(static_cast<double>(q)), 1.0);
  Rng rng(derive_seed(static_cast<std::uint64_t>(obs.row), static_cast<std::uint64_t>(obs.frame)));
  std::normal_distribution<double> gauss(0.0, spread);
  for (int r = 0; r < cfg.gd_restarts; ++r) {
    PointSet start(2, q);
    for (Index c = 0; c < q; ++c) start.col(c) = Eigen::Vector2d(gauss(rng), gauss(rng));
    RefineResult candidate = refine_gd(obs, start, cfg);
    if (candidate.stress_trace.back() < best.stress_trace.back()) best = std::move(candidate);
  }
  return best;
}

PointSet localize_frame(const DistanceObservation& obs, const SolverConfig& cfg) {
  PointSet points = classical_mds(obs, cfg);
  if (cfg.gd_max_iters > 0) points = refine_multistart(obs, points, cfg).points;
  return center_to_origin(points);
}

RowSolution solve_row(std::span<const DistanceObservation> frames, const SolverConfig& cfg) {
  if (frames.empty()) throw std::invalid_argument("solve_row needs at least one frame");
  const Index q = frames.front().size();
  if (q < 3) throw std::invalid_argument("at least 3 points (2 anchors) are needed per row");
  RowSolution out;
  out.frames.reserve(frames.size());
  for (std::size_t s = 0; s < frames.size(); ++s) {
    const auto& obs = frames[s];
    if (obs.size() != q) throw std::invalid_argument("all frames of a row need the same anchor count");
    if (!obs.localizable()) out.flags |= kRowUnlocalizable;
    PointSet points = localize_frame(obs, cfg);
    if (s > 0) {
      const auto& ref = out.frames.front();
      const ProcrustesResult align =
          procrustes(ref.rightCols(q - 1), points.rightCols(q - 1));
      if (align.degenerate) out.flags |= kRowDegenerateAlignment;
      points = align.rotation * points;
    }
    if (points.col(0).norm() < cfg.norm_filter_threshold) out.flags |= kRowSmallNorm;
    out.frames.push_back(std::move(points));
  }
  return out;
}

RecoveredProjections solve_mpr(const std::vector<std::vector<DistanceObservation>>& observations,
                               const SolverConfig& cfg) {
  validate_solver_config(cfg);
  if (observations.empty()) throw std::invalid_argument("solve_mpr needs at least one frame");
  const auto rows = static_cast<Index>(observations.front().size());
  for (const auto& frame : observations)
    if (static_cast<Index>(frame.size()) != rows)
      throw std::invalid_argument("every frame needs the same number of rows");
  const auto nframes = static_cast<Index>(observations.size());

  RecoveredProjections out;
  out.y = ComplexMatrix::Zero(rows, nframes);
  out.flags.assign(static_cast<std::size_t>(rows), kRowOk);
  parallel_for(rows, [&](Index m) {
    std::vector<DistanceObservation> row;
    row.reserve(observations.size());
    for (const auto& frame : observations) row.push_back(frame[static_cast<std::size_t>(m)]);
    const RowSolution sol = solve_row(row, cfg);
    for (Index s = 0; s < nframes; ++s) out.y(m, s) = to_complex(sol.frames[static_cast<std::size_t>(s)], 0);
    out.flags[static_cast<std::size_t>(m)] = sol.flags;
  });
  return out;
}

}  // namespace mpr
